"""Sparse complex vectors and operators over named tensor dimensions.

States live in an ordered product of named dimensions (grid column, grid
row, direction, polarization, ...).  Amplitudes are stored in a dict keyed
by a single packed integer (row-major strides over the dimension sizes), so
a state in a nominally billion-dimensional product space only pays for its
nonzero entries.  Dimension identity is semantic: operators check name,
size, and coordinate labels at application time, which catches transposed
or mismatched axes that positional indexing would let through.

Amplitudes with magnitude below ``PRUNE_EPS`` are dropped on construction,
so destructive interference leaves no numerical residue behind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

PRUNE_EPS = 1e-12


@dataclass(frozen=True)
class Dimension:
    """A named axis with labeled coordinates, optionally bound to a particle."""

    name: str
    labels: tuple[str, ...]
    particle: int | None = None

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError(f"dimension {self.name!r} has no coordinates")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"dimension {self.name!r} has duplicate labels")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def key(self) -> str:
        """Unique handle inside a vector: base name plus particle tag."""
        if self.particle is None:
            return self.name
        return f"{self.name}@{self.particle}"

    def tagged(self, particle: int | None) -> "Dimension":
        return Dimension(self.name, self.labels, particle)

    def compatible(self, other: "Dimension") -> bool:
        """Same semantic axis: equal name and labels, particle tag aside."""
        return self.name == other.name and self.labels == other.labels


def _strides(dims: Sequence[Dimension]) -> tuple[int, ...]:
    strides = [1] * len(dims)
    acc = 1
    for i in range(len(dims) - 1, -1, -1):
        strides[i] = acc
        acc *= dims[i].size
    return tuple(strides)


def _total_size(dims: Sequence[Dimension]) -> int:
    acc = 1
    for d in dims:
        acc *= d.size
    return acc


def _clean(entries: Mapping[int, complex]) -> dict[int, complex]:
    out: dict[int, complex] = {}
    for key, amp in entries.items():
        z = complex(amp)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"non-finite amplitude {z!r} at key {key}")
        if abs(z) >= PRUNE_EPS:
            out[key] = z
    return out


class SparseVector:
    """Sparse state vector over an ordered tuple of named dimensions."""

    __slots__ = ("dims", "strides", "entries")

    def __init__(
        self,
        dims: Iterable[Dimension],
        entries: Mapping[int, complex] | None = None,
        *,
        prune: bool = True,
    ) -> None:
        self.dims: tuple[Dimension, ...] = tuple(dims)
        keys = [d.key for d in self.dims]
        if len(set(keys)) != len(keys):
            raise ValueError(f"duplicate dimension keys in {keys}")
        self.strides: tuple[int, ...] = _strides(self.dims)
        if entries is None:
            self.entries: dict[int, complex] = {}
        elif prune:
            self.entries = _clean(entries)
        else:
            self.entries = dict(entries)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def basis_state(cls, dims: Iterable[Dimension], coords: Sequence[int]) -> "SparseVector":
        v = cls(dims)
        v.entries[v.key_of(coords)] = 1.0 + 0.0j
        return v

    @classmethod
    def from_components(
        cls, dims: Iterable[Dimension], components: Mapping[tuple[int, ...], complex]
    ) -> "SparseVector":
        v = cls(dims)
        raw = {v.key_of(coords): amp for coords, amp in components.items()}
        v.entries = _clean(raw)
        return v

    # -- indexing ------------------------------------------------------------

    def key_of(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.dims):
            raise ValueError(f"expected {len(self.dims)} coordinates, got {len(coords)}")
        key = 0
        for c, d, s in zip(coords, self.dims, self.strides):
            if not 0 <= c < d.size:
                raise ValueError(f"coordinate {c} out of range for {d.key}")
            key += c * s
        return key

    def coords_of(self, key: int) -> tuple[int, ...]:
        return tuple((key // s) % d.size for d, s in zip(self.dims, self.strides))

    def labels_of(self, key: int) -> tuple[str, ...]:
        return tuple(d.labels[c] for d, c in zip(self.dims, self.coords_of(key)))

    def dim_index(self, key: str) -> int:
        for i, d in enumerate(self.dims):
            if d.key == key:
                return i
        raise KeyError(f"no dimension {key!r} in {[d.key for d in self.dims]}")

    def amplitude(self, coords: Sequence[int]) -> complex:
        return self.entries.get(self.key_of(coords), 0.0 + 0.0j)

    def items(self) -> Iterator[tuple[int, complex]]:
        return iter(self.entries.items())

    # -- algebra ---------------------------------------------------------------

    def norm_sq(self) -> float:
        return sum((z.real * z.real + z.imag * z.imag) for z in self.entries.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def is_zero(self) -> bool:
        return not self.entries

    def scaled(self, factor: complex) -> "SparseVector":
        return SparseVector(
            self.dims, {k: factor * z for k, z in self.entries.items()}
        )

    def normalized(self) -> "SparseVector":
        n = self.norm()
        if n < PRUNE_EPS:
            raise ValueError("cannot normalize a numerically zero vector")
        return self.scaled(1.0 / n)

    def _require_same_space(self, other: "SparseVector") -> None:
        if self.dims != other.dims:
            raise ValueError(
                f"dimension mismatch: {[d.key for d in self.dims]} "
                f"vs {[d.key for d in other.dims]}"
            )

    def __add__(self, other: "SparseVector") -> "SparseVector":
        self._require_same_space(other)
        out = dict(self.entries)
        for k, z in other.entries.items():
            out[k] = out.get(k, 0.0) + z
        return SparseVector(self.dims, out)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return self + other.scaled(-1.0)

    def __repr__(self) -> str:
        keys = ",".join(d.key for d in self.dims)
        return f"SparseVector([{keys}], nnz={len(self.entries)})"


def tensor_product(a: SparseVector, b: SparseVector) -> SparseVector:
    """Product state a ⊗ b; the dimension keys must be disjoint."""
    overlap = {d.key for d in a.dims} & {d.key for d in b.dims}
    if overlap:
        raise ValueError(f"tensor product with shared dimensions {sorted(overlap)}")
    b_total = _total_size(b.dims)
    out: dict[int, complex] = {}
    for ka, za in a.entries.items():
        base = ka * b_total
        for kb, zb in b.entries.items():
            out[base + kb] = za * zb
    return SparseVector(a.dims + b.dims, out)


def inner_product(a: SparseVector, b: SparseVector) -> complex:
    """⟨a|b⟩ with conjugation on a; both vectors over the identical space."""
    a._require_same_space(b)
    if len(a.entries) > len(b.entries):
        return sum(
            (a.entries[k].conjugate() * zb for k, zb in b.entries.items() if k in a.entries),
            0.0 + 0.0j,
        )
    return sum(
        (za.conjugate() * b.entries[k] for k, za in a.entries.items() if k in b.entries),
        0.0 + 0.0j,
    )


def partial_inner(bra: SparseVector, v: SparseVector) -> SparseVector:
    """Contract ⟨bra| against a subset of v's dimensions, returning the rest.

    The bra's dimensions are matched against v by key and must be
    semantically compatible.  Used for destructive measurement outcomes and
    for conditioning multi-photon states on single-photon vectors.
    """
    positions = []
    for d in bra.dims:
        i = v.dim_index(d.key)
        if not d.compatible(v.dims[i]):
            raise ValueError(f"incompatible dimension {d.key!r}")
        positions.append(i)
    pos_set = set(positions)
    kept = [i for i in range(len(v.dims)) if i not in pos_set]
    new_dims = tuple(v.dims[i] for i in kept)
    new_strides = _strides(new_dims)

    v_sizes = [d.size for d in v.dims]
    out: dict[int, complex] = {}
    for key, amp in v.entries.items():
        coords = [(key // s) % n for s, n in zip(v.strides, v_sizes)]
        sub = 0
        for bs, p in zip(bra.strides, positions):
            sub += coords[p] * bs
        bz = bra.entries.get(sub)
        if bz is None:
            continue
        nk = 0
        for ns, p in zip(new_strides, kept):
            nk += coords[p] * ns
        out[nk] = out.get(nk, 0.0) + bz.conjugate() * amp
    return SparseVector(new_dims, out)


def subsystem_purity(v: SparseVector, particle: int) -> float:
    """Tr[ρ²] of one particle's reduced density matrix, from a normalized pure state."""
    n2 = v.norm_sq()
    if abs(n2 - 1.0) > 1e-6:
        raise ValueError(f"state not normalized (norm² = {n2!r})")
    ppos = [i for i, d in enumerate(v.dims) if d.particle == particle]
    if not ppos:
        raise ValueError(f"no dimensions tagged with particle {particle}")
    rest = [i for i in range(len(v.dims)) if i not in ppos]

    v_sizes = [d.size for d in v.dims]
    part_strides = _strides([v.dims[i] for i in ppos])
    rest_strides = _strides([v.dims[i] for i in rest])

    # Group amplitudes as vectors over the complement, indexed by the
    # particle's own coordinates; ρ entries are overlaps of those vectors.
    groups: dict[int, dict[int, complex]] = {}
    for key, amp in v.entries.items():
        coords = [(key // s) % n for s, n in zip(v.strides, v_sizes)]
        pk = sum(coords[i] * s for i, s in zip(ppos, part_strides))
        rk = sum(coords[i] * s for i, s in zip(rest, rest_strides))
        groups.setdefault(pk, {})[rk] = amp

    purity = 0.0
    support = list(groups)
    for i in support:
        gi = groups[i]
        for j in support:
            gj = groups[j]
            small, big = (gi, gj) if len(gi) <= len(gj) else (gj, gi)
            rho_ij = 0.0 + 0.0j
            for rk, z in small.items():
                w = big.get(rk)
                if w is not None:
                    if small is gi:
                        rho_ij += z * w.conjugate()
                    else:
                        rho_ij += w * z.conjugate()
            purity += rho_ij.real * rho_ij.real + rho_ij.imag * rho_ij.imag
    return purity


class SparseOperator:
    """Sparse linear map between named-dimension spaces, stored by columns."""

    __slots__ = ("out_dims", "in_dims", "out_strides", "in_strides", "cols")

    def __init__(
        self,
        out_dims: Iterable[Dimension],
        in_dims: Iterable[Dimension],
        cols: Mapping[int, Mapping[int, complex]] | None = None,
        *,
        prune: bool = True,
    ) -> None:
        self.out_dims: tuple[Dimension, ...] = tuple(out_dims)
        self.in_dims: tuple[Dimension, ...] = tuple(in_dims)
        self.out_strides = _strides(self.out_dims)
        self.in_strides = _strides(self.in_dims)
        self.cols: dict[int, dict[int, complex]] = {}
        if cols:
            for ik, col in cols.items():
                cc = _clean(col) if prune else dict(col)
                if cc:
                    self.cols[ik] = cc

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_entries(
        cls,
        out_dims: Iterable[Dimension],
        in_dims: Iterable[Dimension],
        entries: Mapping[tuple[tuple[int, ...], tuple[int, ...]], complex],
    ) -> "SparseOperator":
        op = cls(out_dims, in_dims)
        for (oc, ic), amp in entries.items():
            ok = sum(c * s for c, s in zip(oc, op.out_strides))
            ik = sum(c * s for c, s in zip(ic, op.in_strides))
            z = complex(amp)
            if abs(z) >= PRUNE_EPS:
                op.cols.setdefault(ik, {})[ok] = op.cols.get(ik, {}).get(ok, 0.0) + z
        return op

    @classmethod
    def from_matrix(
        cls,
        out_dims: Iterable[Dimension],
        in_dims: Iterable[Dimension],
        rows: Sequence[Sequence[complex]],
    ) -> "SparseOperator":
        """Build from a dense row-major matrix in packed-index order."""
        op = cls(out_dims, in_dims)
        n_out = _total_size(op.out_dims)
        n_in = _total_size(op.in_dims)
        if len(rows) != n_out or any(len(r) != n_in for r in rows):
            raise ValueError(f"matrix shape must be {n_out}×{n_in}")
        for ok, row in enumerate(rows):
            for ik, amp in enumerate(row):
                z = complex(amp)
                if abs(z) >= PRUNE_EPS:
                    op.cols.setdefault(ik, {})[ok] = z
        return op

    @classmethod
    def identity(cls, dims: Iterable[Dimension]) -> "SparseOperator":
        dims = tuple(dims)
        op = cls(dims, dims)
        for k in range(_total_size(dims)):
            op.cols[k] = {k: 1.0 + 0.0j}
        return op

    # -- inspection --------------------------------------------------------------

    def entry_items(self) -> Iterator[tuple[int, int, complex]]:
        for ik, col in self.cols.items():
            for ok, z in col.items():
                yield ok, ik, z

    def entry(self, out_coords: Sequence[int], in_coords: Sequence[int]) -> complex:
        ik = sum(c * s for c, s in zip(in_coords, self.in_strides))
        ok = sum(c * s for c, s in zip(out_coords, self.out_strides))
        return self.cols.get(ik, {}).get(ok, 0.0 + 0.0j)

    def out_labels(self, key: int) -> tuple[str, ...]:
        return tuple(
            d.labels[(key // s) % d.size]
            for d, s in zip(self.out_dims, self.out_strides)
        )

    def in_labels(self, key: int) -> tuple[str, ...]:
        return tuple(
            d.labels[(key // s) % d.size]
            for d, s in zip(self.in_dims, self.in_strides)
        )

    # -- algebra ---------------------------------------------------------------

    def apply(self, v: SparseVector, on: Sequence[str] | None = None) -> SparseVector:
        """Apply to v, acting on the named target dimensions.

        ``on`` lists v's dimension keys positionally matched to in_dims;
        omitted, the operator must span v's full space in order.  Each
        target must be semantically compatible with the corresponding
        input dimension, and output sizes must equal input sizes.
        """
        if on is None:
            on = [d.key for d in self.in_dims]
        if len(on) != len(self.in_dims):
            raise ValueError(f"expected {len(self.in_dims)} target dims, got {len(on)}")
        positions = []
        for key_name, din, dout in zip(on, self.in_dims, self.out_dims):
            i = v.dim_index(key_name)
            if not din.compatible(v.dims[i]):
                raise ValueError(
                    f"operator input {din.name!r}{din.labels} does not match "
                    f"dimension {key_name!r} of the vector"
                )
            if dout.size != din.size:
                raise ValueError("apply() requires equal input/output sizes per axis")
            positions.append(i)

        # Replace target dims when the operator relabels them (basis changes).
        new_dims = list(v.dims)
        changed = False
        for p, dout in zip(positions, self.out_dims):
            if v.dims[p].labels != dout.labels or v.dims[p].name != dout.name:
                new_dims[p] = dout.tagged(v.dims[p].particle)
                changed = True

        extract = [
            (v.strides[p], v.dims[p].size, s_in)
            for p, s_in in zip(positions, self.in_strides)
        ]
        emit = [
            (s_out, d_out.size, v.strides[p])
            for p, s_out, d_out in zip(positions, self.out_strides, self.out_dims)
        ]
        out: dict[int, complex] = {}
        for key, amp in v.entries.items():
            sub = 0
            base = key
            for vs, size, s_in in extract:
                c = (key // vs) % size
                sub += c * s_in
                base -= c * vs
            col = self.cols.get(sub)
            if col is None:
                continue
            for osub, coeff in col.items():
                nk = base
                for s_out, size, vs in emit:
                    nk += ((osub // s_out) % size) * vs
                out[nk] = out.get(nk, 0.0) + coeff * amp
        return SparseVector(tuple(new_dims) if changed else v.dims, out)

    def compose(self, other: "SparseOperator") -> "SparseOperator":
        """self · other (apply other first)."""
        if len(self.in_dims) != len(other.out_dims) or any(
            not a.compatible(b) for a, b in zip(self.in_dims, other.out_dims)
        ):
            raise ValueError("compose: inner dimension mismatch")
        cols: dict[int, dict[int, complex]] = {}
        for ik, col_b in other.cols.items():
            acc: dict[int, complex] = {}
            for mid, zb in col_b.items():
                col_a = self.cols.get(mid)
                if col_a is None:
                    continue
                for ok, za in col_a.items():
                    acc[ok] = acc.get(ok, 0.0) + za * zb
            if acc:
                cols[ik] = acc
        return SparseOperator(self.out_dims, other.in_dims, cols)

    def __matmul__(self, other: "SparseOperator") -> "SparseOperator":
        return self.compose(other)

    def dagger(self) -> "SparseOperator":
        cols: dict[int, dict[int, complex]] = {}
        for ik, col in self.cols.items():
            for ok, z in col.items():
                cols.setdefault(ok, {})[ik] = z.conjugate()
        return SparseOperator(self.in_dims, self.out_dims, cols, prune=False)

    def tensor(self, other: "SparseOperator") -> "SparseOperator":
        n_in = _total_size(other.in_dims)
        n_out = _total_size(other.out_dims)
        cols: dict[int, dict[int, complex]] = {}
        for ika, cola in self.cols.items():
            for ikb, colb in other.cols.items():
                acc: dict[int, complex] = {}
                for oka, za in cola.items():
                    for okb, zb in colb.items():
                        acc[oka * n_out + okb] = za * zb
                cols[ika * n_in + ikb] = acc
        return SparseOperator(
            self.out_dims + other.out_dims, self.in_dims + other.in_dims, cols, prune=False
        )

    def scaled(self, factor: complex) -> "SparseOperator":
        cols = {
            ik: {ok: factor * z for ok, z in col.items()} for ik, col in self.cols.items()
        }
        return SparseOperator(self.out_dims, self.in_dims, cols)

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        if self.out_dims != other.out_dims or self.in_dims != other.in_dims:
            raise ValueError("operator addition requires identical spaces")
        cols: dict[int, dict[int, complex]] = {
            ik: dict(col) for ik, col in self.cols.items()
        }
        for ik, col in other.cols.items():
            acc = cols.setdefault(ik, {})
            for ok, z in col.items():
                acc[ok] = acc.get(ok, 0.0) + z
        return SparseOperator(self.out_dims, self.in_dims, cols)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        return self + other.scaled(-1.0)

    def unitarity_defect(self) -> float:
        """max |(U†U − I)ᵢⱼ| by explicit column overlaps; small operators only."""
        n = _total_size(self.in_dims)
        worst = 0.0
        for i in range(n):
            ci = self.cols.get(i, {})
            for j in range(i, n):
                cj = self.cols.get(j, {})
                small, big = (ci, cj) if len(ci) <= len(cj) else (cj, ci)
                acc = 0.0 + 0.0j
                for ok, z in small.items():
                    w = big.get(ok)
                    if w is not None:
                        if small is ci:
                            acc += z.conjugate() * w
                        else:
                            acc += w.conjugate() * z
                target = 1.0 if i == j else 0.0
                worst = max(worst, abs(acc - target))
        return worst

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return self.unitarity_defect() <= tol

    def __repr__(self) -> str:
        outs = ",".join(d.key for d in self.out_dims)
        ins = ",".join(d.key for d in self.in_dims)
        nnz = sum(len(c) for c in self.cols.values())
        return f"SparseOperator([{outs}]←[{ins}], nnz={nnz})"


def operator_distance(a: SparseOperator, b: SparseOperator) -> float:
    """max entrywise |a − b| over the union of supports."""
    if a.out_dims != b.out_dims or a.in_dims != b.in_dims:
        raise ValueError("operator comparison requires identical spaces")
    worst = 0.0
    keys = set(a.cols) | set(b.cols)
    for ik in keys:
        ca = a.cols.get(ik, {})
        cb = b.cols.get(ik, {})
        for ok in set(ca) | set(cb):
            worst = max(worst, abs(ca.get(ok, 0.0) - cb.get(ok, 0.0)))
    return worst
