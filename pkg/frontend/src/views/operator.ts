// Disk-matrix view of a served operator document. Each nonzero entry is a
// disk: radius from the amplitude's magnitude (area tracks probability),
// hue from its phase. The served re/im appear verbatim in the disk's hover
// title together with the hue legend, so exact values are always one
// mouseover away.

import { escapeHtml, fmt, magnitude, phaseHue } from '../format';
import type { OperatorDocument, OperatorEntry } from '../types';

export interface Disk {
  row: number;
  col: number;
  out: string[];
  in: string[];
  re: number;
  im: number;
  radius: number;
  hue: number;
  exact: string;
}

export interface DiskGrid {
  rows: string[];
  cols: string[];
  disks: Disk[];
}

function axisKey(labels: string[]): string {
  return labels.join(',');
}

export function diskGrid(entries: OperatorEntry[]): DiskGrid {
  const rows: string[] = [];
  const rowIndex = new Map<string, number>();
  for (const e of entries) {
    const key = axisKey(e.out);
    if (!rowIndex.has(key)) {
      rowIndex.set(key, rows.length);
      rows.push(key);
    }
  }
  // Square operators share the axis universe; reuse the row order for the
  // columns then so the diagonal is the identity's diagonal.
  const colKeys = new Set(entries.map((e) => axisKey(e.in)));
  let cols: string[];
  const colIndex = new Map<string, number>();
  if ([...colKeys].every((k) => rowIndex.has(k))) {
    cols = rows.filter((k) => colKeys.has(k));
  } else {
    cols = [];
    for (const e of entries) {
      const key = axisKey(e.in);
      if (!colIndex.has(key) && !cols.includes(key)) cols.push(key);
    }
  }
  cols.forEach((k, i) => colIndex.set(k, i));

  const disks = entries.map((e) => {
    const hue = phaseHue(e.re, e.im);
    return {
      row: rowIndex.get(axisKey(e.out))!,
      col: colIndex.get(axisKey(e.in))!,
      out: e.out,
      in: e.in,
      re: e.re,
      im: e.im,
      radius: Math.min(1, magnitude(e.re, e.im)),
      hue,
      exact: `⟨${axisKey(e.out)}|U|${axisKey(e.in)}⟩  re ${e.re}  im ${e.im}  hue ${fmt(hue)}° = phase ${fmt(hue)}°`,
    };
  });
  return { rows, cols, disks };
}

const CELL = 36;
const LABEL_W = 84;
const LABEL_H = 20;

function renderDiskSvg(entries: OperatorEntry[]): string {
  const grid = diskGrid(entries);
  const width = LABEL_W + grid.cols.length * CELL;
  const height = LABEL_H + grid.rows.length * CELL;
  const parts: string[] = [
    `<svg class="disks" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">`,
  ];
  grid.cols.forEach((label, i) => {
    parts.push(
      `<text x="${LABEL_W + i * CELL + CELL / 2}" y="${LABEL_H - 7}" class="axis">${escapeHtml(label)}</text>`,
    );
  });
  grid.rows.forEach((label, i) => {
    parts.push(
      `<text x="${LABEL_W - 6}" y="${LABEL_H + i * CELL + CELL / 2 + 4}" class="axis row">${escapeHtml(label)}</text>`,
    );
  });
  for (let r = 0; r < grid.rows.length; r++) {
    for (let c = 0; c < grid.cols.length; c++) {
      parts.push(
        `<rect x="${LABEL_W + c * CELL}" y="${LABEL_H + r * CELL}" width="${CELL}" height="${CELL}" class="cellbg"/>`,
      );
    }
  }
  for (const d of grid.disks) {
    const cx = LABEL_W + d.col * CELL + CELL / 2;
    const cy = LABEL_H + d.row * CELL + CELL / 2;
    const r = d.radius * (CELL / 2 - 3);
    parts.push(
      `<circle cx="${cx}" cy="${cy}" r="${fmt(r)}" fill="hsl(${fmt(d.hue)},85%,55%)">` +
        `<title>${escapeHtml(d.exact)}</title></circle>`,
    );
  }
  parts.push('</svg>');
  return parts.join('');
}

const ARROWS = ['→', '↑', '←', '↓'];

export function renderOperator(doc: OperatorDocument): string {
  const head = `<div class="op-head">${escapeHtml(doc.kind)} · rotation ${doc.rotation}` +
    (doc.basis ? ` · basis ${doc.basis}` : '') + `</div>`;
  switch (doc.type) {
    case 'unitary':
    case 'pairGate':
      return head + renderDiskSvg(doc.entries ?? []);
    case 'measurement': {
      const flags = [
        `weight ${fmt(doc.weight ?? 0)}`,
        doc.destructive ? 'destructive' : 'nondemolition',
        doc.explosive ? 'explosive' : '',
      ]
        .filter(Boolean)
        .join(' · ');
      return head + `<div class="op-flags">${escapeHtml(flags)}</div>` + renderDiskSvg(doc.projector ?? []);
    }
    case 'source': {
      const dirs = (doc.directions ?? []).map((d) => ARROWS[d] ?? String(d)).join(' ');
      const amps = (doc.amplitudes ?? [])
        .map(
          (a) =>
            `<li title="re ${a.re}  im ${a.im}">pol ${escapeHtml(a.polarizations.join(','))}: ` +
            `${escapeHtml(fmt(a.re))} ${a.im < 0 ? '-' : '+'} ${escapeHtml(fmt(Math.abs(a.im)))}i</li>`,
        )
        .join('');
      return (
        head +
        `<div class="op-flags">emits ${escapeHtml(dirs)}</div>` +
        `<ul class="op-amps">${amps}</ul>`
      );
    }
    case 'classical':
      return head + `<div class="op-flags">classical element, no photon action</div>`;
    case 'logic':
      return head + `<div class="op-flags">logic gate on wire values</div>`;
  }
}
