import { describe, expect, it } from 'vitest';

import { magnitude, phaseHue } from '../src/format';
import { diskGrid, renderOperator } from '../src/views/operator';
import type { OperatorDocument, OperatorEntry } from '../src/types';

const R = Math.SQRT1_2;

function beamSplitterDoc(): OperatorDocument {
  // Trimmed to one polarization so the grid stays readable in assertions.
  const entries: OperatorEntry[] = [
    { out: ['→', 'H'], in: ['→', 'H'], re: R, im: 0 },
    { out: ['↑', 'H'], in: ['→', 'H'], re: 0, im: R },
    { out: ['↑', 'H'], in: ['↑', 'H'], re: R, im: 0 },
    { out: ['→', 'H'], in: ['↑', 'H'], re: 0, im: R },
  ];
  return {
    kind: 'BeamSplitter',
    type: 'unitary',
    rotation: 1,
    params: {},
    basis: 'HV',
    entries,
  };
}

describe('operator disk view', () => {
  it('carries the served matrix values through untouched', () => {
    const doc = beamSplitterDoc();
    const grid = diskGrid(doc.entries ?? []);
    for (const [i, disk] of grid.disks.entries()) {
      const entry = doc.entries?.[i];
      // Object.is: the exact floats from the wire, not reformatted copies.
      expect(Object.is(disk.re, entry?.re)).toBe(true);
      expect(Object.is(disk.im, entry?.im)).toBe(true);
      expect(disk.exact).toContain(`re ${entry?.re}`);
      expect(disk.exact).toContain(`im ${entry?.im}`);
    }
  });

  it('reuses the row order for columns of a square operator', () => {
    const grid = diskGrid(beamSplitterDoc().entries ?? []);
    expect(grid.rows).toEqual(['→,H', '↑,H']);
    expect(grid.cols).toEqual(grid.rows);
  });

  it('maps phase to hue around the full circle', () => {
    expect(phaseHue(1, 0)).toBe(0);
    expect(phaseHue(0, 1)).toBe(90);
    expect(phaseHue(-1, 0)).toBe(180);
    expect(phaseHue(0, -1)).toBe(270);
    expect(phaseHue(0, 0)).toBe(0);
  });

  it('clamps disk radius at one for superunitary junk', () => {
    const grid = diskGrid([{ out: ['→', 'H'], in: ['→', 'H'], re: 3, im: 4 }]);
    expect(grid.disks[0]?.radius).toBe(1);
    expect(magnitude(3, 4)).toBe(5);
  });

  it('renders unitary docs as an svg with exact hover titles', () => {
    const html = renderOperator(beamSplitterDoc());
    expect(html).toContain('<svg');
    expect(html).toContain(`re ${R}`);
    expect(html).toContain('basis HV');
    expect(html).toContain('⟨↑,H|U|→,H⟩');
  });

  it('renders measurement docs with their flags and projector', () => {
    const doc: OperatorDocument = {
      kind: 'Bomb',
      type: 'measurement',
      rotation: 0,
      params: {},
      basis: 'HV',
      weight: 0.875,
      destructive: true,
      explosive: true,
      projector: [{ out: ['4', '2'], in: ['4', '2'], re: 1, im: 0 }],
    };
    const html = renderOperator(doc);
    expect(html).toContain('weight 0.875');
    expect(html).toContain('destructive');
    expect(html).toContain('explosive');
    expect(html).not.toContain('nondemolition');
    expect(html).toContain('<svg');
  });

  it('labels a gentle detector as nondemolition', () => {
    const doc: OperatorDocument = {
      kind: 'NondemolitionDetector',
      type: 'measurement',
      rotation: 0,
      params: {},
      basis: 'HV',
      weight: 1,
      destructive: false,
      explosive: false,
      projector: [],
    };
    expect(renderOperator(doc)).toContain('nondemolition');
  });

  it('renders source docs as emission amplitudes', () => {
    const doc: OperatorDocument = {
      kind: 'BellPairSource',
      type: 'source',
      rotation: 0,
      params: {},
      directions: [0, 2],
      amplitudes: [
        { polarizations: [0, 0], re: 0.7071067811865475, im: 0 },
        { polarizations: [1, 1], re: 0.7071067811865475, im: 0 },
      ],
    };
    const html = renderOperator(doc);
    expect(html).toContain('emits → ←');
    expect(html).toContain('pol 0,0');
    expect(html).toContain('re 0.7071067811865475');
  });
});
