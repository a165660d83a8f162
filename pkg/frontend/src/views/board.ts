// Board grid: a cell per coordinate, elements drawn as glyphs rotated in
// 45 degree steps. Cells carry data-x/data-y for drop targets, elements a
// data-name for selection, rotation, and the parameter panel.

import { escapeHtml } from '../format';
import type { SetupDocument, SetupElement } from '../types';

export const GLYPHS: Record<string, string> = {
  SinglePhotonSource: '▶',
  BellPairSource: '◀▶',
  GhzSource: '✳',
  WSource: 'Ⓦ',
  Mirror: '│',
  BeamSplitter: '▣',
  PolarizingBeamSplitter: '◈',
  CornerCube: '◆',
  OpticalCirculator: '↻',
  Detector: '◉',
  NondemolitionDetector: '◎',
  Bomb: '✸',
  Rock: '▓',
  LinearPolarizer: '⫽',
  NeutralDensityFilter: '▒',
  FaradayRotator: 'Ⓕ',
  SugarSolution: 'Ⓢ',
  WavePlate: 'λ',
  GlassSlab: '▯',
  VacuumJar: '◌',
  Hadamard: 'Ⓗ',
  PauliX: 'Ⓧ',
  PauliY: 'Ⓨ',
  PauliZ: 'Ⓩ',
  SqrtNot: '√',
  Identity: '·',
  CNOT: '⊕',
  CZ: '⊙',
  Switch: '⌥',
  RandomSwitch: '⚄',
  Correlator: 'Σ',
  OutputVariable: '≡',
  Comment: '✎',
  Goal: '⚑',
  AND: '∧',
  OR: '∨',
  XOR: '⊻',
  NAND: '⊼',
  NOR: '⊽',
  MIN: '⌊',
  MAX: '⌈',
  SUM: '＋',
};

export function glyphFor(kind: string): string {
  return GLYPHS[kind] ?? '□';
}

function elementTitle(el: SetupElement): string {
  const bits = [`${el.name}: ${el.kind}`, `rotation ${el.rotation}`];
  if (el.params && Object.keys(el.params).length) bits.push(`params ${JSON.stringify(el.params)}`);
  if (el.altParams && Object.keys(el.altParams).length) {
    bits.push(`alt ${JSON.stringify(el.altParams)}`);
  }
  return bits.join(' · ');
}

export function renderBoard(setup: SetupDocument, selectedName: string | null): string {
  const { width, height } = setup.board;
  const byCell = new Map<string, SetupElement>();
  for (const el of setup.elements) byCell.set(`${el.x},${el.y}`, el);

  const cells: string[] = [];
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const el = byCell.get(`${x},${y}`);
      if (el) {
        const classes = ['cell', 'occupied'];
        if (el.name === selectedName) classes.push('selected');
        cells.push(
          `<div class="${classes.join(' ')}" data-x="${x}" data-y="${y}" ` +
            `data-name="${escapeHtml(el.name)}" draggable="true" title="${escapeHtml(elementTitle(el))}">` +
            `<span class="glyph" style="transform:rotate(${el.rotation * 45}deg)">` +
            `${escapeHtml(glyphFor(el.kind))}</span></div>`,
        );
      } else {
        cells.push(`<div class="cell" data-x="${x}" data-y="${y}"></div>`);
      }
    }
  }
  const wires = setup.wires.length
    ? `<div class="wires">wires: ${setup.wires
        .map((w) => escapeHtml(`${w.from} → ${w.to}`))
        .join(' · ')}</div>`
    : '';
  return (
    `<div class="board-grid" style="grid-template-columns:repeat(${width},var(--cell))">` +
    `${cells.join('')}</div>${wires}`
  );
}
