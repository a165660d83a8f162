// Ket table: one row per component of a served node state. Numbers on
// screen are compact renderings of the served values; the exact payload
// numbers ride along in each row's hover title.

import { amplitudeText, escapeHtml, fmt, pct } from '../format';
import type { NodeStateDocument, StateComponent } from '../types';

export interface KetRow {
  label: string;
  kets: string[];
  amplitude: string;
  probabilityText: string;
  barWidth: number;
  swatchHue: number | null;
  exact: string;
}

// Labels arrive flat as (x, y, direction, polarization) per photon; chunk
// them back into one ket per photon for display.
export function ketChunks(labels: string[]): string[] {
  if (!labels.length) return ['|vac⟩'];
  const out: string[] = [];
  for (let i = 0; i < labels.length; i += 4) {
    out.push(`|${labels.slice(i, i + 4).join(',')}⟩`);
  }
  return out;
}

export function exactTitle(c: StateComponent): string {
  return `re ${c.re}  im ${c.im}  p ${c.probability}`;
}

export function ketRows(state: NodeStateDocument): KetRow[] {
  return state.components.map((c) => ({
    label: c.label,
    kets: ketChunks(c.labels),
    amplitude: amplitudeText(c.display, state.format),
    probabilityText: pct(c.probability),
    barWidth: Math.max(0, Math.min(100, c.probability * 100)),
    swatchHue: state.format === 'color' ? (c.display as { hue: number }).hue : null,
    exact: exactTitle(c),
  }));
}

export function renderKet(state: NodeStateDocument): string {
  const rows = ketRows(state)
    .map((row) => {
      const swatch =
        row.swatchHue === null
          ? ''
          : `<span class="swatch" style="background:hsl(${row.swatchHue},85%,55%)"></span>`;
      return (
        `<tr title="${escapeHtml(row.exact)}">` +
        `<td class="ket-label">${escapeHtml(row.kets.join(''))}</td>` +
        `<td class="ket-amp">${swatch}${escapeHtml(row.amplitude)}</td>` +
        `<td class="ket-prob"><span class="bar" style="width:${row.barWidth}%"></span>` +
        `<span class="num">${escapeHtml(row.probabilityText)}</span></td>` +
        `</tr>`
      );
    })
    .join('');
  const caption =
    `node ${state.node} · step ${state.step} · basis ${state.basis} · ` +
    `|ψ|² ${fmt(state.normSquared)}`;
  return (
    `<table class="ket"><caption>${escapeHtml(caption)}</caption>` +
    `<thead><tr><th>component</th><th>amplitude</th><th>probability</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}
