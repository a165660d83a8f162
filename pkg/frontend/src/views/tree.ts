// Multiverse tree outline: depth-first rows, clickable by node id, with the
// served branch probability and small icons for what happened on each step.

import { escapeHtml, pct } from '../format';
import type { TreeDocument, TreeNode } from '../types';

export const EVENT_ICONS: Record<string, string> = {
  detection: '◉',
  absorption: '⊘',
  explosion: '✸',
  click: '◔',
  loss: '↯',
  random: '⚄',
};

export interface TreeRow {
  id: number;
  depth: number;
  step: number;
  probability: number;
  probabilityText: string;
  barWidth: number;
  icons: string;
  terminal: boolean;
  selected: boolean;
  classicalText: string;
  eventText: string;
}

function describeEvents(node: TreeNode): { icons: string; text: string } {
  const icons = node.events.map((e) => EVENT_ICONS[e.type] ?? '·').join('');
  const text = node.events
    .map((e) => {
      const where = e.x !== undefined ? ` at (${e.x},${e.y})` : '';
      const who = e.element ? ` ${e.element}` : '';
      const value = e.value !== undefined ? ` = ${e.value}` : '';
      return `${e.type}${who}${value}${where}`;
    })
    .join('; ');
  return { icons, text };
}

export function treeRows(doc: TreeDocument, selected: number): TreeRow[] {
  const byId = new Map<number, TreeNode>(doc.nodes.map((n) => [n.id, n]));
  const rows: TreeRow[] = [];
  const walk = (id: number, depth: number): void => {
    const node = byId.get(id);
    if (!node) return;
    const { icons, text } = describeEvents(node);
    const classicalText = Object.entries(node.classical)
      .map(([k, v]) => `${k}=${v}`)
      .join(' ');
    rows.push({
      id: node.id,
      depth,
      step: node.step,
      probability: node.probability,
      probabilityText: pct(node.probability),
      barWidth: Math.max(0, Math.min(100, node.probability * 100)),
      icons,
      terminal: node.terminal,
      selected: node.id === selected,
      classicalText,
      eventText: text,
    });
    for (const child of node.children) walk(child, depth + 1);
  };
  walk(doc.root, 0);
  return rows;
}

export function renderTree(doc: TreeDocument, selected: number): string {
  const rows = treeRows(doc, selected)
    .map((row) => {
      const classes = ['tree-row'];
      if (row.selected) classes.push('selected');
      if (row.terminal) classes.push('terminal');
      const title = [`p ${row.probability}`, row.eventText, row.classicalText]
        .filter(Boolean)
        .join(' | ');
      return (
        `<div class="${classes.join(' ')}" data-node="${row.id}" ` +
        `style="padding-left:${row.depth * 14 + 4}px" title="${escapeHtml(title)}">` +
        `<span class="bar" style="width:${row.barWidth}%"></span>` +
        `<span class="tree-text">#${row.id} s${row.step} ${escapeHtml(row.probabilityText)} ` +
        `${escapeHtml(row.icons)}${row.terminal ? ' ∎' : ''}</span>` +
        `</div>`
      );
    })
    .join('');
  const stats = doc.stats;
  const footer =
    `explored ${pct(stats.exploredProbability)} · truncated ${pct(stats.truncatedProbability)} · ` +
    `${stats.nodeCount} nodes`;
  return `<div class="tree">${rows}</div><div class="tree-footer">${escapeHtml(footer)}</div>`;
}
