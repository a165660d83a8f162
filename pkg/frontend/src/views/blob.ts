// Entanglement blob: particles on a ring, linked toward a common center,
// link width tracking how entangled each particle is. Geometry (anchor
// points, widths, center) comes from the server; this just draws it.

import { escapeHtml, fmt } from '../format';
import type { EntanglementDocument } from '../types';

export function renderBlob(doc: EntanglementDocument, size = 240): string {
  const parts: string[] = [
    `<svg class="blob" viewBox="-1.35 -1.35 2.7 2.7" width="${size}" height="${size}" role="img">`,
  ];
  const center = doc.graph.center;
  for (const anchor of doc.graph.anchors) {
    const width = 0.015 + anchor.width * 0.1;
    parts.push(
      `<line x1="${fmt(anchor.x)}" y1="${fmt(anchor.y)}" x2="${fmt(center.x)}" y2="${fmt(center.y)}" ` +
        `stroke-width="${fmt(width)}" class="blob-link"/>`,
    );
  }
  parts.push(
    `<circle cx="${fmt(center.x)}" cy="${fmt(center.y)}" r="0.06" class="blob-center"/>`,
  );
  for (const anchor of doc.graph.anchors) {
    const particle = doc.particles.find((p) => p.particle === anchor.particle);
    const exact = particle
      ? `photon ${anchor.particle}: purity ${particle.purity}, entropy ${particle.entropy}`
      : `photon ${anchor.particle}`;
    parts.push(
      `<g class="blob-anchor"><circle cx="${fmt(anchor.x)}" cy="${fmt(anchor.y)}" r="0.14">` +
        `<title>${escapeHtml(exact)}</title></circle>` +
        `<text x="${fmt(anchor.x)}" y="${fmt(anchor.y + 0.28)}" class="blob-label">` +
        `p${anchor.particle} H₂=${escapeHtml(fmt(anchor.entropy))}</text></g>`,
    );
  }
  parts.push('</svg>');
  return parts.join('');
}
