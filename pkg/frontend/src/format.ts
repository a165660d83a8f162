// Presentation helpers. The only derived quantities in the whole UI live
// here, and both are geometry/color mappings of served numbers, never new
// physics: a disk radius from an amplitude's magnitude and a hue from its
// phase (0 deg phase -> 0 deg hue, linear around the wheel).

import type { AmplitudeFormat, DisplayValue } from './types';

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return String(x);
  if (Number.isInteger(x)) return String(x);
  const s = x.toFixed(4);
  const trimmed = s.replace(/0+$/, '').replace(/\.$/, '');
  return trimmed === '-0' ? '0' : trimmed;
}

export function pct(p: number): string {
  return `${fmt(p * 100)}%`;
}

export function magnitude(re: number, im: number): number {
  return Math.hypot(re, im);
}

export function phaseHue(re: number, im: number): number {
  if (re === 0 && im === 0) return 0;
  const deg = (Math.atan2(im, re) * 180) / Math.PI;
  return (deg + 360) % 360;
}

const MINUS = '-';

function signed(x: number): string {
  return x < 0 ? `${MINUS} ${fmt(-x)}` : `+ ${fmt(x)}`;
}

// On-screen amplitude text for one served display record. Exact values
// belong in hover titles; this is the compact human form.
export function amplitudeText(display: DisplayValue, format: AmplitudeFormat): string {
  switch (format) {
    case 'cartesian': {
      const d = display as { re: number; im: number };
      return `${fmt(d.re)} ${signed(d.im)}i`;
    }
    case 'polar': {
      const d = display as { r: number; phi: number };
      return `${fmt(d.r)} exp(${fmt(d.phi)}i)`;
    }
    case 'polar-tau': {
      const d = display as { r: number; turns: number };
      return `${fmt(d.r)} at ${fmt(d.turns)} tau`;
    }
    case 'color': {
      const d = display as { r: number; hue: number };
      return `${fmt(d.r)} hue ${fmt(d.hue)}°`;
    }
  }
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
