// Blinking glimpses of an entangled state: each frame is one served sample,
// one snapshot per particle. Chips take their opacity from the amplitude's
// magnitude and their hue from its phase; exact served numbers sit in the
// hover title. Frames advance on a fixed cadence.

import { escapeHtml, magnitude, phaseHue, fmt } from '../format';
import { exactTitle } from './ket';
import type { BlinkSnapshot } from '../types';

export const BLINK_INTERVAL_MS = 500;

export function renderBlinkFrame(frame: BlinkSnapshot[], index: number, total: number): string {
  const particles = frame
    .map((snap) => {
      const chips = snap.components
        .map((c) => {
          const opacity = Math.min(1, magnitude(c.re, c.im));
          const hue = phaseHue(c.re, c.im);
          return (
            `<span class="chip" style="opacity:${fmt(opacity)};background:hsl(${fmt(hue)},85%,55%)" ` +
            `title="${escapeHtml(exactTitle(c))}">${escapeHtml(c.label)}</span>`
          );
        })
        .join('');
      return (
        `<div class="blink-particle" title="weight ${snap.weight}">` +
        `<span class="blink-head">photon ${snap.particle} · w ${escapeHtml(fmt(snap.weight))}</span>` +
        `${chips}</div>`
      );
    })
    .join('');
  return `<div class="blink-frame">${particles}` +
    `<div class="blink-count">glimpse ${index + 1}/${total}</div></div>`;
}

export class BlinkDriver {
  private timer: ReturnType<typeof setInterval> | null = null;
  private index = 0;

  constructor(
    private readonly frames: BlinkSnapshot[][],
    private readonly show: (html: string, index: number) => void,
    private readonly intervalMs: number = BLINK_INTERVAL_MS,
  ) {}

  private present(): void {
    const frame = this.frames[this.index];
    if (frame) this.show(renderBlinkFrame(frame, this.index, this.frames.length), this.index);
  }

  start(): void {
    this.stop();
    if (!this.frames.length) return;
    this.index = 0;
    this.present();
    this.timer = setInterval(() => {
      this.index = (this.index + 1) % this.frames.length;
      this.present();
    }, this.intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
