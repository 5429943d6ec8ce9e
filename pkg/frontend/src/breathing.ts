/** Paced-breathing surface: the spacebar is the only control. Key down and
 * key up are captured with client-side timestamps (the server applies its
 * own +/-1 s tolerance, so sub-100 ms jitter is immaterial); a steady tick
 * lets the server bank the exhale. The ring contracts while the key is
 * held and expands on release. */

import type { MiniGameDescriptor } from './api.js';

export type BreathEmitter = (kind: 'press' | 'release' | 'tick', timestamp: number) => void;

export class BreathingController {
  private pressed = false;
  private ticker: ReturnType<typeof setInterval> | null = null;
  private keydown = (event: KeyboardEvent) => this.handleKeyDown(event);
  private keyup = (event: KeyboardEvent) => this.handleKeyUp(event);

  constructor(
    private emit: BreathEmitter,
    private clock: () => number = () => performance.now() / 1000,
    private target: Pick<Document, 'addEventListener' | 'removeEventListener'> = document,
  ) {}

  attach(tickSeconds = 1.0): void {
    this.target.addEventListener('keydown', this.keydown as EventListener);
    this.target.addEventListener('keyup', this.keyup as EventListener);
    this.ticker = setInterval(() => this.emit('tick', this.clock()), tickSeconds * 1000);
  }

  detach(): void {
    this.target.removeEventListener('keydown', this.keydown as EventListener);
    this.target.removeEventListener('keyup', this.keyup as EventListener);
    if (this.ticker !== null) {
      clearInterval(this.ticker);
      this.ticker = null;
    }
  }

  private handleKeyDown(event: KeyboardEvent): void {
    if (event.code !== 'Space' || event.repeat || this.pressed) return;
    event.preventDefault();
    this.pressed = true;
    this.emit('press', this.clock());
  }

  private handleKeyUp(event: KeyboardEvent): void {
    if (event.code !== 'Space' || !this.pressed) return;
    event.preventDefault();
    this.pressed = false;
    this.emit('release', this.clock());
  }
}

export function renderBreathing(container: HTMLElement, game: MiniGameDescriptor): void {
  container.innerHTML = '';
  const wrap = document.createElement('div');
  wrap.className = 'breathing';
  const ring = document.createElement('div');
  ring.className = `breath-ring phase-${game.phase ?? 'idle'}`;
  ring.dataset.testid = 'breath-ring';
  const core = document.createElement('div');
  core.className = 'breath-core';
  ring.appendChild(core);
  const label = document.createElement('p');
  label.dataset.testid = 'breath-label';
  label.textContent =
    `Hold the spacebar: breathe in for 4, hold for 7, release and breathe ` +
    `out for 8. Cycles done: ${game.completed_cycles ?? 0} of ${game.target_cycles ?? 3}.`;
  wrap.appendChild(ring);
  wrap.appendChild(label);
  container.appendChild(wrap);
}
