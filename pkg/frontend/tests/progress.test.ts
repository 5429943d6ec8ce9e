import { describe, expect, it } from 'vitest';

import { applyView, cloudOpacity, emptyModel } from '../src/model.js';
import { renderProgress } from '../src/progress.js';
import { makeView } from './stub.js';

function renderAt(fraction: number): HTMLElement {
  const model = applyView(emptyModel(), makeView({ progress_fraction: fraction }));
  const container = document.createElement('div');
  renderProgress(container, model);
  return container;
}

describe('progress view', () => {
  it.each([0, 0.5, 1])('cloud opacity is 1 - fraction at %s', (fraction) => {
    const container = renderAt(fraction);
    const clouds = container.querySelector<HTMLElement>('[data-testid="cloud-layer"]')!;
    expect(Number(clouds.style.opacity)).toBeCloseTo(1 - fraction, 12);
  });

  it('bar fill tracks the fraction', () => {
    const fill = renderAt(0.5).querySelector<HTMLElement>(
      '[data-testid="progress-fill"]',
    )!;
    expect(fill.style.height).toBe('50%');
  });

  it('full bar shows the completion screen', () => {
    expect(renderAt(1).querySelector('[data-testid="completion-screen"]')).not.toBeNull();
    expect(renderAt(0.99).querySelector('[data-testid="completion-screen"]')).toBeNull();
  });

  it('displayed numbers come only from the server view', () => {
    // The model exposes no way to set progress except adopting a view.
    const model = emptyModel();
    expect(cloudOpacity(model)).toBe(1);
    applyView(model, makeView({ progress_fraction: 0.25 }));
    expect(cloudOpacity(model)).toBeCloseTo(0.75, 12);
    const keys = Object.keys(model);
    expect(keys).not.toContain('score');
    expect(keys).not.toContain('cumulative_score');
  });
});
