import { describe, expect, it, vi } from 'vitest';

import { BreathingController, renderBreathing } from '../src/breathing.js';
import { renderGrounding } from '../src/grounding.js';
import { renderMatch3 } from '../src/match3.js';
import type { MiniGameDescriptor } from '../src/api.js';

function keyEvent(type: 'keydown' | 'keyup', code = 'Space', repeat = false) {
  return new KeyboardEvent(type, { code, repeat, cancelable: true });
}

describe('breathing controller', () => {
  it('emits press/release with monotone timestamps from the injected clock', () => {
    const events: [string, number][] = [];
    let now = 0;
    const controller = new BreathingController(
      (kind, t) => events.push([kind, t]),
      () => now,
      document,
    );
    controller.attach(1000); // tick interval far beyond the test horizon
    now = 0.5;
    document.dispatchEvent(keyEvent('keydown'));
    now = 11.5;
    document.dispatchEvent(keyEvent('keyup'));
    controller.detach();
    expect(events).toEqual([
      ['press', 0.5],
      ['release', 11.5],
    ]);
    const times = events.map(([, t]) => t);
    expect([...times].sort((a, b) => a - b)).toEqual(times);
  });

  it('ignores auto-repeat and non-space keys', () => {
    const events: string[] = [];
    const controller = new BreathingController((kind) => events.push(kind), () => 0, document);
    controller.attach(1000);
    document.dispatchEvent(keyEvent('keydown'));
    document.dispatchEvent(keyEvent('keydown', 'Space', true)); // repeat
    document.dispatchEvent(keyEvent('keydown', 'KeyA'));
    document.dispatchEvent(keyEvent('keyup'));
    document.dispatchEvent(keyEvent('keyup')); // no matching press
    controller.detach();
    expect(events).toEqual(['press', 'release']);
  });

  it('renders the ring phase and cycle count', () => {
    const container = document.createElement('div');
    renderBreathing(container, {
      game: 'breathing',
      phase: 'hold',
      completed_cycles: 1,
      target_cycles: 3,
    });
    expect(container.querySelector('.breath-ring.phase-hold')).not.toBeNull();
    expect(container.querySelector('[data-testid="breath-label"]')!.textContent).toContain(
      '1 of 3',
    );
  });
});

function match3Game(): MiniGameDescriptor {
  return {
    game: 'match3',
    cells: [
      [1, 1, 1, 2],
      [2, 3, 2, 3],
      [3, 2, 3, 2],
      [2, 3, 2, 3],
    ],
    score: 0,
    target_tiles: 10,
  };
}

function pointer(tile: Element, type: string) {
  tile.dispatchEvent(new Event(type, { bubbles: true, cancelable: true }));
}

describe('match3 board', () => {
  it('posts a chain after dragging three adjacent identical tiles', () => {
    const container = document.createElement('div');
    const chains: number[][][] = [];
    renderMatch3(container, match3Game(), (path) => chains.push(path));
    const tile = (r: number, c: number) =>
      container.querySelector(`[data-testid="tile-${r}-${c}"]`)!;
    pointer(tile(0, 0), 'pointerdown');
    pointer(tile(0, 1), 'pointerenter');
    pointer(tile(0, 2), 'pointerenter');
    pointer(tile(0, 2), 'pointerup');
    expect(chains).toEqual([[[0, 0], [0, 1], [0, 2]]]);
  });

  it('a drag across non-adjacent cells breaks the path locally, no server call', () => {
    const container = document.createElement('div');
    const chains: number[][][] = [];
    renderMatch3(container, match3Game(), (path) => chains.push(path));
    const tile = (r: number, c: number) =>
      container.querySelector(`[data-testid="tile-${r}-${c}"]`)!;
    pointer(tile(0, 0), 'pointerdown');
    pointer(tile(0, 2), 'pointerenter'); // skips a column: path broken
    pointer(tile(0, 2), 'pointerup');
    expect(chains).toHaveLength(0);
    expect(container.querySelectorAll('.tile.selected')).toHaveLength(0);
  });

  it('a mismatched kind breaks the path locally', () => {
    const container = document.createElement('div');
    const chains: number[][][] = [];
    renderMatch3(container, match3Game(), (path) => chains.push(path));
    const tile = (r: number, c: number) =>
      container.querySelector(`[data-testid="tile-${r}-${c}"]`)!;
    pointer(tile(0, 0), 'pointerdown');
    pointer(tile(0, 1), 'pointerenter');
    pointer(tile(0, 3), 'pointerenter'); // kind 2 after kind-1 path
    pointer(tile(0, 3), 'pointerup');
    expect(chains).toHaveLength(0);
  });

  it('two tiles are not enough to post', () => {
    const container = document.createElement('div');
    const chains: number[][][] = [];
    renderMatch3(container, match3Game(), (path) => chains.push(path));
    const tile = (r: number, c: number) =>
      container.querySelector(`[data-testid="tile-${r}-${c}"]`)!;
    pointer(tile(0, 0), 'pointerdown');
    pointer(tile(0, 1), 'pointerenter');
    pointer(tile(0, 1), 'pointerup');
    expect(chains).toHaveLength(0);
  });
});

describe('grounding form', () => {
  function renderForm() {
    const container = document.createElement('div');
    const submissions: Record<string, string[]>[] = [];
    renderGrounding(
      container,
      { game: 'five_senses', image_ref: 'placeholder:abc', slots: undefined },
      (form) => submissions.push(form),
    );
    return { container, submissions };
  }

  function fillAll(container: HTMLElement, except = 0) {
    const inputs = [...container.querySelectorAll<HTMLInputElement>('input[type="text"]')];
    inputs.forEach((input, index) => {
      if (index < inputs.length - except) {
        input.value = `answer ${index}`;
        input.dispatchEvent(new Event('input', { bubbles: true }));
      }
    });
    return inputs;
  }

  it('renders 5/4/3/2/1 fields and the served illustration', () => {
    const { container } = renderForm();
    expect(container.querySelectorAll('input[type="text"]')).toHaveLength(15);
    expect(
      container.querySelector('[data-testid="grounding-image"]')!.textContent,
    ).toBe('placeholder:abc');
  });

  it('submit stays disabled until all fifteen fields are non-empty', () => {
    const { container } = renderForm();
    const submit = container.querySelector<HTMLButtonElement>(
      '[data-testid="grounding-submit"]',
    )!;
    expect(submit.disabled).toBe(true);
    fillAll(container, 1);
    expect(submit.disabled).toBe(true);
    fillAll(container, 0);
    expect(submit.disabled).toBe(false);
  });

  it('whitespace does not count as filled', () => {
    const { container } = renderForm();
    const inputs = fillAll(container, 0);
    inputs[14]!.value = '   ';
    inputs[14]!.dispatchEvent(new Event('input', { bubbles: true }));
    const submit = container.querySelector<HTMLButtonElement>(
      '[data-testid="grounding-submit"]',
    )!;
    expect(submit.disabled).toBe(true);
  });

  it('submits the grouped, trimmed answers', () => {
    const { container, submissions } = renderForm();
    fillAll(container, 0);
    container
      .querySelector('form')!
      .dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
    expect(submissions).toHaveLength(1);
    expect(submissions[0]!.see).toHaveLength(5);
    expect(submissions[0]!.taste).toHaveLength(1);
  });
});
