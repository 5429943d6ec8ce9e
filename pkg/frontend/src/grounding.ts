/** Five-senses grounding: labeled input groups (5 seen, 4 touched, 3 heard,
 * 2 smelled, 1 tasted) beside the served illustration. Submit stays
 * disabled until every one of the fifteen fields has content. */

import type { MiniGameDescriptor } from './api.js';

export type GroundingEmitter = (form: Record<string, string[]>) => void;

const SLOT_ORDER: [string, string][] = [
  ['see', 'things you can see'],
  ['touch', 'things you could touch'],
  ['hear', 'things you might hear'],
  ['smell', 'things you might smell'],
  ['taste', 'thing you might taste'],
];

export function renderGrounding(
  container: HTMLElement,
  game: MiniGameDescriptor,
  emitForm: GroundingEmitter,
): void {
  container.innerHTML = '';
  const slots = game.slots ?? { see: 5, touch: 4, hear: 3, smell: 2, taste: 1 };

  const wrap = document.createElement('div');
  wrap.className = 'grounding';

  const figure = document.createElement('div');
  figure.className = 'grounding-image';
  figure.dataset.testid = 'grounding-image';
  figure.textContent = game.image_ref ?? '';
  wrap.appendChild(figure);

  const form = document.createElement('form');
  form.className = 'grounding-form';
  const fields: Record<string, HTMLInputElement[]> = {};

  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.dataset.testid = 'grounding-submit';
  submit.textContent = 'submit';
  submit.disabled = true;

  const refreshSubmit = () => {
    const allFilled = Object.values(fields).every((inputs) =>
      inputs.every((input) => input.value.trim().length > 0),
    );
    submit.disabled = !allFilled;
  };

  for (const [sense, label] of SLOT_ORDER) {
    const count = slots[sense] ?? 0;
    const group = document.createElement('fieldset');
    const legend = document.createElement('legend');
    legend.textContent = `${count} ${label}`;
    group.appendChild(legend);
    fields[sense] = [];
    for (let index = 0; index < count; index += 1) {
      const input = document.createElement('input');
      input.type = 'text';
      input.dataset.testid = `grounding-${sense}-${index}`;
      input.addEventListener('input', refreshSubmit);
      fields[sense].push(input);
      group.appendChild(input);
    }
    form.appendChild(group);
  }

  form.appendChild(submit);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    if (submit.disabled) return;
    const payload: Record<string, string[]> = {};
    for (const [sense, inputs] of Object.entries(fields)) {
      payload[sense] = inputs.map((input) => input.value.trim());
    }
    emitForm(payload);
  });

  wrap.appendChild(form);
  container.appendChild(wrap);
}
