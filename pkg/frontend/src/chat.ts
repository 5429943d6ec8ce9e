/** Chat surface: NPC prompt on top, suggested-reply chips above the input
 * box, one POST per submit while the previous request is settled. */

import type { UiSessionModel } from './model.js';

export interface ChatHandlers {
  onSubmit: (text: string) => void;
  onRetry: () => void;
}

export function renderChat(
  container: HTMLElement,
  model: UiSessionModel,
  handlers: ChatHandlers,
): void {
  container.innerHTML = '';
  const view = model.view;
  if (!view) return;

  const prompt = document.createElement('div');
  prompt.className = 'npc-prompt';
  prompt.dataset.testid = 'npc-prompt';
  prompt.textContent = view.npc_reply;
  container.appendChild(prompt);

  if (model.networkError) {
    const banner = document.createElement('div');
    banner.className = 'retry-banner';
    banner.dataset.testid = 'retry-banner';
    banner.textContent = `Connection problem: ${model.networkError} `;
    const retry = document.createElement('button');
    retry.textContent = 'retry';
    retry.dataset.testid = 'retry-button';
    retry.addEventListener('click', () => handlers.onRetry());
    banner.appendChild(retry);
    container.appendChild(banner);
  }

  const chips = document.createElement('div');
  chips.className = 'suggestion-chips';
  for (const suggestion of view.suggested_replies.slice(0, 3)) {
    const chip = document.createElement('button');
    chip.className = 'chip';
    chip.dataset.testid = 'suggestion-chip';
    chip.textContent = suggestion;
    chip.addEventListener('click', () => {
      const input = container.querySelector<HTMLInputElement>('[data-testid="chat-input"]');
      if (input) {
        input.value = suggestion;
        model.inputBuffer = suggestion;
      }
    });
    chips.appendChild(chip);
  }
  container.appendChild(chips);

  const form = document.createElement('form');
  form.className = 'chat-form';
  const input = document.createElement('input');
  input.type = 'text';
  input.dataset.testid = 'chat-input';
  input.placeholder = 'write what you are really thinking...';
  input.value = model.inputBuffer;
  input.addEventListener('input', () => {
    model.inputBuffer = input.value;
  });
  const submit = document.createElement('button');
  submit.type = 'submit';
  submit.dataset.testid = 'chat-submit';
  submit.textContent = 'send';
  submit.disabled = model.pending || view.phase !== 'dialogue';
  form.appendChild(input);
  form.appendChild(submit);
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    if (model.pending || !input.value.trim()) return;
    handlers.onSubmit(input.value);
  });
  container.appendChild(form);
}
