/** Full-screen safety overlay. Once the server reports safe mode the modal
 * stays up for the rest of the session; the only live control is exit. */

import type { UiSessionModel } from './model.js';

export function renderSafetyModal(
  container: HTMLElement,
  model: UiSessionModel,
  onExit: () => void,
): void {
  const existing = container.querySelector('[data-testid="safety-modal"]');
  if (!model.safetyShown) {
    existing?.remove();
    enableInputs(container, true);
    return;
  }
  enableInputs(container, false);
  if (existing) return;

  const modal = document.createElement('div');
  modal.className = 'safety-modal';
  modal.dataset.testid = 'safety-modal';
  const message = document.createElement('p');
  message.textContent =
    'This conversation has been paused for your safety. Please consider ' +
    'closing the game and reaching out to a local hospital or mental ' +
    'health institution. You are not alone, and direct support can help.';
  const exit = document.createElement('button');
  exit.dataset.testid = 'safety-exit';
  exit.textContent = 'exit the game';
  exit.addEventListener('click', onExit);
  modal.appendChild(message);
  modal.appendChild(exit);
  container.appendChild(modal);
}

function enableInputs(container: HTMLElement, enabled: boolean): void {
  const controls = container.querySelectorAll<HTMLInputElement | HTMLButtonElement>(
    'input, button, textarea',
  );
  controls.forEach((control) => {
    if (control.dataset.testid === 'safety-exit') return;
    control.disabled = !enabled;
  });
}
