/** Score progress: a vertical bar plus the cloud layer over the scene.
 * The clouds dissipate exactly as the server-reported fraction grows;
 * nothing here does score arithmetic. */

import { cloudOpacity, progressFraction, type UiSessionModel } from './model.js';

export function renderProgress(container: HTMLElement, model: UiSessionModel): void {
  container.innerHTML = '';
  const fraction = progressFraction(model);

  const bar = document.createElement('div');
  bar.className = 'progress-bar';
  const fill = document.createElement('div');
  fill.className = 'progress-fill';
  fill.dataset.testid = 'progress-fill';
  fill.style.height = `${fraction * 100}%`;
  bar.appendChild(fill);
  container.appendChild(bar);

  const clouds = document.createElement('div');
  clouds.className = 'cloud-layer';
  clouds.dataset.testid = 'cloud-layer';
  clouds.style.opacity = String(cloudOpacity(model));
  container.appendChild(clouds);

  if (fraction >= 1) {
    const done = document.createElement('div');
    done.className = 'completion-screen';
    done.dataset.testid = 'completion-screen';
    done.textContent = 'The clouds have cleared. Level complete!';
    container.appendChild(done);
  }
}
