import { SessionApi } from './api.js';
import { SessionApp } from './app.js';

function intakeForm(root: HTMLElement, onReady: (profile: {
  age: number; gender: string; identity: string; stressor_text: string;
}) => void): void {
  root.innerHTML = `
    <form class="intake" data-testid="intake-form">
      <h1>Before we begin</h1>
      <label>age <input name="age" type="number" min="1" required></label>
      <label>gender <input name="gender" required></label>
      <label>identity <input name="identity" placeholder="e.g. student" required></label>
      <label>what has been stressing you lately?
        <textarea name="stressor_text" required></textarea></label>
      <button type="submit">start</button>
    </form>`;
  const form = root.querySelector<HTMLFormElement>('form')!;
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(form);
    onReady({
      age: Number(data.get('age')),
      gender: String(data.get('gender')),
      identity: String(data.get('identity')),
      stressor_text: String(data.get('stressor_text')),
    });
  });
}

const root = document.getElementById('app');
if (root) {
  const api = new SessionApi('');
  intakeForm(root, (profile) => {
    const app = new SessionApp(root, api);
    void app.start(profile).catch((error) => {
      root.innerHTML = `<p class="fatal">could not start a session: ${String(error)}</p>`;
    });
  });
}
