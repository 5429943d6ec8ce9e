/** Application shell: creates the session, renders every surface off the
 * latest server view, and funnels all interactions through the API with a
 * single in-flight request at a time. */

import { ApiError, SessionApi, type MiniGameEvent } from './api.js';
import { BreathingController, renderBreathing } from './breathing.js';
import { renderChat } from './chat.js';
import { renderGrounding } from './grounding.js';
import { renderMatch3 } from './match3.js';
import { applyView, emptyModel, isComplete, isTerminal, type UiSessionModel } from './model.js';
import { renderProgress } from './progress.js';
import { renderSafetyModal } from './safety.js';

export class SessionApp {
  readonly model: UiSessionModel = emptyModel();
  private sessionId = '';
  private breathing: BreathingController | null = null;
  private lastTurn: { text: string; requestId: string } | null = null;
  private vasRecorded = false;

  constructor(
    private root: HTMLElement,
    private api: SessionApi,
    private makeRequestId: () => string = () => crypto.randomUUID(),
  ) {}

  async start(profile: { age: number; gender: string; identity: string; stressor_text: string }) {
    const { session_id } = await this.api.createSession(profile);
    this.sessionId = session_id;
    applyView(this.model, await this.api.getSession(session_id));
    this.render();
  }

  /** One dialogue submit = exactly one turn request; a duplicate submit
   * while pending is ignored, and a retry reuses the same request id so the
   * server cannot double-score. */
  async submitTurn(text: string): Promise<void> {
    if (this.model.pending || !this.sessionId) return;
    this.lastTurn = { text, requestId: this.makeRequestId() };
    await this.postTurn();
  }

  async retryLastTurn(): Promise<void> {
    if (this.model.pending || !this.lastTurn) return;
    await this.postTurn();
  }

  private async postTurn(): Promise<void> {
    if (!this.lastTurn) return;
    this.model.pending = true;
    this.render();
    try {
      const view = await this.api.postTurn(
        this.sessionId,
        this.lastTurn.text,
        this.lastTurn.requestId,
      );
      applyView(this.model, view);
      this.model.inputBuffer = '';
      this.lastTurn = null;
    } catch (error) {
      this.model.networkError = describeError(error);
    } finally {
      this.model.pending = false;
      this.render();
    }
  }

  async sendMiniGameEvent(event: MiniGameEvent): Promise<void> {
    if (!this.sessionId) return;
    try {
      const view = await this.api.postMiniGameEvent(this.sessionId, event);
      applyView(this.model, view);
    } catch (error) {
      this.model.networkError = describeError(error);
    }
    this.render();
  }

  async exit(): Promise<void> {
    if (!this.sessionId) return;
    try {
      applyView(this.model, await this.api.exitSession(this.sessionId));
    } catch (error) {
      this.model.networkError = describeError(error);
    }
    this.render();
  }

  async recordVas(value: number): Promise<void> {
    if (!this.sessionId || this.vasRecorded) return;
    await this.api.postVas(this.sessionId, value);
    this.vasRecorded = true;
    this.render();
  }

  render(): void {
    const root = this.root;
    let layout = root.querySelector<HTMLElement>('.layout');
    if (!layout) {
      root.innerHTML = '';
      layout = document.createElement('div');
      layout.className = 'layout';
      layout.innerHTML =
        '<header class="topbar"><button data-testid="exit-button" class="exit"></button></header>' +
        '<main><section data-role="scene"></section>' +
        '<section data-role="minigame"></section>' +
        '<section data-role="chat"></section>' +
        '<section data-role="progress"></section>' +
        '<section data-role="vas"></section></main>';
      const exit = layout.querySelector<HTMLButtonElement>('[data-testid="exit-button"]')!;
      exit.textContent = 'exit';
      exit.addEventListener('click', () => void this.exit());
      root.appendChild(layout);
    }

    const section = (role: string) =>
      layout!.querySelector<HTMLElement>(`[data-role="${role}"]`)!;

    renderChat(section('chat'), this.model, {
      onSubmit: (text) => void this.submitTurn(text),
      onRetry: () => void this.retryLastTurn(),
    });
    renderProgress(section('progress'), this.model);
    this.renderMiniGame(section('minigame'));
    this.renderVas(section('vas'));
    renderSafetyModal(root, this.model, () => void this.exit());
  }

  private renderMiniGame(container: HTMLElement): void {
    const game = this.model.view?.active_minigame ?? null;
    if (!game || this.model.view?.phase !== 'mini_game_active') {
      container.innerHTML = '';
      this.teardownBreathing();
      return;
    }
    if (game.game === 'breathing') {
      renderBreathing(container, game);
      if (!this.breathing) {
        this.breathing = new BreathingController((kind, timestamp) =>
          void this.sendMiniGameEvent({
            game: 'breathing',
            event_kind: kind,
            timestamp,
          }),
        );
        this.breathing.attach();
      }
      return;
    }
    this.teardownBreathing();
    if (game.game === 'match3') {
      renderMatch3(container, game, (path) =>
        void this.sendMiniGameEvent({ game: 'match3', event_kind: 'chain', path }),
      );
    } else {
      renderGrounding(container, game, (form) =>
        void this.sendMiniGameEvent({ game: 'five_senses', event_kind: 'submit', form }),
      );
    }
  }

  private renderVas(container: HTMLElement): void {
    container.innerHTML = '';
    if (!isTerminal(this.model) || this.model.safetyShown) return;
    if (this.vasRecorded) {
      const done = document.createElement('p');
      done.dataset.testid = 'vas-recorded';
      done.textContent = 'Thanks, your stress rating is saved for today.';
      container.appendChild(done);
      return;
    }
    const form = document.createElement('form');
    form.className = 'vas-form';
    const label = document.createElement('label');
    label.textContent = isComplete(this.model)
      ? 'Before you go: how stressed do you feel right now? (0 none - 10 extreme)'
      : 'How stressed do you feel right now? (0 none - 10 extreme)';
    const slider = document.createElement('input');
    slider.type = 'range';
    slider.min = '0';
    slider.max = '10';
    slider.step = '1';
    slider.value = '5';
    slider.dataset.testid = 'vas-slider';
    const save = document.createElement('button');
    save.type = 'submit';
    save.dataset.testid = 'vas-save';
    save.textContent = 'save';
    form.append(label, slider, save);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      void this.recordVas(Number(slider.value));
    });
    container.appendChild(form);
  }

  private teardownBreathing(): void {
    if (this.breathing) {
      this.breathing.detach();
      this.breathing = null;
    }
  }
}

function describeError(error: unknown): string {
  if (error instanceof ApiError) return `${error.status}: ${error.message}`;
  return error instanceof Error ? error.message : String(error);
}
