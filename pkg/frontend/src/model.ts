/** Client-side session model.
 *
 * Rendering state derives only from the latest ApiSessionView plus local
 * input buffers; there is no scoring logic in the client, and the safety
 * modal, once shown, stays latched for the life of the session.
 */

import type { ApiSessionView } from './api.js';

export interface UiSessionModel {
  view: ApiSessionView | null;
  /** Text currently in the player's input box. */
  inputBuffer: string;
  /** True while a turn request is in flight (submit stays disabled). */
  pending: boolean;
  /** Latched the first time the server reports safe mode. */
  safetyShown: boolean;
  /** Current network failure message, if any (retry banner). */
  networkError: string | null;
}

export function emptyModel(): UiSessionModel {
  return {
    view: null,
    inputBuffer: '',
    pending: false,
    safetyShown: false,
    networkError: null,
  };
}

/** Adopt a fresh server view; the safety latch only ever turns on. */
export function applyView(model: UiSessionModel, view: ApiSessionView): UiSessionModel {
  model.view = view;
  model.networkError = null;
  if (view.safe_mode) {
    model.safetyShown = true;
  }
  return model;
}

export function progressFraction(model: UiSessionModel): number {
  return model.view ? model.view.progress_fraction : 0;
}

/** Cloud overlay opacity: clouds fade exactly as progress grows. */
export function cloudOpacity(model: UiSessionModel): number {
  return 1 - progressFraction(model);
}

export function isComplete(model: UiSessionModel): boolean {
  return model.view?.phase === 'completed';
}

export function isTerminal(model: UiSessionModel): boolean {
  const phase = model.view?.phase;
  return phase === 'completed' || phase === 'safe_mode_terminated' || phase === 'exited';
}
