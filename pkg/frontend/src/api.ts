/** Typed client for the session service. The browser never computes game
 * state itself: every number it renders arrives in an ApiSessionView. */

/** Active mini-game descriptor as served by the backend. */
export interface MiniGameDescriptor {
  game: 'breathing' | 'match3' | 'five_senses';
  /** breathing */
  phase?: string;
  completed_cycles?: number;
  target_cycles?: number;
  /** match3 */
  cells?: number[][];
  score?: number;
  target_tiles?: number;
  last_eliminated?: number;
  /** grounding */
  image_ref?: string;
  slots?: Record<string, number>;
}

/** One session snapshot; the single source of truth for rendering. */
export interface ApiSessionView {
  session_id: string;
  phase: string;
  progress_fraction: number;
  npc_reply: string;
  suggested_replies: string[];
  active_minigame: MiniGameDescriptor | null;
  safe_mode: boolean;
  minigame_outcome?: Record<string, unknown>;
}

export interface ProfileInput {
  age: number;
  gender: string;
  identity: string;
  stressor_text: string;
}

export interface MiniGameEvent {
  game: string;
  event_kind: string;
  timestamp?: number;
  path?: number[][];
  form?: Record<string, string[]>;
  request_id?: string;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { 'Content-Type': 'application/json' },
    ...init,
  });
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = (await response.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class SessionApi {
  constructor(private baseUrl: string = '') {}

  createSession(profile: ProfileInput & { seed?: number }): Promise<{ session_id: string }> {
    return request(`${this.baseUrl}/sessions`, {
      method: 'POST',
      body: JSON.stringify(profile),
    });
  }

  getSession(id: string): Promise<ApiSessionView> {
    return request(`${this.baseUrl}/sessions/${id}`);
  }

  postTurn(id: string, text: string, requestId?: string): Promise<ApiSessionView> {
    return request(`${this.baseUrl}/sessions/${id}/turn`, {
      method: 'POST',
      body: JSON.stringify({ text, request_id: requestId }),
    });
  }

  postMiniGameEvent(id: string, event: MiniGameEvent): Promise<ApiSessionView> {
    return request(`${this.baseUrl}/sessions/${id}/minigame/event`, {
      method: 'POST',
      body: JSON.stringify(event),
    });
  }

  exitSession(id: string): Promise<ApiSessionView> {
    return request(`${this.baseUrl}/sessions/${id}/exit`, { method: 'POST' });
  }

  postVas(id: string, value: number): Promise<{ day: number }> {
    return request(`${this.baseUrl}/sessions/${id}/vas`, {
      method: 'POST',
      body: JSON.stringify({ value }),
    });
  }
}
