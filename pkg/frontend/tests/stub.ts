/** In-process stub server: canned JSON responses plus a request log. */

import { vi } from 'vitest';

import type { ApiSessionView } from '../src/api.js';

export interface RecordedRequest {
  url: string;
  method: string;
  body: unknown;
}

export class StubServer {
  requests: RecordedRequest[] = [];
  private responses: { status: number; body: unknown }[] = [];

  queue(body: unknown, status = 200): void {
    this.responses.push({ status, body });
  }

  /** Requests matching a predicate (e.g. turn posts). */
  posts(pathPart: string): RecordedRequest[] {
    return this.requests.filter(
      (r) => r.method === 'POST' && r.url.includes(pathPart),
    );
  }

  install(): void {
    vi.stubGlobal(
      'fetch',
      vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
        this.requests.push({
          url: String(url),
          method: init?.method ?? 'GET',
          body: init?.body ? JSON.parse(String(init.body)) : null,
        });
        const next = this.responses.shift() ?? {
          status: 500,
          body: { detail: 'stub exhausted' },
        };
        return new Response(JSON.stringify(next.body), {
          status: next.status,
          headers: { 'Content-Type': 'application/json' },
        });
      }),
    );
  }
}

export function makeView(overrides: Partial<ApiSessionView> = {}): ApiSessionView {
  return {
    session_id: 's1',
    phase: 'dialogue',
    progress_fraction: 0,
    npc_reply: 'Welcome. What has been weighing on you?',
    suggested_replies: [],
    active_minigame: null,
    safe_mode: false,
    ...overrides,
  };
}

export async function settle(): Promise<void> {
  // Drain both micro- and macrotasks so fetch/json chains finish.
  for (let i = 0; i < 4; i += 1) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
