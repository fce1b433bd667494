// Thin typed client; every state change in the UI originates from one of
// these calls.

import type { Reply, SceneDocument, SceneSummary, SessionSnapshot } from './types.js';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
    this.name = 'ApiError';
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === 'string') detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    private readonly base: string = '',
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.base + path, init);
    if (!response.ok) throw await parseError(response);
    return response.json() as Promise<T>;
  }

  listScenes(): Promise<SceneSummary[]> {
    return this.request('/api/scenes');
  }

  getScene(sceneId: string): Promise<SceneDocument> {
    return this.request(`/api/scenes/${encodeURIComponent(sceneId)}`);
  }

  imageUrl(sceneId: string): string {
    return `${this.base}/api/scenes/${encodeURIComponent(sceneId)}/image`;
  }

  startSession(sceneId: string, expression: string): Promise<SessionSnapshot> {
    return this.request('/api/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ scene_id: sceneId, expression }),
    });
  }

  answer(sessionId: string, reply: Reply): Promise<SessionSnapshot> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}/answer`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ reply }),
    });
  }

  getSession(sessionId: string): Promise<SessionSnapshot> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  getTranscript(sessionId: string): Promise<unknown[]> {
    return this.request(`/api/sessions/${encodeURIComponent(sessionId)}/transcript`);
  }
}
