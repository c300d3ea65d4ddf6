// Thin typed client for the assessment service. Every request the app makes
// goes through this module; there is no other backend and no local
// assessment logic.

export interface SpaceSummary {
  domain_size: number
  state_count: number
  learning_space: boolean
  base_size: number
}

export interface SessionOptions {
  seed?: number
  zeta?: number
  threshold?: number
  max_trials?: number
}

export interface NextQuestion {
  item: string
  display_text: string
  trial: number
  max_prob: number
}

export interface AnswerOutcome {
  status: 'active' | 'finished'
  max_prob: number
}

export interface TranscriptEntry {
  trial: number
  item: string
  response: number
  max_prob: number
  entropy: number
}

export interface SessionResult {
  state: string[]
  inner_fringe: string[]
  outer_fringe: string[]
  transcript: TranscriptEntry[]
}

// Raised for any non-2xx service response; status 0 means the service was
// unreachable (network failure before a response arrived).
export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message)
    this.name = 'ApiError'
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method,
        headers: body === undefined ? undefined : { 'content-type': 'application/json' },
        body: body === undefined ? undefined : JSON.stringify(body),
      })
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`)
    }
    if (!response.ok) {
      let detail = response.statusText
      try {
        const payload = await response.json()
        if (payload && typeof payload.detail === 'string') detail = payload.detail
      } catch {
        // keep the status text
      }
      throw new ApiError(response.status, detail)
    }
    return (await response.json()) as T
  }

  uploadSpace(doc: unknown): Promise<{ id: string }> {
    return this.request('POST', '/spaces', doc)
  }

  spaceSummary(spaceId: string): Promise<SpaceSummary> {
    return this.request('GET', `/spaces/${spaceId}/summary`)
  }

  createSession(spaceId: string, options: SessionOptions): Promise<{ id: string; status: string }> {
    return this.request('POST', `/spaces/${spaceId}/sessions`, options)
  }

  next(sessionId: string): Promise<NextQuestion> {
    return this.request('GET', `/sessions/${sessionId}/next`)
  }

  answer(
    sessionId: string,
    item: string,
    correct: boolean,
    idempotencyKey: string,
  ): Promise<AnswerOutcome> {
    return this.request('POST', `/sessions/${sessionId}/answer`, {
      item,
      correct,
      idempotency_key: idempotencyKey,
    })
  }

  result(sessionId: string): Promise<SessionResult> {
    return this.request('GET', `/sessions/${sessionId}/result`)
  }
}
