import { ApiClient, ApiError, SessionOptions, TranscriptEntry } from './api.js'

// The two things the app can show for a live session. Both are verbatim
// service payloads; the controller never selects questions or updates
// beliefs on its own.

export interface SessionView {
  kind: 'session'
  sessionId: string
  item: string
  displayText: string
  trial: number
  maxProb: number
  status: 'active'
}

export interface ResultView {
  kind: 'result'
  sessionId: string
  state: string[]
  innerFringe: string[]
  outerFringe: string[]
  transcript: TranscriptEntry[]
}

export type View = SessionView | ResultView

function freshKey(): string {
  if (typeof crypto !== 'undefined' && crypto.randomUUID) return crypto.randomUUID()
  return `key-${Date.now()}-${Math.random().toString(36).slice(2)}`
}

// Drives one session at a time. All mutations pass through a single
// in-flight gate, and each answer carries an idempotency key that is only
// rotated after the service acknowledged the submission, so a retry after
// a network drop resolves to exactly one recorded answer.
export class SessionController {
  private sessionId: string | null = null
  private currentItem: string | null = null
  private pendingKey: string | null = null
  private inflight = false
  private finished = false

  constructor(private api: ApiClient) {}

  async start(spaceId: string, options: SessionOptions = {}): Promise<SessionView> {
    const created = await this.api.createSession(spaceId, options)
    this.sessionId = created.id
    this.pendingKey = null
    this.finished = false
    return this.fetchNext()
  }

  private async fetchNext(): Promise<SessionView> {
    const sessionId = this.requireSession()
    const q = await this.api.next(sessionId)
    this.currentItem = q.item
    return {
      kind: 'session',
      sessionId,
      item: q.item,
      displayText: q.display_text,
      trial: q.trial,
      maxProb: q.max_prob,
      status: 'active',
    }
  }

  async submitAnswer(correct: boolean): Promise<View> {
    const sessionId = this.requireSession()
    if (this.inflight) throw new ApiError(0, 'another request is in flight')
    if (this.finished) return this.fetchResult()
    if (this.currentItem === null) throw new ApiError(0, 'no question to answer')
    // reuse the pending key when retrying a dropped submission
    if (this.pendingKey === null) this.pendingKey = freshKey()
    this.inflight = true
    try {
      const outcome = await this.api.answer(sessionId, this.currentItem, correct, this.pendingKey)
      this.pendingKey = null
      this.currentItem = null
      if (outcome.status === 'finished') {
        this.finished = true
        return this.fetchResult()
      }
      return this.fetchNext()
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // the session already finished (e.g. a retry raced its own success)
        this.pendingKey = null
        this.finished = true
        return this.fetchResult()
      }
      throw err
    } finally {
      this.inflight = false
    }
  }

  private async fetchResult(): Promise<ResultView> {
    const sessionId = this.requireSession()
    const r = await this.api.result(sessionId)
    return {
      kind: 'result',
      sessionId,
      state: r.state,
      innerFringe: r.inner_fringe,
      outerFringe: r.outer_fringe,
      transcript: r.transcript,
    }
  }

  private requireSession(): string {
    if (this.sessionId === null) throw new ApiError(0, 'no active session')
    return this.sessionId
  }
}
