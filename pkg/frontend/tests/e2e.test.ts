import { spawn, ChildProcess } from 'node:child_process'
import { mkdtempSync } from 'node:fs'
import { tmpdir } from 'node:os'
import { join } from 'node:path'
import { afterAll, beforeAll, describe, expect, it } from 'vitest'

import { ApiClient } from '../src/api.js'
import { SessionController } from '../src/session.js'

// End-to-end: spawn the real assessment service, run a live session through
// the controller answering as a straight student, and check the fringe
// report. A second, UI-free run with the same seed must see the identical
// transcript, proving the frontend adds no behavior of its own.

const TEN_ITEM_STATES = [
  [], ['c'], ['i'], ['g'], ['c', 'i'], ['g', 'i'], ['h', 'i'], ['g', 'h'],
  ['c', 'g'], ['c', 'g', 'h'], ['c', 'h', 'i'], ['c', 'g', 'i'],
  ['g', 'h', 'i'], ['c', 'g', 'h', 'i'], ['b', 'g', 'h', 'i'],
  ['a', 'g', 'h', 'i'], ['b', 'c', 'g', 'h', 'i'], ['a', 'c', 'g', 'h', 'i'],
  ['c', 'g', 'h', 'i', 'j'], ['a', 'b', 'g', 'h', 'i'],
  ['c', 'f', 'g', 'h', 'i', 'j'], ['b', 'c', 'g', 'h', 'i', 'j'],
  ['a', 'c', 'g', 'h', 'i', 'j'], ['a', 'b', 'c', 'g', 'h', 'i'],
  ['a', 'b', 'c', 'f', 'g', 'h', 'i'], ['a', 'b', 'c', 'g', 'h', 'i', 'j'],
  ['b', 'c', 'f', 'g', 'h', 'i', 'j'], ['a', 'c', 'f', 'g', 'h', 'i', 'j'],
  ['a', 'b', 'c', 'f', 'g', 'h', 'i', 'j'],
  ['b', 'c', 'd', 'f', 'g', 'h', 'i', 'j'],
  ['a', 'c', 'd', 'f', 'g', 'h', 'i', 'j'],
  ['a', 'b', 'c', 'd', 'g', 'h', 'i', 'j'],
  ['a', 'b', 'c', 'd', 'f', 'g', 'h', 'i', 'j'],
  ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j'],
]

const SPACE_DOC = {
  format_version: 1,
  domain: ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j'],
  states: TEN_ITEM_STATES,
}

const PORT = 8900 + (process.pid % 500)
const BASE = `http://127.0.0.1:${PORT}`
const LATENT = new Set(['c', 'g', 'h', 'i', 'j'])

let server: ChildProcess

async function waitForService(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const r = await fetch(`${BASE}/spaces/probe`)
      if (r.status === 404) return
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100))
  }
  throw new Error('service did not come up')
}

beforeAll(async () => {
  const dataDir = mkdtempSync(join(tmpdir(), 'kst-e2e-'))
  server = spawn('python3', ['-m', 'kst.cli', 'serve', '--port', String(PORT),
                             '--data-dir', dataDir],
                 { stdio: 'ignore' })
  await waitForService()
}, 30000)

afterAll(() => {
  server.kill()
})

describe('live session against the real service', () => {
  it('recovers the fringes of {c,g,h,i,j} for a straight student', async () => {
    const api = new ApiClient(BASE)
    const spaceId = (await api.uploadSpace(SPACE_DOC)).id

    const summary = await api.spaceSummary(spaceId)
    expect(summary.state_count).toBe(34)
    expect(summary.learning_space).toBe(true)

    const controller = new SessionController(api)
    const uiItems: string[] = []
    let view = await controller.start(spaceId, { seed: 5 })
    let guard = 0
    while (view.kind === 'session') {
      uiItems.push(view.item)
      const next = await controller.submitAnswer(LATENT.has(view.item))
      if (next.kind === 'result') {
        expect(next.state).toEqual(['c', 'g', 'h', 'i', 'j'])
        expect(next.innerFringe).toEqual(['j'])
        expect(next.outerFringe).toEqual(['a', 'b', 'f'])
        expect(next.transcript.map((e) => e.item)).toEqual(uiItems)
        break
      }
      view = next
      if (++guard > 250) throw new Error('session did not terminate')
    }

    // UI-off control run with the same seed, raw HTTP only
    const created = await fetch(`${BASE}/spaces/${spaceId}/sessions`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify({ seed: 5 }),
    })
    const rawSession = (await created.json()).id
    for (;;) {
      const nx = await fetch(`${BASE}/sessions/${rawSession}/next`)
      if (nx.status === 409) break
      const { item } = await nx.json()
      const r = await fetch(`${BASE}/sessions/${rawSession}/answer`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ item, correct: LATENT.has(item) }),
      })
      if ((await r.json()).status === 'finished') break
    }
    const rawResult = await (await fetch(`${BASE}/sessions/${rawSession}/result`)).json()
    expect(rawResult.transcript.map((e: { item: string }) => e.item)).toEqual(uiItems)
    expect(rawResult.state).toEqual(['c', 'g', 'h', 'i', 'j'])
  }, 60000)

  it('resolves a duplicated answer to exactly one recorded trial', async () => {
    const api = new ApiClient(BASE)
    const spaceId = (await api.uploadSpace(SPACE_DOC)).id
    const session = (await api.createSession(spaceId, { seed: 7 })).id
    const q = await api.next(session)
    const first = await api.answer(session, q.item, true, 'dup-key')
    const again = await api.answer(session, q.item, true, 'dup-key')
    expect(again).toEqual(first)
    const after = await api.next(session)
    expect(after.trial).toBe(2)
  }, 30000)
})
