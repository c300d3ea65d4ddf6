import { describe, expect, it } from 'vitest'

import { renderError, renderResult, renderSession } from '../src/render.js'

describe('render', () => {
  it('renders the current question with trial and progress', () => {
    const html = renderSession({
      kind: 'session',
      sessionId: 's',
      item: 'a',
      displayText: 'What is 2 < 3?',
      trial: 4,
      maxProb: 0.42,
      status: 'active',
    })
    expect(html).toContain('Question 4')
    expect(html).toContain('What is 2 &lt; 3?')
    expect(html).toContain('value="42"')
    expect(html).toContain('id="answer-correct"')
    expect(html).toContain('id="answer-wrong"')
  })

  it('renders the fringe report', () => {
    const html = renderResult({
      kind: 'result',
      sessionId: 's',
      state: ['c', 'g'],
      innerFringe: ['g'],
      outerFringe: ['h'],
      transcript: [],
    })
    expect(html).toContain('Knowledge state')
    expect(html).toContain('<code>g</code>')
    expect(html).toContain('Ready to learn')
    expect(html).toContain('0 questions asked')
  })

  it('renders an empty fringe as "none"', () => {
    const html = renderResult({
      kind: 'result',
      sessionId: 's',
      state: [],
      innerFringe: [],
      outerFringe: [],
      transcript: [],
    })
    expect(html).toContain('<em>none</em>')
  })

  it('renders errors with an optional retry button', () => {
    expect(renderError('boom <script>', true)).toContain('boom &lt;script&gt;')
    expect(renderError('boom', true)).toContain('id="retry"')
    expect(renderError('boom', false)).not.toContain('id="retry"')
  })
})
