import { ResultView, SessionView } from './session.js'

// Pure HTML renderers so the views are testable without a DOM. main.ts
// assigns the output to innerHTML and wires the buttons by id.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
}

function itemList(items: string[]): string {
  if (items.length === 0) return '<em>none</em>'
  return items.map((q) => `<code>${escapeHtml(q)}</code>`).join(', ')
}

export function renderSession(view: SessionView): string {
  const percent = Math.round(view.maxProb * 100)
  return [
    '<section class="session">',
    `  <p class="trial">Question ${view.trial}</p>`,
    `  <p class="question">${escapeHtml(view.displayText)}</p>`,
    `  <progress max="100" value="${percent}"></progress>`,
    `  <p class="progress-label">confidence ${percent}%</p>`,
    '  <button id="answer-correct">I solved it</button>',
    '  <button id="answer-wrong">I could not solve it</button>',
    '</section>',
  ].join('\n')
}

export function renderResult(view: ResultView): string {
  return [
    '<section class="result">',
    '  <h2>Assessment finished</h2>',
    `  <p>Knowledge state: ${itemList(view.state)}</p>`,
    `  <p>Just mastered (inner fringe): ${itemList(view.innerFringe)}</p>`,
    `  <p>Ready to learn (outer fringe): ${itemList(view.outerFringe)}</p>`,
    `  <p class="transcript">${view.transcript.length} questions asked</p>`,
    '</section>',
  ].join('\n')
}

export function renderError(message: string, retryable: boolean): string {
  const retry = retryable ? '\n  <button id="retry">Retry</button>' : ''
  return `<section class="error" role="alert">\n  <p>${escapeHtml(message)}</p>${retry}\n</section>`
}
