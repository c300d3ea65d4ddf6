import { ApiClient, ApiError } from './api.js'
import { renderError, renderResult, renderSession } from './render.js'
import { SessionController, View } from './session.js'

// Browser entry point: one active session per tab, driven entirely by the
// service. The space id comes from the ?space= query parameter.

function mount(root: HTMLElement) {
  const api = new ApiClient('')
  const controller = new SessionController(api)
  const spaceId = new URLSearchParams(window.location.search).get('space')

  function show(view: View) {
    if (view.kind === 'session') {
      root.innerHTML = renderSession(view)
      bind('answer-correct', () => answer(true))
      bind('answer-wrong', () => answer(false))
    } else {
      root.innerHTML = renderResult(view)
    }
  }

  function showError(err: unknown, retry: () => void) {
    const message =
      err instanceof ApiError
        ? err.status === 404
          ? 'Not found: check the space id in the URL.'
          : err.message
        : String(err)
    root.innerHTML = renderError(message, true)
    bind('retry', retry)
  }

  function bind(id: string, handler: () => void) {
    const el = root.querySelector(`#${id}`)
    if (el) el.addEventListener('click', handler, { once: true })
  }

  function answer(correct: boolean) {
    controller.submitAnswer(correct).then(show, (err) => showError(err, () => answer(correct)))
  }

  function begin() {
    if (!spaceId) {
      root.innerHTML = renderError('Add ?space=<id> to the URL to start.', false)
      return
    }
    controller.start(spaceId).then(show, (err) => showError(err, begin))
  }

  begin()
}

const root = document.getElementById('app')
if (root) mount(root)
