"""Space files on disk, the append-only session store, and the HTTP service.

A space file is a JSON document:

    {
      "format_version": 1,
      "domain": ["a", "b", ...],
      "states": [[], ["a"], ...],
      "distribution": [...],            # optional, aligned with states
      "metadata": {"name": ..., "description": ...,
                   "display_text": {"a": "question text", ...}}   # optional
    }

Unknown top-level fields are kept on save.  The service persists every
mutation as one JSONL event and rebuilds all sessions by replay on startup,
so a crash loses nothing that was acknowledged.
"""

from __future__ import annotations

import json
import os
import threading
import uuid

from fastapi import FastAPI, HTTPException, Request

from .errors import KstError, MissingEmptyOrFull, ParseError, StoreCorruption
from .structures import Domain, KnowledgeStructure, build_structure, classify, fringes
from .base_surmise import base
from .probabilistic import StateDistribution
from .assessment import (
    BeliefState,
    StopRule,
    choose_final_state,
    make_responder,
    select_question,
    simulate_response,
    update_distribution,
)

FORMAT_VERSION = 1


def space_to_doc(structure: KnowledgeStructure, distribution=None, metadata=None,
                 extra=None) -> dict:
    doc = dict(extra or {})
    doc["format_version"] = FORMAT_VERSION
    doc["domain"] = list(structure.domain.items)
    doc["states"] = [sorted(structure.domain.decode(k)) for k in structure.states]
    if distribution is not None:
        doc["distribution"] = list(distribution)
    if metadata is not None:
        doc["metadata"] = metadata
    return doc


def doc_to_space(doc) -> KnowledgeStructure:
    if not isinstance(doc, dict):
        raise ParseError("space document must be a JSON object")
    for key in ("domain", "states"):
        if key not in doc:
            raise ParseError(f"space document lacks the {key!r} field")
    items = doc["domain"]
    if not isinstance(items, list) or not all(isinstance(q, str) for q in items):
        raise ParseError("'domain' must be a list of item names")
    try:
        domain = Domain(items)
    except ValueError as e:
        raise ParseError(str(e)) from None
    masks = []
    for pos, s in enumerate(doc["states"]):
        if not isinstance(s, list):
            raise ParseError(f"state #{pos} is not a list")
        for q in s:
            if q not in domain.index:
                raise ParseError(f"state #{pos} names unknown item {q!r}")
        masks.append(domain.encode(s))
    return build_structure(domain, masks)


def load_space(path):
    """Read a space file.  Returns (structure, document)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None
    return doc_to_space(doc), doc


def save_space(structure: KnowledgeStructure, path, distribution=None,
               metadata=None, extra=None):
    doc = space_to_doc(structure, distribution, metadata, extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def summarize_space(structure: KnowledgeStructure) -> dict:
    flags = classify(structure)
    return {
        "domain_size": structure.domain.size,
        "state_count": len(structure.states),
        "union_closed": flags.union_closed,
        "intersection_closed": flags.intersection_closed,
        "well_graded": flags.well_graded,
        "accessible": flags.accessible,
        "discriminative": flags.discriminative,
        "learning_space": flags.learning_space,
        "base_size": len(base(structure)) if flags.union_closed else None,
    }


class _Session:
    """One live assessment; mutations are serialized by the lock."""

    def __init__(self, session_id, space_id, structure, doc, config):
        self.id = session_id
        self.space_id = space_id
        self.structure = structure
        self.display_text = (doc.get("metadata") or {}).get("display_text") or {}
        self.config = config
        self.stop = StopRule(max_prob_threshold=config.get("threshold", 0.95),
                             max_trials=config.get("max_trials", 200))
        self.belief = BeliefState.start(structure, zeta=config.get("zeta", 2.0),
                                        seed=config.get("seed", 0))
        self.lock = threading.Lock()
        self.status = "active"
        self.result = None
        self.transcript = []
        self.current_item = None
        self._advance()
        if config.get("mode") == "simulated":
            self._run_simulated()

    def _run_simulated(self):
        latent = self.structure.domain.encode(self.config.get("latent", []))
        responder = make_responder(self.structure, latent,
                                   beta=float(self.config.get("beta", 0.0)))
        while self.status == "active":
            r = simulate_response(responder, self.current_item, self.belief.rng)
            self.apply_answer(self.current_item, bool(r))

    def _advance(self):
        if self.belief.max_prob() >= self.stop.max_prob_threshold \
                or len(self.transcript) >= self.stop.max_trials:
            self._finish()
        else:
            self.current_item = select_question(self.belief)

    def _finish(self):
        final = choose_final_state(self.belief)
        fr = fringes(self.structure, final)
        d = self.structure.domain
        self.status = "finished"
        self.current_item = None
        self.result = {
            "state": sorted(d.decode(final)),
            "inner_fringe": sorted(d.decode(fr.inner)),
            "outer_fringe": sorted(d.decode(fr.outer)),
            "transcript": list(self.transcript),
        }

    def apply_answer(self, item, correct):
        self.belief = update_distribution(self.belief, item, 1 if correct else 0)
        self.transcript.append({
            "trial": self.belief.trial - 1,
            "item": item,
            "response": 1 if correct else 0,
            "max_prob": self.belief.max_prob(),
        })
        self._advance()


class SessionService:
    """All spaces and sessions, backed by an append-only JSONL event log."""

    def __init__(self, data_dir):
        self.data_dir = data_dir
        os.makedirs(data_dir, exist_ok=True)
        self.log_path = os.path.join(data_dir, "events.jsonl")
        self.spaces = {}    # id -> (structure, doc)
        self.sessions = {}  # id -> _Session
        self.idempotent = {}  # key -> recorded response
        self.write_lock = threading.Lock()
        self._replay()

    def _replay(self):
        if not os.path.exists(self.log_path):
            return
        with open(self.log_path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    ev = json.loads(line)
                    self._apply(ev, replaying=True)
                except (json.JSONDecodeError, KeyError, KstError) as e:
                    raise StoreCorruption(
                        f"{self.log_path}:{lineno}: {e}") from None

    def _append(self, ev):
        with self.write_lock:
            with open(self.log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(ev, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def _apply(self, ev, replaying=False):
        kind = ev["type"]
        if kind == "space":
            structure = doc_to_space(ev["doc"])
            self.spaces[ev["id"]] = (structure, ev["doc"])
        elif kind == "session":
            structure, doc = self.spaces[ev["space_id"]]
            self.sessions[ev["id"]] = _Session(
                ev["id"], ev["space_id"], structure, doc, ev["config"])
        elif kind == "answer":
            self.sessions[ev["session_id"]].apply_answer(ev["item"], ev["correct"])
        elif kind == "idempotency":
            self.idempotent[ev["key"]] = ev["response"]
        else:
            raise StoreCorruption(f"unknown event type {kind!r}")

    def _record(self, ev, idempotency_key, response):
        self._append(ev)
        if idempotency_key:
            self.idempotent[idempotency_key] = response
            self._append({"type": "idempotency", "key": idempotency_key,
                          "response": response})

    def replayed_response(self, key):
        if key:
            return self.idempotent.get(key)
        return None

    def add_space(self, doc, idempotency_key=None):
        doc_to_space(doc)  # validate before persisting
        space_id = uuid.uuid4().hex[:12]
        ev = {"type": "space", "id": space_id, "doc": doc}
        self._apply(ev)
        response = {"id": space_id}
        self._record(ev, idempotency_key, response)
        return response

    def add_session(self, space_id, config, idempotency_key=None):
        if space_id not in self.spaces:
            raise KeyError(space_id)
        session_id = uuid.uuid4().hex[:12]
        ev = {"type": "session", "id": session_id, "space_id": space_id,
              "config": config}
        self._apply(ev)
        session = self.sessions[session_id]
        response = {"id": session_id, "status": session.status}
        self._record(ev, idempotency_key, response)
        return response

    def answer(self, session_id, item, correct, idempotency_key=None):
        session = self.sessions[session_id]
        with session.lock:
            if session.status != "active":
                raise PermissionError("session already finished")
            if item != session.current_item:
                raise ValueError(
                    f"expected an answer to {session.current_item!r}, got {item!r}")
            ev = {"type": "answer", "session_id": session_id,
                  "item": item, "correct": bool(correct)}
            self._apply(ev)
            response = {"status": session.status,
                        "max_prob": session.belief.max_prob()}
            self._record(ev, idempotency_key, response)
            return response


def create_app(data_dir=None):
    """FastAPI application factory; DATA_DIR env is the default store root."""
    data_dir = data_dir or os.environ.get("DATA_DIR", "./kst-data")
    svc = SessionService(data_dir)
    app = FastAPI(title="knowledge-space session service")
    app.state.service = svc

    def session_or_404(session_id):
        try:
            return svc.sessions[session_id]
        except KeyError:
            raise HTTPException(status_code=404, detail="no such session")

    @app.post("/spaces")
    async def post_space(request: Request):
        body = await request.json()
        key = body.pop("idempotency_key", None)
        replay = svc.replayed_response(key)
        if replay is not None:
            return replay
        try:
            return svc.add_space(body, idempotency_key=key)
        except (ParseError, MissingEmptyOrFull) as e:
            raise HTTPException(status_code=422, detail=str(e))

    @app.get("/spaces/{space_id}")
    def get_space(space_id: str):
        try:
            return svc.spaces[space_id][1]
        except KeyError:
            raise HTTPException(status_code=404, detail="no such space")

    @app.get("/spaces/{space_id}/summary")
    def get_summary(space_id: str):
        try:
            structure, _ = svc.spaces[space_id]
        except KeyError:
            raise HTTPException(status_code=404, detail="no such space")
        return summarize_space(structure)

    @app.post("/spaces/{space_id}/sessions")
    async def post_session(space_id: str, request: Request):
        body = await request.json()
        key = body.pop("idempotency_key", None)
        replay = svc.replayed_response(key)
        if replay is not None:
            return replay
        config = {
            "seed": int(body.get("seed", 0)),
            "zeta": float(body.get("zeta", 2.0)),
            "threshold": float(body.get("threshold", 0.95)),
            "max_trials": int(body.get("max_trials", 200)),
            "mode": body.get("mode", "interactive"),
        }
        if config["mode"] == "simulated":
            config["latent"] = list(body.get("latent", []))
            config["beta"] = float(body.get("beta", 0.0))
        elif config["mode"] != "interactive":
            raise HTTPException(status_code=422,
                                detail="mode must be interactive or simulated")
        try:
            return svc.add_session(space_id, config, idempotency_key=key)
        except KeyError:
            raise HTTPException(status_code=404, detail="no such space")

    @app.get("/sessions/{session_id}/next")
    def get_next(session_id: str):
        session = session_or_404(session_id)
        if session.status != "active":
            raise HTTPException(status_code=409, detail="session finished")
        item = session.current_item
        return {
            "item": item,
            "display_text": session.display_text.get(item, item),
            "trial": session.belief.trial,
            "max_prob": session.belief.max_prob(),
        }

    @app.post("/sessions/{session_id}/answer")
    async def post_answer(session_id: str, request: Request):
        body = await request.json()
        key = body.pop("idempotency_key", None)
        replay = svc.replayed_response(key)
        if replay is not None:
            return replay
        session = session_or_404(session_id)
        try:
            return svc.answer(session_id, body.get("item"),
                              bool(body.get("correct")), idempotency_key=key)
        except PermissionError as e:
            raise HTTPException(status_code=409, detail=str(e))
        except ValueError as e:
            raise HTTPException(status_code=409, detail=str(e))

    @app.get("/sessions/{session_id}/result")
    def get_result(session_id: str):
        session = session_or_404(session_id)
        if session.status != "finished":
            raise HTTPException(status_code=409, detail="session still active")
        return session.result

    return app


def serve(port=None, data_dir=None):
    """Run the HTTP service until interrupted."""
    import socket
    import uvicorn

    from .errors import BindError

    port = int(port if port is not None else os.environ.get("PORT", 8000))
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind(("0.0.0.0", port))
    except OSError as e:
        raise BindError(f"cannot bind port {port}: {e}") from None
    finally:
        probe.close()
    app = create_app(data_dir)
    uvicorn.run(app, host="0.0.0.0", port=port, log_level="warning")
