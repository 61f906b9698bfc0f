"""Python bindings for the scirank retrieval and evaluation core."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import Engine as _Engine, Error, eval_counts as _eval_counts, evaluate as _evaluate


class ServiceError(Error):
    """Raised by Engine helpers when the service answers with a 4xx status."""


def _decode(result):
    status, body = result
    payload = _json.loads(body)
    if status != 200:
        raise ServiceError(payload.get("error", "request failed"))
    return payload


def search_json(engine, q, **kwargs):
    """Engine.search decoded to a dict; raises ServiceError on a 400."""
    return _decode(engine.search(q, **kwargs))


def recommend_json(engine, term, k=4):
    return _decode(engine.recommend(term, k))


def eval_counts(path):
    return _json.loads(_eval_counts(str(path)))


def evaluate(judgments, runs, top_n=10):
    return _json.loads(_evaluate(str(judgments), str(runs), top_n))


__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
