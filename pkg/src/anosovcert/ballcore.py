"""Backend selection for the ball evaluation kernel.

The compiled extension is preferred when it imported cleanly; setting the
environment variable ANOSOV_PURE_PYTHON to anything but "" or "0" before the
package is imported forces the numpy fallback.  BACKEND records which one is
active.  Both backends produce the same enumeration order, bookkeeping, and
renormalization decisions; matrix entries agree to floating point roundoff
(the fallback multiplies through BLAS, the extension through plain loops, so
the last couple of bits can differ).  Each backend on its own is fully
deterministic.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from .reps import RENORM_THRESHOLD, Rep

__all__ = ["BallData", "ball_evaluate", "ball_evaluate_rep", "BACKEND"]


class BallData(NamedTuple):
    """All reduced words of length <= radius, in length-then-lex order.

    Index i matches words.FreeProduct.enumerate_ball(radius)[i].  The true
    product for word i is mats[i] * exp(logscale[i]); flags[i] marks words
    whose product degenerated (and all their descendants).
    """

    lengths: np.ndarray
    last_letters: np.ndarray
    parents: np.ndarray
    mats: np.ndarray
    logscale: np.ndarray
    flags: np.ndarray

    def word_letters(self, i: int) -> tuple:
        """Reconstruct the letter tuple of word i from the parent links."""
        out = []
        while i > 0:
            out.append(int(self.last_letters[i]))
            i = int(self.parents[i])
        return tuple(reversed(out))


def _pick_backend():
    if os.environ.get("ANOSOV_PURE_PYTHON", "") not in ("", "0"):
        from . import _ballcore_py as impl
        return impl, "python"
    try:
        from . import _ballcore as impl  # type: ignore[attr-defined]
        return impl, "compiled"
    except ImportError:
        from . import _ballcore_py as impl
        return impl, "python"


_IMPL, BACKEND = _pick_backend()


def ball_evaluate(letter_mats: np.ndarray, radius: int,
                  renorm_threshold: float = RENORM_THRESHOLD) -> BallData:
    lengths, last, parents, mats, logscale, flags = _IMPL.ball_evaluate(
        np.asarray(letter_mats, dtype=np.complex128), int(radius),
        float(renorm_threshold))
    return BallData(
        np.asarray(lengths, dtype=np.int64),
        np.asarray(last, dtype=np.int64),
        np.asarray(parents, dtype=np.int64),
        mats,
        logscale,
        np.asarray(flags, dtype=bool),
    )


def ball_evaluate_rep(rep: Rep, radius: int,
                      renorm_threshold: float = RENORM_THRESHOLD) -> BallData:
    return ball_evaluate(rep.letter_matrices(), radius, renorm_threshold)
