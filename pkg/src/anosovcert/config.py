"""Numeric thresholds shared across the toolkit.

Every verdict-producing routine takes a Thresholds instance (defaulting to
DEFAULT_THRESHOLDS) and echoes it into its report, so that a stored report is
reproducible without out-of-band context.
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class Thresholds:
    # multiplicative singular value gap required before a Cartan attractor
    # is considered well defined: sigma_i / sigma_{i+1} > 1 + gap_tol
    gap_tol: float = 1e-8
    # smallest fitted exponential rate that still counts as "growing"
    alpha_min: float = 0.05
    # largest admissible additive offset in a growth fit
    c_max: float = 50.0
    # a gap profile whose sphere maximum stays below this is "flat"
    flat_tol: float = 1e-6
    # relative singular value cutoff for numeric rank decisions
    rank_tol: float = 1e-8
    # determinants below this (after column normalization) fail genericity
    det_tol: float = 1e-10
    # projective distance under which two sampled limit lines are merged
    dedup_tol: float = 1e-6
    # sampled lines per displacement check
    displacement_samples: int = 4096
    # additive slack absorbing roundoff in inequality checks
    slack: float = 1e-9

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "Thresholds":
        known = {f.name for f in fields(cls)}
        bad = set(data) - known
        if bad:
            raise ConfigError(f"unknown threshold field(s): {sorted(bad)}")
        return cls(**data)


DEFAULT_THRESHOLDS = Thresholds()


class ConfigError(ValueError):
    """A configuration document is malformed or violates a precondition."""


def max_threads() -> int:
    """Worker-thread cap, read from the ANOSOV_THREADS environment variable.

    Unset or invalid means 1 (serial).  Values are clamped to at least 1.
    """
    raw = os.environ.get("ANOSOV_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Ordered map over items, sharded across threads when allowed.

    Results are collected in submission order, so output is deterministic
    regardless of the thread count.
    """
    items = list(items)
    workers = min(max_threads(), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, tight separators, no NaN/inf.

    Non-finite floats must be stringified by the caller before reaching
    this function; numpy scalars are converted to their Python equivalents.
    """
    import json

    import numpy as np

    def default(x):
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.floating):
            return float(x)
        if isinstance(x, np.bool_):
            return bool(x)
        if isinstance(x, np.ndarray):
            return x.tolist()
        raise TypeError(f"not JSON-serializable: {type(x).__name__}")

    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False, default=default)


def config_hash(obj) -> str:
    """Short stable digest of a JSON-serializable configuration."""
    import hashlib

    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()[:16]


def finite_or_str(x: float):
    """Pass finite floats through; encode inf/-inf/nan as strings for JSON."""
    import math

    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        return "nan"
    return "inf" if x > 0 else "-inf"
