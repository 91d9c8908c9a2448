"""Closed subsets of projective space with margins and samplers.

Three shapes cover everything the ping-pong checks need: metric balls,
complements of (neighborhoods of) projectivized subspaces, and finite
unions.  Each set reports a signed margin: positive inside, negative
outside, zero on the boundary, measured in the projective metric.  A
containment claim "g A is inside B" then comes with the worst-case margin
over the sample, not just a boolean.

Samplers cover their set with density bounded away from zero but make no
uniformity promise.  They draw from a caller-supplied numpy Generator in
fixed-size batches, so the first m points drawn for a given generator state
do not depend on how many more are requested afterwards.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from .linalg import Subspace, mat_from_json, mat_to_json, vec_from_json, vec_to_json

__all__ = ["ProjectiveSet", "BallSet", "SubspaceComplementSet", "UnionSet",
           "SetValidationError", "set_from_json"]

_REJECTION_BATCH = 256
_MAX_BATCHES = 4000


class SetValidationError(ValueError):
    """A projective set description is malformed or degenerate."""


def _unit_rows(rng: np.random.Generator, count: int, dim: int,
               complex_field: bool) -> np.ndarray:
    x = rng.standard_normal((count, dim))
    if complex_field:
        x = x + 1j * rng.standard_normal((count, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


class ProjectiveSet(ABC):
    """Base class; subclasses define ambient_dim, complex_field, margins."""

    ambient_dim: int
    complex_field: bool

    @abstractmethod
    def margin_batch(self, points: np.ndarray) -> np.ndarray:
        """Signed margins for unit row vectors (n, d); positive = inside."""

    @abstractmethod
    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Draw count unit row vectors lying in the set."""

    @abstractmethod
    def to_json(self) -> dict:
        ...

    def margin(self, point: np.ndarray) -> float:
        return float(self.margin_batch(np.asarray(point)[None, :])[0])

    def contains(self, point: np.ndarray) -> bool:
        return self.margin(point) >= 0.0


class BallSet(ProjectiveSet):
    """Closed metric ball {[x] : d_P([x], [center]) <= radius}, radius < 1."""

    def __init__(self, center: np.ndarray, radius: float):
        center = np.asarray(center)
        if center.ndim != 1:
            raise SetValidationError(f"ball center must be a vector, got {center.shape}")
        n = np.linalg.norm(center)
        if n == 0 or not np.isfinite(n):
            raise SetValidationError("ball center cannot be normalized")
        if not 0.0 < radius < 1.0:
            raise SetValidationError(f"ball radius must lie in (0, 1), got {radius}")
        self.center = center / n
        self.radius = float(radius)
        self.ambient_dim = center.shape[0]
        self.complex_field = bool(np.iscomplexobj(center))

    def margin_batch(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points)
        coeff = pts @ self.center.conj()
        resid = pts - coeff[:, None] * self.center[None, :]
        return self.radius - np.linalg.norm(resid, axis=1)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        c = self.center
        d = self.ambient_dim
        out = np.empty((count, d), dtype=complex if self.complex_field else float)
        done = 0
        while done < count:
            # always consume a full batch so prefixes are request-independent
            w = _unit_rows(rng, _REJECTION_BATCH, d, self.complex_field)
            w = w - (w @ c.conj())[:, None] * c[None, :]
            norms = np.linalg.norm(w, axis=1)
            norms[norms == 0] = 1.0
            w = w / norms[:, None]
            s = self.radius * np.sqrt(rng.random(_REJECTION_BATCH))
            pts = np.sqrt(1.0 - s * s)[:, None] * c[None, :] + s[:, None] * w
            take = min(_REJECTION_BATCH, count - done)
            out[done:done + take] = pts[:take]
            done += take
        return out

    def to_json(self) -> dict:
        return {"type": "ball", "center": vec_to_json(self.center),
                "radius": self.radius}

    def __repr__(self):
        return f"BallSet(radius={self.radius:.4g}, dim={self.ambient_dim})"


class SubspaceComplementSet(ProjectiveSet):
    """Lines at projective distance >= theta from a projectivized subspace."""

    def __init__(self, subspace: Subspace, theta: float):
        if subspace.dim >= subspace.ambient_dim:
            raise SetValidationError("complement needs a proper subspace")
        if not 0.0 < theta < 1.0:
            raise SetValidationError(f"theta must lie in (0, 1), got {theta}")
        self.subspace = subspace
        self.theta = float(theta)
        self.ambient_dim = subspace.ambient_dim
        self.complex_field = bool(np.iscomplexobj(subspace.frame))

    def margin_batch(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points)
        f = self.subspace.frame
        proj = (pts @ f.conj()) @ f.T
        return np.linalg.norm(pts - proj, axis=1) - self.theta

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        out = []
        have = 0
        for _ in range(_MAX_BATCHES):
            batch = _unit_rows(rng, _REJECTION_BATCH, self.ambient_dim,
                               self.complex_field)
            keep = batch[self.margin_batch(batch) >= 0.0]
            if keep.size:
                out.append(keep)
                have += keep.shape[0]
            if have >= count:
                return np.concatenate(out)[:count]
        raise SetValidationError(
            f"rejection sampling failed: {have}/{count} points after "
            f"{_MAX_BATCHES} batches; the complement at theta={self.theta} "
            "is too small to sample")

    def to_json(self) -> dict:
        return {"type": "complement", "subspace": mat_to_json(self.subspace.frame),
                "theta": self.theta}

    def __repr__(self):
        return (f"SubspaceComplementSet(theta={self.theta:.4g}, "
                f"codim={self.ambient_dim - self.subspace.dim})")


class UnionSet(ProjectiveSet):
    """Finite union; margin is the best margin over the parts."""

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise SetValidationError("union needs at least one part")
        dims = {p.ambient_dim for p in parts}
        fields = {p.complex_field for p in parts}
        if len(dims) != 1 or len(fields) != 1:
            raise SetValidationError("union parts must share ambient dimension and field")
        self.parts = parts
        self.ambient_dim = parts[0].ambient_dim
        self.complex_field = parts[0].complex_field

    def margin_batch(self, points: np.ndarray) -> np.ndarray:
        return np.max([p.margin_batch(points) for p in self.parts], axis=0)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        dtype = complex if self.complex_field else float
        out = np.empty((count, self.ambient_dim), dtype=dtype)
        done = 0
        while done < count:
            # full blocks keep the draw sequence independent of count
            picks = rng.integers(0, len(self.parts), size=_REJECTION_BATCH)
            block = np.empty((_REJECTION_BATCH, self.ambient_dim), dtype=dtype)
            for p, part in enumerate(self.parts):
                where = np.nonzero(picks == p)[0]
                if where.size:
                    block[where] = part.sample(where.size, rng)
            take = min(_REJECTION_BATCH, count - done)
            out[done:done + take] = block[:take]
            done += take
        return out

    def to_json(self) -> dict:
        return {"type": "union", "parts": [p.to_json() for p in self.parts]}

    def __repr__(self):
        return f"UnionSet({len(self.parts)} parts, dim={self.ambient_dim})"


def set_from_json(data: dict) -> ProjectiveSet:
    if not isinstance(data, dict) or "type" not in data:
        raise SetValidationError("projective set JSON needs a 'type' field")
    kind = data["type"]
    if kind == "ball":
        return BallSet(vec_from_json(data["center"]), float(data["radius"]))
    if kind == "complement":
        frame = mat_from_json(data["subspace"])
        return SubspaceComplementSet(Subspace(frame), float(data["theta"]))
    if kind == "union":
        return UnionSet([set_from_json(p) for p in data["parts"]])
    raise SetValidationError(f"unknown projective set type {kind!r}")
