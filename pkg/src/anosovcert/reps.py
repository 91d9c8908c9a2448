"""Linear representations of a free product, evaluated on words.

A Rep stores one invertible matrix per generator (global generator order)
and derives the inverse-letter matrices, so a reduced word is evaluated by
multiplying letter matrices left to right.  Optionally the generator images
can also be given exactly (Fraction entries); then words can be tested
against the identity with no floating point involved.

The letter matrix stack is ordered [g0, g0^-1, g1, g1^-1, ...] to match the
letter ids used by words.FreeProduct.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import exact
from .linalg import mat_from_json, mat_to_json
from .words import FactorPresentation, FreeProduct, Word

__all__ = ["Rep", "FreenessReport", "RENORM_THRESHOLD"]

RENORM_THRESHOLD = 1e150


@dataclass(frozen=True)
class FreenessReport:
    """Outcome of the exact no-trivial-word scan over a ball."""

    radius: int
    words_checked: int
    violations: tuple
    ok: bool


class Rep:
    def __init__(self, group: FreeProduct, generator_images: Sequence[np.ndarray],
                 field: str = "R",
                 exact_images: Optional[Sequence] = None):
        if field not in ("R", "C"):
            raise ValueError(f"field must be 'R' or 'C', got {field!r}")
        if len(generator_images) != group.num_generators:
            raise ValueError(
                f"need {group.num_generators} generator images, got {len(generator_images)}")
        dtype = np.complex128 if field == "C" else np.float64
        images = []
        for idx, m in enumerate(generator_images):
            m = np.asarray(m)
            if field == "R" and np.iscomplexobj(m):
                if np.max(np.abs(m.imag)) > 0:
                    raise ValueError(f"generator image {idx} is complex but field is 'R'")
                m = m.real
            m = m.astype(dtype)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise ValueError(f"generator image {idx} is not square: {m.shape}")
            if not np.all(np.isfinite(m.view(np.float64))):
                raise ValueError(f"generator image {idx} has non-finite entries")
            images.append(m)
        dims = {m.shape[0] for m in images}
        if len(dims) != 1:
            raise ValueError(f"generator images have mixed sizes {sorted(dims)}")
        self.group = group
        self.dim = images[0].shape[0]
        self.field = field
        stack = np.empty((2 * len(images), self.dim, self.dim), dtype=dtype)
        for g, m in enumerate(images):
            sv = np.linalg.svd(m, compute_uv=False)
            if sv[-1] <= 1e-12 * max(1.0, sv[0]):
                raise ValueError(f"generator image {g} is singular to working precision")
            stack[2 * g] = m
            stack[2 * g + 1] = np.linalg.inv(m)
        self._letters = stack
        if exact_images is not None:
            if len(exact_images) != group.num_generators:
                raise ValueError("exact_images must match the generator count")
            ex = []
            for g, m in enumerate(exact_images):
                fm = exact.matrix(m)
                if len(fm) != self.dim:
                    raise ValueError("exact image size differs from float image size")
                drift = np.max(np.abs(exact.to_float(fm) - stack[2 * g].real)) \
                    + np.max(np.abs(stack[2 * g].imag))
                if drift > 1e-12:
                    raise ValueError(
                        f"exact and float images of generator {g} disagree "
                        f"(max entry difference {drift:.3g} > 1e-12)")
                ex.append(fm)
                ex.append(exact.inverse(fm))
            self._exact_letters = tuple(ex)
        else:
            self._exact_letters = None

    # -- evaluation ----------------------------------------------------------

    @property
    def has_exact(self) -> bool:
        return self._exact_letters is not None

    def exact_generator_images(self):
        """Exact generator images as Fraction matrices, or None."""
        if self._exact_letters is None:
            return None
        return tuple(self._exact_letters[2 * g]
                     for g in range(self.group.num_generators))

    def letter_matrices(self) -> np.ndarray:
        """Stacked (2 * num_generators, dim, dim) letter images; do not mutate."""
        return self._letters

    def letter_matrix(self, letter: int) -> np.ndarray:
        return self._letters[letter]

    def evaluate(self, word: Word) -> np.ndarray:
        """Plain product of letter matrices; may overflow on very long words."""
        self._check_word(word)
        out = np.eye(self.dim, dtype=self._letters.dtype)
        for letter in word.letters:
            out = out @ self._letters[letter]
        return out

    def evaluate_scaled(self, word: Word) -> tuple:
        """Product with renormalization: returns (matrix, logscale).

        The true product is matrix * exp(logscale); matrix has largest
        entry magnitude of order one once any renormalization happened.
        """
        self._check_word(word)
        out = np.eye(self.dim, dtype=self._letters.dtype)
        logscale = 0.0
        for letter in word.letters:
            out = out @ self._letters[letter]
            peak = float(np.max(np.abs(out.real))) if not np.iscomplexobj(out) else \
                float(max(np.max(np.abs(out.real)), np.max(np.abs(out.imag))))
            if peak > RENORM_THRESHOLD:
                out = out / peak
                logscale += math.log(peak)
        return out, logscale

    def evaluate_exact(self, word: Word) -> tuple:
        if self._exact_letters is None:
            raise ValueError("this representation carries no exact generator images")
        self._check_word(word)
        out = exact.identity(self.dim)
        for letter in word.letters:
            out = exact.matmul(out, self._exact_letters[letter])
        return out

    def _check_word(self, word: Word):
        if word.group != self.group:
            raise ValueError("word belongs to a different group")

    def conjugated(self, c: np.ndarray, c_exact=None) -> "Rep":
        """The representation w -> c rho(w) c^{-1}."""
        c = np.asarray(c)
        c_inv = np.linalg.inv(c)
        images = [c @ self._letters[2 * g] @ c_inv
                  for g in range(self.group.num_generators)]
        ex = None
        if c_exact is not None and self._exact_letters is not None:
            ce = exact.matrix(c_exact)
            ce_inv = exact.inverse(ce)
            ex = [exact.matmul(exact.matmul(ce, self._exact_letters[2 * g]), ce_inv)
                  for g in range(self.group.num_generators)]
        field = "C" if np.iscomplexobj(c) or self.field == "C" else "R"
        return Rep(self.group, images, field=field, exact_images=ex)

    # -- exact injectivity scan ------------------------------------------------

    def freeness_check_exact(self, radius: int, max_violations: int = 10) -> FreenessReport:
        """Verify no nontrivial reduced word of length <= radius maps to I.

        This certifies injectivity of the evaluation on the ball (a finite
        but exact statement; it does not by itself prove the image group is
        free).  Requires exact generator images.
        """
        if self._exact_letters is None:
            raise ValueError("exact generator images are required for this check")
        if radius < 0:
            raise ValueError("radius must be >= 0")
        violations: list = []
        checked = 1  # the identity word, trivially fine
        frontier = [((), exact.identity(self.dim))]
        for _ in range(radius):
            nxt = []
            for lets, mat in frontier:
                last = lets[-1] if lets else None
                for letter in range(self.group.num_letters):
                    if last is not None and letter == (last ^ 1):
                        continue
                    prod = exact.matmul(mat, self._exact_letters[letter])
                    new_lets = lets + (letter,)
                    checked += 1
                    if exact.is_identity(prod) and len(violations) < max_violations:
                        violations.append(str(Word(self.group, new_lets)))
                    nxt.append((new_lets, prod))
            frontier = nxt
        return FreenessReport(radius=radius, words_checked=checked,
                              violations=tuple(violations),
                              ok=not violations)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        data = {
            "group": {"factors": [{"name": f.name, "generators": list(f.generators)}
                                  for f in self.group.factors]},
            "dim": self.dim,
            "field": self.field,
            "generator_images": [mat_to_json(self._letters[2 * g])
                                 for g in range(self.group.num_generators)],
        }
        if self._exact_letters is not None:
            data["exact_images"] = [
                [[str(x) for x in row] for row in self._exact_letters[2 * g]]
                for g in range(self.group.num_generators)]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "Rep":
        for key in ("group", "dim", "field", "generator_images"):
            if key not in data:
                raise ValueError(f"representation JSON missing field '{key}'")
        factors = [FactorPresentation(f["name"], tuple(f["generators"]))
                   for f in data["group"]["factors"]]
        group = FreeProduct(factors)
        images = [mat_from_json(m) for m in data["generator_images"]]
        if any(m.shape[0] != int(data["dim"]) for m in images):
            raise ValueError("generator image size disagrees with 'dim'")
        exact_images = data.get("exact_images")
        return cls(group, images, field=data["field"], exact_images=exact_images)

    def __repr__(self):
        tag = "exact+" if self.has_exact else ""
        return f"Rep(dim={self.dim}, field={self.field}, {tag}{self.group!r})"
