"""Singular value decompositions, projective metrics, and contraction bounds.

Vectors are 1-d numpy arrays over R (float64) or C (complex128); matrices are
2-d arrays acting on column vectors.  The Hermitian inner product used
throughout is <u, v> = sum_i u_i * conj(v_i); all reported quantities depend
only on |<u, v>| and are therefore convention independent.

Projective space P(K^d) is represented by unit vectors; the metric is

    d_P([u], [v]) = sqrt(1 - |<u, v>|^2),

the sine of the principal angle.  It is computed through the projection
residual u - v <u, v>, which stays accurate when the two lines nearly
coincide (the naive formula loses half the significant digits there).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .config import DEFAULT_THRESHOLDS, Thresholds

__all__ = [
    "GapTooSmall",
    "SvdResult",
    "Subspace",
    "Flag",
    "svd",
    "operator_norm",
    "moduli_of_eigenvalues",
    "cartan_attractor",
    "cartan_attractor_of_inverse",
    "proj_metric",
    "dist_to_subspace",
    "contraction_bound_check",
    "near_identity_displacement_check",
    "hyperplane_from_normal",
    "mat_to_json",
    "mat_from_json",
    "vec_to_json",
    "vec_from_json",
]


class GapTooSmall(ValueError):
    """The singular value gap needed for a Cartan attractor is absent."""


def _check_matrix(g: np.ndarray, name: str = "matrix") -> np.ndarray:
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"{name} must be square, got shape {g.shape}")
    if not np.all(np.isfinite(g.view(np.float64) if g.dtype == np.complex128 else g)):
        raise ValueError(f"{name} has non-finite entries")
    return g


def _as_unit_vector(x) -> np.ndarray:
    """Coerce a vector or a 1-dimensional Subspace to a unit vector."""
    if isinstance(x, Subspace):
        if x.dim != 1:
            raise ValueError(f"expected a line, got a {x.dim}-dimensional subspace")
        return x.frame[:, 0]
    v = np.asarray(x)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    n = np.linalg.norm(v)
    if n == 0 or not np.isfinite(n):
        raise ValueError("cannot normalize a zero or non-finite vector")
    return v / n


class SvdResult(NamedTuple):
    """Cartan decomposition g = left @ diag(sigmas) @ right.

    sigmas are in non-increasing order; left and right are unitary.
    """

    sigmas: np.ndarray
    left: np.ndarray
    right: np.ndarray


def svd(g: np.ndarray) -> SvdResult:
    """Full singular value decomposition of a square matrix."""
    g = _check_matrix(g)
    u, s, vh = np.linalg.svd(g)
    return SvdResult(s, u, vh)


def operator_norm(g: np.ndarray) -> float:
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(g), 2))


def moduli_of_eigenvalues(g: np.ndarray, *, singular_tol: float = 1e-12) -> np.ndarray:
    """Eigenvalue moduli of an invertible matrix, sorted non-increasingly.

    Raises ValueError on (numerically) singular input; the product of the
    moduli equals |det g|.
    """
    g = _check_matrix(g)
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= singular_tol * max(1.0, s[0]):
        raise ValueError("matrix is singular to working precision")
    return np.sort(np.abs(np.linalg.eigvals(g)))[::-1]


class Subspace:
    """A linear subspace stored as a matrix with orthonormal columns."""

    __slots__ = ("frame",)

    def __init__(self, frame: np.ndarray):
        frame = np.asarray(frame)
        if frame.ndim == 1:
            frame = frame[:, None]
        if frame.ndim != 2 or frame.shape[1] == 0 or frame.shape[1] > frame.shape[0]:
            raise ValueError(f"bad frame shape {frame.shape}")
        gram = frame.conj().T @ frame
        if not np.allclose(gram, np.eye(frame.shape[1]), atol=1e-10):
            raise ValueError("frame columns are not orthonormal; use from_spanning")
        self.frame = frame

    @classmethod
    def from_spanning(cls, vectors: np.ndarray, rank_tol: float = 1e-12) -> "Subspace":
        """Orthonormalize a spanning set (columns); rank-deficiency is dropped."""
        m = np.asarray(vectors)
        if m.ndim == 1:
            m = m[:, None]
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        rank = int(np.sum(s > rank_tol * max(1.0, float(s[0]) if s.size else 1.0)))
        if rank == 0:
            raise ValueError("spanning set is numerically zero")
        return cls(u[:, :rank])

    @classmethod
    def line(cls, v: np.ndarray) -> "Subspace":
        return cls(_as_unit_vector(v)[:, None])

    @property
    def ambient_dim(self) -> int:
        return self.frame.shape[0]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def projector(self) -> np.ndarray:
        return self.frame @ self.frame.conj().T

    def orthogonal_complement(self) -> "Subspace":
        u, _, _ = np.linalg.svd(self.frame, full_matrices=True)
        if self.dim == self.ambient_dim:
            raise ValueError("the full space has no orthogonal complement frame")
        return Subspace(u[:, self.dim:])

    def distance_to(self, other: "Subspace") -> float:
        """Spectral norm of the projector difference.

        For equal dimensions this is the sine of the largest principal angle,
        so it agrees with proj_metric on lines.
        """
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("subspaces live in different ambient dimensions")
        return float(np.linalg.norm(self.projector() - other.projector(), 2))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class Flag(NamedTuple):
    """A (line, hyperplane) pair in a common ambient dimension.

    No incidence between the two parts is required.
    """

    line: Subspace
    hyperplane: Subspace

    def validate(self) -> "Flag":
        if self.line.ambient_dim != self.hyperplane.ambient_dim:
            raise ValueError("flag parts live in different ambient dimensions")
        if self.line.dim != 1:
            raise ValueError("flag line must be 1-dimensional")
        if self.hyperplane.dim != self.hyperplane.ambient_dim - 1:
            raise ValueError("flag hyperplane must have codimension 1")
        return self


def hyperplane_from_normal(v: np.ndarray) -> Subspace:
    """The hyperplane orthogonal to v, as a Subspace of codimension 1."""
    return Subspace.line(v).orthogonal_complement()


def cartan_attractor(g: np.ndarray, i: int,
                     thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Subspace:
    """Span of the i leading left singular directions of g.

    Well defined (independent of the SVD frame choice) precisely when
    sigma_i(g) / sigma_{i+1}(g) > 1; we enforce a margin of gap_tol and raise
    GapTooSmall otherwise.  Invariant under positive scaling of g.
    """
    g = _check_matrix(g)
    d = g.shape[0]
    if not 1 <= i <= d - 1:
        raise ValueError(f"index i={i} out of range 1..{d - 1}")
    s, u, _ = svd(g)
    if s[i - 1] == 0 or (s[i] > 0 and s[i - 1] / s[i] <= 1.0 + thresholds.gap_tol):
        raise GapTooSmall(
            f"sigma_{i}/sigma_{i + 1} = {s[i - 1]:.6g}/{s[i]:.6g} lacks the required gap")
    return Subspace(u[:, :i])


def cartan_attractor_of_inverse(g: np.ndarray, j: int,
                                thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Subspace:
    """Span of the j leading left singular directions of g^{-1}.

    Computed from the SVD of g itself: if g = u diag(s) vh then the leading
    directions of g^{-1} are the trailing columns of vh^H.  Requires the gap
    sigma_{d-j}(g) > sigma_{d-j+1}(g).
    """
    g = _check_matrix(g)
    d = g.shape[0]
    if not 1 <= j <= d - 1:
        raise ValueError(f"index j={j} out of range 1..{d - 1}")
    s, _, vh = svd(g)
    lo, hi = s[d - j - 1], s[d - j]
    if lo == 0 or (hi > 0 and lo / hi <= 1.0 + thresholds.gap_tol):
        raise GapTooSmall(
            f"sigma_{d - j}/sigma_{d - j + 1} = {lo:.6g}/{hi:.6g} lacks the required gap")
    return Subspace(vh.conj().T[:, d - j:])


def proj_metric(x, y) -> float:
    """Projective distance sqrt(1 - |<u, v>|^2) between two lines.

    Accepts unit-normalizable vectors or 1-dimensional Subspaces.  Symmetric,
    bounded by 1, and zero exactly when the lines coincide (to roundoff; the
    residual formulation returns ~1e-16 rather than ~1e-8 on equal input).
    """
    u = _as_unit_vector(x)
    v = _as_unit_vector(y)
    if u.shape != v.shape:
        raise ValueError(f"ambient dimensions differ: {u.shape[0]} vs {v.shape[0]}")
    c = np.sum(u * v.conj())
    return float(np.linalg.norm(u - v * c))


def dist_to_subspace(x, w: Subspace) -> float:
    """Distance from a line to the projectivization of a proper subspace.

    Equals inf over unit w in W of d_P([v], [w]), which is the norm of the
    component of the unit representative orthogonal to W.
    """
    v = _as_unit_vector(x)
    if w.dim >= w.ambient_dim:
        raise ValueError("subspace must be proper (dim < ambient dim)")
    if v.shape[0] != w.ambient_dim:
        raise ValueError("vector and subspace ambient dimensions differ")
    coeffs = w.frame.conj().T @ v
    return float(np.linalg.norm(v - w.frame @ coeffs))


class ContractionCheck(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def contraction_bound_check(g: np.ndarray, x,
                            thresholds: Thresholds = DEFAULT_THRESHOLDS) -> ContractionCheck:
    """Verify the attractor contraction estimate for one matrix and one line.

    With a gap at index 1, the image g[x] satisfies

        d_P(g x, attractor(g)) <= (sigma_2/sigma_1)(g) / dist(x, repelling hyperplane),

    where the repelling hyperplane is the span of the d-1 leading singular
    directions of g^{-1}.  If x lies inside that hyperplane the bound is
    reported as infinite (not an error).  ok allows additive slack for
    roundoff.
    """
    g = _check_matrix(g)
    v = _as_unit_vector(x)
    d = g.shape[0]
    if v.shape[0] != d:
        raise ValueError("vector dimension does not match the matrix")
    s, u, vh = svd(g)
    if s[0] == 0 or (s[1] > 0 and s[0] / s[1] <= 1.0 + thresholds.gap_tol):
        raise GapTooSmall(
            f"sigma_1/sigma_2 = {s[0]:.6g}/{s[1]:.6g} lacks the required gap")
    gx = g @ v
    ngx = np.linalg.norm(gx)
    if ngx == 0:
        raise ValueError("g x vanished; matrix is singular on x")
    lhs = proj_metric(gx / ngx, u[:, 0])
    rep_hyp = Subspace(vh.conj().T[:, 1:])
    dist = dist_to_subspace(v, rep_hyp)
    rhs = float("inf") if dist == 0 else (s[1] / s[0]) / dist
    return ContractionCheck(lhs, rhs, bool(lhs <= rhs + thresholds.slack))


class DisplacementCheck(NamedTuple):
    sup_estimate: float
    bound: float
    ok: bool


_SAMPLE_CACHE: dict = {}


def _unit_line_samples(d: int, n: int, complex_field: bool) -> np.ndarray:
    """Deterministic uniform sample of n lines in K^d, cached per signature."""
    key = (d, n, complex_field)
    cached = _SAMPLE_CACHE.get(key)
    if cached is None:
        rng = np.random.default_rng(0x5EED_D15F)
        x = rng.standard_normal((n, d))
        if complex_field:
            x = x + 1j * rng.standard_normal((n, d))
        cached = x / np.linalg.norm(x, axis=1, keepdims=True)
        _SAMPLE_CACHE[key] = cached
    return cached


def near_identity_displacement_check(g: np.ndarray,
                                     samples: int | None = None,
                                     thresholds: Thresholds = DEFAULT_THRESHOLDS,
                                     ) -> DisplacementCheck:
    """Verify the displacement estimate sup_x d_P(g x, x) <= 2 sigma_1(g^{-1}) ||g - I||.

    The supremum is estimated over uniformly sampled lines plus the left
    singular directions of g - I (which realize the largest movement of the
    underlying vectors).  The sampled estimate can only undershoot the true
    supremum, so ok = False signals a genuine numerical problem.
    """
    g = _check_matrix(g)
    d = g.shape[0]
    n = thresholds.displacement_samples if samples is None else int(samples)
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] == 0:
        raise ValueError("matrix is singular; the bound involves sigma_1(g^{-1})")
    delta = g - np.eye(d, dtype=g.dtype)
    u_delta, _, _ = np.linalg.svd(delta)
    bound = 2.0 * (1.0 / float(s[-1])) * operator_norm(delta)
    pts = _unit_line_samples(d, n, np.iscomplexobj(g))
    pts = np.vstack([pts.astype(g.dtype if np.iscomplexobj(g) else pts.dtype), u_delta.conj().T])
    imgs = pts @ g.T
    norms = np.linalg.norm(imgs, axis=1)
    good = norms > 0
    imgs = imgs[good] / norms[good, None]
    base = pts[good]
    coeff = np.sum(imgs * base.conj(), axis=1)
    residual = imgs - base * coeff[:, None]
    sup_est = float(np.max(np.linalg.norm(residual, axis=1)))
    return DisplacementCheck(sup_est, bound, bool(sup_est <= bound + thresholds.slack))


# ---------------------------------------------------------------------------
# JSON wire format: {"rows": r, "cols": c, "field": "R"|"C", "entries": [...]}
# with row-major entries, complex entries encoded as [re, im] pairs.
# ---------------------------------------------------------------------------

def mat_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if np.iscomplexobj(m):
        entries = [[float(z.real), float(z.imag)] for z in m.ravel()]
        field = "C"
    else:
        entries = [float(x) for x in m.ravel()]
        field = "R"
    return {"rows": int(m.shape[0]), "cols": int(m.shape[1]),
            "field": field, "entries": entries}


def mat_from_json(data: dict) -> np.ndarray:
    for key in ("rows", "cols", "field", "entries"):
        if key not in data:
            raise ValueError(f"matrix JSON missing field '{key}'")
    rows, cols, field = int(data["rows"]), int(data["cols"]), data["field"]
    entries = data["entries"]
    if field not in ("R", "C"):
        raise ValueError(f"matrix JSON field must be 'R' or 'C', got {field!r}")
    if len(entries) != rows * cols:
        raise ValueError(
            f"matrix JSON entries has length {len(entries)}, expected {rows * cols}")
    if field == "C":
        vals = [complex(e[0], e[1]) for e in entries]
        m = np.array(vals, dtype=np.complex128).reshape(rows, cols)
    else:
        m = np.array([float(e) for e in entries], dtype=np.float64).reshape(rows, cols)
    if not np.all(np.isfinite(m.view(np.float64) if m.dtype == np.complex128 else m)):
        raise ValueError("matrix JSON contains non-finite entries")
    return m


def vec_to_json(v: np.ndarray) -> dict:
    v = np.asarray(v)
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    return mat_to_json(v[:, None])


def vec_from_json(data: dict) -> np.ndarray:
    m = mat_from_json(data)
    if m.shape[1] != 1:
        raise ValueError(f"vector JSON must have cols=1, got {m.shape[1]}")
    return m[:, 0]
