"""Finite linear-algebra certificates about the group a representation spans.

burnside_span_dim measures the matrix span of a word ball; a full span
certifies irreducibility (over the complexification) and, composed with the
adjoint representation, feeds a density heuristic.  proximal_data extracts
attracting/repelling fixed data of a proximal matrix, genericity_check runs
the determinant test that makes conjugated families irreducible, and the
centralizer helpers re-export the block-construction commutants.

Everything here is a finite computation standing in for an algebraic
condition; verdict strings carry that caveat explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .ballcore import ball_evaluate_rep
from .config import DEFAULT_THRESHOLDS, Thresholds, parallel_map
from .constructions import BlockSpec, centralizer_basis, centralizer_orbit_dim
from .linalg import Subspace, dist_to_subspace, hyperplane_from_normal, \
    mat_to_json, proj_metric
from .reps import Rep
from .words import FactorPresentation, FreeProduct

__all__ = [
    "burnside_span_dim", "invariant_subspace_refute", "NotProximal",
    "ProximalData", "proximal_data", "adjoint_rep", "traceless_basis",
    "zariski_density_heuristic", "genericity_check", "genericity_to_csv",
    "conjugate_family_rep", "centralizer_basis", "centralizer_orbit_dim",
    "BlockSpec",
]

REAL_SPAN_CAVEAT = ("a full matrix span certifies absolute irreducibility "
                    "(irreducibility of the complexification); over the reals "
                    "a smaller span does not by itself prove reducibility")

HEURISTIC_CAVEAT = ("finite ball test of an algebraic condition; 'dense' "
                    "means no obstruction was found up to the stated length")


def burnside_span_dim(rep: Rep, max_len: int,
                      thresholds: Thresholds = DEFAULT_THRESHOLDS) -> int:
    """Dimension of span{image of w : |w| <= max_len} in matrix space.

    Numeric rank of the flattened, Frobenius-normalized word images with
    relative cutoff rank_tol.  Monotone in max_len and capped at dim^2.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    ball = ball_evaluate_rep(rep, max_len)
    mats = ball.mats[~ball.flags]
    flat = mats.reshape(mats.shape[0], -1)
    norms = np.linalg.norm(flat, axis=1)
    keep = norms > 0
    flat = flat[keep] / norms[keep, None]
    if flat.shape[0] == 0:
        return 0
    s = np.linalg.svd(flat, compute_uv=False)
    return int(np.sum(s > thresholds.rank_tol * s[0]))


def _orbit_closure(seed: np.ndarray, letters: np.ndarray,
                   thresholds: Thresholds) -> Subspace:
    """Smallest subspace containing seed and closed under all letters."""
    d = letters.shape[1]
    frame = Subspace.from_spanning(seed.reshape(-1, 1),
                                   rank_tol=thresholds.rank_tol).frame
    while frame.shape[1] < d:
        imgs = np.concatenate([frame] + [m @ frame for m in letters], axis=1)
        grown = Subspace.from_spanning(imgs, rank_tol=thresholds.rank_tol).frame
        if grown.shape[1] == frame.shape[1]:
            break
        frame = grown
    return Subspace(frame)


def invariant_subspace_refute(rep: Rep, max_len: int, trials: int,
                              thresholds: Thresholds = DEFAULT_THRESHOLDS) -> dict:
    """Certify irreducibility by span, or hunt for an invariant subspace.

    Verdict "irreducible (certified)" iff the word-ball span fills matrix
    space.  Otherwise "reducible-suspected": eigenvector seeds of short
    words are closed up under the generators; a proper closed subspace is
    returned as the candidate (it is invariant up to the rank tolerance).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    d = rep.dim
    span = burnside_span_dim(rep, max_len, thresholds)
    out = {
        "kind": "invariant_subspace_refute",
        "span_dim": span,
        "dim_squared": d * d,
        "max_len": max_len,
        "field": rep.field,
        "caveats": [REAL_SPAN_CAVEAT],
    }
    if span == d * d:
        out["verdict"] = "irreducible (certified)"
        out["candidate"] = None
        return out
    out["verdict"] = "reducible-suspected"
    letters = rep.letter_matrices()
    candidate = None
    seeds_used = 0
    ball = ball_evaluate_rep(rep, min(2, max_len))
    for i in range(ball.mats.shape[0]):
        if ball.flags[i] or ball.lengths[i] == 0 or seeds_used >= trials:
            continue
        vals, vecs = np.linalg.eig(ball.mats[i])
        order = np.argsort(-np.abs(vals))
        for k in order:
            if seeds_used >= trials:
                break
            seeds_used += 1
            sub = _orbit_closure(vecs[:, k], letters, thresholds)
            if sub.dim < d and (candidate is None or sub.dim < candidate.dim):
                candidate = sub
        if candidate is not None and candidate.dim == 1:
            break
    out["candidate"] = None if candidate is None else \
        mat_to_json(candidate.frame)
    out["candidate_dim"] = None if candidate is None else candidate.dim
    return out


class NotProximal(ValueError):
    """The matrix lacks a required strict eigenvalue-modulus gap."""


@dataclass(frozen=True)
class ProximalData:
    """Attracting/repelling fixed data of a matrix and of its inverse.

    attracting_line is the top eigenline, repelling_hyperplane the invariant
    complement (span of the other generalized eigenvectors); the _inverse
    pair describes the inverse matrix the same way.
    """

    attracting_line: Subspace
    repelling_hyperplane: Subspace
    attracting_line_inverse: Subspace
    repelling_hyperplane_inverse: Subspace

    def validate(self, w: np.ndarray, tol: float = 1e-8) -> "ProximalData":
        v = self.attracting_line.frame[:, 0]
        moved = np.asarray(w) @ v
        if proj_metric(moved / np.linalg.norm(moved), v) > tol:
            raise ValueError("attracting line is not fixed by the matrix")
        if dist_to_subspace(v, self.repelling_hyperplane) <= tol:
            raise ValueError("attracting line lies in the repelling hyperplane")
        return self

    def to_json(self) -> dict:
        return {
            "attracting_line": mat_to_json(self.attracting_line.frame),
            "repelling_hyperplane": mat_to_json(self.repelling_hyperplane.frame),
            "attracting_line_inverse":
                mat_to_json(self.attracting_line_inverse.frame),
            "repelling_hyperplane_inverse":
                mat_to_json(self.repelling_hyperplane_inverse.frame),
        }


def proximal_data(w, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> ProximalData:
    """Fixed data of a matrix with gaps after the 1st and before the last
    eigenvalue modulus.

    Raises NotProximal naming whichever modulus ratio fails the gap_tol
    margin.  The repelling hyperplane is computed as the orthogonal
    complement of the corresponding eigenvector of the conjugate transpose,
    which spans the invariant complement exactly.
    """
    w = np.asarray(w)
    q = w.shape[0]
    if w.ndim != 2 or w.shape != (q, q) or q < 2:
        raise ValueError(f"square matrix of size >= 2 required, got {w.shape}")
    vals, vecs = np.linalg.eig(w)
    order = np.argsort(-np.abs(vals))
    vals, vecs = vals[order], vecs[:, order]
    mods = np.abs(vals)
    if mods[1] == 0 or mods[0] / mods[1] <= 1.0 + thresholds.gap_tol:
        raise NotProximal(
            f"top eigenvalue ratio |l_1|/|l_2| = {mods[0]:.6g}/{mods[1]:.6g} "
            f"is not > 1 + {thresholds.gap_tol:g}")
    if mods[-1] == 0 or mods[-2] / mods[-1] <= 1.0 + thresholds.gap_tol:
        raise NotProximal(
            f"bottom eigenvalue ratio |l_{q - 1}|/|l_{q}| = "
            f"{mods[-2]:.6g}/{mods[-1]:.6g} is not > 1 + {thresholds.gap_tol:g}")
    avals, avecs = np.linalg.eig(w.conj().T)
    aorder = np.argsort(-np.abs(avals))
    avecs = avecs[:, aorder]
    return ProximalData(
        attracting_line=Subspace.line(vecs[:, 0]),
        repelling_hyperplane=hyperplane_from_normal(avecs[:, 0]),
        attracting_line_inverse=Subspace.line(vecs[:, -1]),
        repelling_hyperplane_inverse=hyperplane_from_normal(avecs[:, -1]),
    )


def traceless_basis(q: int, complex_field: bool = False) -> np.ndarray:
    """Orthonormal basis of trace-zero q x q matrices (Frobenius inner
    product): the off-diagonal matrix units, then normalized diagonal
    differences."""
    if q < 2:
        raise ValueError("need q >= 2")
    dtype = complex if complex_field else float
    mats = []
    for i in range(q):
        for j in range(q):
            if i == j:
                continue
            m = np.zeros((q, q), dtype=dtype)
            m[i, j] = 1.0
            mats.append(m)
    for k in range(1, q):
        m = np.zeros((q, q), dtype=dtype)
        for i in range(k):
            m[i, i] = 1.0
        m[k, k] = -k
        mats.append(m / np.sqrt(k * (k + 1)))
    return np.array(mats)


def adjoint_rep(g, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> np.ndarray:
    """Matrix of X -> g X g^-1 on trace-zero matrices, size q^2-1.

    Computed in the fixed orthonormal basis of traceless_basis, so the
    result is orthogonal/unitary exactly when conjugation by g preserves
    the Frobenius norm.
    """
    g = np.asarray(g)
    q = g.shape[0]
    if g.ndim != 2 or g.shape != (q, q):
        raise ValueError(f"square matrix required, got {g.shape}")
    if np.linalg.svd(g, compute_uv=False)[-1] <= 1e-12:
        raise ValueError("singular matrix has no adjoint action")
    basis = traceless_basis(q, complex_field=np.iscomplexobj(g))
    g_inv = np.linalg.inv(g)
    acted = g[None] @ basis @ g_inv[None]
    flat_b = basis.reshape(basis.shape[0], -1)
    flat_a = acted.reshape(acted.shape[0], -1)
    return np.einsum("ik,jk->ij", flat_b.conj(), flat_a)


def zariski_density_heuristic(rep: Rep, max_len: int,
                              thresholds: Thresholds = DEFAULT_THRESHOLDS) -> dict:
    """Full adjoint-composed span at length max_len = no density obstruction.

    Requires unimodular generator images (|det| = 1 within 1e-8).  The
    verdict is "dense (heuristic)" when the span of the adjoint images of
    the word ball fills the full (q^2-1)^2 matrix space, else "not dense".
    """
    for g in range(rep.group.num_generators):
        det = abs(np.linalg.det(rep.letter_matrix(2 * g)))
        if abs(det - 1.0) > 1e-8:
            raise ValueError(
                f"generator {g} has |det| = {det!r}; unimodular input required")
    ad_images = [adjoint_rep(rep.letter_matrix(2 * g), thresholds)
                 for g in range(rep.group.num_generators)]
    field = "C" if any(np.iscomplexobj(m) for m in ad_images) else "R"
    ad_rep = Rep(rep.group, ad_images, field=field)
    n = ad_rep.dim
    span = burnside_span_dim(ad_rep, max_len, thresholds)
    return {
        "kind": "zariski_density_heuristic",
        "verdict": "dense (heuristic)" if span == n * n else "not dense",
        "ad_span_dim": span,
        "ad_dim_squared": n * n,
        "max_len": max_len,
        "caveats": [HEURISTIC_CAVEAT, REAL_SPAN_CAVEAT],
    }


def _normalized_abs_det(cols: np.ndarray) -> float:
    norms = np.linalg.norm(cols, axis=0)
    if np.any(norms == 0):
        return 0.0
    return float(abs(np.linalg.det(cols / norms)))


def genericity_check(mats, omega0, omega1,
                     thresholds: Thresholds = DEFAULT_THRESHOLDS) -> dict:
    """Determinant test over all n-subsets of a 2n-matrix family.

    Passing means: for every n-subset I, the vectors {A_i omega0 : i in I}
    are a basis, and so are {A_i^-T conj(omega1) : i in I} (column-normalized
    absolute determinant above det_tol).  A family passing this makes the
    conjugates A_i g A_i^-1 of any matrix with attracting line [omega0] and
    repelling hyperplane orthogonal to omega1 generate an irreducible group.
    """
    mats = [np.asarray(m) for m in mats]
    omega0 = np.asarray(omega0).reshape(-1)
    omega1 = np.asarray(omega1).reshape(-1)
    n = omega0.shape[0]
    if omega1.shape[0] != n:
        raise ValueError("omega0 and omega1 must have the same length")
    if np.linalg.norm(omega0) == 0 or np.linalg.norm(omega1) == 0:
        raise ValueError("omega0 and omega1 must be nonzero")
    if len(mats) != 2 * n:
        raise ValueError(f"expected {2 * n} matrices for dimension {n}, "
                         f"got {len(mats)}")
    for i, m in enumerate(mats):
        if m.shape != (n, n):
            raise ValueError(f"matrix {i} has shape {m.shape}, expected {(n, n)}")
    primary = np.array([m @ omega0 for m in mats])
    dual = np.array([np.linalg.inv(m).conj().T @ np.conj(omega1) for m in mats])

    subsets = list(itertools.combinations(range(2 * n), n))

    def one(subset):
        rows = []
        for family, vecs in (("primary", primary), ("dual", dual)):
            cols = vecs[list(subset)].T
            rows.append({"subset": list(subset), "family": family,
                         "abs_det": _normalized_abs_det(cols)})
        return rows

    table = [row for rows in parallel_map(one, subsets) for row in rows]
    failures = [row for row in table if row["abs_det"] <= thresholds.det_tol]
    return {
        "kind": "genericity_check",
        "verdict": "pass" if not failures else "fail",
        "dim": n,
        "subsets_checked": len(subsets),
        "det_tol": thresholds.det_tol,
        "failures": failures[:20],
        "failure_count": len(failures),
        "table": table,
    }


def genericity_to_csv(report: dict, fileobj) -> None:
    """The determinant table of a genericity report, one row per subset."""
    import csv

    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["subset", "family", "abs_det"])
    for row in report["table"]:
        writer.writerow([" ".join(str(i) for i in row["subset"]),
                         row["family"], repr(row["abs_det"])])


def conjugate_family_rep(mats, g, field: str | None = None) -> Rep:
    """The representation sending generator i of a rank-2n free group to
    A_i g A_i^-1; the family genericity_check speaks about."""
    mats = [np.asarray(m) for m in mats]
    g = np.asarray(g)
    images = [m @ g @ np.linalg.inv(m) for m in mats]
    if field is None:
        field = "C" if any(np.iscomplexobj(m) for m in images) else "R"
    names = tuple(f"w{i + 1}" for i in range(len(mats)))
    group = FreeProduct([FactorPresentation("W", names)])
    return Rep(group, images, field=field)
