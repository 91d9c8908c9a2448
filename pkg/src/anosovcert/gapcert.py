"""Singular value profiles over word balls and exponential growth fits.

The central object is a GapProfile: the log singular values of every reduced
word in a ball, computed with renormalized products so word length is capped
by memory rather than floating point range.  On top of it sit growth fits
(does log(sigma_k/sigma_{k+1}) grow like alpha * length - C?), index set
reports, and samples of attracting subspaces.

A fit certifies the inequality on the finite ball only; the reports say so
explicitly.  The fitted line comes from the lower convex hull of the
per-length minima together with the origin: alpha is the slope of the final
hull edge and the line passes through the last hull point, which makes the
bound log_gap >= alpha * length - C exact (not least-squares) over the ball
and C automatically non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ballcore import BallData, ball_evaluate_rep
from .config import DEFAULT_THRESHOLDS, Thresholds, finite_or_str
from .linalg import GapTooSmall, Subspace, proj_metric
from .reps import Rep
from .words import Word

__all__ = [
    "GapProfile", "GrowthFit", "LimitFlagSample",
    "compute_profile", "fit_growth", "fit_gap_growth", "fit_qie_growth",
    "index_set_report", "qie_report", "limit_set_sample", "limit_flag_sample",
    "profile_to_csv", "finite_ball_caveat", "FREE_FACTOR_CAVEAT",
]


def finite_ball_caveat(radius: int) -> str:
    return (f"all statements are verified on the finite ball of radius {radius} "
            "only; behavior of longer words is extrapolation")


FREE_FACTOR_CAVEAT = ("factors are treated as free groups on their listed "
                      "generators; no relations inside a factor are modeled")


@dataclass
class GapProfile:
    """Log singular values for every word of length <= radius.

    log_sigmas[i, j] is log sigma_{j+1} of the product for word i (scale
    factor folded back in).  flags marks words whose product or SVD
    degenerated; flagged rows hold NaN and all consumers skip them.
    """

    rep: Rep
    radius: int
    lengths: np.ndarray
    log_sigmas: np.ndarray
    flags: np.ndarray
    ball: BallData

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def flagged_fraction(self) -> float:
        return float(np.mean(self.flags)) if len(self.flags) else 0.0

    def word(self, i: int) -> Word:
        return Word(self.rep.group, self.ball.word_letters(int(i)))

    def gap_values(self, k: int) -> np.ndarray:
        """log(sigma_k / sigma_{k+1}) per word, k in 1..dim-1."""
        if not 1 <= k <= self.dim - 1:
            raise ValueError(f"gap index {k} out of range 1..{self.dim - 1}")
        return self.log_sigmas[:, k - 1] - self.log_sigmas[:, k]

    def qie_values(self) -> np.ndarray:
        """log(sigma_1 / sigma_d) per word; the coarse displacement proxy."""
        return self.log_sigmas[:, 0] - self.log_sigmas[:, -1]


def compute_profile(rep: Rep, radius: int,
                    thresholds: Thresholds = DEFAULT_THRESHOLDS) -> GapProfile:
    """Evaluate the ball and take the singular values of every word."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    ball = ball_evaluate_rep(rep, radius)
    n, d = ball.mats.shape[0], rep.dim
    log_sigmas = np.full((n, d), np.nan)
    flags = ball.flags.copy()
    idx = np.nonzero(~flags)[0]
    try:
        sig = np.linalg.svd(ball.mats[idx], compute_uv=False)
    except np.linalg.LinAlgError:
        # retry word by word so one bad matrix does not poison the batch
        sig = np.full((idx.size, d), np.nan)
        for row, i in enumerate(idx):
            try:
                sig[row] = np.linalg.svd(ball.mats[i], compute_uv=False)
            except np.linalg.LinAlgError:
                flags[i] = True
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(sig)
    bad_rows = ~np.all(np.isfinite(logs), axis=1)
    flags[idx[bad_rows]] = True
    logs[bad_rows] = np.nan
    log_sigmas[idx] = logs + ball.logscale[idx, None]
    return GapProfile(rep=rep, radius=radius, lengths=ball.lengths,
                      log_sigmas=log_sigmas, flags=flags, ball=ball)


@dataclass(frozen=True)
class GrowthFit:
    """Outcome of fitting values >= alpha * length - C over a ball.

    index is the gap index k, or "full" for the top-to-bottom ratio.
    verdict is "growing" (alpha >= alpha_min and C <= c_max), "flat" (the
    values on the outermost sphere never rise above flat_tol), or
    "inconclusive".  The witness is the word with the smallest margin
    value - (alpha * length - C); re-checking it reproduces the fit's
    binding constraint.
    """

    index: object
    alpha: float
    c: float
    verdict: str
    hull: tuple
    per_length_min: tuple
    witness_word: str
    witness_length: int
    witness_value: float
    flagged_fraction: float

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "alpha": finite_or_str(self.alpha),
            "C": finite_or_str(self.c),
            "verdict": self.verdict,
            "hull": [[int(x), float(y)] for x, y in self.hull],
            "per_length_min": [[int(x), float(y)] for x, y in self.per_length_min],
            "witness": {"word": self.witness_word,
                        "length": int(self.witness_length),
                        "value": float(self.witness_value)},
            "flagged_fraction": self.flagged_fraction,
        }


def _lower_hull(points: list) -> list:
    """Lower convex hull of points sorted by x (monotone chain)."""
    hull: list = []
    for p in points:
        while len(hull) >= 2:
            ox, oy = hull[-2]
            ax, ay = hull[-1]
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def fit_growth(lengths: np.ndarray, values: np.ndarray, words,
               thresholds: Thresholds = DEFAULT_THRESHOLDS,
               index: object = "full") -> GrowthFit:
    """Fit the best exact lower bound value >= alpha * length - C.

    lengths/values cover a ball (length 0 entries are ignored; the origin is
    added as a hull point so C >= 0 always); words maps an array index to a
    printable witness, called only once.  Non-finite values (flagged words)
    are excluded and reported via flagged_fraction.
    """
    lengths = np.asarray(lengths)
    values = np.asarray(values)
    usable = np.isfinite(values) & (lengths > 0)
    flagged_fraction = float(np.mean(~np.isfinite(values[lengths > 0]))) \
        if np.any(lengths > 0) else 0.0
    if not np.any(usable):
        raise ValueError("no usable (finite, positive-length) data points")
    ls = lengths[usable]
    vs = values[usable]
    per_len = []
    for n in np.unique(ls):
        per_len.append((int(n), float(np.min(vs[ls == n]))))
    hull = _lower_hull([(0, 0.0)] + per_len)
    if len(hull) >= 2:
        (x0, y0), (x1, y1) = hull[-2], hull[-1]
        alpha = (y1 - y0) / (x1 - x0)
        c = alpha * x1 - y1
    else:
        alpha, c = 0.0, 0.0
    c = max(c, 0.0)

    sphere_max = float(np.max(vs[ls == np.max(ls)]))
    if sphere_max <= thresholds.flat_tol:
        verdict = "flat"
        alpha, c = 0.0, max(0.0, -float(np.min(vs)))
    elif alpha >= thresholds.alpha_min and c <= thresholds.c_max:
        verdict = "growing"
    else:
        verdict = "inconclusive"

    margins = vs - (alpha * ls - c)
    w = int(np.argmin(margins))
    orig = np.nonzero(usable)[0][w]
    return GrowthFit(index=index, alpha=float(alpha), c=float(c),
                     verdict=verdict, hull=tuple(hull),
                     per_length_min=tuple(per_len),
                     witness_word=str(words(orig)),
                     witness_length=int(ls[w]), witness_value=float(vs[w]),
                     flagged_fraction=flagged_fraction)


def fit_gap_growth(profile: GapProfile, k: int,
                   thresholds: Thresholds = DEFAULT_THRESHOLDS) -> GrowthFit:
    return fit_growth(profile.lengths, profile.gap_values(k), profile.word,
                      thresholds, index=int(k))


def fit_qie_growth(profile: GapProfile,
                   thresholds: Thresholds = DEFAULT_THRESHOLDS) -> GrowthFit:
    return fit_growth(profile.lengths, profile.qie_values(), profile.word,
                      thresholds, index="full")


def qie_report(profile: GapProfile,
               thresholds: Thresholds = DEFAULT_THRESHOLDS) -> dict:
    """Certify log(sigma_1/sigma_d) growth over the ball; JSON-ready."""
    fit = fit_qie_growth(profile, thresholds)
    return {
        "kind": "qie_growth",
        "radius": profile.radius,
        "dim": profile.dim,
        "words_total": int(len(profile.lengths)),
        "flagged_fraction": profile.flagged_fraction,
        "fit": fit.to_json(),
        "thresholds": thresholds.to_json(),
        "caveats": [finite_ball_caveat(profile.radius), FREE_FACTOR_CAVEAT],
    }


def index_set_report(profile: GapProfile,
                     thresholds: Thresholds = DEFAULT_THRESHOLDS,
                     max_index: int | None = None) -> dict:
    """Fit every gap index and collect those that certify as growing.

    Gap indices k and d-k carry the same information on a symmetric ball of
    a determinant +-1 representation (swap the word for its inverse), so
    callers often restrict to k <= d/2 via max_index.
    """
    if profile.radius < 2:
        raise ValueError("index set estimation needs radius >= 2")
    top = profile.dim - 1 if max_index is None else min(max_index, profile.dim - 1)
    fits = {}
    growing = []
    for k in range(1, top + 1):
        fit = fit_gap_growth(profile, k, thresholds)
        fits[str(k)] = fit.to_json()
        if fit.verdict == "growing":
            growing.append(k)
    return {
        "kind": "gap_index_set",
        "radius": profile.radius,
        "dim": profile.dim,
        "indices_growing": growing,
        "fits": fits,
        "flagged_fraction": profile.flagged_fraction,
        "thresholds": thresholds.to_json(),
        "caveats": [finite_ball_caveat(profile.radius), FREE_FACTOR_CAVEAT],
    }


def limit_set_sample(profile: GapProfile, i: int,
                     thresholds: Thresholds = DEFAULT_THRESHOLDS) -> list:
    """Attracting i-planes of all outermost-sphere words, deduplicated.

    The sample {span of the i leading left singular directions} over the
    sphere of maximal length approximates the boundary image; it is refined
    by growing the radius.  Raises GapTooSmall (naming a witness word) if
    any sphere word lacks the needed singular gap, and merges subspaces
    closer than dedup_tol in projector norm.
    """
    d = profile.dim
    if not 1 <= i <= d - 1:
        raise ValueError(f"plane dimension {i} out of range 1..{d - 1}")
    pick = np.nonzero((profile.lengths == profile.radius) & ~profile.flags)[0]
    out: list = []
    for w in pick:
        m = profile.ball.mats[int(w)]
        u, s, _ = np.linalg.svd(m)
        if s[i - 1] == 0 or (s[i] > 0 and s[i - 1] / s[i] <= 1.0 + thresholds.gap_tol):
            raise GapTooSmall(
                f"sphere word '{profile.word(int(w))}' has no gap at index {i}: "
                f"sigma_{i}/sigma_{i + 1} = {s[i - 1]:.6g}/{s[i]:.6g}")
        sub = Subspace(u[:, :i])
        if all(sub.distance_to(q) > thresholds.dedup_tol for q in out):
            out.append(sub)
    return out


@dataclass
class LimitFlagSample:
    """Deduplicated (attracting line, co-attracting hyperplane normal) pairs.

    Unlike limit_set_sample this skips gap-less words instead of failing;
    meant for feeding transversality estimates where coverage, not
    completeness, is the goal.
    """

    lines: np.ndarray
    hyperplane_normals: np.ndarray
    words: tuple
    skipped_no_gap: int

    def __len__(self):
        return self.lines.shape[0]


def limit_flag_sample(profile: GapProfile,
                      min_length: int | None = None,
                      max_points: int | None = None,
                      thresholds: Thresholds = DEFAULT_THRESHOLDS) -> LimitFlagSample:
    """Lines and hyperplane normals from long words that have both gaps.

    The hyperplane normal is the last left singular direction; its
    orthogonal complement is the span of the d-1 leading ones.
    """
    lo = profile.radius if min_length is None else int(min_length)
    pick = np.nonzero((profile.lengths >= lo) & ~profile.flags)[0]
    lines: list = []
    normals: list = []
    words: list = []
    skipped = 0
    for i in pick:
        m = profile.ball.mats[int(i)]
        u, s, _ = np.linalg.svd(m)
        top_gap = s[0] > 0 and (s[1] == 0 or s[0] / s[1] > 1.0 + thresholds.gap_tol)
        bot_gap = s[-2] > 0 and (s[-1] == 0 or s[-2] / s[-1] > 1.0 + thresholds.gap_tol)
        if not (top_gap and bot_gap):
            skipped += 1
            continue
        line = u[:, 0]
        if any(proj_metric(line, q) <= thresholds.dedup_tol for q in lines):
            continue
        lines.append(line)
        normals.append(u[:, -1])
        words.append(str(profile.word(int(i))))
        if max_points is not None and len(lines) >= max_points:
            break
    if not lines:
        d = profile.dim
        empty = np.zeros((0, d), dtype=profile.ball.mats.dtype)
        return LimitFlagSample(empty, empty.copy(), (), skipped)
    return LimitFlagSample(np.array(lines), np.array(normals), tuple(words), skipped)


def profile_to_csv(profile: GapProfile, fileobj) -> None:
    """One row per word: identity, length, flag, log sigmas, gaps, full ratio."""
    import csv

    writer = csv.writer(fileobj, lineterminator="\n")
    d = profile.dim
    header = (["index", "word", "length", "flagged"]
              + [f"log_sigma_{j + 1}" for j in range(d)]
              + [f"log_gap_{k}" for k in range(1, d)]
              + ["log_full_ratio"])
    writer.writerow(header)
    for i in range(len(profile.lengths)):
        row = [i, str(profile.word(i)), int(profile.lengths[i]),
               int(profile.flags[i])]
        if profile.flags[i]:
            row += [""] * (2 * d)
        else:
            sig = profile.log_sigmas[i]
            row += [repr(float(x)) for x in sig]
            row += [repr(float(sig[k - 1] - sig[k])) for k in range(1, d)]
            row += [repr(float(sig[0] - sig[-1]))]
        writer.writerow(row)
