"""Quantitative ping-pong certificates on projective space.

The game: a free product with factors D_1, ..., D_l (l >= 3) acts on P(K^d)
through a representation, and sets C1, C2, M_2, ..., M_l are supplied with
M_i inside C1 and pairwise disjoint.  The certified conditions are, for
every nonidentity word gamma of length <= N inside a single factor,

  (i)  factor 1:      gamma . C1 lies in C2,
  (ii) factor i >= 2: gamma . (C2 and every M_j, j != i) lies in M_i,

together with the norm growth ||rho(gamma) v|| >= exp(alpha |gamma|) ||v||
on every source.  Containment is tested two independent ways: by mapping M
sampled source points and measuring target margins (can refute, cannot
prove), and by a sufficient analytic criterion for ball-shaped sources
built on the singular value contraction bound (can prove, cannot refute).
The two routes are reported separately and never merged.

All sampling is driven by one recorded seed; each (factor, element, source)
triple gets its own child stream, so shrinking the ball radius or the
sample count only removes checks and a pass verdict is monotone in both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import (DEFAULT_THRESHOLDS, ConfigError, Thresholds, config_hash,
                     finite_or_str)
from .linalg import Flag, Subspace, dist_to_subspace, hyperplane_from_normal, proj_metric
from .projsets import (BallSet, ProjectiveSet, SetValidationError,
                       SubspaceComplementSet, UnionSet, set_from_json)
from .reps import Rep
from .words import Word

__all__ = [
    "PingPongConfig", "Certificate", "CheckFailure",
    "check_pingpong", "suggest_alpha",
    "sets_from_transverse_flag", "transversality_margin", "flags_from_limit_sample",
]

MAX_RECORDED_FAILURES = 20
_INVARIANT_KEY = 1_000_000  # spawn-key namespace separating invariant sampling


@dataclass(frozen=True)
class PingPongConfig:
    """Everything check_pingpong needs, serializable and hashable.

    m_sets[i] is the target set of factor i + 1 (factor 0 targets c2).
    """

    rep: Rep
    c1: ProjectiveSet
    c2: ProjectiveSet
    m_sets: tuple
    alpha: float
    radius: int
    samples: int = 2048
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m_sets", tuple(self.m_sets))

    def validate(self) -> None:
        ell = self.rep.group.num_factors
        if ell < 3:
            raise ConfigError(
                f"the ping-pong shape needs at least 3 factors, got {ell}")
        if len(self.m_sets) != ell - 1:
            raise ConfigError(
                f"need one target set per factor beyond the first: "
                f"{ell - 1} sets for {ell} factors, got {len(self.m_sets)}")
        complex_rep = self.rep.field == "C"
        for label, s in self._labeled_sets():
            if s.ambient_dim != self.rep.dim:
                raise ConfigError(
                    f"set {label} lives in dimension {s.ambient_dim}, "
                    f"the representation in {self.rep.dim}")
            if s.complex_field and not complex_rep:
                raise ConfigError(f"set {label} is complex but the representation is real")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if self.radius < 1:
            raise ConfigError("radius must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")

    def _labeled_sets(self):
        yield "C1", self.c1
        yield "C2", self.c2
        for i, m in enumerate(self.m_sets):
            yield f"M{i + 2}", m

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "c1": self.c1.to_json(),
            "c2": self.c2.to_json(),
            "m_sets": [m.to_json() for m in self.m_sets],
            "alpha": self.alpha,
            "radius": self.radius,
            "samples": self.samples,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PingPongConfig":
        for key in ("rep", "c1", "c2", "m_sets", "alpha", "radius"):
            if key not in data:
                raise ConfigError(f"ping-pong config missing field '{key}'")
        return cls(
            rep=Rep.from_json(data["rep"]),
            c1=set_from_json(data["c1"]),
            c2=set_from_json(data["c2"]),
            m_sets=tuple(set_from_json(m) for m in data["m_sets"]),
            alpha=float(data["alpha"]),
            radius=int(data["radius"]),
            samples=int(data.get("samples", 2048)),
            seed=int(data.get("seed", 0)),
        )

    def digest(self) -> str:
        return config_hash(self.to_json())


@dataclass(frozen=True)
class CheckFailure:
    """One violated inequality, with enough data to re-check it exactly."""

    factor: int
    element: str
    source: str
    target: str
    kind: str          # "containment" | "norm" | "degenerate"
    point: tuple       # source point as a plain tuple (re or [re, im] pairs)
    value: float       # measured margin (<= 0)

    def to_json(self) -> dict:
        return {"factor": self.factor, "element": self.element,
                "source": self.source, "target": self.target,
                "kind": self.kind, "point": list(self.point),
                "value": finite_or_str(self.value)}


def _point_to_tuple(x: np.ndarray) -> tuple:
    if np.iscomplexobj(x):
        return tuple((float(z.real), float(z.imag)) for z in x)
    return tuple(float(v) for v in x)


def point_from_failure(fail: CheckFailure) -> np.ndarray:
    first = fail.point[0]
    if isinstance(first, (tuple, list)):
        return np.array([complex(p[0], p[1]) for p in fail.point])
    return np.array([float(p) for p in fail.point])


@dataclass
class Certificate:
    """Outcome of one full ping-pong run; immutable by convention."""

    verdict: str
    alpha: float
    radius: int
    samples: int
    seed: int
    config_hash: str
    containment_checks: int
    norm_checks: int
    min_containment_margin: float
    min_norm_margin: float
    total_failures: int
    failures: tuple
    per_factor: tuple
    invariants: dict
    analytic: dict
    thresholds: Thresholds = field(default_factory=lambda: DEFAULT_THRESHOLDS)

    def to_json(self) -> dict:
        return {
            "kind": "pingpong_certificate",
            "verdict": self.verdict,
            "alpha": self.alpha,
            "radius": self.radius,
            "samples": self.samples,
            "seed": self.seed,
            "config_hash": self.config_hash,
            "containment_checks": self.containment_checks,
            "norm_checks": self.norm_checks,
            "min_containment_margin": finite_or_str(self.min_containment_margin),
            "min_norm_margin": finite_or_str(self.min_norm_margin),
            "total_failures": self.total_failures,
            "failures": [f.to_json() for f in self.failures],
            "per_factor": list(self.per_factor),
            "invariants": self.invariants,
            "analytic": self.analytic,
            "thresholds": self.thresholds.to_json(),
            "caveats": [
                "containment by sampling refutes but does not prove; see the "
                "'analytic' section for the proving route on ball sources",
                "factor elements are checked up to the stated ball radius only",
            ],
        }


def _ball_parts(s: ProjectiveSet):
    """Flatten a set into ball parts, or None if any part is not a ball."""
    if isinstance(s, BallSet):
        return [s]
    if isinstance(s, UnionSet):
        parts = []
        for p in s.parts:
            sub = _ball_parts(p)
            if sub is None:
                return None
            parts.extend(sub)
        return parts
    return None


def _factor_sources(cfg: PingPongConfig, fi: int):
    """(label, set) sources checked for elements of factor fi."""
    if fi == 0:
        return [("C1", cfg.c1)]
    out = [("C2", cfg.c2)]
    for j in range(1, cfg.rep.group.num_factors):
        if j != fi:
            out.append((f"M{j + 1}", cfg.m_sets[j - 1]))
    return out


def _factor_target(cfg: PingPongConfig, fi: int):
    if fi == 0:
        return "C2", cfg.c2
    return f"M{fi + 1}", cfg.m_sets[fi - 1]


def _check_invariants(cfg: PingPongConfig) -> dict:
    """M_j inside C1 and pairwise disjoint; violations raise ConfigError."""
    labels = [f"M{j + 2}" for j in range(len(cfg.m_sets))]
    inv: dict = {"m_subset_c1": {}, "m_disjoint": {}}
    probe = min(cfg.samples, 512)
    sampled: list = []
    for j, (label, m) in enumerate(zip(labels, cfg.m_sets)):
        rng = np.random.default_rng(np.random.SeedSequence(
            cfg.seed, spawn_key=(_INVARIANT_KEY, j, 0)))
        pts = m.sample(probe, rng)
        sampled.append(pts)
        margin = float(np.min(cfg.c1.margin_batch(pts)))
        inv["m_subset_c1"][label] = margin
        if margin < 0:
            raise ConfigError(
                f"config invariant violated: {label} is not inside C1 "
                f"(sampled margin {margin:.3e})")
    for i in range(len(cfg.m_sets)):
        for j in range(i + 1, len(cfg.m_sets)):
            key = f"{labels[i]}|{labels[j]}"
            bi, bj = _ball_parts(cfg.m_sets[i]), _ball_parts(cfg.m_sets[j])
            if bi is not None and bj is not None:
                # exact criterion for balls: centers farther than radii sum
                margin = min(
                    proj_metric(a.center, b.center) - a.radius - b.radius
                    for a in bi for b in bj)
                inv["m_disjoint"][key] = float(margin)
                if margin <= 0:
                    raise ConfigError(
                        f"config invariant violated: {labels[i]} and {labels[j]} "
                        f"overlap (center distance deficit {margin:.3e})")
            else:
                # sampled refutation: no point of one may land in the other
                worst = float(np.max(cfg.m_sets[j].margin_batch(sampled[i])))
                inv["m_disjoint"][key] = -worst
                if worst >= 0:
                    raise ConfigError(
                        f"config invariant violated: a sampled point of "
                        f"{labels[i]} lies in {labels[j]}")
    return inv


def _analytic_ball_check(g: np.ndarray, word_len: int, parts, target: ProjectiveSet,
                         alpha: float, thresholds: Thresholds):
    """Sufficient criterion: image of each source ball is inside the target.

    Uses the contraction bound: with s1 >= s2 the singular values and H the
    span of the trailing right-singular directions, every [x] at distance
    D > 0 from P(H) satisfies d(g x, attractor) <= (s2/s1)/D and
    ||g x|| >= s1 * D.  For a source ball, D >= dist(center, P(H)) - radius.
    Returns (certified, containment_margin, norm_margin, reason).
    """
    s = np.linalg.svd(g, compute_uv=False)
    if s[1] > 0 and s[0] / s[1] <= 1.0 + thresholds.gap_tol:
        return False, -math.inf, -math.inf, "no singular gap at index 1"
    u, sv, vh = np.linalg.svd(g)
    attractor = u[:, 0]
    rep_hyp = Subspace(vh.conj().T[:, 1:])
    cont = math.inf
    norm = math.inf
    for ball in parts:
        dist = dist_to_subspace(ball.center, rep_hyp) - ball.radius
        if dist <= 0:
            return False, -math.inf, -math.inf, \
                "source ball meets the repelling hyperplane neighborhood"
        r_img = (sv[1] / sv[0]) / dist
        cont = min(cont, target.margin(attractor) - r_img)
        norm = min(norm, math.log(sv[0]) + math.log(dist) - alpha * word_len)
    certified = cont > 0 and norm > 0
    return certified, cont, norm, ""


def check_pingpong(cfg: PingPongConfig,
                   thresholds: Thresholds = DEFAULT_THRESHOLDS) -> Certificate:
    """Run every sampled and analytic check; never raises on a mere failure.

    Raises ConfigError (or SetValidationError) when the configuration itself
    is malformed: wrong factor count, mismatched dimensions, overlapping
    targets, or a target escaping C1.
    """
    cfg.validate()
    invariants = _check_invariants(cfg)
    rep, group = cfg.rep, cfg.rep.group
    digest = cfg.digest()

    failures: list = []
    total_failures = 0
    min_cont = math.inf
    min_norm = math.inf
    cont_checks = 0
    norm_checks = 0
    per_factor: list = []

    ana_total = 0
    ana_certified = 0
    ana_min_cont = math.inf
    ana_min_norm = math.inf
    ana_skipped_sources = 0
    ana_reasons: list = []

    for fi in range(group.num_factors):
        elements = [w for w in group.enumerate_factor_ball(fi, cfg.radius)
                    if not w.is_identity()]
        sources = _factor_sources(cfg, fi)
        target_label, target = _factor_target(cfg, fi)
        f_min_cont = math.inf
        f_min_norm = math.inf
        for ei, w in enumerate(elements):
            g = rep.evaluate(w)
            for si, (src_label, src) in enumerate(sources):
                rng = np.random.default_rng(np.random.SeedSequence(
                    cfg.seed, spawn_key=(fi, ei, si)))
                pts = src.sample(cfg.samples, rng)
                imgs = pts @ g.T
                norms = np.linalg.norm(imgs, axis=1)
                norm_margins = np.full(len(norms), -math.inf)
                okn = (norms > 0) & np.isfinite(norms)
                norm_margins[okn] = np.log(norms[okn]) - cfg.alpha * len(w)
                unit = np.zeros_like(imgs)
                unit[okn] = imgs[okn] / norms[okn, None]
                cont_margins = np.full(len(norms), -math.inf)
                cont_margins[okn] = target.margin_batch(unit[okn])

                norm_checks += len(norms)
                cont_checks += len(norms)
                f_min_norm = min(f_min_norm, float(np.min(norm_margins)))
                f_min_cont = min(f_min_cont, float(np.min(cont_margins)))

                for kind, margins in (("norm", norm_margins),
                                      ("containment", cont_margins)):
                    bad = np.nonzero(margins <= 0)[0]
                    total_failures += len(bad)
                    for b in bad[:max(0, MAX_RECORDED_FAILURES - len(failures))]:
                        failures.append(CheckFailure(
                            factor=fi, element=str(w), source=src_label,
                            target=target_label,
                            kind=kind if okn[b] else "degenerate",
                            point=_point_to_tuple(pts[b]),
                            value=float(margins[b])))

                # analytic route, ball-shaped sources only
                parts = _ball_parts(src)
                if parts is None:
                    ana_skipped_sources += 1
                else:
                    ana_total += 1
                    cert, ac, an, reason = _analytic_ball_check(
                        g, len(w), parts, target, cfg.alpha, thresholds)
                    ana_min_cont = min(ana_min_cont, ac)
                    ana_min_norm = min(ana_min_norm, an)
                    if cert:
                        ana_certified += 1
                    elif reason and len(ana_reasons) < MAX_RECORDED_FAILURES:
                        ana_reasons.append(
                            {"factor": fi, "element": str(w),
                             "source": src_label, "reason": reason})
        min_cont = min(min_cont, f_min_cont)
        min_norm = min(min_norm, f_min_norm)
        per_factor.append({
            "factor": fi,
            "elements": len(elements),
            "sources": [lbl for lbl, _ in sources],
            "target": target_label,
            "min_containment_margin": finite_or_str(f_min_cont),
            "min_norm_margin": finite_or_str(f_min_norm),
        })

    verdict = "pass" if total_failures == 0 else "fail"
    analytic = {
        "route": "contraction bound on ball sources (sufficient, not necessary)",
        "ball_source_checks": ana_total,
        "certified": ana_certified,
        "skipped_non_ball_sources": ana_skipped_sources,
        "min_containment_margin": finite_or_str(ana_min_cont),
        "min_norm_margin": finite_or_str(ana_min_norm),
        "verdict": ("pass" if ana_total > 0 and ana_certified == ana_total
                    else ("none" if ana_total == 0 else "partial")),
        "uncertified": ana_reasons,
    }
    return Certificate(
        verdict=verdict, alpha=cfg.alpha, radius=cfg.radius,
        samples=cfg.samples, seed=cfg.seed, config_hash=digest,
        containment_checks=cont_checks, norm_checks=norm_checks,
        min_containment_margin=min_cont, min_norm_margin=min_norm,
        total_failures=total_failures, failures=tuple(failures),
        per_factor=tuple(per_factor), invariants=invariants,
        analytic=analytic, thresholds=thresholds)


def recheck_failure(cfg: PingPongConfig, fail: CheckFailure) -> float:
    """Recompute the margin a recorded failure reported, from its own data."""
    rep = cfg.rep
    w = rep.group.parse(fail.element)
    g = rep.evaluate(w)
    x = point_from_failure(fail)
    y = g @ x
    n = float(np.linalg.norm(y))
    if fail.kind == "norm":
        return math.log(n) - cfg.alpha * len(w)
    _, target = _factor_target(cfg, fail.factor)
    return float(target.margin(y / n))


def suggest_alpha(rep: Rep, c1: ProjectiveSet, c2: ProjectiveSet, m_sets,
                  radius: int, samples: int = 256, seed: int = 0) -> float:
    """Smallest observed per-letter log norm growth across all checks.

    Any alpha at or below this value (minus a safety margin) makes the norm
    half of the game plausible; containment still has to be checked.
    """
    cfg = PingPongConfig(rep=rep, c1=c1, c2=c2, m_sets=tuple(m_sets),
                         alpha=1.0, radius=radius, samples=samples, seed=seed)
    best = math.inf
    group = rep.group
    for fi in range(group.num_factors):
        sources = _factor_sources(cfg, fi)
        elements = [w for w in group.enumerate_factor_ball(fi, radius)
                    if not w.is_identity()]
        for ei, w in enumerate(elements):
            g = rep.evaluate(w)
            for si, (_, src) in enumerate(sources):
                rng = np.random.default_rng(np.random.SeedSequence(
                    seed, spawn_key=(fi, ei, si)))
                pts = src.sample(samples, rng)
                norms = np.linalg.norm(pts @ g.T, axis=1)
                if np.any(norms <= 0):
                    return -math.inf
                best = min(best, float(np.min(np.log(norms))) / len(w))
    return best


# ---------------------------------------------------------------------------
# Standard set geometry from a transverse flag
# ---------------------------------------------------------------------------

def transversality_margin(flag: Flag, limit_flags) -> float:
    """One eleventh of the worst flag-vs-limit-flag separation.

    For each sampled limit flag (xi_line, xi_hyp) the separation is
    min(dist(xi_line, P(W)), dist(v0, P(xi_hyp))) where (v0, W) is the
    reference flag; the returned value is (1/11) of the infimum, zero when
    the flag touches a limit flag.
    """
    flag = flag.validate()
    limit_flags = list(limit_flags)
    if not limit_flags:
        raise ValueError("need at least one limit flag")
    v0 = flag.line.frame[:, 0]
    worst = math.inf
    for lf in limit_flags:
        lf = lf.validate()
        if lf.line.ambient_dim != flag.line.ambient_dim:
            raise ValueError("limit flag dimension does not match the reference flag")
        a = dist_to_subspace(lf.line.frame[:, 0], flag.hyperplane)
        b = dist_to_subspace(v0, lf.hyperplane)
        worst = min(worst, a, b)
    return worst / 11.0


def flags_from_limit_sample(sample) -> list:
    """Convert a gapcert.LimitFlagSample into Flag objects."""
    out = []
    for i in range(len(sample)):
        out.append(Flag(Subspace.line(sample.lines[i]),
                        hyperplane_from_normal(sample.hyperplane_normals[i])))
    return out


def sets_from_transverse_flag(v0, hyperplane: Subspace, eps: float, centers,
                              radii=None, repelling_subspaces=None,
                              eps_small: float | None = None,
                              theta: float | None = None):
    """Build (C1, C2, M_2...M_l) around a flag transverse to the limit set.

    C1 is the ball of radius 2*eps around [v0]; C2 is the complement of the
    4*eps^2 neighborhood of P(hyperplane); M_i is the ball of radius
    radii[i] around centers[i].  The default radius eps/2 leaves room for
    several disjoint target balls inside C1; pass radii explicitly to pin
    them to data.  Raises SetValidationError naming the violated clause:

      m_inside_c1:          d(x_i, v0) + r_i <= 2*eps
      m_disjoint:           d(x_i, x_j) > r_i + r_j
      m_avoids_repelling:   dist(x_j, P(V_i)) - r_j >= 12*eps_small, j != i
                            (only when repelling_subspaces is given)
      m_avoids_hyperplane:  dist(x_i, P(W)) - r_i >= theta
                            (only when theta is given)
    """
    if not 0 < eps <= 1.0 / 11.0:
        raise SetValidationError(
            f"clause eps_range: eps must lie in (0, 1/11], got {eps}")
    v0 = np.asarray(v0)
    if v0.ndim != 1:
        raise SetValidationError("v0 must be a vector")
    d = v0.shape[0]
    if hyperplane.ambient_dim != d or hyperplane.dim != d - 1:
        raise SetValidationError(
            f"hyperplane must have codimension 1 in dimension {d}")
    centers = [np.asarray(c) for c in centers]
    if radii is None:
        radii = [eps / 2.0] * len(centers)
    radii = [float(r) for r in radii]
    if len(radii) != len(centers):
        raise SetValidationError("radii and centers must have equal length")

    c1 = BallSet(v0, 2.0 * eps)
    c2 = SubspaceComplementSet(hyperplane, 4.0 * eps * eps)
    m_sets = [BallSet(c, r) for c, r in zip(centers, radii)]

    v0u = c1.center
    for i, m in enumerate(m_sets):
        slack = 2.0 * eps - proj_metric(m.center, v0u) - m.radius
        if slack < 0:
            raise SetValidationError(
                f"clause m_inside_c1: ball {i} pokes out of C1 by {-slack:.3e}")
    for i in range(len(m_sets)):
        for j in range(i + 1, len(m_sets)):
            gap = proj_metric(m_sets[i].center, m_sets[j].center) \
                - m_sets[i].radius - m_sets[j].radius
            if gap <= 0:
                raise SetValidationError(
                    f"clause m_disjoint: balls {i} and {j} overlap "
                    f"(center distance deficit {gap:.3e})")
    if repelling_subspaces is not None:
        if eps_small is None:
            raise SetValidationError(
                "clause m_avoids_repelling: eps_small is required when "
                "repelling_subspaces is given")
        if len(repelling_subspaces) != len(m_sets):
            raise SetValidationError(
                "clause m_avoids_repelling: need one subspace per ball")
        for i, v_i in enumerate(repelling_subspaces):
            for j, m in enumerate(m_sets):
                if i == j:
                    continue
                sep = dist_to_subspace(m.center, v_i) - m.radius
                if sep < 12.0 * eps_small:
                    raise SetValidationError(
                        f"clause m_avoids_repelling: ball {j} is only "
                        f"{sep:.3e} from subspace {i}, need {12.0 * eps_small:.3e}")
    if theta is not None:
        for i, m in enumerate(m_sets):
            sep = dist_to_subspace(m.center, hyperplane) - m.radius
            if sep < theta:
                raise SetValidationError(
                    f"clause m_avoids_hyperplane: ball {i} is only "
                    f"{sep:.3e} from the hyperplane, need {theta:.3e}")
    return c1, c2, m_sets
