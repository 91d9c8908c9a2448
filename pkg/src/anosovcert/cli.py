"""Batch driver: JSON configs in, CSV/JSON/SVG reports out.

Commands: gap-profile, certify-pingpong, build {rho|psi|phi|cor42},
algebra {burnside|zariski|genericity|centralizer|proximal}, freeness.

Each command takes one JSON config document.  Every output file embeds the
fully resolved config (defaults applied) under "run_config"; re-running the
same command on that embedded config reproduces the CSV/JSON outputs byte
for byte.  Exit codes: 0 success or pass, 2 certificate failure, 3 config
error, 4 numeric degradation (more than 1% of words flagged).
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

import numpy as np

from .algebra import NotProximal, burnside_span_dim, centralizer_basis, \
    centralizer_orbit_dim, genericity_check, genericity_to_csv, \
    proximal_data, zariski_density_heuristic
from .config import DEFAULT_THRESHOLDS, ConfigError, Thresholds, canonical_json
from .constructions import BlockSpec, conjugated_free_product_rep, \
    diagonal_copies_rep, last_block_rep
from .families import cyclic_diag_rep, sanov_rep, schottky_triple_config, \
    schottky_triple_rep, sym2_schottky_rep, trivial_rep, wedge_tau_rep
from .gapcert import compute_profile, fit_gap_growth, index_set_report, \
    profile_to_csv, qie_report
from .linalg import mat_from_json, mat_to_json, vec_from_json
from .pingpong import PingPongConfig, check_pingpong
from .projsets import SetValidationError, set_from_json
from .reps import Rep
from .svgplot import scatter_fit_svg

__all__ = ["main"]

FLAGGED_LIMIT = 0.01


class _Parser(argparse.ArgumentParser):
    # usage errors must map to exit 3, not argparse's default 2
    def error(self, message):
        raise ConfigError(message)


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"cannot parse JSON in {path}: {e}") from e
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e


def _check_keys(cfg: dict, required, optional):
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    missing = sorted(set(required) - set(cfg))
    if missing:
        raise ConfigError(f"config missing required field(s): {missing}")
    unknown = sorted(set(cfg) - set(required) - set(optional))
    if unknown:
        raise ConfigError(f"config has unknown field(s): {unknown}")


def _thresholds(cfg: dict) -> Thresholds:
    data = cfg.get("thresholds", {})
    if not isinstance(data, dict):
        raise ConfigError("'thresholds' must be an object")
    return Thresholds.from_json(data)


_FAMILIES = {
    "sanov": lambda node: sanov_rep(),
    "schottky_triple": lambda node: schottky_triple_rep(node["lam"]),
    "sym2_schottky": lambda node: sym2_schottky_rep(node["lam"]),
    "wedge_tau": lambda node: wedge_tau_rep(float(node["b"])),
    "cyclic_diag": lambda node: cyclic_diag_rep(node["entries"]),
    "trivial": lambda node: trivial_rep(int(node["dim"]),
                                        int(node.get("rank", 1))),
}


def _resolve_rep(node) -> Rep:
    if not isinstance(node, dict):
        raise ConfigError("'rep' must be a JSON object (inline rep, "
                          "{'path': ...}, or {'family': ...})")
    try:
        if "family" in node:
            name = node["family"]
            if name not in _FAMILIES:
                raise ConfigError(f"unknown rep family {name!r}; known: "
                                  f"{sorted(_FAMILIES)}")
            return _FAMILIES[name](node)
        if "path" in node:
            doc = _load_json(node["path"])
            return Rep.from_json(doc.get("rep", doc))
        return Rep.from_json(node)
    except KeyError as e:
        raise ConfigError(f"rep node missing field {e}") from e


def _resolve_vec(node) -> np.ndarray:
    if isinstance(node, dict):
        return vec_from_json(node)
    v = np.asarray(node, dtype=float)
    if v.ndim != 1:
        raise ConfigError("vector must be a flat list or a vector object")
    return v


def _out_dir(cfg: dict) -> str:
    out = cfg.get("out_dir", ".")
    os.makedirs(out, exist_ok=True)
    return out


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)


def _emit_json(path: str, doc: dict) -> None:
    _write(path, canonical_json(doc) + "\n")


def _resolved(cfg: dict, defaults: dict) -> dict:
    out = dict(defaults)
    out.update(cfg)
    merged = dict(DEFAULT_THRESHOLDS.to_json())
    merged.update(cfg.get("thresholds", {}))
    out["thresholds"] = merged
    return out


# ---------------------------------------------------------------------------
# gap-profile
# ---------------------------------------------------------------------------

def cmd_gap_profile(args) -> int:
    cfg = _load_json(args.config)
    _check_keys(cfg, required={"rep", "radius"},
                optional={"thresholds", "out_dir", "max_index", "seed"})
    th = _thresholds(cfg)
    rep = _resolve_rep(cfg["rep"])
    radius = int(cfg["radius"])
    if radius < 2:
        raise ConfigError("gap-profile needs radius >= 2")
    max_index = cfg.get("max_index")
    resolved = _resolved(cfg, {"out_dir": ".", "seed": 0, "max_index": None})
    rc = {"command": "gap-profile", "config": resolved}
    out = _out_dir(resolved)

    profile = compute_profile(rep, radius, th)
    qie = qie_report(profile, th)
    qie["run_config"] = rc
    idx = index_set_report(profile, th,
                           None if max_index is None else int(max_index))
    idx["run_config"] = rc

    buf = io.StringIO()
    profile_to_csv(profile, buf)
    _write(os.path.join(out, "profile.csv"),
           f"# run_config {canonical_json(rc)}\n" + buf.getvalue())
    _emit_json(os.path.join(out, "qie.json"), qie)
    _emit_json(os.path.join(out, "index_set.json"), idx)
    top = profile.dim - 1 if max_index is None else \
        min(int(max_index), profile.dim - 1)
    for k in range(1, top + 1):
        fit = fit_gap_growth(profile, k, th).to_json()
        fit["run_config"] = rc
        _emit_json(os.path.join(out, f"fit_gap_{k}.json"), fit)

    vals = profile.qie_values()
    keep = np.isfinite(vals)
    svg = scatter_fit_svg(profile.lengths[keep], vals[keep],
                          qie["fit"]["alpha"] if isinstance(qie["fit"]["alpha"], float)
                          else 0.0,
                          qie["fit"]["C"] if isinstance(qie["fit"]["C"], float)
                          else 0.0,
                          title="top/bottom singular ratio growth")
    _write(os.path.join(out, "qie.svg"),
           svg + f"<!-- run_config {canonical_json(rc)} -->\n")

    fit = qie["fit"]
    print(f"gap-profile: {len(profile.lengths)} words, radius {radius}, "
          f"qie verdict {fit['verdict']} (alpha={fit['alpha']}, C={fit['C']}), "
          f"growing indices {idx['indices_growing']}")
    if profile.flagged_fraction > FLAGGED_LIMIT:
        print(f"numeric degradation: {profile.flagged_fraction:.2%} of words "
              f"flagged (> {FLAGGED_LIMIT:.0%})", file=sys.stderr)
        return 4
    return 0


# ---------------------------------------------------------------------------
# certify-pingpong
# ---------------------------------------------------------------------------

def _pingpong_config(cfg: dict) -> PingPongConfig:
    if "schottky" in cfg:
        _check_keys(cfg, required={"schottky"}, optional={"thresholds", "out_dir"})
        node = cfg["schottky"]
        _check_keys(node, required={"lam"},
                    optional={"alpha", "radius", "samples", "seed", "ball_radius"})
        return schottky_triple_config(
            node["lam"],
            alpha=node.get("alpha"),
            radius=int(node.get("radius", 6)),
            samples=int(node.get("samples", 2048)),
            seed=int(node.get("seed", 0)),
            ball_radius=float(node.get("ball_radius", 0.1)))
    _check_keys(cfg, required={"rep", "c1", "c2", "m_sets", "alpha", "radius"},
                optional={"samples", "seed", "thresholds", "out_dir"})
    return PingPongConfig(
        rep=_resolve_rep(cfg["rep"]),
        c1=set_from_json(cfg["c1"]),
        c2=set_from_json(cfg["c2"]),
        m_sets=tuple(set_from_json(m) for m in cfg["m_sets"]),
        alpha=float(cfg["alpha"]),
        radius=int(cfg["radius"]),
        samples=int(cfg.get("samples", 2048)),
        seed=int(cfg.get("seed", 0)))


def cmd_certify_pingpong(args) -> int:
    cfg = _load_json(args.config)
    th = _thresholds(cfg)
    pp = _pingpong_config(cfg)
    resolved = pp.to_json()
    resolved["thresholds"] = th.to_json()
    resolved["out_dir"] = cfg.get("out_dir", ".")
    rc = {"command": "certify-pingpong", "config": resolved}
    out = _out_dir(resolved)

    cert = check_pingpong(pp, th)
    doc = cert.to_json()
    doc["run_config"] = rc
    _emit_json(os.path.join(out, "certificate.json"), doc)
    print(f"certify-pingpong: verdict {cert.verdict}, "
          f"{cert.norm_checks + cert.containment_checks} checks, "
          f"min norm margin {cert.min_norm_margin:.6g}, "
          f"min containment margin {cert.min_containment_margin:.6g}, "
          f"analytic {cert.analytic['verdict']}")
    return 0 if cert.verdict == "pass" else 2


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------

def cmd_build(args) -> int:
    cfg = _load_json(args.config)
    what = args.what
    if what in ("rho", "psi"):
        _check_keys(cfg, required={"base", "copies", "padding"},
                    optional={"thresholds", "out_dir"})
        base = _resolve_rep(cfg["base"])
        spec = BlockSpec(int(cfg["copies"]), int(cfg["padding"]), base.dim)
        rep = diagonal_copies_rep(base, spec) if what == "rho" \
            else last_block_rep(base, spec)
    elif what == "phi":
        _check_keys(cfg, required={"base", "copies", "padding", "conjugators"},
                    optional={"anchors", "factor_names", "thresholds", "out_dir"})
        base = _resolve_rep(cfg["base"])
        spec = BlockSpec(int(cfg["copies"]), int(cfg["padding"]), base.dim)
        conj = [mat_from_json(m) for m in cfg["conjugators"]]
        anchors = None if "anchors" not in cfg else \
            [mat_from_json(m) for m in cfg["anchors"]]
        rep = conjugated_free_product_rep(
            diagonal_copies_rep(base, spec), last_block_rep(base, spec),
            conj, anchors=anchors, factor_names=cfg.get("factor_names"))
    elif what == "cor42":
        _check_keys(cfg, required={"b"}, optional={"thresholds", "out_dir"})
        rep = wedge_tau_rep(float(cfg["b"]))
    else:  # unreachable through argparse choices
        raise ConfigError(f"unknown build target {what!r}")

    resolved = _resolved(cfg, {"out_dir": "."})
    rc = {"command": f"build {what}", "config": resolved}
    out = _out_dir(resolved)
    _emit_json(os.path.join(out, "rep.json"),
               {"rep": rep.to_json(), "run_config": rc})
    print(f"build {what}: dim {rep.dim}, field {rep.field}, "
          f"{rep.group.num_generators} generators, "
          f"exact={'yes' if rep.has_exact else 'no'}")
    return 0


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

_WHICH_ALIASES = {"rho": "copies", "psi": "last_block",
                  "copies": "copies", "last_block": "last_block"}


def cmd_algebra(args) -> int:
    cfg = _load_json(args.config)
    what = args.what
    th = _thresholds(cfg)
    resolved = _resolved(cfg, {"out_dir": "."})
    rc = {"command": f"algebra {what}", "config": resolved}
    out = _out_dir(resolved)

    if what == "burnside":
        _check_keys(cfg, required={"rep", "max_len"},
                    optional={"thresholds", "out_dir"})
        rep = _resolve_rep(cfg["rep"])
        span = burnside_span_dim(rep, int(cfg["max_len"]), th)
        doc = {"kind": "burnside_span", "span_dim": span,
               "d_squared": rep.dim * rep.dim, "max_len": int(cfg["max_len"])}
        summary = f"span_dim {span} of {rep.dim * rep.dim}"
    elif what == "zariski":
        _check_keys(cfg, required={"rep", "max_len"},
                    optional={"thresholds", "out_dir"})
        rep = _resolve_rep(cfg["rep"])
        doc = zariski_density_heuristic(rep, int(cfg["max_len"]), th)
        summary = doc["verdict"]
    elif what == "genericity":
        _check_keys(cfg, required={"mats", "omega0", "omega1"},
                    optional={"thresholds", "out_dir"})
        mats = [mat_from_json(m) for m in cfg["mats"]]
        doc = genericity_check(mats, _resolve_vec(cfg["omega0"]),
                               _resolve_vec(cfg["omega1"]), th)
        buf = io.StringIO()
        genericity_to_csv(doc, buf)
        _write(os.path.join(out, "genericity.csv"),
               f"# run_config {canonical_json(rc)}\n" + buf.getvalue())
        summary = f"{doc['verdict']} ({doc['subsets_checked']} subsets)"
    elif what == "centralizer":
        _check_keys(cfg, required={"copies", "padding", "block_dim", "which"},
                    optional={"vector", "thresholds", "out_dir"})
        spec = BlockSpec(int(cfg["copies"]), int(cfg["padding"]),
                         int(cfg["block_dim"]))
        which = _WHICH_ALIASES.get(cfg["which"])
        if which is None:
            raise ConfigError(f"'which' must be one of {sorted(_WHICH_ALIASES)}")
        basis = centralizer_basis(spec, which)
        doc = {"kind": "centralizer_basis", "which": which,
               "basis_count": int(basis.shape[0]),
               "basis": [mat_to_json(b) for b in basis]}
        if "vector" in cfg:
            doc["orbit_dim"] = centralizer_orbit_dim(
                spec, _resolve_vec(cfg["vector"]), th)
            doc["orbit_dim_bound"] = spec.copies ** 2 + spec.padding
        summary = f"{basis.shape[0]} basis matrices" + (
            f", orbit dim {doc['orbit_dim']}" if "orbit_dim" in doc else "")
    elif what == "proximal":
        _check_keys(cfg, required={"mat"}, optional={"thresholds", "out_dir"})
        m = mat_from_json(cfg["mat"])
        try:
            data = proximal_data(m, th)
            doc = {"kind": "proximal_data", "verdict": "proximal",
                   "data": data.to_json()}
        except NotProximal as e:
            doc = {"kind": "proximal_data", "verdict": "not proximal",
                   "reason": str(e)}
        summary = doc["verdict"]
    else:  # unreachable through argparse choices
        raise ConfigError(f"unknown algebra check {what!r}")

    doc["thresholds"] = th.to_json()
    doc["run_config"] = rc
    _emit_json(os.path.join(out, "verdict.json"), doc)
    print(f"algebra {what}: {summary}")
    return 0


# ---------------------------------------------------------------------------
# freeness
# ---------------------------------------------------------------------------

def cmd_freeness(args) -> int:
    cfg = _load_json(args.config)
    _check_keys(cfg, required={"rep", "radius"},
                optional={"thresholds", "out_dir"})
    rep = _resolve_rep(cfg["rep"])
    if not rep.has_exact:
        raise ConfigError("freeness needs a representation with exact images")
    resolved = _resolved(cfg, {"out_dir": "."})
    rc = {"command": "freeness", "config": resolved}
    out = _out_dir(resolved)

    report = rep.freeness_check_exact(int(cfg["radius"]))
    doc = {
        "kind": "freeness_check",
        "radius": report.radius,
        "words_checked": report.words_checked,
        "violations": list(report.violations),
        "ok": report.ok,
        "caveats": ["exact identity scan over the finite ball only; relations "
                    "longer than the radius are not excluded"],
        "run_config": rc,
    }
    _emit_json(os.path.join(out, "freeness.json"), doc)
    print(f"freeness: {report.words_checked} words checked to radius "
          f"{report.radius}, {len(report.violations)} violation(s)")
    return 0 if report.ok else 2


# ---------------------------------------------------------------------------

def _build_parser() -> _Parser:
    p = _Parser(prog="anosovcert",
                description="Certify singular value gap growth, ping-pong "
                            "dynamics, and irreducibility of explicit matrix "
                            "representations of free products.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gap-profile", help="singular profile of a word ball "
                                           "with growth fits")
    g.add_argument("config", help="JSON config: rep, radius, [thresholds, "
                                  "max_index, out_dir]")
    g.set_defaults(func=cmd_gap_profile)

    c = sub.add_parser("certify-pingpong", help="sampled + analytic ping-pong "
                                                "certificate")
    c.add_argument("config", help="JSON config: rep, c1, c2, m_sets, alpha, "
                                  "radius, [samples, seed] or {schottky: ...}")
    c.set_defaults(func=cmd_certify_pingpong)

    b = sub.add_parser("build", help="emit a representation JSON document")
    b.add_argument("what", choices=["rho", "psi", "phi", "cor42"])
    b.add_argument("config")
    b.set_defaults(func=cmd_build)

    a = sub.add_parser("algebra", help="span, density, genericity, "
                                       "centralizer, and proximality checks")
    a.add_argument("what", choices=["burnside", "zariski", "genericity",
                                    "centralizer", "proximal"])
    a.add_argument("config")
    a.set_defaults(func=cmd_algebra)

    f = sub.add_parser("freeness", help="exact identity scan over a word ball")
    f.add_argument("config")
    f.set_defaults(func=cmd_freeness)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ConfigError, SetValidationError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
