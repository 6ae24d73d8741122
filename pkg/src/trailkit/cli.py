"""Command-line front door: JSON job configs in, JSON/DOT reports out.

Subcommands::

    trailkit enumerate --config job.json [--out DIR]
    trailkit sgraph    --config job.json [--out DIR]
    trailkit verify    --config job.json [--out DIR] [--suite NAME]
                       [--depth N] [--convention dual|straight]

The config carries the instance: ``{"cartan": [[...]], "word": [...]}``
plus optional ``"t"`` (default: every label), ``"c"`` or ``"class"`` for
the sgraph command, ``"depth"``, ``"convention"`` and output overrides.
Flags win over config keys.  Exit codes: 0 success, 2 malformed config,
3 valid matrix outside finite type, 4 a checked contract failed,
5 false-trail detection (the forensic block is written to the report and
echoed on stderr).

All JSON is written with sorted keys and all listings in sorted order, so
a fixed config produces byte-identical reports; graphs are emitted as DOT.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

from .bj_crystal import CONVENTIONS, dump_elements, generate_binf
from .cartan_core import CartanData, WordJ, require_finite, validate_gcm
from .errors import (ConfigError, FalseTrailDetected, NotFiniteTypeError,
                     TrailkitError)
from .giant import (check_constructibility, construct_envelope, epsilon_star,
                    extremality_report)
from .rep_builder import build_fundamental
from .sgraph import (CoeffVector, binary_fusion, display_tuple,
                     extremal_functions, integer_points, is_connected,
                     line_count, neighbor_graph, to_dot)
from .sl2_engine import (Sl2Config, coefficient_A, coefficient_A_oracle,
                         vanishing_identity)
from .trails import (driving_trail, enumerate_trails, face_function,
                     group_ts_classes, kashiwara_function, trail_function)

SUITES = ("sl2", "sgraph", "trails", "envelope", "all")


class JobConfig:
    """Validated instance data for one invocation."""

    def __init__(self, cartan: CartanData, word: WordJ, t: int | None,
                 c: tuple[int, ...] | None, selector: dict | None,
                 depth: int, convention: str, inject_spurious: bool):
        self.cartan = cartan
        self.word = word
        self.t = t
        self.c = c
        self.selector = selector
        self.depth = depth
        self.convention = convention
        self.inject_spurious = inject_spurious

    @property
    def labels(self):
        return [self.t] if self.t is not None else list(self.cartan.labels)


def load_config(path: str, args) -> JobConfig:
    """Read, validate, and merge the job file with flag overrides."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as e:
        raise ConfigError(f"{path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    for key in ("cartan", "word"):
        if key not in raw:
            raise ConfigError(f"{path}: missing required key {key!r}")
    try:
        cartan = validate_gcm(raw["cartan"])
    except NotFiniteTypeError:
        raise
    except TrailkitError as e:
        raise ConfigError(f"{path}: cartan: {e}") from e
    require_finite(cartan)
    try:
        word = WordJ(cartan, tuple(raw["word"]))
    except TrailkitError as e:
        raise ConfigError(f"{path}: word: {e}") from e
    t = raw.get("t")
    if t is not None:
        if t not in set(word.letters):
            raise ConfigError(f"{path}: t={t} does not occur in the word")
    c = raw.get("c")
    if c is not None:
        c = tuple(int(x) for x in c)
        if any(x < 0 for x in c):
            raise ConfigError(f"{path}: c entries must be non-negative")
    selector = raw.get("class")
    if selector is not None:
        for key in ("t", "s", "j"):
            if key not in selector:
                raise ConfigError(f"{path}: class selector needs {key!r}")
        if t is None:
            t = selector["t"]
    depth = args.depth if args.depth is not None else raw.get("depth", 4)
    if not isinstance(depth, int) or depth < 0:
        raise ConfigError(f"{path}: depth must be a non-negative integer")
    convention = (args.convention if args.convention is not None
                  else raw.get("convention", "dual"))
    if convention not in CONVENTIONS:
        raise ConfigError(f"{path}: convention must be one of {CONVENTIONS}")
    inject = bool(raw.get("inject_spurious", False)) or getattr(
        args, "inject_spurious", False)
    return JobConfig(cartan, word, t, c, selector, depth, convention, inject)


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _fn_terms(z) -> list[list[int]]:
    return [list(term) for term in z.terms]


def cmd_enumerate(cfg: JobConfig, out: str) -> int:
    """Module build + trail dump with per-trivialization-step counts."""
    modules = []
    for t in cfg.labels:
        M = build_fundamental(cfg.cartan, t)
        trails = sorted(enumerate_trails(M, cfg.word, t),
                        key=lambda K: K.exps)
        by_phi: dict[int, int] = {}
        for K in trails:
            by_phi[K.phi] = by_phi.get(K.phi, 0) + 1
        modules.append({
            "t": t,
            "dim": M.dim,
            "trail_count": len(trails),
            "by_phi": {str(j): by_phi[j] for j in sorted(by_phi)},
            "trails": [K.to_json_dict() for K in trails],
        })
    report = {
        "cartan": [list(row) for row in cfg.cartan.gcm],
        "word": list(cfg.word.letters),
        "modules": modules,
    }
    path = os.path.join(out, "trails.json")
    _write_json(path, report)
    total = sum(m["trail_count"] for m in modules)
    print(f"enumerate: {len(modules)} module(s), {total} trail(s) -> {path}")
    return 0


def _sgraph_payload(c: tuple[int, ...]) -> tuple[dict, str]:
    cv = CoeffVector.make(c)
    g = binary_fusion(cv)
    pts = sorted(integer_points(cv))
    counts = {str(u): [line_count(cv, p, u) for p in pts]
              for u in range(1, cv.n + 1)}
    payload = {
        "c": list(c),
        "vertices": [{"label": v.label, "coords": list(v.func),
                      "display": list(display_tuple(v.func))}
                     for v in g.vertices],
        "points": [list(p) for p in pts],
        "extremal_points": [list(p) for p in sorted(extremal_functions(cv))],
        "line_counts": counts,
    }
    return payload, to_dot(g)


def cmd_sgraph(cfg: JobConfig, out: str) -> int:
    """One graph per requested coefficient tuple, as DOT plus a table."""
    jobs: list[tuple[str, tuple[int, ...], dict | None]] = []
    if cfg.c is not None:
        jobs.append(("sgraph", cfg.c, None))
    elif cfg.selector is not None:
        sel = cfg.selector
        t, s, j = sel["t"], sel["s"], sel["j"]
        M = build_fundamental(cfg.cartan, t)
        trails = enumerate_trails(M, cfg.word, t)
        classes = group_ts_classes([K for K in trails if K.phi <= j], s, j)
        for idx, cls in enumerate(sorted(classes, key=lambda x: x.c)):
            jobs.append((f"sgraph_class{idx}", cls.c,
                         {"t": t, "s": s, "j": j, "a": list(cls.a),
                          "size": len(cls.members)}))
        if not jobs:
            raise ConfigError(f"no type-{s} classes at step {j}")
    else:
        raise ConfigError("sgraph needs either 'c' or a 'class' selector")
    written = []
    for stem, c, meta in jobs:
        payload, dot = _sgraph_payload(c)
        if meta:
            payload["class"] = meta
        _write_json(os.path.join(out, stem + ".json"), payload)
        with open(os.path.join(out, stem + ".dot"), "w",
                  encoding="utf-8") as fh:
            fh.write(dot)
        written.append(stem)
    print(f"sgraph: wrote {', '.join(written)} under {out}")
    return 0


def _suite_sl2() -> dict:
    checked = failed = 0
    for n in (1, 2):
        for combo in itertools.product(range(3), repeat=3 * n):
            a, k, l = combo[:n], combo[n:2 * n], combo[2 * n:]
            cfg = Sl2Config(a, k, l)
            checked += 1
            if coefficient_A(cfg) != coefficient_A_oracle(cfg):
                failed += 1
    vchecked = vfailed = 0
    for q in range(1, 4):
        for p1 in range(5):
            for p2 in range(q, 5):
                for u in range(q):
                    vchecked += 1
                    if vanishing_identity(q, p1, p2, u) != 0:
                        vfailed += 1
    return {"closed_form_vs_recurrence": {"checked": checked,
                                          "failed": failed},
            "vanishing_sum": {"checked": vchecked, "failed": vfailed},
            "ok": failed == 0 and vfailed == 0}


def _suite_sgraph() -> dict:
    checked = failed = 0
    for r in (1, 2, 3):
        for c in itertools.product(range(3), repeat=r):
            cv = CoeffVector.make(c)
            g = binary_fusion(cv)
            checked += 1
            ok = len(g.vertices) == 2 ** r
            for j in range(1, cv.n + 1):
                nodes, edges = neighbor_graph(g, j)
                ok = ok and is_connected(nodes, edges)
            if not ok:
                failed += 1
    return {"fusions": {"checked": checked, "failed": failed},
            "ok": failed == 0}


def _suite_trails(cfg: JobConfig) -> dict:
    cartan, word = cfg.cartan, cfg.word
    checked = failed = 0
    for s in cartan.labels:
        for k in range(2, word.count(s) + 1):
            want = (kashiwara_function(cartan, word, s, k - 1)
                    - kashiwara_function(cartan, word, s, k))
            checked += 1
            if face_function(cartan, word, s, k)[1] != want:
                failed += 1
    return {"face_identity": {"checked": checked, "failed": failed},
            "ok": failed == 0}


def _suite_envelope(cfg: JobConfig, forensics: dict) -> dict:
    out: dict = {"modules": [], "ok": True}
    for t in cfg.labels:
        M = build_fundamental(cfg.cartan, t)
        spurious = None
        if cfg.inject_spurious:
            spurious = trail_function(
                driving_trail(cfg.cartan, cfg.word, t)).scale(2)
        try:
            env = construct_envelope(M, cfg.word, t, spurious=spurious)
        except FalseTrailDetected as e:
            forensics["false_trail"] = {
                "t": t,
                "step": e.step,
                "class": repr(e.class_key),
                "function": _fn_terms(e.function),
                "nearest": None if e.nearest is None else _fn_terms(e.nearest),
                "detail": e.detail,
            }
            raise
        rep = check_constructibility(M, cfg.word, t, cfg.word.m)
        elems = generate_binf(cfg.cartan, cfg.word, min(cfg.depth, 4),
                              cfg.convention)
        sweep_ok = True
        for b in sorted(elems, key=lambda b: (b.total, b.coords)):
            vals = {epsilon_star(env, s, b.as_dict())
                    for s in cfg.cartan.labels}
            if len(vals) != 1:
                sweep_ok = False
        entry = {
            "t": t,
            "functions": len(env.functions),
            "constructible": rep["pass"],
            "constructible_strong": rep["pass_strong"],
            "steps": rep["steps"],
            "epsilon_star_s_independent": sweep_ok,
            "epsilon_star_elements": dump_elements(elems),
            "extremality": extremality_report(env),
            "layers": env.to_json_dict()["layers"],
        }
        out["modules"].append(entry)
        if not (rep["pass"] and rep["pass_strong"] and sweep_ok):
            out["ok"] = False
    return out


def cmd_verify(cfg: JobConfig, out: str, suite: str) -> int:
    """Run the selected check suites; write one combined report."""
    report: dict = {"suite": suite}
    path = os.path.join(out, "verify.json")
    forensics: dict = {}
    try:
        if suite in ("sl2", "all"):
            report["sl2"] = _suite_sl2()
        if suite in ("sgraph", "all"):
            report["sgraph"] = _suite_sgraph()
        if suite in ("trails", "all"):
            report["trails"] = _suite_trails(cfg)
        if suite in ("envelope", "all"):
            report["envelope"] = _suite_envelope(cfg, forensics)
    except FalseTrailDetected as e:
        report["false_trail"] = forensics.get("false_trail", {"detail": str(e)})
        _write_json(path, report)
        print(f"verify: FALSE TRAIL -> {path}", file=sys.stderr)
        print(str(e), file=sys.stderr)
        return 5
    _write_json(path, report)
    bad = [name for name in ("sl2", "sgraph", "trails", "envelope")
           if name in report and not report[name]["ok"]]
    if bad:
        print(f"verify: FAILED ({', '.join(bad)}) -> {path}",
              file=sys.stderr)
        return 4
    print(f"verify: ok -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trailkit",
        description="exact trail enumeration, S-graphs, and verification")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("enumerate", "dump all trails of the instance"),
                           ("sgraph", "emit one S-graph as DOT + JSON"),
                           ("verify", "run check suites and report")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="job JSON path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--depth", type=int, default=None,
                       help="crystal generation depth")
        p.add_argument("--convention", choices=CONVENTIONS, default=None,
                       help="pairing convention for crystal checks")
        if name == "verify":
            p.add_argument("--suite", choices=SUITES, default="all")
            p.add_argument("--inject-spurious", action="store_true",
                           help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args)
        os.makedirs(args.out, exist_ok=True)
        if args.command == "enumerate":
            return cmd_enumerate(cfg, args.out)
        if args.command == "sgraph":
            return cmd_sgraph(cfg, args.out)
        return cmd_verify(cfg, args.out, args.suite)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except NotFiniteTypeError as e:
        print(f"not finite type: {e}", file=sys.stderr)
        return 3
    except FalseTrailDetected as e:
        print(str(e), file=sys.stderr)
        return 5
    except TrailkitError as e:
        print(f"consistency failure: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
