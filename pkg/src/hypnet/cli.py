"""Command-line front end: ``analyze``, ``automata`` and ``geometry``.

Exit codes: 0 success, 1 a certified check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import automata as am
from .cayley import (build_ball, estimate_delta, estimate_quasiconvexity, ray_extension_constant,
                     subgroup_ball)
from .cones import (ConeLanguages, ConeTypeError, WordDifferenceBoundError, compute_cone_types,
                    acceptor_discrepancy, geodesic_acceptor)
from .net import (NetReport, RadiusRow, SubgroupOracle, action_displacement, build_coset_table,
                  check_lemma_5A, compute_S_bruteforce, net_defect, oracle_crosscheck, section_image)
from .words import SpecError, parse_group, parse_subgroup

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2

LANGUAGE_FAMILIES = ("free", "fpc")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    group: str = "free:2"
    subgroup: str = "1"
    radius: int = 6
    k: Optional[int] = None
    D: Optional[int] = None
    C1: Optional[int] = None
    outdir: str = "hypnet-out"
    sampled: Optional[int] = None
    diagnostic: bool = False
    seed: int = 0
    workers: int = 1
    which: str = "lambda"
    languages: str = "auto"
    margin: int = 1
    delta_radius: int = 4

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if v is not None:
                lines.append(f"{f.name}={str(v).lower() if isinstance(v, bool) else v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(**_coerce(_parse_kv(text)))

    def validate(self) -> None:
        if self.radius < 2:
            raise UsageError("radius must be at least 2")
        if self.workers < 1:
            raise UsageError("workers must be positive")
        if self.languages not in ("auto", "on", "off"):
            raise UsageError("languages must be auto, on or off")
        for name in ("k", "D", "C1", "sampled"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise UsageError(f"{name} must be nonnegative")
        if not 0 <= self.margin <= self.radius:
            raise UsageError("margin must lie in [0, radius]")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _parse_kv(text: str) -> dict:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {n}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise UsageError(f"config line {n}: unknown key {key!r}")
        out[key] = val
    return out


def _coerce(raw: dict) -> dict:
    out = {}
    for key, val in raw.items():
        t = str(_TYPES[key])
        try:
            if "bool" in t:
                if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(val)
                out[key] = val.lower() in ("true", "1", "yes")
            elif "int" in t:
                out[key] = None if val.lower() == "none" else int(val)
            else:
                out[key] = val
        except ValueError:
            raise UsageError(f"bad value for {key}: {val!r}") from None
    return out


# -- helpers -----------------------------------------------------------------

def artifact_dir(cfg: RunConfig) -> Path:
    return Path(cfg.outdir) / cfg.group / cfg.subgroup / str(cfg.radius)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _delta2(cfg: RunConfig, group) -> tuple[int, dict]:
    r = max(2, min(cfg.radius, cfg.delta_radius))
    prof = estimate_delta(build_ball(group, r), "exhaustive" if cfg.sampled is None else cfg.sampled, cfg.seed)
    return prof.delta2, {"delta_thin": str(prof.delta_thin), "delta_four_point": str(prof.delta_four_point),
                         "radius": r, "exhaustive": prof.exhaustive, "samples": prof.sample_size}


def _quasiconvexity(group, h, radius: int) -> int:
    if h.trivial or h.whole:
        return 0
    b = build_ball(group, radius)
    return estimate_quasiconvexity(b, subgroup_ball(b, h)).K


def _languages(cfg: RunConfig, group, delta2: int) -> ConeLanguages:
    """Cone types and the language toolkit, with k and D chosen by policy."""
    k = cfg.k if cfg.k is not None else delta2 + 2
    k = max(1, k)
    b = build_ball(group, k + 4)
    table = compute_cone_types(b, k)
    bad = acceptor_discrepancy(geodesic_acceptor(table), b, b.radius - k - 1)
    if bad is not None:
        raise ConeTypeError(f"acceptor disagrees with the ball on {bad!r}")
    D = cfg.D if cfg.D is not None else 2 * delta2 + 2
    cap = max(D, b.radius // 2)
    while True:
        langs = ConeLanguages(table, D)
        try:
            for s in group.alphabet.symbols:
                langs.multiplier(s)
            return langs
        except WordDifferenceBoundError:
            if cfg.D is not None or 2 * D > cap:
                raise
            D *= 2


def _radius_row(args) -> dict:
    group_text, sub_text, r, margin = args
    group = parse_group(group_text)
    oracle = SubgroupOracle(group, parse_subgroup(sub_text, group))
    b = build_ball(group, r)
    ct = build_coset_table(b, oracle, r)
    S = [g for g in b.elements if oracle.in_S(g)]
    rep = check_lemma_5A(oracle, build_coset_table(b, oracle, min(r, 6)), 10**9)
    d = net_defect(b, section_image(b, oracle), min(margin, r))
    return asdict(RadiusRow(r, len(ct), len(S), d, rep.max_slack))


def per_radius_table(cfg: RunConfig) -> list[dict]:
    jobs = [(cfg.group, cfg.subgroup, r, cfg.margin) for r in range(2, cfg.radius + 1)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            return list(ex.map(_radius_row, jobs))
    return [_radius_row(j) for j in jobs]


def _verdict(defects: list[int]) -> str:
    tail = defects[-3:]
    if len(tail) == 3 and tail[0] < tail[1] < tail[2]:
        return "NOT-A-NET"
    if len(tail) >= 2 and len(set(tail)) == 1:
        return "NET"
    return "INCONCLUSIVE"


# -- commands ----------------------------------------------------------------

def cmd_analyze(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    group = parse_group(cfg.group)
    h = parse_subgroup(cfg.subgroup, group)
    oracle = SubgroupOracle(group, h)
    R = cfg.radius
    b = build_ball(group, R)
    delta2, delta_info = _delta2(cfg, group)
    K = _quasiconvexity(group, h, min(R, 6))
    C1 = cfg.C1 if cfg.C1 is not None else 2 * delta2 + 2 * K + 8
    checks: dict[str, bool] = {}
    extra: dict = {"delta_profile": delta_info}

    lemma_ct = build_coset_table(b, oracle, min(R, 6))
    lemma = check_lemma_5A(oracle, lemma_ct, C1)
    if lemma.violation is not None and cfg.C1 is None:
        extra["C1_raised_from"] = C1
        C1 = lemma.max_slack
        lemma = check_lemma_5A(oracle, lemma_ct, C1)
    checks["lemma5A"] = lemma.violation is None and lemma.S_diameter <= C1

    agreement, completion, automata_out = None, None, {}
    run_lang = cfg.languages == "on" or (cfg.languages == "auto" and group.family in LANGUAGE_FAMILIES)
    if run_lang:
        try:
            langs = _languages(cfg, group, delta2)
            lam_h = langs.subgroup_geodesics(h, K, oracle_member(oracle))
            S = langs.S_language(lam_h, C1, diagnostic=cfg.diagnostic)
            brute = compute_S_bruteforce(b, oracle)
            cc = oracle_crosscheck(S.automaton, brute, group, R)
            agreement = cc.agree
            completion = am.completion_distance(S.automaton)
            checks["oracle_agreement"] = cc.agree
            checks["completion_bound"] = completion <= S.automaton.n
            extra.update(k=langs.table.k, D=langs.D, cone_types=langs.table.num_classes,
                         S_states=S.automaton.n, lambda_states=langs.lam.n)
            if not cc.agree:
                extra["oracle_witness"] = {"word": cc.witness, "only_in": cc.witness_side}
            if cfg.diagnostic:
                extra["union_form_agrees"] = S.union_form_agrees
            automata_out = {"lambda": langs.lam, "S": S.automaton, "subgroup_geodesics": lam_h}
        except (ConeTypeError, WordDifferenceBoundError, MemoryError) as e:
            extra["languages_skipped"] = f"{type(e).__name__}: {e}"
    else:
        extra["languages_skipped"] = f"not attempted for family {group.family}"

    rows = per_radius_table(cfg)
    defects = [r["defect"] for r in rows]
    ct = build_coset_table(b, oracle, R // 2)
    worst = net_defect(b, section_image(b, oracle, worst=True), cfg.margin)
    act_max, act_ok = 0, True
    reps = ct.keys
    for g in (x for x in b.elements if len(x) <= 2):
        d = action_displacement(oracle, reps, g)
        act_max = max(act_max, d)
        act_ok = act_ok and d <= C1 + 2 * len(g)
    checks["action_bound"] = act_ok
    verdict = _verdict(defects)
    report = NetReport(
        group=cfg.group, subgroup=cfg.subgroup, R=R, delta=str(Fraction(delta2, 2)), K=K, C1=C1,
        coset_count=len(build_coset_table(b, oracle)), S_size=sum(1 for g in b.elements if oracle.in_S(g)),
        section_size=len(section_image(b, oracle)), net_defect=defects[-1], net_defect_worst_section=worst,
        margin=cfg.margin, certified_region=R - cfg.margin, completion_distance=completion,
        oracle_agreement=agreement, lemma5A_max_slack=lemma.max_slack, S_coset_diameter=lemma.S_diameter,
        action_check_max=act_max, action_check_bound_ok=act_ok, verdict=verdict, checks=checks,
        per_radius=rows, extra=extra)

    d = artifact_dir(cfg)
    _write(d / "report.json", _dump(report.to_dict()))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["R", "coset_count", "S_size", "defect", "lemma5A_max_slack"],
                       lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _write(d / "defects.csv", buf.getvalue())
    for name, A in automata_out.items():
        _write(d / "automata" / f"{name}.json", A.to_json() + "\n")
        _write(d / "automata" / f"{name}.dot", A.to_dot(name))

    print(f"{cfg.group} / {cfg.subgroup}  R={R}  delta={report.delta}  K={K}  C1={C1}", file=out)
    print(f"cosets={report.coset_count}  S={report.S_size}  defect={report.net_defect}  "
          f"oracle_agreement={agreement}  completion={completion}  verdict={verdict}", file=out)
    failed = [name for name, ok in sorted(checks.items()) if not ok]
    if verdict == "NOT-A-NET":
        failed.append("net")
    for name in failed:
        print(f"FAILED: {name}", file=out)
    print(f"report: {d / 'report.json'}", file=out)
    return EXIT_CHECK if failed else EXIT_OK


def oracle_member(oracle: SubgroupOracle):
    h = oracle.h
    if h.membership is not None:
        return h.membership
    return lambda g: oracle.key(g) == ""


def _object(cfg: RunConfig, langs: ConeLanguages, h, K: int, C1: int) -> dict:
    which = cfg.which
    name, _, arg = which.partition(":")
    syms = langs.group.alphabet.symbols
    if name in ("P", "Rc", "Rp") and arg not in syms:
        raise UsageError(f"{which}: expected a generator symbol after ':'")
    if name == "lambda":
        return {"lambda": langs.lam}
    if name == "Ln":
        try:
            n = int(arg)
        except ValueError:
            raise UsageError("Ln needs an integer, e.g. Ln:2") from None
        return {f"L{n}": langs.L(n)}
    if name == "P":
        P = langs.P(arg)
        return {f"P{i}_{arg}": P[i] for i in range(3)}
    if name == "R":
        return {"R": langs.R()}
    if name == "Rc":
        return {f"Rc_{arg}": langs.R_c(arg)}
    if name == "Rp":
        return {f"Rp_{arg}": am.minimize(langs.R_prime(arg))}
    if name == "S":
        oracle = SubgroupOracle(langs.group, h)
        lam_h = langs.subgroup_geodesics(h, K, oracle_member(oracle))
        return {"S": langs.S_language(lam_h, C1).automaton}
    raise UsageError(f"unknown automaton {which!r}")


def cmd_automata(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    group = parse_group(cfg.group)
    h = parse_subgroup(cfg.subgroup, group)
    delta2, _ = _delta2(cfg, group)
    K = _quasiconvexity(group, h, min(cfg.radius, 6))
    C1 = cfg.C1 if cfg.C1 is not None else 2 * delta2 + 2 * K + 8
    langs = _languages(cfg, group, delta2)
    objs = _object(cfg, langs, h, K, C1)
    d = artifact_dir(cfg) / "automata"
    for name, A in objs.items():
        _write(d / f"{name}.json", A.to_json() + "\n")
        _write(d / f"{name}.dot", A.to_dot(name))
        count = len(am.enumerate_language(A, 6))
        line = f"{name}: states={A.n} tapes={A.tapes} accepted_to_length_6={count}"
        if A.tapes == 1 and not am.is_empty(A):
            line += f" completion_distance={am.completion_distance(A)}"
        print(line, file=out)
    return EXIT_OK


def cmd_geometry(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    group = parse_group(cfg.group)
    h = parse_subgroup(cfg.subgroup, group)
    R = cfg.radius
    b = build_ball(group, R)
    delta2, info = _delta2(cfg, group)
    K = _quasiconvexity(group, h, min(R, 6))
    ray = ray_extension_constant(b)
    profile = {"group": cfg.group, "subgroup": cfg.subgroup, "radius": R, "sphere_sizes": b.sphere_sizes(),
               "delta": info, "K": K, "ray_constant": ray}
    k = cfg.k if cfg.k is not None else min(delta2 + 2, R - 2)
    try:
        profile["cone_types"] = {"k": k, "classes": compute_cone_types(b, k).num_classes}
    except ConeTypeError as e:
        profile["cone_types"] = {"k": k, "error": str(e)}
    _write(artifact_dir(cfg) / "geometry.json", _dump(profile))
    print(f"{cfg.group}  R={R}  spheres={profile['sphere_sizes']}", file=out)
    print(f"delta_thin={info['delta_thin']}  delta_four_point={info['delta_four_point']}  "
          f"K={K}  ray_constant={ray}  cone_types={profile['cone_types']}", file=out)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "automata": cmd_automata, "geometry": cmd_geometry}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hypnet", description="Coset representatives and nets in hyperbolic groups.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="key=value file; flags override it")
        sp.add_argument("--group")
        sp.add_argument("--subgroup")
        sp.add_argument("--radius", type=int)
        sp.add_argument("--k", type=int)
        sp.add_argument("--D", type=int)
        sp.add_argument("--C1", type=int)
        sp.add_argument("--outdir")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--exhaustive", action="store_true", default=None)
        mode.add_argument("--sampled", type=int, metavar="N")
        sp.add_argument("--diagnostic", action="store_true", default=None)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--margin", type=int)
        sp.add_argument("--languages", choices=["auto", "on", "off"])
        if name == "automata":
            sp.add_argument("--which", help="lambda, Ln:n, S, P:c, R, Rc:c or Rp:c")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if ns.config:
        try:
            values.update(_coerce(_parse_kv(Path(ns.config).read_text())))
        except OSError as e:
            raise UsageError(f"cannot read config: {e}") from None
    for f in fields(RunConfig):
        v = getattr(ns, f.name, None)
        if v is not None:
            values[f.name] = v
    if ns.exhaustive:
        values["sampled"] = None
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        cfg = config_from_args(ns)
        parse_subgroup(cfg.subgroup, parse_group(cfg.group))
        return COMMANDS[ns.command](cfg)
    except (UsageError, SpecError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
