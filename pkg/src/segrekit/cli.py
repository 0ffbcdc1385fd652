"""Command-line front end: parse manifold and map files, run a command, print
flat ``key=value`` report lines."""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Sequence

from .fps import GaussianRational, ParseError, Series, invert_unit, parse_poly
from .manifold import (FormalMap, GenericManifold, ambient_vars, graph_vars, conjugate_theta,
                       identity_map, theta_from_graph, verify_maps_into, verify_reality)
from .segre import minimality_witness, segre_multitype

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_INCONCLUSIVE = 4

MANIFOLD_KEYS = re.compile(r"^(name|m|d|order|theta_bar_\d+|graph_\d+|graph_den_\d+)$")
MAP_KEYS = re.compile(r"^(name|source|target|order|h_\d+)$")
ARTIN_KEYS = re.compile(r"^(name|order|w|y|r_\d+|g_\d+)$")
SECTION_KEYS = {"manifold": MANIFOLD_KEYS, "map": MAP_KEYS, "artin": ARTIN_KEYS}


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ArtinSystem:
    name: str
    order: int
    w: tuple[str, ...]
    y: tuple[str, ...]
    R: tuple[Series, ...]
    g: tuple[Series, ...]


@dataclass
class Document:
    manifolds: dict[str, GenericManifold] = field(default_factory=dict)
    maps: dict[str, FormalMap] = field(default_factory=dict)
    artin: dict[str, ArtinSystem] = field(default_factory=dict)


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple[str, ...]
    name: str | None = None
    order: int | None = None
    kappa_max: int = 6
    gamma_bound: int = 4
    beta_bound: int = 2
    k_max: int = 6
    chain_max: int | None = None
    kappa: int = 1
    family_size: int = 4
    nu_max: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.order is not None and self.order < 4:
            raise ValueError("--order must be at least 4")
        for key in ("kappa_max", "gamma_bound", "beta_bound", "k_max", "kappa",
                    "family_size", "nu_max"):
            if getattr(self, key) < 1:
                raise ValueError(f"--{key.replace('_', '-')} must be at least 1")


# ---------------------------------------------------------------------------
# parsing


@dataclass
class _Section:
    kind: str
    line: int
    entries: dict[str, tuple[str, int, int]] = field(default_factory=dict)

    def get(self, key: str) -> tuple[str, int, int]:
        if key not in self.entries:
            raise ParseError(f"[{self.kind}] section is missing {key!r}", self.line, 1)
        return self.entries[key]

    def integer(self, key: str) -> int:
        text, line, col = self.get(key)
        if not re.fullmatch(r"\d+", text):
            raise ParseError(f"{key} must be a non-negative integer", line, col)
        return int(text)

    def indexed(self, prefix: str) -> list[tuple[str, int, int]]:
        idx = sorted(int(k[len(prefix):]) for k in self.entries
                     if re.fullmatch(re.escape(prefix) + r"\d+", k))
        if idx != list(range(1, len(idx) + 1)):
            raise ParseError(f"{prefix}<j> keys must run 1..n without gaps", self.line, 1)
        return [self.entries[f"{prefix}{j}"] for j in idx]


def _sections(text: str) -> list[_Section]:
    out: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        head = re.fullmatch(r"\s*\[(\w+)\]\s*", body)
        if head:
            kind = head.group(1)
            if kind not in SECTION_KEYS:
                raise ParseError(f"unknown section [{kind}]", lineno, body.index("[") + 1)
            out.append(_Section(kind, lineno))
            continue
        if "=" not in body:
            raise ParseError("expected key = value", lineno, len(body) - len(body.lstrip()) + 1)
        if not out:
            raise ParseError("entry outside any section", lineno, 1)
        key, value = body.split("=", 1)
        key_col = len(key) - len(key.lstrip()) + 1
        key = key.strip()
        sec = out[-1]
        if not SECTION_KEYS[sec.kind].fullmatch(key):
            raise ParseError(f"unknown key {key!r} in [{sec.kind}]", lineno, key_col)
        if key in sec.entries:
            raise ParseError(f"duplicate key {key!r}", lineno, key_col)
        vcol = len(raw.split("=", 1)[0]) + 2 + (len(value) - len(value.lstrip()))
        sec.entries[key] = (value.strip(), lineno, vcol)
    return out


def _poly(entry: tuple[str, int, int], vars: Sequence[str], order: int) -> Series:
    text, line, col = entry
    return parse_poly(text, vars, order, line, col)


def _build_manifold(sec: _Section) -> GenericManifold:
    name = sec.get("name")[0]
    m, d, order = sec.integer("m"), sec.integer("d"), sec.integer("order")
    if m < 1 or d < 1 or order < 2:
        raise ParseError("need m >= 1, d >= 1, order >= 2", sec.line, 1)
    amb = ambient_vars(m, d)
    tb_entries = sec.indexed("theta_bar_")
    g_entries = sec.indexed("graph_")
    if bool(tb_entries) == bool(g_entries):
        raise ParseError("give exactly one of theta_bar_<j> or graph_<j>", sec.line, 1)
    try:
        if tb_entries:
            if len(tb_entries) != d:
                raise ParseError(f"expected {d} theta_bar components", sec.line, 1)
            allowed = amb[:m] + amb[m + d:]
            tb = [_poly(e, allowed, order).embed(amb) for e in tb_entries]
            M = GenericManifold.from_theta_bar(tb, m, d, name)
            re_res, _ = verify_reality(M)
            if not re_res.is_zero():
                raise PreconditionError(f"manifold {name!r} fails the reality condition")
            return M
        if len(g_entries) != d:
            raise ParseError(f"expected {d} graph components", sec.line, 1)
        gv = graph_vars(m, d)
        comps = []
        for j, e in enumerate(g_entries, start=1):
            num = _poly(e, gv, order)
            den_key = f"graph_den_{j}"
            if den_key in sec.entries:
                den = _poly(sec.entries[den_key], gv, order)
                if den.constant_term() == 0:
                    raise PreconditionError(f"graph_den_{j} must be a unit")
                num = num * invert_unit(den)
            comps.append(num)
        return theta_from_graph(comps, m, d, order, name)
    except ParseError:
        raise
    except PreconditionError:
        raise
    except ValueError as exc:
        raise PreconditionError(f"manifold {name!r}: {exc}") from None


def _build_map(sec: _Section, manifolds: dict[str, GenericManifold]) -> FormalMap:
    name = sec.get("name")[0]
    src, tgt = sec.get("source"), sec.get("target")
    for text, line, col in (src, tgt):
        if text not in manifolds:
            raise ParseError(f"undeclared manifold {text!r}", line, col)
    Ms, Mt = manifolds[src[0]], manifolds[tgt[0]]
    order = sec.integer("order") if "order" in sec.entries else min(Ms.order, Mt.order)
    entries = sec.indexed("h_")
    if len(entries) != Mt.n:
        raise ParseError(f"map {name!r} needs {Mt.n} components h_1..h_{Mt.n}", sec.line, 1)
    comps = [_poly(e, Ms.t, order) for e in entries]
    try:
        return FormalMap.from_components(Ms.with_order(order), Mt.with_order(order), comps, name)
    except ValueError as exc:
        raise PreconditionError(f"map {name!r}: {exc}") from None


def _build_artin(sec: _Section) -> ArtinSystem:
    name = sec.get("name")[0]
    order = sec.integer("order")
    w = tuple(sec.get("w")[0].replace(",", " ").split())
    y = tuple(sec.get("y")[0].replace(",", " ").split())
    R = tuple(_poly(e, w + y, order) for e in sec.indexed("r_"))
    g = tuple(_poly(e, w, order) for e in sec.indexed("g_"))
    if len(g) != len(y):
        raise ParseError("need one g_<j> per unknown", sec.line, 1)
    return ArtinSystem(name, order, w, y, R, g)


def parse_input(text: str, into: Document | None = None) -> Document:
    """Parse manifold, map and artin sections; later sections may refer to
    manifolds declared earlier (or already present in ``into``)."""
    doc = Document() if into is None else into
    for sec in _sections(text):
        if sec.kind == "manifold":
            M = _build_manifold(sec)
            doc.manifolds[M.name] = M
        elif sec.kind == "map":
            h = _build_map(sec, doc.manifolds)
            doc.maps[h.name] = h
        else:
            a = _build_artin(sec)
            doc.artin[a.name] = a
    return doc


def corpus_text() -> str:
    return resources.files("segrekit").joinpath("data/corpus.sgk").read_text()


def load_corpus() -> Document:
    return parse_input(corpus_text())


# ---------------------------------------------------------------------------
# serialization


def serialize_manifold(M: GenericManifold) -> str:
    lines = ["[manifold]", f"name = {M.name}", f"m = {M.m}", f"d = {M.d}", f"order = {M.order}"]
    lines += [f"theta_bar_{j} = {c.to_poly()}" for j, c in enumerate(M.theta_bar, start=1)]
    return "\n".join(lines) + "\n"


def serialize_map(h: FormalMap) -> str:
    lines = ["[map]", f"name = {h.name}", f"source = {h.source.name}",
             f"target = {h.target.name}", f"order = {h.order}"]
    lines += [f"h_{j} = {c.to_poly()}" for j, c in enumerate(h.h, start=1)]
    return "\n".join(lines) + "\n"


def serialize_artin(a: ArtinSystem) -> str:
    lines = ["[artin]", f"name = {a.name}", f"order = {a.order}", f"w = {', '.join(a.w)}",
             f"y = {', '.join(a.y)}"]
    lines += [f"r_{j} = {r.to_poly()}" for j, r in enumerate(a.R, start=1)]
    lines += [f"g_{j} = {g.to_poly()}" for j, g in enumerate(a.g, start=1)]
    return "\n".join(lines) + "\n"


def serialize_document(doc: Document) -> str:
    parts = [serialize_manifold(M) for M in doc.manifolds.values()]
    parts += [serialize_map(h) for h in doc.maps.values()]
    parts += [serialize_artin(a) for a in doc.artin.values()]
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# commands


def _fmt_tuple(t) -> str:
    return ",".join(str(x) for x in t)


def _declared(text: str, kind: str) -> list[str]:
    return [sec.get("name")[0] for sec in _sections(text) if sec.kind == kind]


def _pick(config: RunConfig, kind: str):
    """Resolve the object a command acts on: ``--name`` or a positional id
    wins; otherwise the single object of ``kind`` declared in the input files."""
    doc = load_corpus()
    files = [Path(i) for i in config.inputs if Path(i).exists()]
    ids = [i for i in config.inputs if not Path(i).exists()]
    declared: list[str] = []
    for path in files:
        text = path.read_text()
        parse_input(text, doc)
        declared += _declared(text, kind)
    name = config.name or (ids[0] if ids else None)
    table = {"manifold": doc.manifolds, "map": doc.maps, "artin": doc.artin}[kind]
    if name is None:
        if len(declared) != 1:
            raise PreconditionError(f"input declares {len(declared)} {kind} sections; "
                                    "pick one with --name")
        name = declared[0]
    if name not in table:
        raise PreconditionError(f"no {kind} named {name!r}")
    return table[name]


def _with_order(obj, config: RunConfig):
    return obj if config.order is None else obj.with_order(config.order)


def _count(series) -> int:
    return sum(len(s.terms) for s in series)


def cmd_verify_manifold(config: RunConfig) -> tuple[list[str], int]:
    M = _with_order(_pick(config, "manifold"), config)
    r1, r2 = verify_reality(M)
    twice = conjugate_theta(conjugate_theta(M.theta, M.m, M.d), M.m, M.d, inverse=True)
    inv = all(a == b for a, b in zip(twice, M.theta))
    ident = verify_maps_into(identity_map(M))
    out = [f"name={M.name}", f"m={M.m}", f"d={M.d}", f"order={M.order}",
           f"reality_residual={_count(r1) + _count(r2)}",
           f"involution={'ok' if inv else 'failed'}",
           f"normal={'true' if M.normal else 'false'}",
           f"identity_residual={_count(ident)}"]
    ok = _count(r1) + _count(r2) == 0 and inv and _count(ident) == 0
    return out, EXIT_OK if ok else EXIT_PRECONDITION


def cmd_verify_map(config: RunConfig) -> tuple[list[str], int]:
    h = _with_order(_pick(config, "map"), config)
    a = verify_maps_into(h)
    b = verify_maps_into(h, conjugate=True)
    out = [f"name={h.name}", f"source={h.source.name}", f"target={h.target.name}",
           f"order={h.order}", f"maps_into_residual={_count(a)}",
           f"conjugate_residual={_count(b)}"]
    return out, EXIT_OK if _count(a) + _count(b) == 0 else EXIT_PRECONDITION


def cmd_segre_type(config: RunConfig) -> tuple[list[str], int]:
    M = _pick(config, "manifold")
    rep = segre_multitype(M, k_max=config.k_max, order=config.order, seed=config.seed)
    out = [f"name={M.name}", f"order={rep.order_used}"]
    if rep.mu is None:
        out += [f"mu=inconclusive({config.k_max})", "minimal=inconclusive"]
    else:
        out += [f"mu={rep.mu}", f"multitype={_fmt_tuple(rep.multitype)}",
                f"minimal={'true' if rep.minimal else 'false'}"]
    out += [f"rank_{k}={r}" for k, r in enumerate(rep.ranks, start=1)]
    return out, EXIT_OK if rep.mu is not None else EXIT_INCONCLUSIVE


def cmd_minimality(config: RunConfig) -> tuple[list[str], int]:
    M = _with_order(_pick(config, "manifold"), config)
    rep = segre_multitype(M, k_max=config.k_max, seed=config.seed)
    out = [f"name={M.name}", f"order={rep.order_used}"]
    if rep.mu is None:
        return out + [f"minimal=inconclusive({config.k_max})"], EXIT_INCONCLUSIVE
    out += [f"mu={rep.mu}", f"minimal={'true' if rep.minimal else 'false'}",
            f"rank={rep.ranks[rep.mu - 1]}", f"dim={2 * M.m + M.d}"]
    if rep.minimal:
        try:
            wit = minimality_witness(M, seed=config.seed, k_max=config.k_max)
        except ArithmeticError:
            out.append("witness=inconclusive")
        else:
            out += [f"witness={_fmt_tuple(wit.values)}",
                    f"returns_to_origin={'true' if wit.returns_to_origin else 'false'}",
                    f"witness_ranks={wit.rank_t},{wit.rank_tau},"
                    f"{wit.conjugate_rank_t},{wit.conjugate_rank_tau}"]
    return out, EXIT_OK


def _verdict_lines(report) -> list[str]:
    from .classify import implication_audit
    out = [f"order={report.order_used}", f"s_solvable={report.s_solvable}"]
    wit = report.s_solvable.witness
    if report.s_solvable.is_true and wit is not None:
        out.append(f"kappa0={max(sum(g) for g, _ in wit)}")
    out.append(f"s_finite={report.s_finite}")
    out.append(f"s_nondeg={report.s_nondeg}")
    nd = report.s_nondeg.witness
    if report.s_nondeg.is_true and nd:
        out.append("witness=" + ";".join(f"{_fmt_tuple(g)}/{l}" for g, l in nd["rows"]))
        out.append(f"witness_det_leading={nd['leading'].to_poly()}")
    if report.s_nondeg_manifold is not None:
        out.append(f"s_nondeg_manifold={report.s_nondeg_manifold}")
    out.append(f"audit={'ok' if implication_audit(report) else 'failed'}")
    return out


def _classify_exit(report) -> int:
    vs = (report.s_solvable, report.s_finite, report.s_nondeg)
    return EXIT_INCONCLUSIVE if all(v.status == "inconclusive" for v in vs) else EXIT_OK


def cmd_classify_map(config: RunConfig) -> tuple[list[str], int]:
    from .classify import classify_map
    h = _pick(config, "map")
    rep = classify_map(h, config.kappa_max, config.gamma_bound, config.order)
    return [f"name={h.name}"] + _verdict_lines(rep), _classify_exit(rep)


def cmd_classify_manifold(config: RunConfig) -> tuple[list[str], int]:
    from .classify import manifold_classify
    M = _pick(config, "manifold")
    rep = manifold_classify(M, config.kappa_max, config.gamma_bound, config.order)
    return [f"name={M.name}"] + _verdict_lines(rep), _classify_exit(rep)


def cmd_reflect(config: RunConfig) -> tuple[list[str], int]:
    from .reflection import ReflectionSystem, multiindices
    h = _with_order(_pick(config, "map"), config)
    sys_ = ReflectionSystem(h)
    out = [f"name={h.name}", f"order={h.order}"]
    for gamma in multiindices(h.source.m, config.gamma_bound):
        try:
            comps = sys_.R(gamma)
        except ArithmeticError:
            out.append(f"R[{_fmt_tuple(gamma)}]=order-exhausted")
            break
        for j, c in enumerate(comps, start=1):
            lead = c.leading_part().to_poly() if not c.is_zero() else "0"
            out.append(f"R[{_fmt_tuple(gamma)}]_{j}={lead}")
    return out, EXIT_OK


def cmd_check_prop51(config: RunConfig) -> tuple[list[str], int]:
    """Recursion against direct substitution for every ``|beta| <= B``; maps
    between different CR dimensions use the adjoint-matrix variant on the
    leading square selection."""
    from .reflection import (conjugate_reflection_check, delta_conjugate_check, minor_variant,
                             multiindices, theta_beta_direct, theta_beta_recursive)
    h = _with_order(_pick(config, "map"), config)
    m, mp = h.source.m, h.target.m
    square = m == mp
    k = min(m, mp)
    out = [f"name={h.name}", f"order={h.order}", f"mode={'inverse' if square else 'adjugate'}"]
    ok = True
    for beta in multiindices(mp, config.beta_bound, min_len=1):
        if not square and any(beta[k:]):
            continue
        if square:
            d = theta_beta_direct(h, beta)
            r = theta_beta_recursive(h, beta)
            agree = all(a == b for a, b in zip(d, r))
        else:
            agree = minor_variant(h, beta).agree
        c = conjugate_reflection_check(h, beta)
        ok = ok and agree and c.is_zero()
        out.append(f"beta={_fmt_tuple(beta)} agree={'true' if agree else 'false'} "
                   f"conjugate_residual={_count(c)}")
    if square:
        dc = delta_conjugate_check(h)
        out.append(f"delta_conjugate_residual={len(dc.terms)}")
        ok = ok and dc.is_zero()
    out.append(f"all_agree={'true' if ok else 'false'}")
    return out, EXIT_OK


def cmd_propagate(config: RunConfig) -> tuple[list[str], int]:
    from .propagate import (default_fundamental_system, direct_jet_table, nonzero_count,
                            run_pipeline, verify_on_chain)
    h = _with_order(_pick(config, "map"), config)
    chain_max = config.chain_max
    if chain_max is None:
        rep = segre_multitype(h.source, k_max=config.k_max, seed=config.seed)
        chain_max = 2 * rep.mu if rep.mu else 4
    try:
        system = default_fundamental_system(h)
    except ArithmeticError as exc:
        return [f"name={h.name}", f"system=unavailable ({exc})"], EXIT_INCONCLUSIVE
    out = [f"name={h.name}", f"order={system.order}", f"kappa0={system.kappa0}",
           f"system_rows={';'.join(f'{_fmt_tuple(g)}/{l}' for g, l in system.labels)}"]
    for k in range(1, chain_max + 1):
        out.append(f"chain_{k}_residual={nonzero_count(verify_on_chain(system, h, k))}")
    tables = run_pipeline(system, h, min(chain_max, 3), config.kappa)
    for t in tables.values():
        direct = direct_jet_table(h, t.k, config.kappa, t.order)
        out.append(f"table_{t.k}_checksum={t.checksum():016x} "
                   f"entries={len(t.entries)} agrees_direct={'true' if t.agrees_with(direct) else 'false'}")
    return out, EXIT_OK


ROTATIONS = (GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1),
             GaussianRational(0, -1), GaussianRational(Fraction(3, 5), Fraction(4, 5)),
             GaussianRational(Fraction(3, 5), Fraction(-4, 5)))


def cmd_determine(config: RunConfig) -> tuple[list[str], int]:
    """Compose the map with diagonal rotations of the source that preserve it,
    then estimate the jet order that separates the family members."""
    from itertools import product
    from .propagate import determination_experiment
    h = _with_order(_pick(config, "map"), config)
    M = h.source
    N = h.order
    family = [tuple(h.h)]
    for rot in product(ROTATIONS, repeat=M.m):
        if len(family) >= config.family_size:
            break
        subs = {w: Series.var(w, M.t, N).scale(c) for w, c in zip(M.w, rot)}
        subs.update({z: Series.var(z, M.t, N) for z in M.z})
        phi = FormalMap.from_components(M, M, [subs[v] for v in M.t], "rotation")
        if _count(verify_maps_into(phi)):
            continue
        member = tuple(c.compose(subs) for c in h.h)
        if all(any(a != b for a, b in zip(member, f)) for f in family):
            family.append(member)
    out = [f"name={h.name}", f"order={N}", f"family_size={len(family)}"]
    res = determination_experiment(h.name, family, range(0, config.nu_max + 1))
    out.append(f"nu={res.nu if res.nu is not None else f'inconclusive({config.nu_max})'}")
    out.append("evidence=" + ";".join(f"{nu}:{bad}" for nu, bad in res.evidence))
    out.append("empirical=true")
    return out, EXIT_OK if res.nu is not None else EXIT_INCONCLUSIVE


def cmd_artin_check(config: RunConfig) -> tuple[list[str], int]:
    from .propagate import artin_hypothesis_check
    a = _pick(config, "artin")
    res = artin_hypothesis_check(a.R, a.g, a.y, config.order)
    out = [f"name={a.name}", f"holds={'true' if res.holds else 'false'}"]
    if res.holds:
        out += [f"rows={_fmt_tuple(res.rows)}", f"det={res.det.to_poly()}"]
    return out, EXIT_OK


COMMANDS = {
    "verify-manifold": cmd_verify_manifold,
    "verify-map": cmd_verify_map,
    "segre-type": cmd_segre_type,
    "minimality": cmd_minimality,
    "classify-manifold": cmd_classify_manifold,
    "classify-map": cmd_classify_map,
    "reflect": cmd_reflect,
    "check-prop51": cmd_check_prop51,
    "propagate": cmd_propagate,
    "determine": cmd_determine,
    "artin-check": cmd_artin_check,
}


def run_command(config: RunConfig) -> tuple[str, int]:
    lines, code = COMMANDS[config.command](config)
    return "\n".join(lines) + "\n", code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="segrekit",
                                description="Exact Segre-chain and reflection computations.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("inputs", nargs="*",
                   help="object id from the built-in corpus, and/or input files")
    p.add_argument("--name", help="object to use when the input holds several")
    p.add_argument("--order", type=int)
    p.add_argument("--kappa-max", type=int, default=6)
    p.add_argument("--gamma-bound", type=int, default=4)
    p.add_argument("--beta-bound", type=int, default=2)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--chain-max", type=int)
    p.add_argument("--kappa", type=int, default=1)
    p.add_argument("--family-size", type=int, default=4)
    p.add_argument("--nu-max", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dump", action="store_true",
                   help="print the selected object in input syntax and exit")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(args.command, tuple(args.inputs), args.name, args.order,
                           args.kappa_max, args.gamma_bound, args.beta_bound, args.k_max,
                           args.chain_max, args.kappa, args.family_size, args.nu_max, args.seed)
        if args.dump:
            kind = "map" if args.command in ("verify-map", "classify-map", "reflect",
                                             "check-prop51", "propagate", "determine") else "manifold"
            obj = _pick(config, kind)
            text = serialize_map(obj) if kind == "map" else serialize_manifold(obj)
            sys.stdout.write(text)
            return EXIT_OK
        text, code = run_command(config)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (PreconditionError, ValueError) as exc:
        sys.stderr.write(f"precondition: {exc}\n")
        return EXIT_PRECONDITION
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
