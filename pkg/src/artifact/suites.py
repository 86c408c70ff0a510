"""Seeded property suites producing deterministic JSON reports.

Each suite returns ``{"suite", "seed", "count", "cases", "failures"}``.  All
randomness comes from ``random.Random`` objects seeded with a string built
from the suite seed and the instance name, so reports are byte-identical
across runs with the same arguments.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Callable, Optional

from . import bmw as B
from .geometry import direction_classes, gromov_product, hyperbolicity_defect
from .labels import AtomSystem, CosetSystem
from .lambda_values import QQ, ZZ, compare, from_lambda
from .ore import check_ore_axioms
from .products import FactorSystem, ProductSystem, product_ops
from .reduction import fold_oracle, reduce, reduce_with_steps
from .sampling import (
    inadmissible_segment,
    random_segment,
    random_word,
    standard_instances,
    unit_on,
)
from .segments import element, seg_concat, seg_invert, seg_is_admissible, segment_ops
from .words import free_reduce_oracle

SUITES = ("ore-axioms", "group-laws", "median-metric", "reduction", "bmw", "geometry")
MAX_RECORDED_FAILURES = 50


class UnknownSuiteError(KeyError):
    pass


class Recorder:
    """Counts checks and keeps the first few failures."""

    def __init__(self):
        self.cases = 0
        self.failures: list = []
        self.failure_count = 0

    def check(self, instance: str, check: str, ok: bool, detail: Callable[[], str]) -> bool:
        self.cases += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append({"instance": instance, "check": check, "detail": detail()})
        return ok

    def record(self, instance: str, check: str, n: int, details: list) -> None:
        """Add ``n`` checks run elsewhere, of which ``details`` failed."""
        self.cases += n
        for detail in details:
            self.check(instance, check, False, lambda: detail)
            self.cases -= 1


def _rng(seed: int, *parts) -> random.Random:
    return random.Random(":".join([str(seed)] + [str(p) for p in parts]))


# ---------------------------------------------------------------------------
# ore axioms


def suite_ore_axioms(rec: Recorder, seed: int, count: int, **_) -> dict:
    summary = {}
    for name, inst in standard_instances().items():
        rng = _rng(seed, "ore-axioms", name)
        samples = inst.samples(rng, count)
        report = check_ore_axioms(inst.ore, samples, max_pairs=12 * count,
                                  max_triples=4 * count, rng=rng)
        for axiom, n in report.checked.items():
            rec.record(name, axiom, n, report.failures[axiom])
        summary[name] = {"elements": len(samples), "checked": report.checked}
    return summary


# ---------------------------------------------------------------------------
# group laws


def suite_group_laws(rec: Recorder, seed: int, count: int, **_) -> dict:
    for name, inst in standard_instances().items():
        rng = _rng(seed, "group-laws", name)
        ore, fmt = inst.ore, inst.ore.format
        pool = inst.samples(rng, max(50, count // 4), admissible=True)
        idt = ore.identity
        for _ in range(count):
            f, g, h = (rng.choice(pool) for _ in range(3))
            fg = ore.star(f, g)
            rec.check(name, "closure", ore.is_admissible(fg), lambda: f"{fmt(f)} * {fmt(g)}")
            rec.check(name, "associativity",
                      ore.star(fg, h) == ore.star(f, ore.star(g, h)),
                      lambda: f"({fmt(f)} * {fmt(g)}) * {fmt(h)}")
            rec.check(name, "identity", ore.star(f, idt) == f == ore.star(idt, f),
                      lambda: fmt(f))
            f_inv = ore.invert(f)
            rec.check(name, "inverse", ore.star(f, f_inv) == idt == ore.star(f_inv, f),
                      lambda: fmt(f))
            rec.check(name, "inverse-of-product",
                      ore.invert(fg) == ore.star(ore.invert(g), f_inv),
                      lambda: f"{fmt(f)}, {fmt(g)}")
        if name.startswith("word-"):
            gens = sorted({x[0] for w in pool for x in w}) or ["a"]
            for _ in range(count):
                u = free_reduce_oracle(random_word(rng, gens))
                v = free_reduce_oracle(random_word(rng, gens))
                rec.check(name, "free-group-oracle",
                          ore.star(u, v) == free_reduce_oracle(u + v),
                          lambda: f"{fmt(u)} * {fmt(v)}")
    return {}


# ---------------------------------------------------------------------------
# median metric


def suite_median_metric(rec: Recorder, seed: int, count: int, **_) -> dict:
    for name, inst in standard_instances().items():
        rng = _rng(seed, "median-metric", name)
        ore, fmt = inst.ore, inst.ore.format
        pool = inst.samples(rng, max(50, count // 4), admissible=True)
        d = ore.distance
        for _ in range(count):
            a, b, c = (rng.choice(pool) for _ in range(3))
            m = ore.median(a, b, c)
            ok = all(compare(d(x, y), d(x, m) + d(m, y)) == 0
                     for x, y in ((a, b), (b, c), (a, c)))
            rec.check(name, "median-on-geodesics", ok,
                      lambda: f"m({fmt(a)}, {fmt(b)}, {fmt(c)}) = {fmt(m)}")
            g = rng.choice(pool)
            moved = ore.median(ore.star(g, a), ore.star(g, b), ore.star(g, c))
            rec.check(name, "median-equivariance", moved == ore.star(g, m),
                      lambda: f"g={fmt(g)} on {fmt(a)}, {fmt(b)}, {fmt(c)}")
            rec.check(name, "symmetry", compare(d(a, b), d(b, a)) == 0,
                      lambda: f"{fmt(a)}, {fmt(b)}")
            rec.check(name, "triangle", compare(d(a, c), d(a, b) + d(b, c)) <= 0,
                      lambda: f"{fmt(a)}, {fmt(b)}, {fmt(c)}")
    return {}


# ---------------------------------------------------------------------------
# reduction


def reduction_systems() -> dict:
    return {
        "coset-Q/Z": CosetSystem(QQ, [1]),
        "coset-Q/<1/3>": CosetSystem(QQ, [Fraction(1, 3)]),
        "atoms-4": AtomSystem.with_valence(4),
        "tree-Z": CosetSystem(ZZ),
        "single-copy-Z/<1>": CosetSystem(ZZ, [1], primed=False),
    }


def suite_reduction(rec: Recorder, seed: int, count: int, orders: int = 5, **_) -> dict:
    for name, system in reduction_systems().items():
        rng = _rng(seed, "reduction", name)
        ore = segment_ops(system)
        fmt = ore.format
        for _ in range(count):
            f = inadmissible_segment(rng, system)
            red, steps = reduce_with_steps(f)
            rec.check(name, "admissible", seg_is_admissible(red), lambda: fmt(f))
            rec.check(name, "idempotent", reduce(red) == red, lambda: fmt(f))
            excised = sum((s.sigma for s in steps), system.lam.zero)
            rec.check(name, "length-drop",
                      compare(f.length - red.length, excised + excised) == 0, lambda: fmt(f))
            for k in range(orders):
                other = reduce(f, rng=_rng(seed, "order", name, k, fmt(f)))
                rec.check(name, "order-independence", other == red,
                          lambda: f"{fmt(f)}: {fmt(other)} vs {fmt(red)}")
            rec.check(name, "fold-oracle", fold_oracle(f) == red,
                      lambda: f"{fmt(f)}: {fmt(fold_oracle(f))} vs {fmt(red)}")
            g = random_segment(rng, system, 3) if rng.random() < 0.5 else inadmissible_segment(rng, system)
            rec.check(name, "property-F",
                      reduce(seg_concat(f, g)) == ore.star(red, reduce(g)),
                      lambda: f"{fmt(f)} and {fmt(g)}")
            rec.check(name, "property-I", reduce(seg_invert(f)) == ore.invert(red),
                      lambda: fmt(f))
    return {}


# ---------------------------------------------------------------------------
# BMW


def uniqueness_violations() -> list:
    """Five presentations whose square tables are not well defined."""
    texts = [
        # two relators complete the pair (a, x)
        "bmw{A=a,b;X=x,y;R=a x a^- y^-, a x b^- x^-, b x b^- x^-, b y b^- y^-;}",
        # the same relator twice
        "bmw{A=a;X=x,y;R=a x a^- x^-, a x a^- x^-;}",
        # (a, y) is never completed and (a, x) is completed twice
        "bmw{A=a;X=x,y;R=a x a^- x^-, a x a^- y^-;}",
        # two relators end in the same product
        "bmw{A=a,b;X=x;R=a x a^- x^-, b x a^- x^-;}",
        # too few relators for the pairs
        "bmw{A=a,b;X=x,y;R=a x a^- x^-, a y a^- y^-, b x b^- x^-;}",
    ]
    return [B.parse_presentation(t) for t in texts]


ISOMETRY_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 4))


def _check_presentation(rec: Recorder, name: str, p, seed: int, count: int, radius: int) -> None:
    rec.check(name, "valid", B.validate(p).valid, lambda: "; ".join(B.validate(p).problems))
    sa, sx = B.sigma_perms(p)
    for perms in (sa, sx):
        for key, perm in perms.items():
            rec.check(name, "sigma-bijective", sorted(perm.values()) == sorted(perm),
                      lambda: f"sigma_{key} = {perm}")
    b = B.ball(p, radius)
    rec.check(name, "ball-size", len(b.vertices) == B.product_ball_size(p.m, p.n, radius),
              lambda: f"{len(b.vertices)} vertices")
    for v in b.vertices:
        rec.check(name, "bfs-distance", b.distance[v] == v.steps, lambda: str(v))
    b1 = B.ball(p, 1)
    rec.check(name, "degree", b1.degree(B.IDENTITY) == 2 * p.m + 2 * p.n,
              lambda: f"degree {b1.degree(B.IDENTITY)}")
    if p.m > B.MAX_SUBDIVIDED_ALPHABET or p.n > B.MAX_SUBDIVIDED_ALPHABET:
        return
    levels = {n: B.subdivide(p, n) for n in range(1, B.MAX_SUBDIVISION + 1)}
    for n, q in levels.items():
        rec.check(name, f"subdivide-{n}-valid", B.validate(q).valid,
                  lambda: "; ".join(B.validate(q).problems))
    rec.check(name, "subdivide-1-identity", set(levels[1].relators) == set(p.relators),
              lambda: levels[1].text())
    rng = _rng(seed, "bmw", name)
    for n in levels:
        for m in levels:
            if m % n:
                continue
            gm = levels[m]
            for rel in levels[n].relators:
                image = B.embed(rel, n, m)
                rec.check(name, f"homomorphism-{n}-{m}", B.normal_form(gm, image) == B.IDENTITY,
                          lambda: B.format_word(rel))
    for n, m in ISOMETRY_PAIRS:
        gn, gm = levels[n], levels[m]
        pts = B.ball(gn, 2 * gn.edge_length).vertices
        for g in pts:
            for h in pts:
                dn = B.bmw_distance(gn, g.word, h.word)
                dm = B.bmw_distance(gm, B.embed(g.word, n, m), B.embed(h.word, n, m))
                rec.check(name, f"isometry-{n}-{m}", dn == dm, lambda: f"{g} {h}: {dn} vs {dm}")
    for n, gn in levels.items():
        pts = B.ball(gn, 2 * gn.edge_length).vertices
        for _ in range(count):
            g, h = rng.choice(pts), rng.choice(pts)
            ok = B.bmw_distance(gn, B.embed(g.word, n, n), B.embed(h.word, n, n)) == \
                B.bmw_distance(gn, g.word, h.word)
            rec.check(name, f"isometry-{n}-{n}", ok, lambda: f"{g} {h}")
    for k in levels:
        for n in levels:
            for m in levels:
                if n % k or m % n:
                    continue
                for y in levels[k].A + levels[k].X:
                    w = ((y, 1),)
                    rec.check(name, "composition",
                              B.embed(B.embed(w, k, n), n, m) == B.embed(w, k, m),
                              lambda: f"{y} via {k}->{n}->{m}")


def suite_bmw(rec: Recorder, seed: int, count: int, preset: Optional[str] = None,
              presentation=None, radius: int = 5, **_) -> dict:
    if presentation is not None:
        targets = {"custom": presentation}
    elif preset is not None:
        targets = {preset: B.preset(preset)}
    else:
        targets = {k: B.preset(k) for k in B.PRESETS}
    for name, p in targets.items():
        _check_presentation(rec, name, p, seed, count, radius)
    for i, bad in enumerate(uniqueness_violations()):
        rec.check("violations", f"rejected-{i}", not B.validate(bad).valid, lambda: bad.text())
    return {"presentations": sorted(targets)}


# ---------------------------------------------------------------------------
# geometry


def suite_geometry(rec: Recorder, seed: int, count: int, sample_size: int = 32, **_) -> dict:
    instances = standard_instances()
    for name, inst in instances.items():
        rng = _rng(seed, "geometry", name)
        ore, fmt = inst.ore, inst.ore.format
        pts = inst.samples(rng, sample_size, admissible=True)
        if not name.startswith("product"):
            report = hyperbolicity_defect(ore, pts)
            rec.check(name, "zero-hyperbolic", report.certifies_tree,
                      lambda: json.dumps(report.as_dict()))
        for _ in range(count):
            x, y, p = (rng.choice(pts) for _ in range(3))
            rec.check(name, "gromov-symmetry",
                      gromov_product(ore, x, y, p) == gromov_product(ore, y, x, p),
                      lambda: f"{fmt(x)}, {fmt(y)} at {fmt(p)}")
            rec.check(name, "gromov-self", gromov_product(ore, x, x) == from_lambda(ore.length(x)),
                      lambda: fmt(x))
    square = ProductSystem([FactorSystem([1]), FactorSystem([1])])
    sq = product_ops(square)
    u1, u2 = unit_on(square, 0), unit_on(square, 1)
    report = hyperbolicity_defect(sq, [sq.identity, u1, u2, sq.star(u1, u2)])
    rec.check("product-square", "positive-defect", report.witness is not None,
              lambda: json.dumps(report.as_dict()))
    atoms = instances["atoms-4"].ore
    system = AtomSystem.with_valence(4)
    units = [element(system, [(1, x)]) for x in system.all_labels()]
    classes = direction_classes(atoms, units)
    rec.check("atoms-4", "direction-classes", len(classes) == 4, lambda: str(classes))
    return {"square_defect": str(report.defect)}


# ---------------------------------------------------------------------------


_RUNNERS = {
    "ore-axioms": (suite_ore_axioms, 500),
    "group-laws": (suite_group_laws, 1000),
    "median-metric": (suite_median_metric, 1000),
    "reduction": (suite_reduction, 500),
    "bmw": (suite_bmw, 200),
    "geometry": (suite_geometry, 500),
}


def default_count(name: str) -> int:
    return _runner(name)[1]


def _runner(name: str):
    try:
        return _RUNNERS[name]
    except KeyError:
        raise UnknownSuiteError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None


def run_suite(name: str, seed: int = 0, count: Optional[int] = None, **options) -> dict:
    func, default = _runner(name)
    count = default if count is None else count
    rec = Recorder()
    extra = func(rec, seed, count, **options)
    report = {"suite": name, "seed": seed, "count": count, "cases": rec.cases,
              "failure_count": rec.failure_count, "failures": rec.failures}
    if extra:
        report["summary"] = extra
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
