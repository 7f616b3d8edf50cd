"""Acceptance criteria, one test per criterion, each printing a pass/fail line."""

import random
import subprocess
import sys
from pathlib import Path

from koszulfh.bar import (BarComplex, CobarComplex, bar, bar_bimodule, cobar, completeness_map,
                          interchange_check, koszul_dual, roundtrip_check)
from koszulfh.chain import (ChainComplex, GradedSpace, betti_table, convolve, tensor,
                            validate)
from koszulfh.dg import (DGModule, enveloping, exterior, free_module, ideal_module, opposite,
                         regular_comodule, regular_module, square_zero, tensor_algebra,
                         trivial_coaction, trivial_comodule, trivial_module, truncated_polynomial,
                         truncated_tensor, unit_algebra, unit_coalgebra, validate_algebra,
                         validate_bicomodule_action, validate_coalgebra, validate_comodule,
                         validate_module)
from koszulfh.field import GF, QQ
from koszulfh.interval import (GluingDiagram, IntervalAlgebra, compact_support,
                               global_value, glued_complex, poincare_check)
from koszulfh.lie import (abelian, ce_complex, ce_filtration_ok, heisenberg, lie_cone,
                          lie_excision_check, monoidality_check, validate_lie)
from koszulfh.linalg import SparseMatrix

import oracles

ROOT = Path(__file__).resolve().parent.parent


def catalog(field=QQ):
    return [exterior(["x"], [1], field),
            exterior(["x", "y"], [1, 1], field),
            truncated_polynomial("x", 2, 3, field),
            square_zero([("x", 1), ("y", 1)], field=field),
            truncated_tensor(["x", "y"], [1, 2], 2, field)]


def from_dense(dims, mats, field):
    basis = {n: [f"e{n}_{i}" for i in range(k)] for n, k in dims.items()}
    diff = {n: SparseMatrix.from_dense(m, field) for n, m in mats.items()}
    return ChainComplex(GradedSpace(basis), diff, field)


# 1


def test_criterion_01_axiom_suite(criterion):
    with criterion(1, "axiom suite on builders and constructions", 30) as c:
        failures = []

        def check(name, rep):
            if not rep.ok:
                failures.append((name, rep.failures[:2]))

        algebras = catalog() + [unit_algebra(), truncated_polynomial("x", 0, 3),
                                truncated_tensor(["x", "y"], [1, 2], 2, GF(32003))]
        for a in algebras:
            check(a.name, validate_algebra(a))
            check(f"op {a.name}", validate_algebra(opposite(a)))
        for a in catalog()[:3]:
            check(f"env {a.name}", validate_algebra(enveloping(a)))
        check("tensor", validate_algebra(tensor_algebra(catalog()[0], catalog()[2])))
        for a in catalog():
            for side in ("left", "right", "bimodule"):
                check(f"regular {side}", validate_module(regular_module(a, side)))
            for side in ("left", "right"):
                check(f"trivial {side}", validate_module(trivial_module(a, side)))
                check(f"ideal {side}", validate_module(ideal_module(a, side)))
            check("free", validate_module(free_module(a, [0, 2]), 6))
            bb = bar_bimodule(a)
            check("bar bimodule", validate_module(bb, 5))
            check("bar bimodule coaction", validate_comodule(bb.coaction, 5))
            check("bar bimodule compatibility", validate_bicomodule_action(bb, 5))
            # Koszul dual coalgebra and its comodules
            dual = koszul_dual(a)
            check(f"dual {a.name}", validate_coalgebra(dual, 6))
            for side in ("left", "right"):
                check("trivial comodule", validate_comodule(trivial_comodule(dual, side), 6))
                check("regular comodule", validate_comodule(regular_comodule(dual, side), 6))
            # bar, cobar and cotensor complexes
            k, l = trivial_module(a, "right"), trivial_module(a, "left")
            check("bar", validate(bar(k, a, l).complex(0, 7)))
            check("bar regular", validate(bar(regular_module(a, "right"), a, l).complex(0, 7)))
            r = regular_module(a, "bimodule")
            check("bar three", validate(BarComplex([k, r, l], a).complex(0, 6)))
            om = cobar(dual)
            check(f"cobar {a.name}", validate_algebra(om, 4))
            check("cobar complex", validate(om.complex(om.lo, 6)))
            cot = CobarComplex([trivial_comodule(dual, "right"), trivial_comodule(dual, "left")],
                               dual)
            check("cotensor", validate(cot.complex(cot.lo, 6)))
            for manifold, cuts in [("interval", 2), ("circle", 2)]:
                g = glued_complex(GluingDiagram.evenly(manifold, cuts, a))
                check(f"glued {manifold}", validate(g.complex(0, 6)))
        check("unit coalgebra", validate_coalgebra(unit_coalgebra()))
        # Lie builders and Chevalley--Eilenberg complexes
        lies = [abelian(1), abelian(2), abelian(3), abelian(2, 1), heisenberg(),
                lie_cone(heisenberg())]
        for g in lies:
            check(f"lie {g.name}", validate_lie(g))
            ce = ce_complex(g, 4)
            check(f"ce {g.name}", validate(ce.total))
            if not ce_filtration_ok(ce):
                failures.append((f"ce filtration {g.name}", []))
        c.ok = not failures
        c.note = f"{len(failures)} failures" if failures else ""
        assert not failures, failures


# 2


def test_criterion_02_oracle_equivalence(criterion):
    with criterion(2, "sparse homology equals dense elimination on 200 complexes", 60) as c:
        rng = random.Random(2024)
        bad = 0
        for i in range(200):
            p = None if i % 2 == 0 else 32003
            field = QQ if p is None else GF(p)
            dims, mats, h = oracles.random_complex(rng, (0, 5), max_dim=20, p=p)
            assert max(dims.values()) <= 20
            cx = from_dense(dims, mats, field)
            if not (validate(cx).ok and betti_table(cx, 0, 5) == oracles.betti(dims, mats, p) == h):
                bad += 1
        c.ok = bad == 0
        c.note = f"{bad} mismatches" if bad else "100 over Q, 100 over GF(32003)"


# 3


def test_criterion_03_roundtrip(criterion):
    for a in catalog():
        with criterion(3, f"roundtrip H(cobar(A^!)) = H(A) for {a.name}, 0..8", 120) as c:
            v = roundtrip_check(a, 0, 8)
            c.ok = v.ok


# 4


def test_criterion_04_completeness(criterion):
    with criterion(4, "completeness map for K in {A, 1, ideal}, 0..6") as c:
        passed = 0
        for a in catalog():
            for make in (regular_module, trivial_module, ideal_module):
                _, v = completeness_map(make(a, "right"), a, 0, 6)
                passed += bool(v.ok and v.details["chain_map"])
        c.ok = passed == 15
        c.note = f"{passed}/15"


# 5


def interchange_configurations():
    a = exterior(["x"], [1])
    one_c = unit_coalgebra()
    yield "c = 1", (trivial_module(a, "right"), a,
                    trivial_coaction(regular_module(a, "left"), one_c), one_c,
                    trivial_comodule(one_c, "left"))
    one = unit_algebra()
    C = koszul_dual(exterior(["x", "y"], [1, 1]))
    L = DGModule(C, one, "left", left=lambda u, m: {m: 1}, coaction=regular_comodule(C, "right"))
    yield "a = 1", (trivial_module(one, "right"), one, L, C, trivial_comodule(C, "left"))
    L = bar_bimodule(a)
    yield "bar bimodule", (trivial_module(a, "right"), a, L, L.dual,
                           trivial_comodule(L.dual, "left"))
    rng = random.Random(5)
    for i in range(5):
        A = rng.choice(catalog())
        Lb = bar_bimodule(A)
        K = rng.choice([trivial_module, regular_module, ideal_module])(A, "right")
        X = rng.choice([trivial_comodule, regular_comodule])(Lb.dual, "left")
        yield f"random {i} ({A.name})", (K, A, Lb, Lb.dual, X)


def test_criterion_05_interchange(criterion):
    with criterion(5, "interchange on 3 configurations plus 5 random, 0..5") as c:
        results = {name: interchange_check(*args, 0, 5).ok
                   for name, args in interchange_configurations()}
        c.ok = len(results) == 8 and all(results.values())
        c.note = ", ".join(n for n, ok in results.items() if not ok)


# 6


def test_criterion_06_excision(criterion):
    with criterion(6, "excision: interval 0/1/2 cuts, circle 1/2 cuts, 10 trials, 0..6") as c:
        rng = random.Random(6)
        bad = []
        for a in catalog():
            for coeff in (a, IntervalAlgebra.compact(a)):
                values = set()
                for _ in range(10):
                    for cuts in (0, 1, 2):
                        g = GluingDiagram.random("interval", cuts, coeff, rng)
                        values.add(tuple(global_value(g, 0, 6).items()))
                if len(values) != 1:
                    bad.append(f"interval {a.name}")
            values = set()
            for _ in range(10):
                for cuts in (1, 2):
                    g = GluingDiagram.random("circle", cuts, a, rng)
                    values.add(tuple(global_value(g, 0, 6).items()))
            if len(values) != 1:
                bad.append(f"circle {a.name}")
        c.ok = not bad
        c.note = ", ".join(bad)


# 7


def test_criterion_07_poincare(criterion):
    with criterion(7, "Poincare duality kernel on the catalog, 0..5") as c:
        results = {a.name: poincare_check(a, None, 0, 5).ok for a in catalog()}
        c.ok = all(results.values())
        c.note = ", ".join(n for n, ok in results.items() if not ok)


# 8


def test_criterion_08_compact_support_monoidality(criterion):
    with criterion(8, "compact support on k <= 3 components is the k-fold convolution, 0..6") as c:
        bad = []
        for a in catalog():
            one = compact_support(a, ["interval"], 0, 6).betti
            power = {0: 1}
            for k in (1, 2, 3):
                power = convolve(power, one)
                comps = [(f"s{i}", f"t{i}") for i in range(k)]
                got = compact_support(a, comps, 0, 6).betti
                if got != {n: power.get(n, 0) for n in range(7)}:
                    bad.append(f"{a.name} k={k}")
        c.ok = not bad
        c.note = ", ".join(bad)


# 9


def test_criterion_09_ce_monoidality(criterion):
    with criterion(9, "CE layer maps are bijections and quasi-isos, 16 pairs, r <= 4") as c:
        lies = [abelian(1), abelian(2), abelian(3), heisenberg()]
        bad = []
        for g in lies:
            for h in lies:
                v = monoidality_check(g, h, 4, 0, 8)
                bij = all(layer["bijective"] for layer in v.details["layers"].values())
                if not (v.ok and bij and v.details["chain_map"]):
                    bad.append((g.name, h.name))
        c.ok = not bad
        c.note = f"{16 - len(bad)}/16"


# 10


def test_criterion_10_lie_excision(criterion):
    with criterion(10, "Lie excision on the interval, layers <= 3, 0..4") as c:
        results = {g.name: lie_excision_check(g, "interval", 3, 0, 4).ok
                   for g in [abelian(1), abelian(2), heisenberg()]}
        c.ok = all(results.values())
        c.note = ", ".join(n for n, ok in results.items() if not ok)


# 11


def test_criterion_11_kunneth_euler(criterion):
    with criterion(11, "Kunneth and Euler characteristic on 500 instances each") as c:
        rng = random.Random(11)
        kunneth = euler = 0
        for i in range(500):
            p = None if i % 2 == 0 else 32003
            field = QQ if p is None else GF(p)
            a = from_dense(*oracles.random_complex(rng, (0, 3), max_dim=6, p=p)[:2], field)
            b = from_dense(*oracles.random_complex(rng, (-1, 2), max_dim=6, p=p)[:2], field)
            ba, bb = betti_table(a, 0, 3), betti_table(b, -1, 2)
            want = convolve(ba, bb)
            got = betti_table(tensor(a, b), -1, 5)
            kunneth += got == {n: want.get(n, 0) for n in range(-1, 6)}
            chi = sum((-1) ** n * a.dim(n) for n in a.degrees)
            euler += chi == sum((-1) ** n * x for n, x in ba.items())
        c.ok = kunneth == 500 and euler == 500
        c.note = f"Kunneth {kunneth}/500, Euler {euler}/500"


# 12


def test_criterion_12_determinism(criterion, tmp_path):
    with criterion(12, "two CLI runs of the full suite give byte-identical reports") as c:
        job = ROOT / "demos" / "jobs" / "full_suite.json"
        outs = []
        for i in range(2):
            report = tmp_path / f"report{i}.json"
            proc = subprocess.run([sys.executable, "-m", "koszulfh", "--job", str(job),
                                   "--emit", "json", "--report", str(report)],
                                  capture_output=True)
            assert proc.returncode == 0, proc.stderr
            outs.append((proc.stdout, report.read_bytes()))
        c.ok = outs[0] == outs[1] and outs[0][1] == outs[0][0]
