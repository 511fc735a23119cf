"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; any assertion failure marks the criterion failed.
"""

import time
from fractions import Fraction
from pathlib import Path as FsPath

import numpy as np

from hypwalk import (IDENTITY, QGConstants,
                     birth_death_distance_distribution,
                     broken_concat_constants, broken_concat_verify,
                     central_segment_containment_check, free_group,
                     free_product, gromov_product, morse_bound,
                     separation_profile, theorem_constants,
                     transversality_profile)
from hypwalk.experiments import parse_config, run_experiment, write_report

CONFIGS = FsPath(__file__).resolve().parent.parent / "configs"

F2 = free_group(2)
P23 = free_product(2, 3)
E = IDENTITY


def _load(name):
    return parse_config((CONFIGS / name).read_text())


def _line(n, text):
    print(f"\n[criterion {n}] PASS: {text}")


# ---------------------------------------------------------------------------
# 1. exact-geometry suite


def _check_gromov_bounds(model, x, y, z):
    gp = gromov_product(model, x, y, z)
    assert gp >= 0
    assert gp <= min(model.distance(x, z), model.distance(y, z))
    assert (2 * gp).denominator == 1  # half-integral in a graph metric
    return gp


def _check_tree_triangle(x, y, z):
    # delta = 0: the Gromov product equals the distance from z to the
    # side xy, and each side lies inside the union of the other two
    side_xy = F2.geodesic_path(x, y)
    gp = gromov_product(F2, x, y, z)
    assert min(F2.distance(z, v) for v in side_xy.vertices) == gp
    union = set(F2.geodesic_path(x, z).vertices)
    union.update(F2.geodesic_path(y, z).vertices)
    assert set(side_xy.vertices) <= union


def test_criterion_1_exact_geometry_suite():
    t0 = time.monotonic()
    rng = np.random.Generator(np.random.Philox(key=1))

    # Gromov-product bounds: exhaustive with basepoint at the origin (by
    # left-invariance this covers all configurations at these radii)
    ball3 = F2.ball(3)
    for x in ball3:
        for y in ball3:
            _check_gromov_bounds(F2, x, y, E)
    pball = P23.ball(4)
    for x in pball:
        for y in pball:
            _check_gromov_bounds(P23, x, y, E)
    n_random = 10_000
    for i in range(n_random):
        model = F2 if i % 2 else P23
        x = model.random_reduced_word(int(rng.integers(0, 11)), rng)
        y = model.random_reduced_word(int(rng.integers(0, 11)), rng)
        z = model.random_reduced_word(int(rng.integers(0, 5)), rng)
        _check_gromov_bounds(model, x, y, z)

    # thin triangles in the tree (delta = 0), exhaustive + random
    for x in ball3:
        for y in ball3:
            _check_tree_triangle(x, y, E)
    for _ in range(n_random):
        x = F2.random_reduced_word(int(rng.integers(0, 9)), rng)
        y = F2.random_reduced_word(int(rng.integers(0, 9)), rng)
        z = F2.random_reduced_word(int(rng.integers(0, 5)), rng)
        _check_tree_triangle(x, y, z)

    # central-segment containment for geodesics with nearby endpoints
    ball1 = F2.ball(1)
    for s in ball1:
        for x in ball3:
            for y in ball3:
                p1 = F2.geodesic_path(E, x)
                p2 = F2.geodesic_path(s, y)
                assert central_segment_containment_check(F2, p1, p2, 0)
    pball3 = P23.ball(3)
    for s in P23.ball(1):
        for x in pball3:
            for y in pball3:
                p1 = P23.geodesic_path(E, x)
                p2 = P23.geodesic_path(s, y)
                assert central_segment_containment_check(P23, p1, p2,
                                                         P23.delta)
    for _ in range(n_random):
        x = F2.random_reduced_word(int(rng.integers(0, 13)), rng)
        s = F2.random_reduced_word(int(rng.integers(0, 4)), rng)
        t = F2.random_reduced_word(int(rng.integers(0, 4)), rng)
        p1 = F2.geodesic_path(E, x)
        p2 = F2.geodesic_path(s, F2.multiply(x, t))
        assert central_segment_containment_check(F2, p1, p2, 0)

    # broken-concatenation prediction: hypotheses met => predicted constants
    k = QGConstants(1, 0)
    met = 0
    for x in ball3:
        for y in ball3:
            segs = [F2.geodesic_path(E, x),
                    F2.geodesic_path(x, F2.multiply(x, y))]
            out = broken_concat_verify(F2, segs, 0, 0, k)
            if out.hypotheses_met:
                met += 1
                assert out.prediction_holds
            else:
                assert out.prediction_holds is None
    assert met > 1500  # the zero-cancellation pairs; far from vacuous
    met_random = 0
    for _ in range(n_random):
        u = F2.random_reduced_word(int(rng.integers(40, 51)), rng)
        v = F2.random_reduced_word(int(rng.integers(40, 51)), rng)
        segs = [F2.geodesic_path(E, u),
                F2.geodesic_path(u, F2.multiply(u, v))]
        out = broken_concat_verify(F2, segs, 0, 3, k)
        if out.hypotheses_met:
            met_random += 1
            assert out.prediction_holds
    assert met_random > 9000

    elapsed = time.monotonic() - t0
    assert elapsed < 60
    _line(1, f"0 violations (exhaustive + 4x{n_random} random), "
             f"{elapsed:.1f}s < 60s")


# ---------------------------------------------------------------------------
# 2. constant formulas


def test_criterion_2_constant_formulas():
    m = morse_bound(0, QGConstants(2, 3))
    assert m == 1104 and isinstance(m, Fraction)
    assert m == 92 * 4 * (3 + 0)

    bc = broken_concat_constants(0, QGConstants(1, 0), 0)
    assert bc.c1 == 1 and isinstance(bc.c1, Fraction)

    c = theorem_constants(100, Fraction(1, 10), Fraction(1, 20),
                          Fraction(1, 2), 0)
    assert (c.c_prime, c.M, c.C0, c.C1, c.c_final) == \
        (62, 22816, 91269, 1095291, 1152331)
    assert all(isinstance(v, Fraction)
               for v in (c.c_prime, c.M, c.C0, c.C1, c.c_final))
    _line(2, "morse_bound(0,(2,3))=1104, c1=1, frozen chain at n=100 exact")


# ---------------------------------------------------------------------------
# 3. drift


def test_criterion_3_drift():
    config = _load("drift-free2.toml")
    t0 = time.monotonic()
    report = run_experiment(config, threads=4)
    elapsed = time.monotonic() - t0
    assert report.complete
    assert report.drift_constant == {"value": "1/2", "source": "oracle"}
    row, = report.aggregates
    assert row["trials"] == 2000 and row["n"] == 2000
    assert abs(row["estimate"] - 0.5) <= 0.02
    assert row["tail_fraction"] < 0.01
    assert elapsed < 30

    # the sampled tail agrees with the exact chain law
    dist = birth_death_distance_distribution(2, 2000)
    exact_tail = float(dist[:900].sum() + dist[1101:].sum())
    assert exact_tail < 0.01
    _line(3, f"mean d/n={row['estimate']:.4f} (|err|<=0.02), "
             f"tail {row['tail_fraction']:.4f}<0.01 "
             f"(exact {exact_tail:.6f}), {elapsed:.1f}s < 30s")


# ---------------------------------------------------------------------------
# 4. freeness certificate rates


def test_criterion_4_freeness():
    report = run_experiment(_load("freeness-free2.toml"), threads=4)
    assert report.complete
    rows = report.aggregates
    assert [r["n"] for r in rows] == [10, 30, 100]
    rates = [r["estimate"] for r in rows]
    assert all(r["trials"] == 500 for r in rows)
    assert rates == sorted(rates)
    assert rates[-1] >= 0.99
    assert all(r["soundness_violations"] == 0 for r in rows)
    assert rows[0]["relations_found"] > 0  # soundness check is non-vacuous
    _line(4, f"certificate rates {[f'{r:.3f}' for r in rates]} "
             f"non-decreasing, final >= 0.99, 0 soundness exceptions")


# ---------------------------------------------------------------------------
# 5. quasi-geodesic mixed words


def test_criterion_5_qg_words():
    report = run_experiment(_load("qg-words-free2.toml"), threads=4)
    assert report.complete
    row, = report.aggregates
    assert row["n"] == 100 and row["trials"] == 200
    assert row["word_count"] == 796070
    assert row["qg_violations"] == 0
    assert row["nontriviality_violations"] == 0
    _line(5, f"200 trials x {row['word_count']} words: all pass "
             f"(8, c_final), 0 nontriviality violations "
             f"(certificate rate {row['estimate']:.3f})")


# ---------------------------------------------------------------------------
# 6. matching decay


def test_criterion_6_matching_decay():
    report = run_experiment(_load("matching-decay-free2.toml"), threads=4)
    assert report.complete
    rows = report.aggregates
    assert [r["n"] for r in rows] == [20, 40, 80]
    est = [r["estimate"] for r in rows]
    assert est[0] > est[1] > est[2]
    assert rows[0]["ci_lo"] > rows[2]["ci_hi"]  # Wilson intervals disjoint
    _line(6, f"match rates {[f'{e:.4f}' for e in est]} strictly "
             f"decreasing; Wilson n=20 [{rows[0]['ci_lo']:.4f},"
             f"{rows[0]['ci_hi']:.4f}] disjoint from n=80 "
             f"[{rows[2]['ci_lo']:.4f},{rows[2]['ci_hi']:.4f}]")


# ---------------------------------------------------------------------------
# 7. transversality / separation profiles


def test_criterion_7_profiles():
    f = F2.parse_word("b^1")
    h = [F2.parse_word("a^1")]
    candidates = F2.ball(8)
    diam = {}
    for K in (0, 1, 2):
        prof = transversality_profile(F2, f, h, K, candidates, (-8, 8), 12)
        diam[K] = prof.max_diameter
        assert prof.max_diameter <= 2 * K + 2
        assert len(prof.records) == len(candidates)
    sep = {}
    for kappa in (0, 1):
        prof = separation_profile(F2, h, kappa, candidates, 12)
        sep[kappa] = prof.max_diameter
        assert prof.max_diameter <= 2
    _line(7, f"transversality max-diam {diam} within 2K+2 over "
             f"{len(candidates)} candidates; separation {sep} <= 2")


# ---------------------------------------------------------------------------
# 8. loxodromic products


def test_criterion_8_lox_products():
    report = run_experiment(_load("lox-products-free2.toml"), threads=4)
    assert report.complete
    row, = report.aggregates
    assert row["trials"] == 100
    assert row["successes"] == 100
    assert row["estimate"] == 1.0
    _line(8, "100/100 independent rank-2 pairs give loxodromic products")


# ---------------------------------------------------------------------------
# 9. reproducibility across worker counts


def test_criterion_9_reproducibility(tmp_path):
    for name in ("lox-products-free2.toml", "drift-free2.toml"):
        config = _load(name)
        blobs = {}
        for threads in (1, 4, 8):
            out = tmp_path / f"{name}-{threads}"
            report = run_experiment(config, threads=threads)
            write_report(report, out)
            blobs[threads] = ((out / "records.jsonl").read_bytes(),
                              (out / "summary.csv").read_bytes())
        assert blobs[1] == blobs[4] == blobs[8]
    _line(9, "byte-identical records.jsonl and summary.csv under "
             "1/4/8 workers (drift and lox-products configs)")
