"""Whole-pipeline guarantees.

Each test pins one external promise of the library: the two-orbit report on
the nearly round ellipsoid, exact index tables, agreement between the dual
variational (Galerkin) route and the crossing-count engine, the two-iterate
decomposition, splitting-number limits, action-window bounds, mean-index
pinching, the position-counting identity, and numerical hygiene of the
integrated monodromies.
"""

import math
from fractions import Fraction

import numpy as np

from conftest import (
    ALPHA,
    PERTURBED,
    PERTURBED_N1,
    CorpusEntry,
    bott_path_pool,
    exact_mean_index,
    exact_orbit_index,
    splitting_cases,
)
from symstab import (
    SurfaceSpec,
    action_index_bounds,
    canonical_json,
    constant_form_bounds,
    counting_identity,
    diamond_all,
    enclosing_radii,
    find_orbits,
    floor_ceil_phi,
    index_nu,
    integrate_flow,
    iterate_indices,
    iterate_path,
    mean_index,
    nonhyperbolic_bound,
    normal_form_path,
    spectral_summary,
    splitting_table,
    stabilized_index,
    verify_surface,
)
from symstab.errors import ResonantFormError
from symstab.index import splitting_numbers_numeric


# ---------------------------------------------------------------------------
# nearly round ellipsoid, radii 1 and 1.1
# ---------------------------------------------------------------------------

def test_two_strictly_elliptic_orbits_on_near_round_ellipsoid(e11_report):
    rep = e11_report
    assert rep.gate_passed and rep.theorems_apply
    assert len(rep.orbits) == 2
    assert abs(rep.orbits[0].action - math.pi) <= 1e-6
    assert abs(rep.orbits[1].action - 1.21 * math.pi) <= 1e-6
    for orb in rep.orbits:
        assert orb.floquet.strictly_elliptic
        assert orb.floquet.label == "strictly elliptic"
    checks = {c.name: c for c in rep.checks}
    assert checks["strictly-elliptic-count"].passed
    assert checks["nonhyperbolic-count"].passed
    count = sum(not o.floquet.hyperbolic for o in rep.orbits)
    assert count >= nonhyperbolic_bound(2) == 2
    assert rep.passed


def test_index_table_on_near_round_ellipsoid(e11_report):
    n = 2
    short, long = e11_report.orbits
    assert (short.index_orbit, short.nullity) == (0, 1)
    assert (long.index_orbit, long.nullity) == (2, 1)
    i2, nu2 = short.indices_path[1]
    assert (i2 - n, nu2) == (4, 1)
    j2, mu2 = long.indices_path[1]
    assert (j2 - n) + mu2 == 7 == 4 * n - 1
    assert short.iteration_case_label in ("i", "i+ii")
    assert long.iteration_case_label in ("ii", "i+ii")


# ---------------------------------------------------------------------------
# dual variational route vs crossing engine, ellipsoid corpus
# ---------------------------------------------------------------------------

def test_galerkin_counts_match_crossing_engine(corpus, corpus_tables):
    for entry, tables in zip(corpus, corpus_tables):
        n = entry.spec.n
        G = diamond_all([np.eye(2) * (r * r / 2.0) for r in entry.spec.radii])
        for orb, table in zip(entry.orbits, tables):
            for m, res in enumerate(table, start=1):
                i_m, nu_m = res.as_tuple()
                gi, gn, _K = stabilized_index(G, m * orb.action, n)
                assert (gi, gn) == (i_m - n, nu_m + 1)
                assert i_m - n == exact_orbit_index(
                    entry.spec.radii, orb.plane, m)


# ---------------------------------------------------------------------------
# two-iterate decomposition on the randomized path pool
# ---------------------------------------------------------------------------

def test_second_iterate_splits_at_plus_and_minus_one():
    pool = bott_path_pool()
    assert len(pool) >= 200
    for p in pool:
        r1 = index_nu(p, 1.0)
        rm = index_nu(p, -1.0)
        r2 = index_nu(iterate_path(p, 2), 1.0)
        assert r2.index == r1.index + rm.index, p.label
        assert r2.nullity == r1.nullity + rm.nullity, p.label


# ---------------------------------------------------------------------------
# splitting numbers: table vs one-sided numeric limits
# ---------------------------------------------------------------------------

def test_splitting_tables_match_numeric_limits():
    cases = splitting_cases()
    assert len(cases) == 143    # 43 form/product clusters + 100 conjugations
    for k, (M, w) in enumerate(cases):
        table = splitting_table(spectral_summary(M), w).as_tuple()
        num = splitting_numbers_numeric(normal_form_path(M), w).as_tuple()
        assert table == num, f"case {k} at omega {w:.4f}"


# ---------------------------------------------------------------------------
# action window bounds and the constant-form sandwich
# ---------------------------------------------------------------------------

def test_iterates_respect_action_window_bounds(corpus, perturbed_entries):
    for entry in corpus + perturbed_entries:
        n = entry.spec.n
        r, R = enclosing_radii(entry.spec)
        for orb, path in zip(entry.orbits, entry.paths):
            for m, res in enumerate(iterate_indices(path, 5), start=1):
                i_m, nu_m = res.as_tuple()
                lo, hi = action_index_bounds(m * orb.action, n, r, R)
                assert i_m - n >= lo
                assert i_m - n + nu_m <= hi


def test_constant_form_sandwich_on_random_pairs():
    rng = np.random.default_rng(7)
    done = 0
    while done < 50:
        n = int(rng.integers(1, 4))
        radii = np.sort(rng.uniform(0.8, 1.5, size=n))
        s = float(rng.uniform(1.0, 20.0))
        try:
            lo, hi = constant_form_bounds(s, float(radii[0]),
                                          float(radii[-1]), n)
        except ResonantFormError:
            continue
        G = diamond_all([np.eye(2) * (r * r / 2.0) for r in radii])
        gi, _gn, _K = stabilized_index(G, s, n)
        assert lo <= gi <= hi, (n, s, radii)
        done += 1


# ---------------------------------------------------------------------------
# mean index: closed form on ellipsoids, pinching floor everywhere
# ---------------------------------------------------------------------------

def test_mean_index_closed_form_and_floor(corpus, perturbed_entries):
    for entry in corpus:
        for orb, path in zip(entry.orbits, entry.paths):
            est, bound = mean_index(path, K=1024)
            assert abs(est - exact_mean_index(entry.spec.radii,
                                              orb.plane)) <= 1e-2
            assert est + bound >= 2.0 - 1e-6
    for entry in perturbed_entries:
        for path in entry.paths:
            est, bound = mean_index(path, K=1024)
            assert est + bound >= 2.0 - 1e-6


# ---------------------------------------------------------------------------
# position-counting identity and integer-part helpers
# ---------------------------------------------------------------------------

def test_counting_identity_exact_to_n64():
    for n in range(1, 65):
        lhs, rhs = counting_identity(n)
        assert lhs == rhs == 2 * ((n + 2) // 4)
        assert lhs == n - (3 * (n - 1)) // 4 + (-((1 - n) // 4)) - 1


def test_integer_part_helpers_on_rationals_and_integers():
    table = [
        (Fraction(7, 2), (3, 4, 1)),
        (Fraction(22, 7), (3, 4, 1)),
        (Fraction(-3, 2), (-2, -1, 1)),
        (Fraction(-9, 4), (-3, -2, 1)),
        (4, (4, 4, 0)),
        (0, (0, 0, 0)),
        (-7, (-7, -7, 0)),
    ]
    for a, expect in table:
        assert floor_ceil_phi(a) == expect


# ---------------------------------------------------------------------------
# numerical hygiene: residuals, gauge invariance, reproducible reports
# ---------------------------------------------------------------------------

def _floquet_fingerprint(M):
    """Mean of the trivial pair at 1, plus the remaining multipliers."""
    lam = np.linalg.eigvals(M)
    i0 = np.argsort(np.abs(lam - 1.0))[:2]
    return lam[i0].mean(), np.delete(lam, i0)


def _fingerprints_agree(a, b, tol):
    ta, ra = a
    tb, rb = b
    if abs(ta - tb) > tol:
        return False
    rb = list(rb)
    for z in ra:
        j = int(np.argmin([abs(z - w) for w in rb]))
        if abs(z - rb[j]) > tol:
            return False
        rb.pop(j)
    return True


def test_monodromy_residuals_and_gauge_invariance(corpus):
    surfaces = ([e.spec for e in corpus]
                + [SurfaceSpec(**PERTURBED_N1), SurfaceSpec(**PERTURBED)])
    for spec in surfaces:
        prints = {}
        for alpha in (1.2, 1.5, 1.8):
            for o in find_orbits(spec, alpha):
                res = integrate_flow(spec, alpha, np.asarray(o.x0), o.period)
                assert res.sympl_residual <= 1e-8
                prints.setdefault(o.plane, {})[alpha] = \
                    _floquet_fingerprint(res.W)
        for plane, per in prints.items():
            for alpha in (1.2, 1.8):
                assert _fingerprints_agree(per[1.5], per[alpha], 1e-6), \
                    (spec.radii, plane, alpha)


def test_reports_are_byte_reproducible():
    docs = [canonical_json(
        verify_surface(SurfaceSpec((0.9,)), alpha=ALPHA, m_max=2).to_dict())
        for _ in range(2)]
    assert docs[0] == docs[1]
    assert docs[0].endswith("\n")
