"""Index and nullity of symplectic paths at unit-circle parameters.

The pair (i_omega, nu_omega) is computed by crossing counting.  A path
gamma starting at the identity is extended backwards through a
hyperbolic sleeve (which carries no crossings), then the count is

    i = [half signature of the start form, only at omega = 1]
      + sum over interior crossings of the signature of the crossing form
      + endpoint resolution by a rotational twist.

The crossing form at time t on ker(P(t) - omega) is the restriction of
the symmetric coefficient S(t) = J^{-1} P' P^{-1}.  Both one-sided twists
gamma(t) exp(+-eps t J / tau) are counted; the lower one is the index
(lower semicontinuous convention) and their difference must equal the
endpoint nullity, which is asserted on every call.  Degenerate crossing
forms trigger an eps ladder; persistent degeneracy raises TangencyError.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import gcd

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    BottViolationError,
    DimensionError,
    IndexUnstableError,
    NumericalConsistencyError,
    SplittingUnstableError,
    TangencyError,
)
from .paths import SymplecticPath, iterate_path, twisted_path
from .spectral import SplittingPair
from .sympl import sympl_dim

__all__ = [
    "IndexOptions",
    "IndexResult",
    "D_omega",
    "index_nu",
    "iterate_indices",
    "mean_index",
    "splitting_numbers_numeric",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class IndexOptions:
    grid: int = 256
    eps: float = 1e-4
    eps_ladder: int = 7
    rank_tol: float = 1e-6
    accept_tol: float = 1e-6
    trigger: float = 0.05
    refine_rtol: float = 1e-12
    form_tol: float = 1e-7
    strict: bool = True
    check_start: bool = True


@dataclass(frozen=True)
class IndexResult:
    index: int
    nullity: int
    omega: complex
    crossings: tuple
    eps: float

    def as_tuple(self) -> tuple[int, int]:
        return (self.index, self.nullity)


class _Degenerate(Exception):
    pass


class _RetryEps(Exception):
    pass


def _normalize_omega(omega) -> complex:
    w = complex(omega)
    r = abs(w)
    if abs(r - 1.0) > 1e-6:
        raise DimensionError(f"omega must lie on the unit circle, got {omega}")
    return w / r


def D_omega(M: np.ndarray, omega) -> float:
    """(-1)^(n-1) conj(omega)^n det(M - omega I), real for symplectic M."""
    M = np.asarray(M, dtype=float)
    n = sympl_dim(M)
    w = _normalize_omega(omega)
    ev = np.linalg.eigvals(M)
    raw = np.prod(ev - w) * (-1.0) ** (n - 1) * np.conj(w) ** n
    scale = float(np.prod(np.maximum(np.abs(ev - w), 1e-3)))
    if abs(raw.imag) > 1e-5 * max(scale, 1e-12):
        raise NumericalConsistencyError(
            f"D_omega imaginary residual {raw.imag:.2e} at omega={omega}")
    return float(raw.real)


def _kernel_basis(M: np.ndarray, omega: complex, rank_tol: float):
    dim = M.shape[0]
    K = M - omega * np.eye(dim)
    _, s, Vh = np.linalg.svd(K)
    thr = rank_tol * max(1.0, float(s[0]))
    k = int(np.sum(s <= thr))
    if k == 0:
        return 0, None
    return k, Vh.conj().T[:, dim - k:]


def _signature(F: np.ndarray, form_tol: float) -> int:
    F = 0.5 * (F + F.conj().T)
    vals = np.linalg.eigvalsh(F)
    thr = form_tol * max(1.0, float(np.abs(vals).max()))
    if np.any(np.abs(vals) < thr):
        raise _Degenerate(f"crossing form eigenvalues {vals}")
    return int(np.sum(vals > 0) - np.sum(vals < 0))


def _grid(path: SymplecticPath, N: int) -> np.ndarray:
    tau = path.tau
    ts = set(np.linspace(0.0, tau, N + 1))
    geo = tau * np.power(2.0, -np.arange(4, 44, dtype=float))
    ts.update(geo)
    ts.update(tau - geo)
    ts.update(path.seams)
    arr = np.array(sorted(ts))
    return arr[(arr >= 0.0) & (arr <= tau)]


def _count_once(path: SymplecticPath, omega: complex, sign: int, eps: float,
                opts: IndexOptions, N: int):
    tau = path.tau
    tw = twisted_path(path, eps, sign)
    ts = _grid(tw, N)
    P = tw.values(ts)
    ev = np.linalg.eigvals(P)
    dist = np.abs(ev - omega).min(axis=1)

    n = path.n
    pref = (-1.0) ** (n - 1) * np.conj(omega) ** n
    Draw = pref * np.prod(ev - omega, axis=1)
    if np.abs(Draw.imag).max() > 1e-6 * max(np.abs(Draw).max(), 1e-12):
        raise NumericalConsistencyError(
            "determinant function not real; input path may not be symplectic")
    D = Draw.real

    if dist[-1] < 3.0 * opts.accept_tol:
        raise _RetryEps(f"twisted endpoint still degenerate (eps={eps:.1e})")

    def value_at(t):
        return tw.value(t)

    def dist_at(t):
        return float(np.abs(np.linalg.eigvals(value_at(t)) - omega).min())

    def d_at(t):
        return float((pref * np.prod(np.linalg.eigvals(value_at(t)) - omega)).real)

    atol = opts.refine_rtol * tau
    t_floor = 1e-9 * tau
    at_one = abs(omega - 1.0) < 1e-12

    def vals_on(xs):
        evs = np.linalg.eigvals(tw.values(np.asarray(xs)))
        diff = evs - omega
        return (pref * diff.prod(axis=-1)).real, np.abs(diff).min(axis=-1)

    def bisect(a, b, fa):
        try:
            return float(brentq(d_at, a, b, xtol=atol, rtol=1e-14))
        except ValueError:
            # scalar evaluation can flip a borderline endpoint sign seen by
            # the batched sampler; plain bisection against the sampled sign
            # still converges
            while b - a > atol:
                mid = 0.5 * (a + b)
                fm = d_at(mid)
                if fm == 0.0:
                    return mid
                if fa * fm < 0:
                    b = mid
                else:
                    a, fa = mid, fm
            return 0.5 * (a + b)

    # hierarchical scan: cells with a sign change of D are subdivided until
    # nearby crossings separate, then resolved by bisection; cells where the
    # eigenvalue distance dips below the trigger with no sign change are
    # merged into maximal runs, and each run is refined around its sampled
    # local minima (one bounded minimization per minimum, not per cell)
    bis_roots: list[float] = []
    dip_roots: list[float] = []
    max_depth = 3

    def scan(xs, Dv, depth):
        m = len(xs)
        for i in range(m - 1):
            a, b = float(xs[i]), float(xs[i + 1])
            fa, fb = float(Dv[i]), float(Dv[i + 1])
            if fa == 0.0:
                # exact zero at a sample point; t=0 (omega=1 junction) excluded
                if a > 0.0:
                    bis_roots.append(a)
                continue
            if fa * fb < 0.0:
                if depth >= max_depth or b - a <= 64.0 * atol:
                    bis_roots.append(bisect(a, b, fa))
                else:
                    sub = np.linspace(a, b, 17)
                    sD, _ = vals_on(sub)
                    scan(sub, sD, depth + 1)

    def refine_dip(a, b, depth):
        sub = np.linspace(a, b, 33)
        sD, sd = vals_on(sub)
        for i in range(32):
            if sD[i] == 0.0:
                if sub[i] > 0.0:
                    bis_roots.append(float(sub[i]))
            elif sD[i] * sD[i + 1] < 0.0:
                # finer sampling split an even cluster into odd crossings
                bis_roots.append(bisect(float(sub[i]), float(sub[i + 1]),
                                        float(sD[i])))
        # a region can hold several events, e.g. an even pair next to an odd
        # root in the same cell; minima refining onto a bisected root are
        # dropped later by the dedup guard
        for j in range(33):
            if sd[j] >= opts.trigger:
                continue
            if (j > 0 and sd[j] > sd[j - 1]) or (j < 32 and sd[j] > sd[j + 1]):
                continue
            lo, hi = float(sub[max(j - 1, 0)]), float(sub[min(j + 1, 32)])
            if depth < max_depth and hi - lo > 64.0 * atol:
                refine_dip(lo, hi, depth + 1)
            else:
                res = minimize_scalar(dist_at, bounds=(lo, hi), method="bounded",
                                      options={"xatol": max(atol, 1e-13 * tau)})
                if res.fun < opts.accept_tol:
                    dip_roots.append(float(res.x))

    scan(ts, D, 0)
    low = np.minimum(dist[:-1], dist[1:]) < opts.trigger
    ncell = len(ts) - 1
    i = 0
    while i < ncell:
        if not low[i]:
            i += 1
            continue
        j = i
        while j + 1 < ncell and low[j + 1]:
            j += 1
        refine_dip(float(ts[i]), float(ts[j + 1]), 0)
        i = j + 1

    # the same root can be located twice (bisection from two adjacent cells
    # under sign noise, or a dip refining onto a sign-change root); genuine
    # distinct crossings closer than these radii would be indistinguishable
    # to the form evaluation anyway
    merge_bis = max(100.0 * atol, 1e-7 * tau)
    dip_guard = max(200.0 * atol, 1e-6 * tau)
    crossings: list[float] = []
    for t in sorted(bis_roots):
        if crossings and t - crossings[-1] < merge_bis:
            continue
        crossings.append(t)
    for t in sorted(dip_roots):
        if crossings and min(abs(t - r) for r in crossings) < dip_guard:
            continue
        crossings.append(t)
    crossings = [t for t in sorted(crossings)
                 if t_floor <= t <= tau * (1.0 - 1e-13)]

    total = 0
    counted = []
    seam_atol = 1e-9 * tau
    for t in crossings:
        M = value_at(t)
        k, B = _kernel_basis(M, omega, opts.rank_tol)
        if k == 0:
            continue  # refinement artifact, not an actual crossing
        near = [s for s in tw.seams if abs(s - t) < seam_atol]
        if near:
            s = near[0]
            f1 = _signature(B.conj().T @ tw.sform(s, -1) @ B, opts.form_tol)
            f2 = _signature(B.conj().T @ tw.sform(s, 1) @ B, opts.form_tol)
            if (f1 + f2) % 2:
                raise NumericalConsistencyError(
                    f"odd corner signature pair ({f1},{f2}) at t={s:.6g}")
            total += (f1 + f2) // 2
        else:
            total += _signature(B.conj().T @ tw.sform(t, 1) @ B, opts.form_tol)
        counted.append(t)

    if at_one:
        sig0 = _signature(tw.sform(0.0, 1), opts.form_tol)
        if sig0 % 2:
            raise NumericalConsistencyError("odd start-form signature")
        total += sig0 // 2

    return total, tuple(counted)


def _count_total(path, omega, sign, eps, opts, verify_grid):
    N = max(opts.grid, path.grid_hint)
    t1, c1 = _count_once(path, omega, sign, eps, opts, N)
    if not (verify_grid and opts.strict):
        return t1, c1
    t2, c2 = _count_once(path, omega, sign, eps, opts, 2 * N)
    if t2 == t1:
        return t2, c2
    t4, c4 = _count_once(path, omega, sign, eps, opts, 4 * N)
    if t4 == t2:
        return t4, c4
    raise IndexUnstableError(
        f"crossing count kept changing under grid refinement at omega={omega:.6g} "
        f"({t1}, {t2}, {t4})")


def index_nu(path: SymplecticPath, omega=1.0, opts: IndexOptions | None = None,
             ) -> IndexResult:
    """Index and nullity of the path at the given unit-circle parameter."""
    opts = opts or IndexOptions()
    if opts.check_start:
        path.check_start()
    w = _normalize_omega(omega)
    nu, _ = _kernel_basis(path.endpoint, w, opts.rank_tol)

    eps = opts.eps
    last = "no attempt"
    for _ in range(opts.eps_ladder):
        try:
            i_minus, cr = _count_total(path, w, -1, eps, opts, verify_grid=True)
            i_plus, _ = _count_total(path, w, 1, eps, opts, verify_grid=False)
        except (_Degenerate, _RetryEps) as e:
            last = str(e)
            eps *= 0.5
            continue
        if i_plus - i_minus != nu:
            last = (f"one-sided counts {i_minus}/{i_plus} inconsistent with "
                    f"nullity {nu} at eps={eps:.1e}")
            eps *= 0.5
            continue
        return IndexResult(index=i_minus, nullity=nu, omega=w,
                           crossings=cr, eps=eps)
    raise TangencyError(
        f"tangency unresolved at omega={w:.6g} after twist ladder: {last}")


# ---------------------------------------------------------------------------
# iteration
# ---------------------------------------------------------------------------

def _reduced(k: int, m: int) -> tuple[int, int]:
    if k == 0:
        return (0, 1)
    g = gcd(k, m)
    return (k // g, m // g)


def _root_table(m_max: int):
    """Reduced fractions k/m needed for all iterate counts up to m_max."""
    seen = {}
    for m in range(1, m_max + 1):
        for k in range(m):
            seen.setdefault(_reduced(k, m), None)
    return list(seen)


def iterate_indices(path: SymplecticPath, m_max: int,
                    opts: IndexOptions | None = None,
                    cross_check: int = 0) -> list[IndexResult]:
    """(i, nu) of the m-fold iterates, m = 1..m_max, via the root sum

        i(gamma, m) = sum over omega^m = 1 of i_omega(gamma),

    using conjugate symmetry i_conj(omega) = i_omega.  For m <= cross_check
    the result is recomputed by direct counting on the iterated path and a
    mismatch raises BottViolationError.
    """
    opts = opts or IndexOptions()
    per_root: dict[tuple[int, int], IndexResult] = {}
    for (k, m) in _root_table(m_max):
        conj = _reduced((m - k) % m, m)
        if conj in per_root:
            r = per_root[conj]
            per_root[(k, m)] = IndexResult(r.index, r.nullity,
                                           np.conj(r.omega), r.crossings, r.eps)
            continue
        w = np.exp(2j * np.pi * k / m) if k else 1.0 + 0.0j
        per_root[(k, m)] = index_nu(path, w, opts)

    out = []
    for m in range(1, m_max + 1):
        i_m = nu_m = 0
        for k in range(m):
            r = per_root[_reduced(k, m)]
            i_m += r.index
            nu_m += r.nullity
        out.append(IndexResult(index=i_m, nullity=nu_m,
                               omega=1.0 + 0.0j, crossings=(), eps=0.0))
        if m <= cross_check and m > 1:
            direct = index_nu(iterate_path(path, m), 1.0, opts)
            if direct.as_tuple() != (i_m, nu_m):
                raise BottViolationError(
                    f"iterate m={m}: root sum gives (i, nu) = ({i_m}, {nu_m}) "
                    f"but direct counting gives {direct.as_tuple()}")
    return out


def mean_index(path: SymplecticPath, K: int = 1024,
               opts: IndexOptions | None = None) -> tuple[float, float]:
    """K-th discrete average of the index, with an a priori error bound.

    Returns (i(gamma, K) / K, bound) where the first entry differs from
    the true mean index by at most 2n/K; the reported bound is 4n/K.
    The average is the index of the K-th iterate divided by K, evaluated
    as the sum over K-th roots of unity.  Conjugate roots share an index,
    so only the closed upper half circle is visited.  Counting the iterate
    path directly would be no faster: periodic orbit paths return to a
    parabolic in-plane block at every seam, and those tangential touches
    defeat the small-twist perturbation.
    """
    opts = opts or IndexOptions()
    half = replace(opts, strict=False)
    total = index_nu(path, 1.0, half).index
    if K % 2 == 0:
        total += index_nu(path, -1.0, half).index
    for k in range(1, (K + 1) // 2):
        w = np.exp(2j * np.pi * k / K)
        total += 2 * index_nu(path, w, half).index
    return total / K, 4.0 * path.n / K


def splitting_numbers_numeric(path: SymplecticPath, omega,
                              opts: IndexOptions | None = None,
                              deltas=(0.08, 0.04, 0.02, 0.01),
                              ) -> SplittingPair:
    """Splitting numbers at omega by one-sided index limits.

    S+-(omega) = lim as delta -> 0+ of i at omega e^{+-i delta} minus
    i at omega; each limit must stabilize over two consecutive deltas.
    The index is exactly constant between adjacent endpoint eigenvalue
    angles, so the probes stay at moderate offsets: pushing delta toward
    zero only drives the endpoint into the near-degenerate regime where
    crossing detection needs ever tighter tolerances.
    """
    opts = opts or IndexOptions()
    w = _normalize_omega(omega)
    i0 = index_nu(path, w, opts).index
    out = {}
    for sgn in (1, -1):
        prev = None
        got = None
        for d in deltas:
            cur = index_nu(path, w * np.exp(1j * sgn * d), opts).index - i0
            if prev is not None and cur == prev:
                got = cur
                break
            prev = cur
        if got is None:
            raise SplittingUnstableError(
                f"one-sided limit at omega={w:.6g}, side {sgn:+d} did not settle")
        out[sgn] = got
    return SplittingPair(out[1], out[-1])
