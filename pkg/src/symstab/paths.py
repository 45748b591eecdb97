"""Symplectic paths and the algebra used to build them.

A path is a piecewise-smooth map gamma: [0, tau] -> Sp(2n).  Besides
values, the index machinery needs the symmetric coefficient

    S(t) = J^{-1} dgamma/dt gamma(t)^{-1},

i.e. the Hamiltonian matrix of the linear system the path solves.  Every
constructor here provides S in closed form where possible; the generic
fallback is finite differences with a symmetry check.

Paths carry a list of interior seam times where they may only be C^0;
S(t, side) takes one-sided limits there.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, NumericalConsistencyError, SymplecticityError
from .sympl import diamond_all, expJ, rotation2, standard_J, sympl_dim

__all__ = [
    "SymplecticPath",
    "exp_path",
    "rotation_path",
    "shear_path",
    "lower_shear_path",
    "xi_path",
    "normal_form_path",
    "product_path",
    "concat_path",
    "iterate_path",
    "conjugate_path",
    "diamond_paths",
    "twisted_path",
    "path_from_samples",
]


class SymplecticPath:
    """Piecewise-smooth symplectic path on [0, tau].

    value_fn(t) returns the 2n x 2n matrix; values_fn, if given, accepts a
    1-d array of times and returns a stacked (m, 2n, 2n) array.  sform_fn,
    if given, returns the symmetric coefficient S(t) with a side argument
    (+1 right limit, -1 left limit) honoured at seams.
    """

    def __init__(self, n, tau, value_fn, sform_fn=None, values_fn=None,
                 seams=(), grid_hint=96, label=""):
        if tau <= 0:
            raise DimensionError(f"path needs tau > 0, got {tau}")
        self.n = int(n)
        self.tau = float(tau)
        self._value = value_fn
        self._values = values_fn
        self._sform = sform_fn
        self.seams = tuple(sorted(s for s in seams if 0.0 < s < self.tau))
        self.grid_hint = int(grid_hint)
        self.label = label
        self._J = standard_J(self.n)
        self._endpoint = None

    # -- evaluation ---------------------------------------------------------

    def value(self, t: float) -> np.ndarray:
        return self._value(float(t))

    __call__ = value

    def values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if self._values is not None:
            return self._values(ts)
        return np.stack([self._value(float(t)) for t in ts])

    @property
    def endpoint(self) -> np.ndarray:
        if self._endpoint is None:
            self._endpoint = self.value(self.tau)
        return self._endpoint

    def sform(self, t: float, side: int = 1) -> np.ndarray:
        """S(t) = J^{-1} P' P^{-1}, symmetrized, with one-sided limits."""
        if self._sform is not None:
            S = self._sform(float(t), int(side))
        else:
            S = self._fd_sform(float(t), int(side))
        Ssym = 0.5 * (S + S.T)
        asym = np.abs(S - Ssym).max()
        if asym > 1e-3 * (1.0 + np.abs(Ssym).max()):
            raise NumericalConsistencyError(
                f"{self.label or 'path'}: coefficient at t={t:.6g} is not "
                f"symmetric (residual {asym:.2e}); path may not be symplectic")
        return Ssym

    def _fd_sform(self, t: float, side: int) -> np.ndarray:
        h = 1e-6 * self.tau
        barriers = [0.0, *self.seams, self.tau]
        lo = max(b for b in barriers if b <= t + 1e-15 * self.tau)
        hi = min(b for b in barriers if b >= t - 1e-15 * self.tau)
        if hi - t < 2.5 * h and t - lo < 2.5 * h:
            h = max((hi - lo) / 6.0, 1e-12 * self.tau)
        if side >= 0 and hi - t >= 2.5 * h:
            if t - lo >= h and hi - t >= h and abs(t - lo) > 1e-15 and abs(hi - t) > 1e-15:
                Pd = (self.value(t + h) - self.value(t - h)) / (2 * h)
            else:
                Pd = (-3 * self.value(t) + 4 * self.value(t + h)
                      - self.value(t + 2 * h)) / (2 * h)
        else:
            Pd = (3 * self.value(t) - 4 * self.value(t - h)
                  + self.value(t - 2 * h)) / (2 * h)
        P = self.value(t)
        return -self._J @ Pd @ np.linalg.inv(P)

    # -- convenience --------------------------------------------------------

    def check_start(self, tol: float = 1e-9) -> None:
        r = np.abs(self.value(0.0) - np.eye(2 * self.n)).max()
        if r > tol:
            raise SymplecticityError(f"path must start at the identity, "
                                     f"residual {r:.2e}")

    def __repr__(self):
        lbl = f" {self.label!r}" if self.label else ""
        return (f"<SymplecticPath{lbl} n={self.n} tau={self.tau:.6g} "
                f"seams={len(self.seams)}>")


# ---------------------------------------------------------------------------
# elementary constructors
# ---------------------------------------------------------------------------

def exp_path(S_sym: np.ndarray, tau: float = 1.0, label="") -> SymplecticPath:
    """Path exp(t J S) of the constant linear system x' = J S x."""
    S_sym = np.asarray(S_sym, dtype=float)
    n = sympl_dim(S_sym)
    J = standard_J(n)
    S_sym = 0.5 * (S_sym + S_sym.T)
    L = J @ S_sym

    evals, V = np.linalg.eig(L)
    use_eig = np.linalg.cond(V) < 1e6
    if use_eig:
        Vinv = np.linalg.inv(V)
        # defective generators make the eigenbasis useless long before the
        # condition number looks alarming; check the reconstruction itself
        use_eig = np.abs((V @ Vinv).real - np.eye(2 * n)).max() < 1e-12
    if use_eig:

        def value(t):
            return (V * np.exp(t * evals)) @ Vinv

        def values(ts):
            E = np.exp(np.multiply.outer(ts, evals))      # (m, 2n)
            return np.einsum("ij,tj,jk->tik", V, E, Vinv).real

        def value_r(t):
            return value(t).real
    else:
        def value_r(t):
            return expm(t * L)

        values = None

    def sform(t, side):
        return S_sym

    hint = 96 + int(16 * min(np.linalg.norm(L, 2) * tau, 400))
    return SymplecticPath(n, tau, value_r, sform_fn=sform, values_fn=values,
                          grid_hint=hint, label=label or "exp")


def rotation_path(theta: float, tau: float = 1.0) -> SymplecticPath:
    """R(theta t / tau) in one plane."""
    rate = theta / tau

    def value(t):
        return rotation2(rate * t)

    def values(ts):
        c, s = np.cos(rate * ts), np.sin(rate * ts)
        out = np.empty((len(ts), 2, 2))
        out[:, 0, 0] = c
        out[:, 0, 1] = -s
        out[:, 1, 0] = s
        out[:, 1, 1] = c
        return out

    S = rate * np.eye(2)
    return SymplecticPath(1, tau, value, sform_fn=lambda t, side: S,
                          values_fn=values,
                          grid_hint=96 + int(16 * abs(theta)),
                          label=f"rotation({theta:.4g})")


def shear_path(b: float, tau: float = 1.0) -> SymplecticPath:
    """[[1, b t/tau], [0, 1]], the straight upper shear."""
    beta = b / tau

    def value(t):
        return np.array([[1.0, beta * t], [0.0, 1.0]])

    S = np.array([[0.0, 0.0], [0.0, -beta]])
    return SymplecticPath(1, tau, value, sform_fn=lambda t, side: S,
                          label=f"shear({b:.4g})")


def lower_shear_path(b: float, tau: float = 1.0) -> SymplecticPath:
    """[[1, 0], [b t/tau, 1]], the straight lower shear."""
    beta = b / tau

    def value(t):
        return np.array([[1.0, 0.0], [beta * t, 1.0]])

    S = np.array([[beta, 0.0], [0.0, 0.0]])
    return SymplecticPath(1, tau, value, sform_fn=lambda t, side: S,
                          label=f"lshear({b:.4g})")


def xi_path(n: int, tau: float = 1.0) -> SymplecticPath:
    """Hyperbolic sleeve from diag(2, 1/2) per plane down to the identity.

    a(t) = 2 - t/tau stays > 1 before the final instant, so the path
    carries no unit-circle eigenvalues in its interior for any omega.
    """

    def value(t):
        a = 2.0 - t / tau
        return np.diag([a] * n + [1.0 / a] * n)

    def values(ts):
        a = 2.0 - np.asarray(ts) / tau
        d = np.concatenate([np.repeat(a[:, None], n, 1),
                            np.repeat((1.0 / a)[:, None], n, 1)], axis=1)
        out = np.zeros((len(ts), 2 * n, 2 * n))
        idx = np.arange(2 * n)
        out[:, idx, idx] = d
        return out

    def sform(t, side):
        a = 2.0 - t / tau
        u = -1.0 / (tau * a)
        S = np.zeros((2 * n, 2 * n))
        for j in range(n):
            S[j, n + j] = -u
            S[n + j, j] = -u
        return S

    return SymplecticPath(n, tau, value, sform_fn=sform, values_fn=values,
                          grid_hint=64, label="xi")


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------

def product_path(p1: SymplecticPath, p2: SymplecticPath,
                 label="") -> SymplecticPath:
    """Pointwise product t -> p1(t) p2(t) on a common interval."""
    if p1.n != p2.n or abs(p1.tau - p2.tau) > 1e-12 * max(p1.tau, p2.tau):
        raise DimensionError("product needs equal dimension and tau")
    n, tau = p1.n, p1.tau

    def value(t):
        return p1.value(t) @ p2.value(t)

    def values(ts):
        return p1.values(ts) @ p2.values(ts)

    def sform(t, side):
        A = p1.value(t)
        Ait = np.linalg.inv(A).T
        return p1.sform(t, side) + Ait @ p2.sform(t, side) @ Ait.T

    return SymplecticPath(n, tau, value, sform_fn=sform, values_fn=values,
                          seams=sorted(set(p1.seams) | set(p2.seams)),
                          grid_hint=max(p1.grid_hint, p2.grid_hint),
                          label=label or f"{p1.label}*{p2.label}")


def concat_path(p1: SymplecticPath, p2: SymplecticPath,
                label="") -> SymplecticPath:
    """Traverse p1 on [0, tau1], then p2 (shifted to start at p1's end)."""
    if p1.n != p2.n:
        raise DimensionError("concatenation needs equal dimension")
    n, t1 = p1.n, p1.tau
    tau = t1 + p2.tau
    M1 = p1.endpoint

    def value(t):
        if t <= t1:
            return p1.value(t)
        return p2.value(t - t1) @ M1

    def values(ts):
        ts = np.asarray(ts, dtype=float)
        left = ts <= t1
        out = np.empty((len(ts), 2 * n, 2 * n))
        if left.any():
            out[left] = p1.values(ts[left])
        if (~left).any():
            out[~left] = p2.values(ts[~left] - t1) @ M1
        return out

    def sform(t, side):
        if t < t1 or (t == t1 and side < 0):
            return p1.sform(t, side)
        return p2.sform(t - t1, side)

    seams = sorted(set(p1.seams) | {t1} | {t1 + s for s in p2.seams})
    return SymplecticPath(n, tau, value, sform_fn=sform, values_fn=values,
                          seams=seams,
                          grid_hint=p1.grid_hint + p2.grid_hint,
                          label=label or f"{p1.label};{p2.label}")


def iterate_path(p: SymplecticPath, m: int) -> SymplecticPath:
    """m-fold iteration: gamma(t - j tau) gamma(tau)^j on [0, m tau]."""
    if m < 1:
        raise DimensionError(f"iterate needs m >= 1, got {m}")
    if m == 1:
        return p
    n, tau = p.n, p.tau
    M = p.endpoint
    powers = [np.eye(2 * n)]
    for _ in range(m):
        powers.append(M @ powers[-1])

    def split(t):
        j = int(np.floor(t / tau + 1e-13))
        j = min(max(j, 0), m - 1)
        return t - j * tau, j

    def value(t):
        s, j = split(t)
        return p.value(s) @ powers[j]

    def values(ts):
        ts = np.asarray(ts, dtype=float)
        js = np.clip(np.floor(ts / tau + 1e-13).astype(int), 0, m - 1)
        out = np.empty((len(ts), 2 * n, 2 * n))
        for j in range(m):
            sel = js == j
            if sel.any():
                out[sel] = p.values(ts[sel] - j * tau) @ powers[j]
        return out

    def sform(t, side):
        s, j = split(t)
        if s <= 1e-13 * tau and side < 0 and j > 0:
            return p.sform(tau, -1)
        if tau - s <= 1e-13 * tau and side > 0 and j < m - 1:
            return p.sform(0.0, 1)
        return p.sform(s, side)

    seams = sorted({j * tau for j in range(1, m)}
                   | {j * tau + s for j in range(m) for s in p.seams})
    return SymplecticPath(n, m * tau, value, sform_fn=sform,
                          values_fn=values, seams=seams,
                          grid_hint=m * p.grid_hint,
                          label=f"{p.label}^^{m}")


def conjugate_path(p: SymplecticPath, C: np.ndarray) -> SymplecticPath:
    """t -> C gamma(t) C^{-1} for a fixed symplectic C."""
    C = np.asarray(C, dtype=float)
    if sympl_dim(C) != p.n:
        raise DimensionError("conjugator dimension mismatch")
    Cinv = np.linalg.inv(C)
    Cit = Cinv.T

    def value(t):
        return C @ p.value(t) @ Cinv

    def values(ts):
        return C @ p.values(ts) @ Cinv

    def sform(t, side):
        return Cit @ p.sform(t, side) @ Cit.T

    return SymplecticPath(p.n, p.tau, value, sform_fn=sform,
                          values_fn=values, seams=p.seams,
                          grid_hint=p.grid_hint, label=f"conj({p.label})")


def diamond_paths(paths) -> SymplecticPath:
    """Plane-interleaved direct sum of paths on a common interval."""
    paths = list(paths)
    tau = paths[0].tau
    for q in paths:
        if abs(q.tau - tau) > 1e-12 * tau:
            raise DimensionError("direct sum needs a common tau")
    n = sum(q.n for q in paths)

    def value(t):
        return diamond_all([q.value(t) for q in paths])

    def values(ts):
        ts = np.asarray(ts, dtype=float)
        parts = [q.values(ts) for q in paths]
        out = np.zeros((len(ts), 2 * n, 2 * n))
        off = 0
        for q, blk in zip(paths, parts):
            xs = np.r_[off:off + q.n, n + off:n + off + q.n]
            out[np.ix_(np.arange(len(ts)), xs, xs)] = blk
            off += q.n
        return out

    def sform(t, side):
        return diamond_all([q.sform(t, side) for q in paths])

    seams = sorted(set().union(*(q.seams for q in paths)))
    return SymplecticPath(n, tau, value, sform_fn=sform, values_fn=values,
                          seams=seams,
                          grid_hint=max(q.grid_hint for q in paths),
                          label="(" + "|".join(q.label for q in paths) + ")")


def twisted_path(p: SymplecticPath, eps: float, sign: int) -> SymplecticPath:
    """gamma(t) exp(sign eps (t/tau) J), the rotational regularization.

    The coefficient gains sign*(eps/tau) (J gamma)(J gamma)^T, a definite
    term, which makes endpoint and frozen-arc degeneracies transversal.
    """
    n, tau = p.n, p.tau
    J = standard_J(n)
    rate = sign * eps / tau

    def value(t):
        return p.value(t) @ expJ(rate * t, n)

    def values(ts):
        ts = np.asarray(ts, dtype=float)
        base = p.values(ts)
        c, s = np.cos(rate * ts), np.sin(rate * ts)
        tw = c[:, None, None] * np.eye(2 * n) + s[:, None, None] * J
        return base @ tw

    def sform(t, side):
        G = J @ p.value(t)
        return p.sform(t, side) + rate * (G @ G.T)

    return SymplecticPath(n, tau, value, sform_fn=sform, values_fn=values,
                          seams=p.seams, grid_hint=p.grid_hint,
                          label=f"{p.label}~tw({sign * eps:.1e})")


# ---------------------------------------------------------------------------
# paths from matrices and samples
# ---------------------------------------------------------------------------

_ROT_CANDIDATES = tuple(np.linspace(0.0, np.pi, 25))


def normal_form_path(M: np.ndarray, tau: float = 1.0) -> SymplecticPath:
    """A smooth symplectic path from I to M.

    Uses the principal logarithm when the spectrum avoids the negative
    reals; otherwise prepends a rigid rotation factor exp(theta J) chosen
    so that exp(-theta J) M has a safe spectrum, and takes the logarithm
    of the remainder.
    """
    M = np.asarray(M, dtype=float)
    n = sympl_dim(M)
    J = standard_J(n)

    def margin(A):
        ev = np.linalg.eigvals(A)
        # distance of eigenvalue arguments from pi, guarding tiny moduli
        return float(np.min(np.abs(np.abs(np.angle(ev)) - np.pi)))

    best = None
    for th in _ROT_CANDIDATES:
        A = expJ(-th, n) @ M
        mg = margin(A)
        if best is None or mg > best[0]:
            best = (mg, th, A)
    mg, theta, A = best
    if mg < 1e-4:
        raise NumericalConsistencyError(
            "could not rotate the spectrum away from the branch cut")

    from scipy.linalg import logm
    L = logm(A)
    L = np.real(L)
    # project the generator onto the Hamiltonian algebra and verify
    S0 = 0.5 * ((-J @ L) + (-J @ L).T)
    L = J @ S0
    resid = np.abs(expJ(theta, n) @ expm(L) - M).max()
    if resid > 1e-8 * (1.0 + np.abs(M).max()):
        raise NumericalConsistencyError(
            f"logarithm reconstruction residual {resid:.2e}")

    core = exp_path(S0, tau=tau, label="log")
    if theta == 0.0:
        return core
    # exp(t (theta/tau) J) solves x' = J S x with S = (theta/tau) I
    rot = exp_path((theta / tau) * np.eye(2 * n), tau=tau, label="rotfac")
    return product_path(rot, core, label=f"nf({theta:.3g})")


def path_from_samples(ts, mats, label="samples") -> SymplecticPath:
    """Cubic-spline interpolation through sampled matrices.

    The first sample must sit at t = 0 and equal the identity.  The
    coefficient S comes from the spline derivative; accuracy is limited
    by the sampling density.
    """
    from scipy.interpolate import CubicSpline
    ts = np.asarray(ts, dtype=float)
    mats = np.asarray(mats, dtype=float)
    if ts.ndim != 1 or len(ts) != mats.shape[0] or len(ts) < 4:
        raise DimensionError("need >= 4 samples of matching length")
    if abs(ts[0]) > 1e-12 or not np.all(np.diff(ts) > 0):
        raise DimensionError("sample times must start at 0 and increase")
    n = sympl_dim(mats[0])
    if np.abs(mats[0] - np.eye(2 * n)).max() > 1e-9:
        raise SymplecticityError("first sample must be the identity")
    spl = CubicSpline(ts, mats, axis=0)
    dspl = spl.derivative()
    J = standard_J(n)

    def value(t):
        return spl(t)

    def values(tt):
        return spl(np.asarray(tt, dtype=float))

    def sform(t, side):
        P = spl(t)
        return -J @ dspl(t) @ np.linalg.inv(P)

    return SymplecticPath(n, float(ts[-1]), value, sform_fn=sform,
                          values_fn=values,
                          grid_hint=max(96, 2 * len(ts)), label=label)
