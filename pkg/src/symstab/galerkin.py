"""Finite-mode reduction of the dual action form at a closed characteristic.

The second variation of the dual (Clarke) action functional, restricted to
zero-mean loops of period s, block-diagonalizes over trigonometric modes.
With G(t) the inverse Hessian of the quadratically rescaled Hamiltonian
along the orbit, the mode-k block in suitably rescaled coordinates is

    [[ G, J/w_k ], [ -J/w_k, G ]],      w_k = 2 pi k / s,

plus Fourier coupling between modes when G depends on t.  The Morse index
of this form equals the path index minus n, and its nullity equals the
path nullity plus one.  Conjugating G by a constant rotation relabels the
mode basis and leaves index and nullity unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GalerkinError, ResonantFormError
from .sympl import standard_J

TWO_PI = 2.0 * np.pi


def mode_frequencies(s: float, K: int) -> np.ndarray:
    if s <= 0:
        raise GalerkinError(f"period must be positive, got {s}")
    if K < 1:
        raise GalerkinError(f"need at least one mode, got K={K}")
    return TWO_PI * np.arange(1, K + 1) / s


@dataclass(frozen=True)
class DualForm:
    """Assembled quadratic form; either per-mode blocks or one dense matrix."""

    s: float
    n: int
    K: int
    blocks: np.ndarray | None = None   # (K, 4n, 4n) when modes decouple
    dense: np.ndarray | None = None    # (4nK, 4nK) otherwise

    def eigenvalues(self) -> np.ndarray:
        if self.blocks is not None:
            return np.sort(np.linalg.eigvalsh(self.blocks).ravel())
        return np.linalg.eigvalsh(self.dense)


def _per_mode_blocks(G0: np.ndarray, s: float, K: int) -> np.ndarray:
    d = G0.shape[0]
    J = standard_J(d // 2)
    w = mode_frequencies(s, K)
    blocks = np.zeros((K, 2 * d, 2 * d))
    blocks[:, :d, :d] = G0
    blocks[:, d:, d:] = G0
    blocks[:, :d, d:] = J / w[:, None, None]
    blocks[:, d:, :d] = -J / w[:, None, None]
    return blocks


def assemble_dual_form(G, s: float, n: int, K: int, samples: int | None = None,
                       ) -> DualForm:
    """Build the K-mode quadratic form for inverse-Hessian loop G.

    G may be a constant (2n, 2n) symmetric matrix or a callable t -> matrix
    on [0, s).  The callable case assembles the dense matrix through FFT
    coefficients of G; `samples` overrides the sampling resolution.
    """
    d = 2 * n
    if not callable(G):
        G0 = np.asarray(G, float)
        if G0.shape != (d, d):
            raise GalerkinError(f"G has shape {G0.shape}, expected {(d, d)}")
        return DualForm(s=s, n=n, K=K, blocks=_per_mode_blocks(G0, s, K))

    Nt = samples or max(512, 1 << int(np.ceil(np.log2(8 * K + 8))))
    ts = np.arange(Nt) * (s / Nt)
    Gs = np.stack([np.asarray(G(t), float) for t in ts])
    if Gs.shape != (Nt, d, d):
        raise GalerkinError(f"G(t) returned shape {Gs.shape[1:]}, expected {(d, d)}")
    Ghat = np.fft.fft(Gs, axis=0) / Nt   # Ghat[m] ~ (1/s) int G e^{-i w_m t}

    def coef(m: int) -> np.ndarray:
        return Ghat[m % Nt]

    J = standard_J(n)
    w = mode_frequencies(s, K)
    M = np.zeros((2 * d * K, 2 * d * K))

    def put(bi: int, bj: int, val: np.ndarray) -> None:
        M[bi * d:(bi + 1) * d, bj * d:(bj + 1) * d] = val

    # layout: blocks 0..K-1 hold the -sin coefficients, K..2K-1 the cos ones
    for i in range(K):
        k = i + 1
        for j in range(i, K):
            kp = j + 1
            diff, tot = coef(k - kp), coef(k + kp)
            ss = diff.real - tot.real           # (-sin_k, -sin_kp) pairing
            cc = diff.real + tot.real           # (cos_k, cos_kp) pairing
            sc = tot.imag + diff.imag           # (-sin_k, cos_kp) pairing
            put(i, j, ss)
            put(K + i, K + j, cc)
            put(i, K + j, sc)
            if j != i:
                put(j, i, ss.T)
                put(K + j, K + i, cc.T)
                cs = coef(kp + k).imag + coef(kp - k).imag
                put(j, K + i, cs)
                put(K + i, j, cs.T)
                put(K + j, i, sc.T)
        put(i, K + i, M[i * d:(i + 1) * d, (K + i) * d:(K + i + 1) * d] + J / w[i])
        put(K + i, i, M[i * d:(i + 1) * d, (K + i) * d:(K + i + 1) * d].T)

    M = 0.5 * (M + M.T)
    return DualForm(s=s, n=n, K=K, dense=M)


def morse_index_nullity(form: DualForm | np.ndarray, zero_tol: float = 1e-7,
                        ) -> tuple[int, int]:
    """Count negative and near-zero eigenvalues of the assembled form."""
    vals = form.eigenvalues() if isinstance(form, DualForm) else np.asarray(form)
    thr = zero_tol * max(1.0, float(np.abs(vals).max()))
    null = int(np.sum(np.abs(vals) <= thr))
    neg = int(np.sum(vals < -thr))
    return neg, null


def stabilized_index(G, s: float, n: int, K0: int | None = None,
                     max_doublings: int = 6, zero_tol: float = 1e-7,
                     ) -> tuple[int, int, int]:
    """Morse index and nullity, with K doubled until both counts repeat.

    Returns (index, nullity, K) for the first stable mode count.
    """
    K = K0 or max(8, int(np.ceil(2.0 * s)))
    prev = None
    for _ in range(max_doublings + 1):
        form = assemble_dual_form(G, s, n, K)
        cur = morse_index_nullity(form, zero_tol)
        if prev is not None and cur == prev:
            return cur[0], cur[1], K
        prev = cur
        K *= 2
    raise GalerkinError(
        f"index did not stabilize up to K={K // 2} (last counts {prev})")


def constant_form_index(s: float, rho: float, n: int, rel_tol: float = 1e-9,
                        ) -> int:
    """Closed-form Morse index of the dual form on a round level set.

    With G = (rho^2/2) I, mode k is negative exactly when k < s / (pi rho^2);
    the index is 2n times that count.  An integer ratio means a resonant,
    degenerate form and is rejected.
    """
    ratio = s / (np.pi * rho * rho)
    nearest = round(ratio)
    if nearest >= 1 and abs(ratio - nearest) <= rel_tol * max(1.0, ratio):
        raise ResonantFormError(
            f"period s={s:.6g} resonates with the rho={rho:.6g} level set")
    return 2 * n * int(np.floor(ratio))


def constant_form_bounds(s: float, r: float, R: float, n: int,
                         ) -> tuple[int, int]:
    """Index bounds from enclosing radii r <= |x| <= R on the level set.

    Domination of inverse Hessians gives i(R-ball) <= i <= i(r-ball) for
    the dual-form (orbit convention) index at period s.
    """
    if not 0 < r <= R:
        raise GalerkinError(f"need 0 < r <= R, got r={r}, R={R}")
    return constant_form_index(s, R, n), constant_form_index(s, r, n)
