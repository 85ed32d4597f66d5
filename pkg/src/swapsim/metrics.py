"""Entanglement and closeness metrics for two-qubit states.

Includes Wootters concurrence, Uhlmann fidelity (squared convention),
and deterministic fits of a state to the maximally entangled family
(1 x U)|phi+> and to the Werner family v|psi><psi| + (1-v) I/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import BellKind, DensityMatrix, Ket, bell_state, psd_sqrt

_SY_SY = np.kron(
    np.array([[0.0, -1.0j], [1.0j, 0.0]]), np.array([[0.0, -1.0j], [1.0j, 0.0]])
)

V_MIN = -1.0 / 3.0  # Werner weight below which the 4x4 mixture loses positivity


def separable_visibility_bound() -> float:
    """Largest two-photon interference visibility a separable Werner state allows."""
    return 1.0 / 3.0


def concurrence(rho: DensityMatrix | np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    Computed from the square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy), sorted in decreasing order.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"concurrence requires a 4x4 matrix, got {m.shape}")
    tilde = _SY_SY @ m.conj() @ _SY_SY
    ev = np.linalg.eigvals(m @ tilde)
    lam = np.sqrt(np.clip(ev.real, 0.0, None))
    lam.sort()
    return float(max(0.0, lam[3] - lam[2] - lam[1] - lam[0]))


def fidelity(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray | Ket) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.

    Accepts a Ket for either argument; for a pure target this reduces to
    <psi|rho|psi>.
    """
    if isinstance(rho, Ket):
        rho, sigma = sigma, rho
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if isinstance(sigma, Ket):
        v = sigma.vector
        return float(np.real(np.vdot(v, a @ v)))
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma, dtype=complex)
    s = psd_sqrt(b)
    w = np.linalg.eigvalsh(s @ a @ s)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))) ** 2)


def max_entangled_ket(theta: float, alpha: float, beta: float) -> Ket:
    """(1 x U)|phi+> for U = [[cos(t)e^{ia}, sin(t)e^{ib}], [-sin(t)e^{-ib}, cos(t)e^{-ia}]]."""
    u = np.array(
        [
            [np.cos(theta) * np.exp(1j * alpha), np.sin(theta) * np.exp(1j * beta)],
            [-np.sin(theta) * np.exp(-1j * beta), np.cos(theta) * np.exp(-1j * alpha)],
        ]
    )
    phi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return Ket(np.kron(np.eye(2), u) @ phi)


def werner_state(v: float, psi: Ket | BellKind) -> DensityMatrix:
    """Werner-form mixture v |psi><psi| + (1 - v) I/4.

    v may run down to -1/3, the positivity limit of the family.
    """
    if not V_MIN - 1e-12 <= v <= 1.0 + 1e-12:
        raise ValueError(f"Werner weight {v!r} outside [-1/3, 1]")
    k = bell_state(psi) if isinstance(psi, BellKind) else psi
    if k.dim != 4:
        raise ValueError("werner_state requires a two-qubit ket")
    m = v * np.outer(k.vector, k.vector.conj()) + (1.0 - v) * np.eye(4) / 4.0
    return DensityMatrix(m)


@dataclass(frozen=True)
class MaxEntFit:
    """Best maximally entangled approximation to a state."""

    fidelity: float
    psi: Ket
    params: tuple[float, float, float]
    closest_bell: BellKind
    degenerate: bool


@dataclass(frozen=True)
class WernerFit:
    """Best Werner-family approximation to a state."""

    v: float
    psi: Ket
    fidelity: float
    params: tuple[float, float, float]
    closest_bell: BellKind


_BELL_PARAMS = {
    BellKind.PHI_PLUS: (0.0, 0.0, 0.0),
    BellKind.PHI_MINUS: (0.0, np.pi / 2.0, 0.0),
    BellKind.PSI_PLUS: (np.pi / 2.0, 0.0, np.pi / 2.0),
    BellKind.PSI_MINUS: (np.pi / 2.0, 0.0, 0.0),
}


def _maxent_batch(params: np.ndarray) -> np.ndarray:
    """Kets for an (n, 3) array of (theta, alpha, beta) rows, shape (n, 4)."""
    t, a, b = params[:, 0], params[:, 1], params[:, 2]
    s = 1.0 / np.sqrt(2.0)
    kets = np.empty((params.shape[0], 4), dtype=complex)
    # columns of (1 x U)|phi+>: [U00, U10, U01, U11]/sqrt2
    kets[:, 0] = np.cos(t) * np.exp(1j * a) * s
    kets[:, 1] = -np.sin(t) * np.exp(-1j * b) * s
    kets[:, 2] = np.sin(t) * np.exp(1j * b) * s
    kets[:, 3] = np.cos(t) * np.exp(-1j * a) * s
    return kets


def _pure_fid_batch(m: np.ndarray, params: np.ndarray) -> np.ndarray:
    kets = _maxent_batch(params)
    return np.einsum("ni,ij,nj->n", kets.conj(), m, kets).real


def _coordinate_descent(f, x0: np.ndarray, steps: np.ndarray, tol: float = 1e-5):
    """Deterministic cyclic coordinate descent with step halving."""
    x = x0.copy()
    best = f(x[None])[0]
    steps = steps.copy()
    while np.max(steps) > tol:
        improved = False
        for i in range(x.shape[0]):
            for sgn in (1.0, -1.0):
                trial = x.copy()
                trial[i] += sgn * steps[i]
                val = f(trial[None])[0]
                if val > best + 1e-15:
                    x, best = trial, val
                    improved = True
        if not improved:
            steps /= 2.0
    return x, best


def _closest_bell(ket: Ket) -> BellKind:
    overlaps = {k: abs(np.vdot(bell_state(k).vector, ket.vector)) ** 2 for k in BellKind}
    return max(overlaps, key=lambda k: overlaps[k])


def nearest_max_entangled(rho: DensityMatrix) -> MaxEntFit:
    """Maximize fidelity with (1 x U)|phi+> over the three angles of U.

    Deterministic: coarse grid (17 x 16 x 16) followed by coordinate
    descent with step halving down to 1e-5.  If several parameter-distant
    states tie within 1e-9 the fit is flagged degenerate, and canonical
    Bell states win ties.
    """
    m = rho.matrix
    if m.shape != (4, 4):
        raise ValueError("nearest_max_entangled requires a two-qubit state")

    thetas = np.linspace(0.0, np.pi / 2.0, 17)
    angs = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    grid = np.array(np.meshgrid(thetas, angs, angs, indexing="ij")).reshape(3, -1).T
    vals = _pure_fid_batch(m, grid)

    order = np.argsort(vals)[::-1]
    starts = [grid[i] for i in order[:24]]
    starts += [np.array(_BELL_PARAMS[k]) for k in BellKind]

    f = lambda p: _pure_fid_batch(m, p)
    step0 = np.array([np.pi / 32.0, np.pi / 8.0, np.pi / 8.0])
    results = [_coordinate_descent(f, np.asarray(s, dtype=float), step0) for s in starts]
    best_val = max(r[1] for r in results)

    # candidates tied with the optimum, deduplicated by state overlap
    tied = [r for r in results if r[1] >= best_val - 1e-9]
    kets = [Ket(_maxent_batch(np.asarray(x)[None])[0]) for x, _ in tied]
    degenerate = False
    for i in range(len(kets)):
        for j in range(i + 1, len(kets)):
            if abs(np.vdot(kets[i].vector, kets[j].vector)) ** 2 < 1.0 - 1e-6:
                degenerate = True

    # prefer an exact canonical Bell state when it ties the optimum
    for kind in BellKind:
        bl = bell_state(kind)
        fb = float(np.real(np.vdot(bl.vector, m @ bl.vector)))
        if fb >= best_val - 1e-9:
            return MaxEntFit(
                fidelity=fb,
                psi=bl,
                params=_BELL_PARAMS[kind],
                closest_bell=kind,
                degenerate=degenerate,
            )

    x, val = max(tied, key=lambda r: r[1])
    ket = Ket(_maxent_batch(np.asarray(x)[None])[0])
    return MaxEntFit(
        fidelity=float(val),
        psi=ket,
        params=(float(x[0]), float(x[1]), float(x[2])),
        closest_bell=_closest_bell(ket),
        degenerate=degenerate,
    )


def _werner_fid_batch(rho_m: np.ndarray, sqrt_rho: np.ndarray, kets: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """Fidelity of rho with Werner(v, psi) for paired rows of kets and vs.

    Uses sqrt(rho) sigma sqrt(rho) = v |w><w| + (1-v)/4 rho with
    w = sqrt(rho) psi, so each evaluation is one 4x4 eigh.
    """
    w = kets @ sqrt_rho.T  # since sqrt_rho is Hermitian: sqrt_rho @ psi
    mats = vs[:, None, None] * (w[:, :, None] * w[:, None, :].conj()) + (
        (1.0 - vs)[:, None, None] / 4.0
    ) * rho_m[None]
    ev = np.linalg.eigvalsh(mats)
    return np.sum(np.sqrt(np.clip(ev, 0.0, None)), axis=1) ** 2


def _golden_v(f, lo: float, hi: float, tol: float = 1e-7):
    """Golden-section maximization of a scalar function on [lo, hi]."""
    g = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def nearest_werner(rho: DensityMatrix) -> WernerFit:
    """Fit v and psi of the Werner family to maximize Uhlmann fidelity.

    Nested deterministic search: a 16^3 grid over the max-entangled
    angles crossed with a coarse v grid, golden-section in v for the
    leading candidates, then joint coordinate descent to step 1e-5.
    """
    m = rho.matrix
    if m.shape != (4, 4):
        raise ValueError("nearest_werner requires a two-qubit state")
    sq = psd_sqrt(m)

    thetas = np.linspace(0.0, np.pi / 2.0, 16)
    angs = np.linspace(0.0, 2.0 * np.pi, 16, endpoint=False)
    grid = np.array(np.meshgrid(thetas, angs, angs, indexing="ij")).reshape(3, -1).T
    kets = _maxent_batch(grid)
    vgrid = np.linspace(V_MIN, 1.0, 29)

    best_per_psi = np.full(grid.shape[0], -np.inf)
    best_v_per_psi = np.zeros(grid.shape[0])
    for v in vgrid:
        vals = _werner_fid_batch(m, sq, kets, np.full(grid.shape[0], v))
        upd = vals > best_per_psi
        best_per_psi[upd] = vals[upd]
        best_v_per_psi[upd] = v

    order = np.argsort(best_per_psi)[::-1]
    starts = [(grid[i], best_v_per_psi[i]) for i in order[:16]]
    starts += [(np.array(_BELL_PARAMS[k]), 0.5) for k in BellKind]

    def eval_joint(p4: np.ndarray) -> np.ndarray:
        k = _maxent_batch(p4[:, :3])
        v = np.clip(p4[:, 3], V_MIN, 1.0)
        return _werner_fid_batch(m, sq, k, v)

    results = []
    for p0, v0 in starts:
        k0 = _maxent_batch(np.asarray(p0, dtype=float)[None])
        vv, _ = _golden_v(
            lambda v: _werner_fid_batch(m, sq, k0, np.array([v]))[0], V_MIN, 1.0
        )
        x0 = np.array([p0[0], p0[1], p0[2], vv])
        step0 = np.array([np.pi / 30.0, np.pi / 7.0, np.pi / 7.0, 0.05])
        x, val = _coordinate_descent(eval_joint, x0, step0)
        x[3] = min(max(x[3], V_MIN), 1.0)
        results.append((x, val))

    best_val = max(r[1] for r in results)

    # snap to a canonical Bell axis when that costs nothing
    for kind in BellKind:
        bl = bell_state(kind)
        kb = bl.vector[None]
        vv, fv = _golden_v(
            lambda v: _werner_fid_batch(m, sq, kb, np.array([v]))[0], V_MIN, 1.0
        )
        if fv >= best_val - 1e-9:
            return WernerFit(
                v=float(vv),
                psi=bl,
                fidelity=float(fv),
                params=_BELL_PARAMS[kind],
                closest_bell=kind,
            )

    x, val = max(results, key=lambda r: r[1])
    ket = Ket(_maxent_batch(x[None, :3])[0])
    return WernerFit(
        v=float(x[3]),
        psi=ket,
        fidelity=float(val),
        params=(float(x[0]), float(x[1]), float(x[2])),
        closest_bell=_closest_bell(ket),
    )
