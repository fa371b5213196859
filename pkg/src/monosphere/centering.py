"""Centring a holomorphic sphere by the SL(2,C) moment-map flow.

SL(2,C) acts on coefficient tuples through the degree-k symmetric
power: for g = [[a, b], [c, d]],

    q(z) = sum_j sqrt(binom(k,j)) v_j z^j
 |->  sum_j (c z + d)^(k-j) (a z + b)^j sqrt(binom(k,j)) v_j,

re-expanded in powers of z.  This is substitution by the Mobius map
times the cocycle (c z + d)^k, hence a right action: nesting reverses
the order, act(g1, act(g2, t)) = act(g2 g1, t).  Restricted to SU(2)
it preserves the total norm, so norm minimization happens on the
hyperbolic 3-space SL(2,C)/SU(2).

The moment map of the SU(2) action is

    mu_r = sum_j (2j - k) |v_j|^2,
    mu_c = sum_j sqrt((j+1)(k-j)) (v_j, v_{j+1}),

inner product conjugate linear in the first slot, with magnitude
|mu| = sqrt(mu_r^2 + 2 |mu_c|^2).  A tuple is a critical point of the
norm on its orbit exactly when mu = 0; the flow descends along the
Hermitian direction

    xi(mu) = [[mu_r, conj(mu_c)], [mu_c, -mu_r]]

with backtracking line search (the directional derivative of norm2
along -xi(mu) is exactly -2 |mu|^2).  Stability (v_0 != 0, v_k != 0,
tuple full) guarantees a minimum exists; the minimizing tuple is
unique up to SU(2) x U(k+1), so the spectrum of the Gram matrix
Psi = conj(Q)^T Q is the invariant the tests compare.

The centre of the monopole is the point of hyperbolic 3-space
X = g^-1 (g^-1)* (determinant normalized to 1), in upper-half-space
coordinates X = (1/x3) [[1, x1 + i x2], [x1 - i x2, x3^2 + |x|^2]].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MaxIterExceeded, NotStable
from .spheres import CoeffTuple, binom_weights, tuple_to_sphere

FLOW_TOL = 1e-10
FLOW_MAX_ITER = 10000
NEWTON_SWITCH = 1e-4  # |mu|/norm2 below which the Newton polish is tried
DET_TOL = 1e-12
STAB_TOL = 1e-12


@dataclass(frozen=True)
class Mobius:
    """Element of SL(2,C); determinant 1 within DET_TOL."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d), 1.0)
        if abs(det - 1.0) > DET_TOL * scale * scale:
            raise ValueError(f"determinant {det} is not 1")

    @staticmethod
    def identity() -> "Mobius":
        return Mobius(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def from_matrix(m) -> "Mobius":
        m = np.asarray(m, dtype=complex)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        s = np.sqrt(det)
        m = m / s
        return Mobius(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def compose(self, other: "Mobius") -> "Mobius":
        """Matrix product self @ other (composition of Mobius maps)."""
        return Mobius.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)


@dataclass(frozen=True)
class MomentValue:
    mu_r: float
    mu_c: complex

    @property
    def magnitude(self) -> float:
        return float(np.sqrt(self.mu_r**2 + 2.0 * abs(self.mu_c) ** 2))


def _rep_matrix(g: Mobius, k: int) -> np.ndarray:
    """P[j, m] = coefficient of z^m in (c z + d)^(k-j) (a z + b)^j.

    The assembled sphere matrix transforms as Q -> Q P.
    """
    P = np.zeros((k + 1, k + 1), dtype=complex)
    down = [np.array([1.0 + 0.0j])]
    up = [np.array([1.0 + 0.0j])]
    for _ in range(k):
        down.append(np.convolve(down[-1], np.array([g.d, g.c])))
        up.append(np.convolve(up[-1], np.array([g.b, g.a])))
    for j in range(k + 1):
        P[j, : k + 1] = np.convolve(down[k - j], up[j])
    return P


def act_sl2(g: Mobius, t: CoeffTuple) -> CoeffTuple:
    """Symmetric-power action on a coefficient tuple (right action)."""
    wts = binom_weights(t.k)
    Q = t.v.T * wts
    Qg = Q @ _rep_matrix(g, t.k)
    return CoeffTuple(t.k, (Qg / wts).T)


def norm2(t: CoeffTuple) -> float:
    """Total squared norm sum_j |v_j|^2."""
    return float(np.sum(np.abs(t.v) ** 2))


def moment_map(t: CoeffTuple) -> MomentValue:
    k = t.k
    weights = 2.0 * np.arange(k + 1) - k
    mu_r = float(np.sum(weights * np.sum(np.abs(t.v) ** 2, axis=1)))
    j = np.arange(k)
    cross = np.sum(np.conj(t.v[:-1]) * t.v[1:], axis=1)
    mu_c = complex(np.sum(np.sqrt((j + 1) * (k - j)) * cross))
    return MomentValue(mu_r, mu_c)


def stability_check(t: CoeffTuple, tol: float = STAB_TOL) -> bool:
    """True iff v_0 != 0, v_k != 0 and the tuple is full."""
    scale = np.sqrt(norm2(t))
    if scale == 0.0:
        return False
    if np.linalg.norm(t.v[0]) <= tol * scale or np.linalg.norm(t.v[-1]) <= tol * scale:
        return False
    svals = np.linalg.svd(t.v, compute_uv=False)
    return bool(svals[-1] > 1e-10 * svals[0])


def _xi_direction(mu: MomentValue) -> np.ndarray:
    return np.array(
        [[mu.mu_r, np.conj(mu.mu_c)], [mu.mu_c, -mu.mu_r]], dtype=complex
    )


def _exp_step(xi: np.ndarray, s: float) -> Mobius:
    """exp(-s xi) for Hermitian traceless xi, closed form, det exactly 1."""
    lam = np.sqrt(abs(xi[0, 0]) ** 2 + abs(xi[1, 0]) ** 2)
    if lam == 0.0:
        return Mobius.identity()
    ch = np.cosh(s * lam)
    sh = np.sinh(s * lam) / lam
    m = ch * np.eye(2) - sh * xi
    return Mobius(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))


def _xi_from_components(p) -> np.ndarray:
    bc = p[1] + 1j * p[2]
    return np.array([[p[0], np.conj(bc)], [bc, -p[0]]], dtype=complex)


def _mu_components(t: CoeffTuple) -> tuple[np.ndarray, float]:
    mu = moment_map(t)
    return np.array([mu.mu_r, mu.mu_c.real, mu.mu_c.imag]), mu.magnitude


def _newton_polish(g0: Mobius, t0: CoeffTuple, tol: float, trace: list, it0: int):
    """Damped Newton on the three real moment components.

    Steepest descent only creeps once the basin is reached; Newton on
    the 3x3 finite-difference Jacobian converges quadratically there.
    Returns (g, tuple, last_iteration) or None when the Jacobian is
    unusable or damping fails, in which case the caller keeps flowing.
    """
    g, cur = g0, t0
    it = it0
    h = 1e-6
    for _ in range(40):
        f, mag = _mu_components(cur)
        if mag <= tol * norm2(cur):
            return g, cur, it
        jac = np.empty((3, 3))
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            fp, _ = _mu_components(act_sl2(_exp_step(_xi_from_components(e), 1.0), cur))
            fm, _ = _mu_components(act_sl2(_exp_step(_xi_from_components(-e), 1.0), cur))
            jac[:, j] = (fp - fm) / (2.0 * h)
        try:
            delta = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            return None
        lam = float(np.linalg.norm(delta))
        if not np.isfinite(lam):
            return None
        if lam > 0.5:
            # keep the group displacement moderate
            delta = delta * (0.5 / lam)
        alpha = 1.0
        trial = None
        trial_mag = np.inf
        for _ in range(8):
            g_step = _exp_step(_xi_from_components(alpha * delta), 1.0)
            trial = act_sl2(g_step, cur)
            _, trial_mag = _mu_components(trial)
            if trial_mag <= (1.0 - 0.25 * alpha) * mag:
                break
            alpha *= 0.5
        else:
            return None
        cur = trial
        g = g.compose(g_step)
        it += 1
        trace.append((it, norm2(cur), trial_mag))
    return None


@dataclass(frozen=True)
class FlowResult:
    g: Mobius
    tuple_centred: CoeffTuple
    iterations: int
    trace: tuple  # (iteration, norm2, |mu|) rows


def center_flow(
    t: CoeffTuple,
    tol: float = FLOW_TOL,
    max_iter: int = FLOW_MAX_ITER,
) -> FlowResult:
    """Flow to the zero of the moment map on the SL(2,C) orbit.

    Steepest descent on norm2 along -xi(mu) with Armijo backtracking,
    switching to a damped Newton polish on the moment components once
    |mu|/norm2 falls under NEWTON_SWITCH; converged when
    |mu| <= tol * norm2.  Refuses unstable tuples (NotStable); raises
    MaxIterExceeded carrying the best iterate when the budget runs out.
    """
    if not stability_check(t):
        raise NotStable("tuple is not stable (v_0, v_k or fullness fails)")
    g_total = Mobius.identity()
    cur = t
    trace = []
    step = 1.0
    best = None
    next_rel = NEWTON_SWITCH
    it = 0
    for it in range(max_iter):
        mu = moment_map(cur)
        n2 = norm2(cur)
        trace.append((it, n2, mu.magnitude))
        if best is None or mu.magnitude < best[0]:
            best = (mu.magnitude, g_total, cur)
        if mu.magnitude <= tol * n2:
            return FlowResult(g_total, cur, it, tuple(trace))
        if mu.magnitude <= next_rel * n2:
            polished = _newton_polish(g_total, cur, tol, trace, it)
            if polished is not None:
                g_p, t_p, last = polished
                return FlowResult(g_p, t_p, last, tuple(trace))
            next_rel = mu.magnitude / n2 / 4.0
        xi = _xi_direction(mu)
        slope = 2.0 * mu.magnitude ** 2  # exact derivative along -xi(mu)
        lam = np.sqrt(mu.mu_r**2 + abs(mu.mu_c) ** 2)
        # cap so the group displacement s * |xi| stays moderate
        s = min(step, 5.0 / max(lam, 1e-300))
        accepted = False
        for _ in range(60):
            g_step = _exp_step(xi, s)
            trial = act_sl2(g_step, cur)
            if norm2(trial) <= n2 - 0.25 * s * slope:
                accepted = True
                break
            s *= 0.5
        if not accepted:
            break
        cur = trial
        g_total = g_total.compose(g_step)  # right action: total = s0 s1 ... sn
        step = min(s * 2.0, 1e8 / max(slope, 1e-300))
    else:
        raise MaxIterExceeded(
            f"no convergence in {max_iter} iterations (best |mu| {best[0]:.3e})",
            best={"g": best[1], "tuple": best[2]},
            trace=tuple(trace),
        )
    # line search found no visible decrease: norm2 is flat to roundoff
    polished = _newton_polish(g_total, cur, tol, trace, it)
    if polished is not None:
        g_p, t_p, last = polished
        return FlowResult(g_p, t_p, last, tuple(trace))
    raise MaxIterExceeded(
        f"line search stalled at iteration {it} (best |mu| {best[0]:.3e}); "
        f"tol {tol:.0e} is below the attainable floor for this tuple",
        best={"g": best[1], "tuple": best[2]},
        trace=tuple(trace),
    )


@dataclass(frozen=True)
class HyperbolicPoint:
    """Point of hyperbolic 3-space as a det-1 positive Hermitian matrix."""

    X: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.X, dtype=complex)
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "X", m)

    @property
    def coords(self) -> tuple[float, float, float]:
        """Upper-half-space coordinates (x1, x2, x3), x3 > 0."""
        x3 = 1.0 / float(np.real(self.X[0, 0]))
        x1 = float(np.real(self.X[0, 1])) * x3
        x2 = float(np.imag(self.X[0, 1])) * x3
        return (x1, x2, x3)


def centre_point(g: Mobius) -> HyperbolicPoint:
    """X = g^-1 (g^-1)*, normalized to determinant 1.

    Invariant under g -> u g for u in SU(2), so it is a function of the
    centred representative rather than of the flow path.
    """
    gi = g.inverse().matrix()
    X = gi @ np.conj(gi).T
    det = np.real(X[0, 0] * X[1, 1] - X[0, 1] * X[1, 0])
    X = X / np.sqrt(det)
    return HyperbolicPoint(X)
