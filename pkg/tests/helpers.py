"""Independent numerical oracles used by the test suite.

Everything here deliberately avoids the library's own derivative paths:
partial derivatives come from Richardson-extrapolated central differences,
the fourth-moment oracle rebuilds the dual-coordinate picture numerically
(local Legendre transform on a lambda grid, finite differences there, tensor
pullback), and the reduced van der Waals slope cubic is transcribed in the
fully cross-multiplied polynomial form so the assembled coefficients can be
checked against an expansion that never touches the entropy partials.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

# central-difference stencils on offsets (-2, -1, 0, 1, 2), O(h^2)
_STENCILS = {
    0: np.array([0.0, 0.0, 1.0, 0.0, 0.0]),
    1: np.array([0.0, -0.5, 0.0, 0.5, 0.0]),
    2: np.array([0.0, 1.0, -2.0, 1.0, 0.0]),
    3: np.array([-0.5, 1.0, 0.0, -1.0, 0.5]),
    4: np.array([1.0, -4.0, 6.0, -4.0, 1.0]),
}
_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


def fd_jet_mp(f, x, y, h, hy=None, dps=50):
    """High-precision FD oracle (mpmath); small steps are roundoff-free."""
    import mpmath as mp

    from thermoforms.jets import ORDERS

    out = []
    with mp.workdps(dps):
        hx = mp.mpf(h)
        hyy = mp.mpf(h if hy is None else hy)

        def grids(div):
            xs = [mp.mpf(x) + k * hx / div for k in range(-2, 3)]
            ys = [mp.mpf(y) + k * hyy / div for k in range(-2, 3)]
            vals = {}
            for a in range(5):
                for b in range(5):
                    vals[(a, b)] = f(xs[a], ys[b])
            return vals

        g1, g2 = grids(1), grids(2)

        def estimate(i, j, vals, div):
            acc = mp.mpf(0)
            for a in range(5):
                for b in range(5):
                    w = _STENCILS[i][a] * _STENCILS[j][b]
                    if w != 0.0:
                        acc += mp.mpf(w) * vals[(a, b)]
            return acc / ((hx / div) ** i * (hyy / div) ** j)

        for (i, j) in ORDERS:
            d1 = estimate(i, j, g1, 1)
            d2 = estimate(i, j, g2, 2)
            out.append(float((4 * d2 - d1) / 3))
    return out


# -- fourth-moment oracle: numeric Legendre transform + pullback --------------


def _solve_state(model, lam1, lam2, e0, v0):
    """Damped Newton solve of (-S_e, -S_v) = (lam1, lam2) from (e0, v0).

    Only valid away from the sigma2-degeneracy fold, where the dual map is
    locally invertible; callers sample test points with a determinant margin.
    """
    e, v = e0, v0
    for _ in range(80):
        p = model.partials(e, v)
        f1 = -p[1] - lam1
        f2 = -p[2] - lam2
        j11, j12, j22 = -p[3], -p[4], -p[5]
        det = j11 * j22 - j12 * j12
        de = (f1 * j22 - f2 * j12) / det
        dv = (j11 * f2 - j12 * f1) / det
        cap = 0.1 * (abs(e) + abs(v) + 1.0)
        step = abs(de) + abs(dv)
        if step > cap:
            de *= cap / step
            dv *= cap / step
        e, v = e - de, v - dv
        if step < 1e-13 * (abs(e) + abs(v) + 1.0):
            return e, v
    raise RuntimeError("dual-coordinate Newton solve did not converge")


def legendre_pullback_sigma4(model, e, v, h_rel=4e-3, rtol=5e-5):
    """sigma4 components at (e, v) via the dual-coordinate route.

    Builds H(lam) = -S - <lam, x> on a local 5x5 lambda grid by Newton
    inversion, finite-differences H to orders 2 and 4 (Richardson), combines
    -H4 + 3 sym(sigma2 x sigma2) in lambda coordinates, and pulls the tensor
    back through dlam = I2 dx with the analytic Hessian.

    Two numerical defenses, both needed near high-curvature regions:

    * H values are evaluated in extended precision (the fourth-derivative
      stencils amplify value roundoff by 1/h^4; the Newton solve itself may
      stay double since H is stationary in x, so an x-error delta costs only
      O(delta^2));
    * the stencil is shrunk adaptively until two successive Richardson
      extrapolations agree to ``rtol`` (H's sixth derivatives can dwarf the
      fourth near the sigma2 fold, so no fixed step fits all points).

    Valid only away from the fold; callers sample points with a determinant
    margin on the positive-definite sheet.
    """
    p = model.partials(e, v)
    lam1, lam2 = -p[1], -p[2]
    # per-axis steps track the curvature scaling of H, so anisotropy is fine
    h1 = h_rel * max(abs(lam1), 1e-2)
    h2 = h_rel * max(abs(lam2), 1e-2)
    ld = np.longdouble

    cache = {}
    seeds = {(0.0, 0.0): (e, v)}

    def H(a, b):
        key = (round(a, 9), round(b, 9))
        if key not in cache:
            # continuation: seed from the nearest already-solved grid point
            seed = min(seeds.items(), key=lambda kv: abs(kv[0][0] - a) + abs(kv[0][1] - b))[1]
            l1 = ld(lam1) + ld(a) * ld(h1)
            l2 = ld(lam2) + ld(b) * ld(h2)
            ee, vv = _solve_state(model, float(l1), float(l2), *seed)
            seeds[key] = (ee, vv)
            s = model.partials(ld(ee), ld(vv))[0]
            cache[key] = -s - l1 * ld(ee) - l2 * ld(vv)
        return cache[key]

    def deriv(i, j, scale):
        w = np.outer(_STENCILS[i], _STENCILS[j])
        acc = ld(0.0)
        for a in range(5):
            for b in range(5):
                if w[a, b] != 0.0:
                    acc += ld(w[a, b]) * H(_OFFSETS[a] * scale, _OFFSETS[b] * scale)
        return acc / ((ld(h1) * ld(scale)) ** i * (ld(h2) * ld(scale)) ** j)

    M = np.array([[-p[3], -p[4]], [-p[4], -p[5]]])

    def pulled_back(scale):
        rich = {}
        for (i, j) in ((2, 0), (1, 1), (0, 2), (4, 0), (3, 1), (2, 2), (1, 3), (0, 4)):
            rich[(i, j)] = float((4.0 * deriv(i, j, 0.5 * scale) - deriv(i, j, scale)) / 3.0)
        s2l = [-rich[(2, 0)], -rich[(1, 1)], -rich[(0, 2)]]
        h4 = [rich[(4 - k, k)] for k in range(5)]
        # sym(sigma2 (x) sigma2) components indexed by lambda2-count
        ss = [
            s2l[0] * s2l[0],
            s2l[0] * s2l[1],
            (s2l[0] * s2l[2] + 2.0 * s2l[1] * s2l[1]) / 3.0,
            s2l[1] * s2l[2],
            s2l[2] * s2l[2],
        ]
        s4l = [-h4[k] + 3.0 * ss[k] for k in range(5)]
        # pull back: dlam_i = I_{ia} dx_a with the analytic Hessian of I
        T = np.empty((2, 2, 2, 2))
        for idx in np.ndindex(2, 2, 2, 2):
            T[idx] = s4l[sum(idx)]
        Tx = np.einsum("ijkl,ia,jb,kc,ld->abcd", T, M, M, M, M)
        return tuple(Tx[(0,) * (4 - k) + (1,) * k] for k in range(5))

    # The pullback contraction cancels strongly near the fold, so convergence
    # must be judged on the final x-side components, not the lambda-side ones.
    # The level-to-level change overestimates the error of the newer value
    # while truncation dominates; once the change grows again, roundoff has
    # taken over and no better answer exists, so the point is rejected.
    prev = pulled_back(1.0)
    scale = 0.5
    last_change = math.inf
    for _ in range(6):
        cur = pulled_back(scale)
        norm = max(abs(c) for c in cur)
        change = max(abs(c - q) for c, q in zip(cur, prev))
        if change <= rtol * norm:
            return cur
        if change >= last_change:
            break
        prev, scale, last_change = cur, 0.5 * scale, change
    raise RuntimeError("dual-route finite differences did not stabilize")


# -- reference slope cubic for the reduced van der Waals model ----------------


def vdw_reference_cubic(e, v, n):
    """Fully expanded slope-cubic coefficients, highest power of q first.

    This is the cross-multiplied form of the cubic (the entropy-derivative
    version times (3/8) v^3 (3v-1)^3 (ev+3)^3), written out monomial by
    monomial so it shares no code with the library's assembly.
    """
    a3 = (54 * e**3 * v**6 - 243 * e**2 * n * v**5 + 243 * e**2 * n * v**4
          + 486 * e**2 * v**5 - 81 * e**2 * n * v**3 - 729 * e * n * v**4
          + 9 * e**2 * n * v**2 + 729 * e * n * v**3 + 1458 * e * v**4
          - 243 * e * n * v**2 - 729 * n * v**3 + 27 * e * n * v
          + 729 * n * v**2 + 1458 * v**3 - 243 * n * v + 27 * n)
    a2 = -243 * e * n * v**6 + 243 * e * n * v**5 - 81 * e * n * v**4 + 9 * e * n * v**3
    a1 = -243 * n * v**7 + 243 * n * v**6 - 81 * n * v**5 + 9 * n * v**4
    a0 = 27 * n * v**9 - 27 * n * v**8 + 9 * n * v**7 - n * v**6
    return (a3, a2, a1, a0)


# -- misc ----------------------------------------------------------------------


def unit_circle_min(polynomial_coeffs, ndirections=10_000):
    """Minimum of the even form over the unit circle, sampled densely.

    ``polynomial_coeffs`` are g's coefficients highest-first; the form value
    at direction (cos t, sin t) is evaluated directly.
    """
    theta = np.linspace(0.0, np.pi, ndirections, endpoint=False)
    c, s = np.cos(theta), np.sin(theta)
    deg = len(polynomial_coeffs) - 1
    val = np.zeros_like(theta)
    for k, coef in enumerate(polynomial_coeffs):
        val += coef * c ** (deg - k) * s**k
    return float(val.min())


def connected_components(mask):
    """Number of 4-connected True components in a 2-D boolean mask."""
    seen = np.zeros_like(mask, dtype=bool)
    nt, nv = mask.shape
    comps = 0
    for i in range(nt):
        for j in range(nv):
            if mask[i, j] and not seen[i, j]:
                comps += 1
                dq = deque([(i, j)])
                seen[i, j] = True
                while dq:
                    a, b = dq.popleft()
                    for x, y in ((a - 1, b), (a + 1, b), (a, b - 1), (a, b + 1)):
                        if 0 <= x < nt and 0 <= y < nv and mask[x, y] and not seen[x, y]:
                            seen[x, y] = True
                            dq.append((x, y))
    return comps


def discrete_moments(atoms, probs, k):
    """Raw moment tensors m_1..m_k of a discrete distribution."""
    atoms = np.asarray(atoms, dtype=float)
    probs = np.asarray(probs, dtype=float)
    out = []
    for order in range(1, k + 1):
        t = 0.0
        for w, pr in zip(atoms, probs):
            term = np.array(pr)
            for _ in range(order):
                term = np.multiply.outer(term, w)
            t = t + term
        out.append(np.asarray(t))
    return out


def discrete_central(atoms, probs, k):
    """Central moment tensor E[(X-mean)^(x)k] of a discrete distribution."""
    atoms = np.asarray(atoms, dtype=float)
    probs = np.asarray(probs, dtype=float)
    mean = (atoms * probs[:, None]).sum(axis=0)
    t = 0.0
    for w, pr in zip(atoms, probs):
        term = np.array(pr)
        for _ in range(k):
            term = np.multiply.outer(term, w - mean)
        t = t + term
    return np.asarray(t)
