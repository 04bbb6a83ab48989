"""Compiled Dormand-Prince 5(4) integrator with PI step control and dense output.

The right-hand side is passed as a compiled function with the signature
``rhs(t, y, dy, q, fp, grid, av, ad)`` so the same stepper drives every
mode system in the package.  Status codes returned by the kernels:
``0`` success, ``1`` step budget exhausted, ``2`` non-finite state,
``3`` step size underflow.
"""
import math

import numpy as np
from numba import njit

OK = 0
BUDGET = 1
NONFINITE = 2
UNDERFLOW = 3

# Butcher tableau.
C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
A71, A73, A74, A75, A76 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
# Embedded error weights (5th minus 4th order).
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
# Dense output coefficients (Hairer & Wanner, DOPRI5).
D1, D3, D4, D5, D6, D7 = (-12715105075.0 / 11282082432.0, 87487479700.0 / 32700410799.0,
                          -10690763975.0 / 1880347072.0, 701980252875.0 / 199316789632.0,
                          -1453857185.0 / 822651844.0, 69997945.0 / 29380423.0)

SAFE = 0.9
FAC_MIN = 0.2
FAC_MAX = 10.0
BETA = 0.04
EXPO = 0.2 - BETA * 0.75


@njit(cache=True, nogil=True)
def _dense(y0, y1, k1, k3, k4, k5, k6, k7, h, theta, out):
    for i in range(y0.shape[0]):
        out[i] = _dense_component(y0, y1, k1, k3, k4, k5, k6, k7, h, theta, i)


@njit(cache=True, nogil=True)
def _dense_component(y0, y1, k1, k3, k4, k5, k6, k7, h, theta, i):
    ydiff = y1[i] - y0[i]
    bspl = h * k1[i] - ydiff
    r4 = ydiff - h * k7[i] - bspl
    r5 = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
    th1 = 1.0 - theta
    return y0[i] + theta * (ydiff + th1 * (bspl + theta * (r4 + th1 * r5)))


@njit(cache=True, nogil=True)
def dopri5(rhs, y, t0, t1, q, fp, grid, av, ad, rtol, atol, max_steps, h0,
           sample_t, sample_y):
    """Advance ``y`` in place from t0 to t1.

    States at the sorted times ``sample_t`` are written to the rows of
    ``sample_y`` from the continuous extension.  Returns
    ``(status, t_reached, n_accepted, n_rejected)``.
    """
    n = y.shape[0]
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    k5 = np.empty(n)
    k6 = np.empty(n)
    k7 = np.empty(n)
    yt = np.empty(n)
    yn = np.empty(n)
    ns = sample_t.shape[0]
    js = 0
    while js < ns and sample_t[js] <= t0:
        sample_y[js, :] = y
        js += 1

    t = t0
    span = t1 - t0
    h = min(h0, span)
    facold = 1e-4
    naccept = 0
    nreject = 0
    reject = False
    rhs(t, y, k1, q, fp, grid, av, ad)
    if span <= 0.0:
        return OK, t, 0, 0
    while True:
        if naccept + nreject >= max_steps:
            return BUDGET, t, naccept, nreject
        last = False
        if t + 1.01 * h >= t1:
            h = t1 - t
            last = True
        if h < 1e-14 * max(1.0, abs(t)):
            return UNDERFLOW, t, naccept, nreject

        for i in range(n):
            yt[i] = y[i] + h * A21 * k1[i]
        rhs(t + C2 * h, yt, k2, q, fp, grid, av, ad)
        for i in range(n):
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
        rhs(t + C3 * h, yt, k3, q, fp, grid, av, ad)
        for i in range(n):
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
        rhs(t + C4 * h, yt, k4, q, fp, grid, av, ad)
        for i in range(n):
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
        rhs(t + C5 * h, yt, k5, q, fp, grid, av, ad)
        for i in range(n):
            yt[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                                + A65 * k5[i])
        tn = t1 if last else t + h
        rhs(tn, yt, k6, q, fp, grid, av, ad)
        for i in range(n):
            yn[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i]
                                + A76 * k6[i])
        rhs(tn, yn, k7, q, fp, grid, av, ad)

        err = 0.0
        for i in range(n):
            sk = atol + rtol * max(abs(y[i]), abs(yn[i]))
            ei = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                      + E7 * k7[i]) / sk
            err += ei * ei
        err = math.sqrt(err / n)
        if not math.isfinite(err):
            return NONFINITE, t, naccept, nreject

        fac11 = err ** EXPO
        if err <= 1.0:
            fac = fac11 / facold ** BETA
            fac = max(1.0 / FAC_MAX, min(1.0 / FAC_MIN, fac / SAFE))
            hnew = h / fac
            facold = max(err, 1e-4)
            naccept += 1
            while js < ns and sample_t[js] <= tn:
                if sample_t[js] >= tn:
                    sample_y[js, :] = yn
                else:
                    theta = (sample_t[js] - t) / h
                    _dense(y, yn, k1, k3, k4, k5, k6, k7, h, theta, sample_y[js])
                js += 1
            for i in range(n):
                y[i] = yn[i]
                k1[i] = k7[i]
            t = tn
            if last:
                return OK, t, naccept, nreject
            if reject:
                hnew = min(hnew, h)
            reject = False
            h = hnew
        else:
            hnew = h / min(1.0 / FAC_MIN, fac11 / SAFE)
            reject = True
            nreject += 1
            h = hnew


@njit(cache=True, nogil=True)
def dopri5_batch(rhs, qs, rows, fp, grid, av, ad, t0, t1, rtol, atol, max_steps, h0s,
                 states, status, t_reached, nsteps):
    """Integrate the modes ``qs[rows]``; ``states[r]`` holds the initial state
    on entry and the final state on exit."""
    st = np.empty(0)
    sy = np.empty((0, 0))
    for r in rows:
        code, tr, na, nr = dopri5(rhs, states[r], t0, t1, qs[r], fp, grid, av, ad, rtol, atol,
                                  max_steps, h0s[r], st, sy)
        status[r] = code
        t_reached[r] = tr
        nsteps[r] = na + nr
