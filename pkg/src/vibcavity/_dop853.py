"""Compiled Dormand-Prince 8(5,3) integrator for the single-mode cavity system.

The state is five reals: Re/Im of alpha, Re/Im of beta (or of the squeezing
integral) and the accumulated phase. Everything here is ``nogil`` so several
runs can share a thread pool.
"""
import math

import numpy as np
from numba import njit

# Butcher tableau of DOP853 (Hairer, Norsett & Wanner), 12 stages + FSAL.
C = np.array([0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0])
A = np.zeros((12, 12))
A[1, 0] = 0.05260015195876773
A[2, 0] = 0.0197250569845379
A[2, 1] = 0.0591751709536137
A[3, 0] = 0.02958758547680685
A[3, 2] = 0.08876275643042054
A[4, 0] = 0.2413651341592667
A[4, 2] = -0.8845494793282861
A[4, 3] = 0.924834003261792
A[5, 0] = 0.037037037037037035
A[5, 3] = 0.17082860872947386
A[5, 4] = 0.12546768756682242
A[6, 0] = 0.037109375
A[6, 3] = 0.17025221101954405
A[6, 4] = 0.06021653898045596
A[6, 5] = -0.017578125
A[7, 0] = 0.03709200011850479
A[7, 3] = 0.17038392571223998
A[7, 4] = 0.10726203044637328
A[7, 5] = -0.015319437748624402
A[7, 6] = 0.008273789163814023
A[8, 0] = 0.6241109587160757
A[8, 3] = -3.3608926294469414
A[8, 4] = -0.868219346841726
A[8, 5] = 27.59209969944671
A[8, 6] = 20.154067550477894
A[8, 7] = -43.48988418106996
A[9, 0] = 0.47766253643826434
A[9, 3] = -2.4881146199716677
A[9, 4] = -0.590290826836843
A[9, 5] = 21.230051448181193
A[9, 6] = 15.279233632882423
A[9, 7] = -33.28821096898486
A[9, 8] = -0.020331201708508627
A[10, 0] = -0.9371424300859873
A[10, 3] = 5.186372428844064
A[10, 4] = 1.0914373489967295
A[10, 5] = -8.149787010746927
A[10, 6] = -18.52006565999696
A[10, 7] = 22.739487099350505
A[10, 8] = 2.4936055526796523
A[10, 9] = -3.0467644718982196
A[11, 0] = 2.273310147516538
A[11, 3] = -10.53449546673725
A[11, 4] = -2.0008720582248625
A[11, 5] = -17.9589318631188
A[11, 6] = 27.94888452941996
A[11, 7] = -2.8589982771350235
A[11, 8] = -8.87285693353063
A[11, 9] = 12.360567175794303
A[11, 10] = 0.6433927460157636
B = np.array([0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259])
E3 = np.array([-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0])
E5 = np.array([0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0])

BOGOLIUBOV = 0
SQUEEZING = 1

OK = 0
STEP_TOO_SMALL = 1
TOO_MANY_STEPS = 2
NON_FINITE = 3


@njit(cache=True, nogil=True)
def geometry(kind, p, kt, kl, t_ref, t):
    """Return ``(L, dL/dt)``; the branch (step side, knot segment) is picked at ``t_ref``."""
    if kind == 1:
        arg = p[2] * t + p[3]
        return p[0] + p[1] * math.sin(arg), p[1] * p[2] * math.cos(arg)
    if kind == 2:
        if t_ref < p[4]:
            return p[0], 0.0
        return p[5], 0.0
    if kind == 3:
        n = kt.size
        j = np.searchsorted(kt, t_ref, side="right") - 1
        if j < 0:
            j = 0
        if j > n - 2:
            j = n - 2
        slope = (kl[j + 1] - kl[j]) / (kt[j + 1] - kt[j])
        return kl[j] + slope * (t - kt[j]), slope
    return p[0], 0.0


@njit(cache=True, nogil=True)
def rhs(system, kind, p, kt, kl, t_ref, two_pi_mc, t, y, out):
    L, dL = geometry(kind, p, kt, kl, t_ref, t)
    g = dL / (2.0 * L)
    ph = 2.0 * y[4]
    nr = g * math.cos(ph)
    ni = g * math.sin(ph)
    if system == BOGOLIUBOV:
        # alpha' = -nu conj(beta), beta' = -nu conj(alpha)
        out[0] = -(nr * y[2] + ni * y[3])
        out[1] = -(ni * y[2] - nr * y[3])
        out[2] = -(nr * y[0] + ni * y[1])
        out[3] = -(ni * y[0] - nr * y[1])
    else:
        out[0] = nr
        out[1] = ni
        out[2] = 0.0
        out[3] = 0.0
    out[4] = two_pi_mc / L


@njit(cache=True, nogil=True)
def integrate(system, kind, p, kt, kl, t_ref, two_pi_mc, t0, t1, y0, t_out,
              rtol, atol, h_max, max_steps, inv_ref):
    """Integrate from ``t0`` to ``t1``, landing exactly on each ``t_out`` (inside ``(t0, t1)``).

    Returns ``(y_out, y_final, n_accepted, n_rejected, max_abs_drift,
    max_rel_drift, status)``. Drift is that of ``|alpha|^2 - |beta|^2`` from
    ``inv_ref``; the relative form divides by ``|alpha|^2 + |beta|^2``.
    """
    n = 5
    n_out = t_out.size
    y_out = np.empty((n_out, n))
    K = np.empty((13, n))
    y = y0.copy()
    y_new = np.empty(n)
    y_stage = np.empty(n)
    t = t0
    h_prop = h_max * 0.1
    h = h_prop
    n_acc = 0
    n_rej = 0
    max_abs = 0.0
    max_rel = 0.0
    status = OK
    k_next = 0
    rhs(system, kind, p, kt, kl, t_ref, two_pi_mc, t, y, K[0])
    rejected = False
    while t < t1:
        if n_acc + n_rej >= max_steps:
            status = TOO_MANY_STEPS
            break
        target = t1
        if k_next < n_out:
            target = t_out[k_next]
        h = min(h_prop, h_max)
        landing = False
        if t + h >= target - 1e-12 * abs(h):
            h = target - t
            landing = True
        if not landing and h < 10.0 * (np.nextafter(abs(t), np.inf) - abs(t)):
            status = STEP_TOO_SMALL
            break
        for s in range(1, 12):
            for i in range(n):
                acc = 0.0
                for j in range(s):
                    acc += A[s, j] * K[j, i]
                y_stage[i] = y[i] + h * acc
            rhs(system, kind, p, kt, kl, t_ref, two_pi_mc, t + C[s] * h, y_stage, K[s])
        for i in range(n):
            acc = 0.0
            for j in range(12):
                acc += B[j] * K[j, i]
            y_new[i] = y[i] + h * acc
        t_new = target if landing else t + h
        rhs(system, kind, p, kt, kl, t_ref, two_pi_mc, t_new, y_new, K[12])
        e5 = 0.0
        e3 = 0.0
        for i in range(n):
            if i == 4:
                sc = atol + rtol
            else:
                sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            a5 = 0.0
            a3 = 0.0
            for j in range(13):
                a5 += E5[j] * K[j, i]
                a3 += E3[j] * K[j, i]
            e5 += (a5 / sc) ** 2
            e3 += (a3 / sc) ** 2
        if e5 == 0.0 and e3 == 0.0:
            err = 0.0
        else:
            err = abs(h) * e5 / math.sqrt((e5 + 0.01 * e3) * n)
        if not math.isfinite(err):
            status = NON_FINITE
            break
        if err <= 1.0:
            t = t_new
            for i in range(n):
                y[i] = y_new[i]
                K[0, i] = K[12, i]
            n_acc += 1
            if system == BOGOLIUBOV:
                aa = y[0] * y[0] + y[1] * y[1]
                bb = y[2] * y[2] + y[3] * y[3]
                d = abs(aa - bb - inv_ref)
                if d > max_abs:
                    max_abs = d
                r = d / (aa + bb)
                if r > max_rel:
                    max_rel = r
            if landing and k_next < n_out and t == t_out[k_next]:
                for i in range(n):
                    y_out[k_next, i] = y[i]
                k_next += 1
            fac = 10.0 if err == 0.0 else min(10.0, 0.9 * err ** (-1.0 / 8.0))
            if rejected:
                fac = min(1.0, fac)
            rejected = False
            if not landing or h * fac < h_prop:
                h_prop = h * fac
        else:
            rejected = True
            n_rej += 1
            h_prop = h * max(0.2, 0.9 * err ** (-1.0 / 8.0))
    return y_out, y, n_acc, n_rej, max_abs, max_rel, status
