"""Numba-compiled derivative core for the omniscient-information hot loop.

Mirrors ``sim._Runtime.derivs`` exactly; the reference numpy implementation
stays authoritative and is cross-checked against this one in the test suite.
Falls back silently when numba is unavailable.
"""

from __future__ import annotations

import math

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def deco(fn):
            return fn
        return deco if not (args and callable(args[0])) else args[0]


MODE_KNOWN = 0
MODE_OBSERVER = 1
MAN_NONE = 0
MAN_SINUSOID = 1
MAN_EXOGENOUS = 2


@njit(cache=True)
def derivs_core(
    t,
    y,
    active,
    n,
    speeds,
    v_target,
    weights,
    r0,
    mode,
    normal_gain,
    tangent_gain,
    closing_speed,
    accel_pole,
    man_kind,
    man_amp,
    man_freq,
    man_pole,
    man_init,
    dy,
):
    i_tx = 6 * n
    i_ty = 6 * n + 1
    i_th = 6 * n + 2
    i_ta = 6 * n + 3

    gamma_t = y[i_th]
    if man_kind == MAN_SINUSOID:
        a_t = man_amp * math.sin(man_freq * t)
    elif man_kind == MAN_EXOGENOUS:
        a_t = y[i_ta]
    else:
        a_t = 0.0

    sg = math.sin(gamma_t)
    cg = math.cos(gamma_t)

    for k in range(6 * n + 4):
        dy[k] = 0.0

    for i in range(n):
        if not active[i]:
            continue
        r_i = y[i]
        los_i = y[n + i]
        v_r = y[2 * n + i]
        v_los = y[3 * n + i]
        mu = y[4 * n + i]
        z = y[5 * n + i]
        sl_i = math.sin(los_i)
        cl_i = math.cos(los_i)
        # aspect angle: target heading minus the antipodal LOS
        sin_phi = -(sg * cl_i - cg * sl_i)
        cos_phi = -(cg * cl_i + sg * sl_i)

        w_i = 1.0
        coup = 0.0
        for j in range(n):
            a_ij = weights[i, j]
            if a_ij == 0.0 or not active[j]:
                continue
            r_j = y[j]
            los_j = y[n + j]
            sin_th = math.sin(los_j) * cl_i - math.cos(los_j) * sl_i
            norm = (r0[i] * r0[j]) ** 2
            cross = r_i * r_j * sin_th
            w_i += a_ij * cross * cross / norm
            mix = r_i * r_j * ((v_target + speeds[i]) * r_j + (v_target + speeds[j]) * r_i)
            coup += a_ij * mix / norm
        coup *= v_los

        a_tr_true = -a_t * sin_phi
        a_tlos_true = a_t * cos_phi
        if mode == MODE_KNOWN:
            a_mlos = -v_r * v_los / r_i + a_tlos_true + normal_gain * coup / w_i
            a_mr = v_los * v_los / r_i + a_tr_true + tangent_gain * (v_r + closing_speed) + r_i
        else:
            a_mlos = -v_r * v_los / r_i + z * cos_phi + normal_gain * coup / w_i
            a_mr = v_los * v_los / r_i + (-z * sin_phi) + tangent_gain * v_r + r_i
            sigma1 = w_i * cos_phi
            sigma2 = -sin_phi
            dy[5 * n + i] = accel_pole * z + sigma1 * v_los + sigma2 * v_r

        dy[i] = v_r
        dy[n + i] = v_los / r_i
        dy[2 * n + i] = v_los * v_los / r_i - a_mr + a_tr_true
        dy[3 * n + i] = -v_los * v_r / r_i - a_mlos + a_tlos_true
        off = v_r + closing_speed
        dy[4 * n + i] = mu * r_i * off / (1.0 + off * off)

    dy[i_tx] = v_target * cg
    dy[i_ty] = v_target * sg
    dy[i_th] = a_t / v_target
    if man_kind == MAN_EXOGENOUS:
        dy[i_ta] = man_pole * y[i_ta]
    return dy


@njit(cache=True)
def diag_core(
    t,
    y,
    active,
    n,
    speeds,
    v_target,
    weights,
    r0,
    mode,
    normal_gain,
    tangent_gain,
    closing_speed,
    accel_pole,
    man_kind,
    man_amp,
    man_freq,
    man_pole,
    man_init,
    a_mr_out,
    a_mlos_out,
):
    """Controls at the recorded state plus the scalar diagnostics
    (enclosing area, channel energies).  Returns (area, v1, v2, w_part)."""
    gamma_t = y[6 * n + 2]
    if man_kind == MAN_SINUSOID:
        a_t = man_amp * math.sin(man_freq * t)
    elif man_kind == MAN_EXOGENOUS:
        a_t = y[6 * n + 3]
    else:
        a_t = 0.0
    sg = math.sin(gamma_t)
    cg = math.cos(gamma_t)

    area = 0.0
    v1 = 0.0
    v2 = 0.0
    w_part = 0.0
    for i in range(n):
        r_i = y[i]
        los_i = y[n + i]
        v_r = y[2 * n + i]
        v_los = y[3 * n + i]
        mu = y[4 * n + i]
        z = y[5 * n + i]
        sl_i = math.sin(los_i)
        cl_i = math.cos(los_i)
        sin_phi = -(sg * cl_i - cg * sl_i)
        cos_phi = -(cg * cl_i + sg * sl_i)

        w_i = 1.0
        coup = 0.0
        for j in range(n):
            a_ij = weights[i, j]
            if a_ij == 0.0:
                continue
            r_j = y[j]
            los_j = y[n + j]
            sin_th = math.sin(los_j) * cl_i - math.cos(los_j) * sl_i
            norm = (r0[i] * r0[j]) ** 2
            cross = r_i * r_j * sin_th
            area += 0.25 * a_ij * abs(cross)
            v1 += 0.5 * a_ij * v_los * v_los * cross * cross / norm
            dr = r_i - r_j
            dv = v_r - y[2 * n + j]
            v2 += 0.5 * a_ij * (dr * dr + dv * dv)
            if active[j]:
                w_i += a_ij * cross * cross / norm
                mix = r_i * r_j * ((v_target + speeds[i]) * r_j + (v_target + speeds[j]) * r_i)
                coup += a_ij * mix / norm
        coup *= v_los
        v1 += 0.5 * v_los * v_los
        off = v_r + closing_speed
        v2 += 0.5 * mu * mu * off * off + 0.5 * mu * mu
        err = a_t - z
        w_part += 0.5 * (r_i * r_i + v_r * v_r + err * err)

        if mode == MODE_KNOWN:
            a_mlos_out[i] = -v_r * v_los / r_i + a_t * cos_phi + normal_gain * coup / w_i
            a_mr_out[i] = v_los * v_los / r_i + (-a_t * sin_phi) + tangent_gain * off + r_i
        else:
            a_mlos_out[i] = -v_r * v_los / r_i + z * cos_phi + normal_gain * coup / w_i
            a_mr_out[i] = v_los * v_los / r_i + (-z * sin_phi) + tangent_gain * v_r + r_i
    return area, v1, v2, w_part


@njit(cache=True)
def rk4_step(
    t,
    y,
    active,
    h,
    n,
    speeds,
    v_target,
    weights,
    r0,
    mode,
    normal_gain,
    tangent_gain,
    closing_speed,
    accel_pole,
    man_kind,
    man_amp,
    man_freq,
    man_pole,
    man_init,
):
    m = y.shape[0]
    k1 = y.copy()
    k2 = y.copy()
    k3 = y.copy()
    k4 = y.copy()
    tmp = y.copy()
    derivs_core(t, y, active, n, speeds, v_target, weights, r0, mode,
                normal_gain, tangent_gain, closing_speed, accel_pole,
                man_kind, man_amp, man_freq, man_pole, man_init, k1)
    for k in range(m):
        tmp[k] = y[k] + 0.5 * h * k1[k]
    derivs_core(t + 0.5 * h, tmp, active, n, speeds, v_target, weights, r0, mode,
                normal_gain, tangent_gain, closing_speed, accel_pole,
                man_kind, man_amp, man_freq, man_pole, man_init, k2)
    for k in range(m):
        tmp[k] = y[k] + 0.5 * h * k2[k]
    derivs_core(t + 0.5 * h, tmp, active, n, speeds, v_target, weights, r0, mode,
                normal_gain, tangent_gain, closing_speed, accel_pole,
                man_kind, man_amp, man_freq, man_pole, man_init, k3)
    for k in range(m):
        tmp[k] = y[k] + h * k3[k]
    derivs_core(t + h, tmp, active, n, speeds, v_target, weights, r0, mode,
                normal_gain, tangent_gain, closing_speed, accel_pole,
                man_kind, man_amp, man_freq, man_pole, man_init, k4)
    out = y.copy()
    ok = True
    for k in range(m):
        out[k] = y[k] + (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k])
        if not math.isfinite(out[k]):
            ok = False
    return out, ok
