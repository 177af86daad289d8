# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
# cython: cdivision=True
"""Compiled simulation kernels.

Semantics are defined by the pure-NumPy twin ``mediumband._kernels_np``; the
two implementations agree to floating-point tolerance on identical inputs.
Hot loops run without the GIL so batch-level threading in the experiments
layer can overlap work.
"""

import numpy as np

from libc.math cimport M_PI, ceil, cos, fabs, floor, log, sin, sqrt

NAME = "cython"

OBJ_COMPONENT = 0
OBJ_MAGNITUDE = 1

cdef double _INVPHI = (sqrt(5.0) - 1.0) / 2.0
cdef double _INVPHI2 = 1.0 - _INVPHI

# Guard band (symbol periods) around the raised-cosine denominator zero.
cdef double _RC_GUARD = 1e-9


cdef inline double _rc(double x, double beta, double half_span,
                       double x_sing, double p_sing) nogil:
    cdef double ax = fabs(x)
    cdef double pix, den
    if ax > half_span:
        return 0.0
    if x == 0.0:
        return 1.0
    if beta > 0.0 and fabs(ax - x_sing) < _RC_GUARD:
        return p_sing
    pix = M_PI * x
    den = 1.0 - (2.0 * beta * x) * (2.0 * beta * x)
    return sin(pix) / pix * cos(M_PI * beta * x) / den


cdef inline double _sinc(double x) nogil:
    if x == 0.0:
        return 1.0
    return sin(M_PI * x) / (M_PI * x)


cdef inline double _obj_scalar(const double* wr, const double* wi,
                               const double* tau, Py_ssize_t n, double t,
                               double beta, double hs, double xs, double ps,
                               int objective) nogil:
    cdef double cr = 0.0
    cdef double ci = 0.0
    cdef double p
    cdef Py_ssize_t i
    if objective == 0:
        for i in range(n):
            cr += wr[i] * _rc(t - tau[i], beta, hs, xs, ps)
        return fabs(cr)
    for i in range(n):
        p = _rc(t - tau[i], beta, hs, xs, ps)
        cr += wr[i] * p
        ci += wi[i] * p
    return cr * cr + ci * ci


def rc_pulse(x, double beta, double half_span):
    """Raised-cosine pulse; see _kernels_np.rc_pulse."""
    arr = np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.float64)))
    shape = arr.shape
    flat = arr.ravel()
    out = np.empty_like(flat)
    cdef double[::1] xv = flat
    cdef double[::1] ov = out
    cdef Py_ssize_t i, n = flat.shape[0]
    cdef double xs = 0.5 / beta if beta > 0.0 else 0.0
    cdef double ps = (M_PI / 4.0) * _sinc(xs) if beta > 0.0 else 0.0
    with nogil:
        for i in range(n):
            ov[i] = _rc(xv[i], beta, half_span, xs, ps)
    result = out.reshape(shape)
    if np.asarray(x).ndim == 0:
        return result[0]
    return result


def sync_batch(double[:, ::1] wr, double[:, ::1] wi, double[:, ::1] tau,
               double beta, double half_span, double lo, double hi,
               long res, double tol, int objective):
    """Per-profile timing maximizing the objective; see _kernels_np.sync_batch."""
    cdef Py_ssize_t b_size = tau.shape[0]
    cdef Py_ssize_t n = tau.shape[1]
    cdef Py_ssize_t n_grid = <Py_ssize_t>floor((hi - lo) * res + 0.5)
    cdef int n_iter = <int>ceil(log(tol / (2.0 / res)) / log(_INVPHI))
    out = np.empty(b_size, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double xs = 0.5 / beta if beta > 0.0 else 0.0
    cdef double ps = (M_PI / 4.0) * _sinc(xs) if beta > 0.0 else 0.0
    cdef Py_ssize_t b, i, best_i
    cdef int it
    cdef bint left
    cdef double best_m, m, t, t_grid, a, bb, h, c, d, fc, fd, fx, fc_old, fd_old
    cdef double mid, f_mid
    cdef const double* wrp
    cdef const double* wip
    cdef const double* taup
    with nogil:
        for b in range(b_size):
            wrp = &wr[b, 0]
            wip = &wi[b, 0]
            taup = &tau[b, 0]
            best_m = -1.0
            best_i = 0
            for i in range(n_grid):
                t = lo + (<double>i) / res
                m = _obj_scalar(wrp, wip, taup, n, t, beta, half_span, xs, ps,
                                objective)
                if m > best_m:
                    best_m = m
                    best_i = i
            t_grid = lo + (<double>best_i) / res
            a = t_grid - 1.0 / res
            if a < lo:
                a = lo
            bb = t_grid + 1.0 / res
            if bb > hi:
                bb = hi
            h = bb - a
            c = a + _INVPHI2 * h
            d = a + _INVPHI * h
            fc = _obj_scalar(wrp, wip, taup, n, c, beta, half_span, xs, ps,
                             objective)
            fd = _obj_scalar(wrp, wip, taup, n, d, beta, half_span, xs, ps,
                             objective)
            for it in range(n_iter):
                left = fc > fd
                if left:
                    bb = d
                else:
                    a = c
                fc_old = fc
                fd_old = fd
                h = bb - a
                c = a + _INVPHI2 * h
                d = a + _INVPHI * h
                if left:
                    fx = _obj_scalar(wrp, wip, taup, n, c, beta, half_span,
                                     xs, ps, objective)
                    fc = fx
                    fd = fc_old
                else:
                    fx = _obj_scalar(wrp, wip, taup, n, d, beta, half_span,
                                     xs, ps, objective)
                    fc = fd_old
                    fd = fx
            mid = 0.5 * (a + bb)
            f_mid = _obj_scalar(wrp, wip, taup, n, mid, beta, half_span, xs,
                                ps, objective)
            ov[b] = mid if f_mid >= best_m else t_grid
    return out


def taps_batch(double[:, ::1] wr, double[:, ::1] wi, double[:, ::1] tau,
               double beta, double half_span, double[::1] t0,
               long k_lo, long k_hi):
    """Symbol-spaced taps; see _kernels_np.taps_batch."""
    cdef Py_ssize_t b_size = tau.shape[0]
    cdef Py_ssize_t n = tau.shape[1]
    cdef Py_ssize_t n_k = k_hi - k_lo + 1
    out = np.empty((b_size, n_k), dtype=np.complex128)
    cdef double complex[:, ::1] ov = out
    cdef double xs = 0.5 / beta if beta > 0.0 else 0.0
    cdef double ps = (M_PI / 4.0) * _sinc(xs) if beta > 0.0 else 0.0
    cdef Py_ssize_t b, m, i
    cdef double cr, ci, p, t
    with nogil:
        for b in range(b_size):
            for m in range(n_k):
                t = t0[b] + (<double>(k_lo + m))
                cr = 0.0
                ci = 0.0
                for i in range(n):
                    p = _rc(t - tau[b, i], beta, half_span, xs, ps)
                    cr += wr[b, i] * p
                    ci += wi[b, i] * p
                ov[b, m] = cr + 1j * ci
    return out


def ber_detect_batch(double complex[:, ::1] taps, long k0,
                     const unsigned char[:, ::1] bits,
                     double complex[:, ::1] noise, double sigma_w):
    """Paired-scheme frame detection; see _kernels_np.ber_detect_batch."""
    cdef Py_ssize_t b_size = bits.shape[0]
    cdef Py_ssize_t length = bits.shape[1]
    cdef Py_ssize_t n_k = taps.shape[1]
    r_re_arr = np.empty(length, dtype=np.float64)
    r_im_arr = np.empty(length, dtype=np.float64)
    dec_arr = np.empty(length, dtype=np.float64)
    cdef double[::1] r_re = r_re_arr
    cdef double[::1] r_im = r_im_arr
    cdef double[::1] dec = dec_arr
    cdef long err1 = 0, err2 = 0, errlb = 0, viol = 0
    cdef Py_ssize_t b, l, m, idx, src, j_col
    cdef long jj
    cdef double rr, ri, sym, met, g_re, g_im, gmag2, best, mag2
    cdef double cj_re, cj_im, wlr, wli, lbr, lbi, sh, zr, zi
    cdef bint bit0, dec0
    with nogil:
        for b in range(b_size):
            for l in range(length):
                rr = sigma_w * noise[b, l].real
                ri = sigma_w * noise[b, l].imag
                for m in range(n_k):
                    idx = l - (m - k0)
                    if 0 <= idx < length:
                        sym = 1.0 - 2.0 * bits[b, idx]
                        rr += taps[b, m].real * sym
                        ri += taps[b, m].imag * sym
                r_re[l] = rr
                r_im[l] = ri
            g_re = taps[b, k0].real
            g_im = taps[b, k0].imag
            gmag2 = g_re * g_re + g_im * g_im

            best = -1.0
            j_col = 0
            for m in range(n_k):
                if m == k0:
                    continue
                mag2 = taps[b, m].real * taps[b, m].real \
                    + taps[b, m].imag * taps[b, m].imag
                if mag2 > best:
                    best = mag2
                    j_col = m
            cj_re = taps[b, j_col].real
            cj_im = taps[b, j_col].imag
            if best > gmag2:
                viol += 1

            for l in range(length):
                bit0 = bits[b, l] == 0
                sym = 1.0 - 2.0 * bits[b, l]
                met = g_re * r_re[l] + g_im * r_im[l]
                if (met >= 0.0) != bit0:
                    err1 += 1
                wlr = sigma_w * noise[b, l].real
                wli = sigma_w * noise[b, l].imag
                lbr = g_re * sym + wlr
                lbi = g_im * sym + wli
                met = g_re * lbr + g_im * lbi
                if (met >= 0.0) != bit0:
                    errlb += 1

            jj = <long>(j_col - k0)
            if jj >= 0:
                for l in range(length):
                    src = l - jj
                    sh = dec[src] if (0 <= src < length) else 0.0
                    zr = r_re[l] - cj_re * sh
                    zi = r_im[l] - cj_im * sh
                    met = g_re * zr + g_im * zi
                    dec[l] = 1.0 if met >= 0.0 else -1.0
            else:
                for l in range(length - 1, -1, -1):
                    src = l - jj
                    sh = dec[src] if (0 <= src < length) else 0.0
                    zr = r_re[l] - cj_re * sh
                    zi = r_im[l] - cj_im * sh
                    met = g_re * zr + g_im * zi
                    dec[l] = 1.0 if met >= 0.0 else -1.0
            for l in range(length):
                bit0 = bits[b, l] == 0
                dec0 = dec[l] >= 0.0
                if dec0 != bit0:
                    err2 += 1
    return int(err1), int(err2), int(errlb), int(viol)
