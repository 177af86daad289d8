"""NumPy implementations of the hot simulation kernels.

This module mirrors the compiled extension ``mediumband._kernels`` and is
selected by ``mediumband._backend`` when the extension is unavailable (or when
forced via ``MEDIUMBAND_BACKEND=python``).  Both backends consume random
variates generated by the caller, so results agree to floating-point
tolerance regardless of which one is active.

Conventions shared by both backends:

- Time is measured in symbol periods (the caller divides by T_s).
- ``wr``/``wi`` are the real/imaginary parts of the complex path weights
  alpha_n * exp(-j*phi_n), shaped (B, N) for a batch of B profiles.
- ``tau`` holds path delays in symbol periods, shaped (B, N).
- Noise arrays are unit-variance complex samples (E|w|^2 = 1); kernels scale
  by ``sigma_w``.
"""

import numpy as np

NAME = "python"

# Timing objectives understood by sync_batch.
OBJ_COMPONENT = 0  # |Re c(t)|: real-branch eye opening (one-dimensional modulation)
OBJ_MAGNITUDE = 1  # |c(t)|^2: complex tap power

# Inverse golden ratio and its square; the bracket shrinks by _INVPHI per
# golden-section iteration.
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = 1.0 - _INVPHI

# Half-width (in symbol periods) of the guard band around the raised-cosine
# denominator zero inside which the analytic limit is used.
_RC_GUARD = 1e-9


def rc_pulse(x, beta, half_span):
    """Raised-cosine pulse, unit amplitude at x = 0, truncated to |x| <= half_span.

    ``x`` is time in symbol periods.  The denominator zero at
    |x| = 1/(2*beta) is handled by its analytic limit inside a guard band of
    half-width 1e-9 symbol periods.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape, dtype=np.float64)
    inside = np.abs(x) <= half_span
    xi = x[inside]
    vals = np.empty(xi.shape, dtype=np.float64)
    if beta > 0.0:
        x_sing = 0.5 / beta
        sing = np.abs(np.abs(xi) - x_sing) < _RC_GUARD
    else:
        sing = np.zeros(xi.shape, dtype=bool)
    safe = ~sing
    xs = xi[safe]
    den = 1.0 - (2.0 * beta * xs) ** 2
    vals[safe] = np.sinc(xs) * np.cos(np.pi * beta * xs) / den
    if beta > 0.0 and np.any(sing):
        # L'Hopital at the denominator zero: (pi/4) * sinc(1/(2*beta)).
        vals[sing] = (np.pi / 4.0) * np.sinc(0.5 / beta)
    out[inside] = vals
    return out


def _objective(wr, wi, tau, beta, half_span, t0, objective):
    """Timing metric for a batch of profiles at per-profile instants t0 (B,)."""
    p = rc_pulse(t0[:, None] - tau, beta, half_span)
    cr = np.einsum("bn,bn->b", wr, p)
    if objective == OBJ_COMPONENT:
        return np.abs(cr)
    ci = np.einsum("bn,bn->b", wi, p)
    return cr * cr + ci * ci


def sync_batch(wr, wi, tau, beta, half_span, lo, hi, res, tol, objective):
    """Sampling instant in [lo, hi) maximizing the timing objective per profile.

    Grid search at resolution 1/res symbol periods followed by golden-section
    refinement of the two-cell bracket around the best grid point until the
    bracket is narrower than ``tol``.  Returns whichever of the refined point
    and the best grid point scores higher, so the result never falls below
    the grid optimum (robust when the maximum sits on a window edge).
    """
    b_size = tau.shape[0]
    n_grid = int(round((hi - lo) * res))
    best_m = np.full(b_size, -1.0)
    best_i = np.zeros(b_size, dtype=np.intp)
    for i in range(n_grid):
        t = np.full(b_size, lo + i / res)
        m = _objective(wr, wi, tau, beta, half_span, t, objective)
        better = m > best_m
        best_m = np.where(better, m, best_m)
        best_i[better] = i
    t_grid = lo + best_i / res
    a = np.maximum(t_grid - 1.0 / res, lo)
    b = np.minimum(t_grid + 1.0 / res, hi)
    n_iter = int(np.ceil(np.log(tol / (2.0 / res)) / np.log(_INVPHI)))
    h = b - a
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc = _objective(wr, wi, tau, beta, half_span, c, objective)
    fd = _objective(wr, wi, tau, beta, half_span, d, objective)
    for _ in range(n_iter):
        left = fc > fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        fc_old = fc
        fd_old = fd
        h = b - a
        c = a + _INVPHI2 * h
        d = a + _INVPHI * h
        x = np.where(left, c, d)
        fx = _objective(wr, wi, tau, beta, half_span, x, objective)
        fc = np.where(left, fx, fd_old)
        fd = np.where(left, fc_old, fx)
    mid = 0.5 * (a + b)
    f_mid = _objective(wr, wi, tau, beta, half_span, mid, objective)
    return np.where(f_mid >= best_m, mid, t_grid)


def taps_batch(wr, wi, tau, beta, half_span, t0, k_lo, k_hi):
    """Symbol-spaced taps c_k(t0) for k in [k_lo, k_hi], shape (B, K) complex."""
    n_k = k_hi - k_lo + 1
    taps = np.empty((tau.shape[0], n_k), dtype=np.complex128)
    for m in range(n_k):
        p = rc_pulse((t0 + (k_lo + m))[:, None] - tau, beta, half_span)
        taps[:, m] = np.einsum("bn,bn->b", wr, p) + 1j * np.einsum(
            "bn,bn->b", wi, p
        )
    return taps


def _shifted(s, k):
    """s delayed by k symbols, zero-padded (s is (B, L))."""
    out = np.zeros_like(s)
    length = s.shape[1]
    if k == 0:
        return s
    if k > 0:
        if k < length:
            out[:, k:] = s[:, :-k]
    else:
        if -k < length:
            out[:, :k] = s[:, -k:]
    return out


def ber_detect_batch(taps, k0, bits, noise, sigma_w):
    """Detect one batch of frames with all three mediumband schemes.

    taps   : (B, K) complex taps, desired tap at column ``k0``.
    bits   : (B, L) uint8 payload bits.
    noise  : (B, L) unit-variance complex noise.
    Returns (err_1tap, err_2tap, err_lb, sic_order_violations).

    The same received signal drives the 1-tap and 2-tap detectors; the lower
    bound re-uses the same noise on an interference-free channel, so the
    three error counts are paired sample by sample.
    """
    b_size, length = bits.shape
    n_k = taps.shape[1]
    s = 1.0 - 2.0 * bits.astype(np.float64)
    g = taps[:, k0]

    r = sigma_w * noise
    for m in range(n_k):
        r = r + taps[:, m : m + 1] * _shifted(s, m - k0)

    true0 = bits == 0

    # Single-tap matched filter: decide bit 0 iff Re(conj(g) r) >= 0.
    metric = np.real(np.conj(g)[:, None] * r)
    err_1tap = int(np.count_nonzero((metric >= 0.0) != true0))

    # Interference-free lower bound with the same noise realization.
    metric_lb = np.real(np.conj(g)[:, None] * (g[:, None] * s + sigma_w * noise))
    err_lb = int(np.count_nonzero((metric_lb >= 0.0) != true0))

    # Two-tap successive interference cancellation against the strongest
    # non-desired tap.
    mags = np.abs(taps)
    mags[:, k0] = -1.0
    j_col = np.argmax(mags, axis=1)
    j = j_col - k0
    cj = taps[np.arange(b_size), j_col]
    violations = int(np.count_nonzero(np.abs(cj) > np.abs(g)))

    dec = np.zeros((b_size, length), dtype=np.float64)
    gc = np.conj(g)
    rows = np.arange(b_size)
    fwd = j >= 0
    # Postcursor interferers (j > 0) are cancelled scanning the frame forward;
    # precursor interferers (j < 0) scanning backward, so the interfering
    # symbol is always already decided.  Symbols outside the frame are zero.
    for order, rows_sel in ((1, fwd), (-1, ~fwd)):
        if not np.any(rows_sel):
            continue
        rr = rows[rows_sel]
        jj = j[rows_sel]
        cjj = cj[rows_sel]
        gcc = gc[rows_sel]
        sweep = range(length) if order == 1 else range(length - 1, -1, -1)
        for l in sweep:
            src = l - jj
            valid = (src >= 0) & (src < length)
            s_hat = np.where(valid, dec[rr, np.clip(src, 0, length - 1)], 0.0)
            m2 = np.real(gcc * (r[rr, l] - cjj * s_hat))
            dec[rr, l] = np.where(m2 >= 0.0, 1.0, -1.0)
    err_2tap = int(np.count_nonzero((dec >= 0.0) != true0))

    return err_1tap, err_2tap, err_lb, violations


def gh_neg_mean_loglik(xsq, k_hole, lam0, lam1):
    """Negative mean log-likelihood of the Gaussian-hole density.

    Density: (exp(-x^2/(2*lam0^2)) - k_hole*exp(-x^2/(2*lam1^2))) / norm
    with norm = sqrt(2*pi)*(lam0 - k_hole*lam1). ``xsq`` holds the squared
    samples (precomputed once per fit).
    """
    norm = np.sqrt(2.0 * np.pi) * (lam0 - k_hole * lam1)
    if norm <= 0.0:
        return np.inf
    mean_xsq = float(np.mean(xsq))
    hole = 0.0
    if k_hole != 0.0 and lam1 > 0.0:
        # log f = -x^2/(2 lam0^2) + log1p(-K exp(-x^2 d)) - log norm with
        # d = 1/(2 lam1^2) - 1/(2 lam0^2) >= 0; the log1p form stays exact
        # when the hole nearly cancels the outer kernel near x = 0.
        d = 1.0 / (2.0 * lam1 * lam1) - 1.0 / (2.0 * lam0 * lam0)
        z = np.minimum(k_hole * np.exp(-xsq * d), 1.0 - 1e-16)
        hole = float(np.mean(np.log1p(-z)))
    return float(np.log(norm)) + mean_xsq / (2.0 * lam0 * lam0) - hole
