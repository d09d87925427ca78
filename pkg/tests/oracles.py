"""Reference implementations used only by the tests.

Everything here is written from the textbook definitions with explicit
sums, so it shares no code path with ``numpy.fft`` or the package.
"""
import cmath
import math

import numpy as np

C = 299_792_458.0


def hann_taps(length):
    if length == 1:
        return [1.0]
    return [0.5 * (1.0 - math.cos(2.0 * math.pi * k / (length - 1))) for k in range(length)]


def dft_matrix(n_out, n_in, shift=0):
    """Rows k - shift for k in range(n_out): exp(-2 pi i (k - shift) n / n_out)."""
    return np.array([[cmath.exp(-2j * math.pi * (k - shift) * n / n_out) for n in range(n_in)]
                     for k in range(n_out)])


def naive_range_doppler(samples, pad, adc_mode="real"):
    """Direct quadratic-time version of the whole processing chain."""
    x = np.array(samples, dtype=complex)
    n_chirps, n_samples = x.shape
    for m in range(n_chirps):
        mean = sum(x[m, :]) / n_samples
        x[m, :] = x[m, :] - mean
    w_fast = hann_taps(n_samples)
    w_slow = hann_taps(n_chirps)
    for m in range(n_chirps):
        for n in range(n_samples):
            x[m, n] *= w_fast[n] * w_slow[m]
    # zero padding is implicit: pad output bins, original input length
    w_range = dft_matrix(pad, n_samples)
    if adc_mode == "real":
        w_range = w_range[: pad // 2]
    w_doppler = dft_matrix(pad, n_chirps, shift=pad // 2)
    return w_doppler @ x @ w_range.T


def exhaustive_argmax(mag, allowed):
    """Scan every cell; ties to smaller column, then smaller row."""
    best = None
    rows, cols = mag.shape
    for c in range(cols):
        for r in range(rows):
            if not allowed[r][c]:
                continue
            if best is None or mag[r, c] > mag[best[0], best[1]]:
                best = (r, c)
    return best


def peak_frequency(signal, fs, oversample=64):
    """Frequency of the largest DFT bin on a finely interpolated grid."""
    n = len(signal)
    m = n * oversample
    best_f, best_mag = 0.0, -1.0
    for k in range(m // 2):
        acc = 0j
        for i, s in enumerate(signal):
            acc += s * cmath.exp(-2j * math.pi * k * i / m)
        if abs(acc) > best_mag:
            best_f, best_mag = k * fs / m, abs(acc)
    return best_f
