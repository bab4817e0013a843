"""Pure-numpy implementations of the hot kernels.

These are the reference implementations; the compiled extension in
``_speedups.pyx`` mirrors them loop-for-loop.
"""

import numpy as np


def rate_matrix(p, gains, noise_w):
    """Achievable-rate matrix log2(1 + SINR) for all (BS, user) pairs.

    Parameters
    ----------
    p : (N,) float array
        Transmit power per BS in watts.
    gains : (N, K) float array
        Linear channel gains.
    noise_w : float
        Receiver noise power in watts.

    Returns
    -------
    (N, K) float array of spectral efficiencies in bits/s/Hz.
    """
    signal = p[:, None] * gains
    total = signal.sum(axis=0)
    # total-minus-self can go slightly negative in floating point
    interference = np.maximum(total[None, :] - signal, 0.0)
    return np.log2(1.0 + signal / (interference + noise_w))


def hbar_all(p, eta, gains, noise_w):
    """Interference-pricing vector for the power update, one entry per BS.

    Entry m sums, over every user k and every other BS n, the share
    eta[n, k] * gains[m, k] / (interference-plus-noise at user k w.r.t. n).
    """
    signal = p[:, None] * gains
    total = signal.sum(axis=0)
    denom = np.maximum(total[None, :] - signal, 0.0) + noise_w
    shares = eta / denom
    colsum = shares.sum(axis=0)
    return (gains * (colsum[None, :] - shares)).sum(axis=1)
