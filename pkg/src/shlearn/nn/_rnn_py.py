"""Reference (pure NumPy) recurrence kernels; same contract as ``_rnn.pyx``."""

import numpy as np


def rnn_forward(A, Wh):
    """h_t = tanh(A[t] + h_{t-1} @ Wh), h_{-1} = 0. Returns (T, H)."""
    T, H = A.shape
    out = np.empty((T, H))
    h = np.zeros(H)
    for t in range(T):
        h = np.tanh(A[t] + h @ Wh)
        out[t] = h
    return out


def rnn_backward(Hs, dHs, Wh):
    """Backprop through time for ``rnn_forward``.

    ``dHs`` is the loss gradient w.r.t. each emitted state. Returns the
    gradient w.r.t. the pre-activation inputs ``A`` and w.r.t. ``Wh``.
    """
    T, H = Hs.shape
    dA = np.empty((T, H))
    dWh = np.zeros((H, H))
    dh_next = np.zeros(H)
    for t in range(T - 1, -1, -1):
        da = (dHs[t] + dh_next) * (1.0 - Hs[t] * Hs[t])
        dA[t] = da
        if t > 0:
            dWh += np.outer(Hs[t - 1], da)
        dh_next = Wh @ da
    return dA, dWh
