"""Inner loops of the player/adversary game.

Everything here is written so that it compiles under ``numba.njit`` and also
runs unchanged as plain numpy when JIT is disabled (see ``_jit``).  Inputs are
float64 arrays; the public modules do all validation before calling in.
"""

import math

import numpy as np

from ._jit import jit

PLAYER_FROZEN = 0
PLAYER_OGD = 1
PLAYER_OGD_SC = 2
PLAYER_MINIBATCH = 3

ADV_ALG1 = 0
ADV_ORTHOGONAL = 1
ADV_SEQUENCE = 2

LOSS_LINEAR = 0
LOSS_QUADRATIC = 1

# absolute slack on the epoch test "within-epoch switching <= threshold"
THRESHOLD_SLACK = 1e-12
# below this relative size the in-plane component is treated as zero
PARALLEL_RTOL = 1e-9
# |u.M| below this (relative to |M|) leaves the sign to the tie-break rule
TIE_RTOL = 1e-12
_SHRINK = 1.0 - 4e-16


@jit
def dot(a, b):
    return (a * b).sum()


@jit
def norm(v):
    return math.sqrt(dot(v, v))


@jit
def project_into(p, radius, out):
    """Write the Euclidean projection of ``p`` onto the ball into ``out``.

    After rescaling, the result is nudged inward by single ulps until its
    computed norm is <= radius, which makes the map exactly idempotent.
    """
    n = norm(p)
    if n <= radius:
        out[:] = p
        return
    out[:] = p * (radius / n)
    for _ in range(64):
        if norm(out) <= radius:
            break
        out *= _SHRINK


@jit
def _first_coordinate_positive(u):
    for i in range(u.shape[0]):
        if abs(u[i]) > TIE_RTOL:
            if u[i] < 0.0:
                u *= -1.0
            return


@jit
def orthogonal_into(w, M, G, out):
    """Write a direction of norm G with ``m.w >= 0`` and ``m.M >= 0`` into ``out``.

    The direction is orthogonal to ``w`` and lies in span{w, M}; when M is zero
    or parallel to w, e1 and then e2 take M's place.  Requires ``len(w) >= 2``
    unless ``w`` is the zero vector.
    """
    d = w.shape[0]
    nw = norm(w)
    nM = norm(M)
    if nw == 0.0:
        if nM == 0.0:
            out[:] = 0.0
            out[0] = G
        else:
            out[:] = M * (G / nM)
        return
    wh = w / nw
    v = np.empty(d)
    for k in range(3):
        if k == 0:
            if nM == 0.0:
                continue
            v[:] = M
        else:
            if k - 1 >= d:
                break
            v[:] = 0.0
            v[k - 1] = 1.0
        nv = norm(v)
        # two Gram-Schmidt passes keep u.w at rounding level
        u = v - dot(v, wh) * wh
        u = u - dot(u, wh) * wh
        nu = norm(u)
        if nu <= PARALLEL_RTOL * nv:
            continue
        u = u / nu
        s = dot(u, M)
        if abs(s) <= TIE_RTOL * nM:
            _first_coordinate_positive(u)
        elif s < 0.0:
            u = -u
        out[:] = G * u
        return
    out[:] = 0.0


@jit
def player_update(kind, w, g, t, eta, lam, c, frozen, batch_len, batch_eta,
                  grad_sum, batch_pos, radius, out):
    """Advance one player by one round; returns the new position in the batch."""
    if kind == PLAYER_OGD:
        project_into(w - eta * g, radius, out)
    elif kind == PLAYER_OGD_SC:
        if frozen:
            out[:] = w
        else:
            project_into(w - g / (lam * (t + c)), radius, out)
    elif kind == PLAYER_MINIBATCH:
        grad_sum += g
        batch_pos += 1
        if batch_pos == batch_len:
            if batch_eta > 0.0:
                project_into(w - batch_eta * (grad_sum / batch_len), radius, out)
            else:
                out[:] = w
            grad_sum[:] = 0.0
            batch_pos = 0
        else:
            out[:] = w
    else:
        out[:] = w
    return batch_pos


@jit
def play(player_kind, eta, lam, c, frozen, batch_len, batch_eta,
         adversary_kind, threshold, G, loss_kind, loss_lam, sequence, w1, radius,
         actions, params, values, switches, epoch_starts):
    """Run all T rounds, filling the output arrays in place.

    ``params`` receives each round's loss direction (linear) or center
    (quadratic).  Adaptive adversaries ignore ``sequence``.  Returns
    ``(number_of_epochs, total_switching_cost)``.
    """
    T = actions.shape[0]
    d = actions.shape[1]
    w = w1.copy()
    w_next = np.empty(d)
    g = np.empty(d)
    m = np.zeros(d)
    M = np.zeros(d)
    grad_sum = np.zeros(d)
    batch_pos = 0
    within = 0.0
    n_epochs = 0
    total = 0.0
    for i in range(T):
        t = i + 1
        actions[i] = w
        if i == 0:
            switches[i] = 0.0
        else:
            s = norm(w - actions[i - 1])
            switches[i] = s
            total += s

        if adversary_kind == ADV_SEQUENCE:
            params[i] = sequence[i]
        else:
            if i == 0:
                orthogonal_into(w, M, G, m)
                epoch_starts[0] = 1
                n_epochs = 1
            else:
                within += switches[i]
                if adversary_kind == ADV_ORTHOGONAL or within > threshold + THRESHOLD_SLACK:
                    orthogonal_into(w, M, G, m)
                    epoch_starts[n_epochs] = t
                    n_epochs += 1
                    within = 0.0
            params[i] = m
            M += m

        if loss_kind == LOSS_LINEAR:
            values[i] = dot(params[i], w)
            g[:] = params[i]
        else:
            diff = w - params[i]
            values[i] = 0.5 * loss_lam * dot(diff, diff)
            g[:] = loss_lam * diff

        batch_pos = player_update(player_kind, w, g, t, eta, lam, c, frozen,
                                  batch_len, batch_eta, grad_sum, batch_pos,
                                  radius, w_next)
        w, w_next = w_next, w
    return n_epochs, total
