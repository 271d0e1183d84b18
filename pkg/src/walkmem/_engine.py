"""Compiled Monte Carlo core.

Every trajectory owns a counter-based splitmix64 stream derived from
(master seed, trajectory index), so results do not depend on execution
order or batching. One uniform draw is consumed per step, including
forced-return steps, which keeps the cached, uncached, and pure-Python
walkers on identical streams:

  seed_i  = scramble(master ^ scramble((i + 1) * GOLDEN))
  state  <- state + GOLDEN per draw;  u = (scramble(state) >> 11) * 2^-53

Sampling conventions shared by all paths: the memory-walk initial uniform
step picks index int(u * k) (clamped); every kernel step walks the
cumulative normalized weights (sequential sums of w_i / total, final value
forced to 1.0) and takes the first index whose cumulative value exceeds u.

Strategy ids: 0 u-rw, 1 id-rw, 2 f-rwm, 3 id-rwm, 4 2h-rwm, 5 p-rwm,
6 pid-rwm. Batch results: steps to absorption, -1 censored (step cap),
-2 dead end.
"""

import numba
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_UNIT = 1.0 / 9007199254740992.0  # 2^-53

KIND_IDS = {"u-rw": 0, "id-rw": 1, "f-rwm": 2, "id-rwm": 3,
            "2h-rwm": 4, "p-rwm": 5, "pid-rwm": 6}

CENSORED = -1
DEAD_END = -2


@numba.njit(cache=True, inline="always")
def _scramble(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@numba.njit(cache=True, inline="always")
def _unit(state):
    state = state + GOLDEN
    return state, np.float64(_scramble(state) >> _S11) * _UNIT


def scramble_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> _S30
    z *= _M1
    z ^= z >> _S27
    z *= _M2
    z ^= z >> _S31
    return z


def trajectory_seeds(master: int, indices) -> np.ndarray:
    """Stream seeds for the given trajectory indices under master."""
    idx = np.asarray(indices, dtype=np.uint64)
    mixed = scramble_array((idx + np.uint64(1)) * GOLDEN)
    return scramble_array(np.uint64(master & 0xFFFFFFFFFFFFFFFF) ^ mixed)


@numba.njit(cache=True, inline="always")
def _pick(wbuf, count, total, u):
    """First index whose cumulative normalized weight exceeds u."""
    c = 0.0
    for i in range(count - 1):
        c += wbuf[i] / total
        if u < c:
            return i
    return count - 1


@numba.njit(cache=True, inline="always")
def _uniform_index(u, k):
    j = int(u * k)
    if j >= k:
        j = k - 1
    return j


@numba.njit(cache=True, inline="always")
def _contains(arr, lo, hi, x):
    """Binary search in the sorted slice arr[lo:hi]."""
    while lo < hi:
        mid = (lo + hi) // 2
        v = arr[mid]
        if v == x:
            return True
        if v < x:
            lo = mid + 1
        else:
            hi = mid
    return False


@numba.njit(cache=True, inline="always")
def _two_hop_count(out_indices, r_lo, r_hi, in_indices, t_lo, t_hi):
    """|out(r) ∩ in(t)|: length-2 walks r -> x -> t, sorted-merge count."""
    i, j, c = r_lo, t_lo, 0
    while i < r_hi and j < t_hi:
        a = out_indices[i]
        b = in_indices[j]
        if a == b:
            c += 1
            i += 1
            j += 1
        elif a < b:
            i += 1
        else:
            j += 1
    return c


@numba.njit(cache=True)
def _step_uncached(out_indptr, out_indices, in_indptr, in_indices, degw,
                   kind, alpha, beta, prev, cur, state, cbuf, wbuf):
    """One kernel step from (prev, cur). Returns (state, next) with
    next = -2 on a dead end. Consumes exactly one draw."""
    lo = out_indptr[cur]
    hi = out_indptr[cur + 1]
    k = hi - lo
    state, u = _unit(state)
    if k == 0:
        return state, np.int64(DEAD_END)
    if kind == 0:
        count = 0
        for i in range(k):
            cbuf[count] = out_indices[lo + i]
            wbuf[count] = 1.0
            count += 1
    elif kind == 1:
        count = 0
        for i in range(k):
            t = out_indices[lo + i]
            cbuf[count] = t
            wbuf[count] = 1.0 / degw[t]
            count += 1
    elif kind == 2:
        count = 0
        for i in range(k):
            t = out_indices[lo + i]
            if t == prev:
                continue
            cbuf[count] = t
            wbuf[count] = 1.0
            count += 1
    elif kind == 3:
        count = 0
        for i in range(k):
            t = out_indices[lo + i]
            if t == prev:
                continue
            cbuf[count] = t
            wbuf[count] = 1.0 / degw[t]
            count += 1
    elif kind == 4:
        count = 0
        r_lo = out_indptr[prev]
        r_hi = out_indptr[prev + 1]
        for i in range(k):
            t = out_indices[lo + i]
            b = _two_hop_count(out_indices, r_lo, r_hi,
                               in_indices, in_indptr[t], in_indptr[t + 1])
            cbuf[count] = t
            wbuf[count] = 1.0 / b
            count += 1
    elif kind == 5:
        count = 0
        has_return = False
        r_lo = out_indptr[prev]
        r_hi = out_indptr[prev + 1]
        for i in range(k):
            t = out_indices[lo + i]
            if t == prev:
                has_return = True
                continue
            cbuf[count] = t
            if _contains(out_indices, r_lo, r_hi, t):
                wbuf[count] = 1.0
            else:
                wbuf[count] = alpha
            count += 1
        if has_return and beta > 0.0:
            cbuf[count] = prev
            wbuf[count] = beta
            count += 1
    else:
        count = 0
        r_lo = out_indptr[prev]
        r_hi = out_indptr[prev + 1]
        for i in range(k):
            t = out_indices[lo + i]
            if t == prev:
                continue
            cbuf[count] = t
            if _contains(out_indices, r_lo, r_hi, t):
                wbuf[count] = 1.0 / degw[t]
            else:
                wbuf[count] = alpha / degw[t]
            count += 1
    if count == 0:
        # no candidate: forced return along the reciprocal arc if it exists
        if _contains(out_indices, lo, hi, prev):
            return state, np.int64(prev)
        return state, np.int64(DEAD_END)
    total = 0.0
    for i in range(count):
        total += wbuf[i]
    return state, np.int64(cbuf[_pick(wbuf, count, total, u)])


@numba.njit(cache=True)
def fpt_batch_uncached(out_indptr, out_indices, in_indptr, in_indices, degw,
                       kind, alpha, beta, pairs_a, pairs_z, seeds,
                       max_steps, out):
    max_deg = 0
    n = out_indptr.shape[0] - 1
    for v in range(n):
        d = out_indptr[v + 1] - out_indptr[v]
        if d > max_deg:
            max_deg = d
    cbuf = np.empty(max_deg + 1, dtype=np.int64)
    wbuf = np.empty(max_deg + 1, dtype=np.float64)
    memory = kind >= 2
    for i in range(pairs_a.shape[0]):
        a = pairs_a[i]
        z = pairs_z[i]
        state = seeds[i]
        steps = np.int64(0)
        prev = np.int64(-1)
        cur = np.int64(a)
        result = np.int64(CENSORED)
        if memory:
            lo = out_indptr[a]
            k = out_indptr[a + 1] - lo
            state, u = _unit(state)
            if k == 0:
                out[i] = DEAD_END - a
                continue
            prev = np.int64(a)
            cur = np.int64(out_indices[lo + _uniform_index(u, k)])
            steps = np.int64(1)
            if cur == z:
                out[i] = 1
                continue
        while steps < max_steps:
            state, nxt = _step_uncached(
                out_indptr, out_indices, in_indptr, in_indices, degw,
                kind, alpha, beta, prev, cur, state, cbuf, wbuf)
            if nxt == DEAD_END:
                result = np.int64(DEAD_END - cur)   # encodes the stuck node
                break
            prev = cur
            cur = nxt
            steps += 1
            if cur == z:
                result = steps
                break
        out[i] = result


@numba.njit(cache=True)
def fpt_batch_cached_arc(out_indptr, out_indices, row_indptr, row_cols,
                         row_cum, pairs_a, pairs_z, seeds, max_steps, out):
    """Memory walks with precomputed cumulative rows over arc states."""
    for i in range(pairs_a.shape[0]):
        a = pairs_a[i]
        z = pairs_z[i]
        state = seeds[i]
        lo = out_indptr[a]
        k = out_indptr[a + 1] - lo
        state, u = _unit(state)
        if k == 0:
            out[i] = DEAD_END - a
            continue
        arc = lo + _uniform_index(u, k)
        cur = out_indices[arc]
        steps = np.int64(1)
        result = np.int64(CENSORED)
        if cur == z:
            result = steps
        else:
            while steps < max_steps:
                rlo = row_indptr[arc]
                rhi = row_indptr[arc + 1]
                state, u = _unit(state)
                # binary search: first position with cum > u
                while rlo < rhi:
                    mid = (rlo + rhi) // 2
                    if row_cum[mid] > u:
                        rhi = mid
                    else:
                        rlo = mid + 1
                arc = row_cols[rlo]
                cur = out_indices[arc]
                steps += 1
                if cur == z:
                    result = steps
                    break
        out[i] = result


@numba.njit(cache=True)
def fpt_batch_cached_node(row_indptr, row_cols, row_cum, pairs_a, pairs_z,
                          seeds, max_steps, out):
    """Memoryless walks with precomputed cumulative rows over nodes."""
    for i in range(pairs_a.shape[0]):
        z = pairs_z[i]
        cur = np.int64(pairs_a[i])
        state = seeds[i]
        steps = np.int64(0)
        result = np.int64(CENSORED)
        while steps < max_steps:
            rlo = row_indptr[cur]
            rhi = row_indptr[cur + 1]
            state, u = _unit(state)
            while rlo < rhi:
                mid = (rlo + rhi) // 2
                if row_cum[mid] > u:
                    rhi = mid
                else:
                    rlo = mid + 1
            cur = row_cols[rlo]
            steps += 1
            if cur == z:
                result = steps
                break
        out[i] = result


@numba.njit(cache=True)
def occupation_counts(out_indptr, out_indices, in_indptr, in_indices, degw,
                      kind, alpha, beta, start, burn_in, samples, seed):
    """Visit counts over `samples` steps after burn_in, single trajectory."""
    n = out_indptr.shape[0] - 1
    max_deg = 0
    for v in range(n):
        d = out_indptr[v + 1] - out_indptr[v]
        if d > max_deg:
            max_deg = d
    cbuf = np.empty(max_deg + 1, dtype=np.int64)
    wbuf = np.empty(max_deg + 1, dtype=np.float64)
    counts = np.zeros(n, dtype=np.int64)
    state = seed
    prev = np.int64(-1)
    cur = np.int64(start)
    memory = kind >= 2
    if memory:
        lo = out_indptr[cur]
        k = out_indptr[cur + 1] - lo
        state, u = _unit(state)
        if k == 0:
            return counts
        prev = cur
        cur = np.int64(out_indices[lo + _uniform_index(u, k)])
        if burn_in == 0:
            counts[cur] += 1
            samples -= 1
        else:
            burn_in -= 1
    for _ in range(burn_in):
        state, nxt = _step_uncached(
            out_indptr, out_indices, in_indptr, in_indices, degw,
            kind, alpha, beta, prev, cur, state, cbuf, wbuf)
        if nxt == DEAD_END:
            return counts
        prev = cur
        cur = nxt
    for _ in range(samples):
        state, nxt = _step_uncached(
            out_indptr, out_indices, in_indptr, in_indices, degw,
            kind, alpha, beta, prev, cur, state, cbuf, wbuf)
        if nxt == DEAD_END:
            return counts
        prev = cur
        cur = nxt
        counts[cur] += 1
    return counts
