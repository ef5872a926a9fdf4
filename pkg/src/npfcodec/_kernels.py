"""Compiled inner loops for the range coder and its adaptive models.

Carry-propagating 32-bit range coder (low kept in 64 bits, pending 0xFF bytes
tracked by a cache byte + count), byte-wise renormalisation below 2**24.
Frequency models keep a Fenwick tree over their counts; several models can
live in one flat pool, addressed by offset.  Region layout for a model of
``n`` symbols at offset ``off``: ``freq[off:off+n]`` and ``tree[off+1:off+n+1]``.

Kernels report data errors through status codes (see ``OK`` ...) rather than
exceptions; the Python wrappers translate them.
"""

import numpy as np
from numba import njit

TOP = 1 << 24
INCREMENT = 16
MAX_TOTAL = 1 << 16
#: q-context models larger than this are split into an adaptive high part and raw low bits.
QMODEL_LIMIT = 1 << 14
RAW_CHUNK = 16

OK = 0
ERR_TRUNCATED = 1
ERR_CORRUPT = 2
ERR_TRAILING = 3

# encoder state slots
E_LOW, E_RANGE, E_CACHE, E_CSIZE, E_POS, E_SKIP = 0, 1, 2, 3, 4, 5
# decoder state slots
D_CODE, D_RANGE, D_POS, D_ERR = 0, 1, 2, 3


@njit(cache=True)
def model_limit(n):
    # halving must leave room to grow: ceil-halving keeps total >= n
    return max(MAX_TOTAL, 4 * n)


@njit(cache=True)
def top_power(n):
    t = 1
    while t * 2 <= n:
        t *= 2
    return t


@njit(cache=True)
def model_reset(freq, tree, off, n):
    for i in range(n):
        freq[off + i] = 1
    for i in range(1, n + 1):
        tree[off + i] = i & -i


@njit(cache=True)
def model_rebuild(freq, tree, off, n):
    for i in range(1, n + 1):
        tree[off + i] = freq[off + i - 1]
    for i in range(1, n + 1):
        j = i + (i & -i)
        if j <= n:
            tree[off + j] += tree[off + i]


@njit(cache=True)
def model_prefix(tree, off, sym):
    s = 0
    i = sym
    while i > 0:
        s += tree[off + i]
        i -= i & -i
    return s


@njit(cache=True)
def model_find(tree, off, n, top, target):
    """Largest ``sym`` with prefix(sym) <= target, plus that prefix."""
    pos = 0
    cum = 0
    step = top
    while step > 0:
        nxt = pos + step
        if nxt <= n and cum + tree[off + nxt] <= target:
            pos = nxt
            cum += tree[off + nxt]
        step >>= 1
    return pos, cum


@njit(cache=True)
def model_update(freq, tree, off, n, sym, total, limit):
    freq[off + sym] += INCREMENT
    i = sym + 1
    while i <= n:
        tree[off + i] += INCREMENT
        i += i & -i
    total += INCREMENT
    if total > limit:
        total = 0
        for j in range(n):
            f = (freq[off + j] + 1) >> 1
            freq[off + j] = f
            total += f
        model_rebuild(freq, tree, off, n)
    return total


# -- encoder -----------------------------------------------------------------


@njit(cache=True)
def enc_state():
    st = np.zeros(6, np.int64)
    st[E_RANGE] = 0xFFFFFFFF
    st[E_CSIZE] = 1
    st[E_SKIP] = 1
    return st


@njit(cache=True)
def _emit(st, out, b):
    if st[E_SKIP]:
        # the very first byte is always zero and carries no information
        st[E_SKIP] = 0
        return out
    pos = st[E_POS]
    if pos >= out.shape[0]:
        grown = np.empty(2 * out.shape[0] + 64, np.uint8)
        grown[:pos] = out[:pos]
        out = grown
    out[pos] = b
    st[E_POS] = pos + 1
    return out


@njit(cache=True)
def _shift_low(st, out):
    low = st[E_LOW]
    if low < 0xFF000000 or low > 0xFFFFFFFF:
        carry = low >> 32
        temp = st[E_CACHE]
        while True:
            out = _emit(st, out, (temp + carry) & 0xFF)
            temp = 0xFF
            st[E_CSIZE] -= 1
            if st[E_CSIZE] == 0:
                break
        st[E_CACHE] = (low >> 24) & 0xFF
    st[E_CSIZE] += 1
    st[E_LOW] = (low & 0x00FFFFFF) << 8
    return out


@njit(cache=True)
def enc_encode(st, out, cum, freq, total):
    r = st[E_RANGE] // total
    st[E_LOW] += r * cum
    st[E_RANGE] = r * freq
    while st[E_RANGE] < TOP:
        st[E_RANGE] <<= 8
        out = _shift_low(st, out)
    return out


@njit(cache=True)
def enc_finish(st, out):
    for _ in range(5):
        out = _shift_low(st, out)
    return out[: st[E_POS]].copy()


@njit(cache=True)
def enc_raw(st, out, value, nbits):
    while nbits > 0:
        take = min(nbits, RAW_CHUNK)
        nbits -= take
        out = enc_encode(st, out, (value >> nbits) & ((1 << take) - 1), 1, 1 << take)
    return out


@njit(cache=True)
def enc_model(st, out, freq, tree, off, n, sym, total, limit):
    cum = model_prefix(tree, off, sym)
    out = enc_encode(st, out, cum, freq[off + sym], total)
    total = model_update(freq, tree, off, n, sym, total, limit)
    return out, total


# -- decoder -----------------------------------------------------------------


@njit(cache=True)
def _next_byte(st, data):
    pos = st[D_POS]
    if pos >= data.shape[0]:
        if st[D_ERR] == OK:
            st[D_ERR] = ERR_TRUNCATED
        return 0
    st[D_POS] = pos + 1
    return data[pos]


@njit(cache=True)
def dec_state(data):
    st = np.zeros(4, np.int64)
    st[D_RANGE] = 0xFFFFFFFF
    for _ in range(4):
        st[D_CODE] = (st[D_CODE] << 8) | _next_byte(st, data)
    return st


@njit(cache=True)
def dec_target(st, total):
    """Scaled code value for a model with ``total``; flags corruption."""
    r = st[D_RANGE] // total
    v = st[D_CODE] // r
    if v >= total:
        if st[D_ERR] == OK:
            st[D_ERR] = ERR_CORRUPT
        v = total - 1
    return r, v


@njit(cache=True)
def dec_consume(st, data, r, cum, freq):
    st[D_CODE] -= r * cum
    st[D_RANGE] = r * freq
    while st[D_RANGE] < TOP:
        st[D_CODE] = ((st[D_CODE] << 8) | _next_byte(st, data)) & 0xFFFFFFFF
        st[D_RANGE] <<= 8


@njit(cache=True)
def dec_raw(st, data, nbits):
    value = 0
    while nbits > 0:
        take = min(nbits, RAW_CHUNK)
        nbits -= take
        r, v = dec_target(st, 1 << take)
        dec_consume(st, data, r, v, 1)
        value = (value << take) | v
    return value


@njit(cache=True)
def dec_model(st, data, freq, tree, off, n, top, total, limit):
    r, v = dec_target(st, total)
    sym, cum = model_find(tree, off, n, top, v)
    dec_consume(st, data, r, cum, freq[off + sym])
    total = model_update(freq, tree, off, n, sym, total, limit)
    return sym, total


@njit(cache=True)
def dec_status(st, data):
    if st[D_ERR] != OK:
        return st[D_ERR]
    if st[D_POS] != data.shape[0]:
        return ERR_TRAILING
    return OK


# -- whole sequences under one model -----------------------------------------


@njit(cache=True)
def encode_sequence(symbols, n):
    freq = np.empty(n + 1, np.int64)
    tree = np.empty(n + 1, np.int64)
    model_reset(freq, tree, 0, n)
    total = n
    limit = model_limit(n)
    st = enc_state()
    out = np.empty(64 + symbols.shape[0] // 2, np.uint8)
    for i in range(symbols.shape[0]):
        out, total = enc_model(st, out, freq, tree, 0, n, symbols[i], total, limit)
    return enc_finish(st, out)


@njit(cache=True)
def decode_sequence(data, count, n):
    freq = np.empty(n + 1, np.int64)
    tree = np.empty(n + 1, np.int64)
    model_reset(freq, tree, 0, n)
    total = n
    limit = model_limit(n)
    top = top_power(n)
    symbols = np.empty(count, np.int64)
    st = dec_state(data)
    for i in range(count):
        if st[D_ERR] != OK:
            return symbols, st[D_ERR]
        sym, total = dec_model(st, data, freq, tree, 0, n, top, total, limit)
        symbols[i] = sym
    return symbols, dec_status(st, data)


# -- block tuple streams -----------------------------------------------------


@njit(cache=True)
def _ensure(pool, need):
    if need <= pool.shape[0]:
        return pool
    grown = np.empty(max(need, 2 * pool.shape[0]), np.int64)
    grown[: pool.shape[0]] = pool
    return grown


@njit(cache=True)
def encode_blocks(p, q, d, k, ctx_alpha, ctx_shift):
    """Adaptive-code the p values and, per p context, the q ranks.

    Returns ``(pstream, qstream)``; either is empty when nothing was coded.
    """
    pn = k * d - d + 1
    pfreq = np.empty(pn + 1, np.int64)
    ptree = np.empty(pn + 1, np.int64)
    model_reset(pfreq, ptree, 0, pn)
    ptotal = pn
    plimit = model_limit(pn)

    nctx = k * d + 1
    ctx_off = np.full(nctx, -1, np.int64)
    ctx_total = np.zeros(nctx, np.int64)
    pool_f = np.empty(1024, np.int64)
    pool_t = np.empty(1024, np.int64)
    used = 0

    pst = enc_state()
    pout = np.empty(64 + p.shape[0] // 2, np.uint8)
    qst = enc_state()
    qout = np.empty(64 + p.shape[0] // 2, np.uint8)
    qcount = 0

    for i in range(p.shape[0]):
        c = p[i]
        pout, ptotal = enc_model(pst, pout, pfreq, ptree, 0, pn, c - d, ptotal, plimit)
        if c == d or c == k * d:
            continue
        n = ctx_alpha[c]
        if ctx_off[c] < 0:
            pool_f = _ensure(pool_f, used + n + 1)
            pool_t = _ensure(pool_t, used + n + 1)
            ctx_off[c] = used
            used += n + 1
            model_reset(pool_f, pool_t, ctx_off[c], n)
            ctx_total[c] = n
        sh = ctx_shift[c]
        qout, t = enc_model(
            qst, qout, pool_f, pool_t, ctx_off[c], n, q[i] >> sh, ctx_total[c], model_limit(n)
        )
        ctx_total[c] = t
        if sh > 0:
            qout = enc_raw(qst, qout, q[i] & ((1 << sh) - 1), sh)
        qcount += 1

    if p.shape[0] > 0:
        pbytes = enc_finish(pst, pout)
    else:
        pbytes = np.empty(0, np.uint8)
    if qcount > 0:
        qbytes = enc_finish(qst, qout)
    else:
        qbytes = np.empty(0, np.uint8)
    return pbytes, qbytes


@njit(cache=True)
def decode_blocks(pdata, qdata, r, d, k, ctx_alpha, ctx_shift):
    """Inverse of :func:`encode_blocks`; returns ``(p, q, status)``."""
    p = np.empty(r, np.int64)
    q = np.zeros(r, np.int64)
    if r == 0:
        if pdata.shape[0] or qdata.shape[0]:
            return p, q, ERR_TRAILING
        return p, q, OK

    pn = k * d - d + 1
    pfreq = np.empty(pn + 1, np.int64)
    ptree = np.empty(pn + 1, np.int64)
    model_reset(pfreq, ptree, 0, pn)
    ptotal = pn
    plimit = model_limit(pn)
    ptop = top_power(pn)

    nctx = k * d + 1
    ctx_off = np.full(nctx, -1, np.int64)
    ctx_total = np.zeros(nctx, np.int64)
    pool_f = np.empty(1024, np.int64)
    pool_t = np.empty(1024, np.int64)
    used = 0

    pst = dec_state(pdata)
    qst = np.zeros(4, np.int64)
    qstarted = False

    for i in range(r):
        if pst[D_ERR] != OK:
            return p, q, pst[D_ERR]
        sym, ptotal = dec_model(pst, pdata, pfreq, ptree, 0, pn, ptop, ptotal, plimit)
        c = sym + d
        p[i] = c
        if c == d or c == k * d:
            continue
        if not qstarted:
            qst = dec_state(qdata)
            qstarted = True
        if qst[D_ERR] != OK:
            return p, q, qst[D_ERR]
        n = ctx_alpha[c]
        if ctx_off[c] < 0:
            pool_f = _ensure(pool_f, used + n + 1)
            pool_t = _ensure(pool_t, used + n + 1)
            ctx_off[c] = used
            used += n + 1
            model_reset(pool_f, pool_t, ctx_off[c], n)
            ctx_total[c] = n
        hi, t = dec_model(
            qst, qdata, pool_f, pool_t, ctx_off[c], n, top_power(n), ctx_total[c], model_limit(n)
        )
        ctx_total[c] = t
        sh = ctx_shift[c]
        if sh > 0:
            q[i] = (hi << sh) | dec_raw(qst, qdata, sh)
        else:
            q[i] = hi

    status = dec_status(pst, pdata)
    if status != OK:
        return p, q, status
    if qstarted:
        return p, q, dec_status(qst, qdata)
    if qdata.shape[0]:
        return p, q, ERR_TRAILING
    return p, q, OK
