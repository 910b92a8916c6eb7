# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernel.

Same machine as ``machine.py``: terms are copied into a flat node heap, reduced
with an explicit frame stack, and the resulting value is copied back. Nodes
that came from the input keep a pointer to their original Python object, so an
unchanged subterm is returned as the very same object.
"""

from libc.stdlib cimport malloc, realloc, free

from .terms import App, Fix, Num, Var, CONSTANTS, OpenTermError
from .terms import T_CONST as _TC, T_NUM as _TN, T_APP as _TA, T_FIX as _TF, T_VAR as _TV

cdef enum:
    TCONST = 0
    TNUM = 1
    TAPP = 2
    TFIX = 3
    TVAR = 4

assert (_TC, _TN, _TA, _TF, _TV) == (TCONST, TNUM, TAPP, TFIX, TVAR)

cdef enum:
    CK = 0
    CS = 1
    CP = 2
    CP0 = 3
    CP1 = 4
    CSUCC = 5
    CIFZ = 6
    CFIX = 7

cdef enum:
    FARG = 0
    FFN = 1
    FAPPTO = 2
    FSAPP = 3

cdef enum:
    VALUE = 0
    UNDEFINED = 1
    TIMEOUT = 2

_CONSTS = {c.code: c for c in CONSTANTS}


cdef struct Heap:
    int *tag
    long long *a
    int *b
    int n
    int cap


cdef int heap_init(Heap *h, int cap) except -1:
    h.tag = <int *> malloc(cap * sizeof(int))
    h.a = <long long *> malloc(cap * sizeof(long long))
    h.b = <int *> malloc(cap * sizeof(int))
    if h.tag == NULL or h.a == NULL or h.b == NULL:
        raise MemoryError()
    h.n = 0
    h.cap = cap
    return 0


cdef void heap_free(Heap *h):
    free(h.tag)
    free(h.a)
    free(h.b)


cdef inline int node(Heap *h, int tag, long long a, int b) except -1:
    cdef int cap
    if h.n == h.cap:
        cap = h.cap * 2
        h.tag = <int *> realloc(h.tag, cap * sizeof(int))
        h.a = <long long *> realloc(h.a, cap * sizeof(long long))
        h.b = <int *> realloc(h.b, cap * sizeof(int))
        if h.tag == NULL or h.a == NULL or h.b == NULL:
            raise MemoryError()
        h.cap = cap
    h.tag[h.n] = tag
    h.a[h.n] = a
    h.b[h.n] = b
    h.n += 1
    return h.n - 1


cdef int encode(Heap *h, object t, dict memo, list origin) except -1:
    cdef int i, l, r
    key = id(t)
    got = memo.get(key)
    if got is not None:
        return <int> got
    tt = type(t)
    if tt is App:
        l = encode(h, t.f, memo, origin)
        r = encode(h, t.x, memo, origin)
        i = node(h, TAPP, l, r)
    elif tt is Num:
        i = node(h, TNUM, t.k, 0)
    elif tt is Fix:
        l = encode(h, t.f, memo, origin)
        i = node(h, TFIX, l, 0)
    elif tt is Var:
        raise OpenTermError(f"free variable {t.name!r}")
    else:
        # constants are preallocated at their code
        return <int> t.code
    memo[key] = i
    while len(origin) < h.n:
        origin.append(None)
    origin[i] = t
    return i


cdef object decode(Heap *h, int i, list origin, dict memo):
    if i < len(origin) and origin[i] is not None:
        return origin[i]
    got = memo.get(i)
    if got is not None:
        return got
    cdef int tg = h.tag[i]
    if tg == TCONST:
        out = _CONSTS[h.a[i]]
    elif tg == TNUM:
        out = Num(h.a[i])
    elif tg == TAPP:
        out = App(decode(h, <int> h.a[i], origin, memo), decode(h, h.b[i], origin, memo))
    else:
        out = Fix(decode(h, <int> h.a[i], origin, memo))
    memo[i] = out
    return out


cdef struct Frames:
    int *kind
    int *a
    int *b
    int n
    int cap


cdef inline int push(Frames *s, int kind, int a, int b) except -1:
    cdef int cap
    if s.n == s.cap:
        cap = s.cap * 2
        s.kind = <int *> realloc(s.kind, cap * sizeof(int))
        s.a = <int *> realloc(s.a, cap * sizeof(int))
        s.b = <int *> realloc(s.b, cap * sizeof(int))
        if s.kind == NULL or s.a == NULL or s.b == NULL:
            raise MemoryError()
        s.cap = cap
    s.kind[s.n] = kind
    s.a[s.n] = a
    s.b[s.n] = b
    s.n += 1
    return 0


cdef inline bint is_pair_node(Heap *h, int v):
    cdef int g
    if h.tag[v] != TAPP:
        return False
    g = <int> h.a[v]
    return h.tag[g] == TAPP and h.a[g] == CP and h.tag[<int> h.a[g]] == TCONST


def run(t, long long budget):
    """Reduce ``t``; returns ``(kind, value_or_None, steps, reason)``."""
    cdef Heap h
    cdef Frames s
    cdef int cur, f, v, g, root, kind, fa, fb, c, tf, tv
    cdef long long steps = 0
    cdef long long n
    cdef bint evaluating = True
    cdef list origin = []
    heap_init(&h, 256)
    s.kind = <int *> malloc(64 * sizeof(int))
    s.a = <int *> malloc(64 * sizeof(int))
    s.b = <int *> malloc(64 * sizeof(int))
    s.n = 0
    s.cap = 64
    reason = None
    try:
        for c in range(8):
            node(&h, TCONST, c, 0)
        root = encode(&h, t, {}, origin)
        cur = root
        while True:
            if evaluating:
                if h.tag[cur] == TAPP:
                    push(&s, FARG, h.b[cur], 0)
                    cur = <int> h.a[cur]
                    continue
                evaluating = False
                continue
            if s.n == 0:
                return VALUE, decode(&h, cur, origin, {}), steps, None
            s.n -= 1
            kind = s.kind[s.n]
            fa = s.a[s.n]
            fb = s.b[s.n]
            if kind == FARG:
                push(&s, FFN, cur, 0)
                cur = fa
                evaluating = True
                continue
            if kind == FFN:
                f = fa
                v = cur
            elif kind == FAPPTO:
                f = cur
                v = fa
            else:
                push(&s, FFN, cur, 0)
                f = fa
                v = fb

            while True:
                steps += 1
                if steps > budget:
                    return TIMEOUT, None, budget, None
                tf = h.tag[f]
                if tf == TCONST:
                    c = <int> h.a[f]
                    if c == CK or c == CS or c == CP:
                        cur = node(&h, TAPP, f, v)
                        break
                    tv = h.tag[v]
                    if c == CFIX:
                        cur = node(&h, TFIX, v, 0)
                        break
                    if tv == TFIX:
                        push(&s, FFN, f, 0)
                        f = <int> h.a[v]
                        continue
                    if c == CP0 or c == CP1:
                        if is_pair_node(&h, v):
                            if c == CP0:
                                cur = h.b[<int> h.a[v]]
                            else:
                                cur = h.b[v]
                            break
                        return UNDEFINED, None, steps, "projection of a non-pair"
                    if c == CSUCC:
                        if tv == TNUM:
                            cur = node(&h, TNUM, h.a[v] + 1, 0)
                            break
                        return UNDEFINED, None, steps, "successor of a non-numeral"
                    # CIFZ
                    if tv == TNUM:
                        cur = node(&h, TAPP, f, v)
                        break
                    return UNDEFINED, None, steps, "zero test of a non-numeral"
                if tf == TNUM:
                    return UNDEFINED, None, steps, "numeral applied as a function"
                if tf == TFIX:
                    push(&s, FAPPTO, v, 0)
                    v = f
                    f = <int> h.a[f]
                    continue
                g = <int> h.a[f]
                if h.tag[g] == TCONST:
                    c = <int> h.a[g]
                    if c == CK:
                        cur = h.b[f]
                        break
                    if c == CS or c == CP or c == CIFZ:
                        cur = node(&h, TAPP, f, v)
                        break
                else:
                    c = <int> h.a[<int> h.a[g]]
                    if c == CS:
                        push(&s, FSAPP, h.b[f], v)
                        f = h.b[g]
                        continue
                    if c == CIFZ:
                        n = h.a[h.b[g]]
                        if n == 0:
                            cur = h.b[f]
                            break
                        f = v
                        v = node(&h, TNUM, n - 1, 0)
                        continue
                    if c == CP:
                        return UNDEFINED, None, steps, "pair applied as a function"
                return UNDEFINED, None, steps, "application of an unapplicable value"
    finally:
        heap_free(&h)
        free(s.kind)
        free(s.a)
        free(s.b)
