# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels; same API as ``_core_py``."""

from cpython.long cimport PyLong_FromLong
from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM
from libc.stdlib cimport free, malloc


cdef long* _exps(list keys, Py_ssize_t nvars) except NULL:
    cdef Py_ssize_t k, i, n = len(keys)
    cdef long* buf = <long*> malloc((n * nvars + 1) * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    for k in range(n):
        e = keys[k]
        for i in range(nvars):
            buf[k * nvars + i] = e[i]
    return buf


cdef inline tuple _pack(long* a, long* b, Py_ssize_t nvars):
    cdef Py_ssize_t i
    cdef tuple t = PyTuple_New(nvars)
    for i in range(nvars):
        v = PyLong_FromLong(a[i] + b[i])
        Py_INCREF(v)
        PyTuple_SET_ITEM(t, i, v)
    return t


def mul_terms(dict ta, dict tb, add, mul, is_zero, long long mod=0):
    cdef list ka = list(ta), kb = list(tb)
    cdef list va = list(ta.values()), vb = list(tb.values())
    cdef Py_ssize_t na = len(ka), nb = len(kb), i, j, nvars
    cdef dict out = {}
    cdef long* ea
    cdef long* eb
    cdef long long ca, cb, prev_c
    if na == 0 or nb == 0:
        return out
    nvars = len(ka[0])
    ea = _exps(ka, nvars)
    try:
        eb = _exps(kb, nvars)
    except MemoryError:
        free(ea)
        raise
    try:
        if mod:
            for i in range(na):
                ca = va[i]
                for j in range(nb):
                    cb = vb[j]
                    e = _pack(ea + i * nvars, eb + j * nvars, nvars)
                    prev = out.get(e)
                    prev_c = 0 if prev is None else <long long> prev
                    out[e] = (prev_c + (ca * cb) % mod) % mod
            return {e: c for e, c in out.items() if c}
        for i in range(na):
            ca_obj = va[i]
            for j in range(nb):
                e = _pack(ea + i * nvars, eb + j * nvars, nvars)
                c = mul(ca_obj, vb[j])
                prev = out.get(e)
                out[e] = c if prev is None else add(prev, c)
        return {e: c for e, c in out.items() if not is_zero(c)}
    finally:
        free(ea)
        free(eb)


cdef class _Search:
    cdef long n, r
    cdef long* consts
    cdef long* images
    cdef long* tmp
    cdef list order
    cdef list schedule
    cdef list found
    cdef Py_ssize_t limit

    def __cinit__(self, long n, long r, consts, order, schedule, Py_ssize_t limit):
        cdef Py_ssize_t i
        self.n = n
        self.r = r
        self.consts = <long*> malloc(r * r * r * sizeof(long))
        self.images = <long*> malloc(r * r * sizeof(long))
        self.tmp = <long*> malloc(2 * r * sizeof(long))
        if self.consts == NULL or self.images == NULL or self.tmp == NULL:
            raise MemoryError()
        for i in range(r * r * r):
            self.consts[i] = consts[i] % n
        for i in range(r * r):
            self.images[i] = 0
        self.images[0] = 1
        self.order = list(order)
        self.schedule = [list(s) for s in schedule]
        self.found = []
        self.limit = limit

    def __dealloc__(self):
        free(self.consts)
        free(self.images)
        free(self.tmp)

    cdef bint holds(self, long a, long b):
        cdef long r = self.r, n = self.n, i, j, g, xi, xy, c
        cdef long* lhs = self.tmp
        cdef long* rhs = self.tmp + r
        cdef long* x = self.images + a * r
        cdef long* y = self.images + b * r
        cdef long* cab = self.consts + (a * r + b) * r
        for g in range(r):
            lhs[g] = 0
            rhs[g] = 0
        for i in range(r):
            xi = x[i]
            if xi == 0:
                continue
            for j in range(r):
                if y[j] == 0:
                    continue
                xy = (xi * y[j]) % n
                for g in range(r):
                    c = self.consts[(i * r + j) * r + g]
                    if c:
                        lhs[g] = (lhs[g] + xy * c) % n
        for g in range(r):
            c = cab[g]
            if c:
                for i in range(r):
                    rhs[i] = (rhs[i] + c * self.images[g * r + i]) % n
        for g in range(r):
            if lhs[g] != rhs[g]:
                return False
        return True

    cdef void rec(self, Py_ssize_t step):
        cdef long r = self.r, n = self.n, idx, pos, a, b
        cdef long* vec
        cdef bint ok
        if len(self.found) >= self.limit:
            return
        if step == len(self.order):
            self.found.append([[self.images[i * r + j] for j in range(r)] for i in range(r)])
            return
        idx = self.order[step]
        vec = self.images + idx * r
        checks = self.schedule[step]
        for pos in range(r):
            vec[pos] = 0
        while True:
            ok = True
            for pair in checks:
                a = pair[0]
                b = pair[1]
                if not self.holds(a, b):
                    ok = False
                    break
            if ok:
                self.rec(step + 1)
                if len(self.found) >= self.limit:
                    return
            pos = 0
            while pos < r:
                vec[pos] += 1
                if vec[pos] < n:
                    break
                vec[pos] = 0
                pos += 1
            if pos == r:
                break


def aut_search(n, r, consts, order, schedule, limit):
    search = _Search(n, r, consts, order, schedule, limit)
    search.rec(0)
    return search.found
