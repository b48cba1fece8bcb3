# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Todd-Coxeter coset enumeration (HLT with coincidences).

Same contract as the pure fallback in _coset_pure: generator i is letter
2*i, its inverse 2*i + 1.  Tables are flat int32 buffers grown on
demand, which keeps multi-million-coset enumerations within a few
hundred megabytes.
"""

import numpy as np
cimport numpy as cnp

from flatact._coset_pure import CosetLimitExceeded

cnp.import_array()


cdef class _HLT:
    cdef int nl
    cdef long limit, nrows, cap, dead
    cdef object table_arr, p_arr, queue_arr
    cdef cnp.int32_t* tbl
    cdef cnp.int32_t* p
    cdef cnp.int32_t* queue

    def __init__(self, int ngens, long limit):
        self.nl = 2 * ngens
        self.limit = limit
        self.cap = 1024
        self.dead = 0
        self.table_arr = np.full(self.cap * self.nl, -1, dtype=np.int32)
        self.p_arr = np.zeros(self.cap, dtype=np.int32)
        self.queue_arr = np.zeros(self.cap, dtype=np.int32)
        self._rebind()
        self.nrows = 1
        self.p[0] = 0

    cdef void _rebind(self):
        self.tbl = <cnp.int32_t*> cnp.PyArray_DATA(self.table_arr)
        self.p = <cnp.int32_t*> cnp.PyArray_DATA(self.p_arr)
        self.queue = <cnp.int32_t*> cnp.PyArray_DATA(self.queue_arr)

    cdef void _grow(self):
        cdef long newcap = self.cap * 2
        cdef object nt
        cdef object npp
        nt = np.full(newcap * self.nl, -1, dtype=np.int32)
        nt[: self.cap * self.nl] = self.table_arr
        self.table_arr = nt
        npp = np.zeros(newcap, dtype=np.int32)
        npp[: self.cap] = self.p_arr
        self.p_arr = npp
        self.queue_arr = np.zeros(newcap, dtype=np.int32)
        self.cap = newcap
        self._rebind()

    cdef long rep(self, long c):
        while self.p[c] != c:
            self.p[c] = self.p[self.p[c]]
            c = self.p[c]
        return c

    cdef long define(self, long a, int x) except -2:
        cdef long b
        if self.nrows >= self.limit:
            raise CosetLimitExceeded("coset limit %d exceeded" % self.limit)
        if self.nrows >= self.cap:
            self._grow()
        b = self.nrows
        self.nrows += 1
        self.p[b] = b
        self.tbl[a * self.nl + x] = b
        self.tbl[b * self.nl + (x ^ 1)] = a
        return b

    cdef void _merge(self, long u, long v, long* qlen):
        u = self.rep(u)
        v = self.rep(v)
        cdef long t
        if u != v:
            if u > v:
                t = u
                u = v
                v = t
            self.p[v] = u
            self.dead += 1
            self.queue[qlen[0]] = v
            qlen[0] += 1

    cdef void coincidence(self, long a, long b):
        cdef long qlen = 0, qi = 0
        cdef long y, d, mu, nu, t, t2
        cdef int x
        cdef int nl = self.nl
        self._merge(a, b, &qlen)
        while qi < qlen:
            y = self.queue[qi]
            qi += 1
            for x in range(nl):
                d = self.tbl[y * nl + x]
                if d != -1:
                    self.tbl[d * nl + (x ^ 1)] = -1
                    self.tbl[y * nl + x] = -1
                    mu = self.rep(y)
                    nu = self.rep(d)
                    t = self.tbl[mu * nl + x]
                    if t != -1:
                        self._merge(nu, t, &qlen)
                    else:
                        t2 = self.tbl[nu * nl + (x ^ 1)]
                        if t2 != -1:
                            self._merge(mu, t2, &qlen)
                        else:
                            self.tbl[mu * nl + x] = nu
                            self.tbl[nu * nl + (x ^ 1)] = mu

    cdef int scan_and_fill(self, long a, cnp.int32_t* w, long wlen) except -2:
        cdef long i = 0
        cdef long j = wlen - 1
        cdef long f = a
        cdef long b = a
        cdef long t
        cdef int nl = self.nl
        while True:
            while i <= j:
                t = self.tbl[f * nl + w[i]]
                if t == -1:
                    break
                f = t
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return 0
            while j >= i:
                t = self.tbl[b * nl + (w[j] ^ 1)]
                if t == -1:
                    break
                b = t
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return 0
            if j == i:
                self.tbl[f * nl + w[i]] = b
                self.tbl[b * nl + (w[i] ^ 1)] = f
                return 0
            self.define(f, w[i])

    def run(self, object relators, object subgens):
        cdef object rel_arrs = [np.asarray(w, dtype=np.int32) for w in relators]
        cdef object sub_arrs = [np.asarray(w, dtype=np.int32) for w in subgens]
        cdef object wa
        cdef long a = 0
        cdef int x
        cdef int nl = self.nl
        cdef long nrel = len(rel_arrs)
        cdef long ri
        for wa in sub_arrs:
            if len(wa):
                self.scan_and_fill(0, <cnp.int32_t*> cnp.PyArray_DATA(wa), len(wa))
        while a < self.nrows:
            if self.rep(a) != a:
                a += 1
                continue
            for ri in range(nrel):
                wa = rel_arrs[ri]
                if len(wa):
                    self.scan_and_fill(
                        a, <cnp.int32_t*> cnp.PyArray_DATA(wa), len(wa)
                    )
                if self.rep(a) != a:
                    break
            if self.rep(a) == a:
                for x in range(nl):
                    if self.tbl[a * nl + x] == -1:
                        self.define(a, x)
            a += 1

    def compact(self):
        cdef long n = self.nrows
        cdef int nl = self.nl
        cdef object renumber_arr = np.full(n, -1, dtype=np.int32)
        cdef cnp.int32_t* renumber = <cnp.int32_t*> cnp.PyArray_DATA(renumber_arr)
        cdef long i, nlive = 0
        for i in range(n):
            if self.rep(i) == i:
                renumber[i] = nlive
                nlive += 1
        cdef object out_arr = np.empty((nlive, nl), dtype=np.int32)
        cdef cnp.int32_t* out = <cnp.int32_t*> cnp.PyArray_DATA(out_arr)
        cdef long row = 0
        cdef int x
        for i in range(n):
            if renumber[i] != -1:
                for x in range(nl):
                    out[row * nl + x] = renumber[self.rep(self.tbl[i * nl + x])]
                row += 1
        return out_arr


def enumerate_cosets(ngens, relators, subgens, coset_limit):
    """Compiled twin of flatact._coset_pure.enumerate_cosets."""
    h = _HLT(ngens, coset_limit)
    h.run(list(relators), list(subgens))
    return h.compact()
