# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: functor search and associativity checking.

Semantics match ``_kernel_py`` exactly; see that module for the argument
layout.
"""
import numpy as np


cdef inline bint _triples_ok(int k, int[::1] mimg, const int[::1] d_comp, int n_dmor,
                             const int[::1] trip_flat, const int[::1] trip_off) nogil:
    cdef int t = trip_off[k]
    cdef int end = trip_off[k + 1]
    cdef int g, f, h
    while t < end:
        g = mimg[trip_flat[3 * t]]
        f = mimg[trip_flat[3 * t + 1]]
        h = mimg[trip_flat[3 * t + 2]]
        if d_comp[g * n_dmor + f] != h:
            return False
        t += 1
    return True


def search_functors(int n_cobj, const int[::1] c_src, const int[::1] c_dst,
                    const int[::1] c_idof, const int[::1] c_comp, int n_cmor,
                    int n_dobj, const int[::1] d_ident, const int[::1] d_comp, int n_dmor,
                    const int[::1] d_hom_flat, const int[::1] d_hom_off,
                    const unsigned char[::1] obj_allowed, const unsigned char[::1] mor_allowed,
                    const int[::1] order, const int[::1] trip_flat, const int[::1] trip_off,
                    long long budget, long long limit):
    cdef int n_slots = n_cobj + n_cmor
    cdef int[::1] oimg = np.full(max(n_cobj, 1), -1, dtype=np.int32)
    cdef int[::1] mimg = np.full(max(n_cmor, 1), -1, dtype=np.int32)
    cdef int[::1] cursor = np.zeros(n_slots + 1, dtype=np.int32)
    cdef long long objmaps = 0
    cdef int i = 0
    cdef int x, k, m, o, a, b, lo, hi, j, cand, base, row
    cdef bint found
    solutions = []
    if n_cobj == 0:
        objmaps = 1
        if objmaps > budget:
            return solutions, objmaps, True
    while i >= 0:
        if i == n_slots:
            solutions.append(([oimg[t] for t in range(n_cobj)],
                              [mimg[t] for t in range(n_cmor)]))
            if 0 <= limit <= len(solutions):
                return solutions, objmaps, False
            i -= 1
            continue
        found = False
        if i < n_cobj:
            base = i * n_dobj
            x = cursor[i]
            while x < n_dobj:
                if obj_allowed[base + x]:
                    found = True
                    break
                x += 1
            cursor[i] = x + 1
            if found:
                oimg[i] = x
                if i == n_cobj - 1:
                    objmaps += 1
                    if objmaps > budget:
                        return solutions, objmaps, True
        else:
            k = i - n_cobj
            m = order[k]
            row = m * n_dmor
            o = c_idof[m]
            if o >= 0:
                if cursor[i] == 0:
                    cursor[i] = 1
                    cand = d_ident[oimg[o]]
                    if mor_allowed[row + cand]:
                        mimg[m] = cand
                        found = _triples_ok(k, mimg, d_comp, n_dmor, trip_flat, trip_off)
            else:
                a = oimg[c_src[m]]
                b = oimg[c_dst[m]]
                lo = d_hom_off[a * n_dobj + b]
                hi = d_hom_off[a * n_dobj + b + 1]
                j = lo + cursor[i]
                while j < hi:
                    cand = d_hom_flat[j]
                    j += 1
                    if mor_allowed[row + cand]:
                        mimg[m] = cand
                        if _triples_ok(k, mimg, d_comp, n_dmor, trip_flat, trip_off):
                            found = True
                            break
                cursor[i] = j - lo
            if not found:
                mimg[m] = -1
        if found:
            i += 1
            cursor[i] = 0
        else:
            i -= 1
    return solutions, objmaps, False


def find_assoc_violation(int n_mor, const int[::1] dst, const int[::1] comp,
                         const int[::1] by_src_flat, const int[::1] by_src_off):
    cdef int f, g, h, gi, hi, b, c, gf, hg
    for f in range(n_mor):
        b = dst[f]
        for gi in range(by_src_off[b], by_src_off[b + 1]):
            g = by_src_flat[gi]
            gf = comp[g * n_mor + f]
            c = dst[g]
            for hi in range(by_src_off[c], by_src_off[c + 1]):
                h = by_src_flat[hi]
                hg = comp[h * n_mor + g]
                if gf < 0 or hg < 0:
                    return (f, g, h)
                if comp[h * n_mor + gf] != comp[hg * n_mor + f]:
                    return (f, g, h)
    return None
