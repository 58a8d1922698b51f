"""Pure-Python versions of the hot loops in ``_kernel.pyx``.

Both modules expose the same two functions with the same argument layout;
``catsem.kernel`` picks one at import time.
"""


def search_functors(n_cobj, c_src, c_dst, c_idof, c_comp, n_cmor,
                    n_dobj, d_ident, d_comp, n_dmor,
                    d_hom_flat, d_hom_off,
                    obj_allowed, mor_allowed,
                    order, trip_flat, trip_off,
                    budget, limit):
    """Backtracking search for functors between integer-encoded categories.

    ``order`` lists the source morphisms in assignment order; the triples
    ``(g, f, h)`` stored for slot ``k`` are the composition constraints whose
    last-assigned member sits at slot ``k``. Returns
    ``(solutions, object_maps_tried, exceeded)``.
    """
    c_src = list(c_src); c_dst = list(c_dst); c_idof = list(c_idof)
    d_ident = list(d_ident); d_comp = list(d_comp)
    d_hom_flat = list(d_hom_flat); d_hom_off = list(d_hom_off)
    obj_allowed = list(obj_allowed); mor_allowed = list(mor_allowed)
    order = list(order); trip_flat = list(trip_flat); trip_off = list(trip_off)

    n_slots = n_cobj + n_cmor
    oimg = [-1] * n_cobj
    mimg = [-1] * n_cmor
    cursor = [0] * (n_slots + 1)
    solutions = []
    objmaps = 0
    if n_cobj == 0:
        objmaps = 1
        if objmaps > budget:
            return solutions, objmaps, True
    i = 0
    while i >= 0:
        if i == n_slots:
            solutions.append((list(oimg), list(mimg)))
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


def _triples_ok(k, mimg, d_comp, n_dmor, trip_flat, trip_off):
    t = trip_off[k]
    end = trip_off[k + 1]
    while t < end:
        g = mimg[trip_flat[3 * t]]
        f = mimg[trip_flat[3 * t + 1]]
        h = mimg[trip_flat[3 * t + 2]]
        if d_comp[g * n_dmor + f] != h:
            return False
        t += 1
    return True


def find_assoc_violation(n_mor, dst, comp, by_src_flat, by_src_off):
    """First composable triple ``(f, g, h)`` with ``h(gf) != (hg)f``, else None."""
    dst = list(dst); comp = list(comp)
    by_src_flat = list(by_src_flat); by_src_off = list(by_src_off)
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
