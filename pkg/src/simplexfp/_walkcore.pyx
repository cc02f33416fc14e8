# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled door-to-door walk and full-cell count for builtin maps.

Mirrors labeling._walk_python and FiniteMap.evaluate operation for
operation (same IEEE double arithmetic, same comparison order), so the
returned cell is identical to the pure Python lane's.
"""

from .errors import InternalError, MapRangeError, ResourceCapExceeded
from .geometry import TOL_MEMBERSHIP

cdef double TOL = TOL_MEMBERSHIP

cdef int MAP_IDENTITY = 1
cdef int MAP_ROTATION = 2
cdef int MAP_SHIFT = 3
cdef int MAP_CONSTANT = 4


cdef int _label(long* v, int n1, double k, int code, int rparam,
                double* cvals, int ncvals) except 0:
    """Carrier-restricted argmax label (1-based) of lattice vertex v/k."""
    cdef double xs[64]
    cdef double fs[64]
    cdef double g[64]
    cdef int i, src, best
    cdef int n = n1 - 1
    cdef double val, s, last, d, best_diff

    for i in range(n1):
        xs[i] = v[i] / k

    if code == MAP_IDENTITY:
        for i in range(n):
            fs[i] = xs[i]
    elif code == MAP_ROTATION:
        for i in range(n):
            fs[i] = 0.0
        for i in range(n if n < rparam else rparam):
            src = rparam - 1 if i == 0 else i - 1
            fs[i] = xs[src] if src < n1 else 0.0
    elif code == MAP_SHIFT:
        fs[0] = 0.0
        for i in range(1, n):
            fs[i] = xs[i - 1]
    else:
        for i in range(n):
            fs[i] = cvals[i] if i < ncvals else 0.0

    for i in range(n):
        val = fs[i]
        if val < 0.0:
            if val < -TOL:
                raise MapRangeError(f"component {i + 1} is negative: {val!r}")
            fs[i] = 0.0
        elif val > 1.0:
            if val > 1.0 + TOL:
                raise MapRangeError(f"component {i + 1} exceeds 1: {val!r}")
            fs[i] = 1.0
    s = 0.0
    for i in range(n):
        s += fs[i]
    last = 1.0 - s
    if last < 0.0:
        if last < -TOL:
            raise MapRangeError(f"first {n} components sum to {s!r} > 1")
        for i in range(n):
            g[i] = fs[i] / s
        g[n] = 0.0
    else:
        for i in range(n):
            g[i] = fs[i]
        g[n] = last

    best = -1
    best_diff = 0.0
    for i in range(n1):
        if v[i] == 0:
            continue
        d = xs[i] - g[i]
        if best < 0 or d > best_diff:
            best = i
            best_diff = d
    if best < 0:
        raise MapRangeError("vertex has empty carrier")
    return best + 1


cdef int _move_index(long* a, long* b, int n1):
    """1-based index p of the unit move -e_p + e_{p+1} from a to b."""
    cdef int i
    for i in range(n1):
        if a[i] != b[i]:
            return i + 1
    return 0


def walk(int m, long k, int code, int rparam, cvals, long cap):
    """Path-follow to a full m-cell; returns (chain, labels, steps)."""
    cdef double cbuf[64]
    cdef int ncvals = len(cvals)
    cdef int i
    for i in range(ncvals):
        cbuf[i] = cvals[i]

    cdef long chain[65][64]
    cdef int labels[65]
    cdef long newv[64]
    cdef int n1 = m + 1
    cdef double kd = <double> k
    cdef int j, p_in, p_out, full, descended, lab, dup, pos, p, r, c
    cdef long steps = 0
    cdef unsigned long mask

    for c in range(n1):
        chain[0][c] = 0
    chain[0][0] = k
    if _label(&chain[0][0], n1, kd, code, rparam, cbuf, ncvals) != 1:
        raise InternalError("corner vertex e_1 is not labelled 1")
    labels[0] = 1
    for c in range(n1):
        chain[1][c] = chain[0][c]
    chain[1][0] -= 1
    chain[1][1] += 1
    labels[1] = _label(&chain[1][0], n1, kd, code, rparam, cbuf, ncvals)

    j = 1
    p_in = 1
    descended = 0

    while True:
        steps += 1
        if steps > cap:
            raise ResourceCapExceeded(f"path following exceeded cap {cap}", cap)

        mask = 0
        for i in range(j + 1):
            mask |= (<unsigned long> 1) << (labels[i] - 1)
        full = 1 if mask == ((<unsigned long> 1) << (j + 1)) - 1 else 0

        if full:
            if not descended:
                if labels[p_in] != j + 1:
                    raise InternalError("entered a full cell through a non-door facet")
                if j == m:
                    out_chain = [tuple(chain[r][c] for c in range(n1)) for r in range(j + 1)]
                    out_labels = [labels[r] for r in range(j + 1)]
                    return out_chain, out_labels, steps
                # ascend: append the vertex one mass move past the top
                for c in range(n1):
                    chain[j + 1][c] = chain[j][c]
                chain[j + 1][j] -= 1
                chain[j + 1][j + 1] += 1
                labels[j + 1] = _label(&chain[j + 1][0], n1, kd, code, rparam, cbuf, ncvals)
                j += 1
                p_in = j
                continue
            p_out = -1
            for i in range(j + 1):
                if labels[i] == j + 1:
                    p_out = i
                    break
            descended = 0
        else:
            if descended:
                raise InternalError("descended into a non-full boundary cell")
            dup = labels[p_in]
            p_out = -1
            for i in range(j + 1):
                if labels[i] == dup and i != p_in:
                    p_out = i
                    break
            if p_out < 0:
                raise InternalError("no duplicate label in a non-full cell")

        # pivot dropping the vertex at p_out
        if p_out == 0:
            p = _move_index(&chain[0][0], &chain[1][0], n1)
            for c in range(n1):
                newv[c] = chain[j][c]
            newv[p - 1] -= 1
            newv[p] += 1
            if newv[p - 1] < 0:
                _check_descend(&chain[0][0], 64, j, p_out)
                j -= 1
                descended = 1
                continue
            for r in range(j):
                for c in range(n1):
                    chain[r][c] = chain[r + 1][c]
                labels[r] = labels[r + 1]
            for c in range(n1):
                chain[j][c] = newv[c]
            labels[j] = _label(&chain[j][0], n1, kd, code, rparam, cbuf, ncvals)
            p_in = j
        elif p_out == j:
            p = _move_index(&chain[j - 1][0], &chain[j][0], n1)
            for c in range(n1):
                newv[c] = chain[0][c]
            newv[p - 1] += 1
            newv[p] -= 1
            if newv[p] < 0:
                _check_descend(&chain[0][0], 64, j, p_out)
                j -= 1
                descended = 1
                continue
            for r in range(j, 0, -1):
                for c in range(n1):
                    chain[r][c] = chain[r - 1][c]
                labels[r] = labels[r - 1]
            for c in range(n1):
                chain[0][c] = newv[c]
            labels[0] = _label(&chain[0][0], n1, kd, code, rparam, cbuf, ncvals)
            p_in = 0
        else:
            p = _move_index(&chain[p_out][0], &chain[p_out + 1][0], n1)
            for c in range(n1):
                newv[c] = chain[p_out - 1][c]
            newv[p - 1] -= 1
            newv[p] += 1
            if newv[p - 1] < 0:
                _check_descend(&chain[0][0], 64, j, p_out)
                j -= 1
                descended = 1
                continue
            for c in range(n1):
                chain[p_out][c] = newv[c]
            labels[p_out] = _label(&chain[p_out][0], n1, kd, code, rparam, cbuf, ncvals)
            p_in = p_out


cdef int _check_descend(long* chain, int stride, int j, int p_out) except -1:
    """Validate that an invalid pivot is the legal boundary-door descent."""
    cdef int r
    if p_out != j:
        raise InternalError("walk hit an illegal boundary facet")
    for r in range(j):
        if chain[r * stride + j] != 0:
            raise InternalError("walk hit an illegal boundary facet")
    if j == 1:
        # the only dimension-0 door is the start vertex itself
        raise InternalError("walk returned to the root; labels mutated?")
    return 0


def count_full(int m, long k, int code, int rparam, cvals, long cap):
    """Exhaustive count of fully labelled cells of Kuhn(m, k)."""
    cdef double cbuf[64]
    cdef int ncvals = len(cvals)
    cdef int i
    for i in range(ncvals):
        cbuf[i] = cvals[i]

    cdef long base[64]
    cdef long vert[64]
    cdef int perm[64]
    cdef int n1 = m + 1
    cdef double kd = <double> k
    cdef long count = 0
    cdef long produced = 0
    cdef int r, c, t, lab, valid, pos
    cdef long tailv
    cdef unsigned long mask

    for c in range(n1):
        base[c] = 0
    base[0] = k

    while True:
        # all move permutations of this base, lexicographic start
        for c in range(m):
            perm[c] = c + 1
        while True:
            valid = 1
            mask = 0
            for c in range(n1):
                vert[c] = base[c]
            lab = _label(&vert[0], n1, kd, code, rparam, cbuf, ncvals)
            mask |= (<unsigned long> 1) << (lab - 1)
            for t in range(m):
                pos = perm[t]
                if vert[pos - 1] == 0:
                    valid = 0
                    break
                vert[pos - 1] -= 1
                vert[pos] += 1
                lab = _label(&vert[0], n1, kd, code, rparam, cbuf, ncvals)
                mask |= (<unsigned long> 1) << (lab - 1)
            if valid:
                produced += 1
                if produced > cap:
                    raise ResourceCapExceeded(f"cell enumeration exceeded cap {cap}", cap)
                if mask == ((<unsigned long> 1) << n1) - 1:
                    count += 1
            if not _next_permutation(&perm[0], m):
                break
        # next composition of k into n1 parts
        pos = -1
        for c in range(n1 - 1):
            if base[c] > 0:
                pos = c
        if pos < 0:
            break
        tailv = base[n1 - 1]
        base[n1 - 1] = 0
        base[pos] -= 1
        base[pos + 1] += tailv + 1
    return count


cdef int _next_permutation(int* a, int n):
    """Lexicographic successor in place; 0 when already the last."""
    cdef int i = n - 2
    cdef int j, tmp, lo, hi
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return 0
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    tmp = a[i]; a[i] = a[j]; a[j] = tmp
    lo = i + 1
    hi = n - 1
    while lo < hi:
        tmp = a[lo]; a[lo] = a[hi]; a[hi] = tmp
        lo += 1
        hi -= 1
    return 1
