"""Pure-Python kernels (reference implementation and fallback)."""

from operator import add as _add


def mul_terms(ta, tb, add, mul, is_zero, mod=0):
    """Product of two sparse term dicts ``{exponent tuple: coefficient}``.

    ``mod > 0`` means coefficients are ints reduced modulo ``mod``; the
    ring callbacks are then ignored.
    """
    out = {}
    get = out.get
    if mod:
        for ea, ca in ta.items():
            for eb, cb in tb.items():
                e = tuple(map(_add, ea, eb))
                out[e] = (get(e, 0) + ca * cb) % mod
        return {e: c for e, c in out.items() if c}
    for ea, ca in ta.items():
        for eb, cb in tb.items():
            e = tuple(map(_add, ea, eb))
            c = mul(ca, cb)
            prev = get(e)
            out[e] = c if prev is None else add(prev, c)
    return {e: c for e, c in out.items() if not is_zero(c)}


def aut_search(n, r, consts, order, schedule, limit):
    """Backtracking search for unital multiplicative linear maps mod ``n``.

    ``consts`` is the flat table ``c[a*r*r + b*r + g]``; ``order`` lists the
    basis indices (other than 0) in assignment order; ``schedule[s]`` holds
    the pairs ``(a, b)`` whose relation becomes checkable once
    ``order[s]`` is assigned.  Returns up to ``limit`` solutions, each a list
    of ``r`` image vectors.
    """
    images = [None] * r
    images[0] = [1] + [0] * (r - 1)
    found = []
    nsteps = len(order)

    def product(x, y):
        out = [0] * r
        for i in range(r):
            xi = x[i]
            if not xi:
                continue
            for j in range(r):
                yj = y[j]
                if not yj:
                    continue
                base = (i * r + j) * r
                xy = xi * yj
                for g in range(r):
                    c = consts[base + g]
                    if c:
                        out[g] += xy * c
        return [v % n for v in out]

    def holds(a, b):
        lhs = product(images[a], images[b])
        rhs = [0] * r
        base = (a * r + b) * r
        for g in range(r):
            c = consts[base + g]
            if c:
                img = images[g]
                for i in range(r):
                    rhs[i] += c * img[i]
        return all((rhs[i] - lhs[i]) % n == 0 for i in range(r))

    def rec(step):
        if len(found) >= limit:
            return
        if step == nsteps:
            found.append([list(v) for v in images])
            return
        idx = order[step]
        vec = [0] * r
        while True:
            images[idx] = vec
            if all(holds(a, b) for a, b in schedule[step]):
                rec(step + 1)
                if len(found) >= limit:
                    return
            # odometer increment
            vec = list(vec)
            pos = 0
            while pos < r:
                vec[pos] += 1
                if vec[pos] < n:
                    break
                vec[pos] = 0
                pos += 1
            if pos == r:
                break
        images[idx] = None

    rec(0)
    return found
