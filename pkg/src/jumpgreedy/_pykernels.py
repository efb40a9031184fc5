"""Pure-Python versions of the exhaustive axiom scans.

Same signatures and scan order as the compiled ``_ckernels`` module.
"""


def jexc_scan(grid, pts, strides):
    """Scan (x, y, s) lexicographically for a J-EXC violation.

    ``grid`` is a flat 0/1 membership array over the bounding box, ``pts`` the
    member points in box-offset coordinates (sorted), ``strides`` the flat
    index strides. Returns ``(a, b, i, sign)`` with row indices into ``pts``,
    or None.
    """
    grid = bytes(grid)
    rows = [tuple(int(v) for v in row) for row in pts]
    strides = [int(v) for v in strides]
    n = len(strides)
    flat = [sum(c * st for c, st in zip(row, strides)) for row in rows]
    for a, x in enumerate(rows):
        fx = flat[a]
        for b, y in enumerate(rows):
            if a == b:
                continue
            for i in range(n):
                d = y[i] - x[i]
                if d == 0:
                    continue
                sign = 1 if d > 0 else -1
                fs = fx + sign * strides[i]
                if grid[fs]:
                    continue
                found = False
                for j in range(n):
                    dj = y[j] - x[j] - (sign if j == i else 0)
                    if dj == 0:
                        continue
                    if grid[fs + (strides[j] if dj > 0 else -strides[j])]:
                        found = True
                        break
                if not found:
                    return (a, b, i, sign)
    return None


def exchange_scan(member, family, n):
    """Scan (X, Y, i) for a symmetric-exchange violation over bitmask families.

    ``member`` has length 2**n with 1 at feasible masks, ``family`` is the
    sorted list of feasible masks. Returns ``(X, Y, i)`` or None.
    """
    member = bytes(member)
    fam = [int(v) for v in family]
    for x in fam:
        for y in fam:
            diff = x ^ y
            if not diff:
                continue
            for i in range(n):
                bi = 1 << i
                if not diff & bi:
                    continue
                if member[x ^ bi]:
                    continue
                for j in range(n):
                    bj = 1 << j
                    if diff & bj and j != i and member[x ^ bi ^ bj]:
                        break
                else:
                    return (x, y, i)
    return None
