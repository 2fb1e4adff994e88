"""Pure-Python hot loops; same contract as the compiled ``_speedups`` module.

All functions take the flattened rank table of an economy (entry
``i * 2**m + b`` is agent i's rank of bundle b) and the current holdings.
"""


def bilateral_trades(ranks, n, m, holdings):
    """All (i, j, r1, r2) with i < j satisfying every double-coincidence conjunct, sorted.

    (j, i, r2, r1) is the same swap seen from the other side, so only i < j
    is reported.
    """
    size = 1 << m
    out = []
    for i in range(n):
        hi = holdings[i]
        base_i = i * size
        cur_i = ranks[base_i + hi]
        for j in range(i + 1, n):
            hj = holdings[j]
            base_j = j * size
            cur_j = ranks[base_j + hj]
            r1 = 0
            while True:
                keep_i = hi & ~r1
                r1_for_j = ranks[base_j + r1]
                r1_for_i = ranks[base_i + r1]
                r2 = 0
                while True:
                    if (ranks[base_i + r2] > r1_for_i
                            and r1_for_j > ranks[base_j + r2]
                            and ranks[base_i + (keep_i | r2)] > cur_i
                            and ranks[base_j + ((hj & ~r2) | r1)] > cur_j):
                        out.append((i, j, r1, r2))
                    r2 = (r2 - hj) & hj
                    if r2 == 0:
                        break
                r1 = (r1 - hi) & hi
                if r1 == 0:
                    break
    return out


def improving_allocations(ranks, n, m, holdings, limit=0):
    """Codes of allocations nobody ranks lower and somebody ranks higher.

    Scans codes in ascending order; stops after ``limit`` hits when
    ``limit > 0``.
    """
    size = 1 << m
    cur = [ranks[i * size + holdings[i]] for i in range(n)]
    bases = [i * size for i in range(n)]
    owners = [0] * m
    bundles = [0] * n
    bundles[0] = size - 1
    total = n ** m
    out = []
    for code in range(total):
        better = False
        for i in range(n):
            r = ranks[bases[i] + bundles[i]]
            c = cur[i]
            if r < c:
                break
            if r > c:
                better = True
        else:
            if better:
                out.append(code)
                if limit and len(out) >= limit:
                    return out
        # advance the odometer; resource m-1 is the least significant digit
        k = m - 1
        while k >= 0:
            bit = 1 << k
            o = owners[k]
            bundles[o] ^= bit
            if o + 1 < n:
                owners[k] = o + 1
                bundles[o + 1] |= bit
                break
            owners[k] = 0
            bundles[0] |= bit
            k -= 1
    return out


def potential(ranks, n, m, holdings):
    size = 1 << m
    return sum(ranks[i * size + holdings[i]] for i in range(n))
