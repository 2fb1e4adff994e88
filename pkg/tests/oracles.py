"""Slow, obviously-correct reference implementations used only by the tests.

They work on frozensets of resource names and look ranks up with
``ranking.index``; nothing here touches the kernels or rank tables.
"""

import itertools


def as_set(e, bundle):
    return frozenset(name for k, name in enumerate(e.resources.names) if bundle >> k & 1)


def all_sets(e):
    names = e.resources.names
    return [frozenset(c) for r in range(len(names) + 1) for c in itertools.combinations(names, r)]


def set_rank(e, agent, s):
    ranking = [as_set(e, b) for b in e.profile[agent].ranking]
    return ranking.index(frozenset(s))


def likes_better(e, agent, a, b):
    """agent strictly prefers set b over set a"""
    return set_rank(e, agent, a) < set_rank(e, agent, b)


def to_code(e, s):
    return sum(1 << e.resources.names.index(x) for x in s)


def brute_bilateral_trades(e, alloc):
    holdings = [as_set(e, h) for h in alloc.holdings]
    found = []
    for i, j in itertools.permutations(range(e.n), 2):
        for r1 in all_sets(e):
            for r2 in all_sets(e):
                if not (r1 <= holdings[i] and r2 <= holdings[j]):
                    continue
                if not (likes_better(e, i, r1, r2) and likes_better(e, j, r2, r1)):
                    continue
                new_i = (holdings[i] - r1) | r2
                new_j = (holdings[j] - r2) | r1
                if likes_better(e, i, holdings[i], new_i) and likes_better(e, j, holdings[j], new_j):
                    found.append((i, j, to_code(e, r1), to_code(e, r2)))
    # (j, i, r2, r1) is the same swap as (i, j, r1, r2); keep the i < j form
    canonical = {t if t[0] < t[1] else (t[1], t[0], t[3], t[2]) for t in found}
    assert len(canonical) * 2 == len(found)
    return sorted(canonical)


def owner_tuples(e):
    """Owner tuples in lexicographic order (resource 0 first)."""
    return list(itertools.product(range(e.n), repeat=e.m))


def sets_from_owners(e, owners):
    out = [set() for _ in range(e.n)]
    for k, o in enumerate(owners):
        out[o].add(e.resources.names[k])
    return [frozenset(s) for s in out]


def brute_improvements(e, alloc):
    """Owner tuples of allocations that help someone and hurt nobody."""
    current = [as_set(e, h) for h in alloc.holdings]
    out = []
    for owners in owner_tuples(e):
        cand = sets_from_owners(e, owners)
        if cand == current:
            continue
        worse = any(likes_better(e, q, cand[q], current[q]) for q in range(e.n))
        better = any(likes_better(e, q, current[q], cand[q]) for q in range(e.n))
        if better and not worse:
            out.append(owners)
    return out


def owners_of(alloc):
    return alloc.owners()
