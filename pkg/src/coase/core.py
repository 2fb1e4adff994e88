"""Resources, bundles, strict preference orders, economies and allocations.

Bundles are plain ``int`` bitmasks over the resource table: bit ``k`` set
means resource ``k`` is in the bundle.  Preference orders are stored as a
ranked permutation of all ``2**m`` bundles (index 0 is least preferred), so
asymmetry, transitivity and totality over distinct pairs hold by
construction.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_RESOURCES = 16
DEFAULT_ALLOCATION_BUDGET = 10**7
DEFAULT_PREFERENCE_BUDGET = 10**7


class EconomyError(ValueError):
    """Base class for every validation failure raised by this package.

    ``location`` optionally points into the source document (a scenario
    file path plus a key path) that produced the bad value.
    """

    def __init__(self, message: str, *, location: str | None = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def at(self, location: str) -> "EconomyError":
        self.location = location
        return self

    def __str__(self) -> str:
        if self.location:
            return f"{self.location}: {self.message}"
        return self.message


class UnknownResource(EconomyError):
    def __init__(self, name: str, **kw):
        super().__init__(f"unknown resource {name!r}", **kw)
        self.name = name


class DuplicateResource(EconomyError):
    def __init__(self, name: str, **kw):
        super().__init__(f"resource {name!r} listed more than once", **kw)
        self.name = name


class InvalidBundle(EconomyError):
    pass


class NonPermutationPreferences(EconomyError):
    """A ranking that is not a permutation of the full power set."""

    def __init__(self, agent, missing=(), duplicates=(), extra=(), **kw):
        self.agent = agent
        self.missing = tuple(missing)
        self.duplicates = tuple(duplicates)
        self.extra = tuple(extra)
        parts = []
        if self.missing:
            parts.append(f"missing={list(self.missing)}")
        if self.duplicates:
            parts.append(f"duplicates={list(self.duplicates)}")
        if self.extra:
            parts.append(f"invalid={list(self.extra)}")
        super().__init__(
            f"preferences of {agent!r} are not a permutation of the power set ({', '.join(parts)})",
            **kw,
        )


class OverlappingOwnership(EconomyError):
    """Two agents hold the same resource."""

    def __init__(self, resource: str, i: int, j: int, **kw):
        super().__init__(f"resource {resource!r} owned by both agent {i} and agent {j}", **kw)
        self.resource = resource
        self.i = i
        self.j = j


class UnclaimedResource(EconomyError):
    """A resource held by nobody."""

    def __init__(self, resource: str, **kw):
        super().__init__(f"resource {resource!r} is owned by no agent", **kw)
        self.resource = resource


class BudgetExceeded(EconomyError):
    """An enumeration would exceed its configured size limit."""

    def __init__(self, what: str, size: int, budget: int, **kw):
        shown = str(size) if size < 10**30 else f"~1e{len(str(size)) - 1}"
        super().__init__(f"{what}: {shown} items exceeds budget {budget}", **kw)
        self.what = what
        self.size = size
        self.budget = budget


# ---------------------------------------------------------------------------
# resources and bundles


@dataclass(frozen=True)
class ResourceTable:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise EconomyError("the resource set must be nonempty")
        if len(names) > MAX_RESOURCES:
            raise EconomyError(f"at most {MAX_RESOURCES} resources are supported, got {len(names)}")
        seen = set()
        for name in names:
            if not isinstance(name, str) or not name:
                raise EconomyError(f"resource names must be nonempty strings, got {name!r}")
            if name in seen:
                raise DuplicateResource(name)
            seen.add(name)

    @property
    def m(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        """The bundle containing every resource."""
        return (1 << self.m) - 1

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: k for k, name in enumerate(self.names)}

    def bundle(self, names: Iterable[str]) -> int:
        return bundle_from_names(names, self)

    def names_of(self, bundle: int) -> list[str]:
        """Resource names in ``bundle``, in table order."""
        check_bundle(bundle, self.m)
        return [name for k, name in enumerate(self.names) if bundle >> k & 1]

    def format(self, bundle: int) -> str:
        return "{" + ",".join(self.names_of(bundle)) + "}"


def bundle_from_names(names: Iterable[str], table: ResourceTable) -> int:
    bundle = 0
    for name in names:
        try:
            k = table.index[name]
        except (KeyError, TypeError):
            raise UnknownResource(name) from None
        if bundle >> k & 1:
            raise DuplicateResource(name)
        bundle |= 1 << k
    return bundle


def check_bundle(bundle: int, m: int) -> int:
    if not isinstance(bundle, int) or isinstance(bundle, bool) or bundle < 0 or bundle >> m:
        raise InvalidBundle(f"{bundle!r} is not a bundle over {m} resources")
    return bundle


def submasks(bundle: int) -> Iterator[int]:
    """All sub-bundles of ``bundle`` in ascending numeric order, starting with 0."""
    sub = 0
    while True:
        yield sub
        sub = (sub - bundle) & bundle
        if sub == 0:
            return


# ---------------------------------------------------------------------------
# preferences


class PreferenceOrder:
    """A strict total order over every bundle of ``m`` resources.

    ``ranking[r]`` is the bundle of rank ``r``; ``ranks[b]`` is the rank of
    bundle ``b``.  Higher rank means more preferred.
    """

    __slots__ = ("ranking", "ranks", "m")

    def __init__(self, ranking: Sequence[int], agent=None):
        ranking = tuple(ranking)
        size = len(ranking)
        m = size.bit_length() - 1
        if size < 2 or size != 1 << m:
            raise NonPermutationPreferences(
                agent, extra=[f"length {size} is not a power of two >= 2"]
            )
        ranks = [-1] * size
        duplicates, extra = [], []
        for r, b in enumerate(ranking):
            if not isinstance(b, int) or isinstance(b, bool) or not 0 <= b < size:
                extra.append(b)
            elif ranks[b] >= 0:
                duplicates.append(b)
            else:
                ranks[b] = r
        if duplicates or extra:
            missing = [b for b in range(size) if ranks[b] < 0]
            raise NonPermutationPreferences(agent, missing, duplicates, extra)
        self.ranking = ranking
        self.ranks = tuple(ranks)
        self.m = m

    def rank(self, bundle: int) -> int:
        return self.ranks[check_bundle(bundle, self.m)]

    def prefers(self, a: int, b: int) -> bool:
        """True iff ``b`` is strictly preferred over ``a``."""
        return self.ranks[a] < self.ranks[b]

    def __eq__(self, other):
        return isinstance(other, PreferenceOrder) and self.ranking == other.ranking

    def __hash__(self):
        return hash(self.ranking)

    def __repr__(self):
        return f"PreferenceOrder({list(self.ranking)})"

    def __reduce__(self):
        return (PreferenceOrder, (self.ranking,))


def rank(prefs: PreferenceOrder, bundle: int) -> int:
    return prefs.rank(bundle)


def prefers(prefs: PreferenceOrder, a: int, b: int) -> bool:
    """Whether the agent owning ``prefs`` strictly prefers ``b`` over ``a``."""
    check_bundle(a, prefs.m)
    check_bundle(b, prefs.m)
    return prefs.prefers(a, b)


def enumerate_preference_orders(m: int, budget: int = DEFAULT_PREFERENCE_BUDGET) -> Iterator[PreferenceOrder]:
    """Every strict order over the ``2**m`` bundles, in lexicographic permutation order."""
    if not 1 <= m <= MAX_RESOURCES:
        raise EconomyError(f"resource count must be in [1, {MAX_RESOURCES}], got {m}")
    size = 1 << m
    count = math.factorial(size)
    if count > budget:
        raise BudgetExceeded(f"preference orders ((2^{m})!)", count, budget)
    return (PreferenceOrder(p) for p in itertools.permutations(range(size)))


def count_preference_orders(m: int) -> int:
    return math.factorial(1 << m)


def preference_order_at(m: int, index: int) -> PreferenceOrder:
    """The ``index``-th element of :func:`enumerate_preference_orders` (factorial-base unranking)."""
    size = 1 << m
    if not 0 <= index < math.factorial(size):
        raise EconomyError(f"preference order index {index} out of range for m={m}")
    pool = list(range(size))
    ranking = []
    for k in range(size - 1, -1, -1):
        digit, index = divmod(index, math.factorial(k))
        ranking.append(pool.pop(digit))
    return PreferenceOrder(ranking)


# ---------------------------------------------------------------------------
# economies


@dataclass(frozen=True)
class Economy:
    resources: ResourceTable
    agents: tuple[str, ...]
    profile: tuple[PreferenceOrder, ...]

    def __post_init__(self):
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "profile", tuple(self.profile))
        if len(self.agents) < 2:
            raise EconomyError(f"an economy needs at least 2 agents, got {len(self.agents)}")
        if len(set(self.agents)) != len(self.agents):
            raise EconomyError("agent names must be distinct")
        if len(self.profile) != len(self.agents):
            raise EconomyError(
                f"profile has {len(self.profile)} preference orders for {len(self.agents)} agents"
            )
        for name, prefs in zip(self.agents, self.profile):
            if not isinstance(prefs, PreferenceOrder):
                raise EconomyError(f"preferences of {name!r} must be a PreferenceOrder")
            if prefs.m != self.resources.m:
                raise EconomyError(
                    f"preferences of {name!r} cover {prefs.m} resources, economy has {self.resources.m}"
                )

    @classmethod
    def from_rankings(cls, rankings: Sequence[Sequence[int]], resources: Sequence[str] | None = None,
                      agents: Sequence[str] | None = None) -> "Economy":
        """Build an economy from raw bundle rankings (worst first).

        Resource names default to ``r0, r1, ...`` and agent names to ``a0, a1, ...``.
        """
        m = len(rankings[0]).bit_length() - 1
        if resources is None:
            resources = [f"r{k}" for k in range(m)]
        if agents is None:
            agents = [f"a{i}" for i in range(len(rankings))]
        profile = tuple(PreferenceOrder(r, agent=a) for r, a in zip(rankings, agents))
        return cls(ResourceTable(tuple(resources)), tuple(agents), profile)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def m(self) -> int:
        return self.resources.m

    @property
    def bundle_count(self) -> int:
        return 1 << self.m

    @property
    def allocation_count(self) -> int:
        return self.n ** self.m

    @property
    def potential_bound(self) -> int:
        """Upper bound on the sum of own-bundle ranks."""
        return self.n * ((1 << self.m) - 1)

    @cached_property
    def rank_table(self) -> tuple[int, ...]:
        """Flattened ``n * 2**m`` rank lookup: entry ``i * 2**m + b`` is agent i's rank of b."""
        return tuple(itertools.chain.from_iterable(p.ranks for p in self.profile))

    def __reduce__(self):
        return (Economy, (self.resources, self.agents, self.profile))


def random_economy(n: int, m: int, seed: int) -> Economy:
    """Deterministic random economy.

    Generator: one ``random.Random(seed)`` (Mersenne Twister); for each agent
    in order, the list ``[0, 1, ..., 2**m - 1]`` of bundle codes is shuffled
    with ``Random.shuffle`` and used as that agent's ranking, worst first.
    """
    if n < 2:
        raise EconomyError(f"an economy needs at least 2 agents, got {n}")
    if not 1 <= m <= MAX_RESOURCES:
        raise EconomyError(f"resource count must be in [1, {MAX_RESOURCES}], got {m}")
    rng = random.Random(seed)
    rankings = []
    for _ in range(n):
        order = list(range(1 << m))
        rng.shuffle(order)
        rankings.append(order)
    return Economy.from_rankings(rankings)


# ---------------------------------------------------------------------------
# allocations


@dataclass(frozen=True)
class Allocation:
    """An owner assignment: ``holdings[i]`` is agent i's bundle.

    The canonical code reads the owner of each resource as one base-``n``
    digit, resource 0 being the most significant digit.  Ascending codes are
    the lexicographic order on the owner tuple.
    """

    holdings: tuple[int, ...]
    m: int = field(compare=True)

    def __post_init__(self):
        object.__setattr__(self, "holdings", tuple(self.holdings))

    @property
    def n(self) -> int:
        return len(self.holdings)

    def __getitem__(self, i: int) -> int:
        return self.holdings[i]

    def __len__(self):
        return len(self.holdings)

    def __iter__(self):
        return iter(self.holdings)

    def owners(self) -> tuple[int, ...]:
        out = [-1] * self.m
        for i, h in enumerate(self.holdings):
            for k in range(self.m):
                if h >> k & 1:
                    out[k] = i
        return tuple(out)

    @cached_property
    def code(self) -> int:
        n = self.n
        code = 0
        for owner in self.owners():
            code = code * n + owner
        return code

    @classmethod
    def from_owners(cls, owners: Sequence[int], n: int) -> "Allocation":
        holdings = [0] * n
        for k, owner in enumerate(owners):
            holdings[owner] |= 1 << k
        return cls(tuple(holdings), len(owners))

    @classmethod
    def from_code(cls, code: int, n: int, m: int) -> "Allocation":
        if not 0 <= code < n**m:
            raise EconomyError(f"allocation code {code} out of range for n={n}, m={m}")
        holdings = [0] * n
        for k in range(m - 1, -1, -1):
            code, owner = divmod(code, n)
            holdings[owner] |= 1 << k
        return cls(tuple(holdings), m)

    def describe(self, table: ResourceTable) -> str:
        return "(" + ",".join(table.format(h) for h in self.holdings) + ")"


def validate_allocation(e: Economy, holdings: Sequence[int]) -> Allocation:
    """Return the holdings as an :class:`Allocation` or raise the violated ownership rule.

    Raises :class:`OverlappingOwnership` when two agents share a resource and
    :class:`UnclaimedResource` when a resource has no owner.
    """
    holdings = tuple(holdings)
    if len(holdings) != e.n:
        raise EconomyError(f"allocation has {len(holdings)} bundles for {e.n} agents")
    owner = [-1] * e.m
    for i, h in enumerate(holdings):
        check_bundle(h, e.m)
        for k in range(e.m):
            if h >> k & 1:
                if owner[k] >= 0:
                    raise OverlappingOwnership(e.resources.names[k], owner[k], i)
                owner[k] = i
    for k, o in enumerate(owner):
        if o < 0:
            raise UnclaimedResource(e.resources.names[k])
    return Allocation(holdings, e.m)


def allocation_from_names(e: Economy, holdings: Sequence[Iterable[str]]) -> Allocation:
    return validate_allocation(e, [e.resources.bundle(names) for names in holdings])


def check_allocation_budget(e: Economy, budget: int = DEFAULT_ALLOCATION_BUDGET) -> int:
    count = e.allocation_count
    if count > budget:
        raise BudgetExceeded(f"allocations (n^m = {e.n}^{e.m})", count, budget)
    return count


def enumerate_allocations(e: Economy, budget: int = DEFAULT_ALLOCATION_BUDGET) -> Iterator[Allocation]:
    """All ``n**m`` allocations in ascending canonical code order."""
    check_allocation_budget(e, budget)
    n = e.n
    return (Allocation.from_owners(owners, n) for owners in itertools.product(range(n), repeat=e.m))
