"""Scenario files: JSON documents describing an economy, an initial allocation and run settings.

Schema::

    {
      "agents": ["a0", "a1"],
      "resources": ["x"],
      "preferences": {"a0": [[], ["x"]], "a1": [[], ["x"]]},   # worst first
      "initial": {"a0": ["x"], "a1": []},
      "dynamics": "bilateral",          # or "ideal"
      "policy": "first-in-order",       # or "seeded-random"
      "seed": null,
      "max_steps": null
    }

Bundles are lists of resource names; agents left out of ``initial`` hold
nothing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources as importlib_resources
from pathlib import Path

from .core import (
    DuplicateResource,
    Economy,
    EconomyError,
    NonPermutationPreferences,
    PreferenceOrder,
    ResourceTable,
    UnknownResource,
    validate_allocation,
    Allocation,
)
from .dynamics import BILATERAL, DYNAMICS, POLICY_NAMES, FirstInOrder, make_policy

BUNDLED = ("paper_thm44.json", "invariance_e1.json", "gift_e2.json")


class ScenarioParseError(EconomyError):
    pass


class UnknownAgent(EconomyError):
    def __init__(self, name, **kw):
        super().__init__(f"unknown agent {name!r}", **kw)
        self.name = name


@dataclass(frozen=True)
class RunSettings:
    dynamics: str = BILATERAL
    policy: str = FirstInOrder.name
    seed: int | None = None
    max_steps: int | None = None

    def make_policy(self):
        return make_policy(self.policy, self.seed)


@dataclass(frozen=True)
class Scenario:
    economy: Economy
    initial: Allocation
    settings: RunSettings


def bundled_path(name: str) -> Path:
    return Path(str(importlib_resources.files("coase") / "scenarios" / name))


def resolve(path) -> Path:
    """A filesystem path, falling back to a bundled scenario of the same name."""
    p = Path(path)
    if not p.exists() and p.name in BUNDLED and len(p.parts) == 1:
        return bundled_path(p.name)
    return p


def _expect(cond, msg, loc):
    if not cond:
        raise ScenarioParseError(msg, location=loc)


def _names_list(value, loc):
    _expect(isinstance(value, list) and all(isinstance(v, str) for v in value),
            "expected a list of resource names", loc)
    return value


def parse_scenario(doc, source: str = "<scenario>") -> Scenario:
    """Validate a decoded scenario document; errors carry ``source`` plus a key path."""
    _expect(isinstance(doc, dict), "scenario must be a JSON object", source)
    for key in ("agents", "resources", "preferences", "initial"):
        _expect(key in doc, f"missing required key {key!r}", source)
    known = {"agents", "resources", "preferences", "initial", "dynamics", "policy", "seed", "max_steps"}
    extra = sorted(set(doc) - known)
    _expect(not extra, f"unknown keys {extra}", source)

    agents = doc["agents"]
    _expect(isinstance(agents, list) and all(isinstance(a, str) and a for a in agents),
            "expected a list of agent names", f"{source}: agents")
    try:
        table = ResourceTable(tuple(_names_list(doc["resources"], f"{source}: resources")))
    except EconomyError as err:
        raise err.at(f"{source}: resources")

    prefs_doc = doc["preferences"]
    _expect(isinstance(prefs_doc, dict), "expected an object mapping agent -> ranked bundles",
            f"{source}: preferences")
    for name in prefs_doc:
        if name not in agents:
            raise UnknownAgent(name, location=f"{source}: preferences")
    profile = []
    for agent in agents:
        loc = f"{source}: preferences.{agent}"
        _expect(agent in prefs_doc, "no preferences given", loc)
        ranked = prefs_doc[agent]
        _expect(isinstance(ranked, list), "expected a list of bundles", loc)
        codes = []
        for r, names in enumerate(ranked):
            try:
                codes.append(table.bundle(_names_list(names, f"{loc}[{r}]")))
            except (UnknownResource, DuplicateResource) as err:
                raise err.at(f"{loc}[{r}]")
        if len(codes) != 1 << table.m or len(set(codes)) != len(codes):
            present = set(codes)
            dupes = sorted({c for c in codes if codes.count(c) > 1})
            raise NonPermutationPreferences(
                agent,
                missing=[table.names_of(b) for b in range(1 << table.m) if b not in present],
                duplicates=[table.names_of(b) for b in dupes],
                location=loc,
            )
        profile.append(PreferenceOrder(codes, agent=agent))
    try:
        economy = Economy(table, tuple(agents), tuple(profile))
    except EconomyError as err:
        raise err.at(f"{source}: agents")

    init_doc = doc["initial"]
    _expect(isinstance(init_doc, dict), "expected an object mapping agent -> owned resources",
            f"{source}: initial")
    for name in init_doc:
        if name not in agents:
            raise UnknownAgent(name, location=f"{source}: initial")
    holdings = []
    for agent in agents:
        loc = f"{source}: initial.{agent}"
        try:
            holdings.append(table.bundle(_names_list(init_doc.get(agent, []), loc)))
        except (UnknownResource, DuplicateResource) as err:
            raise err.at(loc)
    try:
        initial = validate_allocation(economy, holdings)
    except EconomyError as err:
        raise err.at(f"{source}: initial")

    dynamics = doc.get("dynamics", BILATERAL)
    _expect(dynamics in DYNAMICS, f"dynamics must be one of {list(DYNAMICS)}", f"{source}: dynamics")
    policy = doc.get("policy", FirstInOrder.name)
    _expect(policy in POLICY_NAMES, f"policy must be one of {list(POLICY_NAMES)}", f"{source}: policy")
    seed = doc.get("seed")
    _expect(seed is None or (isinstance(seed, int) and not isinstance(seed, bool)),
            "seed must be an integer or null", f"{source}: seed")
    max_steps = doc.get("max_steps")
    _expect(max_steps is None or (isinstance(max_steps, int) and not isinstance(max_steps, bool)
                                  and max_steps >= 1),
            "max_steps must be a positive integer or null", f"{source}: max_steps")
    return Scenario(economy, initial, RunSettings(dynamics, policy, seed, max_steps))


def load_scenario(path) -> Scenario:
    path = resolve(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ScenarioParseError(f"cannot read scenario: {err.strerror}", location=str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ScenarioParseError(err.msg, location=f"{path}:{err.lineno}:{err.colno}") from None
    return parse_scenario(doc, str(path))


def allocation_to_doc(e: Economy, alloc: Allocation) -> dict:
    return {agent: e.resources.names_of(h) for agent, h in zip(e.agents, alloc.holdings)}


def scenario_to_doc(s: Scenario) -> dict:
    e = s.economy
    return {
        "agents": list(e.agents),
        "resources": list(e.resources.names),
        "preferences": {
            agent: [e.resources.names_of(b) for b in p.ranking] for agent, p in zip(e.agents, e.profile)
        },
        "initial": allocation_to_doc(e, s.initial),
        "dynamics": s.settings.dynamics,
        "policy": s.settings.policy,
        "seed": s.settings.seed,
        "max_steps": s.settings.max_steps,
    }


def dump_scenario(s: Scenario, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_doc(s), indent=2) + "\n", encoding="utf-8")
