"""Typed, polarized promise graphs between autonomous agents.

Agents declare promises: an offer (+) of some behaviour type toward a
receiver, or an acceptance (-) of such behaviour from a giver. A matched
offer/accept pair of one type, running in opposite directions, whose
body constraints overlap is a binding - the unit of cooperation and of
value. Promises may carry conditions naming behaviour types the giver
must itself be supplied with first; conditional promises are inert until
reduce_conditionals discharges them.

On top of the raw graph sit the derived views used by the scaling
model: adjacency matrices, Metcalfe-style value totals, reputation,
superagent aggregation (interior promises hidden), community membership
via mutual membership promises, and classification of an offer into one
of the meanfield dependency classes.

Graphs are immutable after construction; every operation returns new
values and is safe to call concurrently.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Union

import numpy as np

from .errors import DomainError, UnknownAgentError
from .meanfield import ScalingClass

__all__ = [
    "Agent",
    "Polarity",
    "Promise",
    "Binding",
    "PromiseGraph",
    "adjacency",
    "degree",
    "find_bindings",
    "reduce_conditionals",
    "valuation",
    "total_value",
    "mesh_density",
    "largest_binding_component",
    "reputation",
    "aggregate",
    "classify_pattern",
    "community_members",
]

# Conventional catch-all body token; it has no special algebra, it is just
# a token both sides can name so their constraint sets overlap.
ANY_BODY = "*"


@dataclass(frozen=True)
class Agent:
    """An autonomous agent with an impartial promise-keeping assessment in [0, 1]."""

    id: str
    assessment: float = 1.0

    def __post_init__(self) -> None:
        if not isinstance(self.id, str) or not self.id:
            raise DomainError(f"agent id must be a non-empty string, got {self.id!r}")
        if not 0 <= self.assessment <= 1:
            raise DomainError(f"assessment must be in [0, 1], got {self.assessment}")
        object.__setattr__(self, "assessment", float(self.assessment))


class Polarity(enum.Enum):
    OFFER = "+"
    ACCEPT = "-"


@dataclass(frozen=True)
class Promise:
    """One declared intention: giver -> receiver, a type, a polarity, a body.

    constraint is the finite, non-empty body constraint set; a binding
    needs the offer and accept sets to intersect. condition lists
    behaviour types the giver must be supplied with before this promise
    takes effect (conjunctive, stored sorted). A giver may promise to
    itself.
    """

    giver: str
    receiver: str
    type_tag: str
    polarity: Polarity
    constraint: frozenset = frozenset({ANY_BODY})
    condition: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraint", frozenset(self.constraint))
        object.__setattr__(self, "condition", tuple(sorted(set(self.condition))))
        if not self.constraint:
            raise DomainError("constraint set must be non-empty")
        if not isinstance(self.polarity, Polarity):
            raise DomainError(f"polarity must be a Polarity, got {self.polarity!r}")

    @property
    def conditional(self) -> bool:
        return bool(self.condition)

    def _key(self):
        return (self.giver, self.receiver, self.type_tag, self.polarity.value, self.condition)

    def _sort_key(self):
        return (
            self.giver,
            self.receiver,
            self.type_tag,
            self.polarity.value,
            tuple(sorted(self.constraint)),
            self.condition,
        )


@dataclass(frozen=True)
class Binding:
    """A matched offer/accept pair of one type with overlapping bodies."""

    offer: Promise
    accept: Promise
    effective_constraint: frozenset


Calibration = Union[float, Mapping[str, float]]


class PromiseGraph:
    """Immutable set of agents and promises plus a per-type currency calibration.

    Duplicate promises with identical (giver, receiver, type, polarity,
    condition) collapse into one, with their constraint sets unioned:
    adjacency is 0/1, a repeated declaration is not a stronger link.
    calibration is either one scalar applied to every type or a mapping
    from type tag to currency value.
    """

    def __init__(self, agents: Iterable[Agent], promises: Iterable[Promise] = (), calibration: Calibration = 1.0):
        agent_map: dict[str, Agent] = {}
        for a in agents:
            if a.id in agent_map:
                raise DomainError(f"duplicate agent id {a.id!r}")
            agent_map[a.id] = a
        merged: dict[tuple, Promise] = {}
        for p in promises:
            for endpoint in (p.giver, p.receiver):
                if endpoint not in agent_map:
                    raise UnknownAgentError(f"promise references unknown agent {endpoint!r}")
            key = p._key()
            if key in merged:
                merged[key] = replace(p, constraint=merged[key].constraint | p.constraint)
            else:
                merged[key] = p
        self._agents = agent_map
        self._promises = tuple(sorted(merged.values(), key=Promise._sort_key))
        self._calibration = calibration

    @property
    def agents(self) -> tuple:
        return tuple(self._agents.values())

    @property
    def promises(self) -> tuple:
        return self._promises

    @property
    def calibration(self) -> Calibration:
        return self._calibration

    def agent_ids(self) -> list[str]:
        """All agent ids, sorted; the row/column order used by adjacency."""
        return sorted(self._agents)

    def agent(self, agent_id: str) -> Agent:
        try:
            return self._agents[agent_id]
        except KeyError:
            raise UnknownAgentError(f"unknown agent {agent_id!r}") from None

    def has_agent(self, agent_id: str) -> bool:
        return agent_id in self._agents

    def calibration_for(self, type_tag: str) -> float:
        if isinstance(self._calibration, Mapping):
            try:
                return float(self._calibration[type_tag])
            except KeyError:
                raise DomainError(f"no calibration for promise type {type_tag!r}") from None
        return float(self._calibration)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PromiseGraph):
            return NotImplemented
        return (
            self._agents == other._agents
            and self._promises == other._promises
            and self._calibration == other._calibration
        )


def adjacency(graph: PromiseGraph, type_tag: str) -> np.ndarray:
    """0/1 matrix over sorted agent ids: entry (i, j) = 1 iff any promise of
    this type runs from agent i to agent j. Unknown types give the zero matrix."""
    ids = graph.agent_ids()
    index = {a: i for i, a in enumerate(ids)}
    out = np.zeros((len(ids), len(ids)), dtype=np.int64)
    for p in graph.promises:
        if p.type_tag == type_tag:
            out[index[p.giver], index[p.receiver]] = 1
    return out


def degree(graph: PromiseGraph, agent_id: str) -> int:
    """Number of distinct (receiver, type) pairs this agent promises toward."""
    graph.agent(agent_id)
    return len({(p.receiver, p.type_tag) for p in graph.promises if p.giver == agent_id})


def find_bindings(graph: PromiseGraph) -> list[Binding]:
    """All bindings, sorted by (offer giver, offer receiver, type).

    A binding pairs an unconditional offer S -> R with an unconditional
    accept R -> S of the same type whose constraint sets intersect;
    the intersection is the binding's effective constraint. Conditional
    promises never bind (reduce them first).
    """
    offers: dict[tuple, Promise] = {}
    accepts: dict[tuple, Promise] = {}
    for p in graph.promises:
        if p.conditional:
            continue
        key = (p.giver, p.receiver, p.type_tag)
        if p.polarity is Polarity.OFFER:
            offers[key] = p
        else:
            accepts[key] = p
    out = []
    for (giver, receiver, tag), off in sorted(offers.items()):
        acc = accepts.get((receiver, giver, tag))
        if acc is None:
            continue
        effective = off.constraint & acc.constraint
        if effective:
            out.append(Binding(off, acc, effective))
    return out


def _supply_maps(promises):
    # (giver, type) -> receivers it accepts from, and the set of
    # unconditional offer triples, both restricted to unconditional promises.
    accepts_from: dict[tuple, set] = {}
    offer_triples: set = set()
    for p in promises:
        if p.conditional:
            continue
        if p.polarity is Polarity.ACCEPT:
            accepts_from.setdefault((p.giver, p.type_tag), set()).add(p.receiver)
        else:
            offer_triples.add((p.giver, p.receiver, p.type_tag))
    return accepts_from, offer_triples


def _is_supplied(giver: str, dep: str, accepts_from, offer_triples) -> bool:
    # Supplied means: some k with giver -dep-> k accepted and k +dep-> giver offered.
    for k in accepts_from.get((giver, dep), ()):
        if (k, giver, dep) in offer_triples:
            return True
    return False


def reduce_conditionals(graph: PromiseGraph) -> PromiseGraph:
    """Discharge assisted conditional offers; idempotent.

    A conditional offer +S|d1,d2,... becomes the unconditional +S once,
    for every named dependency d, the giver unconditionally accepts d
    from some agent that unconditionally offers d back. Iterates to a
    fixed point so chains of conditions resolve; unsatisfied
    conditionals (and conditional accepts) are retained unchanged.
    """
    promises = list(graph.promises)
    while True:
        accepts_from, offer_triples = _supply_maps(promises)
        changed = False
        next_promises = []
        for p in promises:
            if (
                p.conditional
                and p.polarity is Polarity.OFFER
                and all(_is_supplied(p.giver, d, accepts_from, offer_triples) for d in p.condition)
            ):
                next_promises.append(replace(p, condition=()))
                changed = True
            else:
                next_promises.append(p)
        promises = next_promises
        if not changed:
            break
    return PromiseGraph(graph.agents, promises, graph.calibration)


def valuation(graph: PromiseGraph, binding: Binding) -> float:
    """Currency value of one binding: c_S * alpha_giver * alpha_receiver."""
    c = graph.calibration_for(binding.offer.type_tag)
    giver = graph.agent(binding.offer.giver)
    receiver = graph.agent(binding.offer.receiver)
    return c * giver.assessment * receiver.assessment


def total_value(graph: PromiseGraph) -> float:
    """Total network value: the sum of binding valuations after reduction.

    For a complete positive mesh of N unit-assessment agents this is
    c * N * (N - 1); thinning the mesh to a fraction rho of the possible
    directed pairs scales it to c * rho * N * (N - 1). Summed with
    math.fsum so the result is independent of binding order.
    """
    reduced = reduce_conditionals(graph)
    return math.fsum(valuation(reduced, b) for b in find_bindings(reduced))


def mesh_density(graph: PromiseGraph) -> float:
    """Bindings as a fraction of the N(N-1) possible directed pairs.

    Measured on the graph as given (reduce first if conditional promises
    should count). Zero for graphs with fewer than two agents.
    """
    n = len(graph.agents)
    if n < 2:
        return 0.0
    return len(find_bindings(graph)) / (n * (n - 1))


def largest_binding_component(graph: PromiseGraph) -> int:
    """Size of the largest set of agents connected through bindings.

    Bindings are treated as undirected edges; an agent with no bindings
    forms a component of size 1. Empty graph gives 0.
    """
    ids = graph.agent_ids()
    if not ids:
        return 0
    parent = {a: a for a in ids}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for b in find_bindings(graph):
        ra, rb = find(b.offer.giver), find(b.offer.receiver)
        if ra != rb:
            parent[ra] = rb
    sizes: dict[str, int] = {}
    for a in ids:
        root = find(a)
        sizes[root] = sizes.get(root, 0) + 1
    return max(sizes.values())


def reputation(graph: PromiseGraph, agent_id: str) -> int:
    """Count of distinct agents that promise acceptance toward this agent."""
    graph.agent(agent_id)
    return len({p.giver for p in graph.promises if p.polarity is Polarity.ACCEPT and p.receiver == agent_id})


def _interior_chain(members, accepts_from, offers_by, giver, dep, visited):
    # Agents forming an interior supply chain for one dependency of giver,
    # or None when no member supplies it. The giver's accept must be
    # unconditional; the provider's offer may itself be conditional when its
    # own conditions resolve interiorly (recursive, cycle-safe).
    for k in sorted(accepts_from.get((giver, dep), ())):
        if k not in members:
            continue
        offer = offers_by.get((k, giver, dep))
        if offer is None:
            continue
        if not offer.condition:
            return {k}
        if (k, dep) in visited:
            continue
        chain = {k}
        ok = True
        for e in offer.condition:
            sub = _interior_chain(members, accepts_from, offers_by, k, e, visited | {(k, dep)})
            if sub is None:
                ok = False
                break
            chain |= sub
        if ok:
            return chain
    return None


def aggregate(graph: PromiseGraph, members: Iterable[str], super_id: str) -> PromiseGraph:
    """Collapse a set of member agents into one superagent.

    Promises entirely among members disappear from the exterior view.
    Promises crossing the boundary are re-attached to super_id, with
    duplicates collapsing per (counterparty, type, polarity) exactly as
    graph construction already guarantees. Conditions on outgoing
    crossing promises that are satisfied inside the member set are
    discharged, since their suppliers are no longer visible; the
    superagent's assessment is then the product of the assessments along
    those interior supply chains (givers included). When no interior
    chain feeds any exterior promise, the assessment defaults to the
    mean of the member assessments. Structure among non-members is
    untouched.
    """
    member_set = set(members)
    if not member_set:
        raise DomainError("member set must be non-empty")
    for m in member_set:
        graph.agent(m)
    if graph.has_agent(super_id) or super_id in member_set:
        raise DomainError(f"superagent id {super_id!r} collides with an existing agent")

    accepts_from: dict[tuple, set] = {}
    offers_by: dict[tuple, Promise] = {}
    for p in graph.promises:
        if p.polarity is Polarity.ACCEPT and not p.conditional:
            accepts_from.setdefault((p.giver, p.type_tag), set()).add(p.receiver)
        elif p.polarity is Polarity.OFFER:
            offers_by[(p.giver, p.receiver, p.type_tag)] = p

    chain_agents: set = set()
    new_promises = []
    for p in graph.promises:
        giver_in = p.giver in member_set
        receiver_in = p.receiver in member_set
        if giver_in and receiver_in:
            continue
        if not giver_in and not receiver_in:
            new_promises.append(p)
            continue
        if giver_in:
            residual = []
            for d in p.condition:
                chain = _interior_chain(member_set, accepts_from, offers_by, p.giver, d, frozenset())
                if chain is None:
                    residual.append(d)
                else:
                    chain_agents |= chain | {p.giver}
            new_promises.append(replace(p, giver=super_id, condition=tuple(residual)))
        else:
            new_promises.append(replace(p, receiver=super_id))

    if chain_agents:
        alpha = math.prod(graph.agent(a).assessment for a in sorted(chain_agents))
    else:
        alpha = math.fsum(graph.agent(m).assessment for m in member_set) / len(member_set)
    agents = [a for a in graph.agents if a.id not in member_set]
    agents.append(Agent(super_id, alpha))
    return PromiseGraph(agents, new_promises, graph.calibration)


def community_members(graph: PromiseGraph, authority: str, membership_type: str = "member") -> set:
    """Agents bound to the authority by a mutual membership promise.

    A is a member when A offers the membership type to the authority and
    the authority accepts it from A (registration plus acceptance, as a
    binding). The authority itself is a member only if it promises both
    sides to itself.
    """
    graph.agent(authority)
    return {
        b.offer.giver
        for b in find_bindings(graph)
        if b.offer.type_tag == membership_type and b.offer.receiver == authority
    }


def classify_pattern(
    graph: PromiseGraph,
    output_promise: Promise,
    *,
    scarcity_threshold: float = 0.1,
    membership_type: str = "member",
) -> ScalingClass:
    """Map an offer's dependency structure to its meanfield scaling class.

    Decision order, most specific first:

      1. The offer is conditional and every condition has a provider
         (the giver unconditionally accepts it from an agent that
         unconditionally offers it back). If giver and providers all sit
         inside one agent's community (mutual membership promises of
         membership_type), the chain is interior: RECURSIVE_DEPENDENCY.
         Otherwise the providers are exterior specialists:
         SCARCE_DEPENDENCY.
      2. Otherwise the consumer breadth decides: the distinct agents
         holding a binding for this giver's offers of this type, as a
         fraction of the other agents. At or above scarcity_threshold
         the giver is meshed with the community: INTERACTION. Below it
         the giver is a scarce specialist: SCARCE_AGENT.

    The graph is inspected as given; reduce first when providers sit
    behind their own conditional chains. Offers whose conditions are
    unrealized fall through to rule 2.
    """
    stored = None
    for p in graph.promises:
        if p._key() == output_promise._key():
            stored = p
            break
    if stored is None:
        raise DomainError("output promise not found in graph")
    if stored.polarity is not Polarity.OFFER:
        raise DomainError("only offers can be classified")

    accepts_from, offer_triples = _supply_maps(graph.promises)
    if stored.condition:
        providers: set = set()
        all_bound = True
        for d in stored.condition:
            ks = {k for k in accepts_from.get((stored.giver, d), ()) if (k, stored.giver, d) in offer_triples}
            if not ks:
                all_bound = False
                break
            providers |= ks
        if all_bound:
            needed = providers | {stored.giver}
            for u in graph.agent_ids():
                if needed <= community_members(graph, u, membership_type) | {u}:
                    return ScalingClass.RECURSIVE_DEPENDENCY
            return ScalingClass.SCARCE_DEPENDENCY

    consumers = {
        b.offer.receiver
        for b in find_bindings(graph)
        if b.offer.giver == stored.giver and b.offer.type_tag == stored.type_tag
    }
    others = len(graph.agents) - 1
    fraction = len(consumers) / others if others > 0 else 0.0
    if fraction >= scarcity_threshold:
        return ScalingClass.INTERACTION
    return ScalingClass.SCARCE_AGENT
