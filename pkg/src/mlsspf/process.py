"""Formative processes: staged growth of a transitive partition from empty.

A process records, for every place, the cumulative block content at each
stage, together with the trace of nodes whose stage snapshots supplied each
step's new elements.  Every new element of a step must be an assembly of the
step node's snapshot; a strong process additionally never lets an assembly
of a used snapshot show up later (coherence).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import hf
from .errors import NotTransitive
from .report import Report, ReportBuilder
from .venn import ColoredBoard, Partition

UNUSED = "unused"
NEW = "new"
USED = "used"


@dataclass(frozen=True)
class FormativeProcess:
    """Stages 0..xi of per-place block contents plus the step trace.

    stages[mu] is a tuple indexed by place of frozensets of HfSet;
    trace[nu] is the node (set of places) whose stage-nu snapshot fed step nu;
    history_targets[nu] is the set of places that actually received elements.
    """

    stages: tuple
    trace: tuple
    history_targets: tuple = ()
    weak: bool = False

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(
            tuple(frozenset(b) for b in stage) for stage in self.stages))
        object.__setattr__(self, "trace", tuple(frozenset(a) for a in self.trace))
        if not self.history_targets:
            derived = tuple(
                frozenset(q for q in self.places if self.delta(nu, q))
                for nu in range(self.xi))
            object.__setattr__(self, "history_targets", derived)
        else:
            object.__setattr__(self, "history_targets", tuple(
                frozenset(t) for t in self.history_targets))

    @property
    def xi(self) -> int:
        return len(self.stages) - 1

    @property
    def places(self):
        return tuple(range(len(self.stages[0]) if self.stages else 0))

    def block(self, q, mu=None) -> frozenset:
        return self.stages[self.xi if mu is None else mu][q]

    def final_blocks(self):
        return self.stages[self.xi]

    def final_partition(self) -> Partition:
        return Partition(self.final_blocks())

    def universe(self, mu) -> frozenset:
        out = set()
        for b in self.stages[mu]:
            out |= b
        return frozenset(out)

    @cached_property
    def final_universe(self) -> frozenset:
        return self.universe(self.xi)

    def delta(self, nu, q) -> frozenset:
        """Fresh elements place q gains at step nu."""
        return self.stages[nu + 1][q] - self.stages[nu][q]

    def node_snapshot(self, node, mu):
        """The blocks of a node at a stage (the node's stage family)."""
        return [self.stages[mu][q] for q in sorted(node)]

    def node_union(self, node, mu=None) -> hf.HfSet:
        members = set()
        for q in node:
            members |= self.block(q, mu)
        return hf.make_set(members)

    @cached_property
    def landing(self) -> dict:
        """Element -> the step at which it entered the process."""
        out = {}
        for nu in range(self.xi):
            for q in self.places:
                for e in self.delta(nu, q):
                    out[e] = nu
        return out

    def used_elements(self, mu) -> frozenset:
        """Elements that are members of some element placed by stage mu."""
        out = set()
        for b in self.stages[mu]:
            for z in b:
                out |= set(z.elements)
        return frozenset(out)

    def prefix(self, mu) -> "FormativeProcess":
        """The process truncated at stage mu (trace cut accordingly)."""
        return FormativeProcess(
            stages=self.stages[: mu + 1],
            trace=self.trace[:mu],
            weak=self.weak,
        )

    def to_json(self):
        return {
            "stages": [
                [sorted(e.to_json() for e in b) for b in stage]
                for stage in self.stages
            ],
            "trace": [sorted(a) for a in self.trace],
            "historyTargets": [sorted(t) for t in self.history_targets],
            "weak": self.weak,
        }

    @staticmethod
    def from_json(data) -> "FormativeProcess":
        stages = []
        for stage in data["stages"]:
            stages.append(tuple(
                frozenset(hf.from_json(e)[0] for e in b) for b in stage))
        return FormativeProcess(
            stages=tuple(stages),
            trace=tuple(frozenset(a) for a in data["trace"]),
            history_targets=tuple(frozenset(t) for t in data.get("historyTargets", [])),
            weak=bool(data.get("weak", False)),
        )


def validate_process(proc: FormativeProcess) -> Report:
    """Itemized pass/fail of every structural requirement, per stage.

    Strong validation (weak=False) includes the coherence requirement: no
    element of the final universe may be an assembly of a step snapshot that
    was left unplaced at the following stage.
    """
    rb = ReportBuilder()
    xi = proc.xi
    places = proc.places
    rb.add("shape: trace length matches stage count", len(proc.trace) == xi)
    for mu in range(xi + 1):
        stage = proc.stages[mu]
        seen = {}
        disjoint = True
        for q in places:
            for e in stage[q]:
                if e in seen:
                    disjoint = False
                seen[e] = q
        rb.add(f"stage {mu}: blocks pairwise disjoint", disjoint)
    rb.add("stage 0: all blocks empty",
           all(not b for b in proc.stages[0]) if proc.stages else True)
    rb.add("final stage: all blocks nonempty", all(proc.stages[xi]))
    for nu in range(xi):
        ok = all(proc.stages[nu][q] <= proc.stages[nu + 1][q] for q in places)
        rb.add(f"step {nu}: blocks grow monotonically", ok)
    for nu in range(min(xi, len(proc.trace))):
        node = proc.trace[nu]
        snapshot = proc.node_snapshot(node, nu)
        rb.add(f"step {nu}: trace node has nonempty snapshot blocks",
               all(snapshot) or not node)
        fresh = proc.universe(nu + 1) - proc.universe(nu)
        ok = all(hf.in_pow_star(e, snapshot) for e in fresh)
        rb.add(f"step {nu}: new elements assemble from the trace node", ok)
        rb.add(f"step {nu}: the partition strictly grows", bool(fresh))
        derived = frozenset(q for q in places if proc.delta(nu, q))
        if nu < len(proc.history_targets):
            rb.add(f"step {nu}: history targets match nonempty deltas",
                   proc.history_targets[nu] == derived)
    if not proc.weak:
        final = proc.final_universe
        for nu in range(min(xi, len(proc.trace))):
            snapshot = proc.node_snapshot(proc.trace[nu], nu)
            late = final - proc.universe(nu + 1)
            ok = not any(hf.in_pow_star(e, snapshot) for e in late)
            rb.add(f"step {nu}: coherent (no late assembly of the used snapshot)", ok)
    return rb.build()


def synthesize_process(partition: Partition) -> FormativeProcess:
    """A strong formative process whose final stage is the given partition.

    Greedy by canonical element order: each step picks the least unplaced
    element whose members are all placed, and distributes in one batch every
    unplaced element with the same signature node whose members are placed.
    Batching is what guarantees coherence: a later sibling assembly of the
    same snapshot would otherwise violate it.
    """
    if not partition.is_transitive():
        raise NotTransitive("cannot synthesize a process for a non-transitive partition")
    blocks = partition.blocks
    places = range(len(blocks))
    home = {}
    for i, b in enumerate(blocks):
        for e in b:
            home[e] = i
    signature = {
        e: frozenset(home[m] for m in e.elements) for e in home
    }
    unplaced = set(home)
    placed = set()
    stages = [tuple(frozenset() for _ in places)]
    trace = []
    current = [set() for _ in places]
    while unplaced:
        ready = [e for e in unplaced if set(e.elements) <= placed]
        pick = min(ready, key=lambda e: e._key)
        node = signature[pick]
        batch = [e for e in ready if signature[e] == node]
        for e in batch:
            current[home[e]].add(e)
        placed.update(batch)
        unplaced.difference_update(batch)
        stages.append(tuple(frozenset(b) for b in current))
        trace.append(node)
    return FormativeProcess(stages=tuple(stages), trace=tuple(trace), weak=False)


def grand_event(proc: FormativeProcess, node) -> int:
    """The step at which the node's final unionset itself gets placed.

    Falls back to the process length when the union never shows up.
    """
    u = proc.node_union(node)
    return proc.landing.get(u, proc.xi)


def ge_min(proc: FormativeProcess, nodes) -> int:
    """Least grand event over a collection of nodes; xi for no nodes."""
    return min((grand_event(proc, a) for a in nodes), default=proc.xi)


def element_status(proc: FormativeProcess, mu: int, e: hf.HfSet) -> str:
    """'used' if e sits inside a placed element at stage mu, 'new' if it is
    part of step mu's fresh material, else 'unused'."""
    if e in proc.used_elements(mu):
        return USED
    if mu < proc.xi and any(e in proc.delta(mu, q) for q in proc.places):
        return NEW
    return UNUSED


def _all_nodes_containing(places, q):
    rest = [p for p in places if p != q]
    for mask in range(2 ** len(rest)):
        yield frozenset([q] + [rest[i] for i in range(len(rest)) if mask >> i & 1])


def local_trashes(proc: FormativeProcess, board: ColoredBoard, node) -> frozenset:
    """Green targets of the node that only belong to nodes with strictly
    later grand events: safe dump places for its surplus material."""
    node = frozenset(node)
    ge = grand_event(proc, node)
    out = set()
    for g in board.target(node):
        if g in board.red:
            continue
        if all(grand_event(proc, b) > ge
               for b in _all_nodes_containing(proc.places, g)):
            out.add(g)
    return frozenset(out)


def is_closed(proc: FormativeProcess, board: ColoredBoard, places_set) -> bool:
    """All members green, and every pow-node meeting the set has a local
    trash inside it."""
    w = frozenset(places_set)
    if any(q in board.red for q in w):
        return False
    for b in board.pow_nodes:
        if b & w and not (local_trashes(proc, board, b) & w):
            return False
    return True


def salient_ordinals(proc: FormativeProcess, k_prime: int):
    """(steps that fill a previously assembly-disjoint block, steps whose
    trace node is already stable with a placed union).

    These are the stages a stage-selection map must keep when pruning a
    process; steps with an empty trace node have no union to place and are
    not reported in the second set.
    """
    m_arrow = set()
    m_ge = set()
    final_universe = proc.final_universe
    for mu in range(k_prime, proc.xi):
        node = proc.trace[mu]
        snapshot = proc.node_snapshot(node, mu)
        for q in proc.places:
            if proc.delta(mu, q) and not any(
                    hf.in_pow_star(e, snapshot) for e in proc.stages[mu][q]):
                m_arrow.add(mu)
                break
        if node:
            now = proc.node_union(node, mu)
            if now is proc.node_union(node) and now in final_universe:
                m_ge.add(mu)
    return frozenset(m_arrow), frozenset(m_ge)
