"""Pumping cycles, witness certification, and the finite pump executor.

A green alternating cycle of nodes and places on the board, together with a
stage holding an unused seed element, lets the blocks on the cycle grow
without disturbing any other literal: each round assembles fresh elements
that contain previous surplus material, so they can never collide with the
replayed history.  A witness certificate packages the assignment, its
process, one such event and its closed cover, and is re-checkable from its
serialized form alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import hf, lang
from .errors import (CannotWarmUp, CoverMissesVariable, NoClosedCover,
                     NoEvent, NotAWitness)
from .limits import DEFAULT_LIMITS, Limits
from .msrefine import (ImitationWitness, MsOverlay, StartConfiguration,
                       check_segment_imitation, check_upward_premises,
                       check_weak_imitation, paste_segment)
from .process import (FormativeProcess, grand_event, is_closed,
                      local_trashes, synthesize_process, validate_process)
from .relations import (BlockBijection, imitates, literal_transfer_report,
                        transfer_assignment)
from .report import Report, ReportBuilder
from .venn import (Assignment, ColoredBoard, ImMap, canonical_board,
                   transitivize, venn_partition)


@dataclass(frozen=True)
class PumpingCycle:
    """Alternating node/place cycle: place j is a target of node j and a
    member of node j+1 (wrapping), with no vertex repeated and none red."""

    nodes: tuple
    places: tuple

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(frozenset(n) for n in self.nodes))
        object.__setattr__(self, "places", tuple(self.places))

    def __len__(self):
        return len(self.places)

    def place_set(self) -> frozenset:
        return frozenset(self.places)

    def node_set(self):
        return set(self.nodes)

    def validate(self, board: ColoredBoard) -> Report:
        rb = ReportBuilder()
        n = len(self.places)
        rb.add("cycle: nodes and places alternate consistently",
               len(self.nodes) == n and n >= 1)
        rb.add("cycle: no place repeats", len(set(self.places)) == n)
        rb.add("cycle: no node repeats", len(set(self.nodes)) == n)
        rb.add("cycle: every place is green",
               all(q not in board.red for q in self.places))
        rb.add("cycle: every node is green",
               all(board.is_green_node(c) for c in self.nodes))
        rb.add("cycle: target edges hold",
               all(self.places[j] in board.target(self.nodes[j]) for j in range(n)))
        rb.add("cycle: membership edges hold",
               all(self.places[j] in self.nodes[(j + 1) % n] for j in range(n)))
        return rb.build()

    def to_json(self):
        return {"nodes": [sorted(c) for c in self.nodes],
                "places": list(self.places)}

    @staticmethod
    def from_json(data) -> "PumpingCycle":
        return PumpingCycle(
            nodes=tuple(frozenset(c) for c in data["nodes"]),
            places=tuple(data["places"]))


@dataclass(frozen=True)
class PumpingEvent:
    q0: int
    i0: int
    cycle: PumpingCycle

    def to_json(self):
        return {"q0": self.q0, "i0": self.i0, "cycle": self.cycle.to_json()}

    @staticmethod
    def from_json(data) -> "PumpingEvent":
        return PumpingEvent(q0=int(data["q0"]), i0=int(data["i0"]),
                            cycle=PumpingCycle.from_json(data["cycle"]))


def find_pumping_cycles(board: ColoredBoard, max_len: int = DEFAULT_LIMITS.max_cycle_len):
    """All simple green cycles with at most max_len places.

    Each cycle is anchored at its least place (place 0 of the result), so
    rotations are reported once; enumeration order is deterministic.
    """
    green_nodes = [n for n in board.realized_nodes() if board.is_green_node(n)]
    out = []
    for anchor in sorted(q for q in board.places if q not in board.red):
        stack = [((), (anchor,), frozenset([anchor]), frozenset())]
        while stack:
            nodes, places, seen_places, seen_nodes = stack.pop()
            p = places[-1]
            for b in green_nodes:
                if p not in b or b in seen_nodes:
                    continue
                # Closing edge: b targets the anchor.
                if anchor in board.target(b):
                    cyc = PumpingCycle(nodes=(b,) + nodes, places=places)
                    if cyc.validate(board).ok:
                        out.append(cyc)
                if len(places) < max_len:
                    for t in sorted(board.target(b)):
                        if t in board.red or t in seen_places or t < anchor:
                            continue
                        stack.append((nodes + (b,), places + (t,),
                                      seen_places | {t}, seen_nodes | {b}))
    out.sort(key=lambda c: (len(c), c.places, tuple(sorted(n) for n in c.nodes)))
    return out


def _realized_nodes(proc: FormativeProcess, board: ColoredBoard):
    nodes = set(board.targets)
    nodes.update(proc.trace)
    return nodes


def is_pumping_event(proc: FormativeProcess, board: ColoredBoard,
                     q0: int, i0: int, cycle: PumpingCycle) -> Report:
    """The three conditions for (q0, i0, cycle) to start a pump.

    Only nodes realized on the board or used in the trace can have a grand
    event before the end of the process, so the minimum in condition (ii) is
    taken over those.
    """
    rb = ReportBuilder()
    rb.extend(cycle.validate(board))
    rb.add("event: seed place lies on the cycle", q0 in cycle.place_set())
    unused = proc.stages[i0][q0] - proc.used_elements(i0)
    rb.add("(i) seed place holds an unused element at the start stage",
           bool(unused))
    pn = [b for b in _realized_nodes(proc, board) if b & cycle.place_set()]
    rb.add("(ii) nodes meeting the cycle have no earlier grand event",
           all(grand_event(proc, b) >= i0 for b in pn))
    rb.add("(iii) cycle node blocks are nonempty at the start stage",
           all(proc.stages[i0][q] for c in cycle.node_set() for q in c))
    return rb.build()


def closed_cover(proc: FormativeProcess, board: ColoredBoard,
                 cycle: PumpingCycle, extra_seeds=()) -> frozenset:
    """Least-fixed-point closed set of green places containing the cycle.

    Every pow-node meeting the set must own a local trash inside it; when
    one is missing, the canonically least green local trash is added and the
    sweep restarts.  Raises NoClosedCover when a pow-node has none.
    """
    w = set(cycle.place_set()) | set(extra_seeds)
    if any(q in board.red for q in w):
        raise NoClosedCover("cover seeds include a red place")
    changed = True
    while changed:
        changed = False
        for b in sorted(board.pow_nodes, key=sorted):
            if not (b & w):
                continue
            trashes = local_trashes(proc, board, b)
            if trashes & w:
                continue
            if not trashes:
                raise NoClosedCover(
                    f"pow-node {sorted(b)} meets the cover but has no local trash")
            w.add(min(trashes))
            changed = True
    assert is_closed(proc, board, w)
    return frozenset(w)


def _segment_trash_seeds(proc: FormativeProcess, board: ColoredBoard,
                         i0: int, cycle: PumpingCycle):
    """Places that must join the closed set so the segment replay can dump
    grand-event unions of surplus-bearing nodes; None when impossible."""
    seeds = set()
    for node in _realized_nodes(proc, board):
        if not (node & cycle.place_set()):
            continue
        ge = grand_event(proc, node)
        if ge >= proc.xi or ge < i0:
            continue
        u = proc.node_union(node)
        target = None
        for q in proc.places:
            if u in proc.delta(ge, q):
                target = q
                break
        if target is None or target not in local_trashes(proc, board, proc.trace[ge]):
            return None
        seeds.add(target)
    return seeds


@dataclass(frozen=True)
class PumpResult:
    """One pump run: the extended weak process, its overlay, bookkeeping."""

    process: FormativeProcess
    overlay: MsOverlay
    re_entry: int
    warmups: int
    round_boundaries: tuple
    assignment: Optional[Assignment]
    weak_report: Report


def _run_round(stages, minus, trace, schedule, seed, kind, limits,
               strict_three):
    """Execute one cycle traversal; returns the new seed or None when the
    round's thresholds cannot be met (state is then left untouched)."""
    new_stages, new_minus, new_trace = [], [], []
    cur_stages = stages[-1]
    cur_minus = minus[-1]
    places = range(len(cur_stages))
    for j, (node, tq) in enumerate(schedule):
        placed = set()
        for b in cur_stages:
            placed |= b
        fam = [frozenset(seed)] + [cur_stages[q] for q in sorted(node)]
        pool = [e for e in hf.pow_star(fam, limits.pow_limit) if e not in placed]
        if strict_three and len(pool) < 3:
            return None
        last = j == len(schedule) - 1
        if kind == "restore" and last:
            union_snapshot = hf.make_set(
                e for q in node for e in cur_stages[q])
            t1_cands = [e for e in pool if e is not union_snapshot]
            if not t1_cands or len(pool) < 2:
                return None
            t1 = t1_cands[0]
            surplus_pick = [e for e in pool if e is not t1][0]
            delta_minus = {t1}
            delta_surplus = {surplus_pick}
        else:
            if not pool:
                return None
            delta_minus = set()
            delta_surplus = {pool[0]}
        cur_stages = tuple(
            cur_stages[q] | delta_minus | delta_surplus if q == tq else cur_stages[q]
            for q in places)
        cur_minus = tuple(
            cur_minus[q] | delta_minus if q == tq else cur_minus[q]
            for q in places)
        new_stages.append(cur_stages)
        new_minus.append(cur_minus)
        new_trace.append(node)
        seed = delta_surplus
    stages.extend(new_stages)
    minus.extend(new_minus)
    trace.extend(new_trace)
    return seed


def pump_rounds(proc: FormativeProcess, board: ColoredBoard,
                event: PumpingEvent, rounds: int,
                limits: Limits = DEFAULT_LIMITS,
                im: Optional[ImMap] = None,
                closed_set=frozenset(),
                strict_three: bool = False,
                overlay_init: Optional[MsOverlay] = None) -> PumpResult:
    """Run `rounds` cycle traversals from the event's start stage.

    The seed element moves from Minus to Surplus at the start; warm-up
    rounds (surplus-only) run first until a restoring round is feasible,
    the first counted round restores the Minus cardinality with a fresh
    element, and later rounds grow surplus only.  Every traversal adds at
    least one element to every place on the cycle, and all new deltas are
    surplus except the single restoring element.
    """
    i0 = event.i0
    prefix = proc.prefix(i0)
    if rounds == 0:
        overlay = overlay_init or MsOverlay.all_minus(prefix, start=i0)
        blocks = prefix.final_blocks()
        return PumpResult(
            process=prefix, overlay=overlay, re_entry=i0, warmups=0,
            round_boundaries=(),
            assignment=None if im is None else _read_assignment(blocks, im),
            weak_report=Report())

    unused = sorted(proc.stages[i0][event.q0] - proc.used_elements(i0))
    if not unused:
        raise CannotWarmUp("no unused seed element at the start stage")
    t0 = unused[0]

    stages = list(prefix.stages)
    trace = list(prefix.trace)
    if overlay_init is not None:
        minus = list(overlay_init.minus)
        start = overlay_init.start
    else:
        split = tuple(
            b - {t0} if q == event.q0 else b
            for q, b in enumerate(prefix.stages[i0]))
        minus = [split]
        start = i0

    cyc = event.cycle
    n = len(cyc)
    schedule = [(cyc.nodes[(j % n)], cyc.places[j % n])
                for j in range(1, n + 1)]
    seed = stages[-1][event.q0] - minus[-1][event.q0]

    warmups = 0
    boundaries = []
    done = 0
    restored = False
    while done < rounds:
        kind = "grow" if restored else "restore"
        snapshot = (len(stages), len(minus), len(trace))
        new_seed = _run_round(stages, minus, trace, schedule, seed, kind,
                              limits, strict_three)
        if new_seed is None:
            del stages[snapshot[0]:], minus[snapshot[1]:], trace[snapshot[2]:]
            if warmups >= limits.max_warmup_rounds:
                raise CannotWarmUp(
                    f"thresholds unmet after {warmups} warm-up rounds")
            new_seed = _run_round(stages, minus, trace, schedule, seed,
                                  "warmup", limits, strict_three=False)
            if new_seed is None:
                raise CannotWarmUp("cycle cannot distribute fresh elements")
            warmups += 1
        else:
            if kind == "restore":
                restored = True
            done += 1
        seed = new_seed
        boundaries.append(len(stages) - 1)

    process = FormativeProcess(stages=tuple(stages), trace=tuple(trace), weak=True)
    overlay = MsOverlay(start, tuple(minus))
    re_entry = process.xi
    weak = check_weak_imitation(
        proc, board, i0,
        [process.stages[re_entry][q] for q in proc.places],
        [overlay.minus_at(re_entry, q) for q in proc.places],
        closed_set)
    return PumpResult(
        process=process, overlay=overlay, re_entry=re_entry, warmups=warmups,
        round_boundaries=tuple(boundaries),
        assignment=None if im is None else _read_assignment(
            process.final_blocks(), im),
        weak_report=weak)


def _read_assignment(blocks, im: ImMap) -> Assignment:
    out = {}
    for v, places in im.places.items():
        members = set()
        for q in places:
            members |= blocks[q]
        out[v] = hf.make_set(members)
    return Assignment(out)


@dataclass(frozen=True)
class PumpedExtension:
    rounds: int
    process: FormativeProcess
    overlay: MsOverlay
    witness: ImitationWitness
    final_assignment: Assignment
    weak_report: Report
    segment_report: Report
    upward_report: Report
    imitation_report: Report
    transfer_report: Report
    warmups: int
    round_boundaries: tuple

    def to_json(self):
        return {
            "rounds": self.rounds,
            "warmups": self.warmups,
            "roundBoundaries": list(self.round_boundaries),
            "process": self.process.to_json(),
            "overlay": self.overlay.to_json(self.process),
            "witness": self.witness.to_json(),
            "finalAssignment": self.final_assignment.to_json(),
            "reports": {
                "weakImitation": self.weak_report.to_json(),
                "segmentImitation": self.segment_report.to_json(),
                "upward": self.upward_report.to_json(),
                "imitation": self.imitation_report.to_json(),
                "literalTransfer": self.transfer_report.to_json(),
            },
        }


@dataclass(frozen=True)
class WitnessCertificate:
    """Everything needed to re-check a satisfiability witness untrusted."""

    formula: lang.Formula
    base_assignment: Assignment
    assignment: Assignment
    process: FormativeProcess
    event: PumpingEvent
    cover: frozenset
    potential_infinite: tuple
    literal_results: tuple
    event_report: Report
    max_cycle_len: int
    pumped: Optional[PumpedExtension] = None

    def to_json(self):
        out = {
            "formula": self.formula.render(),
            "baseAssignment": self.base_assignment.to_json(),
            "assignment": self.assignment.to_json(),
            "process": self.process.to_json(),
            "event": self.event.to_json(),
            "closedCover": sorted(self.cover),
            "potentialInfinite": list(self.potential_infinite),
            "report": {
                "literals": list(self.literal_results),
                "event": self.event_report.to_json(),
            },
            "params": {"maxCycleLen": self.max_cycle_len},
        }
        if self.pumped is not None:
            out["pumped"] = self.pumped.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def certify_witness(formula: lang.Formula, assignment: Assignment,
                    limits: Limits = DEFAULT_LIMITS,
                    max_cycle_len: int = DEFAULT_LIMITS.max_cycle_len) -> WitnessCertificate:
    """Certify that a finite assignment witnesses satisfiability.

    The assignment must satisfy every literal except the negated finiteness
    ones; the search then looks (latest start stage first) for a pumping
    event whose closed cover exists, whose cycle meets the region of every
    variable that must become infinite, and whose replayed segment can
    absorb grand events of pumped nodes.
    """
    base = assignment
    results = []
    for lit in formula.literals:
        val = lang.eval_literal(lit, assignment, limits)
        results.append(val)
        if lit.kind != lang.NOT_FINITE and not val:
            raise NotAWitness(f"literal '{lit.render()}' is false under the assignment")
    neg_vars = [lit.operands[0] for lit in formula.literals
                if lit.kind == lang.NOT_FINITE]

    partition, _ = venn_partition(assignment)
    if not partition.is_transitive():
        assignment = transitivize(assignment)
    partition, im, board = canonical_board(formula, assignment, limits)
    proc = synthesize_process(partition)

    cycles = find_pumping_cycles(board, max_cycle_len)
    if not cycles:
        raise NoEvent("the board has no green pumping cycle")
    missed_var = None
    for i0 in range(proc.xi, 0, -1):
        for cycle in cycles:
            for q0 in sorted(cycle.place_set()):
                ev_report = is_pumping_event(proc, board, q0, i0, cycle)
                if not ev_report.ok:
                    continue
                uncovered = [x for x in neg_vars
                             if not (im[x] & cycle.place_set())]
                if uncovered:
                    missed_var = uncovered[0]
                    continue
                seeds = _segment_trash_seeds(proc, board, i0, cycle)
                if seeds is None:
                    continue
                try:
                    cover = closed_cover(proc, board, cycle, extra_seeds=seeds)
                except NoClosedCover:
                    continue
                event = PumpingEvent(q0=q0, i0=i0, cycle=cycle)
                pot = [v for v in formula.vars
                       if v in im.places and im[v] & cycle.place_set()]
                return WitnessCertificate(
                    formula=formula, base_assignment=base,
                    assignment=assignment, process=proc, event=event,
                    cover=cover, potential_infinite=tuple(pot),
                    literal_results=tuple(results), event_report=ev_report,
                    max_cycle_len=max_cycle_len)
    if missed_var is not None:
        raise CoverMissesVariable(missed_var)
    raise NoEvent("no pumping event passes all three conditions")


def extend_certificate(cert: WitnessCertificate, rounds: int,
                       limits: Limits = DEFAULT_LIMITS,
                       strict_three: bool = False) -> WitnessCertificate:
    """Pump the certificate's event, replay the remaining segment, and
    attach the transferred assignment with all its checks."""
    partition, im, board = canonical_board(cert.formula, cert.assignment, limits)
    proc = cert.process
    pump = pump_rounds(proc, board, cert.event, rounds, limits=limits, im=im,
                       closed_set=cert.cover, strict_three=strict_three)
    start = StartConfiguration(
        cand=pump.process, overlay=pump.overlay,
        k_prime=cert.event.i0, closed_set=cert.cover)
    cand, overlay, witness = paste_segment(proc, board, start, proc.xi, limits)
    segment = check_segment_imitation(proc, board, cand, overlay, witness)
    upward = check_upward_premises(proc, board, cand, overlay, witness)
    bijection = BlockBijection(proc.final_blocks(), cand.final_blocks())
    imit = imitates(partition, board, cand.final_partition(), bijection)
    final = transfer_assignment(cert.assignment, im, bijection)
    transfer = literal_transfer_report(cert.formula, cert.assignment, final, limits)
    pumped = PumpedExtension(
        rounds=rounds, process=cand, overlay=overlay, witness=witness,
        final_assignment=final, weak_report=pump.weak_report,
        segment_report=segment, upward_report=upward, imitation_report=imit,
        transfer_report=transfer, warmups=pump.warmups,
        round_boundaries=pump.round_boundaries)
    return WitnessCertificate(
        formula=cert.formula, base_assignment=cert.base_assignment,
        assignment=cert.assignment, process=cert.process, event=cert.event,
        cover=cert.cover, potential_infinite=cert.potential_infinite,
        literal_results=cert.literal_results, event_report=cert.event_report,
        max_cycle_len=cert.max_cycle_len, pumped=pumped)


def verify_certificate(data, limits: Limits = DEFAULT_LIMITS) -> Report:
    """Re-derive a certificate from its own inputs and compare byte-for-byte.

    Every component is recomputed from the embedded formula and assignment
    (the pipeline is deterministic), so any tampering shows up as a
    divergence; individual structural checks are reported as well.
    """
    rb = ReportBuilder()
    try:
        formula = lang.parse(data["formula"])
        rb.add("formula parses", True)
    except Exception as exc:  # noqa: BLE001 - reported, not raised
        rb.add("formula parses", False, str(exc))
        return rb.build()
    base, _ = Assignment.from_json(data["baseAssignment"])
    try:
        fresh = certify_witness(
            formula, base, limits,
            max_cycle_len=int(data.get("params", {}).get("maxCycleLen",
                              DEFAULT_LIMITS.max_cycle_len)))
    except Exception as exc:  # noqa: BLE001
        rb.add("witness certification reproduces", False, str(exc))
        return rb.build()
    if data.get("pumped"):
        try:
            fresh = extend_certificate(fresh, int(data["pumped"]["rounds"]), limits)
        except Exception as exc:  # noqa: BLE001
            rb.add("pump extension reproduces", False, str(exc))
            return rb.build()
    regenerated = fresh.to_json()
    rb.add("certificate reproduces byte-for-byte",
           json.dumps(regenerated, sort_keys=True)
           == json.dumps(data, sort_keys=True))
    proc = FormativeProcess.from_json(data["process"])
    rb.add("embedded process validates", validate_process(proc).ok)
    _, im, board = canonical_board(formula, fresh.assignment, limits)
    event = PumpingEvent.from_json(data["event"])
    rb.add("embedded event holds",
           is_pumping_event(proc, board, event.q0, event.i0, event.cycle).ok)
    cover = frozenset(data["closedCover"])
    rb.add("embedded cover is closed and contains the cycle",
           is_closed(proc, board, cover)
           and event.cycle.place_set() <= cover)
    if data.get("pumped"):
        rb.add("pumped weak-imitation report is green",
               fresh.pumped.weak_report.ok)
        rb.add("pumped literal transfer is green", fresh.pumped.transfer_report.ok)
    return rb.build()
