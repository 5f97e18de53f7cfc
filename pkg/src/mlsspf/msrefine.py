"""Minus/Surplus overlays and the machinery for copying process segments.

An overlay splits every block, stage by stage, into a Minus part that
replays the original history and a Surplus part holding pumped material.
The checkers here decide whether a split partition can start such a copy
(weak imitation), whether a candidate process segment is a faithful copy
(segment imitation), and construct the copy itself (paste_segment).
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType

from . import hf
from .errors import CardinalityDeficit, NoLocalTrash
from .limits import DEFAULT_LIMITS, Limits
from .process import FormativeProcess, grand_event, is_closed, local_trashes
from .report import Report, ReportBuilder
from .venn import ColoredBoard


@dataclass(frozen=True)
class MsOverlay:
    """Per-stage Minus parts of every block, from `start` to the last stage.

    The Surplus part is the block content minus the Minus part.  Splits are
    free at `start` and must evolve by splitting each step's fresh material.
    """

    start: int
    minus: tuple

    def __post_init__(self):
        object.__setattr__(self, "minus", tuple(
            tuple(frozenset(m) for m in stage) for stage in self.minus))

    @property
    def end(self) -> int:
        return self.start + len(self.minus) - 1

    def minus_at(self, stage_idx, q) -> frozenset:
        return self.minus[stage_idx - self.start][q]

    def minus_family(self, node, stage_idx):
        return [self.minus_at(stage_idx, q) for q in sorted(node)]

    def surplus_at(self, proc: FormativeProcess, stage_idx, q) -> frozenset:
        return proc.stages[stage_idx][q] - self.minus_at(stage_idx, q)

    def surplus_places(self, proc: FormativeProcess, stage_idx) -> frozenset:
        return frozenset(
            q for q in proc.places if self.surplus_at(proc, stage_idx, q))

    def delta_minus(self, stage_idx, q) -> frozenset:
        return self.minus_at(stage_idx + 1, q) - self.minus_at(stage_idx, q)

    def delta_surplus(self, proc: FormativeProcess, stage_idx, q) -> frozenset:
        return (self.surplus_at(proc, stage_idx + 1, q)
                - self.surplus_at(proc, stage_idx, q))

    @staticmethod
    def all_minus(proc: FormativeProcess, start=0) -> "MsOverlay":
        return MsOverlay(start, tuple(
            proc.stages[mu] for mu in range(start, proc.xi + 1)))

    def to_json(self, proc: FormativeProcess):
        return {
            "start": self.start,
            "minus": [
                [sorted(e.to_json() for e in m) for m in stage]
                for stage in self.minus
            ],
            "surplus": [
                [sorted(e.to_json() for e in self.surplus_at(proc, mu, q))
                 for q in proc.places]
                for mu in range(self.start, self.end + 1)
            ],
        }

    @staticmethod
    def from_json(data) -> "MsOverlay":
        return MsOverlay(
            start=int(data["start"]),
            minus=tuple(
                tuple(frozenset(hf.from_json(e)[0] for e in m) for m in stage)
                for stage in data["minus"]),
        )


def validate_overlay(proc: FormativeProcess, overlay: MsOverlay) -> Report:
    """Check the overlay invariants against its process.

    Splits must cover their blocks exactly, evolve only through the splits
    of each step's fresh material, and type those splits: every delta is an
    assembly of the step node's snapshot, and surplus deltas must use at
    least one surplus element.
    """
    rb = ReportBuilder()
    rb.add("shape: overlay covers stages through the end",
           overlay.start >= 0 and overlay.end == proc.xi
           and all(len(stage) == len(proc.places) for stage in overlay.minus))
    if not rb.items[-1].ok:
        return rb.build()
    for mu in range(overlay.start, proc.xi + 1):
        ok = all(overlay.minus_at(mu, q) <= proc.stages[mu][q] for q in proc.places)
        rb.add(f"stage {mu}: minus parts inside their blocks", ok)
    for mu in range(overlay.start, proc.xi):
        grow_minus = all(
            overlay.minus_at(mu, q) <= overlay.minus_at(mu + 1, q)
            for q in proc.places)
        rb.add(f"step {mu}: minus parts never shrink", grow_minus)
        grow_surplus = all(
            overlay.surplus_at(proc, mu, q) <= overlay.surplus_at(proc, mu + 1, q)
            for q in proc.places)
        rb.add(f"step {mu}: surplus parts never shrink", grow_surplus)
        node = proc.trace[mu]
        minus_fam = overlay.minus_family(node, mu)
        full_fam = proc.node_snapshot(node, mu)
        dm_ok, ds_ok, disjoint = True, True, True
        for q in proc.places:
            dm = overlay.delta_minus(mu, q)
            ds = overlay.delta_surplus(proc, mu, q)
            if dm & ds:
                disjoint = False
            if (dm | ds) != proc.delta(mu, q):
                dm_ok = False
            # The restoring element of a pump round is recorded as minus
            # although it assembles with surplus material, so minus deltas
            # are only required to assemble from the full step snapshot.
            if not all(hf.in_pow_star(e, full_fam) for e in dm):
                dm_ok = False
            for e in ds:
                if not hf.in_pow_star(e, full_fam) or hf.in_pow_star(e, minus_fam):
                    ds_ok = False
        rb.add(f"step {mu}: minus deltas assemble from the step node", dm_ok)
        rb.add(f"step {mu}: surplus deltas use at least one surplus element", ds_ok)
        rb.add(f"step {mu}: delta split is disjoint", disjoint)
    final_refined = [p for q in proc.places
                     for p in (overlay.minus_at(proc.xi, q),
                               overlay.surplus_at(proc, proc.xi, q)) if p]
    from .venn import finer_than
    rb.add("final split refines the partition",
           finer_than(final_refined, [b for b in proc.final_blocks() if b]))
    return rb.build()


def _all_nodes(places):
    places = sorted(places)
    for mask in range(2 ** len(places)):
        yield frozenset(places[i] for i in range(len(places)) if mask >> i & 1)


def _live_nodes(proc, stage_idx):
    """Nodes over the places whose blocks are nonempty at the stage: only
    those are subsets of the stage partition."""
    return _all_nodes(q for q in proc.places if proc.stages[stage_idx][q])


def _count_in_pow_star(family, elements) -> int:
    return sum(1 for e in elements if hf.in_pow_star(e, family))


def _union_of(families) -> hf.HfSet:
    members = set()
    for fam in families:
        members |= fam
    return hf.make_set(members)


def check_weak_imitation(proc: FormativeProcess, board: ColoredBoard,
                         k_prime: int, hat_blocks, hat_minus,
                         closed_set) -> Report:
    """Can the split partition start copying the process from stage k_prime?

    hat_blocks / hat_minus are per-place block contents and Minus parts of
    the candidate; closed_set is the closed collection of green places that
    will absorb surplus.  Checks the stage-level copy conditions plus the
    three start conditions on node unions.
    """
    rb = ReportBuilder()
    places = proc.places
    hat_blocks = [frozenset(b) for b in hat_blocks]
    hat_minus = [frozenset(m) for m in hat_minus]
    closed_set = frozenset(closed_set)
    placed_hat = set()
    for b in hat_blocks:
        placed_hat |= b
    placed_ora = proc.universe(k_prime)

    rb.add("(i) minus cardinalities match the stage blocks",
           all(len(proc.stages[k_prime][q]) == len(hat_minus[q]) for q in places))
    rb.add("(vii) red places are all minus",
           all(hat_blocks[q] == hat_minus[q] for q in board.red))
    rb.add("(viii) surplus places lie in the closed set",
           all(q in closed_set for q in places if hat_blocks[q] - hat_minus[q]))
    rb.add("closed set is closed",
           is_closed(proc, board, closed_set))

    ok_x = True
    for node in _live_nodes(proc, k_prime):
        minus_fam = [hat_minus[q] for q in sorted(node)]
        ora_fam = proc.node_snapshot(node, k_prime)
        for q in places:
            if (_count_in_pow_star(minus_fam, hat_blocks[q])
                    != _count_in_pow_star(ora_fam, proc.stages[k_prime][q])):
                ok_x = False
    rb.add("(x) assembly/block intersection cardinalities match", ok_x)

    ok_a = True
    for node in _live_nodes(proc, k_prime):
        minus_fam = [hat_minus[q] for q in sorted(node)]
        u_hat = _union_of(minus_fam)
        lhs = hf.in_pow_star(u_hat, minus_fam) and u_hat not in placed_hat
        ora_fam = proc.node_snapshot(node, k_prime)
        u_ora = _union_of(ora_fam)
        rhs = hf.in_pow_star(u_ora, ora_fam) and u_ora not in placed_ora
        if lhs != rhs:
            ok_a = False
    rb.add("(a) minus unions are fresh exactly when the stage unions are", ok_a)

    ok_b = True
    surplus_places = {q for q in places if hat_blocks[q] - hat_minus[q]}
    for node in _live_nodes(proc, k_prime):
        if not (node & surplus_places):
            continue
        if grand_event(proc, node) < k_prime:
            continue
        fam = [hat_blocks[q] for q in sorted(node)]
        u = _union_of(fam)
        if not (hf.in_pow_star(u, fam) and u not in placed_hat):
            ok_b = False
    rb.add("(b) surplus-bearing node unions stay undistributed", ok_b)

    ok_c = True
    for node in _live_nodes(proc, k_prime):
        if grand_event(proc, node) >= k_prime:
            continue
        u_ora = proc.node_union(node, k_prime)
        u_hat = _union_of(hat_blocks[q] for q in sorted(node))
        for q in places:
            if (u_ora in proc.stages[k_prime][q]) != (u_hat in hat_blocks[q]):
                ok_c = False
        if node in board.pow_nodes:
            fam = [hat_blocks[q] for q in sorted(node)]
            total = hf.pow_star_size(fam)
            if _count_in_pow_star(fam, placed_hat) != total:
                ok_c = False
    rb.add("(c) pre-start memberships and pow-node coverage transfer", ok_c)
    return rb.build()


@dataclass(frozen=True)
class ImitationWitness:
    """Order-preserving stage map plus closed set for a copied segment."""

    gamma: dict
    closed_set: frozenset
    lo: int
    hi: int

    def __post_init__(self):
        object.__setattr__(self, "gamma", MappingProxyType(dict(self.gamma)))
        object.__setattr__(self, "closed_set", frozenset(self.closed_set))
        keys = sorted(self.gamma)
        vals = [self.gamma[k] for k in keys]
        if vals != sorted(set(vals)):
            raise ValueError("stage map must be an order-preserving injection")
        if keys and (keys[0] != self.lo or keys[-1] != self.hi):
            raise ValueError("stage map must cover the whole segment")

    def to_json(self):
        return {
            "gamma": {str(k): v for k, v in sorted(self.gamma.items())},
            "closedSet": sorted(self.closed_set),
            "segment": [self.lo, self.hi],
        }

    @staticmethod
    def from_json(data) -> "ImitationWitness":
        return ImitationWitness(
            gamma={int(k): int(v) for k, v in data["gamma"].items()},
            closed_set=frozenset(data["closedSet"]),
            lo=int(data["segment"][0]),
            hi=int(data["segment"][1]),
        )


def check_segment_imitation(proc: FormativeProcess, board: ColoredBoard,
                            cand: FormativeProcess, overlay: MsOverlay,
                            witness: ImitationWitness) -> Report:
    """Item-by-item check that the candidate copies the segment [lo, hi].

    Cardinalities are compared stage-for-stage through the witness's stage
    map; node-union placements must transfer exactly (Minus unions off grand
    events, full unions at them); surplus may only be created at grand
    events, into local trashes inside the closed set.
    """
    rb = ReportBuilder()
    g = witness.gamma
    lo, hi = witness.lo, witness.hi
    places = proc.places
    C = witness.closed_set

    def cand_placed(stage_idx):
        return cand.universe(stage_idx)

    for beta in range(lo, hi + 1):
        a = g[beta]
        rb.add(f"(i) stage {beta}: minus cardinalities match",
               all(len(proc.stages[beta][q]) == len(overlay.minus_at(a, q))
                   for q in places))
        rb.add(f"(vii) stage {beta}: red places all minus",
               all(cand.stages[a][q] == overlay.minus_at(a, q) for q in board.red))
        rb.add(f"(viii) stage {beta}: surplus places inside the closed set",
               overlay.surplus_places(cand, a) <= C)
        ok_ix = True
        placed_hat = cand_placed(a)
        placed_ora = proc.universe(beta)
        for node in _live_nodes(proc, beta):
            minus_fam = overlay.minus_family(node, a)
            ora_fam = proc.node_snapshot(node, beta)
            lhs = (hf.pow_star_size(minus_fam)
                   - _count_in_pow_star(minus_fam, placed_hat))
            rhs = (hf.pow_star_size(ora_fam)
                   - _count_in_pow_star(ora_fam, placed_ora))
            if lhs != rhs:
                ok_ix = False
        rb.add(f"(ix) stage {beta}: fresh assembly pools have equal size", ok_ix)

    for beta in range(lo, hi):
        a = g[beta]
        node = proc.trace[beta]
        rb.add(f"step {beta}: candidate replays the trace node",
               cand.trace[a] == node)
        rb.add(f"(ii) step {beta}: minus delta cardinalities match",
               all(len(proc.delta(beta, q)) == len(overlay.delta_minus(a, q))
                   for q in places))
        ok_iii = True
        for q in places:
            if overlay.delta_surplus(cand, a, q):
                if beta != grand_event(proc, node):
                    ok_iii = False
                elif q not in local_trashes(proc, board, node) or q not in C:
                    ok_iii = False
        rb.add(f"(iii) step {beta}: surplus only at grand events into trashes", ok_iii)
        ok_v, ok_vi = True, True
        for gamma_node in _live_nodes(proc, beta):
            ge = grand_event(proc, gamma_node)
            u_ora = proc.node_union(gamma_node, beta)
            if beta != ge:
                u_hat = _union_of(overlay.minus_family(gamma_node, a))
                for q in places:
                    if (u_ora in proc.delta(beta, q)) != (
                            u_hat in (overlay.delta_minus(a, q)
                                      | overlay.delta_surplus(cand, a, q))):
                        ok_v = False
            else:
                u_hat = cand.node_union(gamma_node, a)
                for q in places:
                    if (u_ora in proc.delta(beta, q)) != (
                            u_hat in cand.delta(a, q)):
                        ok_vi = False
        rb.add(f"(v) step {beta}: minus-union placements transfer", ok_v)
        rb.add(f"(vi) step {beta}: grand-event union placements transfer", ok_vi)

    ok_iv = True
    for node in sorted(board.pow_nodes, key=sorted):
        ge = grand_event(proc, node)
        if ge not in g or (ge + 1) not in g:
            continue
        fam = [cand.stages[g[ge]][q] for q in sorted(node)]
        total = hf.pow_star_size(fam)
        if _count_in_pow_star(fam, cand_placed(g[ge + 1])) != total:
            ok_iv = False
    rb.add("(iv) pow-node assemblies are absorbed right after their grand event",
           ok_iv)

    ok_x = True
    for k in range(lo + 1, hi + 1):
        for node in _live_nodes(proc, k - 1):
            minus_fam = overlay.minus_family(node, g[k - 1])
            ora_fam = proc.node_snapshot(node, k - 1)
            for q in places:
                if (_count_in_pow_star(minus_fam, cand.stages[g[k]][q])
                        != _count_in_pow_star(ora_fam, proc.stages[k][q])):
                    ok_x = False
    rb.add("(x) previous-stage assembly/block intersections match", ok_x)
    return rb.build()


@dataclass(frozen=True)
class StartConfiguration:
    """A candidate process + overlay that weakly imitates stage k_prime at
    its last stage, with the closed set that will take surplus."""

    cand: FormativeProcess
    overlay: MsOverlay
    k_prime: int
    closed_set: frozenset

    @property
    def m(self) -> int:
        return self.cand.xi

    @staticmethod
    def degenerate(proc: FormativeProcess, k_prime: int,
                   closed_set=frozenset()) -> "StartConfiguration":
        """The identity start: the prefix itself, all minus, no surplus."""
        cand = proc.prefix(k_prime)
        return StartConfiguration(
            cand=cand,
            overlay=MsOverlay.all_minus(cand, start=k_prime),
            k_prime=k_prime,
            closed_set=frozenset(closed_set),
        )


def paste_segment(proc: FormativeProcess, board: ColoredBoard,
                  start: StartConfiguration, k_second: int,
                  limits: Limits = DEFAULT_LIMITS):
    """Extend the candidate so it copies the segment [k_prime, k_second].

    Follows the inductive construction: each oracle step is replayed with
    fresh Minus assemblies of matching cardinality, node unions are placed
    exactly where the oracle placed them (full unions at grand events,
    Minus unions elsewhere), and when a pow-node with surplus hits its grand
    event the whole remaining pool is dumped into a local trash's surplus.

    Returns (extended process, extended overlay, witness).
    """
    places = proc.places
    k_prime = start.k_prime
    C = start.closed_set
    stages = list(start.cand.stages)
    trace = list(start.cand.trace)
    minus = list(start.overlay.minus)
    gamma = {k_prime: start.cand.xi}

    for k in range(k_prime, k_second):
        cur = len(stages) - 1
        node = proc.trace[k]
        cur_minus = {q: minus[cur - start.overlay.start][q] for q in places}
        minus_fam = [cur_minus[q] for q in sorted(node)]
        full_fam = [stages[cur][q] for q in sorted(node)]
        placed_hat = set()
        for b in stages[cur]:
            placed_hat |= b

        # Node unions the oracle distributes at this step, and the values the
        # copy must therefore place (designated) or must avoid (forbidden).
        # Off a node's grand event the Minus union is the constrained value;
        # at it, the full union (which lands in surplus when the node carries
        # surplus material: the grand-event interchange).
        designated = {q: [] for q in places}
        surplus_designated = {q: [] for q in places}
        forbidden = set()
        for gnode in _live_nodes(proc, k):
            ge = grand_event(proc, gnode)
            u_ora = proc.node_union(gnode, k)
            if k != ge:
                v_hat = _union_of(cur_minus[q] for q in sorted(gnode))
            else:
                v_hat = _union_of(stages[cur][q] for q in sorted(gnode))
            target = None
            for q in places:
                if u_ora in proc.delta(k, q):
                    target = q
                    break
            if target is None:
                forbidden.add(v_hat)
                continue
            if v_hat in placed_hat:
                raise CardinalityDeficit(
                    f"step {k}: union for node {sorted(gnode)} is already placed")
            if hf.in_pow_star(v_hat, minus_fam):
                if v_hat not in designated[target]:
                    designated[target].append(v_hat)
            else:
                if not hf.in_pow_star(v_hat, full_fam):
                    raise CardinalityDeficit(
                        f"step {k}: union for node {sorted(gnode)} is not assemblable")
                if k != grand_event(proc, node) or target not in (
                        local_trashes(proc, board, node) & C):
                    raise NoLocalTrash(
                        f"step {k}: surplus-typed union must land in a closed "
                        f"local trash, target place {target} is not one")
                if v_hat not in surplus_designated[target]:
                    surplus_designated[target].append(v_hat)

        pool = [e for e in hf.pow_star(minus_fam, limits.pow_limit)
                if e not in placed_hat]
        pool_set = set(pool)
        used = set()
        for q in places:
            used.update(designated[q])
            used.update(surplus_designated[q])
        delta_minus_by_place = {}
        # Surplus-typed unions do not occupy Minus slots: the Minus delta of
        # every place must match the oracle delta cardinality exactly.  The
        # oracle's own delta elements are taken first when still available,
        # so a start with no surplus replays the segment verbatim.
        for q in places:
            need = len(proc.delta(k, q)) - len(designated[q])
            if need < 0:
                raise CardinalityDeficit(
                    f"step {k}: more designated unions than delta slots at place {q}")
            preferred = [e for e in sorted(proc.delta(k, q), key=lambda e: e._key)
                         if e in pool_set and e not in forbidden and e not in used]
            chunk = []
            for e in preferred + [e for e in pool if e not in forbidden]:
                if len(chunk) == need:
                    break
                if e not in used and e not in chunk:
                    chunk.append(e)
            if len(chunk) < need:
                raise CardinalityDeficit(
                    f"step {k}: fresh minus pool exhausted at place {q}")
            used.update(chunk)
            delta_minus_by_place[q] = set(designated[q]) | set(chunk)

        delta_surplus_by_place = {q: set(surplus_designated[q]) for q in places}
        if (node in board.pow_nodes and k == grand_event(proc, node)
                and any(stages[cur][q] - cur_minus[q] for q in node)):
            trash = sorted(local_trashes(proc, board, node) & C)
            if not trash:
                raise NoLocalTrash(
                    f"step {k}: pow-node {sorted(node)} with surplus has no "
                    f"local trash in the closed set")
            full_pool = [e for e in hf.pow_star(full_fam, limits.pow_limit)
                         if e not in placed_hat]
            used = set()
            for q in places:
                used |= delta_minus_by_place[q]
                used |= delta_surplus_by_place[q]
            remainder = [e for e in full_pool if e not in used]
            if any(hf.in_pow_star(e, minus_fam) for e in remainder):
                raise CardinalityDeficit(
                    f"step {k}: pow-node pool not exhausted, minus material "
                    f"would leak into surplus")
            delta_surplus_by_place[trash[0]].update(remainder)

        new_stage = []
        new_minus = []
        for q in places:
            new_stage.append(stages[cur][q]
                             | delta_minus_by_place[q] | delta_surplus_by_place[q])
            new_minus.append(cur_minus[q] | delta_minus_by_place[q])
        stages.append(tuple(new_stage))
        minus.append(tuple(new_minus))
        trace.append(node)
        gamma[k + 1] = len(stages) - 1

    cand = FormativeProcess(stages=tuple(stages), trace=tuple(trace), weak=True)
    overlay = MsOverlay(start.overlay.start, tuple(minus))
    witness = ImitationWitness(
        gamma=gamma, closed_set=C, lo=k_prime, hi=k_second)
    return cand, overlay, witness


def check_upward_premises(proc: FormativeProcess, board: ColoredBoard,
                          cand: FormativeProcess, overlay: MsOverlay,
                          witness: ImitationWitness) -> Report:
    """The five premises under which the copied final stage imitates the
    original upwards, then the four conclusions themselves as checks."""
    from .venn import induced_board

    rb = ReportBuilder()
    k_prime = witness.lo
    m = witness.gamma[k_prime]
    weak = check_weak_imitation(
        proc, board, k_prime,
        [cand.stages[m][q] for q in proc.places],
        [overlay.minus_at(m, q) for q in proc.places],
        witness.closed_set)
    rb.add("premise: weak imitation at the start stage", weak.ok,
           "" if weak.ok else str(weak.failures()[0].check))
    seg = check_segment_imitation(proc, board, cand, overlay, witness)
    rb.add("premise: segment imitation across the stage map", seg.ok,
           "" if seg.ok else str(seg.failures()[0].check))

    cand_board = induced_board(cand.final_partition())
    rb.add("premise: final stages have the same targets",
           board.same_targets(cand_board))

    inv_gamma = {v: k for k, v in witness.gamma.items()}
    ok4 = True
    for mu in range(m, cand.xi):
        in_map = (mu in inv_gamma and (mu + 1) in inv_gamma
                  and inv_gamma[mu + 1] == inv_gamma[mu] + 1)
        if in_map:
            continue
        for q in proc.places:
            if overlay.delta_minus(mu, q):
                ok4 = False
    rb.add("premise: off-map steps are surplus-only", ok4)

    ok5 = True
    for mu in range(m, cand.xi):
        node = cand.trace[mu]
        betas = [v for v in inv_gamma if v <= mu]
        if not betas:
            continue
        beta = max(betas)
        if grand_event(proc, node) <= inv_gamma[beta]:
            continue
        u_final = cand.node_union(node)
        for q in local_trashes(proc, board, node):
            if u_final in overlay.delta_surplus(cand, mu, q):
                ok5 = False
    rb.add("premise: final node unions never dumped into trashes early", ok5)

    if not rb.build().ok:
        return rb.build()

    xi, xi2 = proc.xi, cand.xi
    places = proc.places
    ok0 = ok1 = ok2 = ok3 = True
    for node in _all_nodes(places):
        ora_fam = proc.node_snapshot(node, xi)
        hat_fam = cand.node_snapshot(node, xi2)
        for q in places:
            lhs = any(hf.in_pow_star(e, hat_fam) for e in cand.stages[xi2][q])
            rhs = any(hf.in_pow_star(e, ora_fam) for e in proc.stages[xi][q])
            if lhs != rhs:
                ok0 = False
        u_ora = proc.node_union(node)
        u_hat = cand.node_union(node)
        for q in places:
            if (u_hat in cand.stages[xi2][q]) != (u_ora in proc.stages[xi][q]):
                ok1 = False
        if node in board.pow_nodes:
            total = hf.pow_star_size(hat_fam)
            if _count_in_pow_star(hat_fam, cand.final_universe) != total:
                ok2 = False
    for q in board.red:
        if len(cand.stages[xi2][q]) != len(proc.stages[xi][q]):
            ok3 = False
    rb.add("conclusion: assembly contact is preserved", ok0)
    rb.add("conclusion: node-union membership is preserved", ok1)
    rb.add("conclusion: pow-node assemblies are absorbed", ok2)
    rb.add("conclusion: red block cardinalities are preserved", ok3)
    return rb.build()
