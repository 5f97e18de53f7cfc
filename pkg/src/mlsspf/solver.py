"""Bounded-rank finite-witness search.

Enumerates candidate assignments over small transitive universes, smallest
first, and hands each to the evaluator (plain formulas) or the witness
certifier (formulas demanding an infinite variable).  Exhaustion within a
budget is reported as such, never as unsatisfiability: no computable bound
on witness rank is assumed here, the budget is the user's stand-in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from . import hf, lang
from .errors import (CannotWarmUp, CardinalityDeficit, CoverMissesVariable,
                     LimitExceeded, NoClosedCover, NoEvent, NoLocalTrash,
                     NotAWitness)
from .limits import DEFAULT_LIMITS, Limits
from .pumping import WitnessCertificate, certify_witness
from .venn import Assignment

SAT_WITNESSED = "SatWitnessed"
SAT_MODEL = "SatModel"
UNSAT_WITHIN_BUDGET = "UnsatWithinBudget"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class SearchBudget:
    max_rank: int = 4
    max_universe: int = 4
    max_cycle_len: int = DEFAULT_LIMITS.max_cycle_len
    limits: Limits = field(default_factory=lambda: DEFAULT_LIMITS)

    @property
    def trivial(self) -> bool:
        return self.max_rank <= 0 or self.max_universe <= 0


@dataclass(frozen=True)
class DecideResult:
    verdict: str
    assignment: Optional[Assignment] = None
    certificate: Optional[WitnessCertificate] = None

    def to_json(self):
        out = {"verdict": self.verdict}
        if self.assignment is not None:
            out["model"] = self.assignment.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def enumerate_universes(max_rank: int, max_universe: int):
    """All transitive element universes within the bounds, smallest first.

    A universe is a transitive finite set of HfSets of rank below max_rank;
    they are grown by repeatedly adjoining a subset of the current universe,
    which reaches every transitive set exactly once after deduplication.
    """
    seen = {frozenset()}
    levels = [[frozenset()]]
    for _ in range(max_universe):
        nxt = []
        for u in levels[-1]:
            elems = sorted(u, key=lambda e: e._key)
            n = len(elems)
            for mask in range(2 ** n):
                e = hf.make_set(elems[i] for i in range(n) if mask >> i & 1)
                if e.rank >= max_rank or e in u:
                    continue
                u2 = u | {e}
                if u2 not in seen:
                    seen.add(u2)
                    nxt.append(u2)
        if not nxt:
            break
        levels.append(nxt)
    out = []
    for level in levels:
        out.extend(sorted(level, key=lambda u: hf.make_set(u)._key))
    return out


def _subsets_in_order(elems):
    """Subsets of a canonically ordered tuple, by size then position mask."""
    n = len(elems)
    masks = sorted(range(2 ** n), key=lambda m: (bin(m).count("1"), m))
    return [hf.make_set(elems[i] for i in range(n) if mask >> i & 1)
            for mask in masks]


def decide(formula: lang.Formula, budget: SearchBudget) -> DecideResult:
    """Search the budgeted universe enumeration for a model or a witness.

    Every candidate assignment is visited exactly once, under the smallest
    transitive universe generated by its values; candidates under larger
    universes that merely embed the same values are pruned.
    """
    limits = budget.limits
    has_neg = any(lit.kind == lang.NOT_FINITE for lit in formula.literals)
    names = list(formula.vars)
    if not names:
        return DecideResult(UNKNOWN)
    searched = False
    for universe in enumerate_universes(budget.max_rank, budget.max_universe):
        elems = tuple(sorted(universe, key=lambda e: e._key))
        choices = _subsets_in_order(elems)
        target = hf.make_set(universe)
        for combo in product(choices, repeat=len(names)):
            support = set()
            for v in combo:
                support |= set(v.elements)
            if hf.transitive_closure(hf.make_set(support)) is not target:
                continue
            searched = True
            assignment = Assignment(dict(zip(names, combo)))
            if has_neg:
                try:
                    cert = certify_witness(
                        formula, assignment, limits,
                        max_cycle_len=budget.max_cycle_len)
                except (NotAWitness, NoEvent, CoverMissesVariable,
                        NoClosedCover, CannotWarmUp, NoLocalTrash,
                        CardinalityDeficit, LimitExceeded):
                    continue
                return DecideResult(SAT_WITNESSED, certificate=cert)
            report = lang.evaluate(formula, assignment, limits)
            if report.satisfied:
                return DecideResult(SAT_MODEL, assignment=assignment)
    if budget.trivial or not searched:
        return DecideResult(UNKNOWN)
    return DecideResult(UNSAT_WITHIN_BUDGET)
