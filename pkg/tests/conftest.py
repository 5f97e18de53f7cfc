"""Shared fixtures: the running two-block example and random generators."""

from __future__ import annotations

import random

import pytest

import mlsspf as m
from mlsspf import hf


def chain(n):
    """[e0, e1, ..., en] with e0 = {} and e_{i+1} = {e_i}."""
    out = [m.make_set([])]
    for _ in range(n):
        out.append(m.make_set([out[-1]]))
    return out


class Ex1:
    """w in x & !Finite(x) with w = {0}, x = {{0}, {{0}}} (0 meaning {})."""

    def __init__(self):
        self.a, self.b, self.c = chain(2)
        self.formula = m.parse("w in x & !Finite(x)")
        self.assignment = m.Assignment({"w": self.b,
                                        "x": m.make_set([self.b, self.c])})
        self.partition, self.im, self.board = m.canonical_board(
            self.formula, self.assignment)
        self.process = m.synthesize_process(self.partition)
        self.p, self.q = 0, 1


@pytest.fixture(scope="session")
def ex1():
    return Ex1()


def rand_transitive_universe(rng: random.Random, size: int):
    """A transitive set of `size` HfSets, grown by adjoining subsets."""
    universe = []
    while len(universe) < size:
        mask = rng.getrandbits(len(universe)) if universe else 0
        e = m.make_set(universe[i] for i in range(len(universe))
                       if mask >> i & 1)
        if e not in universe:
            universe.append(e)
    return universe


def rand_partition(rng: random.Random, universe, max_blocks=6):
    """A random partition of the universe into at most max_blocks blocks."""
    if not universe:
        return m.Partition(())
    k = rng.randint(1, min(max_blocks, len(universe)))
    items = list(universe)
    rng.shuffle(items)
    blocks = [[] for _ in range(k)]
    for i, e in enumerate(items):
        blocks[i % k].append(e)
    rng.shuffle(blocks)
    from mlsspf.venn import _sorted_blocks
    return m.Partition(_sorted_blocks(blocks))


def set_partitions(items):
    """All partitions of a list (Bell-number enumeration)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in set_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
        yield [[first]] + sub


def absorbing_pow_nodes(proc, rng: random.Random, max_seeds=2):
    """A random downward-closed family of nodes whose assemblies the process
    absorbs both right after their grand event and at the final stage."""
    places = proc.places
    final = proc.final_universe

    def absorbs(node):
        fam = proc.node_snapshot(node, proc.xi)
        total = hf.pow_star_size(fam)
        if total > 2 ** 16:
            return False
        if sum(1 for e in final if hf.in_pow_star(e, fam)) != total:
            return False
        ge = m.grand_event(proc, node)
        if ge < proc.xi:
            fam_ge = proc.node_snapshot(node, ge)
            nxt = proc.universe(ge + 1)
            if sum(1 for e in nxt if hf.in_pow_star(e, fam_ge)) != \
                    hf.pow_star_size(fam_ge):
                return False
        return True

    from mlsspf.msrefine import _all_nodes
    ok = {node for node in _all_nodes(places) if absorbs(node)}
    candidates = sorted((node for node in ok
                         if all(sub in ok for sub in _all_nodes(sorted(node)))),
                        key=sorted)
    rng.shuffle(candidates)
    pow_nodes = set()
    for seed in candidates[:max_seeds]:
        for sub in _all_nodes(sorted(seed)):
            pow_nodes.add(sub)
    return frozenset(pow_nodes)


def rand_colored_board(proc, partition, rng: random.Random,
                       red_prob=0.3, with_pow=True):
    core = m.induced_board(partition)
    red = frozenset(q for q in proc.places if rng.random() < red_prob)
    pow_nodes = absorbing_pow_nodes(proc, rng) if with_pow else frozenset()
    return m.ColoredBoard(blocks=core.blocks, targets=dict(core.targets),
                          red=red, pow_nodes=pow_nodes,
                          signatures=dict(core.signatures))


def witness_family():
    """Formulas with one !Finite literal plus assignments that witness them."""
    out = []
    for n in range(2, 7):
        e = chain(n)
        out.append(("w in x & !Finite(x)",
                    {"w": e[1], "x": m.make_set(e[1:n + 1])}))
    for n in range(2, 5):
        e = chain(n)
        out.append(("!Finite(x)", {"x": m.make_set(e[1:n + 1])}))
    e = chain(3)
    out.append(("x = y U w & !Finite(x)",
                {"x": m.make_set(e[0:3]), "y": m.make_set([e[0]]),
                 "w": m.make_set(e[1:3])}))
    out.append(("Finite(w) & w in x & !Finite(x)",
                {"w": e[1], "x": m.make_set(e[1:4])}))
    out.append(("u = Pow(w) & w = {} & v in x & !Finite(x)",
                {"u": m.make_set([e[0]]), "w": e[0], "v": e[1],
                 "x": m.make_set(e[1:4])}))
    out.append(("y <= x & w in y & !Finite(x)",
                {"y": m.make_set(e[1:3]), "w": e[1],
                 "x": m.make_set(e[1:4])}))
    out.append(("x = x I x & w in x & !Finite(x)",
                {"w": e[1], "x": m.make_set(e[1:4])}))
    return [(m.parse(text), m.Assignment(binding)) for text, binding in out]
