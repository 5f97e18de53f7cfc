import random

import pytest

import mlsspf as m
from mlsspf import hf
from mlsspf.errors import NotTransitive

from conftest import chain, rand_partition, rand_transitive_universe, set_partitions

A, B, C = chain(2)


def test_venn_partition_ex1(ex1):
    assert ex1.partition.blocks == (frozenset([A]), frozenset([B, C]))
    assert ex1.im["x"] == frozenset([ex1.q])
    assert ex1.im["w"] == frozenset([ex1.p])


def test_venn_partition_empty_value():
    partition, im = m.venn_partition(m.Assignment({"x": hf.EMPTY}))
    assert partition.blocks == ()
    assert im["x"] == frozenset()


def test_venn_partition_two_signatures():
    M = m.Assignment({"x": m.make_set([A, B]), "y": m.make_set([B])})
    partition, im = m.venn_partition(M)
    assert partition.blocks == (frozenset([A]), frozenset([B]))
    assert im["x"] == frozenset([0, 1]) and im["y"] == frozenset([1])


def test_finer_than_examples():
    assert m.finer_than([[B], [C]], [[B, C]])
    p = [[A], [B, C]]
    assert m.finer_than(p, p)
    assert not m.finer_than([[B]], [[C]])


def test_outer_member(ex1):
    assert ex1.partition.outer_member(m.make_set([B, C]))
    assert not ex1.partition.outer_member(B)
    assert not ex1.partition.outer_member(m.make_set([m.make_set([B, C])]))


def test_induced_board_ex1(ex1):
    t = ex1.board.targets
    assert t[frozenset()] == frozenset([ex1.p])
    assert t[frozenset([ex1.p])] == frozenset([ex1.q])
    assert t[frozenset([ex1.q])] == frozenset([ex1.q])
    assert ex1.board.target(frozenset([ex1.p, ex1.q])) == frozenset()


def test_induced_board_singleton():
    board = m.induced_board(m.Partition([[A]]))
    assert board.target(frozenset()) == frozenset([0])
    assert board.target(frozenset([0])) == frozenset()


def test_induced_board_empty_partition():
    board = m.induced_board(m.Partition(()))
    assert not board.targets


def test_induced_board_requires_transitivity():
    with pytest.raises(NotTransitive):
        m.induced_board(m.Partition([[C]]))


def test_color_board_ex1(ex1):
    assert ex1.board.red == frozenset()
    assert ex1.board.pow_nodes == frozenset()


def test_color_board_finite_rule(ex1):
    f = m.parse("w in x & Finite(w)")
    board = m.color_board(ex1.board, f, ex1.im)
    assert board.red == frozenset([ex1.p])


def test_color_board_pow_rule_downward_closure():
    f = m.parse("u = Pow(w)")
    core = m.induced_board(m.Partition([[A], [B]]))
    im = m.ImMap({"u": [0, 1], "w": []})
    board = m.color_board(core, f, im)
    assert board.pow_nodes == frozenset(
        [frozenset(), frozenset([0]), frozenset([1]), frozenset([0, 1])])


def test_transitivize_examples():
    M = m.Assignment({"x": m.make_set([B])})
    M2 = m.transitivize(M)
    assert M2.bindings["_univ"] is m.make_set([A, B])
    partition, _ = m.venn_partition(M2)
    assert partition.is_transitive()

    M = m.Assignment({"x": m.make_set([A, B])})
    M2 = m.transitivize(M)
    assert M2.bindings["_univ"] is m.make_set([A, B])
    partition, _ = m.venn_partition(M2)
    assert partition.is_transitive()

    M2 = m.transitivize(m.Assignment({}))
    assert M2.bindings["_univ"] is hf.EMPTY


def test_transitivize_preserves_literal_values(ex1):
    M2 = m.transitivize(ex1.assignment)
    assert m.evaluate(ex1.formula, M2).results == \
        m.evaluate(ex1.formula, ex1.assignment).results


def _random_assignment(rng, n_vars, universe_cap):
    pool = rand_transitive_universe(rng, universe_cap + 2)
    rng.shuffle(pool)
    pool = pool[:universe_cap]
    out = {}
    for i in range(n_vars):
        out[f"v{i}"] = m.make_set(e for e in pool if rng.random() < 0.5)
    return m.Assignment(out)


def test_signature_correspondence_oracle():
    rng = random.Random(7)
    for _ in range(30):
        M = _random_assignment(rng, rng.randint(1, 4), rng.randint(0, 6))
        partition, _ = m.venn_partition(M)
        universe = M.value_union()
        sig = {e: frozenset(v for v, val in M.bindings.items()
                            if e in set(val.elements))
               for e in universe}
        for block in partition.blocks:
            sigs = {sig[e] for e in block}
            assert len(sigs) == 1
        assert len({frozenset(b) for b in partition.blocks}) == \
            len({s for s in sig.values()})


def test_venn_coarseness_small_oracle():
    rng = random.Random(11)
    for _ in range(25):
        M = _random_assignment(rng, rng.randint(1, 3), rng.randint(0, 5))
        partition, _ = m.venn_partition(M)
        universe = sorted(M.value_union(), key=lambda e: e._key)
        values = [set(v.elements) for v in M.bindings.values()]
        for candidate in set_partitions(universe):
            if all(not (set(b) & val) or set(b) <= val
                   for b in candidate for val in values):
                assert m.finer_than(candidate, partition)


def test_reconstruction_property():
    rng = random.Random(13)
    for _ in range(30):
        M = _random_assignment(rng, rng.randint(1, 4), rng.randint(0, 6))
        partition, im = m.venn_partition(M)
        for v, val in M.bindings.items():
            members = set()
            for q in im[v]:
                members |= partition.blocks[q]
            assert m.make_set(members) is val


def test_target_soundness_against_assembly_enumeration():
    rng = random.Random(17)
    for _ in range(20):
        universe = rand_transitive_universe(rng, rng.randint(1, 8))
        partition = rand_partition(rng, universe, max_blocks=4)
        board = m.induced_board(partition)
        from mlsspf.msrefine import _all_nodes
        for node in _all_nodes(range(len(partition.blocks))):
            fam = [partition.blocks[q] for q in sorted(node)]
            if sum(len(b) for b in fam) > 10:
                continue
            assemblies = m.pow_star(fam)
            for q, block in enumerate(partition.blocks):
                assert (q in board.target(node)) == m.meets(assemblies, block)


def test_board_json_deterministic(ex1):
    import json
    a = json.dumps(ex1.board.to_json(), sort_keys=True)
    partition, im, board = m.canonical_board(ex1.formula, ex1.assignment)
    b = json.dumps(board.to_json(), sort_keys=True)
    assert a == b


def test_colored_board_enforces_downward_closed_pow_nodes():
    core = m.induced_board(m.Partition([[A], [B]]))
    with pytest.raises(ValueError):
        m.ColoredBoard(blocks=core.blocks, targets=dict(core.targets),
                       pow_nodes=frozenset([frozenset([0, 1])]),
                       signatures=dict(core.signatures))
