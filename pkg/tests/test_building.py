"""Flag complexes: counts, concentrated homology, apartment classes."""

import json
import random

import pytest

from steinlab import kernel
from steinlab.building import apartment_span_check
from steinlab.projective import enumerate_group, MatrixGroup

EXPECTED = {
    # (n, p): (simplex counts per dimension, steinberg dim)
    (2, 2): ([3], 2),
    (2, 3): ([4], 3),
    (2, 5): ([6], 5),
    (3, 2): ([14, 21], 8),
    (3, 3): ([26, 52], 27),
    (4, 2): ([65, 315, 315], 64),
}


@pytest.mark.parametrize("np_pair", sorted(EXPECTED))
def test_counts_and_steinberg_dimension(np_pair, buildings):
    n, p = np_pair
    b = buildings[np_pair]
    counts, st_dim = EXPECTED[np_pair]
    assert [len(level) for level in b.simplices] == counts
    assert b.steinberg_space().dimension == st_dim == p ** (n * (n - 1) // 2)


@pytest.mark.parametrize("np_pair", sorted(EXPECTED))
def test_reduced_homology_concentrated_up_top(np_pair, buildings):
    b = buildings[np_pair]
    betti = b.reduced_betti()
    assert all(x == 0 for x in betti[:-1])
    assert betti[-1] == b.steinberg_space().dimension


def test_incidence_against_brute_force(buildings):
    b = buildings[(3, 2)]
    edges = 0
    for i, small in enumerate(b.vertices):
        for j, big in enumerate(b.vertices):
            if small.dim < big.dim and big.contains(small):
                edges += 1
    assert edges == len(b.simplices[1]) == 21


def test_apartment_two_dimensional_convention(buildings):
    from steinlab.projective import Subspace

    b = buildings[(2, 3)]
    chain = b.apartment_class((0, 1))
    v0 = b.vertex_index[Subspace.from_vectors([b.lines.vectors[0]], 2, 3)]
    v1 = b.vertex_index[Subspace.from_vectors([b.lines.vectors[1]], 2, 3)]
    # the convention is [L_1] - [L_2]
    assert chain == {v0: 1, v1: -1}
    assert b.is_top_cycle(chain)


def test_apartment_hexagon(buildings):
    b = buildings[(3, 2)]
    frame = tuple(b.lines.index[v] for v in [(0, 0, 1), (0, 1, 0), (1, 0, 0)])
    chain = b.apartment_class(frame)
    assert len(chain) == 6
    assert sorted(chain.values()) == [-1, -1, -1, 1, 1, 1]
    assert b.is_top_cycle(chain)


def test_apartment_rejects_dependent_tuple(buildings):
    b = buildings[(3, 2)]
    e1 = b.lines.index[(1, 0, 0)]
    e2 = b.lines.index[(0, 1, 0)]
    e12 = b.lines.index[(1, 1, 0)]
    with pytest.raises(ValueError):
        b.apartment_class((e1, e2, e12))


@pytest.mark.parametrize("np_pair", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_apartment_antisymmetry(np_pair, buildings):
    b = buildings[np_pair]
    rng = random.Random(11)
    frames = b.frames()
    for frame in rng.sample(frames, min(5, len(frames))):
        base = b.apartment_class(frame)
        perm = list(frame)
        rng.shuffle(perm)
        inv = sum(
            1
            for a in range(len(perm))
            for bb in range(a + 1, len(perm))
            if perm[a] > perm[bb]
        )
        sign = -1 if inv % 2 else 1
        image = b.apartment_class(tuple(perm))
        assert image == {k: sign * v for k, v in base.items()}


@pytest.mark.parametrize("np_pair", [(2, 3), (3, 2)])
def test_apartment_equivariance(np_pair, buildings):
    n, p = np_pair
    b = buildings[np_pair]
    rng = random.Random(5)
    group = enumerate_group(MatrixGroup.special_linear(n, p))
    frames = b.frames()
    for g in rng.sample(group, 6):
        line_perm = b.lines.permutation_of(g)
        for frame in rng.sample(frames, 4):
            moved = tuple(line_perm[i] for i in frame)
            lhs = b.apartment_class(moved)
            rhs = b.apply_to_top_chain(g, b.apartment_class(frame))
            assert lhs == rhs


@pytest.mark.parametrize("np_pair,rank", [((2, 2), 2), ((2, 3), 3), ((3, 2), 8), ((3, 3), 27)])
def test_apartment_span(np_pair, rank, buildings):
    chk = apartment_span_check(buildings[np_pair])
    assert chk.ok and chk.rank == rank


def test_summary_is_json_serializable(buildings):
    s = buildings[(3, 2)].summary()
    text = json.dumps(s)
    back = json.loads(text)
    assert back["steinberg_dimension"] == 8
    assert back["simplex_counts"] == [14, 21]


def test_rank_bounds():
    from steinlab.building import TitsBuilding

    with pytest.raises(ValueError):
        TitsBuilding(5, 2)


def test_steinberg_basis_vectors_are_cycles(buildings):
    b = buildings[(3, 2)]
    top = b.top_boundary()
    for vec in b.steinberg_space().basis:
        assert not top.apply(vec)
