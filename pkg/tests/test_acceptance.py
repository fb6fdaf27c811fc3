"""Acceptance gate: every criterion as one test, each printing a verdict line.

Budgets are asserted with wall clocks; the exact values compared here are the
frozen oracle values (see the per-module tests for their derivations).
"""

import time

import pytest

from steinlab import kernel
from steinlab.ash import exactness_check, h0_to_steinberg
from steinlab.building import apartment_span_check
from steinlab.lie import chevalley_eilenberg_betti
from steinlab.modsym import euler_oracle_dim, level_table, nonvanishing_check
from steinlab.projective import MatrixGroup
from steinlab.quartic import (
    embedding_witness,
    is_member,
    min_pairwise_distance,
    search_members,
    unipotent_free_check,
)
from steinlab.stabilization import (
    CoinvariantComplex,
    SuspensionPhi,
    compare_phi_psi,
    double_stabilization_zero,
    psi_chain_map,
    tau_identity_check,
)

GRID = [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3)]
PSI_GRID = [(2, 2), (2, 3), (3, 2)]
STEINBERG = {(2, 2): 2, (2, 3): 3, (2, 5): 5, (3, 2): 8, (3, 3): 27}


def verdict(num, ok, text):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {text}"
    print(line)
    assert ok, line


def test_criterion_01_solomon_tits_two_ways(buildings, ash_complexes):
    t0 = time.monotonic()
    ok = True
    for np_pair in GRID:
        t_inst = time.monotonic()
        n, p = np_pair
        want = p ** (n * (n - 1) // 2)
        building_dim = buildings[np_pair].steinberg_space().dimension
        ash = ash_complexes[np_pair]
        ash_h0 = ash.dims[0] - kernel.rank(ash.complex.boundary(1))
        ok = ok and building_dim == ash_h0 == want == STEINBERG[np_pair]
        ok = ok and (time.monotonic() - t_inst) < 60
    verdict(1, ok, f"top cycle dims match p^(n(n-1)/2) two ways on {GRID} "
                   f"({time.monotonic() - t0:.1f}s)")


def test_criterion_02_resolution_exactness(buildings, ash_complexes):
    t0 = time.monotonic()
    ok = True
    for np_pair in GRID:
        n, p = np_pair
        cert = exactness_check(n, p, ash=ash_complexes[np_pair],
                               building=buildings[np_pair])
        ok = ok and cert.ok and all(h == 0 for h in cert.homology[1:])
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 300
    verdict(2, ok, f"H_i = 0 for i >= 1 across the grid ({elapsed:.1f}s)")


def test_criterion_03_h0_identification(buildings, ash_complexes):
    ok = True
    for np_pair in GRID:
        n, p = np_pair
        _, cert = h0_to_steinberg(n, p, ash=ash_complexes[np_pair],
                                  building=buildings[np_pair])
        ok = ok and cert.ok and cert.surjective and cert.kernel_is_boundary_image
    verdict(3, ok, "frames-to-apartments is onto with kernel = boundary image")


def test_criterion_04_psi_chain_map(ash_complexes):
    ok = True
    for n, p in PSI_GRID:
        res = psi_chain_map(ash_complexes[(n, p)], ash_complexes[(n + 1, p)])
        ok = ok and res.ok
    verdict(4, ok, f"append-line map commutes with the differential on {PSI_GRID}")


def test_criterion_05_phi_psi_coincide(buildings, ash_complexes):
    ok = True
    for n, p in PSI_GRID:
        # closure on a full cycle basis is part of the suspension contract
        susp = SuspensionPhi(buildings[(n, p)], buildings[(n + 1, p)])
        for z in buildings[(n, p)].steinberg_space().basis:
            susp.apply(z)
        cert = compare_phi_psi(
            n, p,
            src_ash=ash_complexes[(n, p)], tgt_ash=ash_complexes[(n + 1, p)],
            src_building=buildings[(n, p)], tgt_building=buildings[(n + 1, p)],
        )
        ok = ok and cert.ok and cert.epsilon in (1, -1)
    verdict(5, ok, f"one global sign reconciles both stabilizations on {PSI_GRID}")


def test_criterion_06_tau_sign_vanishing(ash_complexes):
    t0 = time.monotonic()
    ok = True
    for n, p in [(2, 2), (2, 3)]:
        tau = tau_identity_check(n, p, src_ash=ash_complexes[(n, p)])
        van = double_stabilization_zero(n, p, src_ash=ash_complexes[(n, p)])
        ok = ok and tau.ok and van.ok and van.max_abs_entry == 0
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 600
    verdict(6, ok, f"block-swap identity holds and the double map is zero "
                   f"({elapsed:.1f}s)")


def test_criterion_07_coinvariant_exactness(ash_complexes):
    ok = True
    for n, p in [(2, 2), (2, 3), (3, 2), (4, 2)]:
        coinv = CoinvariantComplex(
            ash_complexes[(n, p)], MatrixGroup.special_linear(n, p)
        )
        hom = coinv.homology_dimensions()
        ok = ok and all(h == 0 for h in hom[1:])
    verdict(7, ok, "coinvariant complexes are exact in positive degrees")


def test_criterion_08_level_dimensions():
    t0 = time.monotonic()
    rows = level_table(range(1, 6))
    expect = {1: 0, 2: 2, 3: 3, 4: 5, 5: 11}
    ok = all(r.dimension == expect[r.N] for r in rows)
    ok = ok and all(r.oracle == euler_oracle_dim(r.N) for r in rows if r.N > 1)
    ok = ok and nonvanishing_check(range(2, 6))
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 30
    verdict(8, ok, f"level dims are 0,2,3,5,11 with nonvanishing beyond level 1 "
                   f"({elapsed:.1f}s)")


def test_criterion_09_nilpotent_top_betti():
    t0 = time.monotonic()
    ok = True
    for n in range(2, 6):
        betti = chevalley_eilenberg_betti(n)
        ok = ok and betti[-1] == 1 and betti == betti[::-1]
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 60
    verdict(9, ok, f"top Betti number 1 with palindromic sequence for n=2..5 "
                   f"({elapsed:.1f}s)")


def test_criterion_10_lattice():
    t0 = time.monotonic()
    members = search_members(2)
    ok = all(is_member(m).ok for m in members)
    wc = unipotent_free_check(members, 4)
    ok = ok and wc.ok
    ok = ok and all(embedding_witness(m).unitarity_deviation <= 1e-9 for m in members)
    ok = ok and min_pairwise_distance(members) > 0
    elapsed = time.monotonic() - t0
    ok = ok and elapsed < 300
    verdict(10, ok, f"all height-2 members certified, word ball unipotent-free, "
                    f"unitary to 1e-9 ({elapsed:.1f}s)")
