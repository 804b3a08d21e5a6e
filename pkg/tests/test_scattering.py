import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import mirror_stack, random_stack
from monodromy import (
    DeltaBarrier,
    Gap,
    LayerStack,
    SquareBarrier,
    TransferMatrix,
    amplitudes,
    assemble,
    barrier_matrix,
    black_box_phases,
    cayley_hamilton_power,
    gap_matrix,
    iterated_power,
    multiply,
    phase_decomposition,
    scatter,
    single_barrier_closed_form,
)
from monodromy.layers import delta_matrix
from monodromy.scattering import _offset_phase

KIANG_CELL = (DeltaBarrier(5.0), Gap(1.0))


def kiang_cell(k):
    return assemble(LayerStack(KIANG_CELL), k)


def test_empty_stack():
    assert assemble(LayerStack(), 1.0) == TransferMatrix.identity()
    res = scatter(LayerStack(), 2.0)
    assert res.T == 1 and res.R == 0
    assert (res.phi1, res.phibar2, res.delta_phi) == (math.pi / 2, 0.0, 0.0)


def test_single_barrier_assembles_to_itself():
    b = SquareBarrier(0.7, 1.3)
    assert assemble(LayerStack((b,)), 0.9) == barrier_matrix(b, 0.9)


def test_two_barriers_manual_product():
    b1, b2 = SquareBarrier(0.4, 2.0), SquareBarrier(0.9, 1.1)
    k = 1.4
    manual = multiply(barrier_matrix(b2, k), multiply(gap_matrix(0.6, k), barrier_matrix(b1, k)))
    got = assemble(LayerStack((b1, Gap(0.6), b2)), k)
    assert np.abs(got.to_array() - manual.to_array()).max() < 1e-12


def test_zero_height_barrier_transmits_fully():
    res = scatter(LayerStack((SquareBarrier(2.0, 0.0),)), 1.3)
    assert res.T == pytest.approx(1, abs=1e-14)
    assert abs(res.R) < 1e-14


def test_reflection_positional_phase():
    stack = LayerStack((DeltaBarrier(3.0),))
    shifted = LayerStack((DeltaBarrier(3.0),), origin=0.8)
    k = 1.1
    r0, r1 = scatter(stack, k).R, scatter(shifted, k).R
    assert r1 == pytest.approx(r0 * cmath.exp(2j * k * 0.8), abs=1e-14)


def test_unitarity_and_phase_relations_random():
    rng = np.random.default_rng(20)
    for _ in range(300):
        stack = random_stack(rng)
        for k in rng.uniform(0.05, 4, 5):
            res = scatter(stack, k)
            assert abs(abs(res.T) ** 2 + abs(res.R) ** 2 - 1) < 1e-10
            assert math.sin(res.phi1) == pytest.approx(abs(res.T), abs=1e-10)
            assert math.cos(res.phi1) == pytest.approx(abs(res.R), abs=1e-10)
            c = res.comps
            if abs(res.T) > 1e-6:
                assert abs(res.R / res.T) == pytest.approx(math.hypot(c.v, c.w), rel=1e-9)


def test_single_barrier_phase_matches_closed_form():
    # the three-term expression equals arg(iT): arg T shifted by pi/2
    k0, eps, k = 1.0, 1.5, 0.5
    _, phibar2, _ = single_barrier_closed_form(k0, eps, k)
    t = scatter(LayerStack((SquareBarrier(eps, k0),)), k).T
    diff = (phibar2 - cmath.phase(1j * t) + math.pi) % (2 * math.pi) - math.pi
    assert abs(diff) < 1e-12


def test_mirror_symmetric_offset_vanishes():
    rng = np.random.default_rng(21)
    for _ in range(200):
        stack = mirror_stack(rng)
        for k in rng.uniform(0.05, 4, 4):
            res = scatter(stack, k)
            assert abs(res.comps.w) < 1e-9 * max(1.0, abs(res.matrix.m11))
            assert abs(res.delta_phi) < 1e-9 or abs(res.delta_phi - math.pi / 2) < 1e-9


def test_symmetric_double_barrier_offset_zero():
    b = SquareBarrier(0.5, 2.5)
    stack = LayerStack((b, Gap(1.0), b))
    for k in np.linspace(0.1, 5, 60):
        assert abs(scatter(stack, k).delta_phi) < 1e-9


def test_symmetric_reflection_phase_matches_transmission():
    # R = cos(phi1) exp(i phibar2) up to the pi/2 convention of iT
    b = SquareBarrier(0.5, 2.5)
    stack = LayerStack((b, Gap(1.0), b), origin=-1.5)
    for k in np.linspace(0.1, 5, 40):
        res = scatter(stack, k)
        d = cmath.phase(res.R) - cmath.phase(res.T)
        assert min(abs((d - s + math.pi) % (2 * math.pi) - math.pi)
                   for s in (math.pi / 2, -math.pi / 2)) < 1e-9


def test_reversal_keeps_T_and_flips_offset():
    rng = np.random.default_rng(22)
    for _ in range(200):
        stack = random_stack(rng)
        rev = LayerStack(stack.layers[::-1])
        k = rng.uniform(0.1, 3)
        a, b = scatter(stack, k), scatter(rev, k)
        assert abs(abs(a.T) - abs(b.T)) < 1e-10
        assert a.comps.w == pytest.approx(-b.comps.w, abs=1e-9 * max(1, abs(a.matrix.m11)))
        if abs(abs(a.delta_phi) - math.pi / 2) > 1e-6:
            assert a.delta_phi == pytest.approx(-b.delta_phi, abs=1e-9)


def test_offset_phase_conventions():
    assert _offset_phase(0.0, 0.0) == 0.0
    assert _offset_phase(0.0, 2.0) == math.pi / 2
    assert _offset_phase(0.0, -2.0) == -math.pi / 2
    assert _offset_phase(-3.0, 0.0) == 0.0
    assert _offset_phase(1.0, 1.0) == pytest.approx(math.pi / 4)


def test_full_transmission_phases():
    m = TransferMatrix.identity()
    assert phase_decomposition(m, 1 + 0j, 0j) == (math.pi / 2, 0.0, 0.0)


def test_black_box_identity():
    p1, p2 = black_box_phases(TransferMatrix.identity())
    assert p1 == pytest.approx(math.pi / 2)
    assert p2 == pytest.approx(-math.pi / 2)


def test_black_box_single_barrier_phase_sum():
    rng = np.random.default_rng(23)
    for _ in range(200):
        k0, eps = rng.uniform(0.2, 3), rng.uniform(0.05, 2)
        k = k0 * rng.uniform(0.05, 0.95)
        kap = math.sqrt(k0 * k0 - k * k)
        sig = kap / k
        p1, p2 = black_box_phases(barrier_matrix(SquareBarrier(eps, k0), k))
        expect = math.atan(0.5 * (1 / sig - sig) * math.tanh(2 * kap * eps))
        assert (p1 + p2) == pytest.approx(expect, abs=1e-10)


def test_black_box_reconciles_with_decomposition():
    rng = np.random.default_rng(24)
    for _ in range(50):
        half = [SquareBarrier(rng.uniform(0.1, 1), rng.uniform(0.5, 3)), Gap(rng.uniform(0.1, 2))]
        stack = LayerStack(tuple(half + [SquareBarrier(rng.uniform(0.1, 1), 1.0)] + half[::-1]))
        k = rng.uniform(0.1, 3)
        res = scatter(stack, k)
        p1, p2 = black_box_phases(res.matrix)
        assert p1 == pytest.approx(res.phi1, abs=1e-9)
        diff = (p1 + p2 - k * stack.width - res.phibar2 + math.pi) % (2 * math.pi) - math.pi
        assert abs(diff) < 1e-9


def test_cayley_hamilton_basics():
    cell = kiang_cell(2.0)
    assert cayley_hamilton_power(cell, 1).to_array() == pytest.approx(cell.to_array())
    g = gap_matrix(0.8, 1.9)
    sq = cayley_hamilton_power(g, 2).to_array()
    assert sq == pytest.approx(np.diag([cmath.exp(3.04j), cmath.exp(-3.04j)]), abs=1e-12)
    with pytest.raises(ValueError):
        cayley_hamilton_power(cell, 0)


def test_cayley_hamilton_kiang_n10():
    cell = kiang_cell(2.0)
    a = cayley_hamilton_power(cell, 10).to_array()
    b = iterated_power(cell, 10).to_array()
    assert np.abs(a - b).max() < 1e-9 * max(1, np.abs(b).max())


def test_cayley_hamilton_band_edge_uses_recurrence():
    # identity-like cell: half trace exactly 1
    g = gap_matrix(2 * math.pi, 1.0)
    a = cayley_hamilton_power(g, 7).to_array()
    assert np.abs(a - iterated_power(g, 7).to_array()).max() < 1e-9


@settings(max_examples=150, deadline=None)
@given(k=st.floats(0.05, 15.0), n=st.integers(1, 64))
def test_cayley_hamilton_matches_iteration(k, n):
    cell = kiang_cell(k)
    a = cayley_hamilton_power(cell, n).to_array()
    b = iterated_power(cell, n).to_array()
    assert np.abs(a - b).max() <= 1e-8 * max(1.0, np.abs(b).max())


def test_opaque_limit_phase_slope():
    # 2 kappa eps = 20: the slope of phi1 + phi2 saturates at +2/kappa
    k, kap, eps = 1.0, 2.0, 5.0
    layer = SquareBarrier(eps, math.hypot(kap, k))
    h = 1e-5

    def total(kk):
        p1, p2 = black_box_phases(barrier_matrix(layer, kk))
        return p1 + p2

    slope = (total(k + h) - total(k - h)) / (2 * h)
    assert slope == pytest.approx(2 / kap, rel=0.02)
