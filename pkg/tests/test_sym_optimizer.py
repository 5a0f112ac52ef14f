import numpy as np
import pytest

from quditid.sym_optimizer import (
    SymmetricFamily,
    build_symmetric_family,
    frame_operator,
    optimal_weight_eigen,
    optimal_weight_grid,
    rank_one_projectors,
)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_family_gram(d):
    fam = build_symmetric_family(d)
    gram = fam.vectors.conj() @ fam.vectors.T
    target = np.eye(d) + (-1.0 / d) * (np.ones((d, d)) - np.eye(d))
    assert np.max(np.abs(gram - target)) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 5])
def test_fourier_covariance(d):
    """The diagonal phase unitary cycles the family members, so a single
    group orbit generates all d vectors."""
    fam = build_symmetric_family(d)
    u = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    for n in range(d):
        rotated = u @ fam.vectors[n]
        assert np.max(np.abs(rotated - fam.vectors[(n + 1) % d])) <= 1e-12


def test_phase_sum_rule():
    # sum_n exp(2 pi i (l - l') n / d) = d * delta_{l l'} — the identity
    # behind the off-diagonal cancellation in the frame operator
    for d in (2, 3, 4, 5):
        ns = np.arange(1, d + 1)
        for l in range(d):
            for lp in range(d):
                s = np.exp(2j * np.pi * (l - lp) * ns / d).sum()
                want = d if l == lp else 0.0
                assert abs(s - want) < 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_optimal_weight_eigen(d):
    fam = build_symmetric_family(d)
    assert abs(optimal_weight_eigen(fam) - d / (d + 1.0)) <= 1e-12


def test_frame_operator_spectrum_d4():
    fam = build_symmetric_family(4)
    eigs = np.linalg.eigvalsh(frame_operator(fam))
    np.testing.assert_allclose(eigs, [0.25, 1.25, 1.25, 1.25], atol=1e-12)
    assert eigs.sum() == pytest.approx(4.0, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
def test_frame_operator_trace_and_bottom(d):
    """Spectrum {1/d, (d+1)/d x (d-1)}: the uniform superposition is the
    bottom eigenvector because the -1/d overlaps nearly cancel each
    vector's own contribution."""
    fam = build_symmetric_family(d)
    eigs = np.linalg.eigvalsh(frame_operator(fam))
    assert abs(eigs[0] - 1.0 / d) <= 1e-12
    np.testing.assert_allclose(eigs[1:], (d + 1.0) / d, atol=1e-12)
    assert eigs.sum() == pytest.approx(float(d), abs=1e-12)


def test_rank_one_projectors_shape():
    fam = build_symmetric_family(3)
    projs = rank_one_projectors(fam)
    assert projs.shape == (3, 3, 3)
    for n in range(3):
        p = projs[n]
        assert np.max(np.abs(p @ p - p)) < 1e-12
        assert np.trace(p).real == pytest.approx(1.0, abs=1e-12)


def test_frame_operator_weight_validation():
    fam = build_symmetric_family(2)
    with pytest.raises(ValueError):
        frame_operator(fam, np.ones(3))


def test_family_validation():
    with pytest.raises(ValueError):
        SymmetricFamily(2, np.eye(2))  # orthonormal, wrong overlaps
    with pytest.raises(ValueError):
        SymmetricFamily(3, np.zeros((2, 3)))
    with pytest.raises(TypeError):
        build_symmetric_family(2.0)
    with pytest.raises(ValueError):
        build_symmetric_family(1)


def test_single_weight_above_one_is_infeasible():
    """Rayleigh bound: the top eigenvalue is at least any diagonal matrix
    element, so alpha_n > 1 already violates the summed-operator cap."""
    fam = build_symmetric_family(3)
    for n in range(3):
        w = np.zeros(3)
        w[n] = 1.05
        top = np.linalg.eigvalsh(frame_operator(fam, w))[-1]
        assert top > 1.0 + 1e-10


def test_grid_search_d2():
    fam = build_symmetric_family(2)
    weights, total = optimal_weight_grid(fam, 0.01)
    assert abs(total - 4.0 / 3.0) <= 0.02
    for w in weights:
        assert abs(w - 2.0 / 3.0) <= 0.06
    # feasibility of the returned point
    top = np.linalg.eigvalsh(frame_operator(fam, weights))[-1]
    assert top <= 1.0 + 1e-10


def test_grid_search_d3_band():
    fam = build_symmetric_family(3)
    resolution = 0.05
    weights, total = optimal_weight_grid(fam, resolution)
    assert len(weights) == 3
    want = 9.0 / 4.0
    assert want - 3 * resolution <= total <= want + 1e-9


def test_grid_search_deterministic():
    fam = build_symmetric_family(2)
    w1, t1 = optimal_weight_grid(fam, 0.05)
    w2, t2 = optimal_weight_grid(fam, 0.05)
    np.testing.assert_array_equal(w1, w2)
    assert t1 == t2


def test_grid_search_validation():
    fam4 = build_symmetric_family(4)
    with pytest.raises(ValueError):
        optimal_weight_grid(fam4, 0.05)
    fam = build_symmetric_family(2)
    with pytest.raises(ValueError):
        optimal_weight_grid(fam, 0.2)
    with pytest.raises(ValueError):
        optimal_weight_grid(fam, 0.0)
