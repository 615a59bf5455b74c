import numpy as np
import pytest

from rnml.basis import BasisSpec, evaluate_basis_batch
from rnml.model import fit, predict
from rnml.synth import SynthSpec, generate, target_fn


def test_target_linear():
    assert target_fn("linear", 0.7) == 0.7
    assert target_fn("linear", -0.2) == -0.2


def test_target_runge():
    assert target_fn("runge", 0.0) == 1.0
    assert target_fn("runge", 1.0) == pytest.approx(1.0 / 26.0, abs=1e-17)
    assert target_fn("runge", 0.2) == pytest.approx(0.5, abs=1e-15)


def test_target_step_boundary():
    # 0 on the left including 0 itself, 1 strictly right of 0
    assert target_fn("step", 0.0) == 0.0
    assert target_fn("step", 1e-9) == 1.0
    assert target_fn("step", -1e-9) == 0.0


def test_unknown_target():
    with pytest.raises(ValueError):
        SynthSpec(target="cubic", m=10, noise_r=0.0,
                  basis=BasisSpec("monomial", 2), seed=0)


def test_spec_validation():
    basis = BasisSpec("monomial", 2)
    with pytest.raises(ValueError):
        SynthSpec(target="linear", m=0, noise_r=0.0, basis=basis, seed=0)
    with pytest.raises(ValueError):
        SynthSpec(target="linear", m=5, noise_r=-0.1, basis=basis, seed=0)


def test_deterministic():
    spec = SynthSpec(target="runge", m=50, noise_r=0.2,
                     basis=BasisSpec("chebyshev", 4), seed=42)
    a = generate(spec)
    b = generate(spec)
    assert np.array_equal(a.x, b.x)
    assert np.array_equal(a.y, b.y)
    c = generate(SynthSpec(target="runge", m=50, noise_r=0.2,
                           basis=BasisSpec("chebyshev", 4), seed=43))
    assert not np.array_equal(a.y, c.y)


def test_noiseless_linear_features_carry_label():
    # monomial column 1 is the raw input; with R=0 it equals y for f(x)=x
    spec = SynthSpec(target="linear", m=200, noise_r=0.0,
                     basis=BasisSpec("monomial", 3), seed=7)
    data = generate(spec)
    assert np.array_equal(data.x[:, 1], data.y)
    assert np.all(np.abs(data.y) <= 1.0)
    assert np.array_equal(data.x[:, 0], np.ones(200))


def test_noise_bounded_by_r():
    spec = SynthSpec(target="linear", m=500, noise_r=0.3,
                     basis=BasisSpec("monomial", 2), seed=8)
    data = generate(spec)
    # feature input is y + R*eps with |eps| <= 1
    assert np.abs(data.x[:, 1] - data.y).max() <= 0.3
    assert np.abs(data.x[:, 1] - data.y).max() > 0.15


def test_uniform_marginals():
    spec = SynthSpec(target="linear", m=100000, noise_r=0.0,
                     basis=BasisSpec("monomial", 2), seed=9)
    u = generate(spec).x[:, 1]
    assert abs(u.mean()) < 0.01
    assert abs(u.var() - 1.0 / 3.0) < 0.01


def test_noiseless_linear_recovered_by_least_squares():
    spec = SynthSpec(target="linear", m=200, noise_r=0.0,
                     basis=BasisSpec("monomial", 5), seed=3)
    model = fit(generate(spec), 0.0)
    grid = np.linspace(-0.95, 0.95, 101)
    xq = evaluate_basis_batch(BasisSpec("monomial", 5), grid)
    a_ls = np.array([predict(model, row).a_ls for row in xq])
    assert np.sqrt(np.mean((a_ls - grid) ** 2)) < 1e-8


def test_noiseless_runge_pipeline_accuracy():
    # spectral estimate tracks the smooth target to a few percent RMS
    basis = BasisSpec("chebyshev", 20)
    spec = SynthSpec(target="runge", m=1000, noise_r=0.0, basis=basis, seed=42)
    model = fit(generate(spec), 0.0)
    grid = np.linspace(-0.9, 0.9, 101)
    xq = evaluate_basis_batch(basis, grid)
    a_rn = np.array([predict(model, row).a_rn for row in xq])
    truth = 1.0 / (1.0 + 25.0 * grid**2)
    assert np.sqrt(np.mean((a_rn - truth) ** 2)) < 0.05
