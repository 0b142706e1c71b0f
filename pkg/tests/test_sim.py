import io
import numpy as np
import pytest
from gensic import sim
from gensic.exceptions import DimensionMismatch, InvalidState, UsageError
from gensic.measurements import (average_purity, cube_qubit,
                                 generalized_sic_depolarized, mub_complete,
                                 random_minimal_ic, sic_rank_one)
from gensic.opspace import purity
from gensic.sim import Experiment
from gensic.tomo import canonical_reconstruction

pure0 = np.diag([1.0, 0.0]).astype(complex)
mixed2 = np.eye(2, dtype=complex) / 2


# Fixtures
@pytest.fixture(scope='module')
def sic2():
    return sic_rank_one(2)

#-----

def test_frequencies_follow_born_rule(sic2):
    f = sim.sample_frequencies(Experiment(sic2, mixed2, 10 ** 6, 1, 3))[0]
    sigma = np.sqrt(0.25 * 0.75 / 10 ** 6)
    assert f.sum() == pytest.approx(1)
    assert np.all(np.abs(f - 0.25) < 5 * sigma)


def test_estimates_are_unbiased(sic2):
    e = Experiment(sic2, pure0, 10 ** 4, 400, 5)
    theta = canonical_reconstruction(sic2)
    estimates = np.array([sim.linear_estimate(f, theta)
                          for f in sim.sample_frequencies(e)])
    assert np.allclose(np.einsum('raa->r', estimates), 1)
    mean = estimates.mean(axis=0)
    stderr = estimates.std(axis=0, ddof=1) / np.sqrt(400)
    assert np.all(np.abs(mean - pure0) <= 4 * stderr + 1e-12)


def test_linear_estimate_length_mismatch(sic2):
    with pytest.raises(DimensionMismatch):
        sim.linear_estimate([0.5, 0.5], canonical_reconstruction(sic2))


@pytest.mark.parametrize('rho, analytic', [(pure0, 4.0), (mixed2, 4.5)])
def test_sic_converges(sic2, rho, analytic):
    result = sim.run(Experiment(sic2, rho, 10 ** 5, 200, 2014))
    assert result.analytic_scaled_mse == pytest.approx(analytic)
    assert result.within_tolerance
    assert result.finite_shot_bias == 0.0


def test_generalized_sic_converges(sic2):
    p = generalized_sic_depolarized(sic2, 0.5)
    result = sim.run(Experiment(p, mixed2, 10 ** 5, 200, 7))
    assert result.analytic_scaled_mse == pytest.approx(18)
    assert result.within_tolerance


@pytest.mark.parametrize('rho', [pure0, mixed2])
def test_scaled_mse_does_not_depend_on_shots(sic2, rho):
    coarse = sim.run(Experiment(sic2, rho, 10 ** 3, 200, 31))
    fine = sim.run(Experiment(sic2, rho, 10 ** 4, 200, 32))
    combined = np.hypot(coarse.standard_error, fine.standard_error)
    assert abs(coarse.empirical_scaled_mse
               - fine.empirical_scaled_mse) < 3 * combined


def test_optimal_reconstruction_analytic():
    e = Experiment(mub_complete(2), sim.haar_state(2, 0), 1000, 20, 1,
                   reconstruction='optimal')
    assert sim.run(e).analytic_scaled_mse == pytest.approx(3, abs=1e-9)


def test_single_repetition_has_no_error_bar(sic2):
    result = sim.run(Experiment(sic2, pure0, 1, 1, 0))
    assert np.isnan(result.standard_error)
    assert not result.within_tolerance
    assert result.to_dict()['standard_error'] is None


def test_runs_are_reproducible(sic2):
    e = Experiment(sic2, pure0, 500, 16, 99)
    serial = sim.run(e)
    threaded = sim.run(e, workers=4)
    assert serial.per_repetition == threaded.per_repetition
    assert sim.run(Experiment(sic2, pure0, 500, 16, 100)).per_repetition \
        != serial.per_repetition


@pytest.mark.parametrize('kwargs, error', [
    ({'shots': 0}, UsageError),
    ({'repetitions': 0}, UsageError),
    ({'reconstruction': 'bayesian'}, UsageError),
    ({'rho': np.eye(3) / 3}, DimensionMismatch),
    ({'rho': np.diag([1.5, -0.5])}, InvalidState),
])
def test_experiment_errors(sic2, kwargs, error):
    args = {'povm': sic2, 'rho': pure0, 'shots': 10, 'repetitions': 2,
            'seed': 0}
    args.update(kwargs)
    with pytest.raises(error):
        Experiment(**args)


def test_haar_state():
    rho = sim.haar_state(3, 4)
    assert purity(rho) == pytest.approx(1)
    rho = sim.haar_state(3, 4, spectrum=[0.5, 0.3, 0.2])
    assert np.allclose(np.linalg.eigvalsh(rho), [0.2, 0.3, 0.5])
    with pytest.raises(UsageError):
        sim.haar_state(3, 4, spectrum=[0.5, 0.6, 0.2])


def test_sic_orbit_is_constant(sic2):
    avg = sim.orbit_average_mse(sic2, [0.9, 0.1], 50, 3)
    assert avg.spread < 1e-10
    assert avg.mean == pytest.approx(5 - 0.82)
    assert avg.closed_form == pytest.approx(avg.mean)


def test_cube_optimal_orbit_varies():
    avg = sim.orbit_average_mse(cube_qubit(), [1, 0], 200, 0,
                                reconstruction='optimal')
    assert avg.spread > 1e-4
    assert avg.closed_form is None


def test_random_orbit_average_matches_closed_form():
    p = random_minimal_ic(2, 8)
    avg = sim.orbit_average_mse(p, [1, 0], 500, 12)
    assert abs(avg.mean - avg.closed_form) < 3 * avg.standard_error


def test_purity_matched(sic2):
    p = sim.purity_matched(sic2, 0.625)
    assert average_purity(p) == pytest.approx(0.625, abs=1e-12)
    assert np.allclose(p.outcomes, generalized_sic_depolarized(
        sic2, 0.5).outcomes)
    with pytest.raises(UsageError):
        sim.purity_matched(p, 0.9)
    with pytest.raises(UsageError):
        sim.purity_matched(sic2, 0.5)


def test_efficiency_comparison(sic2):
    contenders = [random_minimal_ic(2, 0), random_minimal_ic(2, 1)]
    results = sim.efficiency_comparison(sic2, contenders, samples=200)
    assert len(results) == 2
    for c in results:
        assert c.contender_mean > c.reference_mean
        assert not c.flagged


def test_sweep_and_csv(sic2):
    rows = sim.sweep(sic2, [1.0, 0.5], pure0, 200, 3, 1)
    assert [r['label'] for r in rows] == ['sic d=2 x=1.0', 'sic d=2 x=0.5']
    assert rows[1]['purity'] == pytest.approx(0.625)
    rows += sim.sweep(sic2, [0.8], mixed2, 200, 3, 1, mode='purity')
    assert rows[2]['purity'] == pytest.approx(0.8)
    out = io.StringIO()
    sim.write_csv(rows, out)
    lines = out.getvalue().splitlines()
    assert lines[0] == 'd,label,purity,N,R,empirical,stderr,analytic'
    assert len(lines) == 4
    with pytest.raises(UsageError):
        sim.sweep(sic2, [0.5], pure0, 10, 2, 1, mode='y')


def test_result_serializes(sic2):
    data = sim.run(Experiment(sic2, pure0, 100, 4, 0)).to_dict()
    assert data['experiment']['shots'] == 100
    assert len(data['per_repetition']) == 4
    assert 'bias' in data['bias_note']
