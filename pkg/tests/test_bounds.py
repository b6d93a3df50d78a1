import math

import numpy as np
from scipy.optimize import minimize_scalar

from locdisc.bounds import (
    ChshBoundResult,
    axisymmetric_spectrum,
    beta_from_spectrum,
    characteristic_coefficients,
    chsh_bound_general_priors,
    chsh_bound_overlap,
    chsh_from_ps,
    chsh_pwin_from_beta,
    critical_visibility,
    energy_alpha,
    ensemble_spectrum,
    equiprobable_trace_powers,
    fidelity_bound_delta,
    fidelity_bound_ps,
    helstrom,
    inconclusive_local_ps,
    lambda_max_bound,
    measurement_pi,
    pe_n,
    ps_from_energy,
    ps_n,
    reduced_spectrum,
    theta_chsh,
    theta_measurements,
)
from locdisc.ensembles import two_state_family
from locdisc.exceptions import ParameterRangeError
from locdisc.seesaw import MeasurementAssignment, chsh_value
from tests import LocdiscTestCase

DELTAS = np.linspace(0, 1, 101)


class TestSuccessProbabilities(LocdiscTestCase):
    def test_helstrom(self):
        self.assertAlmostEqual(helstrom(0.6), 0.9, places=15)
        self.assertEqual(helstrom(0.0), 1.0)
        self.assertEqual(helstrom(1.0), 0.5)

    def test_ps_n_reduces_to_helstrom(self):
        for delta in DELTAS:
            self.assertAlmostEqual(ps_n(2, delta), helstrom(delta), places=14)

    def test_ps_n_endpoints(self):
        for N in (2, 3, 7):
            self.assertAlmostEqual(ps_n(N, 0.0), 1.0, places=14)
            self.assertAlmostEqual(ps_n(N, 1.0), 1 / N, places=14)

    def test_error_probability(self):
        for N in (2, 3, 4):
            for delta in DELTAS:
                self.assertAlmostEqual(ps_n(N, delta) + (N - 1) * pe_n(N, delta), 1.0, places=14)
                closed = (math.sqrt(1 + (N - 1) * delta) - math.sqrt(1 - delta)) ** 2 / N**2
                self.assertAlmostEqual(pe_n(N, delta), closed, places=14)

    def test_out_of_range(self):
        with self.assertRaises(ParameterRangeError):
            helstrom(-0.1)
        with self.assertRaises(ParameterRangeError):
            ps_n(1, 0.5)
        with self.assertRaises(ParameterRangeError):
            ps_n(2.5, 0.5)
        with self.assertRaises(ParameterRangeError):
            chsh_from_ps(0.4)
        with self.assertRaises(ParameterRangeError):
            fidelity_bound_ps(3, 0.2)
        with self.assertRaises(ParameterRangeError):
            ps_from_energy(2, 0.6)

    def test_inconclusive_local_success(self):
        self.assertAlmostEqual(inconclusive_local_ps(0.8, 0.0), helstrom(0.8), places=15)
        self.assertAlmostEqual(inconclusive_local_ps(0.8, 0.5), 0.4, places=15)
        self.assertEqual(inconclusive_local_ps(0.8, 1.0), 0.0)


class TestChsh(LocdiscTestCase):
    def test_overlap_bound_values(self):
        self.assertAlmostEqual(chsh_bound_overlap(2, 1.0).p_win_max, (2 + math.sqrt(2)) / 4, places=15)
        self.assertAlmostEqual(chsh_bound_overlap(2, 0.0).p_win_max, 0.75, places=15)
        self.assertAlmostEqual(chsh_bound_overlap(4, 1.0).beta, 2 * math.sqrt(2), places=14)
        self.assertAlmostEqual(chsh_bound_overlap(4, 0.0).p_win_max, 0.5, places=15)
        self.assertAlmostEqual(chsh_bound_overlap(3, 0.0).beta, 2 * math.sqrt(2) / 3, places=15)

    def test_unsupported_number_of_states(self):
        with self.assertRaises(ParameterRangeError):
            chsh_bound_overlap(5, 0.5)

    def test_result_is_consistent(self):
        with self.assertRaises(ValueError):
            ChshBoundResult(p_win_max=0.9, beta=2.0)
        with self.assertRaises(ParameterRangeError):
            ChshBoundResult.from_beta(3.0)

    def test_local_success_determines_the_two_state_bound(self):
        for delta in DELTAS:
            self.assertAlmostEqual(chsh_from_ps(helstrom(delta)), chsh_bound_overlap(2, delta).p_win_max, places=14)

    def test_equal_priors_reduce_to_overlap_bound(self):
        for delta in DELTAS:
            general = chsh_bound_general_priors([0.5, 0.5], delta)
            self.assertAlmostEqual(general.beta, chsh_bound_overlap(2, delta).beta, places=14)

    def test_certain_prior_gives_tsirelson(self):
        self.assertAlmostEqual(chsh_bound_general_priors([1.0, 0.0], 0.2).beta, 2 * math.sqrt(2), places=14)
        with self.assertRaises(ParameterRangeError):
            chsh_bound_general_priors([0.3, 0.3, 0.4], 0.2)

    def test_spectrum_reproduces_overlap_bounds(self):
        for N in (2, 3, 4):
            for delta in DELTAS:
                beta = beta_from_spectrum(ensemble_spectrum(N, delta))
                self.assertAlmostEqual(beta, chsh_bound_overlap(N, delta).beta, places=13)

    def test_theta_strategy_reaches_the_bound(self):
        for delta in (0.0, 0.4, 1.0):
            theta = math.atan(delta)
            self.assertAlmostEqual(theta_chsh(delta, theta), chsh_bound_overlap(2, delta).p_win_max, places=14)
            alice, bob = theta_measurements(delta)
            value = chsh_value(two_state_family(delta), MeasurementAssignment(alice, bob))
            self.assertAlmostEqual(value, chsh_bound_overlap(2, delta).p_win_max, places=12)

    def test_theta_family_peaks_at_atan_delta(self):
        for delta in (0.2, 0.7):
            result = minimize_scalar(
                lambda theta: -theta_chsh(delta, theta),
                bounds=(0, math.pi / 2),
                method='bounded',
                options={'xatol': 1e-10},
            )
            self.assertAlmostEqual(result.x, math.atan(delta), places=5)
            self.assertAlmostEqual(-result.fun, chsh_bound_overlap(2, delta).p_win_max, places=10)

    def test_measurement_pi_is_a_projector(self):
        element = measurement_pi(0.3).entries
        self.assertAllClose(element @ element, element)
        self.assertAlmostEqual(np.trace(element).real, 1.0, places=15)

    def test_pwin_from_beta(self):
        self.assertEqual(chsh_pwin_from_beta(2.0), 0.75)
        self.assertEqual(chsh_pwin_from_beta(0.0), 0.5)


class TestGlobalProperties(LocdiscTestCase):
    def test_fidelity_from_success_matches_fidelity_from_overlap(self):
        for N in (2, 3, 6):
            for delta in DELTAS:
                self.assertAlmostEqual(
                    fidelity_bound_ps(N, ps_n(N, delta)), fidelity_bound_delta(N, delta), places=12
                )

    def test_energy_identity(self):
        for N in (2, 3, 5):
            for delta in DELTAS:
                self.assertAlmostEqual(ps_from_energy(N, energy_alpha(N, delta)), ps_n(N, delta), places=12)

    def test_critical_visibility(self):
        nu_c, threshold = critical_visibility(1.0)
        self.assertAlmostEqual(nu_c, 1 / math.sqrt(2), places=15)
        self.assertAlmostEqual(threshold, 1 / math.sqrt(2), places=15)
        self.assertEqual(critical_visibility(0.0), (1.0, 0.0))


class TestSpectra(LocdiscTestCase):
    def test_axisymmetric_spectrum_sums_to_one(self):
        for N in (2, 3, 5):
            self.assertAlmostEqual(sum(axisymmetric_spectrum(N, 0.3)), 1.0, places=14)

    def test_reduced_spectrum(self):
        spectrum = reduced_spectrum(3, 0.2)
        self.assertEqual(len(spectrum), 3)
        self.assertAlmostEqual(sum(spectrum), 1.0, places=14)

    def test_lambda_max_bound_is_tight_for_equidistant_states(self):
        for N in (2, 3, 4):
            for delta in (0.1, 0.5, 0.9):
                trace2 = equiprobable_trace_powers(N, delta)[2]
                self.assertAlmostEqual(
                    lambda_max_bound(1.0, trace2, N), axisymmetric_spectrum(N, delta)[0], places=12
                )

    def test_lambda_max_bound_rejects_infeasible_pairs(self):
        with self.assertRaises(ParameterRangeError):
            lambda_max_bound(1.0, 0.1, 4)

    def test_trace_powers_match_the_spectrum(self):
        spectrum = np.array(ensemble_spectrum(4, 0.3))
        powers = equiprobable_trace_powers(4, 0.3)
        for k in (2, 3, 4):
            self.assertAlmostEqual(powers[k], float(np.sum(spectrum**k)), places=14)

    def test_characteristic_polynomial_vanishes_on_the_spectrum(self):
        powers = equiprobable_trace_powers(4, 0.3)
        coefficients = characteristic_coefficients(powers[2], powers[3], powers[4])
        for value in ensemble_spectrum(4, 0.3):
            self.assertAlmostEqual(float(np.polyval(coefficients, value)), 0.0, places=13)

    def test_beta_from_spectrum_needs_four_values(self):
        with self.assertRaises(ParameterRangeError):
            beta_from_spectrum([1.0, 0.0])


def random_density_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    """A random mixture of up to 2·dim random pure states."""
    count = int(rng.integers(1, 2 * dim + 1))
    vectors = rng.standard_normal((dim, count)) + 1j * rng.standard_normal((dim, count))
    vectors /= np.linalg.norm(vectors, axis=0)
    weights = rng.dirichlet(np.ones(count))
    return (vectors * weights) @ vectors.conj().T


class TestRandomEnsembles(LocdiscTestCase):
    def test_lambda_max_bound_holds_for_random_ensembles(self):
        rng = np.random.default_rng(606)
        for trial in range(10_000):
            dim = int(rng.integers(2, 7))
            scale = float(rng.uniform(0.1, 2.0))
            rho = scale * random_density_matrix(rng, dim)
            largest = float(np.linalg.eigvalsh(rho)[-1])
            trace = float(np.trace(rho).real)
            trace2 = float(np.real(np.sum(rho * rho.T)))
            self.assertLessEqual(largest, lambda_max_bound(trace, trace2, dim) + 1e-12, msg=f'trial {trial}')

    def test_lambda_max_bound_is_tight_for_pure_states(self):
        for dim in (2, 3, 5):
            self.assertAlmostEqual(lambda_max_bound(1.0, 1.0, dim), 1.0, places=12)


class TestMonotonicity(LocdiscTestCase):
    def assert_monotone(self, values, increasing: bool, msg: str):
        steps = np.diff(np.asarray(values))
        if increasing:
            self.assertTrue(np.all(steps >= -1e-14), msg=msg)
        else:
            self.assertTrue(np.all(steps <= 1e-14), msg=msg)

    def test_local_success_falls_with_overlap(self):
        for N in (2, 3, 4, 7):
            self.assert_monotone([ps_n(N, delta) for delta in DELTAS], increasing=False, msg=f'N={N}')

    def test_chsh_bound_grows_with_overlap(self):
        for N in (2, 3, 4):
            values = [chsh_bound_overlap(N, delta).p_win_max for delta in DELTAS]
            self.assert_monotone(values, increasing=True, msg=f'N={N}')

    def test_fidelity_bound_grows_with_overlap(self):
        for N in (2, 3, 6):
            self.assert_monotone([fidelity_bound_delta(N, delta) for delta in DELTAS], increasing=True, msg=f'N={N}')
