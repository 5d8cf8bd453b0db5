"""Qudit gates, measurement and noise channels."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.models.quantum import ChannelKind, DensityMatrix, KrausChannel, QuditRegister
from app.services.qudit_service import QuditSimulator
from app.utils.errors import DimensionMismatch, NotPrime, ResourceCapExceeded
from app.utils.rng import make_rng

PRIMES = [2, 3, 5, 7]


def _is_unitary(u):
    return np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=1e-12)


class TestRegisters:

    def test_basis_index_puts_wire_one_first(self):
        register = QuditRegister.basis(3, 2, [1, 2])
        assert register.to_triples() == [(5, 1.0, 0.0)]
        assert register.support() == [(1, 2)]

    def test_unnormalized_amplitudes(self):
        with pytest.raises(ValueError):
            QuditRegister(2, 1, [1.0, 1.0])

    def test_non_prime_dimension(self):
        with pytest.raises(NotPrime):
            QuditRegister.zeros(4, 2)

    def test_state_vector_cap(self):
        with pytest.raises(ResourceCapExceeded):
            QuditRegister.zeros(2, 21)

    def test_density_matrix_cap(self):
        with pytest.raises(ResourceCapExceeded):
            DensityMatrix.maximally_mixed(2, 10)

    def test_density_matrix_must_be_hermitian(self):
        with pytest.raises(ValueError):
            DensityMatrix(2, 1, [[0.5, 1.0], [0.0, 0.5]])

    def test_basis_digits_in_range(self):
        with pytest.raises(ValueError):
            QuditRegister.basis(2, 2, [0, 2])


class TestSingleQuditMatrices:

    @pytest.mark.parametrize('d', PRIMES)
    def test_qft_is_unitary_and_uniform_on_zero(self, d):
        f = QuditSimulator.qft_matrix(d)
        assert _is_unitary(f)
        assert np.allclose(f[:, 0], np.full(d, 1 / np.sqrt(d)))

    @pytest.mark.parametrize('d', PRIMES)
    def test_pauli_action(self, d):
        omega = QuditSimulator.omega(d)
        for a in range(d):
            for b in range(d):
                u = QuditSimulator.pauli_matrix(d, a, b)
                assert _is_unitary(u)
                for z in range(d):
                    column = np.zeros(d, dtype=complex)
                    column[(z + a) % d] = omega ** (b * z)
                    assert np.allclose(u[:, z], column)

    @pytest.mark.parametrize('d', PRIMES)
    def test_fourier_turns_phase_into_shift(self, d):
        f = QuditSimulator.qft_matrix(d)
        for b in range(d):
            conjugated = f.conj().T @ QuditSimulator.pauli_matrix(d, 0, b) @ f
            assert np.allclose(conjugated, QuditSimulator.pauli_matrix(d, b, 0))

    @pytest.mark.parametrize('d', PRIMES)
    def test_weyl_operators(self, d):
        for k in range(d):
            assert np.allclose(QuditSimulator.weyl_operator(d, k, 0), QuditSimulator.pauli_matrix(d, 0, k))
            assert np.allclose(QuditSimulator.weyl_operator(d, 0, k), QuditSimulator.pauli_matrix(d, (-k) % d, 0))

    def test_pauli_out_of_range(self):
        with pytest.raises(ValueError):
            QuditSimulator.pauli_matrix(3, 3, 0)

    @pytest.mark.parametrize('d', PRIMES)
    def test_root_of_unity_sum(self, d):
        assert abs(QuditSimulator.root_of_unity_sum(d, 0) - d) < 1e-12
        assert abs(QuditSimulator.root_of_unity_sum(d, 2 * d) - d) < 1e-12
        for x in range(1, d):
            assert abs(QuditSimulator.root_of_unity_sum(d, x)) < 1e-12


class TestGates:

    @pytest.mark.parametrize('d', PRIMES)
    def test_iqft_undoes_qft(self, d):
        for x in range(d):
            start = QuditRegister.basis(d, 2, [x, (x + 1) % d])
            back = QuditSimulator.iqft(QuditSimulator.qft(start, 2), 2)
            assert np.allclose(back.amplitudes, start.amplitudes)

    def test_sum_gate_on_basis_states(self):
        d = 3
        for alpha in range(d):
            for beta in range(d):
                out = QuditSimulator.sum_gate(QuditRegister.basis(d, 2, [alpha, beta]), 1, 2)
                assert out.support() == [(alpha, (alpha + beta) % d)]

    def test_sum_gate_control_after_target(self):
        out = QuditSimulator.sum_gate(QuditRegister.basis(5, 3, [1, 4, 3]), 3, 1)
        assert out.support() == [(4, 4, 3)]

    def test_sum_gate_same_wire(self):
        with pytest.raises(ValueError):
            QuditSimulator.sum_gate(QuditRegister.zeros(2, 2), 1, 1)

    def test_wire_out_of_range(self):
        with pytest.raises(IndexError):
            QuditSimulator.qft(QuditRegister.zeros(2, 2), 3)

    def test_gate_shape(self):
        with pytest.raises(DimensionMismatch):
            QuditSimulator.apply_gate(QuditRegister.zeros(3, 1), np.eye(2), 1)

    @pytest.mark.parametrize('d,t', [(2, 2), (2, 5), (3, 3), (5, 2), (7, 3)])
    def test_ghz_circuit_matches_closed_form(self, d, t):
        circuit = QuditSimulator.prepare_ghz(d, t)
        assert np.allclose(circuit.amplitudes, QuditSimulator.ghz_formula_state(d, t).amplitudes)
        assert sorted(circuit.support()) == [(v,) * t for v in range(d)]

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from(PRIMES), st.integers(min_value=1, max_value=4), st.data())
    def test_inverse_transforms_spread_evenly_over_the_total(self, d, t, data):
        exponents = data.draw(st.lists(st.integers(min_value=0, max_value=d - 1), min_size=t, max_size=t))
        register = QuditSimulator.prepare_ghz(d, t)
        for wire, e in enumerate(exponents, start=1):
            register = QuditSimulator.pauli(register, wire, 0, e)
        assert np.allclose(
            register.amplitudes,
            QuditSimulator.ghz_formula_state(d, t, sum(exponents)).amplitudes
        )
        for wire in range(1, t + 1):
            register = QuditSimulator.iqft(register, wire)
        total = sum(exponents) % d
        hyperplane = {x for x in itertools.product(range(d), repeat=t) if sum(x) % d == total}
        assert set(register.support(1e-10)) == hyperplane
        magnitudes = np.abs(register.amplitudes)
        assert np.allclose(magnitudes[magnitudes > 1e-10], d ** ((1 - t) / 2))


class TestMeasurement:

    def test_basis_state_is_measured_exactly(self):
        register = QuditRegister.basis(5, 3, [4, 0, 2])
        outcome, collapsed = QuditSimulator.measure_all(register, make_rng(0))
        assert outcome == (4, 0, 2)
        assert collapsed.support() == [(4, 0, 2)]

    def test_measure_wire_collapses_ghz(self):
        register = QuditSimulator.prepare_ghz(3, 3)
        for seed in range(10):
            value, collapsed = QuditSimulator.measure_wire(register, 2, make_rng(seed))
            assert collapsed.support() == [(value, value, value)]
            assert abs(np.vdot(collapsed.amplitudes, collapsed.amplitudes) - 1) < 1e-12

    def test_measurement_is_seeded(self):
        register = QuditSimulator.prepare_ghz(7, 2)
        first = [QuditSimulator.measure_all(register, make_rng(s))[0] for s in range(5)]
        second = [QuditSimulator.measure_all(register, make_rng(s))[0] for s in range(5)]
        assert first == second


class TestChannels:

    @pytest.mark.parametrize('kind', list(ChannelKind))
    @pytest.mark.parametrize('d', [2, 3, 5])
    @pytest.mark.parametrize('mu', [0.0, 0.3, 1.0])
    def test_kraus_completeness(self, kind, d, mu):
        operators = QuditSimulator.kraus_operators(KrausChannel(kind, mu, d))
        assert len(operators) == d
        assert np.allclose(QuditSimulator.kraus_completeness(operators), np.eye(d), atol=1e-12)

    def test_channel_kind_from_short_name(self):
        assert KrausChannel('dpf', 0.5, 3).kind is ChannelKind.D_PHASE_FLIP

    def test_mu_out_of_range(self):
        with pytest.raises(ValueError):
            KrausChannel('df', 1.5, 2)

    @pytest.mark.parametrize('kind', list(ChannelKind))
    def test_zero_noise_is_identity(self, kind):
        rho = DensityMatrix.from_pure(QuditSimulator.prepare_ghz(3, 3))
        out = QuditSimulator.apply_channel_correlated(rho, KrausChannel(kind, 0.0, 3), [2, 3])
        assert np.allclose(out.entries, rho.entries)

    def test_single_wire_channel_preserves_trace(self):
        rho = DensityMatrix.from_pure(QuditSimulator.prepare_ghz(3, 2))
        out = QuditSimulator.apply_channel_correlated(rho, KrausChannel('ad', 0.4, 3), [2])
        assert abs(out.trace() - 1) < 1e-12

    @pytest.mark.parametrize('kind', ['df', 'dpf'])
    @pytest.mark.parametrize('d,wires', [(2, [2, 3]), (3, [2, 3]), (3, [1, 2, 3])])
    def test_correlated_trace_weight(self, kind, d, wires):
        channel = KrausChannel(kind, 0.4, d)
        rho = DensityMatrix.from_pure(QuditSimulator.prepare_ghz(d, 3))
        out = QuditSimulator.apply_channel_correlated(rho, channel, wires)
        assert abs(out.trace() - QuditSimulator.channel_trace_weight(channel, len(wires))) < 1e-12

    def test_trace_weight_undefined_for_damping(self):
        with pytest.raises(ValueError):
            QuditSimulator.channel_trace_weight(KrausChannel('ad', 0.2, 2), 2)

    def test_channel_wires_checked(self):
        rho = DensityMatrix.maximally_mixed(2, 2)
        with pytest.raises(IndexError):
            QuditSimulator.apply_channel_correlated(rho, KrausChannel('df', 0.1, 2), [3])
        with pytest.raises(ValueError):
            QuditSimulator.apply_channel_correlated(rho, KrausChannel('df', 0.1, 2), [])
        with pytest.raises(DimensionMismatch):
            QuditSimulator.apply_channel_correlated(rho, KrausChannel('df', 0.1, 3), [1])

    def test_local_unitaries_need_one_gate_per_wire(self):
        with pytest.raises(DimensionMismatch):
            QuditSimulator.apply_local_unitaries(DensityMatrix.maximally_mixed(2, 2), [np.eye(2)])


class TestFidelity:

    def test_pure_state_with_itself(self):
        phi = QuditSimulator.prepare_ghz(3, 2)
        assert abs(QuditSimulator.fidelity(phi, DensityMatrix.from_pure(phi)) - 1) < 1e-12

    def test_against_maximally_mixed(self):
        phi = QuditSimulator.prepare_ghz(2, 3)
        assert abs(QuditSimulator.fidelity(phi, DensityMatrix.maximally_mixed(2, 3)) - 1 / 8) < 1e-12

    def test_orthogonal_states(self):
        phi = QuditRegister.basis(2, 1, [0])
        rho = DensityMatrix.from_pure(QuditRegister.basis(2, 1, [1]))
        assert QuditSimulator.fidelity(phi, rho) == 0.0

    def test_register_shape_must_match(self):
        with pytest.raises(DimensionMismatch):
            QuditSimulator.fidelity(QuditRegister.zeros(2, 2), DensityMatrix.maximally_mixed(2, 3))
