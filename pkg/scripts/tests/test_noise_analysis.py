"""Closed-form fidelities against density-matrix simulation."""

import io

import pytest
from hypothesis import given, settings, strategies as st

from app.models.noise import CSV_HEADER, FidelityRow, NoiseScenario
from app.models.quantum import ChannelKind
from app.services.noise_service import FIGURE_D, FIGURE_T, NoiseService
from app.utils.errors import NotPrime, ResourceCapExceeded

TOLERANCE = 1e-9


class TestFormula:

    @pytest.mark.parametrize('kind,d,t,mu,expected', [
        ('df', 2, 3, 0.3, 0.49),
        ('df', 2, 5, 0.8, 0.0016),
        ('df', 7, 12, 0.4, 0.6 ** 11),
        ('dpf', 3, 4, 0.5, 0.15625),
        ('dpf', 2, 5, 0.5, 0.125),
        ('dpf', 2, 5, 1.0, 1.0),
        ('dpf', 3, 3, 0.5, 0.25),
        ('dpf', 3, 3, 1.0, 0.0),
        ('ad', 2, 5, 1.0, 0.25),
        ('ad', 7, 12, 1.0, 1 / 49),
        ('ad', 3, 3, 0.0, 1.0),
    ])
    def test_anchor_values(self, kind, d, t, mu, expected):
        assert NoiseService.fidelity_formula(kind, d, t, mu) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize('kind', list(ChannelKind))
    @pytest.mark.parametrize('d', FIGURE_D)
    def test_noiseless_is_perfect(self, kind, d):
        for t in FIGURE_T:
            assert NoiseService.fidelity_formula(kind, d, t, 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize('t', FIGURE_T)
    def test_dit_flip_ignores_dimension(self, t):
        for mu in NoiseService.mu_grid(11):
            values = {NoiseService.fidelity_formula('df', d, t, mu) for d in (2, 3, 7, 13)}
            assert len(values) == 1

    @pytest.mark.parametrize('d', [2, 3, 7, 13])
    def test_full_damping_leaves_one_over_d_squared(self, d):
        for t in FIGURE_T:
            assert NoiseService.fidelity_formula('ad', d, t, 1.0) == pytest.approx(1 / d ** 2, abs=1e-12)

    @pytest.mark.parametrize('d', FIGURE_D)
    @pytest.mark.parametrize('t', FIGURE_T)
    def test_dit_flip_sweep_never_rises(self, d, t):
        rows = NoiseService.sweep(NoiseScenario('df', d, t, tuple(NoiseService.mu_grid(21))))
        values = [row.f_formula for row in rows]
        assert all(later <= earlier for earlier, later in zip(values, values[1:]))
        assert values[0] == 1.0 and values[-1] == 0.0

    def test_phase_flip_dips_in_the_middle(self):
        rows = NoiseService.sweep(NoiseScenario('dpf', 2, 5, tuple(NoiseService.mu_grid(11))))
        values = [row.f_formula for row in rows]
        lowest = min(range(len(values)), key=values.__getitem__)
        assert rows[lowest].mu == pytest.approx(0.5)
        assert values[lowest] == pytest.approx(0.125, abs=1e-12)
        assert values[0] == pytest.approx(1.0) and values[-1] == pytest.approx(1.0)

    def test_bad_parameters(self):
        with pytest.raises(NotPrime):
            NoiseService.fidelity_formula('df', 4, 3, 0.1)
        with pytest.raises(ValueError):
            NoiseService.fidelity_formula('df', 2, 1, 0.1)
        with pytest.raises(ValueError):
            NoiseService.fidelity_formula('df', 2, 3, 1.5)
        with pytest.raises(ValueError):
            NoiseService.fidelity_formula('xx', 2, 3, 0.1)


class TestSimulation:

    @pytest.mark.parametrize('kind', list(ChannelKind))
    @pytest.mark.parametrize('d,t', [(2, 3), (2, 4), (3, 3), (3, 4)])
    def test_formula_matches_simulation(self, kind, d, t):
        for mu in [k / 10 for k in range(11)]:
            simulated = NoiseService.fidelity_simulated(kind, d, t, mu)
            assert abs(simulated - NoiseService.fidelity_formula(kind, d, t, mu)) <= TOLERANCE

    @settings(max_examples=25, deadline=None)
    @given(
        st.sampled_from(list(ChannelKind)),
        st.sampled_from([(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)]),
        st.floats(min_value=0.0, max_value=1.0),
        st.data()
    )
    def test_pauli_layer_does_not_change_fidelity(self, kind, shape, mu, data):
        d, t = shape
        exponents = data.draw(st.lists(st.integers(min_value=0, max_value=d - 1), min_size=t, max_size=t))
        simulated = NoiseService.fidelity_simulated(kind, d, t, mu, exponents)
        assert abs(simulated - NoiseService.fidelity_formula(kind, d, t, mu)) <= TOLERANCE

    def test_density_matrix_cap(self):
        with pytest.raises(ResourceCapExceeded):
            NoiseService.fidelity_simulated('df', 2, 10, 0.1)

    def test_custom_cap(self):
        with pytest.raises(ResourceCapExceeded):
            NoiseService.fidelity_simulated('df', 3, 3, 0.1, cap=26)

    def test_exponent_count(self):
        with pytest.raises(ValueError):
            NoiseService.fidelity_simulated('df', 2, 3, 0.1, [1, 1])


class TestSweep:

    def test_mu_grid(self):
        assert NoiseService.mu_grid(1) == [0.0]
        assert NoiseService.mu_grid(5) == [0.0, 0.25, 0.5, 0.75, 1.0]
        with pytest.raises(ValueError):
            NoiseService.mu_grid(0)

    def test_rows_follow_grid(self):
        rows = NoiseService.sweep(NoiseScenario('dpf', 3, 4, (0.0, 0.5, 1.0)))
        assert [row.mu for row in rows] == [0.0, 0.5, 1.0]
        assert rows[1].f_formula == pytest.approx(0.15625)
        assert all(row.f_simulated is None for row in rows)

    def test_workers_do_not_change_rows(self):
        scenario = NoiseScenario('ad', 3, 3, tuple(NoiseService.mu_grid(7)))
        assert NoiseService.sweep(scenario, True, workers=3) == NoiseService.sweep(scenario, True, workers=1)

    def test_simulated_sweep_agrees(self):
        rows = NoiseService.sweep(NoiseScenario('df', 2, 4, tuple(NoiseService.mu_grid(5))), simulate=True)
        assert NoiseService.max_delta(rows) <= TOLERANCE

    def test_simulated_sweep_checks_cap_first(self):
        with pytest.raises(ResourceCapExceeded):
            NoiseService.sweep(NoiseScenario('df', 2, 10, (0.0,)), simulate=True)

    def test_max_delta_without_simulation(self):
        assert NoiseService.max_delta(NoiseService.sweep(NoiseScenario('df', 2, 3, (0.5,)))) == 0.0

    def test_figure_grid_size(self):
        rows = NoiseService.figure_grid(3)
        assert len(rows) == len(ChannelKind) * len(FIGURE_T) * len(FIGURE_D) * 3
        assert {row.d for row in rows} == set(FIGURE_D)

    @pytest.mark.parametrize('kwargs', [
        {'kind': 'df', 'd': 2, 't': 1, 'mu_grid': (0.0,)},
        {'kind': 'df', 'd': 2, 't': 3, 'mu_grid': (0.5, 0.1)},
        {'kind': 'df', 'd': 2, 't': 3, 'mu_grid': (0.0, 1.2)},
        {'kind': 'df', 'd': 2, 't': 3, 'mu_grid': (0.0,), 'exponents': (1, 1)},
    ])
    def test_bad_scenarios(self, kwargs):
        with pytest.raises(ValueError):
            NoiseScenario(**kwargs)


class TestCsv:

    def test_header_and_formula_rows(self):
        rows = NoiseService.sweep(NoiseScenario('df', 2, 3, (0.0, 0.5)))
        buffer = io.StringIO()
        NoiseService.write_csv(rows, buffer)
        assert buffer.getvalue().splitlines() == [
            ','.join(CSV_HEADER),
            'df,2,3,0.000000,1,,',
            'df,2,3,0.500000,0.25,,',
        ]

    def test_simulated_fields(self):
        row = FidelityRow(ChannelKind.D_PHASE_FLIP, 3, 4, 0.5, 0.15625, 0.15625)
        assert row.to_csv_fields() == ('dpf', '3', '4', '0.500000', '0.15625', '0.15625', '0')
