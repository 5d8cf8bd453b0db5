"""
Noise analysis service.

Closed-form fidelities of the recovery state under the three correlated
channels, the same quantities computed by brute-force density-matrix
simulation, and CSV sweeps over the noise strength.
"""
import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np

from app.models.field import Modulus
from app.models.noise import CSV_HEADER, FidelityRow, NoiseScenario
from app.models.quantum import DENSITY_MATRIX_CAP, ChannelKind, DensityMatrix, KrausChannel
from app.services.qudit_service import QuditSimulator
from app.utils.errors import ResourceCapExceeded

logger = logging.getLogger(__name__)

FIGURE_T = (5, 12)
FIGURE_D = (2, 3, 7, 13, 29, 53, 229)


class NoiseService:
    """Service for fidelity formulas, simulations and sweeps"""

    @staticmethod
    def _check_parameters(d: int, t: int, mu: float):
        Modulus(d)
        if t < 2:
            raise ValueError(f"t must be at least 2, got {t}")
        if not 0.0 <= mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {mu}")

    @staticmethod
    def fidelity_formula(kind, d: int, t: int, mu: float) -> float:
        """
        Closed-form fidelity of the noisy recovery state.

        df:  (1-μ)^(t-1)
        dpf: (1-μ)^(t-1) + μ^(t-1) / (d-1)^(t-2) when d divides t-1, else (1-μ)^(t-1)
        ad:  (1/d²) (1 + (1-μ)^((t-1)/2) (d-1))²

        Args:
            kind: ChannelKind or its short name ('df', 'dpf', 'ad')
            d: Qudit dimension (prime)
            t: Number of participants, wire 1 stays noiseless
            mu: Noise strength in [0, 1]
        """
        kind = ChannelKind(kind)
        NoiseService._check_parameters(d, t, mu)
        n = t - 1
        if kind is ChannelKind.DIT_FLIP:
            return (1 - mu) ** n
        if kind is ChannelKind.D_PHASE_FLIP:
            value = (1 - mu) ** n
            if n % d == 0:
                value += mu ** n / (d - 1) ** (n - 1)
            return value
        return (1 + (1 - mu) ** (n / 2) * (d - 1)) ** 2 / d ** 2

    @staticmethod
    def fidelity_simulated(
        kind,
        d: int,
        t: int,
        mu: float,
        exponents: Optional[Sequence[int]] = None,
        cap: int = DENSITY_MATRIX_CAP
    ) -> float:
        """
        Fidelity from the density-matrix pipeline.

        ρ = |φ2><φ2| for the carrier state, correlated noise on wires 2..t,
        then U_{0,e_1} ⊗ ... ⊗ U_{0,e_t}; compared with the noiseless
        state after the same Pauli layer.

        Raises:
            ResourceCapExceeded: d^t above the density-matrix cap
        """
        kind = ChannelKind(kind)
        NoiseService._check_parameters(d, t, mu)
        if d ** t > cap:
            raise ResourceCapExceeded(f"d^t = {d ** t} exceeds the density-matrix cap of {cap}")
        exponents = list(exponents) if exponents is not None else [1] * t
        if len(exponents) != t:
            raise ValueError(f"Expected {t} exponents, got {len(exponents)}")

        phi2 = QuditSimulator.prepare_ghz(d, t)
        rho = DensityMatrix.from_pure(phi2)
        rho1 = QuditSimulator.apply_channel_correlated(rho, KrausChannel(kind, mu, d), range(2, t + 1))

        gates = [QuditSimulator.pauli_matrix(d, 0, e % d) for e in exponents]
        rho_out = QuditSimulator.apply_local_unitaries(rho1, gates)
        phi3 = phi2
        for wire, e in enumerate(exponents, start=1):
            phi3 = QuditSimulator.pauli(phi3, wire, 0, e % d)
        return QuditSimulator.fidelity(phi3, rho_out)

    @staticmethod
    def mu_grid(steps: int) -> List[float]:
        """steps evenly spaced values from 0 to 1 inclusive."""
        if steps < 1:
            raise ValueError("mu grid needs at least one step")
        if steps == 1:
            return [0.0]
        return [float(mu) for mu in np.linspace(0.0, 1.0, steps)]

    @staticmethod
    def _row(scenario: NoiseScenario, mu: float, simulate: bool, cap: int) -> FidelityRow:
        formula = NoiseService.fidelity_formula(scenario.kind, scenario.d, scenario.t, mu)
        simulated = None
        if simulate:
            simulated = NoiseService.fidelity_simulated(
                scenario.kind, scenario.d, scenario.t, mu, scenario.exponents, cap
            )
        return FidelityRow(scenario.kind, scenario.d, scenario.t, mu, formula, simulated)

    @staticmethod
    def sweep(
        scenario: NoiseScenario,
        simulate: bool = False,
        workers: int = 1,
        cap: int = DENSITY_MATRIX_CAP
    ) -> List[FidelityRow]:
        """
        One row per mu in the scenario grid, in grid order.

        Args:
            scenario: Channel, dimensions and grid
            simulate: Also run the density-matrix pipeline per row
            workers: Thread pool size; rows are independent
            cap: Density-matrix cap for simulated rows
        """
        if simulate and scenario.d ** scenario.t > cap:
            raise ResourceCapExceeded(
                f"d^t = {scenario.d ** scenario.t} exceeds the density-matrix cap of {cap}"
            )

        def compute(mu):
            return NoiseService._row(scenario, mu, simulate, cap)

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(compute, scenario.mu_grid))
        else:
            rows = [compute(mu) for mu in scenario.mu_grid]
        logger.debug(
            f"Swept {scenario.kind.value} d={scenario.d} t={scenario.t} over {len(rows)} point(s)"
            f"{' with simulation' if simulate else ''}"
        )
        return rows

    @staticmethod
    def figure_grid(mu_steps: int = 21) -> List[FidelityRow]:
        """Formula-only rows for every channel, t in (5, 12) and d in (2, 3, 7, 13, 29, 53, 229)."""
        grid = tuple(NoiseService.mu_grid(mu_steps))
        rows: List[FidelityRow] = []
        for kind in ChannelKind:
            for t in FIGURE_T:
                for d in FIGURE_D:
                    rows.extend(NoiseService.sweep(NoiseScenario(kind, d, t, grid)))
        return rows

    @staticmethod
    def max_delta(rows: Iterable[FidelityRow]) -> float:
        deltas = [row.abs_delta for row in rows if row.abs_delta is not None]
        return max(deltas) if deltas else 0.0

    @staticmethod
    def write_csv(rows: Iterable[FidelityRow], stream: TextIO):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.to_csv_fields())
