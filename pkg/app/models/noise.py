"""Noise sweep inputs and result rows"""

from dataclasses import dataclass
from typing import Optional, Tuple

from app.models.field import Modulus
from app.models.quantum import ChannelKind

CSV_HEADER = ('kind', 'd', 't', 'mu', 'f_formula', 'f_simulated', 'abs_delta')


@dataclass(frozen=True)
class NoiseScenario:
    """
    One channel at fixed (d, t) over a grid of noise strengths.

    `exponents` feed the Pauli layer of the simulated path; they default
    to all ones.
    """

    kind: ChannelKind
    d: int
    t: int
    mu_grid: Tuple[float, ...]
    exponents: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', ChannelKind(self.kind))
        Modulus(self.d)
        if self.t < 2:
            raise ValueError(f"t must be at least 2, got {self.t}")
        grid = tuple(float(mu) for mu in self.mu_grid)
        if list(grid) != sorted(grid):
            raise ValueError("mu grid must be sorted ascending")
        if any(not 0.0 <= mu <= 1.0 for mu in grid):
            raise ValueError("mu values must lie in [0, 1]")
        object.__setattr__(self, 'mu_grid', grid)
        if self.exponents is None:
            object.__setattr__(self, 'exponents', (1,) * self.t)
        elif len(self.exponents) != self.t:
            raise ValueError(f"Expected {self.t} exponents, got {len(self.exponents)}")


@dataclass(frozen=True)
class FidelityRow:
    kind: ChannelKind
    d: int
    t: int
    mu: float
    f_formula: float
    f_simulated: Optional[float] = None

    @property
    def abs_delta(self) -> Optional[float]:
        if self.f_simulated is None:
            return None
        return abs(self.f_formula - self.f_simulated)

    def to_csv_fields(self) -> Tuple[str, ...]:
        simulated = '' if self.f_simulated is None else f'{self.f_simulated:.12g}'
        delta = '' if self.abs_delta is None else f'{self.abs_delta:.12g}'
        return (
            self.kind.value, str(self.d), str(self.t), f'{self.mu:.6f}',
            f'{self.f_formula:.12g}', simulated, delta
        )
