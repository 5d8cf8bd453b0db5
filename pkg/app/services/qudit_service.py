"""
Dense qudit simulation.

Gates act on one wire at a time by contracting a d x d matrix into the
matching axis of the amplitude tensor. Density matrix work uses full
Kronecker products and is therefore kept to small registers.
"""
import logging
from functools import reduce
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from app.models.quantum import (
    ChannelKind, DensityMatrix, KrausChannel, QuditRegister, STATE_VECTOR_CAP
)
from app.utils.errors import DimensionMismatch, ResourceCapExceeded

logger = logging.getLogger(__name__)


class QuditSimulator:
    """State-vector and density-matrix operations on qudit registers"""

    IMAGINARY_TOLERANCE = 1e-12
    RANGE_TOLERANCE = 1e-9

    # ---- single-qudit matrices ----

    @staticmethod
    def omega(d: int) -> complex:
        return np.exp(2j * np.pi / d)

    @staticmethod
    def qft_matrix(d: int) -> np.ndarray:
        """F[z, x] = ω^{xz} / √d, so F|x> = (1/√d) Σ_z ω^{xz}|z>."""
        z, x = np.meshgrid(np.arange(d), np.arange(d), indexing='ij')
        return np.exp(2j * np.pi * ((x * z) % d) / d) / np.sqrt(d)

    @staticmethod
    def pauli_matrix(d: int, a: int, b: int) -> np.ndarray:
        """U_{a,b}|z> = ω^{bz}|z+a>."""
        if not (0 <= a < d and 0 <= b < d):
            raise ValueError(f"Pauli parameters must lie in [0, {d - 1}], got a={a}, b={b}")
        u = np.zeros((d, d), dtype=np.complex128)
        for z in range(d):
            u[(z + a) % d, z] = np.exp(2j * np.pi * ((b * z) % d) / d)
        return u

    @staticmethod
    def weyl_operator(d: int, m: int, n: int) -> np.ndarray:
        """Û_{m,n} = Σ_z ω^{mz}|z><z+n|."""
        u = np.zeros((d, d), dtype=np.complex128)
        for z in range(d):
            u[z, (z + n) % d] = np.exp(2j * np.pi * ((m * z) % d) / d)
        return u

    # ---- state-vector gates ----

    @staticmethod
    def _check_wire(register: QuditRegister, wire: int):
        if not 1 <= wire <= register.t:
            raise IndexError(f"Wire {wire} outside 1..{register.t}")

    @staticmethod
    def apply_gate(register: QuditRegister, gate: np.ndarray, wire: int) -> QuditRegister:
        """Apply a d x d matrix to one wire, identity elsewhere."""
        QuditSimulator._check_wire(register, wire)
        if gate.shape != (register.d, register.d):
            raise DimensionMismatch(f"Gate must be {register.d}x{register.d}, got {gate.shape}")
        axis = wire - 1
        tensor = np.tensordot(gate, register.as_tensor(), axes=([1], [axis]))
        tensor = np.moveaxis(tensor, 0, axis)
        return QuditRegister(register.d, register.t, tensor.reshape(-1))

    @staticmethod
    def qft(register: QuditRegister, wire: int) -> QuditRegister:
        return QuditSimulator.apply_gate(register, QuditSimulator.qft_matrix(register.d), wire)

    @staticmethod
    def iqft(register: QuditRegister, wire: int) -> QuditRegister:
        return QuditSimulator.apply_gate(register, QuditSimulator.qft_matrix(register.d).conj().T, wire)

    @staticmethod
    def pauli(register: QuditRegister, wire: int, a: int, b: int) -> QuditRegister:
        return QuditSimulator.apply_gate(register, QuditSimulator.pauli_matrix(register.d, a, b), wire)

    @staticmethod
    def sum_gate(register: QuditRegister, control: int, target: int) -> QuditRegister:
        """|α>_control |β>_target -> |α>|α+β mod d>."""
        QuditSimulator._check_wire(register, control)
        QuditSimulator._check_wire(register, target)
        if control == target:
            raise ValueError("SUM needs distinct control and target wires")
        d = register.d
        tensor = register.as_tensor()
        result = np.empty_like(tensor)
        # Target axis index once the control axis is sliced away
        target_axis = target - 1 if target < control else target - 2
        for alpha in range(d):
            index = [slice(None)] * register.t
            index[control - 1] = alpha
            result[tuple(index)] = np.roll(tensor[tuple(index)], alpha, axis=target_axis)
        return QuditRegister(d, register.t, result.reshape(-1))

    # ---- measurement ----

    @staticmethod
    def measure_all(register: QuditRegister, rng: np.random.Generator) -> Tuple[Tuple[int, ...], QuditRegister]:
        """
        Born-rule measurement of every wire.

        Returns:
            Tuple of (per-wire outcomes, collapsed basis state)
        """
        probabilities = np.abs(register.amplitudes) ** 2
        probabilities = probabilities / probabilities.sum()
        index = int(rng.choice(probabilities.size, p=probabilities))
        outcome = register.digits_of(index)
        return outcome, QuditRegister.basis(register.d, register.t, outcome)

    @staticmethod
    def measure_wire(register: QuditRegister, wire: int, rng: np.random.Generator) -> Tuple[int, QuditRegister]:
        """Measure one wire in the computational basis and renormalize the rest."""
        QuditSimulator._check_wire(register, wire)
        axis = wire - 1
        tensor = register.as_tensor()
        weights = np.abs(tensor) ** 2
        marginal = weights.sum(axis=tuple(a for a in range(register.t) if a != axis))
        marginal = marginal / marginal.sum()
        outcome = int(rng.choice(register.d, p=marginal))
        collapsed = np.zeros_like(tensor)
        index = [slice(None)] * register.t
        index[axis] = outcome
        collapsed[tuple(index)] = tensor[tuple(index)]
        collapsed = collapsed / np.sqrt(marginal[outcome] * weights.sum())
        return outcome, QuditRegister(register.d, register.t, collapsed.reshape(-1))

    # ---- entangled carrier ----

    @staticmethod
    def prepare_ghz(d: int, t: int, cap: int = STATE_VECTOR_CAP) -> QuditRegister:
        """
        (1/√d) Σ_v |v>^{⊗t}, built as a circuit.

        Start from |0...0>, apply F on wire 1, then SUM from wire 1 onto
        each other wire. `cap` can only tighten the register cap.
        """
        if d ** t > cap:
            raise ResourceCapExceeded(f"d^t = {d ** t} exceeds the cap of {cap}")
        register = QuditSimulator.qft(QuditRegister.zeros(d, t), 1)
        for target in range(2, t + 1):
            register = QuditSimulator.sum_gate(register, 1, target)
        return register

    @staticmethod
    def ghz_formula_state(d: int, t: int, phase_exponent: int = 0) -> QuditRegister:
        """(1/√d) Σ_v ω^{S v}|v>^{⊗t} written down directly, S = phase_exponent."""
        if d ** t > STATE_VECTOR_CAP:
            raise ResourceCapExceeded(f"d^t = {d ** t} exceeds the cap of {STATE_VECTOR_CAP}")
        amplitudes = np.zeros(d ** t, dtype=np.complex128)
        stride = sum(d ** k for k in range(t))
        for v in range(d):
            amplitudes[v * stride] = np.exp(2j * np.pi * ((phase_exponent * v) % d) / d) / np.sqrt(d)
        return QuditRegister(d, t, amplitudes)

    # ---- noise ----

    @staticmethod
    def kraus_operators(channel: KrausChannel) -> List[np.ndarray]:
        """
        Kraus operators of the channel, identity-like operator first.

        dit-flip:      √(1-μ) Û_{0,0}, √(μ/(d-1)) Û_{0,n} for n = 1..d-1
        d-phase-flip:  √(1-μ) Û_{0,0}, √(μ/(d-1)) Û_{m,0} for m = 1..d-1
        amp. damping:  E_0 = |0><0| + √(1-μ) Σ_{z>=1}|z><z|, E_z = √μ |0><z|
        """
        d, mu = channel.d, channel.mu
        if channel.kind is ChannelKind.AMPLITUDE_DAMPING:
            e0 = np.diag([1.0] + [np.sqrt(1 - mu)] * (d - 1)).astype(np.complex128)
            operators = [e0]
            for z in range(1, d):
                ez = np.zeros((d, d), dtype=np.complex128)
                ez[0, z] = np.sqrt(mu)
                operators.append(ez)
            return operators

        weyl = QuditSimulator.weyl_operator
        operators = [np.sqrt(1 - mu) * weyl(d, 0, 0)]
        for k in range(1, d):
            op = weyl(d, 0, k) if channel.kind is ChannelKind.DIT_FLIP else weyl(d, k, 0)
            operators.append(np.sqrt(mu / (d - 1)) * op)
        return operators

    @staticmethod
    def kraus_completeness(operators: Sequence[np.ndarray]) -> np.ndarray:
        """Σ E†E, which equals I for a valid channel."""
        return sum(op.conj().T @ op for op in operators)

    @staticmethod
    def _extend(operator: np.ndarray, d: int, t: int, wires: Iterable[int]) -> np.ndarray:
        wires = set(wires)
        identity = np.eye(d, dtype=np.complex128)
        return reduce(np.kron, [operator if w in wires else identity for w in range(1, t + 1)])

    @staticmethod
    def apply_channel_correlated(rho: DensityMatrix, channel: KrausChannel, wires: Iterable[int]) -> DensityMatrix:
        """
        ρ' = Σ_k E_k^{(wires)} ρ E_k^{(wires)}†.

        The same Kraus index acts on every listed wire at once; unlisted
        wires see the identity.
        """
        wires = sorted(set(wires))
        if not wires:
            raise ValueError("At least one noisy wire is required")
        if wires[0] < 1 or wires[-1] > rho.t:
            raise IndexError(f"Noisy wires must lie in 1..{rho.t}")
        if channel.d != rho.d:
            raise DimensionMismatch(f"Channel acts on d={channel.d}, state has d={rho.d}")

        result = np.zeros_like(rho.entries)
        for op in QuditSimulator.kraus_operators(channel):
            full = QuditSimulator._extend(op, rho.d, rho.t, wires)
            result += full @ rho.entries @ full.conj().T
        return DensityMatrix(rho.d, rho.t, result)

    @staticmethod
    def apply_local_unitaries(rho: DensityMatrix, gates: Sequence[np.ndarray]) -> DensityMatrix:
        """Conjugate ρ by U_1 ⊗ ... ⊗ U_t."""
        if len(gates) != rho.t:
            raise DimensionMismatch(f"Expected {rho.t} gates, got {len(gates)}")
        full = reduce(np.kron, gates)
        return DensityMatrix(rho.d, rho.t, full @ rho.entries @ full.conj().T)

    @staticmethod
    def channel_trace_weight(channel: KrausChannel, n_wires: int) -> float:
        """
        Trace of the correlated channel output for any unit-trace input.

        Only defined for channels whose Kraus operators are scaled
        unitaries (dit-flip and d-phase-flip): Σ_k c_k^n with E_k†E_k = c_k I.
        """
        if channel.kind is ChannelKind.AMPLITUDE_DAMPING:
            raise ValueError("Amplitude damping output trace depends on the input state")
        d, mu = channel.d, channel.mu
        return (1 - mu) ** n_wires + (d - 1) * (mu / (d - 1)) ** n_wires

    @staticmethod
    def fidelity(phi: QuditRegister, rho: DensityMatrix) -> float:
        """
        <φ|ρ|φ> as a real number in [0, 1].

        Raises:
            ValueError: the overlap has an imaginary part or lies outside
                [0, 1] beyond tolerance
        """
        if (phi.d, phi.t) != (rho.d, rho.t):
            raise DimensionMismatch("State and density matrix describe different registers")
        value = complex(np.vdot(phi.amplitudes, rho.entries @ phi.amplitudes))
        if abs(value.imag) > QuditSimulator.IMAGINARY_TOLERANCE:
            raise ValueError(f"Fidelity has imaginary residue {value.imag}")
        tol = QuditSimulator.RANGE_TOLERANCE
        if not -tol <= value.real <= 1 + tol:
            raise ValueError(f"Fidelity {value.real} outside [0, 1]")
        return float(np.clip(value.real, 0.0, 1.0))

    @staticmethod
    def root_of_unity_sum(d: int, x: int) -> complex:
        """Σ_{y=0}^{d-1} ω^{xy}: d when x ≡ 0 mod d, otherwise 0."""
        y = np.arange(d)
        return complex(np.sum(np.exp(2j * np.pi * ((x * y) % d) / d)))
