"""
Exact linear algebra over the prime field Z_d.

Every routine works on canonical residues stored in int64 numpy arrays and
reduces after each row operation, so nothing here is approximate.
"""
import logging
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from app.models.field import FieldMatrix, FieldVector, Modulus
from app.utils.errors import (
    DimensionMismatch, ModulusMismatch, NoSolution, NotEigenvector,
    RandomSearchExhausted, SingularMatrix, ZeroVector
)

logger = logging.getLogger(__name__)


def _rref(entries: np.ndarray, p: int, pivot_cols: Optional[int] = None) -> Tuple[np.ndarray, List[int]]:
    """
    Gauss-Jordan elimination mod p.

    Args:
        entries: Matrix to reduce (copied, never modified)
        p: Prime modulus
        pivot_cols: Only the first `pivot_cols` columns may hold pivots
            (the rest is an augmented block)

    Returns:
        Tuple of (reduced matrix, pivot column indices in row order)
    """
    a = np.array(entries, dtype=np.int64) % p
    n_rows, n_cols = a.shape
    limit = n_cols if pivot_cols is None else pivot_cols
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == n_rows:
            break
        candidates = np.nonzero(a[r:, c])[0]
        if candidates.size == 0:
            continue
        pivot_row = r + int(candidates[0])
        if pivot_row != r:
            a[[r, pivot_row]] = a[[pivot_row, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        factors = a[:, c].copy()
        factors[r] = 0
        a = (a - np.outer(factors, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


class FieldAlgebra:
    """Matrix products, inverses, solves and eigen checks over Z_d."""

    DEFAULT_MAX_ATTEMPTS = 1000

    @staticmethod
    def mat_mul(a: FieldMatrix, b: Union[FieldMatrix, FieldVector]) -> Union[FieldMatrix, FieldVector]:
        """
        Multiply a matrix by a matrix or by a column vector.

        Args:
            a: Left operand
            b: Right operand; a FieldVector is treated as a column

        Returns:
            FieldMatrix, or FieldVector when b is a vector
        """
        if a.modulus != b.modulus:
            raise ModulusMismatch(f"Cannot multiply over Z_{a.modulus.d} and Z_{b.modulus.d}")
        inner = len(b) if isinstance(b, FieldVector) else b.rows
        if a.cols != inner:
            raise DimensionMismatch(f"Cannot multiply {a.rows}x{a.cols} by an operand with {inner} rows")
        product = (a.entries @ b.entries) % a.modulus.d
        if isinstance(b, FieldVector):
            return FieldVector(a.modulus, product)
        return FieldMatrix(a.modulus, product)

    @staticmethod
    def mat_vec(a: FieldMatrix, v: FieldVector) -> FieldVector:
        """Matrix-vector product (sh = M rho)."""
        return FieldAlgebra.mat_mul(a, v)

    @staticmethod
    def rank(a: FieldMatrix) -> int:
        _, pivots = _rref(a.entries, a.modulus.d)
        return len(pivots)

    @staticmethod
    def mat_inverse(a: FieldMatrix) -> FieldMatrix:
        """
        Invert a square matrix by Gauss-Jordan elimination.

        Raises:
            DimensionMismatch: a is not square
            SingularMatrix: rank(a) < n
        """
        if not a.is_square:
            raise DimensionMismatch(f"Only square matrices can be inverted, got {a.rows}x{a.cols}")
        n = a.rows
        augmented = np.hstack([a.entries, np.eye(n, dtype=np.int64)])
        reduced, pivots = _rref(augmented, a.modulus.d, pivot_cols=n)
        if len(pivots) < n:
            raise SingularMatrix(f"Matrix has rank {len(pivots)} < {n} over Z_{a.modulus.d}")
        return FieldMatrix(a.modulus, reduced[:, n:])

    @staticmethod
    def solve_linear(a: FieldMatrix, b: FieldVector) -> FieldVector:
        """
        Canonical solution of a x = b.

        Pivots are taken from the last unknown toward the first and every
        free unknown is set to 0, so underdetermined systems always return
        the same vector.

        Raises:
            NoSolution: the system is inconsistent
        """
        if a.modulus != b.modulus:
            raise ModulusMismatch("Matrix and right-hand side use different moduli")
        if a.rows != len(b):
            raise DimensionMismatch(f"System has {a.rows} equations but b has length {len(b)}")
        p = a.modulus.d
        augmented = np.hstack([a.entries[:, ::-1], b.entries.reshape(-1, 1)])
        reduced, pivots = _rref(augmented, p, pivot_cols=a.cols)
        if np.any(reduced[len(pivots):, -1]):
            raise NoSolution("Linear system is inconsistent")
        reversed_solution = np.zeros(a.cols, dtype=np.int64)
        for row, col in enumerate(pivots):
            reversed_solution[col] = reduced[row, -1]
        return FieldVector(a.modulus, reversed_solution[::-1])

    @staticmethod
    def nullspace_basis(a: FieldMatrix) -> List[FieldVector]:
        """Basis of {x : a x = 0}, one vector per free column of the RREF."""
        p = a.modulus.d
        reduced, pivots = _rref(a.entries, p)
        basis = []
        for free in (c for c in range(a.cols) if c not in pivots):
            v = np.zeros(a.cols, dtype=np.int64)
            v[free] = 1
            for row, col in enumerate(pivots):
                v[col] = -reduced[row, free]
            basis.append(FieldVector(a.modulus, v))
        return basis

    @staticmethod
    def is_linearly_independent(vectors: Sequence[FieldVector]) -> bool:
        if not vectors:
            return True
        if len({v.modulus for v in vectors}) != 1:
            raise ModulusMismatch("Vectors use different moduli")
        if len({len(v) for v in vectors}) != 1:
            raise DimensionMismatch("Vectors must all have the same length")
        return FieldAlgebra.rank(FieldMatrix.from_vectors(vectors)) == len(vectors)

    @staticmethod
    def random_invertible(
        modulus: Modulus,
        n: int,
        rng: np.random.Generator,
        max_attempts: int = DEFAULT_MAX_ATTEMPTS
    ) -> FieldMatrix:
        """
        Sample a uniformly random invertible n x n matrix by rejection.

        Args:
            modulus: Field to sample over
            n: Matrix order (>= 1)
            rng: Seeded generator, the only source of randomness
            max_attempts: Rejection cap

        Returns:
            The first sampled matrix of full rank
        """
        if n < 1:
            raise DimensionMismatch(f"Matrix order must be positive, got {n}")
        for attempt in range(1, max_attempts + 1):
            candidate = rng.integers(0, modulus.d, size=(n, n), dtype=np.int64)
            _, pivots = _rref(candidate, modulus.d)
            if len(pivots) == n:
                logger.debug(f"Invertible {n}x{n} matrix over Z_{modulus.d} found after {attempt} attempt(s)")
                return FieldMatrix(modulus, candidate)
        raise RandomSearchExhausted(f"No invertible {n}x{n} matrix after {max_attempts} attempts")

    @staticmethod
    def eigenvalue_for_vector(x: FieldMatrix, y: FieldVector) -> int:
        """
        Return the s with x y = s y.

        s is read off the first nonzero component of y and then checked
        against every component.

        Raises:
            ZeroVector: y is zero
            NotEigenvector: no such s exists
        """
        if not x.is_square or x.cols != len(y):
            raise DimensionMismatch(f"Cannot apply a {x.rows}x{x.cols} matrix to a vector of length {len(y)}")
        if x.modulus != y.modulus:
            raise ModulusMismatch("Matrix and vector use different moduli")
        if y.is_zero():
            raise ZeroVector("Eigenvectors must be nonzero")
        p = x.modulus.d
        image = (x.entries @ y.entries) % p
        lead = int(np.nonzero(y.entries)[0][0])
        s = (int(image[lead]) * pow(int(y.entries[lead]), -1, p)) % p
        if np.any((image - s * y.entries) % p):
            raise NotEigenvector("x y is not a scalar multiple of y")
        return s
