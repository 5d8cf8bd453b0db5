"""Span program builders shared by several test modules."""

import numpy as np

from app.models.access import MspInstance, MultiAccessStructure
from app.models.field import FieldMatrix, Modulus
from app.services.access_service import AccessService


def threshold_msp(d: int, t: int) -> MspInstance:
    """
    t-of-t span program: row 1 = e1 + e2, row k = -e_k + e_{k+1}, row t = -e_t.

    The rows sum to e1, so Ω recovers s_1 with λ = (1, ..., 1) and no
    proper subset learns anything.
    """
    modulus = Modulus(d)
    rows = np.zeros((t, t), dtype=np.int64)
    rows[0, 0] = 1
    if t > 1:
        rows[0, 1] = 1
    for k in range(1, t):
        rows[k, k] = -1
        if k + 1 < t:
            rows[k, k + 1] = 1
    matrix = FieldMatrix(modulus, rows)
    structure = MultiAccessStructure((AccessService.realized_structure(modulus, matrix, range(1, t + 1), 1),))
    return MspInstance(modulus, matrix, tuple(range(1, t + 1)), structure)


def random_msp(rng: np.random.Generator, d: int, m: int, l: int, n: int) -> MspInstance:
    """
    A random matrix paired with the structures it realizes.

    Resamples until every secret has at least one authorized set, so the
    result is a valid span program by construction.
    """
    modulus = Modulus(d)
    owners = tuple(range(1, m + 1))
    while True:
        matrix = FieldMatrix(modulus, rng.integers(0, d, size=(m, l)))
        structures = tuple(
            AccessService.realized_structure(modulus, matrix, owners, i) for i in range(1, n + 1)
        )
        if all(s.minimal_sets for s in structures):
            return MspInstance(modulus, matrix, owners, MultiAccessStructure(structures))
