"""Validation utilities for scenario configuration documents"""

import json
import re
from typing import Any, Dict, List, Optional, Tuple

from sympy import Matrix, isprime

from app.models.access import MAX_PARTICIPANTS
from app.models.field import MAX_MODULUS
from app.utils.errors import ScenarioConfigError

SCENARIO_SCHEMA_VERSION = 1
BEHAVIOR_TYPES = ('honest', 'forge_shadows', 'forge_pauli')


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_int_list(value: Any) -> bool:
    return isinstance(value, list) and all(_is_int(x) for x in value)


def _is_int_matrix(value: Any) -> bool:
    return (
        isinstance(value, list) and len(value) > 0
        and all(isinstance(row, list) and len(row) > 0 and _is_int_list(row) for row in value)
    )


def load_json_document(path: str) -> Dict:
    """
    Read and decode a JSON scenario file.

    Args:
        path: File to read

    Returns:
        The decoded top-level object

    Raises:
        ScenarioConfigError: unreadable file, bad JSON (reported as
            path:line:column) or a top level that is not an object
    """
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise ScenarioConfigError([f"cannot read file: {e.strerror}"], source=path)

    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioConfigError([f"{path}:{e.lineno}:{e.colno}: {e.msg}"])

    if not isinstance(doc, dict):
        raise ScenarioConfigError([f"{path}:1: top level must be a JSON object"])
    return doc


def anchor_errors(errors: List[str], text: Optional[str], source: str) -> List[str]:
    """
    Prefix field errors with the line where their top-level key appears.

    Errors look like "matrix[1][2]: message"; the anchor is the first line
    containing "matrix" as a JSON key.
    """
    anchored = []
    for error in errors:
        key = re.split(r'[\[.:]', error, maxsplit=1)[0]
        line = None
        if text is not None:
            match = re.search(r'"' + re.escape(key) + r'"\s*:', text)
            if match:
                line = text.count('\n', 0, match.start()) + 1
        anchored.append(f"{source}:{line}: {error}" if line else f"{source}: {error}")
    return anchored


def validate_msp_section(doc: Dict, max_participants: int = MAX_PARTICIPANTS) -> Tuple[bool, List[str]]:
    """
    Validate the span program part of a scenario document.

    Checks:
    - schema_version is supported
    - modulus is a prime integer no larger than MAX_MODULUS
    - matrix is a rectangular integer matrix with at most max_participants rows
    - row_owners, when present, is a permutation of 1..m
    - access_structures lists minimal sets over 1..m, no more secrets than columns
    - targets, when present, are the standard one-hot vectors

    Args:
        doc: Decoded scenario document
        max_participants: Upper bound on matrix rows

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    if doc.get('schema_version') != SCENARIO_SCHEMA_VERSION:
        errors.append(f"schema_version: expected {SCENARIO_SCHEMA_VERSION}, got {doc.get('schema_version')!r}")

    d = doc.get('modulus')
    if not _is_int(d) or d < 2 or not isprime(d):
        errors.append(f"modulus: must be a prime integer >= 2, got {d!r}")
    elif d > MAX_MODULUS:
        errors.append(f"modulus: must be at most {MAX_MODULUS}, got {d}")

    matrix = doc.get('matrix')
    if not _is_int_matrix(matrix):
        errors.append("matrix: must be a non-empty list of non-empty integer rows")
        return (False, errors)
    if len({len(row) for row in matrix}) != 1:
        errors.append("matrix: all rows must have the same length")
        return (False, errors)
    m, l = len(matrix), len(matrix[0])
    if m > max_participants:
        errors.append(f"matrix: {m} participants exceed the cap of {max_participants}")

    owners = doc.get('row_owners')
    if owners is not None:
        if not _is_int_list(owners) or sorted(owners) != list(range(1, m + 1)):
            errors.append(f"row_owners: must be a permutation of 1..{m}")

    structures = doc.get('access_structures')
    if not isinstance(structures, list) or not structures:
        errors.append("access_structures: must be a non-empty list, one entry per secret")
        return (False, errors)
    if len(structures) > l:
        errors.append(f"access_structures: {len(structures)} secrets need at least that many matrix columns, got {l}")
    for i, gamma in enumerate(structures):
        if not isinstance(gamma, list):
            errors.append(f"access_structures[{i}]: must be a list of minimal sets")
            continue
        for j, minimal in enumerate(gamma):
            if not _is_int_list(minimal) or not minimal:
                errors.append(f"access_structures[{i}][{j}]: must be a non-empty list of participant numbers")
            elif any(not 1 <= p <= m for p in minimal):
                errors.append(f"access_structures[{i}][{j}]: participants must lie in 1..{m}")
            elif len(set(minimal)) != len(minimal):
                errors.append(f"access_structures[{i}][{j}]: duplicate participants")

    targets = doc.get('targets')
    if targets is not None:
        expected = [[1 if c == i else 0 for c in range(l)] for i in range(len(structures))]
        if targets != expected:
            errors.append("targets: ζ_i must be the i-th standard basis vector of length l")

    return (len(errors) == 0, errors)


def validate_dealer_section(doc: Dict, d: int, m: int, l: int, n: int) -> Tuple[bool, List[str]]:
    """
    Validate secrets, overrides and seed.

    A pinned y_matrix must be invertible over Z_d.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    secrets = doc.get('secrets')
    if not _is_int_list(secrets) or len(secrets) != n:
        errors.append(f"secrets: must list exactly {n} integer(s)")
    elif any(not 0 <= s < d for s in secrets):
        errors.append(f"secrets: every secret must lie in [0, {d - 1}]")

    tail = doc.get('rho_tail')
    if tail is not None and (not _is_int_list(tail) or len(tail) != l - n):
        errors.append(f"rho_tail: must list exactly {l - n} integer(s)")

    y = doc.get('y_matrix')
    if y is not None and (not _is_int_matrix(y) or len(y) != 2 * m or any(len(row) != 2 * m for row in y)):
        errors.append(f"y_matrix: must be a {2 * m}x{2 * m} integer matrix")
    elif y is not None and Matrix(y).det() % d == 0:
        errors.append(f"y_matrix: must be invertible mod {d}")

    seed = doc.get('seed')
    if seed is not None and (not _is_int(seed) or seed < 0):
        errors.append("seed: must be a non-negative integer")

    return (len(errors) == 0, errors)


def _validate_behavior(key: str, behavior: Any, d: int, m: int, members: List[int]) -> List[str]:
    errors = []
    where = f"scenario.behaviors.{key}"
    if not key.isdigit() or int(key) not in members:
        errors.append(f"{where}: participant must belong to the authorized set")
    if not isinstance(behavior, dict) or behavior.get('type') not in BEHAVIOR_TYPES:
        errors.append(f"{where}: type must be one of {', '.join(BEHAVIOR_TYPES)}")
        return errors

    if behavior['type'] == 'forge_pauli':
        delta = behavior.get('delta')
        if not _is_int(delta) or not 1 <= delta <= d - 1:
            errors.append(f"{where}.delta: must be an integer in [1, {d - 1}]")
    elif behavior['type'] == 'forge_shadows' and behavior.get('shadows') is not None:
        shadows = behavior['shadows']
        if not _is_int_matrix(shadows) or len(shadows) != 2 or any(len(y) != 2 * m for y in shadows):
            errors.append(f"{where}.shadows: must be two integer vectors of length {2 * m}")
    return errors


def validate_scenario_section(doc: Dict, d: int, m: int, n: int) -> Tuple[bool, List[str]]:
    """
    Validate the `scenario` block that drives a single run.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    scenario = doc.get('scenario')
    if not isinstance(scenario, dict):
        return (False, ["scenario: required object with target_secret and authorized_set"])

    errors = []
    target = scenario.get('target_secret')
    if not _is_int(target) or not 1 <= target <= n:
        errors.append(f"scenario.target_secret: must be an integer in 1..{n}")

    members = scenario.get('authorized_set')
    if not _is_int_list(members) or len(members) < 2:
        errors.append("scenario.authorized_set: must list at least two participants")
        members = []
    elif any(not 1 <= p <= m for p in members) or len(set(members)) != len(members):
        errors.append(f"scenario.authorized_set: participants must be distinct and lie in 1..{m}")

    behaviors = scenario.get('behaviors', {})
    if not isinstance(behaviors, dict):
        errors.append("scenario.behaviors: must map participant numbers to behaviors")
    else:
        for key, behavior in behaviors.items():
            errors.extend(_validate_behavior(key, behavior, d, m, members))

    eavesdropper = scenario.get('eavesdropper')
    if eavesdropper is not None:
        if not isinstance(eavesdropper, dict) or eavesdropper.get('type') != 'intercept_resend':
            errors.append("scenario.eavesdropper: type must be intercept_resend")
        else:
            wire = eavesdropper.get('wire')
            if not _is_int(wire) or not 2 <= wire <= max(len(members), 2):
                errors.append(f"scenario.eavesdropper.wire: must be an integer in 2..{max(len(members), 2)}")

    return (len(errors) == 0, errors)
