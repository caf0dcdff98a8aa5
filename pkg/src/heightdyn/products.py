"""Structure of dominant endomorphisms of a product of projective spaces.

Writing the product as prod_i P^{n_i} with dims sorted ascending, the
multidegree matrix M of a dominant endomorphism (entry M[u][v] is the
degree of target factor v in source block u) is constrained as follows.

* A column is realizable by a morphism onto P^{n_v} only if blocks of
  dimension larger than n_v contribute degree 0, and the blocks that do
  contribute satisfy sum (n_u + 1) <= n_v + 1: a nonconstant map
  P^a -> P^b forces a <= b, and the contributing blocks embed jointly.
* Dominance kills all coupling between blocks of different dimension,
  so M is block diagonal with respect to the dimension groups.
* Within one group of equal-dimension factors, each target reads from
  exactly one source factor and each source factor feeds exactly one
  target: a permutation sigma with positive degrees d_v, acting as
  pullback(E_v) = d_v E_{sigma(v)}.

Raising M to N = lcm of sigma's cycle lengths therefore yields a
diagonal matrix, and the height expansion and contraction rates of the
N-th iterate are its smallest and largest diagonal entries.

Indices here are 0-based; dims must be sorted ascending on entry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .coefficients import NotDominantError, PullbackMap, mu1, mu2
from .lattice import DivisorClass, PicardLattice

IntMatrix = tuple[tuple[int, ...], ...]


class ClassificationError(ValueError):
    """The matrix does not fit the structure of a dominant endomorphism."""


class NotBlockDiagonalError(ClassificationError):
    """Coupling between blocks of different dimension."""


@dataclass(frozen=True)
class AdmissibilityCheck:
    ok: bool
    forced_zero: tuple[int, ...]
    reason: str | None = None


def admissible_row(degrees: Sequence[int], dims: Sequence[int],
                   m: int) -> AdmissibilityCheck:
    """Whether degrees d_u can arise from a morphism prod P^{n_u} -> P^m
    that is nonconstant exactly on the support of d.

    forced_zero lists the blocks with n_u > m, which must all carry
    degree 0.  The surviving support must satisfy
    sum (n_u + 1) <= m + 1.
    """
    if len(degrees) != len(dims):
        raise ClassificationError("degree list does not match dims")
    if any(d < 0 for d in degrees):
        raise ClassificationError("degrees must be non-negative")
    forced = tuple(u for u, n in enumerate(dims) if n > m)
    for u in forced:
        if degrees[u] != 0:
            return AdmissibilityCheck(
                False, forced,
                f"block {u} has dimension {dims[u]} > {m}; "
                "no nonconstant map to the target exists")
    support = [u for u, d in enumerate(degrees) if d > 0]
    weight = sum(dims[u] + 1 for u in support)
    if weight > m + 1:
        return AdmissibilityCheck(
            False, forced,
            f"supporting blocks need {weight} coordinates, target has {m + 1}")
    return AdmissibilityCheck(True, forced)


def _check_square(matrix: Sequence[Sequence[int]],
                  dims: Sequence[int]) -> IntMatrix:
    k = len(dims)
    if len(matrix) != k or any(len(row) != k for row in matrix):
        raise ClassificationError(f"matrix must be {k} x {k} to match dims")
    rows = tuple(tuple(int(x) for x in row) for row in matrix)
    for row in rows:
        for x in row:
            if x < 0:
                raise ClassificationError("multidegrees must be non-negative")
    return rows


def _require_sorted(dims: Sequence[int]) -> tuple[int, ...]:
    out = tuple(int(n) for n in dims)
    if any(n < 0 for n in out):
        raise ClassificationError("dimensions must be non-negative")
    if list(out) != sorted(out):
        raise ClassificationError("dims must be sorted ascending")
    return out


def check_block_triangular(matrix: Sequence[Sequence[int]],
                           dims: Sequence[int]) -> bool:
    """Necessary conditions for a multidegree matrix of an endomorphism:
    every column is admissible for its target dimension; in particular
    entries with source dimension exceeding target dimension vanish."""
    dims = _require_sorted(dims)
    rows = _check_square(matrix, dims)
    for v, m in enumerate(dims):
        column = [rows[u][v] for u in range(len(dims))]
        if not admissible_row(column, dims, m).ok:
            return False
    return True


@dataclass(frozen=True)
class BlockStructure:
    """Permutation-with-degrees normal form of a dominant endomorphism.

    blocks groups the factor indices by equal dimension, ascending.
    sigma[v] is the source factor feeding target v; degrees[v] is its
    degree, so the pullback acts by E_v -> d_v E_{sigma(v)}.
    """

    dims: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]
    sigma: tuple[int, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        k = len(self.dims)
        if sorted(self.sigma) != list(range(k)):
            raise ClassificationError("sigma is not a permutation")
        if len(self.degrees) != k or any(d < 1 for d in self.degrees):
            raise ClassificationError("degrees must be positive, one per factor")
        if list(self.dims) != sorted(self.dims):
            raise ClassificationError("dims must be sorted ascending")
        covered = sorted(i for block in self.blocks for i in block)
        if covered != list(range(k)):
            raise ClassificationError("blocks must partition the factors")
        for block in self.blocks:
            dims_here = {self.dims[i] for i in block}
            if len(dims_here) != 1:
                raise ClassificationError("a block mixes dimensions")
            for v in block:
                if self.sigma[v] not in block:
                    raise ClassificationError("sigma does not preserve blocks")

    def matrix(self) -> IntMatrix:
        """The multidegree matrix realising this structure."""
        k = len(self.dims)
        rows = [[0] * k for _ in range(k)]
        for v in range(k):
            rows[self.sigma[v]][v] = self.degrees[v]
        return tuple(tuple(row) for row in rows)


def _dimension_blocks(dims: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    blocks: list[list[int]] = []
    for i, n in enumerate(dims):
        if blocks and dims[blocks[-1][0]] == n:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return tuple(tuple(b) for b in blocks)


def classify_dominant(matrix: Sequence[Sequence[int]],
                      dims: Sequence[int]) -> BlockStructure:
    """Extract the permutation-with-degrees form of a dominant
    endomorphism's multidegree matrix.

    Raises ClassificationError when a column cannot come from a
    morphism, NotBlockDiagonalError on cross-dimension coupling, and
    NotDominantError when the within-block pattern fails to be a
    permutation (a constant target or an unused source factor).
    """
    dims = _require_sorted(dims)
    rows = _check_square(matrix, dims)
    k = len(dims)
    for v in range(k):
        column = [rows[u][v] for u in range(k)]
        verdict = admissible_row(column, dims, dims[v])
        if not verdict.ok:
            raise ClassificationError(f"column {v}: {verdict.reason}")
    for u in range(k):
        for v in range(k):
            if dims[u] != dims[v] and rows[u][v] != 0:
                raise NotBlockDiagonalError(
                    f"not block-diagonal: entry ({u}, {v}) couples dimension "
                    f"{dims[u]} to dimension {dims[v]}, impossible for a "
                    "dominant endomorphism")
    sigma = [-1] * k
    degrees = [0] * k
    blocks = _dimension_blocks(dims)
    for block in blocks:
        for v in block:
            feeding = [u for u in block if rows[u][v] > 0]
            if not feeding:
                raise NotDominantError(
                    f"not dominant: target factor {v} has constant pullback")
            # column admissibility leaves at most one feeder per column
            sigma[v] = feeding[0]
            degrees[v] = rows[feeding[0]][v]
        used = {sigma[v] for v in block}
        if len(used) != len(block):
            missing = sorted(set(block) - used)
            raise NotDominantError(
                f"not dominant: source factor {missing[0]} feeds no target")
    return BlockStructure(dims, blocks, tuple(sigma), tuple(degrees))


def diagonalization_power(structure: BlockStructure) -> int:
    """Least N with sigma^N = id: the lcm of sigma's cycle lengths."""
    sigma = structure.sigma
    seen = [False] * len(sigma)
    lengths = []
    for start in range(len(sigma)):
        if seen[start]:
            continue
        length = 0
        v = start
        while not seen[v]:
            seen[v] = True
            v = sigma[v]
            length += 1
        lengths.append(length)
    return math.lcm(*lengths)


def _int_matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    k = len(A)
    return tuple(
        tuple(sum(A[i][l] * B[l][j] for l in range(k)) for j in range(k))
        for i in range(k))


def int_matrix_power(matrix: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """Exact n-th power of a square integer matrix, n >= 0."""
    rows = tuple(tuple(int(x) for x in row) for row in matrix)
    k = len(rows)
    result = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    base = rows
    while n:
        if n & 1:
            result = _int_matmul(result, base)
        base = _int_matmul(base, base)
        n >>= 1
    return result


@dataclass(frozen=True)
class PowerCoefficients:
    power: int
    matrix: IntMatrix
    mu1: int
    mu2: int


def power_coefficients(structure: BlockStructure,
                       matrix: Sequence[Sequence[int]],
                       D: DivisorClass,
                       L: PicardLattice) -> PowerCoefficients:
    """Coefficients of the diagonalising iterate: M^N is diagonal, mu1
    and mu2 of the iterate are its extreme diagonal entries, independent
    of the ample class D.  The generic coefficient routine is run on
    M^N as a cross-check before returning.
    """
    rows = _check_square(matrix, structure.dims)
    if structure.matrix() != rows and classify_dominant(rows, structure.dims) != structure:
        raise ClassificationError("matrix does not match the block structure")
    N = diagonalization_power(structure)
    powered = int_matrix_power(rows, N)
    k = len(rows)
    for i in range(k):
        for j in range(k):
            if i != j and powered[i][j] != 0:
                raise ClassificationError(
                    "internal: the diagonalising power is not diagonal")
    diag = [powered[i][i] for i in range(k)]
    lo, hi = min(diag), max(diag)
    check1 = mu1(PullbackMap.from_rows(powered), D, L)
    check2 = mu2(PullbackMap.from_rows(powered), D, L)
    if not (check1.exact and check1.value == lo and check2.exact
            and check2.value == hi):
        raise ClassificationError(
            "internal: cone computation disagrees with the diagonal")
    return PowerCoefficients(power=N, matrix=powered, mu1=lo, mu2=hi)
