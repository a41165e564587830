"""
Symplectic gluing matrices over Z and their handlebody double cosets.

A genus-g matrix H = [[R, P], [S, Q]] is symplectic when H^T J H = J for
J = [[0, I], [-I, 0]]. The handlebody subgroup consists of the symplectic
matrices with P = 0; it is generated by the Omega factors [[I, 0], [Z, I]]
(Z symmetric) and the Sigma factors [[A, 0], [0, A^-T]] (A unimodular).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Sequence

from heegaard.errors import ConsistencyError, DimensionError, NotSymplecticError
from heegaard.matrices import IntegerMatrix, smith_normal_form
from heegaard.numtheory import extended_gcd

logger = logging.getLogger(__name__)


def standard_j(genus: int) -> IntegerMatrix:
    eye = IntegerMatrix.identity(genus)
    zero = IntegerMatrix.zeros(genus)
    return IntegerMatrix.from_blocks([[zero, eye], [-eye, zero]])


def symplectic_violation(M: IntegerMatrix) -> str | None:
    """Name of the first block identity M violates, or None if M is symplectic."""
    g = M.rows // 2
    R, P = M.block(0, g, 0, g), M.block(0, g, g, 2 * g)
    S, Q = M.block(g, 2 * g, 0, g), M.block(g, 2 * g, g, 2 * g)
    checks = (
        ("R^T S symmetric", lambda: (R.T @ S).is_symmetric()),
        ("P^T Q symmetric", lambda: (P.T @ Q).is_symmetric()),
        ("R P^T symmetric", lambda: (R @ P.T).is_symmetric()),
        ("S Q^T symmetric", lambda: (S @ Q.T).is_symmetric()),
        ("R^T Q - S^T P = I", lambda: R.T @ Q - S.T @ P == IntegerMatrix.identity(g)),
    )
    for name, holds in checks:
        if not holds():
            return name
    return None


@dataclass(frozen=True)
class SymplecticMatrix:
    """
    A 2g x 2g integer matrix satisfying the symplectic constraints.

    Construction verifies the constraints and raises NotSymplecticError
    naming the failing block identity.
    """

    genus: int
    matrix: IntegerMatrix

    def __post_init__(self):
        if self.matrix.shape != (2 * self.genus, 2 * self.genus):
            raise DimensionError(
                f"genus {self.genus} needs a {2 * self.genus}x{2 * self.genus} matrix, got {self.matrix.shape}"
            )
        failing = symplectic_violation(self.matrix)
        if failing is not None:
            raise NotSymplecticError(failing)

    @classmethod
    def from_blocks(cls, R: IntegerMatrix, P: IntegerMatrix, S: IntegerMatrix, Q: IntegerMatrix) -> SymplecticMatrix:
        return cls(R.rows, IntegerMatrix.from_blocks([[R, P], [S, Q]]))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> SymplecticMatrix:
        return validate_symplectic(IntegerMatrix.from_rows(rows))

    @classmethod
    def identity(cls, genus: int) -> SymplecticMatrix:
        return cls(genus, IntegerMatrix.identity(2 * genus))

    @classmethod
    def j(cls, genus: int) -> SymplecticMatrix:
        return cls(genus, standard_j(genus))

    @property
    def R(self) -> IntegerMatrix:
        return self.matrix.block(0, self.genus, 0, self.genus)

    @property
    def P(self) -> IntegerMatrix:
        return self.matrix.block(0, self.genus, self.genus, 2 * self.genus)

    @property
    def S(self) -> IntegerMatrix:
        return self.matrix.block(self.genus, 2 * self.genus, 0, self.genus)

    @property
    def Q(self) -> IntegerMatrix:
        return self.matrix.block(self.genus, 2 * self.genus, self.genus, 2 * self.genus)

    def __matmul__(self, other: SymplecticMatrix) -> SymplecticMatrix:
        return SymplecticMatrix(self.genus, self.matrix @ other.matrix)

    def inverse(self) -> SymplecticMatrix:
        """[[R, P], [S, Q]]^-1 = [[Q^T, -P^T], [-S^T, R^T]]."""
        return SymplecticMatrix.from_blocks(self.Q.T, -self.P.T, -self.S.T, self.R.T)

    def transpose(self) -> SymplecticMatrix:
        return SymplecticMatrix(self.genus, self.matrix.T)

    def __str__(self) -> str:
        return str(self.matrix)


def validate_symplectic(M: IntegerMatrix) -> SymplecticMatrix:
    """
    Wrap M as a SymplecticMatrix.

    Raises:
        DimensionError: M is not square of even dimension
        NotSymplecticError: a block identity fails
    """
    if not M.is_square or M.rows % 2:
        raise DimensionError(f"a symplectic matrix must be square of even size, got {M.shape}")
    return SymplecticMatrix(M.rows // 2, M)


def in_handlebody_subgroup(H: SymplecticMatrix) -> bool:
    return H.P.is_zero()


def omega(Z: IntegerMatrix) -> SymplecticMatrix:
    """[[I, 0], [Z, I]] for symmetric Z."""
    g = Z.rows
    return SymplecticMatrix.from_blocks(IntegerMatrix.identity(g), IntegerMatrix.zeros(g), Z, IntegerMatrix.identity(g))


def sigma(A: IntegerMatrix, A_inv: IntegerMatrix | None = None) -> SymplecticMatrix:
    """[[A, 0], [0, A^-T]] for unimodular A."""
    g = A.rows
    inverse = A_inv if A_inv is not None else A.inverse_unimodular()
    return SymplecticMatrix.from_blocks(A, IntegerMatrix.zeros(g), IntegerMatrix.zeros(g), inverse.T)


def stabilize(H: SymplecticMatrix, k: int) -> SymplecticMatrix:
    """Border the blocks: R -> 0_k + R, P -> I_k + P, S -> -I_k + S, Q -> 0_k + Q."""
    if k < 0:
        raise ValueError(f"stabilization index must be >= 0, got {k}")
    if k == 0:
        return H
    zero, eye = IntegerMatrix.zeros(k), IntegerMatrix.identity(k)
    return SymplecticMatrix.from_blocks(
        IntegerMatrix.direct_sum(zero, H.R),
        IntegerMatrix.direct_sum(eye, H.P),
        IntegerMatrix.direct_sum(-eye, H.S),
        IntegerMatrix.direct_sum(zero, H.Q),
    )


def related_representatives(H: SymplecticMatrix) -> dict[str, SymplecticMatrix]:
    """The four matrices H, H^T, H^-1, (H^T)^-1 whose double cosets describe the same splitting up to orientation and handlebody choices."""
    return {
        "H": H,
        "H^T": H.transpose(),
        "H^-1": H.inverse(),
        "(H^T)^-1": H.transpose().inverse(),
    }


@dataclass(frozen=True)
class PartialNormalForm:
    """
    Partial normal form of a gluing matrix, certified by handlebody witnesses.

    normalized = left @ original @ right, with left and right in the
    handlebody subgroup. The normalized blocks are
    R = diag(0_s, R2, I_r), P = diag(I_s, T, 0_r), S = diag(-I_s, S2, 0_r),
    Q = diag(0_s, Q2, I_r) with T = diag(tau) and core = [[R2, T], [S2, Q2]].
    """

    original: SymplecticMatrix
    normalized: SymplecticMatrix
    t: int
    r: int
    stab_index: int
    tau: tuple[int, ...]
    core: SymplecticMatrix
    left: SymplecticMatrix
    right: SymplecticMatrix

    @property
    def q2(self) -> IntegerMatrix:
        return self.core.Q

    @property
    def r2(self) -> IntegerMatrix:
        return self.core.R

    @property
    def minimal_genus(self) -> int:
        return self.t + self.r

    def is_certified(self) -> bool:
        return (
            in_handlebody_subgroup(self.left)
            and in_handlebody_subgroup(self.right)
            and self.left @ self.original @ self.right == self.normalized
        )


def _mutable(M: IntegerMatrix) -> list[list[int]]:
    return M.tolist()


def _frozen(rows: list[list[int]], g: int) -> IntegerMatrix:
    return IntegerMatrix.from_rows(rows, cols=g)


def _identity_pattern(H: SymplecticMatrix, n: int) -> SymplecticMatrix:
    """Keep the first n indices of R, S, Q and put the identity pattern on the rest."""
    g = H.genus
    R, S, Q = _mutable(H.R), _mutable(H.S), _mutable(H.Q)
    for a in range(g):
        for b in range(g):
            if a >= n or b >= n:
                diagonal = int(a == b)
                R[a][b] = diagonal
                Q[a][b] = diagonal
                S[a][b] = 0
    return SymplecticMatrix.from_blocks(_frozen(R, g), H.P, _frozen(S, g), _frozen(Q, g))


def _check_block_shape(M: SymplecticMatrix, s: int, t: int) -> None:
    g = M.genus
    n = s + t

    def block_of(i: int) -> int:
        return 0 if i < s else 1 if i < n else 2

    for a in range(g):
        for b in range(g):
            ba, bb = block_of(a), block_of(b)
            diagonal = int(a == b)
            if ba != bb or ba != 1:
                expected_r = diagonal if ba == bb == 2 else 0
                expected_s = -diagonal if ba == bb == 0 else 0
                if M.R[a, b] != expected_r or M.Q[a, b] != expected_r or M.S[a, b] != expected_s:
                    raise ConsistencyError(f"normal form has an unexpected entry at ({a}, {b})")


def _reduce_core(M: SymplecticMatrix, s: int, tau: Sequence[int]) -> tuple[SymplecticMatrix, SymplecticMatrix, SymplecticMatrix]:
    """
    Reduce Q2 and R2: for i <= j, q_ji into [0, tau_i) by a left Omega factor,
    then r_ij into [0, tau_i) by a right Omega factor. Partners follow from
    the symmetry of P Q^T and R P^T.
    """
    g, t = M.genus, len(tau)
    Z = [[0] * g for _ in range(g)]
    for j in range(t):
        for i in range(j + 1):
            z = -(M.Q[s + j, s + i] // tau[i])
            Z[s + j][s + i] = Z[s + i][s + j] = z
    left = omega(_frozen(Z, g))
    M = left @ M

    Z = [[0] * g for _ in range(g)]
    for i in range(t):
        for j in range(i, t):
            z = -(M.R[s + i, s + j] // tau[i])
            Z[s + i][s + j] = Z[s + j][s + i] = z
    right = omega(_frozen(Z, g))
    return left, M @ right, right


def partial_normal_form(H: SymplecticMatrix) -> PartialNormalForm:
    """
    Bring H to partial normal form inside its handlebody double coset.

    Args:
        H: symplectic gluing matrix of genus g

    Returns:
        PartialNormalForm whose witnesses certify normalized = left @ H @ right

    Raises:
        ConsistencyError: if an intermediate matrix leaves the expected shape
    """
    g = H.genus
    snf = smith_normal_form(H.P)
    s = sum(1 for d in snf.diag if d == 1)
    r = sum(1 for d in snf.diag if d == 0)
    t = g - s - r
    n = s + t
    tau = tuple(snf.diag[s:n])
    logger.debug("genus %d: %d unit, %d torsion, %d free diagonal entries", g, s, t, r)

    # SNF on P: Sigma(U) on the left, Sigma(V^-T) on the right.
    left = sigma(snf.U, snf.U_inv)
    right = sigma(snf.V_inv.T, snf.V.T)
    current = left @ H @ right

    # Replace the free block by the identity pattern; the difference is a
    # right handlebody factor.
    target = _identity_pattern(current, n)
    factor = current.inverse() @ target
    if not in_handlebody_subgroup(factor):
        raise ConsistencyError("free-block replacement left the handlebody subgroup")
    right = right @ factor
    current = target

    # Clear the first block of Q from the left, then the first block of R from the right.
    Z = [[0] * g for _ in range(g)]
    for a in range(s):
        for b in range(s):
            Z[a][b] = -current.Q[a, b]
        for c in range(s, n):
            Z[c][a] = Z[a][c] = -current.Q[c, a]
    step = omega(_frozen(Z, g))
    left = step @ left
    current = step @ current

    Z = [[0] * g for _ in range(g)]
    for a in range(s):
        for b in range(s):
            Z[a][b] = -current.R[a, b]
        for c in range(s, n):
            Z[a][c] = Z[c][a] = -current.R[a, c]
    step = omega(_frozen(Z, g))
    right = right @ step
    current = current @ step
    _check_block_shape(current, s, t)

    core_left, current, core_right = _reduce_core(current, s, tau)
    left = core_left @ left
    right = right @ core_right

    normalized = left @ H @ right
    if normalized != current:
        raise ConsistencyError("normal-form witnesses do not reproduce the normalized matrix")
    core = SymplecticMatrix.from_blocks(
        normalized.R.block(s, n, s, n),
        normalized.P.block(s, n, s, n),
        normalized.S.block(s, n, s, n),
        normalized.Q.block(s, n, s, n),
    )
    _check_core_reduced(core, tau)
    logger.debug("partial normal form: tau=%s, stabilization index %d", tau, s)
    return PartialNormalForm(
        original=H,
        normalized=normalized,
        t=t,
        r=r,
        stab_index=s,
        tau=tau,
        core=core,
        left=left,
        right=right,
    )


def _check_core_reduced(core: SymplecticMatrix, tau: Sequence[int]) -> None:
    Q, R = core.Q, core.R
    for j in range(len(tau)):
        for i in range(j + 1):
            ratio = tau[j] // tau[i]
            if not (0 <= Q[j, i] < tau[j] and Q[i, j] == ratio * Q[j, i]):
                raise ConsistencyError(f"Q entry ({j}, {i}) is not reduced")
            if not (0 <= R[i, j] < tau[i] and R[j, i] == ratio * R[i, j]):
                raise ConsistencyError(f"R entry ({i}, {j}) is not reduced")


def is_stabilized(H: SymplecticMatrix) -> bool:
    return partial_normal_form(H).stab_index > 0


def minimal_genus(H: SymplecticMatrix) -> int:
    return partial_normal_form(H).minimal_genus


def lens_matrix(p: int, q: int) -> SymplecticMatrix:
    """
    Genus-1 matrix [[r, p], [s, q]] with r*q - p*s = 1.

    r is taken in [0, p) when p > 0.
    """
    x, _, d = extended_gcd(q, p)
    if abs(d) != 1:
        raise ValueError(f"lens space parameters must be coprime, got ({p}, {q})")
    if p == 0:
        r, s = q, 0
    else:
        r = (x * d) % abs(p)
        s = (r * q - 1) // p
    return SymplecticMatrix.from_rows([[r, p], [s, q]])


def lens_sum_matrix(pairs: Sequence[tuple[int, int]]) -> SymplecticMatrix:
    """Block-diagonal matrix of a connected sum of lens spaces: R, P, S, Q all diagonal."""
    blocks = [lens_matrix(p, q).matrix for p, q in pairs]

    def diag(i: int, j: int) -> IntegerMatrix:
        return IntegerMatrix.diagonal_matrix([b[i, j] for b in blocks])

    return SymplecticMatrix.from_blocks(diag(0, 0), diag(0, 1), diag(1, 0), diag(1, 1))


def _elementary(g: int, rng: random.Random) -> tuple[IntegerMatrix, IntegerMatrix]:
    """A random elementary unimodular matrix and its inverse."""
    kind = rng.randrange(3)
    rows = IntegerMatrix.identity(g).tolist()
    if kind == 0 and g > 1:
        i, j = rng.sample(range(g), 2)
        c = rng.choice([-2, -1, 1, 2])
        rows[i][j] = c
        inverse = IntegerMatrix.identity(g).tolist()
        inverse[i][j] = -c
        return IntegerMatrix.from_rows(rows), IntegerMatrix.from_rows(inverse)
    if kind == 1 and g > 1:
        i, j = rng.sample(range(g), 2)
        rows[i], rows[j] = rows[j], rows[i]
        A = IntegerMatrix.from_rows(rows)
        return A, A
    i = rng.randrange(g)
    rows[i][i] = -1
    A = IntegerMatrix.from_rows(rows)
    return A, A


def random_handlebody_element(g: int, rng: random.Random, steps: int = 12) -> SymplecticMatrix:
    """Product of up to `steps` random Omega and Sigma generators of the handlebody subgroup."""
    element = SymplecticMatrix.identity(g)
    for _ in range(rng.randint(1, steps)):
        if rng.random() < 0.5:
            Z = [[0] * g for _ in range(g)]
            for a in range(g):
                for b in range(a, g):
                    Z[a][b] = Z[b][a] = rng.randint(-3, 3)
            factor = omega(IntegerMatrix.from_rows(Z))
        else:
            A, A_inv = _elementary(g, rng)
            factor = sigma(A, A_inv)
        element = element @ factor
    return element


def random_symplectic(g: int, rng: random.Random, steps: int = 8) -> SymplecticMatrix:
    """A random symplectic matrix: handlebody factors interleaved with J on random coordinates."""
    element = SymplecticMatrix.identity(g)
    for _ in range(steps):
        element = element @ random_handlebody_element(g, rng, steps=3)
        mask = [rng.random() < 0.5 for _ in range(g)]
        element = element @ _partial_j(mask)
    return element


def _partial_j(mask: Sequence[bool]) -> SymplecticMatrix:
    """J acting on the coordinate pairs selected by mask, identity elsewhere."""
    g = len(mask)
    R = IntegerMatrix.diagonal_matrix([0 if m else 1 for m in mask])
    P = IntegerMatrix.diagonal_matrix([1 if m else 0 for m in mask])
    return SymplecticMatrix.from_blocks(R, P, -P, R)
