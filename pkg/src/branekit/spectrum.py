"""Quadratic fluctuation operator, its two assemblies, and the mode spectrum.

The off-diagonal fluctuation between the branes has a 3N x 3N Hermitian mass
operator.  It is assembled three ways:

* ``build_mass_operator_qp`` writes it in the unrotated fields from the
  relative coordinates Q, P ("T" basis).
* ``build_mass_operator_fock`` writes it in the rotated fields from the
  Bogoliubov mode A ("Ttilde" basis), in the *same* Fock basis as Q and P.
  Conjugating the first operator by the 3x3 field rotation reproduces this
  one exactly on the interior, which is the route-equivalence check.
* ``build_mass_operator_levels`` writes the rotated-field operator in the
  number basis of its own oscillator (A acts as the plain ladder there).
  In that basis truncation artifacts stay within two levels of the cutoff,
  so the trusted spectral window is widest; this is the assembly used for
  numeric spectrum verification.

All eigenvalues are reported both raw (energy^2) and in units of the natural
scale 4*pi*z2*R*cos(theta), in which the closed-form tower reads: -1 once at
level 0; 0 and +1 at level 1; 0 once and (2n-1) twice for every level n >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .background import BraneBackground
from .oscillator import InteriorProjector, bogoliubov, make_ladder

SECTOR_TACHYON = "offdiag-tachyon"
SECTOR_ZERO = "offdiag-zero"
SECTOR_MASSIVE = "offdiag-massive"
SECTOR_TRANSVERSE = "transverse"
SECTOR_FERMION = "fermion"

BASIS_QP = "T"
BASIS_FOCK = "Ttilde"
BASIS_LEVELS = "Ttilde-number"

#: Squared-norm fraction on the top truncation levels above which an
#: eigenvector is considered contaminated by the cutoff.
TRUST_MASS_THRESHOLD = 1e-6


def rotation_u() -> np.ndarray:
    """Unitary 3x3 rotation from the unrotated to the rotated fields.

    Rows: (1, -i, 0)/sqrt2, (-1, -i, 0)/sqrt2, (0, 0, 1).
    """
    s = 1.0 / math.sqrt(2.0)
    return np.array(
        [[s, -1j * s, 0.0], [-s, -1j * s, 0.0], [0.0, 0.0, 1.0]], dtype=complex
    )


@dataclass(frozen=True, eq=False)
class MassOperator:
    """Hermitian 3N x 3N fluctuation operator with its natural energy^2 unit."""

    basis: str
    matrix: np.ndarray
    scale: float
    n_levels: int


def _assemble(b11, b12, b21, b22, b33) -> np.ndarray:
    n = b11.shape[0]
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[b11, b12, zero], [b21, b22, zero], [zero, zero, b33]])


def mass_scale(theta: float, z2: float, R: float) -> float:
    """Natural unit of the fluctuation operator: 4*pi*z2*R*cos(theta)."""
    return 4.0 * math.pi * z2 * R * math.cos(theta)


def build_mass_operator_qp(bg: BraneBackground) -> MassOperator:
    """Mass operator in the unrotated fields, from the relative coordinates.

    The relative pair is the difference of two independent canonical pairs
    and therefore carries twice the single-brane commutator; the blocks are
    built from the sqrt(2)-scaled Q, P so that [Q, P] = 4*pi*i*z2.  The
    off-diagonal blocks carry a single power of cos(theta): with that
    normalization the rotated assembly below is the exact conjugate of this
    operator on the interior, and the lowest interior eigenvalue is
    -4*pi*z2*R*cos(theta).
    """
    cos_t = math.cos(bg.theta)
    q = math.sqrt(2.0) * bg.q_rel
    p = math.sqrt(2.0) * bg.p_rel
    sigma = 4.0 * math.pi * bg.z2
    eye = np.eye(bg.n_levels, dtype=complex)
    b11 = cos_t**2 * (p @ p)
    b12 = -cos_t * (p @ q - 1j * sigma * eye)
    b21 = -cos_t * (q @ p + 1j * sigma * eye)
    b22 = q @ q
    b33 = cos_t**2 * (p @ p) + q @ q
    matrix = bg.R * _assemble(b11, b12, b21, b22, b33)
    return MassOperator(
        basis=BASIS_QP,
        matrix=matrix,
        scale=mass_scale(bg.theta, bg.z2, bg.R),
        n_levels=bg.n_levels,
    )


def _fock_blocks(mode: np.ndarray, scale: float) -> np.ndarray:
    n = mode.shape[0]
    eye = np.eye(n, dtype=complex)
    mode_dag = mode.conj().T
    number = mode_dag @ mode
    return scale * _assemble(
        number - eye,
        mode_dag @ mode_dag,
        mode @ mode,
        number + 2.0 * eye,
        2.0 * number + eye,
    )


def build_mass_operator_fock(bg: BraneBackground) -> MassOperator:
    """Mass operator in the rotated fields, same Fock basis as Q and P."""
    scale = mass_scale(bg.theta, bg.z2, bg.R)
    mode = bogoliubov(bg.n_levels, bg.theta)
    return MassOperator(
        basis=BASIS_FOCK,
        matrix=_fock_blocks(mode, scale),
        scale=scale,
        n_levels=bg.n_levels,
    )


def build_mass_operator_levels(bg: BraneBackground) -> MassOperator:
    """Rotated-field mass operator in its own oscillator's number basis.

    The rotated mode acts as the plain ladder on its eigenfunctions, so the
    assembly only differs from ``build_mass_operator_fock`` by the basis.
    Cutoff artifacts are confined to the top two levels per block here,
    which makes this the assembly of choice for spectrum verification.
    """
    scale = mass_scale(bg.theta, bg.z2, bg.R)
    ladder, _ = make_ladder(bg.n_levels)
    return MassOperator(
        basis=BASIS_LEVELS,
        matrix=_fock_blocks(ladder, scale),
        scale=scale,
        n_levels=bg.n_levels,
    )


def route_equivalence_residual(
    op_qp: MassOperator, op_fock: MassOperator, margin: int
) -> float:
    """Interior max-residual of the field rotation, relative to the scale.

    Conjugates the unrotated-field operator by (U x interior projector) and
    compares against the rotated-field operator masked to the same interior.
    """
    if op_qp.n_levels != op_fock.n_levels:
        raise ValueError("operators live on different truncations")
    n = op_qp.n_levels
    proj = InteriorProjector(n, margin).matrix()
    u_proj = np.kron(rotation_u(), proj)
    full_proj = np.kron(np.eye(3, dtype=complex), proj)
    lhs = u_proj @ op_qp.matrix @ u_proj.conj().T
    rhs = full_proj @ op_fock.matrix @ full_proj
    return float(np.max(np.abs(lhs - rhs)) / op_fock.scale)


def reduced_block(n: int, theta: float, z2: float, R: float) -> np.ndarray:
    """Per-level block of the rotated-field operator.

    Acts on the coefficient triple of (level n, level n-2, level n-1); rows
    and columns referencing nonexistent levels are removed, so the block is
    1x1 at n=0 and 2x2 at n=1.  Entries carry the full energy^2 scale.
    """
    if n < 0:
        raise ValueError(f"level index must be nonnegative, got {n}")
    scale = mass_scale(theta, z2, R)
    if n == 0:
        return scale * np.array([[-1.0]])
    if n == 1:
        return scale * np.array([[0.0, 0.0], [0.0, 1.0]])
    off = math.sqrt(n * (n - 1.0))
    return scale * np.array(
        [[n - 1.0, off, 0.0], [off, float(n), 0.0], [0.0, 0.0, 2.0 * n - 1.0]]
    )


@dataclass(frozen=True)
class ModeRecord:
    """One spectral line: sector, level, eigenvalue in both conventions."""

    sector: str
    n: int
    eigenvalue_units: float
    eigenvalue_raw: float
    multiplicity: int
    coefficients: tuple[float, float, float] | None = None


def analytic_spectrum(
    n_max: int, theta: float, z2: float, R: float
) -> list[ModeRecord]:
    """Closed-form off-diagonal tower up to level n_max.

    Eigenvector coefficients are over the (level n, level n-2, level n-1)
    components: the zero mode is (-sqrt n, sqrt(n-1), 0), the degenerate
    massive pair (0, 0, sqrt n) and (sqrt(n(n-1)), n, 0).
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    scale = mass_scale(theta, z2, R)
    records = [ModeRecord(SECTOR_TACHYON, 0, -1.0, -scale, 1, (1.0, 0.0, 0.0))]
    if n_max >= 1:
        records.append(ModeRecord(SECTOR_ZERO, 1, 0.0, 0.0, 1, (1.0, 0.0, 0.0)))
        records.append(ModeRecord(SECTOR_MASSIVE, 1, 1.0, scale, 1, (0.0, 0.0, 1.0)))
    for n in range(2, n_max + 1):
        root_n = math.sqrt(n)
        units = 2.0 * n - 1.0
        records.append(
            ModeRecord(SECTOR_ZERO, n, 0.0, 0.0, 1, (-root_n, math.sqrt(n - 1.0), 0.0))
        )
        records.append(
            ModeRecord(SECTOR_MASSIVE, n, units, units * scale, 1, (0.0, 0.0, root_n))
        )
        records.append(
            ModeRecord(
                SECTOR_MASSIVE,
                n,
                units,
                units * scale,
                1,
                (math.sqrt(n * (n - 1.0)), float(n), 0.0),
            )
        )
    return records


def transverse_spectrum(n_max: int, theta: float) -> list[ModeRecord]:
    """Six transverse directions: (2n+1)cos(theta) per level, multiplicity 6.

    eigenvalue_units is in the 4*pi*z2*R*cos(theta) convention (2n+1);
    eigenvalue_raw carries the bare (2n+1)cos(theta) number, which leaves
    the flux-tension prefactor off.  Both conventions are in circulation,
    so both are emitted.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    cos_t = math.cos(theta)
    return [
        ModeRecord(SECTOR_TRANSVERSE, n, 2.0 * n + 1.0, (2.0 * n + 1.0) * cos_t, 6)
        for n in range(n_max + 1)
    ]


def fermion_spectrum(n_max: int, theta: float) -> list[ModeRecord]:
    """Fermionic eigenvalue table: (2n+2)cos(theta) x4 and 2n cos(theta) x4.

    Analytic table only; no fermionic operator is constructed.  Conventions
    as in :func:`transverse_spectrum`.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    cos_t = math.cos(theta)
    records = []
    for n in range(n_max + 1):
        records.append(
            ModeRecord(SECTOR_FERMION, n, 2.0 * n + 2.0, (2.0 * n + 2.0) * cos_t, 4)
        )
        records.append(ModeRecord(SECTOR_FERMION, n, 2.0 * n, 2.0 * n * cos_t, 4))
    return records


@dataclass(frozen=True)
class NumericMode:
    """One numeric eigenvalue with its cutoff-contamination verdict."""

    value: float
    units: float
    trusted: bool
    top_mass: float


def numeric_spectrum(
    op: MassOperator,
    margin: int,
    mass_threshold: float = TRUST_MASS_THRESHOLD,
) -> list[NumericMode]:
    """Full eigendecomposition with per-mode trust flags.

    An eigenvector is trusted when at most ``mass_threshold`` of its squared
    norm sits on the top ``margin`` levels of each field block.  Degenerate
    eigenvalues need care: the solver returns arbitrary mixtures inside a
    degenerate subspace, so trust is decided per cluster (eigenvalues closer
    than 1e-10 * scale) by counting the independent interior directions of
    the cluster, i.e. the eigenvalues of the top-mass Gram form below the
    threshold.  For isolated eigenvalues this reduces to the plain rule.
    """
    matrix = op.matrix
    n = op.n_levels
    herm = float(np.max(np.abs(matrix - matrix.conj().T)))
    if herm > 1e-10 * max(op.scale, 1.0):
        raise ValueError(f"mass operator is not Hermitian (residual {herm:g})")
    if not 0 < margin < n:
        raise ValueError(f"margin must satisfy 0 < margin < {n}, got {margin}")
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails here
        raise RuntimeError(f"eigensolver failed on {op.basis} operator: {exc}") from exc

    top = np.zeros(3 * n)
    for block in range(3):
        top[block * n + n - margin : (block + 1) * n] = 1.0
    masses = (np.abs(eigenvectors) ** 2 * top[:, None]).sum(axis=0)

    trusted = np.zeros(eigenvalues.size, dtype=bool)
    cluster_tol = 1e-10 * max(op.scale, 1.0)
    start = 0
    while start < eigenvalues.size:
        stop = start + 1
        while stop < eigenvalues.size and eigenvalues[stop] - eigenvalues[stop - 1] <= cluster_tol:
            stop += 1
        idx = np.arange(start, stop)
        if idx.size == 1:
            trusted[idx] = masses[idx] <= mass_threshold
        else:
            vecs = eigenvectors[:, idx]
            gram = vecs.conj().T @ (top[:, None] * vecs)
            interior_directions = int(
                np.sum(np.linalg.eigvalsh(gram) <= mass_threshold)
            )
            order = idx[np.argsort(masses[idx], kind="stable")]
            trusted[order[:interior_directions]] = True
        start = stop

    return [
        NumericMode(
            value=float(eigenvalues[i]),
            units=float(eigenvalues[i] / op.scale),
            trusted=bool(trusted[i]),
            top_mass=float(masses[i]),
        )
        for i in range(eigenvalues.size)
    ]


@dataclass(frozen=True)
class TowerMatch:
    """Reconciliation of trusted numeric eigenvalues with the closed forms."""

    horizon: int
    unmatched: tuple[float, ...]
    trusted_count: int

    @property
    def all_matched(self) -> bool:
        return not self.unmatched


def match_tower(
    modes: list[NumericMode], tol_units: float = 1e-6
) -> TowerMatch:
    """Largest level to which trusted eigenvalues reproduce the tower.

    The horizon is the largest H such that every tower eigenvalue from
    levels <= H appears among the trusted modes with at least its analytic
    multiplicity; trusted modes not near any tower value are reported as
    unmatched (the degenerate pair is compared as a multiset, unordered).
    """
    trusted_units = sorted(m.units for m in modes if m.trusted)

    def count_near(value: float) -> int:
        return sum(1 for u in trusted_units if abs(u - value) <= tol_units)

    def is_tower_value(u: float) -> bool:
        if abs(u + 1.0) <= tol_units or abs(u) <= tol_units:
            return True
        if u < 0:
            return False
        odd = round((u + 1.0) / 2.0)
        return odd >= 1 and abs(u - (2.0 * odd - 1.0)) <= tol_units

    unmatched = tuple(u for u in trusted_units if not is_tower_value(u))
    horizon = 0 if count_near(-1.0) >= 1 else -1
    while horizon >= 0:
        h = horizon + 1
        needed = {0.0: h, 1.0: 1}
        for n in range(2, h + 1):
            needed[2.0 * n - 1.0] = 2
        if any(count_near(v) < c for v, c in needed.items()):
            break
        horizon = h
    return TowerMatch(
        horizon=horizon, unmatched=unmatched, trusted_count=len(trusted_units)
    )
