"""Matrix pencils, regularity tests, and the Weierstrass canonical form.

A matrix pencil is the one-parameter family ``s*F - G`` built from a pair of
real matrices of equal shape.  A square pencil is *regular* when its
determinant polynomial ``d(s) = det(s*F - G)`` is not identically zero; the
roots of ``d`` are the finite eigenvalues, and the degree deficiency
``q = m - deg(d)`` counts the infinite eigenvalue.  For a regular pencil
there are real invertible transforms ``P`` (rows) and ``Q`` (columns) with::

    P @ F @ Q = [[I_p, 0  ],      P @ G @ Q = [[J_p, 0  ],
                 [0,   H_q]]                   [0,   I_q]]

where ``J_p`` carries the finite eigenvalues in real block form and ``H_q``
is nilpotent.  This is the classical Weierstrass form (Gantmacher, "The
Theory of Matrices", vol. II, ch. XII).

The determinant polynomial is recovered by evaluating ``det(s_j*F - G)`` at
Chebyshev-spaced sample points and interpolating, which keeps the recovery
exact up to rounding for the small dense pencils this package targets
(``m`` up to about 8).  Eigenvectors come from explicit null-space
extraction by row reduction rather than from a black-box generalized
eigensolver, so every factor of the decomposition can be checked directly
against the defining equations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev

from .exceptions import (
    IrregularPencil,
    NonSquarePencil,
    NumericalBreakdown,
    UnsupportedJordanStructure,
)

__all__ = [
    "COEFF_TRIM_RTOL",
    "CLUSTER_TOL",
    "NULLSPACE_RTOL",
    "RESIDUAL_RTOL",
    "RegularityVerdict",
    "MatrixPencil",
    "DetPolynomial",
    "EigenvalueGroup",
    "EigenStructure",
    "WeierstrassForm",
    "pencil_det_poly",
    "is_regular",
    "eigenstructure",
    "weierstrass_decompose",
    "row_reduce",
    "matrix_rank",
    "null_space",
]

# Trailing determinant-polynomial coefficients below this fraction of the
# largest coefficient are treated as zero.
COEFF_TRIM_RTOL = 1e-10

# Roots closer than this are merged into one eigenvalue with multiplicity.
CLUSTER_TOL = 1e-7

# Row-reduction pivot threshold, relative to the max-abs entry.
NULLSPACE_RTOL = 1e-10

# Allowed max-abs residual of the decomposition block equations, relative
# to max(1, |F|, |G|).
RESIDUAL_RTOL = 1e-9

_COND_LIMIT = 1e12


class RegularityVerdict(enum.Enum):
    REGULAR = "regular"
    SINGULAR_SHAPE = "singular_shape"
    SINGULAR_DETERMINANT = "singular_determinant"


@dataclass(frozen=True)
class MatrixPencil:
    """The pencil ``s*F - G`` of two equally shaped real matrices.

    Parameters
    ----------
    F, G : array_like
        Real matrices of identical shape with finite entries.  They are
        copied and frozen at construction.
    """

    F: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=float)
        G = np.array(self.G, dtype=float)
        if F.ndim != 2 or G.ndim != 2:
            raise ValueError("F and G must be two-dimensional matrices")
        if F.shape != G.shape:
            raise ValueError(f"shape mismatch: F is {F.shape}, G is {G.shape}")
        if not (np.isfinite(F).all() and np.isfinite(G).all()):
            raise ValueError("pencil entries must be finite")
        F.flags.writeable = False
        G.flags.writeable = False
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "G", G)

    @property
    def rows(self) -> int:
        return self.F.shape[0]

    @property
    def cols(self) -> int:
        return self.F.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def at(self, s: complex) -> np.ndarray:
        """Evaluate ``s*F - G`` (complex output for complex ``s``)."""
        return s * self.F - self.G


@dataclass(frozen=True)
class DetPolynomial:
    """Trimmed determinant polynomial in ascending powers of ``s``.

    ``degree`` is -1 for the identically zero polynomial.  The trailing
    coefficients are trimmed against ``COEFF_TRIM_RTOL`` times the largest
    coefficient magnitude, so ``coefficients`` has length ``degree + 1``
    (length 1 with a single 0.0 in the zero case).
    """

    coefficients: np.ndarray
    degree: int

    @classmethod
    def from_raw(cls, raw, trim_rtol: float = COEFF_TRIM_RTOL) -> "DetPolynomial":
        raw = np.asarray(raw, dtype=float)
        top = np.max(np.abs(raw)) if raw.size else 0.0
        cut = trim_rtol * top
        nonzero = np.nonzero(np.abs(raw) > cut)[0]
        if nonzero.size == 0:
            zero = np.zeros(1)
            zero.flags.writeable = False
            return cls(zero, -1)
        degree = int(nonzero[-1])
        coeffs = raw[: degree + 1].copy()
        coeffs.flags.writeable = False
        return cls(coeffs, degree)

    def __call__(self, s: complex) -> complex:
        out = 0.0
        for c in self.coefficients[::-1]:
            out = out * s + c
        return out


@dataclass(frozen=True)
class EigenvalueGroup:
    """One finite eigenvalue with its clustered multiplicity."""

    value: complex
    multiplicity: int


@dataclass(frozen=True)
class EigenStructure:
    """Finite spectrum of a regular pencil plus the infinite multiplicity.

    ``p`` is the total finite multiplicity (the determinant degree), ``q``
    the multiplicity of the infinite eigenvalue, and ``p + q == m``.
    """

    finite_eigenvalues: tuple[EigenvalueGroup, ...]
    p: int
    q: int


@dataclass(frozen=True)
class WeierstrassForm:
    """Weierstrass data ``(P, Q, J_p, H_q)`` of a regular pencil.

    ``Q = [Q_p | Q_q]`` splits columns into the finite and infinite
    deflating subspaces, ``P = [P_1 ; P_2]`` splits rows the same way, and
    ``q_star`` is the nilpotency index of ``H_q`` (0 when ``q == 0``).
    """

    P: np.ndarray
    Q: np.ndarray
    J_p: np.ndarray
    H_q: np.ndarray
    p: int
    q: int
    q_star: int

    @property
    def Q_p(self) -> np.ndarray:
        return self.Q[:, : self.p]

    @property
    def Q_q(self) -> np.ndarray:
        return self.Q[:, self.p :]

    @property
    def P_1(self) -> np.ndarray:
        return self.P[: self.p, :]

    @property
    def P_2(self) -> np.ndarray:
        return self.P[self.p :, :]


# ---------------------------------------------------------------------------
# row reduction / null spaces
# ---------------------------------------------------------------------------

def row_reduce(A: np.ndarray, rtol: float = NULLSPACE_RTOL, scale: float | None = None):
    """Reduced row echelon form with per-column partial pivoting.

    Returns ``(R, pivot_cols)``.  Entries whose magnitude is at most
    ``rtol * scale`` are treated as zero when selecting pivots, which makes
    the reduction (and everything built on it) deterministic.  ``scale``
    defaults to ``max|A|``; callers evaluating a nearly cancelled matrix
    (like ``s*F - G`` at an eigenvalue of a 1x1 pencil) should pass the
    pre-cancellation magnitude instead.
    """
    A = np.asarray(A)
    R = A.astype(complex if np.iscomplexobj(A) else float).copy()
    rows, cols = R.shape
    if scale is None:
        scale = float(np.max(np.abs(A))) if A.size else 0.0
    tol = rtol * scale
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        lead = r + int(np.argmax(np.abs(R[r:, c])))
        if abs(R[lead, c]) <= tol:
            continue
        if lead != r:
            R[[r, lead]] = R[[lead, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def matrix_rank(A: np.ndarray, rtol: float = NULLSPACE_RTOL) -> int:
    """Rank by thresholded row reduction."""
    _, pivots = row_reduce(A, rtol)
    return len(pivots)


def null_space(A: np.ndarray, rtol: float = NULLSPACE_RTOL, scale: float | None = None) -> np.ndarray:
    """Null-space basis from row reduction, one column per free variable.

    The basis is canonical: each free column carries a 1 in its own slot
    and the negated reduced coefficients in the pivot slots.
    """
    A = np.asarray(A)
    R, pivots = row_reduce(A, rtol, scale)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=R.dtype)
    for j, fc in enumerate(free):
        basis[fc, j] = 1.0
        for i, pc in enumerate(pivots):
            basis[pc, j] = -R[i, fc]
    return basis


# ---------------------------------------------------------------------------
# determinant polynomial and regularity
# ---------------------------------------------------------------------------

def pencil_det_poly(pencil: MatrixPencil, trim_rtol: float = COEFF_TRIM_RTOL) -> DetPolynomial:
    """Determinant polynomial of a square pencil by multipoint interpolation.

    ``det(s*F - G)`` is evaluated at ``m + 1`` Chebyshev points on [-1, 1]
    and interpolated in the Chebyshev basis (then converted to monomial
    coefficients), which is numerically benign for the sizes of interest.

    Raises
    ------
    NonSquarePencil
        If the pencil is rectangular.
    NumericalBreakdown
        If a determinant evaluation overflows or the interpolation system
        is ill-conditioned beyond 1e12.
    """
    if not pencil.is_square:
        raise NonSquarePencil(
            f"determinant polynomial needs a square pencil, got {pencil.rows}x{pencil.cols}"
        )
    m = pencil.rows
    n_nodes = m + 1
    j = np.arange(n_nodes)
    nodes = np.cos(np.pi * (2 * j + 1) / (2 * n_nodes))
    values = np.array([np.linalg.det(pencil.at(s)) for s in nodes])
    if not np.isfinite(values).all():
        raise NumericalBreakdown("determinant evaluation overflowed at a sample point")
    design = chebyshev.chebvander(nodes, m)
    cond = np.linalg.cond(design)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise NumericalBreakdown(f"interpolation system is ill-conditioned (cond={cond:.3e})")
    cheb_coeffs = np.linalg.solve(design, values)
    raw = chebyshev.cheb2poly(cheb_coeffs)
    if not np.isfinite(raw).all():
        raise NumericalBreakdown("interpolated coefficients are not finite")
    return DetPolynomial.from_raw(raw, trim_rtol)


def is_regular(pencil: MatrixPencil) -> RegularityVerdict:
    """Classify a pencil as regular or singular (by shape or determinant)."""
    if not pencil.is_square:
        return RegularityVerdict.SINGULAR_SHAPE
    if pencil_det_poly(pencil).degree < 0:
        return RegularityVerdict.SINGULAR_DETERMINANT
    return RegularityVerdict.REGULAR


# ---------------------------------------------------------------------------
# eigenstructure
# ---------------------------------------------------------------------------

def _cluster_roots(roots: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Greedy absolute-distance clustering; returns (mean, count) pairs."""
    order = np.lexsort((roots.imag, roots.real))
    clusters: list[list[complex]] = []
    for z in roots[order]:
        placed = False
        for group in clusters:
            centre = sum(group) / len(group)
            if abs(z - centre) <= tol:
                group.append(z)
                placed = True
                break
        if not placed:
            clusters.append([z])
    out = [(sum(g) / len(g), len(g)) for g in clusters]
    out.sort(key=lambda vc: (vc[0].real, vc[0].imag))
    return out


def _symmetrize_conjugates(groups: list[tuple[complex, int]], tol: float):
    """Force conjugate closure: realify near-real values, pair the rest."""
    fixed: list[tuple[complex, int]] = []
    used = [False] * len(groups)
    for i, (z, mult) in enumerate(groups):
        if used[i]:
            continue
        if abs(z.imag) <= tol:
            fixed.append((complex(z.real, 0.0), mult))
            used[i] = True
            continue
        partner = None
        for k in range(len(groups)):
            if k != i and not used[k] and abs(groups[k][0] - z.conjugate()) <= tol:
                partner = k
                break
        if partner is None:
            # A lone complex root of a real polynomial is a rounding artifact;
            # keep it rather than hide it, downstream checks will object.
            fixed.append((z, mult))
            used[i] = True
            continue
        w, wmult = groups[partner]
        re = (z.real + w.real) / 2.0
        im = abs(z.imag - w.imag) / 2.0
        fixed.append((complex(re, -im), wmult if z.imag > 0 else mult))
        fixed.append((complex(re, im), mult if z.imag > 0 else wmult))
        used[i] = used[partner] = True
    fixed.sort(key=lambda vc: (vc[0].real, vc[0].imag))
    return fixed


def eigenstructure(pencil: MatrixPencil, cluster_tol: float = CLUSTER_TOL) -> EigenStructure:
    """Finite eigenvalues (clustered, conjugate-closed) and infinite count.

    The finite eigenvalues are the roots of the trimmed determinant
    polynomial, computed via its companion matrix; roots closer than
    ``cluster_tol`` merge into one value with a multiplicity.

    Raises
    ------
    IrregularPencil
        If the pencil is not regular.
    """
    verdict = is_regular(pencil)
    if verdict is not RegularityVerdict.REGULAR:
        raise IrregularPencil(f"eigenstructure needs a regular pencil, got {verdict.value}")
    poly = pencil_det_poly(pencil)
    m = pencil.rows
    if poly.degree == 0:
        groups: list[tuple[complex, int]] = []
    else:
        roots = np.roots(poly.coefficients[::-1])
        groups = _symmetrize_conjugates(_cluster_roots(roots, cluster_tol), cluster_tol)
    finite = tuple(EigenvalueGroup(v, c) for v, c in groups)
    p = sum(g.multiplicity for g in finite)
    if p != poly.degree:
        raise NumericalBreakdown(
            f"root clustering lost multiplicity: degree {poly.degree}, clustered total {p}"
        )
    return EigenStructure(finite, p, m - poly.degree)


# ---------------------------------------------------------------------------
# Weierstrass decomposition
# ---------------------------------------------------------------------------

def _finite_blocks(pencil: MatrixPencil, groups, nullspace_rtol: float):
    """Columns of Q_p, columns of inv(P)[:, :p], and the J_p blocks."""
    q_cols: list[np.ndarray] = []
    r_cols: list[np.ndarray] = []
    j_blocks: list[np.ndarray] = []
    F = pencil.F
    G = pencil.G
    f_mag = float(np.max(np.abs(F)))
    g_mag = float(np.max(np.abs(G)))
    for value, mult in groups:
        if value.imag < 0:
            continue  # handled with the +imag partner
        shifted = pencil.at(value if value.imag > 0 else value.real)
        # threshold against the pre-cancellation magnitude of s*F - G
        scale = max(abs(value) * f_mag, g_mag)
        kernel = null_space(shifted, nullspace_rtol, scale)
        if value.imag > 0:
            if mult != 1:
                raise UnsupportedJordanStructure(
                    f"repeated complex pair at {value:.6g} is not supported"
                )
            if kernel.shape[1] < 1:
                raise UnsupportedJordanStructure(
                    f"no eigenvector at {value:.6g}; defective or unresolved multiple eigenvalue"
                )
            v = kernel[:, 0]
            x, y = v.real, v.imag
            q_cols += [x, y]
            r_cols += [F @ x, F @ y]
            j_blocks.append(np.array([[value.real, value.imag], [-value.imag, value.real]]))
            continue
        s = value.real
        dim = kernel.shape[1]
        if mult == 1:
            if dim < 1:
                raise UnsupportedJordanStructure(
                    f"no eigenvector at {s:.6g}; defective or unresolved multiple eigenvalue"
                )
            v = kernel[:, 0].real
            q_cols.append(v)
            r_cols.append(F @ v)
            j_blocks.append(np.array([[s]]))
        elif mult == 2:
            if dim >= 2:
                for idx in range(2):
                    v = kernel[:, idx].real
                    q_cols.append(v)
                    r_cols.append(F @ v)
                j_blocks.append(np.array([[s, 0.0], [0.0, s]]))
            elif dim == 0:
                raise UnsupportedJordanStructure(
                    f"no eigenvector at {s:.6g}; defective or unresolved multiple eigenvalue"
                )
            else:
                v1 = kernel[:, 0].real
                rhs = F @ v1
                v2, *_ = np.linalg.lstsq(G - s * F, rhs, rcond=None)
                defect = np.max(np.abs((G - s * F) @ v2 - rhs))
                scale = max(1.0, float(np.max(np.abs(rhs))))
                if defect > 1e-8 * scale:
                    raise UnsupportedJordanStructure(
                        f"no generalized eigenvector at double eigenvalue {s:.6g}"
                    )
                q_cols += [v1, v2]
                r_cols += [F @ v1, F @ v2]
                j_blocks.append(np.array([[s, 1.0], [0.0, s]]))
        else:
            raise UnsupportedJordanStructure(
                f"finite eigenvalue {s:.6g} with multiplicity {mult} is not supported"
            )
    return q_cols, r_cols, j_blocks


def _infinite_blocks(pencil: MatrixPencil, q: int, nullspace_rtol: float):
    """Columns of Q_q, matching inv(P) columns, the nilpotent H_q, q_star."""
    F = pencil.F
    G = pencil.G
    m = pencil.rows
    kernel = null_space(F, nullspace_rtol).real
    nullity = kernel.shape[1]
    n_two = q - nullity          # chains of length 2
    n_one = 2 * nullity - q      # isolated nilpotent columns
    if n_two < 0:
        raise NumericalBreakdown(
            f"null space of F larger than infinite multiplicity ({nullity} > {q})"
        )
    if n_one < 0:
        raise UnsupportedJordanStructure(
            f"infinite eigenvalue needs a chain longer than 2 (q={q}, nullity={nullity})"
        )
    q_cols: list[np.ndarray] = []
    r_cols: list[np.ndarray] = []
    if n_two == 0:
        for idx in range(nullity):
            u = kernel[:, idx]
            q_cols.append(u)
            r_cols.append(G @ u)
        H = np.zeros((q, q))
        return q_cols, r_cols, H, (1 if q > 0 else 0)

    # Chain starters are null directions u with G @ u in range(F).
    M = G @ kernel
    sol, *_ = np.linalg.lstsq(F, M, rcond=None)
    residual_map = M - F @ sol
    starters = null_space(residual_map, nullspace_rtol).real
    if starters.shape[1] < n_two:
        raise UnsupportedJordanStructure(
            f"found {starters.shape[1]} extensible null directions, need {n_two}"
        )
    chain_u1: list[np.ndarray] = []
    chain_u2: list[np.ndarray] = []
    for idx in range(n_two):
        u1 = kernel @ starters[:, idx]
        rhs = G @ u1
        u2, *_ = np.linalg.lstsq(F, rhs, rcond=None)
        defect = np.max(np.abs(F @ u2 - rhs))
        if defect > 1e-8 * max(1.0, float(np.max(np.abs(rhs)))):
            raise UnsupportedJordanStructure("nilpotent chain of length 2 did not close")
        chain_u1.append(u1)
        chain_u2.append(u2)

    # Fill the remaining length-1 columns with null vectors that stay
    # independent of the chain starters.
    singles: list[np.ndarray] = []
    if n_one > 0:
        chosen = np.column_stack(chain_u1)
        for idx in range(nullity):
            if len(singles) == n_one:
                break
            candidate = kernel[:, idx]
            trial = np.column_stack([chosen, candidate])
            if matrix_rank(trial, nullspace_rtol) > chosen.shape[1]:
                singles.append(candidate)
                chosen = trial
        if len(singles) < n_one:
            raise NumericalBreakdown("could not complete a basis of the infinite subspace")

    H = np.zeros((q, q))
    pos = 0
    for u1, u2 in zip(chain_u1, chain_u2):
        q_cols += [u1, u2]
        r_cols += [G @ u1, G @ u2]
        H[pos, pos + 1] = 1.0
        pos += 2
    for w in singles:
        q_cols.append(w)
        r_cols.append(G @ w)
        pos += 1
    return q_cols, r_cols, H, 2


def weierstrass_decompose(
    pencil: MatrixPencil,
    cluster_tol: float = CLUSTER_TOL,
    nullspace_rtol: float = NULLSPACE_RTOL,
) -> WeierstrassForm:
    """Compute the Weierstrass canonical form of a regular pencil.

    Finite eigenvectors come from null spaces of ``s_j*F - G``; complex
    pairs are stored as real 2x2 rotation-scaling blocks
    ``[[re, im], [-im, re]]``; the infinite part is built from the null
    space of ``F`` with nilpotent chains of length at most 2.  ``P`` is
    recovered as the inverse of ``[F @ Q_p | G @ Q_q]``, and the block
    equations are verified before returning.

    Supported structures: semi-simple finite spectrum, real double
    eigenvalues (diagonal or one 2x2 Jordan block), and an infinite
    eigenvalue of nilpotency index at most 2.  Anything richer raises
    ``UnsupportedJordanStructure``.

    Raises
    ------
    IrregularPencil, UnsupportedJordanStructure, NumericalBreakdown
    """
    verdict = is_regular(pencil)
    if verdict is not RegularityVerdict.REGULAR:
        raise IrregularPencil(f"cannot decompose a {verdict.value} pencil")
    es = eigenstructure(pencil, cluster_tol)
    m = pencil.rows
    p, q = es.p, es.q

    groups = [(g.value, g.multiplicity) for g in es.finite_eigenvalues]
    fin_q, fin_r, j_blocks = _finite_blocks(pencil, groups, nullspace_rtol)
    inf_q, inf_r, H, q_star = _infinite_blocks(pencil, q, nullspace_rtol)

    if len(fin_q) != p or len(inf_q) != q:
        raise NumericalBreakdown(
            f"assembled {len(fin_q)}+{len(inf_q)} columns for p={p}, q={q}"
        )
    Q = np.column_stack(fin_q + inf_q) if m else np.zeros((0, 0))
    R = np.column_stack(fin_r + inf_r) if m else np.zeros((0, 0))
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise NumericalBreakdown(f"transform matrix is ill-conditioned (cond={cond:.3e})")
    P = np.linalg.inv(R)

    J = np.zeros((p, p))
    pos = 0
    for block in j_blocks:
        size = block.shape[0]
        J[pos : pos + size, pos : pos + size] = block
        pos += size

    left_F = np.block([[np.eye(p), np.zeros((p, q))], [np.zeros((q, p)), H]])
    left_G = np.block([[J, np.zeros((p, q))], [np.zeros((q, p)), np.eye(q)]])
    scale = max(1.0, float(np.max(np.abs(pencil.F))), float(np.max(np.abs(pencil.G))))
    res_F = np.max(np.abs(P @ pencil.F @ Q - left_F)) if m else 0.0
    res_G = np.max(np.abs(P @ pencil.G @ Q - left_G)) if m else 0.0
    if max(res_F, res_G) > RESIDUAL_RTOL * scale:
        raise NumericalBreakdown(
            f"block equations not satisfied (residual {max(res_F, res_G):.3e})"
        )

    for arr in (P, Q, J, H):
        arr.flags.writeable = False
    return WeierstrassForm(P=P, Q=Q, J_p=J, H_q=H, p=p, q=q, q_star=q_star)
