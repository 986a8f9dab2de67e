"""Grouped eigendecomposition A = sum_r theta_r E_r and per-pair spectral relations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ctqw.graphs import WeightedGraph

#: residual tolerance on projector identities and entrywise comparisons
TOL_SPEC = 1e-9
#: threshold on ||E_r e_a|| below which a is outside the eigenvalue's support
TOL_SUPPORT = 1e-9


def default_group_tol(a: np.ndarray) -> float:
    return 1e-8 * max(1.0, float(np.abs(a).sum(axis=1).max()))


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, WeightedGraph):
        return a.weights
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix or a WeightedGraph")
    return m


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (descending) with orthogonal eigenprojectors.

    theta[0] is the largest eigenvalue. ``ambiguous_clustering`` is set when
    some raw eigenvalue gap falls within a factor 10 of the grouping
    tolerance, i.e. the grouping could plausibly have gone the other way.
    """

    matrix: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray
    projectors: np.ndarray = field(repr=False)
    multiplicities: tuple[int, ...]
    group_tolerance: float
    ambiguous_clustering: bool
    nonnegative: bool

    def __post_init__(self) -> None:
        for name in ("matrix", "eigenvalues", "projectors"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def order(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_distinct(self) -> int:
        return len(self.eigenvalues)

    def projected_columns(self, a: int) -> np.ndarray:
        """(n_distinct, n) array whose r-th row is E_r e_a."""
        return self.projectors[:, :, a]


def decompose(a, group_tol: float | None = None) -> SpectralDecomposition:
    """Eigendecompose a symmetric matrix into distinct-eigenvalue projectors.

    Raw eigenvalues are clustered by a single sorted-gap scan: a new group
    starts wherever the gap reaches ``group_tol``. Works for weighted
    matrices; no integrality is assumed.
    """
    m = _as_matrix(a)
    asym = float(np.abs(m - m.T).max())
    if asym > 1e-12:
        raise ValueError(f"matrix must be symmetric (max asymmetry {asym:.3e})")
    m = (m + m.T) / 2.0
    gt = float(group_tol) if group_tol is not None else default_group_tol(m)
    if gt <= 0:
        raise ValueError("group_tol must be positive")

    evals, evecs = np.linalg.eigh(m)
    gaps = np.diff(evals)
    breaks = np.nonzero(gaps >= gt)[0]
    ambiguous = bool(np.any((gaps > gt / 10.0) & (gaps < gt * 10.0)))

    groups: list[np.ndarray] = np.split(np.arange(len(evals)), breaks + 1)
    thetas = []
    projs = []
    mults = []
    for g in groups:
        thetas.append(float(evals[g].mean()))
        v = evecs[:, g]
        e = v @ v.T
        projs.append((e + e.T) / 2.0)
        mults.append(len(g))

    order = np.argsort(thetas)[::-1]
    thetas = np.array([thetas[i] for i in order])
    projs = np.stack([projs[i] for i in order])
    mults = tuple(mults[i] for i in order)
    return SpectralDecomposition(
        matrix=m,
        eigenvalues=thetas,
        projectors=projs,
        multiplicities=mults,
        group_tolerance=gt,
        ambiguous_clustering=ambiguous,
        nonnegative=bool(m.min() >= 0.0),
    )


def support(dec: SpectralDecomposition, a: int) -> frozenset[int]:
    """Indices r with E_r e_a nonzero (norm above TOL_SUPPORT)."""
    if not (0 <= a < dec.order):
        raise ValueError(f"vertex {a} out of range")
    norms = np.linalg.norm(dec.projected_columns(a), axis=1)
    return frozenset(int(r) for r in np.nonzero(norms > TOL_SUPPORT)[0])


@dataclass(frozen=True)
class PairProfile:
    """Spectral relations between two vertices.

    ``phi_plus``/``phi_minus`` partition the common support by the sign in
    E_r e_a = +/- E_r e_b and are nonempty only when strongly cospectral.
    ``perron_anchor_valid`` records whether the top eigenvalue landed in
    phi_plus, which the certification grid relies on; it is False for
    signed graphs where the Perron argument does not apply.
    """

    a: int
    b: int
    support: frozenset[int]
    parallel: bool
    cospectral: bool
    strongly_cospectral: bool
    phi_plus: frozenset[int]
    phi_minus: frozenset[int]
    perron_anchor_valid: bool


def pair_profile(dec: SpectralDecomposition, a: int, b: int) -> PairProfile:
    """Classify the spectral relation between distinct vertices a and b."""
    if a == b:
        raise ValueError("pair_profile needs two distinct vertices")
    for v in (a, b):
        if not (0 <= v < dec.order):
            raise ValueError(f"vertex {v} out of range")

    cols_a = dec.projected_columns(a)
    cols_b = dec.projected_columns(b)
    norms_a = np.linalg.norm(cols_a, axis=1)
    norms_b = np.linalg.norm(cols_b, axis=1)
    sup_a = norms_a > TOL_SUPPORT
    sup_b = norms_b > TOL_SUPPORT

    parallel = True
    for r in np.nonzero(sup_a | sup_b)[0]:
        ip = abs(float(cols_a[r] @ cols_b[r]))
        if abs(ip - norms_a[r] * norms_b[r]) > TOL_SPEC:
            parallel = False
            break

    diag_a = dec.projectors[:, a, a]
    diag_b = dec.projectors[:, b, b]
    cospectral = bool(np.abs(diag_a - diag_b).max() <= TOL_SPEC)

    strongly = True
    plus: set[int] = set()
    minus: set[int] = set()
    for r in range(dec.n_distinct):
        if not (sup_a[r] or sup_b[r]):
            continue
        va, vb = cols_a[r], cols_b[r]
        k = int(np.argmax(np.abs(va)))
        sign = 1.0 if va[k] * vb[k] >= 0 else -1.0
        if np.abs(va - sign * vb).max() <= TOL_SPEC:
            (plus if sign > 0 else minus).add(int(r))
        else:
            strongly = False
            break
    if not strongly:
        plus, minus = set(), set()

    sup = frozenset(int(r) for r in np.nonzero(sup_a)[0])
    return PairProfile(
        a=a,
        b=b,
        support=sup,
        parallel=parallel,
        cospectral=cospectral,
        strongly_cospectral=strongly,
        phi_plus=frozenset(plus),
        phi_minus=frozenset(minus),
        perron_anchor_valid=bool(strongly and dec.nonnegative and 0 in plus),
    )
