"""Certification that M+ is Willmore, identity by identity.

M+ is minimal in the sphere, so the Willmore condition reduces to

    sum_ij R_ij h^a_ij = 0   for every normal index a,            (reduced)

with R the Ricci tensor and h the second fundamental form.  For a unit
normal xi = sum_a c_a P_a x, the shape operator A_xi has principal
curvatures 0, +1, -1 with multiplicities (m, l-m-1, l-m-1); writing v_i for
a T_{+1} basis and w_i for a T_{-1} basis, the verified chain is

    sum_ij R_ij h^xi_ij  =  sum_i Ric(v_i) - sum_i Ric(w_i)       (bridge)
                         =  sum_{a != b} ( |(P_a P_b x)^{T+1}|^2
                                         - |(P_a P_b x)^{T-1}|^2 )

so the reduced criterion is equivalent to a Ricci balance between the two
curved eigenspaces, and that balance to a projection balance of the pair
vectors P_a P_b x.  After rotating the system so that P'_0 x = xi, the
balance holds pair by pair; the m = 2 case is forced by P'_0 U = 0 for the
T_0 component U of P'_1 P'_2 x, the m > 2 case by the norm bookkeeping

    2 = |U|^2 + |P'_0 U|^2 + 4 |W|^2 = |U|^2 + |P'_0 U|^2 + 4 |V|^2.

Everything here works at one focal point with one adapted frame; the report
module sweeps points and normal directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.random import default_rng

from .clifford import CliffordSystem, rotate_system
from .errors import MultiplicityError, SpectrumError
from .geometry import (AdaptedFrame, ShapeData, ricci_quadratic,
                       shape_operators)
from .records import VerificationRecord

__all__ = [
    "CLUSTER_RADIUS",
    "EinsteinProbe",
    "PrincipalDecomposition",
    "ProjectionBalance",
    "RicciBalance",
    "WillmoreCertificate",
    "case_identities",
    "certify_point",
    "einstein_probe",
    "principal_decomposition",
    "projection_balance",
    "reflection_check",
    "ricci_balance",
    "willmore_residual",
]

# Eigenvalues must land within this radius of {0, +1, -1}.  The true gaps
# are of size 1, so the radius is purely defensive.
CLUSTER_RADIUS = 1e-6

RICCI_SPREAD_THRESHOLD = 0.1


@dataclass(frozen=True)
class PrincipalDecomposition:
    """Eigenspaces of A_xi at a point, as ambient column blocks.

    t0, t1, tm1 hold orthonormal bases of the principal-curvature
    eigenspaces for 0, +1, -1 (dimensions m, l-m-1, l-m-1).
    """

    xi_coeffs: np.ndarray
    xi: np.ndarray
    t0: np.ndarray
    t1: np.ndarray
    tm1: np.ndarray
    spectrum_deviation: float

    def __post_init__(self):
        for name in ("xi_coeffs", "xi", "t0", "t1", "tm1"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class RicciBalance:
    """|sum Ric(v) - sum Ric(w)| plus the bridge identity residual."""

    balance: float
    signed_balance: float
    bridge_gap: float


@dataclass(frozen=True)
class ProjectionBalance:
    """Pair-vector projection balance onto T_{+1} versus T_{-1}."""

    pairwise_max: float
    aggregate_gap: float
    signed_aggregate: float
    t0_pair_leak_max: float
    n_ordered_pairs: int


@dataclass(frozen=True)
class EinsteinProbe:
    """Ricci spread probe plus the integer inequality gate."""

    ricci_min: float
    ricci_max: float
    spread: float
    dimension_condition: bool          # 4l > m^2 + 3m + 4
    dim_inequality: bool | None        # dim M+ > m(m+1)/2, gated
    spread_exceeds_threshold: bool | None
    status: str                        # "evidence" or "inconclusive"


@dataclass(frozen=True)
class WillmoreCertificate:
    """Aggregated residuals of every Willmore identity at one point."""

    residual_reduced: float
    residual_balance: float
    residual_projection: float
    projection_pairwise_max: float
    projection_aggregate_max: float
    bridge_max: float
    chain_gap_max: float
    reflection_max: float
    case_max: float
    spectrum_deviation_max: float
    t0_pair_leak_max: float
    n_normals: int
    passed: bool


# ---------------------------------------------------------------------------
# per-normal building blocks
# ---------------------------------------------------------------------------

def principal_decomposition(system: CliffordSystem, frame: AdaptedFrame,
                            xi_coeffs, shape: ShapeData | None = None
                            ) -> PrincipalDecomposition:
    """Eigendecomposition of A_xi for xi = sum_a c_a P_a x.

    Eigenvalues are clustered around {0, +1, -1} with radius 1e-6; a value
    outside every cluster raises SpectrumError, cluster sizes other than
    (m, l-m-1, l-m-1) raise MultiplicityError.  Within each cluster the
    eigenbasis is re-orthonormalized (QR) before mapping to ambient
    coordinates.
    """
    c = np.asarray(xi_coeffs, dtype=float)
    if c.shape != (system.m + 1,):
        raise ValueError(f"coefficient shape {c.shape} != ({system.m + 1},)")
    if abs(float(np.linalg.norm(c)) - 1.0) > 1e-12:
        raise ValueError("normal coefficients must form a unit vector")
    if shape is None:
        shape = shape_operators(system, frame)
    a_xi = np.einsum("a,apq->pq", c, shape.operators)
    vals, vecs = np.linalg.eigh(a_xi)
    deviation = float(np.max(np.minimum(np.abs(vals),
                                        np.abs(np.abs(vals) - 1.0))))
    if deviation > CLUSTER_RADIUS:
        worst = vals[np.argmax(np.minimum(np.abs(vals),
                                          np.abs(np.abs(vals) - 1.0)))]
        raise SpectrumError(
            f"eigenvalue {worst:.6f} is outside every cluster around "
            f"{{0, +1, -1}} (radius {CLUSTER_RADIUS:.1e})")
    blocks = {}
    for label, target in (("t0", 0.0), ("t1", 1.0), ("tm1", -1.0)):
        sel = np.abs(vals - target) <= CLUSTER_RADIUS
        sub = vecs[:, sel]
        if sub.shape[1]:
            sub, _ = np.linalg.qr(sub)
        blocks[label] = frame.tangent @ sub
    expected = (system.m, system.m2, system.m2)
    observed = (blocks["t0"].shape[1], blocks["t1"].shape[1],
                blocks["tm1"].shape[1])
    if observed != expected:
        raise MultiplicityError(
            f"principal multiplicities {observed} != expected {expected} "
            "for (0, +1, -1)")
    xi = frame.normal @ c
    return PrincipalDecomposition(xi_coeffs=c, xi=xi, t0=blocks["t0"],
                                  t1=blocks["t1"], tm1=blocks["tm1"],
                                  spectrum_deviation=deviation)


def reflection_check(system: CliffordSystem, frame: AdaptedFrame,
                     decomp: PrincipalDecomposition,
                     rotated: CliffordSystem | None = None) -> float:
    """Residual of the eigenspace reflection property.

    After rotating so that P'_0 x = xi, the curvature-(+1) space lies in the
    (-1)-eigenspace of P'_0 and vice versa: returns the max over the bases
    of |P'_0 v + v| and |P'_0 w - w|.
    """
    if rotated is None:
        rotated = rotate_system(system, decomp.xi_coeffs)
    p0 = rotated.matrices[0]
    worst = 0.0
    if decomp.t1.shape[1]:
        worst = max(worst, float(np.max(np.abs(p0 @ decomp.t1 + decomp.t1))))
    if decomp.tm1.shape[1]:
        worst = max(worst, float(np.max(np.abs(p0 @ decomp.tm1 - decomp.tm1))))
    return worst


def willmore_residual(shape: ShapeData) -> float:
    """max_a | sum_ij R_ij h^a_ij |, the reduced Willmore criterion."""
    contractions = np.einsum("pq,apq->a", shape.ricci, shape.operators)
    return float(np.max(np.abs(contractions)))


def ricci_balance(system: CliffordSystem, frame: AdaptedFrame,
                  decomp: PrincipalDecomposition,
                  shape: ShapeData | None = None) -> RicciBalance:
    """Ricci balance between the curved eigenspaces, with the bridge residual.

    balance = | sum_i Ric(v_i) - sum_i Ric(w_i) | over the T_{+1} and T_{-1}
    bases (closed-form Ricci).  The bridge gap compares the signed balance
    against sum_ij R_ij h^xi_ij computed from the shape-operator route; the
    two must agree whether or not the Willmore property holds.
    """
    if shape is None:
        shape = shape_operators(system, frame)
    ric_v = sum(ricci_quadratic(system, frame, decomp.t1[:, i])
                for i in range(decomp.t1.shape[1]))
    ric_w = sum(ricci_quadratic(system, frame, decomp.tm1[:, i])
                for i in range(decomp.tm1.shape[1]))
    signed = float(ric_v - ric_w)
    a_xi = np.einsum("a,apq->pq", decomp.xi_coeffs, shape.operators)
    reduced = float(np.einsum("pq,qp->", shape.ricci, a_xi))
    return RicciBalance(balance=abs(signed), signed_balance=signed,
                        bridge_gap=abs(reduced - signed))


def _ordered_pair_products(rotated: CliffordSystem, x: np.ndarray):
    """P'_a P'_b x for all a, b (diagonal included, callers slice it away)."""
    px = rotated.stack @ x
    return np.einsum("aij,bj->abi", rotated.stack, px)


def projection_balance(system: CliffordSystem, frame: AdaptedFrame,
                       decomp: PrincipalDecomposition,
                       rotated: CliffordSystem | None = None
                       ) -> ProjectionBalance:
    """|proj_{T+1} P'_a P'_b x|^2 versus |proj_{T-1} P'_a P'_b x|^2.

    pairwise_max is the worst deviation over unordered pairs a < b;
    aggregate_gap is the deviation of the full sums over ordered pairs
    a != b.  Pairs containing index 0 must project to (almost) zero on both
    sides since P'_0 P'_b x has principal curvature 0; their worst leak is
    reported separately.
    """
    if rotated is None:
        rotated = rotate_system(system, decomp.xi_coeffs)
    prods = _ordered_pair_products(rotated, frame.x)
    m1 = system.m + 1
    pairwise = 0.0
    signed_unordered = 0.0
    t0_leak = 0.0
    for a in range(m1):
        for b in range(a + 1, m1):
            y = prods[a, b]
            p_plus = float(np.sum((decomp.t1.T @ y) ** 2))
            p_minus = float(np.sum((decomp.tm1.T @ y) ** 2))
            dev = abs(p_plus - p_minus)
            pairwise = max(pairwise, dev)
            signed_unordered += p_plus - p_minus
            if a == 0:
                t0_leak = max(t0_leak, p_plus, p_minus)
    # The ordered sums of the balance identity double the unordered ones
    # (P'_b P'_a x = -P'_a P'_b x leaves squared projections unchanged).
    signed = 2.0 * signed_unordered
    return ProjectionBalance(pairwise_max=pairwise,
                             aggregate_gap=abs(signed),
                             signed_aggregate=signed,
                             t0_pair_leak_max=t0_leak,
                             n_ordered_pairs=m1 * (m1 - 1))


def case_identities(system: CliffordSystem, frame: AdaptedFrame,
                    decomp: PrincipalDecomposition,
                    rotated: CliffordSystem | None = None,
                    tol: float = 1e-8) -> VerificationRecord:
    """The pair-vector identities behind the balance, in the rotated system.

    Checked for every unordered pair a < b:
      * tangency: P'_a P'_b x is orthogonal to x and to every P'_g x.
    For pairs with a, b >= 1:
      * orthogonality: <P'_0 P'_a P'_b x, P'_a P'_b x> = 0;
      * norm bookkeeping: with U, V, W the T_0, T_{+1}, T_{-1} components,
        2 = |U|^2 + |P'_0 U|^2 + 4 |W|^2 and the same with |V|^2.
    For m = 2 additionally P'_0 U = 0 (U is then tangent, and P'_0 U is
    normal, so it must vanish).  m = 1 has no curved pairs at all: the
    record reports trivially_balanced.
    """
    if rotated is None:
        rotated = rotate_system(system, decomp.xi_coeffs)
    x = frame.x
    prods = _ordered_pair_products(rotated, x)
    normals = (rotated.stack @ x).T        # columns P'_g x
    p0 = rotated.matrices[0]
    m1 = system.m + 1
    tangency = 0.0
    orthogonality = 0.0
    bookkeeping = 0.0
    p0u = 0.0
    curved_pairs = 0
    for a in range(m1):
        for b in range(a + 1, m1):
            y = prods[a, b]
            tangency = max(tangency, abs(float(y @ x)),
                           float(np.max(np.abs(normals.T @ y))))
            if a == 0:
                continue
            curved_pairs += 1
            orthogonality = max(orthogonality, abs(float((p0 @ y) @ y)))
            u = decomp.t0 @ (decomp.t0.T @ y)
            v = decomp.t1 @ (decomp.t1.T @ y)
            w = decomp.tm1 @ (decomp.tm1.T @ y)
            p0u_vec = p0 @ u
            base = float(u @ u) + float(p0u_vec @ p0u_vec)
            bookkeeping = max(
                bookkeeping,
                abs(2.0 - (base + 4.0 * float(w @ w))),
                abs(2.0 - (base + 4.0 * float(v @ v))))
            if system.m == 2:
                p0u = max(p0u, float(np.linalg.norm(p0u_vec)))
    worst = max(tangency, orthogonality, bookkeeping, p0u)
    return VerificationRecord(
        name=f"case_identities(m={system.m})",
        passed=worst <= tol,
        max_residual=worst,
        tolerance=tol,
        details={
            "tangency_max": tangency,
            "orthogonality_max": orthogonality,
            "bookkeeping_max": bookkeeping,
            "p0u_max": p0u if system.m == 2 else None,
            "curved_pairs": curved_pairs,
            "trivially_balanced": system.m == 1,
        },
    )


# ---------------------------------------------------------------------------
# per-point aggregation
# ---------------------------------------------------------------------------

def certify_point(system: CliffordSystem, frame: AdaptedFrame,
                  shape: ShapeData, normal_coeffs,
                  geom_tol: float = 1e-8,
                  willmore_tol: float = 1e-7) -> WillmoreCertificate:
    """Fold every per-normal check over a fixed list of normal directions.

    `normal_coeffs` is an ordered iterable of unit coefficient vectors; the
    aggregation is a deterministic fold, so identical inputs give identical
    certificates.
    """
    reduced = willmore_residual(shape)
    balance_max = bridge_max = chain_max = 0.0
    proj_pair_max = proj_agg_max = t0_leak_max = 0.0
    reflection_max = case_max = spectrum_max = 0.0
    count = 0
    for c in normal_coeffs:
        count += 1
        c = np.asarray(c, dtype=float)
        rotated = rotate_system(system, c)
        decomp = principal_decomposition(system, frame, c, shape=shape)
        spectrum_max = max(spectrum_max, decomp.spectrum_deviation)
        reflection_max = max(reflection_max,
                             reflection_check(system, frame, decomp,
                                              rotated=rotated))
        bal = ricci_balance(system, frame, decomp, shape=shape)
        balance_max = max(balance_max, bal.balance)
        bridge_max = max(bridge_max, bal.bridge_gap)
        proj = projection_balance(system, frame, decomp, rotated=rotated)
        proj_pair_max = max(proj_pair_max, proj.pairwise_max)
        proj_agg_max = max(proj_agg_max, proj.aggregate_gap)
        t0_leak_max = max(t0_leak_max, proj.t0_pair_leak_max)
        chain_max = max(chain_max,
                        abs(bal.signed_balance - proj.signed_aggregate))
        case = case_identities(system, frame, decomp, rotated=rotated,
                               tol=geom_tol)
        case_max = max(case_max, case.max_residual)
    geom_worst = max(bridge_max, chain_max, proj_pair_max, proj_agg_max,
                     t0_leak_max, reflection_max, case_max, spectrum_max)
    passed = (reduced < willmore_tol and balance_max < willmore_tol
              and geom_worst < geom_tol)
    return WillmoreCertificate(
        residual_reduced=reduced,
        residual_balance=balance_max,
        residual_projection=max(proj_pair_max, proj_agg_max),
        projection_pairwise_max=proj_pair_max,
        projection_aggregate_max=proj_agg_max,
        bridge_max=bridge_max,
        chain_gap_max=chain_max,
        reflection_max=reflection_max,
        case_max=case_max,
        spectrum_deviation_max=spectrum_max,
        t0_pair_leak_max=t0_leak_max,
        n_normals=count,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# non-Einstein probe
# ---------------------------------------------------------------------------

def einstein_probe(system: CliffordSystem, frame: AdaptedFrame,
                   n_dirs: int, seed: int,
                   shape: ShapeData | None = None) -> EinsteinProbe:
    """Spread of the Ricci quadratic form over probe directions.

    Probes n_dirs random unit tangents plus the extremal eigendirections of
    the Ricci tensor.  When the exact integer inequality 4l > m^2 + 3m + 4
    holds, the focal dimension exceeds m(m+1)/2 and a spread above 0.1 is
    reported as non-Einstein evidence; otherwise the probe is inconclusive
    and asserts nothing.
    """
    if n_dirs < 2:
        raise ValueError("n_dirs must be at least 2")
    if shape is None:
        shape = shape_operators(system, frame)
    rng = default_rng(int(seed) & ((1 << 64) - 1))
    t = frame.tangent
    n = t.shape[1]
    values = []
    for _ in range(n_dirs):
        z = rng.standard_normal(n)
        nz = float(np.linalg.norm(z))
        while nz < 1e-12:
            z = rng.standard_normal(n)
            nz = float(np.linalg.norm(z))
        values.append(ricci_quadratic(system, frame, t @ (z / nz)))
    vals, vecs = np.linalg.eigh(shape.ricci)
    for idx in (0, n - 1):
        values.append(ricci_quadratic(system, frame, t @ vecs[:, idx]))
    ricci_min = float(min(values))
    ricci_max = float(max(values))
    spread = ricci_max - ricci_min
    m, l = system.m, system.l
    condition = 4 * l > m * m + 3 * m + 4
    if condition:
        dim_ok = (2 * l - m - 2) > m * (m + 1) // 2
        spread_ok = spread > RICCI_SPREAD_THRESHOLD
        status = "evidence"
    else:
        dim_ok = None
        spread_ok = None
        status = "inconclusive"
    return EinsteinProbe(ricci_min=ricci_min, ricci_max=ricci_max,
                         spread=spread, dimension_condition=condition,
                         dim_inequality=dim_ok,
                         spread_exceeds_threshold=spread_ok, status=status)
