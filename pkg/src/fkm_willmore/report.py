"""Suite runner: sweep configurations, aggregate, serialize.

The canonical artifact is the JSON report: running the suite twice with the
same configuration and seed must produce byte-identical output.  Everything
stochastic derives from one master seed through named sub-seeds, and wall
time is kept off the serialized form (it lives on the in-memory report and
on stderr).

Exit-code contract, used by the CLI:
    0  every configuration passed
    1  at least one check failed (including inadmissible configurations)
    2  argument errors (argparse's own convention)
    3  an unexpected exception escaped a configuration's checks
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field

import numpy as np
from numpy.random import default_rng

from .clifford import (CliffordSystem, build_clifford_system, delta,
                       dump_matrices, verify_clifford_relations)
from .errors import (AdmissibilityError, CertificationError, ConvergenceError,
                     FrameError, MultiplicityError, SamplingError,
                     SingularityError, SpectrumError)
from .focal import (SPHERE_TOL, VALUE_TOL, deterministic_seed,
                    sample_focal_points, tangent_jacobian_rank)
from .geometry import build_frame, ricci_quadratic, shape_operators
from .polynomial import FkmPolynomial, verify_cartan_munzner
from .willmore import certify_point, einstein_probe

__all__ = [
    "DEFAULT_GRID",
    "DEFAULT_SEED",
    "DEFAULT_TOLERANCES",
    "SCHEMA_VERSION",
    "TOOL_NAME",
    "TOOL_VERSION",
    "VerificationConfig",
    "VerificationReport",
    "evaluate_system",
    "exit_code",
    "render_text",
    "run_suite",
    "write_matrix_dumps",
]

TOOL_NAME = "fkm-verify"
TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1

# Every admissible (m, k) with ambient dimension at most 16.  (3, 1) and
# (4, 1) have m2 = 0 and carry no focal manifold of the verified kind.
DEFAULT_GRID = ((1, 3), (1, 4), (2, 2), (3, 2), (4, 2), (5, 1), (6, 1))
DEFAULT_SEED = 42
DEFAULT_TOLERANCES = {
    "pde": 1e-8,        # sphere PDE residuals
    "cert": 1e-10,      # focal constraint residuals, |H^a|
    "geom": 1e-8,       # curvature identities, spectra, balances
    "willmore": 1e-7,   # reduced criterion and Ricci balance
}

_SEED_MASK = (1 << 64) - 1
_N_CROSSCHECK_DIRS = 100
_N_EINSTEIN_DIRS = 100


def _subseed(master: int, *key: int) -> int:
    """Named, order-insensitive-to-nothing sub-stream of the master seed."""
    ss = np.random.SeedSequence(int(master) & _SEED_MASK,
                                spawn_key=tuple(int(v) for v in key))
    return int(ss.generate_state(2, np.uint64)[0])


@dataclass(frozen=True)
class VerificationConfig:
    """Resolved suite configuration.

    `tolerances` may be passed as a partial override; it is merged with the
    defaults and validated.  Presentation options (out/format/dump path) are
    carried here for the CLI but excluded from canonical serialization.
    """

    configurations: tuple = DEFAULT_GRID
    n_points: int = 20
    n_normals: int = 50
    n_pde_samples: int = 1000
    seed: int = DEFAULT_SEED
    tolerances: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "json"
    dump_matrices: str | None = None

    def __post_init__(self):
        configs = tuple((int(m), int(k)) for m, k in self.configurations)
        if not configs:
            raise ValueError("configuration grid is empty")
        for m, k in configs:
            if m < 1 or k < 1:
                raise ValueError(f"grid entry m={m}, k={k}: both must be >= 1")
        object.__setattr__(self, "configurations", configs)
        merged = dict(DEFAULT_TOLERANCES)
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance name(s): {sorted(unknown)}")
        for name, value in self.tolerances.items():
            value = float(value)
            if not value > 0.0:
                raise ValueError(f"tolerance {name} must be positive")
            merged[name] = value
        object.__setattr__(self, "tolerances", merged)
        if self.format not in ("json", "text"):
            raise ValueError(f"format must be json or text, got {self.format!r}")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.n_normals < 0:
            raise ValueError("n_normals must be >= 0")
        if self.n_pde_samples < 1:
            raise ValueError("n_pde_samples must be >= 1")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass
class VerificationReport:
    """In-memory result of a suite run.

    wall_time_s is runtime bookkeeping only; it never enters to_dict, so
    identical config + seed give byte-identical serializations.
    """

    config: VerificationConfig
    entries: list
    overall_pass: bool
    internal_error: bool = False
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        cfg = self.config
        return _jsonable({
            "schema_version": SCHEMA_VERSION,
            "tool": {"name": TOOL_NAME, "version": TOOL_VERSION},
            "seed": cfg.seed,
            "config": {
                "configurations": [list(pair) for pair in cfg.configurations],
                "n_points": cfg.n_points,
                "n_normals": cfg.n_normals,
                "n_pde_samples": cfg.n_pde_samples,
                "tolerances": {k: cfg.tolerances[k]
                               for k in sorted(cfg.tolerances)},
            },
            "configurations": self.entries,
            "overall_pass": self.overall_pass,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _jsonable(obj):
    """Recursive plain-type sanitizer; rejects anything it cannot map."""
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__} in report")


# ---------------------------------------------------------------------------
# per-configuration evaluation
# ---------------------------------------------------------------------------

def evaluate_system(system: CliffordSystem, cfg: VerificationConfig,
                    config_index: int) -> dict:
    """Run every check block for one admissible system.

    Expected failure modes (sampling, certification, frame, spectrum) mark
    their block failed and skip dependents; anything else propagates to
    run_suite, which records an internal error (exit code 3).
    """
    tol = cfg.tolerances
    m, l = system.m, system.l
    n = system.ambient_dim - m - 2
    entry = {
        "m": m,
        "k": l // delta(m),
        "l": l,
        "ambient_dim": system.ambient_dim,
        "focal_dim": n,
        "admissible": True,
    }
    blocks = {}

    rec = verify_clifford_relations(system)
    blocks["clifford"] = {"max_deviation": rec.max_residual,
                          "pass": rec.passed}

    poly = FkmPolynomial(system)
    rec = verify_cartan_munzner(poly, n_samples=cfg.n_pde_samples,
                                seed=_subseed(cfg.seed, config_index, 0),
                                tol=tol["pde"])
    blocks["cartan_munzner"] = {
        "n_samples": cfg.n_pde_samples,
        "max_gradient_residual": rec.details["max_gradient_residual"],
        "max_laplacian_residual": rec.details["max_laplacian_residual"],
        "pass": rec.passed,
    }

    points = None
    try:
        produced = [deterministic_seed(system)]
        if cfg.n_points > 1:
            produced.extend(sample_focal_points(
                system, cfg.n_points - 1,
                seed=_subseed(cfg.seed, config_index, 1)))
        points = produced
    except (SamplingError, CertificationError, ConvergenceError,
            SingularityError) as exc:
        blocks["points"] = {"count": 0, "error": str(exc), "pass": False}

    if points is not None:
        rank_expected = m + 2
        ranks = sorted({tangent_jacobian_rank(system, p) for p in points})
        max_c = max(p.residual_constraints for p in points)
        max_s = max(p.residual_sphere for p in points)
        max_v = max(abs(poly.value(p.x) - 1.0) for p in points)
        blocks["points"] = {
            "count": len(points),
            "max_constraint_residual": max_c,
            "max_sphere_residual": max_s,
            "max_value_gap": max_v,
            "jacobian_ranks": ranks,
            "rank_expected": rank_expected,
            "coordinates": [p.x for p in points],
            "pass": (max_c <= tol["cert"] and max_s <= SPHERE_TOL
                     and max_v <= VALUE_TOL and ranks == [rank_expected]),
        }

    frames = []
    shapes = []
    if points is not None:
        try:
            s_expected = 2.0 * (l - m - 1) * (m + 1)
            s_vals = []
            rho_gap = h_max = cross_max = trace_gap = 0.0
            for pi, p in enumerate(points):
                frame = build_frame(system, p)
                shape = shape_operators(system, frame)
                frames.append(frame)
                shapes.append(shape)
                s_vals.append(shape.sff_norm_sq)
                rho_gap = max(rho_gap, abs(shape.trace_free_norm_sq
                                           - shape.sff_norm_sq))
                h_max = max(h_max,
                            float(np.max(np.abs(shape.mean_curvature))))
                trace_gap = max(trace_gap,
                                abs(float(np.trace(shape.ricci))
                                    - (n * (n - 1) - shape.sff_norm_sq)))
                rng = default_rng(_subseed(cfg.seed, config_index, 2, pi))
                for _ in range(_N_CROSSCHECK_DIRS):
                    z = rng.standard_normal(n)
                    z /= float(np.linalg.norm(z))
                    quad = ricci_quadratic(system, frame, frame.tangent @ z)
                    cross_max = max(cross_max,
                                    abs(quad - float(z @ shape.ricci @ z)))
            s_gap = max(abs(v - s_expected) for v in s_vals)
            s_spread = max(s_vals) - min(s_vals)
            blocks["geometry"] = {
                "S_expected": s_expected,
                "S_max_gap": s_gap,
                "S_spread": s_spread,
                "rho2_vs_S_max_gap": rho_gap,
                "H_max": h_max,
                "ricci_crosscheck_max": cross_max,
                "ricci_trace_max_gap": trace_gap,
                "pass": (s_gap <= tol["geom"] and s_spread <= tol["geom"]
                         and rho_gap <= tol["geom"] and h_max <= tol["cert"]
                         and cross_max <= tol["geom"]
                         and trace_gap <= tol["geom"]),
            }
        except FrameError as exc:
            frames = []
            shapes = []
            blocks["geometry"] = {"error": str(exc), "pass": False}

    if frames:
        try:
            certs = []
            for pi, (frame, shape) in enumerate(zip(frames, shapes)):
                coeffs = list(np.eye(m + 1))
                rng = default_rng(_subseed(cfg.seed, config_index, 3, pi))
                for _ in range(cfg.n_normals):
                    c = rng.standard_normal(m + 1)
                    c /= float(np.linalg.norm(c))
                    coeffs.append(c)
                certs.append(certify_point(system, frame, shape, coeffs,
                                           geom_tol=tol["geom"],
                                           willmore_tol=tol["willmore"]))
        except (SpectrumError, MultiplicityError) as exc:
            blocks["lemma"] = {"error": str(exc), "pass": False}
        else:
            spectrum_max = max(c.spectrum_deviation_max for c in certs)
            blocks["lemma"] = {
                "n_normals_per_point": m + 1 + cfg.n_normals,
                "max_spectrum_deviation": spectrum_max,
                "multiplicities": [m, system.m2, system.m2],
                "pass": spectrum_max <= tol["geom"],
            }
            reduced = [c.residual_reduced for c in certs]
            willmore = {
                "residual_max": max(reduced),
                "residual_median": float(np.median(reduced)),
                "balance_max": max(c.residual_balance for c in certs),
                "bridge_max": max(c.bridge_max for c in certs),
                "chain_max": max(c.chain_gap_max for c in certs),
                "projection_pairwise_max":
                    max(c.projection_pairwise_max for c in certs),
                "projection_aggregate_max":
                    max(c.projection_aggregate_max for c in certs),
                "t0_pair_leak_max": max(c.t0_pair_leak_max for c in certs),
                "reflection_max": max(c.reflection_max for c in certs),
                "case_identity_max": max(c.case_max for c in certs),
            }
            willmore["pass"] = (
                willmore["residual_max"] < tol["willmore"]
                and willmore["balance_max"] < tol["willmore"]
                and max(willmore["bridge_max"], willmore["chain_max"],
                        willmore["projection_pairwise_max"],
                        willmore["projection_aggregate_max"],
                        willmore["t0_pair_leak_max"],
                        willmore["reflection_max"],
                        willmore["case_identity_max"]) <= tol["geom"])
            blocks["willmore"] = willmore

            probes = [einstein_probe(system, frame, _N_EINSTEIN_DIRS,
                                     _subseed(cfg.seed, config_index, 4, pi),
                                     shape=shape)
                      for pi, (frame, shape) in enumerate(zip(frames, shapes))]
            status = probes[0].status
            if status == "evidence":
                spread_ok = all(p.spread_exceeds_threshold for p in probes)
                einstein_pass = spread_ok and all(p.dim_inequality
                                                  for p in probes)
            else:
                spread_ok = None
                einstein_pass = True
            blocks["einstein"] = {
                "ricci_min": min(p.ricci_min for p in probes),
                "ricci_max": max(p.ricci_max for p in probes),
                "spread": max(p.spread for p in probes),
                "dimension_condition": probes[0].dimension_condition,
                "dim_inequality": probes[0].dim_inequality,
                "spread_exceeds_threshold": spread_ok,
                "status": status,
                "pass": einstein_pass,
            }

    entry["blocks"] = blocks
    entry["pass"] = bool(blocks) and all(b.get("pass", False)
                                         for b in blocks.values())
    return entry


def run_suite(cfg: VerificationConfig) -> VerificationReport:
    """Evaluate every configuration in the grid."""
    start = time.perf_counter()
    entries = []
    internal = False
    for ci, (m, k) in enumerate(cfg.configurations):
        base = {"m": m, "k": k}
        try:
            system = build_clifford_system(m, k)
        except AdmissibilityError as exc:
            entries.append({**base, "admissible": False,
                            "reason": f"inadmissible: m2={exc.m2}",
                            "pass": False})
            continue
        except NotImplementedError as exc:
            entries.append({**base, "admissible": False,
                            "reason": str(exc), "pass": False})
            continue
        try:
            entries.append(evaluate_system(system, cfg, ci))
        except Exception as exc:  # escaping checks is an internal error
            internal = True
            entries.append({**base, "admissible": True, "internal": True,
                            "error": repr(exc), "pass": False})
    overall = all(e["pass"] for e in entries)
    return VerificationReport(config=cfg, entries=entries,
                              overall_pass=overall, internal_error=internal,
                              wall_time_s=time.perf_counter() - start)


def exit_code(report: VerificationReport) -> int:
    if report.internal_error:
        return 3
    return 0 if report.overall_pass else 1


def render_text(report: VerificationReport) -> str:
    """Line-per-configuration summary; as deterministic as the JSON."""
    cfg = report.config
    lines = [f"{TOOL_NAME} {TOOL_VERSION} (schema {SCHEMA_VERSION})",
             f"seed={cfg.seed} points={cfg.n_points} normals={cfg.n_normals}"
             f" pde_samples={cfg.n_pde_samples}",
             "tolerances: " + " ".join(f"{k}={cfg.tolerances[k]:g}"
                                       for k in sorted(cfg.tolerances))]
    for e in report.entries:
        tag = "PASS" if e["pass"] else "FAIL"
        head = f"[{tag}] m={e['m']} k={e['k']}"
        if not e.get("admissible", True):
            lines.append(f"{head}: {e['reason']}")
            continue
        if e.get("internal"):
            lines.append(f"{head}: internal error: {e['error']}")
            continue
        b = e["blocks"]
        parts = [f"l={e['l']}", f"dim={e['focal_dim']}"]
        cm = b.get("cartan_munzner")
        if cm:
            parts.append("pde={:.3e}".format(
                max(cm["max_gradient_residual"], cm["max_laplacian_residual"])))
        geo = b.get("geometry", {})
        if "S_max_gap" in geo:
            parts.append("S_gap={:.3e}".format(geo["S_max_gap"]))
        wl = b.get("willmore")
        if wl:
            parts.append("willmore={:.3e}".format(wl["residual_max"]))
            parts.append("balance={:.3e}".format(wl["balance_max"]))
        ein = b.get("einstein")
        if ein:
            parts.append("einstein=" + ein["status"])
        failed = sorted(name for name, blk in b.items()
                        if not blk.get("pass", False))
        if failed:
            parts.append("failed=" + ",".join(failed))
        lines.append(head + ": " + " ".join(parts))
    lines.append("overall: " + ("PASS" if report.overall_pass else "FAIL"))
    return "\n".join(lines) + "\n"


def write_matrix_dumps(cfg: VerificationConfig, directory: str) -> list:
    """Dump each admissible grid system to <dir>/clifford_m{m}_k{k}.txt."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for m, k in cfg.configurations:
        try:
            system = build_clifford_system(m, k)
        except (AdmissibilityError, NotImplementedError):
            continue
        path = os.path.join(directory, f"clifford_m{m}_k{k}.txt")
        with open(path, "w", encoding="ascii") as fh:
            fh.write(dump_matrices(system))
        written.append(path)
    return written
