"""Scenario registry and runners.

Each scenario builds its construction from scratch (profiles, speed bound,
maps), certifies that the selected residual vanishes over a dense grid with
both the analytic jets and the finite-difference oracle, measures the
principle/hull margins on the scenario domains, and folds everything into a
deterministic report.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .checkers import (
    annulus_domain,
    conservation_check,
    directional_check,
    hull_check,
    max_principle_check,
    residual_certify,
    slab_domain,
)
from .maps import (
    CurveMap,
    MapJet,
    PerturbationPotentialMap,
    PolarSpiralMap,
    RadialCurveMap,
    ScalarProfileMap,
    TrigQuadMap,
    polar_decompose,
)
from .operators import grad_norm_sq, normal, orthogonal_projection, tangential
from .profiles import ArcComplement, BumpW1, BumpZ1, GaussianRho, PolarPhase, choose_M

__all__ = [
    "ScenarioConfig",
    "CheckReport",
    "SCENARIO_NAMES",
    "validate_config",
    "run_scenario",
    "INV_E",
    "WITNESS_ABSCISSAS",
]

INV_E = math.exp(-1.0)

# Abscissas where the analytic extrema are attained; injecting them into
# interior grids turns the margin checks into near-exact comparisons.
WITNESS_ABSCISSAS = (0.0, 1.0, -1.0, 2.0)

_VECTOR_SCENARIOS = ("ex1a", "ex1b", "ex2")
SCENARIO_NAMES = ("ex1a", "ex1b", "ex2", "ex3", "properties")


@dataclass
class ScenarioConfig:
    scenario: str
    n: int = 1
    N: int = 2
    grid_points: int = 2001
    safety: float = 0.05
    residual_tol_scale: float = 1e-8
    fd_tol_scale: float = 1e-3
    hull_tol: float = 1e-9
    seed: int = 0
    t_max: float = 2.0
    cache_cells: int = 4096
    fd_step: float = 1e-4
    cross_extent: float = 1.0
    inject_witnesses: bool = True
    out_path: str | None = None
    format: str = "json"

    def witnesses(self):
        return WITNESS_ABSCISSAS if self.inject_witnesses else ()


def validate_config(cfg: ScenarioConfig) -> list[str]:
    """Field-by-field validation; returns a list of error strings."""
    errors = []
    if cfg.scenario not in SCENARIO_NAMES:
        errors.append(f"scenario: unknown name {cfg.scenario!r}; expected one of {SCENARIO_NAMES}")
    if cfg.n < 1:
        errors.append("n: must be >= 1")
    if cfg.scenario in _VECTOR_SCENARIOS and cfg.N < 2:
        errors.append("N: must be >= 2 for the vector-valued scenarios")
    if cfg.grid_points < 2:
        errors.append("grid_points: must be >= 2")
    if cfg.safety <= 0.0:
        errors.append("safety: must be positive")
    if cfg.residual_tol_scale <= 0.0:
        errors.append("residual_tol_scale: must be positive")
    if cfg.fd_tol_scale <= 0.0:
        errors.append("fd_tol_scale: must be positive")
    if cfg.hull_tol <= 0.0:
        errors.append("hull_tol: must be positive")
    if cfg.t_max <= 0.0:
        errors.append("t_max: must be positive")
    if cfg.cache_cells < 16:
        errors.append("cache_cells: must be >= 16")
    if cfg.fd_step <= 0.0:
        errors.append("fd_step: must be positive")
    if cfg.cross_extent <= 0.0:
        errors.append("cross_extent: must be positive")
    if cfg.format not in ("json", "csv"):
        errors.append(f"format: must be 'json' or 'csv', got {cfg.format!r}")
    return errors


@dataclass
class CheckReport:
    """One scenario's full result; sections land at the top of the JSON."""

    scenario: str
    config: dict
    sections: dict
    overall_pass: bool
    timings: dict

    def to_dict(self, with_timings: bool = True) -> dict:
        doc = {"scenario": self.scenario, "config": self.config}
        doc.update(self.sections)
        doc["overall_pass"] = self.overall_pass
        if with_timings:
            doc["timings"] = self.timings
        return doc


def _point(p) -> list | None:
    return None if p is None else np.asarray(p, dtype=float).tolist()


def _residual_dict(r) -> dict:
    return {
        "sup_residual": r.sup_residual,
        "tol": r.tol,
        "pass": r.passed,
        "worst_point": _point(r.worst_point),
        "points": r.n_points,
        "jet_source": r.jet_source,
    }


def _verdict_dict(v, domain_label: str) -> dict:
    return {
        "domain": domain_label,
        "sup_interior": v.sup_interior,
        "max_boundary": v.max_boundary,
        "inf_interior": v.inf_interior,
        "min_boundary": v.min_boundary,
        "margin": v.max_violation_margin,
        "min_margin": v.min_violation_margin,
        "max_violation": v.max_violation,
        "min_violation": v.min_violation,
        "witness_sup": _point(v.witness_sup),
        "witness_inf": _point(v.witness_inf),
    }


def _hull_dict(h, domain_label: str) -> dict:
    return {
        "domain": domain_label,
        "contained": h.contained,
        "max_outside_distance": h.max_outside_distance,
        "tol": h.tol,
        "witness_point": _point(h.witness_point),
        "witness_image": _point(h.witness_image),
    }


def _conservation_dict(c, tol: float, domain_label: str) -> dict:
    return {
        "domain": domain_label,
        "max_dev": c.max_dev,
        "tol": tol,
        "pass": c.max_dev <= tol,
        "target_sq": c.target_sq,
        "worst_point": _point(c.worst_point),
    }


def _speed_bound_dict(sb) -> dict:
    return {"M": sb.M, "sup_estimate": sb.sup_estimate, "safety": sb.safety}


def _unit(k: int, length: int) -> np.ndarray:
    e = np.zeros(length)
    e[k] = 1.0
    return e


def _two_sided_failure(v_neg, v_pos, half_margin: float) -> bool:
    """Exactly one slab violates the maximum principle, the other the
    minimum principle, each by at least half the analytic margin."""
    max_flags = [
        v.max_violation_margin >= half_margin for v in (v_neg, v_pos)
    ]
    min_flags = [
        v.min_violation_margin >= half_margin for v in (v_neg, v_pos)
    ]
    if sum(max_flags) != 1 or sum(min_flags) != 1:
        return False
    return max_flags.index(True) != min_flags.index(True)


def _run_ex1a(cfg: ScenarioConfig) -> tuple[dict, bool]:
    w1 = BumpW1()
    sb = choose_M(w1, cfg.safety)
    w2 = ArcComplement(w1, sb.M, cells=cfg.cache_cells)
    u1 = CurveMap(w1, w2, cfg.n, cfg.N)
    m_cubed = sb.M**3
    wit = cfg.witnesses()

    res_domain = slab_domain(-3.0, 3.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    r_a = residual_certify(u1, "tangential", res_domain, cfg.residual_tol_scale * m_cubed)
    r_f = residual_certify(
        u1, "tangential", res_domain, cfg.fd_tol_scale * m_cubed,
        jet_source="fd", fd_step=cfg.fd_step,
    )
    cons_tol = 1e-10 * sb.M**2
    cons = conservation_check(u1, res_domain)

    slab_neg = slab_domain(-2.0, 0.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    slab_pos = slab_domain(0.0, 2.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    xi1 = _unit(0, cfg.N)
    xi2 = _unit(1, cfg.N)
    v1_neg = directional_check(u1, xi1, slab_neg)
    v1_pos = directional_check(u1, xi1, slab_pos)
    v2_neg = directional_check(u1, xi2, slab_neg)
    v2_pos = directional_check(u1, xi2, slab_pos)

    hull_domain = slab_domain(-2.0, 2.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    hv = hull_check(u1, hull_domain, cfg.hull_tol)

    half = 0.5 * INV_E
    two_sided = _two_sided_failure(v1_neg, v1_pos, half)
    hull_failed = (not hv.contained) and hv.max_outside_distance >= half
    overall = r_a.passed and r_f.passed and cons.max_dev <= cons_tol and two_sided and hull_failed

    sections = {
        "speed_bound": _speed_bound_dict(sb),
        "residual": {
            "domain": res_domain.label,
            "analytic": _residual_dict(r_a),
            "fd": _residual_dict(r_f),
        },
        "conservation": _conservation_dict(cons, cons_tol, res_domain.label),
        "principle": {
            "xi_e1_minus": _verdict_dict(v1_neg, slab_neg.label),
            "xi_e1_plus": _verdict_dict(v1_pos, slab_pos.label),
            "xi_e2_minus": _verdict_dict(v2_neg, slab_neg.label),
            "xi_e2_plus": _verdict_dict(v2_pos, slab_pos.label),
        },
        "hull": _hull_dict(hv, hull_domain.label),
        "assessment": {
            "analytic_margin": INV_E,
            "margin_threshold": half,
            "two_sided_failure": two_sided,
            "hull_failure_detected": hull_failed,
        },
    }
    return sections, overall


def _run_ex1b(cfg: ScenarioConfig) -> tuple[dict, bool]:
    z1 = BumpZ1()
    sb = choose_M(z1, cfg.safety)
    z2 = ArcComplement(z1, sb.M, cells=cfg.cache_cells)
    u2 = RadialCurveMap(z1, z2, cfg.n, cfg.N)
    m_cubed = sb.M**3
    wit = cfg.witnesses()

    domain = annulus_domain(1.0, 3.0, cfg.n, cfg.grid_points, wit)
    r_a = residual_certify(u2, "tangential", domain, cfg.residual_tol_scale * m_cubed)
    r_f = residual_certify(
        u2, "tangential", domain, cfg.fd_tol_scale * m_cubed,
        jet_source="fd", fd_step=cfg.fd_step,
    )
    cons_tol = 1e-10 * sb.M**2
    cons = conservation_check(u2, domain)

    verdict = directional_check(u2, _unit(0, cfg.N), domain)
    hv = hull_check(u2, domain, cfg.hull_tol)

    half = 0.5 * INV_E
    margin_ok = verdict.max_violation_margin >= half
    hull_failed = (not hv.contained) and hv.max_outside_distance >= half
    overall = (
        r_a.passed and r_f.passed and cons.max_dev <= cons_tol and margin_ok and hull_failed
    )

    sections = {
        "speed_bound": _speed_bound_dict(sb),
        "residual": {
            "domain": domain.label,
            "analytic": _residual_dict(r_a),
            "fd": _residual_dict(r_f),
        },
        "conservation": _conservation_dict(cons, cons_tol, domain.label),
        "principle": {"xi_e1": _verdict_dict(verdict, domain.label)},
        "hull": _hull_dict(hv, domain.label),
        "assessment": {
            "analytic_margin": INV_E,
            "margin_threshold": half,
            "principle_violation_detected": margin_ok,
            "hull_failure_detected": hull_failed,
        },
    }
    return sections, overall


def _run_ex2(cfg: ScenarioConfig) -> tuple[dict, bool]:
    rho = GaussianRho()
    sb = choose_M(rho, cfg.safety)
    phase = PolarPhase(sb.M, t_max=cfg.t_max, cells=cfg.cache_cells, rho=rho)
    u3 = PolarSpiralMap(rho, phase, cfg.n, cfg.N)
    m_cubed = sb.M**3
    wit = cfg.witnesses()

    res_domain = slab_domain(-1.5, 1.5, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    r_a = residual_certify(u3, "tangential", res_domain, cfg.residual_tol_scale * m_cubed)
    r_f = residual_certify(
        u3, "tangential", res_domain, cfg.fd_tol_scale * m_cubed,
        jet_source="fd", fd_step=cfg.fd_step,
    )
    cons_tol = 1e-9 * sb.M**2
    cons = conservation_check(u3, res_domain)

    principle_domain = slab_domain(-1.0, 1.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    verdict = max_principle_check(
        lambda x: float(np.linalg.norm(u3.value(x))), principle_domain
    )

    margin_analytic = 1.0 - INV_E
    margin_ok = verdict.max_violation_margin >= 0.5 * margin_analytic
    overall = r_a.passed and r_f.passed and cons.max_dev <= cons_tol and margin_ok

    sections = {
        "speed_bound": _speed_bound_dict(sb),
        "residual": {
            "domain": res_domain.label,
            "analytic": _residual_dict(r_a),
            "fd": _residual_dict(r_f),
        },
        "conservation": _conservation_dict(cons, cons_tol, res_domain.label),
        "principle": {"modulus": _verdict_dict(verdict, principle_domain.label)},
        "assessment": {
            "analytic_margin": margin_analytic,
            "margin_threshold": 0.5 * margin_analytic,
            "principle_violation_detected": margin_ok,
        },
    }
    return sections, overall


def _run_ex3(cfg: ScenarioConfig) -> tuple[dict, bool]:
    w1 = BumpW1()
    sb = choose_M(w1, cfg.safety)
    v_map = ScalarProfileMap(w1, cfg.n)
    f_map = PerturbationPotentialMap(w1, sb.M, cfg.n)
    m_cubed = sb.M**3
    wit = cfg.witnesses()

    res_domain = slab_domain(-3.0, 3.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    r_a = residual_certify(
        v_map, "perturbed_scalar", res_domain, cfg.residual_tol_scale * m_cubed, f_map=f_map
    )
    r_f = residual_certify(
        v_map, "perturbed_scalar", res_domain, cfg.fd_tol_scale * m_cubed,
        jet_source="fd", fd_step=cfg.fd_step, f_map=f_map,
    )

    slab_neg = slab_domain(-2.0, 0.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    slab_pos = slab_domain(0.0, 2.0, cfg.n, cfg.grid_points, cfg.cross_extent, wit)
    field = lambda x: float(v_map.value(x)[0])  # noqa: E731
    v_neg = max_principle_check(field, slab_neg)
    v_pos = max_principle_check(field, slab_pos)

    half = 0.5 * INV_E
    two_sided = _two_sided_failure(v_neg, v_pos, half)
    overall = r_a.passed and r_f.passed and two_sided

    sections = {
        "speed_bound": _speed_bound_dict(sb),
        "residual": {
            "domain": res_domain.label,
            "analytic": _residual_dict(r_a),
            "fd": _residual_dict(r_f),
        },
        "principle": {
            "v_minus": _verdict_dict(v_neg, slab_neg.label),
            "v_plus": _verdict_dict(v_pos, slab_pos.label),
        },
        "assessment": {
            "analytic_margin": INV_E,
            "margin_threshold": half,
            "two_sided_failure": two_sided,
        },
    }
    return sections, overall


def _random_map_jet(rng: np.random.Generator, N: int, n: int) -> MapJet:
    jac = rng.normal(size=(N, n))
    hess = rng.normal(size=(N, n, n))
    hess = 0.5 * (hess + hess.transpose(0, 2, 1))
    return MapJet(rng.normal(size=N), jac, hess)


def _relative_perpendicularity_defect(m: MapJet, t_vec, n_vec) -> float | None:
    """|T·N| / (|T| |N|), or None when either summand is numerically zero.

    When the jacobian has full row rank the projection vanishes and the
    computed normal part is pure roundoff; perpendicularity then holds
    because one summand is zero, and an angle against noise would be
    meaningless.  The floor is the roundoff scale of the normal assembly,
    |Du|² * |lap| * O(eps).
    """
    t_norm = float(np.linalg.norm(t_vec))
    n_norm = float(np.linalg.norm(n_vec))
    lap = np.einsum("bii->b", m.hessian)
    g = float(np.einsum("ai,ai->", m.jacobian, m.jacobian))
    noise_floor = 64.0 * np.finfo(float).eps * g * float(np.linalg.norm(lap))
    if t_norm == 0.0 or n_norm <= noise_floor:
        return None
    return abs(float(t_vec @ n_vec)) / (t_norm * n_norm)


def _run_properties(cfg: ScenarioConfig) -> tuple[dict, bool]:
    rng = np.random.default_rng(cfg.seed)
    dims = [(N, n) for N in (1, 2, 3, 5) for n in (1, 2, 3)]
    samples = 500

    max_asym = max_idem = max_annih = max_perp = max_scalar_normal = 0.0
    scalar_samples = 0
    perp_samples = 0
    for k in range(samples):
        N, n = dims[k % len(dims)]
        m = _random_map_jet(rng, N, n)
        p = orthogonal_projection(m.jacobian)
        max_asym = max(max_asym, float(np.abs(p - p.T).max()))
        max_idem = max(max_idem, float(np.abs(p @ p - p).max()))
        jnorm = float(np.linalg.norm(m.jacobian))
        max_annih = max(max_annih, float(np.linalg.norm(p @ m.jacobian)) / jnorm)
        t_vec = tangential(m)
        n_vec = normal(m)
        rel = _relative_perpendicularity_defect(m, t_vec, n_vec)
        if rel is not None:
            perp_samples += 1
            max_perp = max(max_perp, rel)
        if N == 1:
            scalar_samples += 1
            max_scalar_normal = max(max_scalar_normal, float(np.abs(n_vec).max()))
    projection = {
        "samples": samples,
        "max_asymmetry": max_asym,
        "max_idempotency_defect": max_idem,
        "max_annihilation_rel": max_annih,
        "tol": 1e-12,
        "pass": max(max_asym, max_idem, max_annih) <= 1e-12,
    }
    perpendicularity = {
        "samples": samples,
        "nonzero_normal_samples": perp_samples,
        "max_relative_dot": max_perp,
        "tol": 1e-9,
        "pass": max_perp <= 1e-9 and perp_samples > 0,
    }
    scalar_normal = {
        "samples": scalar_samples,
        "max_abs": max_scalar_normal,
        "pass": max_scalar_normal == 0.0,
    }

    # tangential = Du · D(half |Du|²), gradient taken by central differences
    # of the scalar field x -> half |Du(x)|²
    h = cfg.fd_step
    max_rel = 0.0
    n_maps, pts_per_map = 20, 5
    for k in range(n_maps):
        N, n = dims[k % len(dims)]
        mp = TrigQuadMap.random(rng, n, N)
        for _ in range(pts_per_map):
            x = rng.uniform(-1.5, 1.5, size=n)
            m = mp.map_jet(x)
            grad = np.zeros(n)
            for i in range(n):
                e = np.zeros(n)
                e[i] = h
                gp = 0.5 * grad_norm_sq(mp.map_jet(x + e))
                gm = 0.5 * grad_norm_sq(mp.map_jet(x - e))
                grad[i] = (gp - gm) / (2.0 * h)
            ident = m.jacobian @ grad
            t_vec = tangential(m)
            scale = max(float(np.linalg.norm(t_vec)), float(np.linalg.norm(ident)), 1e-8)
            max_rel = max(max_rel, float(np.linalg.norm(t_vec - ident)) / scale)
    gradient_identity = {
        "maps": n_maps,
        "points_per_map": pts_per_map,
        "max_relative_error": max_rel,
        "tol": 1e-5,
        "pass": max_rel <= 1e-5,
    }

    # polar identity on the polar-spiral construction
    rho = GaussianRho()
    sb = choose_M(rho, cfg.safety)
    phase = PolarPhase(sb.M, t_max=cfg.t_max, cells=cfg.cache_cells, rho=rho)
    u3 = PolarSpiralMap(rho, phase, n=1, N=2)
    max_polar_rel = 0.0
    max_direction_dot = 0.0
    polar_samples = 100
    for t in rng.uniform(-1.5, 1.5, size=polar_samples):
        m = u3.map_jet([t])
        pd = polar_decompose(m)
        lhs = grad_norm_sq(m)
        rhs = float(pd.grad_rho @ pd.grad_rho) + pd.rho**2 * float(
            np.einsum("ai,ai->", pd.grad_direction, pd.grad_direction)
        )
        max_polar_rel = max(max_polar_rel, abs(lhs - rhs) / abs(lhs))
        max_direction_dot = max(
            max_direction_dot, float(np.abs(pd.direction @ pd.grad_direction).max())
        )
    polar = {
        "samples": polar_samples,
        "max_relative_error": max_polar_rel,
        "tol": 1e-9,
        "max_direction_dot": max_direction_dot,
        "dot_tol": 1e-12,
        "pass": max_polar_rel <= 1e-9 and max_direction_dot <= 1e-12,
    }

    sections = {
        "speed_bound": _speed_bound_dict(sb),
        "properties": {
            "projection": projection,
            "perpendicularity": perpendicularity,
            "scalar_normal_zero": scalar_normal,
            "tangential_gradient_identity": gradient_identity,
            "polar_identity": polar,
        },
    }
    overall = all(
        section["pass"]
        for section in (projection, perpendicularity, scalar_normal, gradient_identity, polar)
    )
    return sections, overall


_RUNNERS = {
    "ex1a": _run_ex1a,
    "ex1b": _run_ex1b,
    "ex2": _run_ex2,
    "ex3": _run_ex3,
    "properties": _run_properties,
}


def run_scenario(cfg: ScenarioConfig) -> CheckReport:
    """Run one scenario; deterministic for a fixed config (incl. seed)."""
    errors = validate_config(cfg)
    if errors:
        raise ValueError("invalid configuration: " + "; ".join(errors))
    t0 = time.perf_counter()
    sections, overall = _RUNNERS[cfg.scenario](cfg)
    elapsed = time.perf_counter() - t0
    return CheckReport(
        scenario=cfg.scenario,
        config=asdict(cfg),
        sections=sections,
        overall_pass=overall,
        timings={"total_s": elapsed},
    )


def config_from_mapping(mapping: dict) -> ScenarioConfig:
    """Build a config from string-keyed values, coercing field types."""
    kwargs = {}
    known = {f.name: f for f in fields(ScenarioConfig)}
    for key, raw in mapping.items():
        if key not in known:
            raise ValueError(f"unknown configuration key {key!r}")
        kwargs[key] = _coerce(known[key], raw)
    return ScenarioConfig(**kwargs)


def _coerce(field_spec, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    name = field_spec.name
    if name in ("n", "N", "grid_points", "seed", "cache_cells"):
        return int(raw)
    if name in ("safety", "residual_tol_scale", "fd_tol_scale", "hull_tol",
                "t_max", "fd_step", "cross_extent"):
        return float(raw)
    if name == "inject_witnesses":
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"inject_witnesses: cannot parse boolean from {raw!r}")
    return raw
