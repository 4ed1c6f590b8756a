"""Runs the whole pipeline for one hypersurface and renders the result."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from gmpy2 import mpq

from polardeg.infinity import BetaReport, beta_total
from polardeg.parsing import HypersurfaceInput
from polardeg.polar import ConeTestResult, PolDegreeResult, cone_apex_set, pol_degree, singular_polar_degree
from polardeg.poly import LinearForm, Polynomial, projective_normalize
from polardeg.transversality import (
    AdmissibilityVerdict,
    Filtration,
    SpecialPointReport,
    alpha_at_cluster,
    check_admissible,
    singular_filtration,
    special_points,
)
from polardeg.zerodim import ProjectivePoint

OK = "OK"
FAILED = "FAILED"


def rational_json(q) -> int | str:
    q = mpq(q)
    if q.denominator == 1:
        return int(q.numerator)
    return f"{int(q.numerator)}/{int(q.denominator)}"


def point_json(point: ProjectivePoint) -> Any:
    if point.point is not None:
        return [rational_json(c) for c in point.point]
    return {"ideal": [str(g) for g in point.cluster.ideal.groebner().basis], "degree": point.degree}


@dataclass
class AlphaTerm:
    point: ProjectivePoint
    value: int

    @property
    def total(self) -> int:
        return self.point.degree * self.value


@dataclass
class DecompositionReport:
    polynomial: Polynomial
    pol: PolDegreeResult
    cone: ConeTestResult
    special: SpecialPointReport
    filtration: Filtration = field(repr=False)
    reduced: bool = False
    seed: int = 0
    hyperplane: LinearForm | None = None
    verdict: AdmissibilityVerdict | None = None
    alpha_terms: list[AlphaTerm] = field(default_factory=list)
    beta: BetaReport | None = None
    polar_multiplicity: int | None = None
    checks: dict[str, bool | None] = field(default_factory=dict)
    audit: dict[str, list[str]] = field(default_factory=dict)

    @property
    def admissible(self) -> bool | None:
        return None if self.verdict is None else self.verdict.admissible

    @property
    def alpha(self) -> int | None:
        if self.beta is None:
            return None
        return sum(t.total for t in self.alpha_terms)

    @property
    def status(self) -> str:
        return FAILED if self.checks.get("identity") is False else OK

    def special_alpha(self) -> list[tuple[ProjectivePoint, int]]:
        return [(c, a) for c, a in zip(self.special.candidates, self.special.alpha) if a > 0]


def _isolated_singularities(filtration: Filtration) -> bool:
    layers = filtration.layers
    return len(layers) <= 2 and all(d == 1 for layer in layers[1:] for _, d in layer.parts)


def bound_checks(report: DecompositionReport) -> dict[str, bool | None]:
    f = report.polynomial
    pol = report.pol.value
    n, d = f.nvars - 1, f.degree()
    specials = [a for _, a in report.special_alpha()]
    checks: dict[str, bool | None] = {"degree_bound": 0 <= pol <= (d - 1) ** n}
    checks["special_point_bound"] = None if report.cone.is_cone else pol >= max(specials, default=0)
    if _isolated_singularities(report.filtration) and not report.cone.is_cone:
        sing_alpha = report.special.alpha
        checks["sectional_milnor_bound"] = pol >= max(sing_alpha, default=0)
    else:
        checks["sectional_milnor_bound"] = None
    checks["cone_means_zero"] = (pol == 0) if report.cone.is_cone else None
    if report.beta is not None:
        beta = report.beta.beta
        chain = True
        for term in report.alpha_terms:
            generic = 0
            for cand, a in zip(report.special.candidates, report.special.alpha):
                if term.point.point is not None and cand.point == term.point.point:
                    generic = a
            chain = chain and pol >= term.value + beta >= term.value >= generic >= 0
        checks["local_chain"] = chain
        checks["identity"] = pol == report.alpha + beta
        checks["affine_beta_matches_polar_multiplicity"] = (
            None if report.polar_multiplicity is None else report.polar_multiplicity == report.beta.beta_aff
        )
    return checks


def analyse(inp: HypersurfaceInput, seed: int = 0, trials: int = 3,
            hyperplane: LinearForm | None = None) -> DecompositionReport:
    """pol, cone test and special points; plus the decomposition when a hyperplane is given."""
    f = inp.polynomial
    hyperplane = hyperplane if hyperplane is not None else inp.hyperplane
    filtration = singular_filtration(f)
    report = DecompositionReport(
        polynomial=f,
        pol=pol_degree(f, seed=seed, trials=trials),
        cone=cone_apex_set(f),
        special=special_points(f, seed=seed, filtration=filtration),
        filtration=filtration,
        reduced=inp.reduced,
        seed=seed,
        hyperplane=hyperplane,
    )
    if hyperplane is not None:
        report.verdict = check_admissible(f, hyperplane, filtration)
        if report.verdict.admissible:
            _decompose_into(report)
    report.checks = bound_checks(report)
    if report.status == FAILED:
        report.audit = _audit(report)
    return report


def decompose(inp: HypersurfaceInput, seed: int = 0, hyperplane: LinearForm | None = None) -> DecompositionReport:
    if hyperplane is None and inp.hyperplane is None:
        raise ValueError("a hyperplane is required")
    return analyse(inp, seed=seed, hyperplane=hyperplane)


def _decompose_into(report: DecompositionReport) -> None:
    f, form = report.polynomial, report.hyperplane
    points = report.verdict.report.points
    report.alpha_terms = [AlphaTerm(p, alpha_at_cluster(f, p, form)) for p in points]
    report.beta = beta_total(f, form, seed=report.seed)
    report.polar_multiplicity = singular_polar_degree(f, form, seed=report.seed)


def _audit(report: DecompositionReport) -> dict[str, list[str]]:
    """Groebner bases of every intermediate ideal, for a failed identity."""
    out: dict[str, list[str]] = {}
    for i, layer in enumerate(report.filtration.layers):
        for j, (ideal, _) in enumerate(layer.parts):
            out[f"layer{i}.{j}"] = [str(g) for g in ideal.groebner().basis]
    if report.verdict is not None and report.verdict.report is not None:
        for j, (idx, ideal, _) in enumerate(report.verdict.report.loci):
            out[f"non_transversality.{j}"] = [str(g) for g in ideal.groebner().basis]
    if report.beta is not None:
        out["critical_scheme"] = [str(g) for g in report.beta.affine.scheme.ideal.groebner().basis]
        for j, pt in enumerate(report.beta.scan.candidates):
            out[f"infinity_candidate.{j}"] = [str(g) for g in pt.cluster.ideal.groebner().basis]
    return out


# rendering --------------------------------------------------------------------------


def _t_singularity_json(report: DecompositionReport) -> list[dict]:
    chart = report.beta.chart
    out = []
    for s in report.beta.t_singularities():
        if s.point.rational:
            where = [rational_json(c) for c in projective_normalize(chart.to_original(s.point.point))]
            t = rational_json(s.t)
        else:
            where = {"ideal": [str(g) for g in s.point.cluster.ideal.groebner().basis]}
            t = str(s.point.t_minimal_polynomial())
        out.append({"point": where, "t": t, "lambda": s.lam, "degree": s.point.degree})
    return out


def to_json_dict(report: DecompositionReport) -> dict:
    beta = report.beta
    data: dict[str, Any] = {
        "polynomial": str(report.polynomial),
        "vars": list(report.polynomial.ring),
        "hyperplane": None if report.hyperplane is None else report.hyperplane.format(report.polynomial.ring),
        "pol": report.pol.value,
        "alpha": report.alpha,
        "alpha_points": [{"point": point_json(t.point), "alpha": t.value} for t in report.alpha_terms],
        "beta_aff": None if beta is None else beta.beta_aff,
        "beta_inf": None if beta is None else beta.beta_inf,
        "t_singularities": [] if beta is None else _t_singularity_json(report),
        "special_points": [point_json(p) for p in report.special.special],
        "special_alpha": [a for _, a in report.special_alpha()],
        "admissible": report.admissible,
        "verdict": None if report.verdict is None else report.verdict.status,
        "evidence": None if report.verdict is None else report.verdict.evidence,
        "cone": report.cone.is_cone,
        "checks": report.checks,
        "seeds": {"pol": report.pol.seeds, "special_points": report.special.seeds, "base": report.seed},
        "reduced": report.reduced,
        "status": report.status,
    }
    if report.audit:
        data["audit"] = report.audit
    return data


def emit_report(report: DecompositionReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(to_json_dict(report), indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    data = to_json_dict(report)
    lines = [f"V: {data['polynomial']} = 0 in P^{len(data['vars']) - 1} ({' '.join(data['vars'])})"]
    if data["reduced"]:
        lines.append("input had repeated factors; replaced by its squarefree part")
    lines.append(f"cone: {'yes' if data['cone'] else 'no'}")
    lines.append(f"pol = {data['pol']}")
    specials = ", ".join(f"{_fmt_point(p)} (alpha {a})" for p, a in zip(data["special_points"], data["special_alpha"]))
    lines.append(f"special points: {specials or 'none'}")
    if data["hyperplane"] is not None:
        lines.append(f"hyperplane {data['hyperplane']} = 0: {data['verdict']}")
        if not data["admissible"]:
            lines.append(f"  evidence: {data['evidence']}")
        else:
            for term in data["alpha_points"]:
                lines.append(f"  alpha at {_fmt_point(term['point'])}: {term['alpha']}")
            for s in data["t_singularities"]:
                lines.append(f"  t-singularity at {_fmt_point(s['point'])}, t = {s['t']}: lambda {s['lambda']}")
            beta = data["beta_aff"] + data["beta_inf"]
            lines.append(f"  beta = {data['beta_aff']} (affine) + {data['beta_inf']} (infinity) = {beta}")
            lines.append(f"  {data['pol']} = {data['alpha']} + {beta}")
    for name, value in data["checks"].items():
        if value is not None:
            lines.append(f"check {name}: {'ok' if value else 'VIOLATED'}")
    lines.append(f"status: {data['status']}")
    return "\n".join(lines) + "\n"


def _fmt_point(p) -> str:
    if isinstance(p, list):
        return "[" + ";".join(str(c) for c in p) + "]"
    return "{" + ", ".join(p["ideal"]) + "}"
