"""Job documents in, JSON reports out.

Rationals are always serialized as ``"p"`` or ``"p/q"`` strings so reports
can be re-checked exactly by third parties.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .action import Normalization, WeightMatrix
from .algebra.koszul import HomologyTable
from .algebra.ring import split_monomial
from .convex import AdmissibilityReport, ConditionReport, Evidence, Verdict
from .errors import ValidationError
from .exact import (
    CertificateKind,
    FarkasCertificate,
    LPInstance,
    LPSolution,
    format_rational,
    to_rational,
)
from .quantize import DEFAULT_ORDER, NuSeries
from .topology import LinkType, OddGon, StrataPoset
from .utils.poly_parser import render_poly

DEFAULT_MAXDEG = 6
_JOB_KEYS = {"weights", "mu", "order", "maxdeg", "invariants"}


@dataclass(frozen=True)
class JobSpec:
    weights: WeightMatrix
    mu: Optional[Tuple[Fraction, ...]] = None
    order: int = DEFAULT_ORDER
    maxdeg: int = DEFAULT_MAXDEG
    invariants: Tuple[str, ...] = ()

    @classmethod
    def from_json(cls, document: Any) -> "JobSpec":
        if not isinstance(document, Mapping):
            raise ValidationError("ジョブ定義は JSON オブジェクトで指定してください。")
        unknown = sorted(set(document) - _JOB_KEYS)
        if unknown:
            raise ValidationError(f"未知のフィールドがあります: {', '.join(unknown)}")
        if "weights" not in document:
            raise ValidationError("weights フィールドは必須です。")
        weights = WeightMatrix.from_rows(_int_matrix(document["weights"]))

        mu = None
        if document.get("mu") is not None:
            raw = document["mu"]
            if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
                raise ValidationError('mu は "p/q" 形式の文字列の配列で指定してください。')
            mu = tuple(to_rational(x) for x in raw)
            if len(mu) != weights.ell:
                raise ValidationError(f"mu の長さ {len(mu)} が ell={weights.ell} と一致しません。")

        order = _non_negative_int(document, "order", DEFAULT_ORDER)
        maxdeg = _non_negative_int(document, "maxdeg", DEFAULT_MAXDEG)

        invariants = document.get("invariants") or []
        if not isinstance(invariants, list) or not all(isinstance(x, str) for x in invariants):
            raise ValidationError("invariants は文字列の配列で指定してください。")
        return cls(weights, mu, order, maxdeg, tuple(invariants))

    def echo(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"weights": self.weights.tolist()}
        if self.mu is not None:
            data["mu"] = rationals(self.mu)
        data["order"] = self.order
        data["maxdeg"] = self.maxdeg
        if self.invariants:
            data["invariants"] = list(self.invariants)
        return data


def _int_matrix(raw: Any) -> List[List[int]]:
    if (
        not isinstance(raw, list)
        or not raw
        or not all(isinstance(row, list) for row in raw)
        or not all(isinstance(x, int) and not isinstance(x, bool) for row in raw for x in row)
    ):
        raise ValidationError("weights は整数の二次元配列で指定してください。")
    return raw


def _non_negative_int(document: Mapping[str, Any], key: str, default: int) -> int:
    value = document.get(key, default)
    if value is None:
        return default
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValidationError(f"{key} は 0 以上の整数で指定してください。")
    return value


def rationals(values: Optional[Sequence[Fraction]]) -> Optional[List[str]]:
    if values is None:
        return None
    return [format_rational(Fraction(v)) for v in values]


def lp_to_json(lp: LPInstance) -> Dict[str, Any]:
    return {
        "matrix": [rationals(row) for row in lp.matrix.rows],
        "numVars": lp.num_vars,
        "relations": [r.value for r in lp.relations],
        "rhs": rationals(lp.rhs),
        "objective": rationals(lp.objective),
        "lowerBounds": None
        if lp.lower_bounds is None
        else [None if b is None else format_rational(b) for b in lp.lower_bounds],
    }


def lp_from_json(data: Mapping[str, Any]) -> LPInstance:
    try:
        return LPInstance.build(
            data["matrix"],
            data["relations"],
            data["rhs"],
            num_vars=data["numVars"],
            objective=data.get("objective"),
            lower_bounds=data.get("lowerBounds"),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"LP の JSON 表現が不正です: {exc}") from exc


def certificate_to_json(cert: FarkasCertificate) -> Dict[str, Any]:
    return {
        "kind": cert.kind.value,
        "vector": rationals(cert.vector),
        "dual": rationals(cert.dual),
        "ray": rationals(cert.ray),
    }


def certificate_from_json(data: Mapping[str, Any]) -> FarkasCertificate:
    try:
        kind = CertificateKind(data["kind"])
        vector = tuple(to_rational(x) for x in data["vector"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"証明書の JSON 表現が不正です: {exc}") from exc

    def optional(key: str) -> Optional[Tuple[Fraction, ...]]:
        raw = data.get(key)
        return None if raw is None else tuple(to_rational(x) for x in raw)

    return FarkasCertificate(kind, vector, dual=optional("dual"), ray=optional("ray"))


def solution_to_json(solution: LPSolution) -> Dict[str, Any]:
    return {
        "status": solution.status.value,
        "value": None if solution.value is None else format_rational(solution.value),
        "certificate": certificate_to_json(solution.certificate),
    }


def evidence_to_json(evidence: Evidence) -> Dict[str, Any]:
    return {
        "label": evidence.label,
        "lp": lp_to_json(evidence.lp),
        "solution": solution_to_json(evidence.solution),
    }


def verdict_to_json(verdict: Verdict) -> Dict[str, Any]:
    return {
        "holds": verdict.holds,
        "optimum": None if verdict.optimum is None else format_rational(verdict.optimum),
        "witness": rationals(verdict.witness),
        "note": verdict.note,
        "evidence": [evidence_to_json(e) for e in verdict.evidence],
    }


def conditions_to_json(report: ConditionReport) -> Dict[str, Any]:
    return {
        "signChange": verdict_to_json(report.sign_change),
        "imageSubspace": verdict_to_json(report.image_subspace),
        "zeroRelint": verdict_to_json(report.zero_relint),
        "agree": report.agree,
    }


def admissibility_to_json(report: AdmissibilityReport) -> Dict[str, Any]:
    return {
        "admissible": report.admissible,
        "violatingSubset": None
        if report.violating_subset is None
        else [j + 1 for j in report.violating_subset],
        "relint": verdict_to_json(report.relint),
        "subsetsChecked": report.subsets_checked,
        "evidence": [evidence_to_json(e) for e in report.evidence],
    }


def normalization_to_json(norm: Normalization) -> Dict[str, Any]:
    return {
        "effective": norm.was_effective,
        "rank": norm.effective.ell,
        "weights": norm.effective.tolist(),
        "basisChange": [list(row) for row in norm.basis_change],
    }


def link_to_json(link: LinkType, gon: Optional[OddGon] = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "kind": link.kind.value,
        "factors": [list(f) for f in link.factors],
        "text": link.text,
    }
    if gon is not None:
        data["oddgon"] = {
            "k": gon.k,
            "multiplicities": list(gon.multiplicities),
            "directions": [[list(d) for d in run] for run in gon.directions],
        }
    return data


def homology_to_json(table: HomologyTable) -> Dict[str, Any]:
    return {
        "maxdeg": table.maxdeg,
        "acyclic": table.acyclic,
        "dims": [
            {"i": i, "degree": d, "dim": dim} for (i, d), dim in sorted(table.dims.items())
        ],
        "witnesses": [
            {
                "i": i,
                "degree": d,
                "chain": {
                    ",".join(str(k + 1) for k in subset): render_poly(coeff)
                    for subset, coeff in chain
                },
            }
            for (i, d), chain in sorted(table.witnesses.items())
        ],
    }


def series_to_json(series: NuSeries) -> List[str]:
    return [render_poly(c) for c in series]


def monomial_to_json(monom: Tuple[int, ...]) -> Dict[str, List[int]]:
    alpha, beta = split_monomial(monom)
    return {"alpha": list(alpha), "beta": list(beta)}


def strata_to_json(poset: StrataPoset) -> Dict[str, Any]:
    return {
        "ell": poset.ell,
        "faces": [
            {
                "vertices": list(face),
                "rank": poset.rank(face),
                "annotation": poset.annotations.get(face),
            }
            for face in poset.faces
        ],
        "covers": [[list(a), list(b)] for a, b in poset.covers()],
        "note": poset.note,
    }


@dataclass(frozen=True)
class Report:
    command: str
    result: Dict[str, Any]
    input: Dict[str, Any] = field(default_factory=dict)
    version: str = __version__

    def to_json(self) -> str:
        document = {
            "tool": "torusq",
            "version": self.version,
            "command": self.command,
            "input": self.input,
            "result": self.result,
        }
        return json.dumps(document, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        try:
            document = json.loads(text)
            return cls(
                command=document["command"],
                result=document["result"],
                input=document["input"],
                version=document["version"],
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValidationError(f"レポートを読み込めません: {exc}") from exc
