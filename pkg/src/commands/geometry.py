"""Commands about the weight matrix itself: conditions, admissibility, topology."""

from __future__ import annotations

import asyncio
import logging
import random
from typing import Any, Dict, List, Optional

from ..action import WeightMatrix, normalize
from ..config import Config
from ..convex import BudgetExceededError, check_admissible, check_mu_relint, check_stiemke, condition_report
from ..report import (
    Report,
    admissibility_to_json,
    conditions_to_json,
    link_to_json,
    normalization_to_json,
    strata_to_json,
    verdict_to_json,
)
from ..topology import (
    OddGon,
    UnsupportedRankError,
    classify,
    cross_polytope_strata,
    link_of_oddgon,
    oddgon_reduce,
)
from ..utils.svg import emit_svg

logger = logging.getLogger(__name__)

SELFTEST_MAX_ELL = 3
SELFTEST_MAX_N = 6
SELFTEST_MAX_ENTRY = 4


class GeometryCommands:
    """normalize / check / admissible / classify / diagram / strata / selftest."""

    def __init__(self, config: Config) -> None:
        self.config = config

    @property
    def weights(self) -> WeightMatrix:
        assert self.config.job is not None
        return self.config.job.weights

    def _report(self, result: Dict[str, Any]) -> Report:
        job = self.config.job
        return Report(self.config.command, result, job.echo() if job else {})

    async def normalize(self) -> Report:
        norm = await asyncio.to_thread(normalize, self.weights)
        return self._report(normalization_to_json(norm))

    async def check(self) -> Report:
        weights = self.weights
        norm, conditions, stiemke = await asyncio.gather(
            asyncio.to_thread(normalize, weights),
            asyncio.to_thread(condition_report, weights),
            asyncio.to_thread(check_stiemke, weights),
        )
        result: Dict[str, Any] = {
            "effective": norm.was_effective,
            "rank": norm.effective.ell,
            "conditions": conditions_to_json(conditions),
            "stiemke": verdict_to_json(stiemke),
        }
        verdicts = [conditions.sign_change, conditions.image_subspace, conditions.zero_relint, stiemke]
        evidence = [e for verdict in verdicts for e in verdict.evidence]
        try:
            admissibility = await asyncio.to_thread(check_admissible, weights, self.config.budget)
            result["admissibility"] = admissibility_to_json(admissibility)
            evidence.extend(admissibility.relint.evidence)
            evidence.extend(admissibility.evidence)
        except BudgetExceededError as exc:
            result["admissibility"] = {"refused": str(exc)}
        mu = self.config.job.mu if self.config.job else None
        if mu is not None:
            mu_relint = await asyncio.to_thread(check_mu_relint, weights, mu)
            result["muRelint"] = verdict_to_json(mu_relint)
            evidence.extend(mu_relint.evidence)

        result["certificatesValid"] = all(e.is_valid() for e in evidence)
        logger.info(
            "Conditions checked",
            extra={"agree": conditions.agree, "holds": conditions.zero_relint.holds},
        )
        return self._report(result)

    async def admissible(self) -> Report:
        report = await asyncio.to_thread(check_admissible, self.weights, self.config.budget)
        return self._report(admissibility_to_json(report))

    async def classify(self) -> Report:
        weights = self.weights
        if weights.ell > 2:
            raise UnsupportedRankError(f"分類は ell <= 2 のみ対応しています（ell={weights.ell}）。")
        gon: Optional[OddGon] = None
        if weights.ell == 1:
            link = await asyncio.to_thread(classify, weights, self.config.budget)
        else:
            gon = await asyncio.to_thread(oddgon_reduce, weights, self.config.budget)
            link = link_of_oddgon(gon)
        return self._report(link_to_json(link, gon))

    async def diagram(self) -> Report:
        assert self.config.out is not None
        path = await asyncio.to_thread(emit_svg, self.weights, self.config.out)
        return self._report({"svg": str(path)})

    async def strata(self) -> Report:
        poset = cross_polytope_strata(self.config.ell)
        return Report(self.config.command, strata_to_json(poset), {"ell": self.config.ell})

    async def selftest(self) -> Report:
        """Seeded agreement run of the three equivalent conditions and their certificates."""

        rng = random.Random(self.config.seed)
        samples: List[WeightMatrix] = []
        while len(samples) < self.config.samples:
            ell = rng.randint(1, SELFTEST_MAX_ELL)
            n = rng.randint(1, SELFTEST_MAX_N)
            rows = [
                [rng.randint(-SELFTEST_MAX_ENTRY, SELFTEST_MAX_ENTRY) for _ in range(n)]
                for _ in range(ell)
            ]
            weights = WeightMatrix.from_rows(rows)
            if not weights.is_zero():
                samples.append(weights)

        disagreements: List[List[List[int]]] = []
        stiemke_mismatches: List[List[List[int]]] = []
        invalid_certificates = 0
        for weights in samples:
            conditions, stiemke = await asyncio.gather(
                asyncio.to_thread(condition_report, weights),
                asyncio.to_thread(check_stiemke, weights),
            )
            if not conditions.agree:
                disagreements.append(weights.tolist())
            if stiemke.holds != conditions.sign_change.holds:
                stiemke_mismatches.append(weights.tolist())
            for verdict in (conditions.sign_change, conditions.image_subspace, conditions.zero_relint, stiemke):
                invalid_certificates += sum(1 for e in verdict.evidence if not e.is_valid())

        result = {
            "seed": self.config.seed,
            "samples": len(samples),
            "disagreements": disagreements,
            "stiemkeMismatches": stiemke_mismatches,
            "invalidCertificates": invalid_certificates,
            "passed": not disagreements and not stiemke_mismatches and invalid_certificates == 0,
        }
        logger.info("Selftest finished", extra={"passed": result["passed"], "samples": len(samples)})
        return Report(
            self.config.command,
            result,
            {"seed": self.config.seed, "samples": self.config.samples},
        )
