"""Commands on the polynomial side: Koszul homology and the reduced star product."""

from __future__ import annotations

import asyncio
import logging
from typing import Any, Dict, List

from ..action import is_invariant, list_invariant_monomials, moment_map, monomial_weight, normalize
from ..algebra.koszul import build_splitting, graded_koszul_homology
from ..algebra.ring import monomial, split_monomial
from ..config import Config
from ..errors import ValidationError
from ..quantize import NonInvariantError, star0_table
from ..report import Report, homology_to_json, series_to_json
from ..utils.poly_parser import parse_poly, render_poly

logger = logging.getLogger(__name__)


class AlgebraCommands:
    """koszul / quantize."""

    def __init__(self, config: Config) -> None:
        assert config.job is not None
        self.config = config
        self.job = config.job

    def _report(self, result: Dict[str, Any]) -> Report:
        return Report(self.config.command, result, self.job.echo())

    async def koszul(self) -> Report:
        J = moment_map(self.job.weights, self.job.mu)
        norm, table = await asyncio.gather(
            asyncio.to_thread(normalize, self.job.weights),
            asyncio.to_thread(graded_koszul_homology, J, self.job.maxdeg),
        )
        result = homology_to_json(table)
        result["effective"] = norm.was_effective
        logger.info("Koszul homology computed", extra={"acyclic": table.acyclic})
        return self._report(result)

    async def quantize(self) -> Report:
        weights = self.job.weights
        split = await asyncio.to_thread(build_splitting, weights, self.job.mu)
        ring = split.ring
        result: Dict[str, Any] = {"order": self.job.order}

        sources: List[str] = list(self.job.invariants)
        if self.config.enumerate is not None:
            found = list_invariant_monomials(weights, self.config.enumerate)
            rendered = [render_poly(monomial(ring, a, b)) for a, b in found]
            result["invariantMonomials"] = rendered
            if not sources:
                sources = rendered
        if not sources:
            raise ValidationError("不変多項式を --invariant か --enumerate で指定してください。")

        invariants = []
        echoes = []
        for text in sources:
            f = parse_poly(text, ring)
            if not is_invariant(weights, f):
                weight = next(
                    w
                    for w in (monomial_weight(weights, *split_monomial(m)) for m in f.keys())
                    if any(w)
                )
                raise NonInvariantError(f"{text} は不変ではありません（重み {weight}）。", weight)
            nf = split.res(f)
            echoes.append({"input": text, "normalForm": render_poly(nf)})
            invariants.append(nf)
        result["invariants"] = echoes

        table = await asyncio.to_thread(star0_table, invariants, split, self.job.order)
        result["table"] = [
            {"left": i + 1, "right": j + 1, "product": series_to_json(product)}
            for (i, j), product in sorted(table.items())
        ]
        return self._report(result)
