"""
Servicio de school choice: el pipeline de dos pasos (matching constrained efficient,
luego reasignación ETE) y las operaciones de auditoría, comparación y muestreo.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from django.conf import settings

from .audit import AuditReport, full_audit
from .exceptions import AuditInconsistency, MalformedInstance, SupportTooLarge
from .lottery import (
    Dominance,
    Lottery,
    RandomMatching,
    compare_all,
    degenerate,
    ete_reassignment_marginals,
    ete_reassignment_size,
    ete_reassignment_support,
    marginals,
    ordinally_dominates,
    sample_ete_realization,
)
from .models import GroupPartition, Matching, Problem
from .serializers import Instance
from .stable_matching import TieBreakRule, constrained_efficient_matching

logger = logging.getLogger(__name__)

TIE_BREAK_CHOICES = ('auto', 'input-order', 'declared', 'seed N')


@dataclass(frozen=True)
class SolveResult:
    matching: Matching
    tie_break: TieBreakRule
    groups: GroupPartition
    support_size: int
    # None cuando L supera el límite: solo se entregan marginales
    lottery: Optional[Lottery]
    marginals: RandomMatching


@dataclass(frozen=True)
class ComparisonResult:
    # veredicto por estudiante de B frente a A (compare_student con rm1 = A, rm2 = B)
    verdicts: Tuple[Dominance, ...]
    a_dominates_b: bool
    b_dominates_a: bool


class SchoolChoiceService:
    """Servicio que orquesta stable_matching, lottery y audit sobre una instancia cargada"""

    def __init__(self, support_limit: Optional[int] = None):
        self.support_limit = support_limit or settings.ETE_SUPPORT_LIMIT

    def resolve_tie_break(self, instance: Instance, choice: str = 'auto') -> TieBreakRule:
        """auto usa el orden declarado en el archivo si existe, si no el orden de entrada"""
        problem = instance.problem
        if choice == 'auto':
            choice = 'declared' if instance.tie_break is not None else 'input-order'

        if choice == 'input-order':
            return TieBreakRule.input_order(problem)
        if choice == 'declared':
            if instance.tie_break is None:
                raise MalformedInstance("Instance declares no tie_break order", entity='tie_break')
            return TieBreakRule.from_student_order(problem, instance.tie_break)
        if choice.startswith('seed'):
            try:
                seed = int(choice[len('seed'):].lstrip(': '))
            except ValueError:
                raise ValueError(f"Invalid seed in tie-break '{choice}'")
            return TieBreakRule.seeded(problem, seed)
        raise ValueError(f"Unknown tie-break '{choice}', expected one of {', '.join(TIE_BREAK_CHOICES)}")

    def solve(self, instance: Instance, tie_break: str = 'auto') -> SolveResult:
        problem, groups = instance.problem, instance.groups
        rule = self.resolve_tie_break(instance, tie_break)
        logger.info(f"Solving instance with {problem.n_students} students, {problem.n_schools} schools")

        # Paso 1: matching constrained efficient
        mu_star = constrained_efficient_matching(problem, rule)
        lambda_star = degenerate(mu_star)

        # Paso 2: reasignación ETE de λ*
        averaged = ete_reassignment_marginals(groups, marginals(problem, lambda_star))
        size = ete_reassignment_size(groups)
        try:
            lottery = ete_reassignment_support(groups, lambda_star, limit=self.support_limit)
        except SupportTooLarge as e:
            logger.warning(f"{e}; continuing with marginals only")
            lottery = None

        if lottery is not None and marginals(problem, lottery) != averaged:
            raise AuditInconsistency("Support and marginal forms of the ETE reassignment disagree")

        logger.info(f"Pipeline finished: L={size}, support={'n/a' if lottery is None else len(lottery.support)}")
        return SolveResult(mu_star, rule, groups, size, lottery, averaged)

    def audit(self, instance: Instance, lottery: Lottery) -> AuditReport:
        return full_audit(instance.problem, instance.groups, lottery)

    def compare(self, problem: Problem, lottery_a: Lottery, lottery_b: Lottery) -> ComparisonResult:
        verdicts = compare_all(problem, marginals(problem, lottery_a), marginals(problem, lottery_b))
        result = ComparisonResult(
            verdicts=verdicts,
            a_dominates_b=ordinally_dominates(problem, lottery_a, lottery_b),
            b_dominates_a=ordinally_dominates(problem, lottery_b, lottery_a),
        )
        logger.info(f"Comparison: A>B={result.a_dominates_b} B>A={result.b_dominates_a}")
        return result

    def sample(self, instance: Instance, lottery: Lottery, seed: int, count: int) -> List[Matching]:
        """count realizaciones de la reasignación ETE de lottery, deterministas dada la semilla"""
        if count <= 0:
            raise ValueError(f"count must be positive, got {count}")
        rng = np.random.default_rng(seed)
        draws = [sample_ete_realization(instance.groups, lottery, rng) for _ in range(count)]
        logger.info(f"Sampled {count} matchings with seed {seed}")
        return draws
