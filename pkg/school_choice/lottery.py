"""
Loterías sobre matchings, random matchings, dominancia estocástica y reasignación ETE.

Todas las probabilidades son fractions.Fraction: los denominadores son productos de
factoriales y la comparación es exacta.
"""

import enum
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np
from django.conf import settings

from .exceptions import InvalidLottery, SupportTooLarge
from .models import GroupPartition, Matching, Problem

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class Lottery:
    """Distribución de probabilidad sobre matchings; solo guarda el soporte"""

    support: Tuple[Tuple[Matching, Fraction], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Matching, Fraction]]) -> 'Lottery':
        """Fusiona matchings duplicados sumando probabilidades y exige suma exacta 1"""
        weights: Dict[Matching, Fraction] = {}
        for matching, probability in pairs:
            probability = Fraction(probability)
            if probability < 0:
                raise InvalidLottery(f"Negative probability {probability}", entity=str(probability))
            if probability == 0:
                continue
            weights[matching] = weights.get(matching, ZERO) + probability
        if not weights:
            raise InvalidLottery("Lottery has an empty support", entity='probabilities')
        total = sum(weights.values(), ZERO)
        if total != ONE:
            raise InvalidLottery(f"Probabilities sum to {total}, not 1", entity='probabilities')
        return cls(tuple(weights.items()))

    @property
    def matchings(self) -> Tuple[Matching, ...]:
        return tuple(m for m, _ in self.support)

    def is_valid_for(self, problem: Problem) -> bool:
        return all(m.is_valid_for(problem) for m, _ in self.support)


@dataclass(frozen=True)
class RandomMatching:
    """Marginales Pr(c, c(i, λ)): rows[i][c]"""

    rows: Tuple[Tuple[Fraction, ...], ...]

    def is_row_stochastic(self) -> bool:
        return all(sum(row, ZERO) == ONE for row in self.rows)

    def expected_enrollment(self) -> Tuple[Fraction, ...]:
        """Σ_i Pr(c, i) por escuela"""
        return tuple(sum(column, ZERO) for column in zip(*self.rows))


@dataclass(frozen=True)
class UpperCDF:
    """F̄(c, i, λ): values[i][c], probabilidad de una escuela al menos tan buena como c"""

    values: Tuple[Tuple[Fraction, ...], ...]

    def along_preferences(self, problem: Problem, i: int) -> Tuple[Fraction, ...]:
        return tuple(self.values[i][c] for c in problem.preferences[i])


class Dominance(enum.Enum):
    """Clasificación de c(i, λ2) frente a c(i, λ1) por dominancia estocástica de primer orden"""

    EQUAL = 'equal'
    SECOND_STRICTLY_DOMINATES = 'rm2-strictly-dominates'
    FIRST_STRICTLY_DOMINATES = 'rm1-strictly-dominates'
    INCOMPARABLE = 'incomparable'

    @property
    def second_weakly_dominates(self) -> bool:
        return self in (Dominance.EQUAL, Dominance.SECOND_STRICTLY_DOMINATES)


@dataclass(frozen=True)
class EteViolation:
    """Primer par de iguales con filas marginales distintas"""

    group: int
    student: str
    other: str
    school: str


def degenerate(matching: Matching) -> Lottery:
    return Lottery(((matching, ONE),))


def marginals(problem: Problem, lottery: Lottery) -> RandomMatching:
    rows = [[ZERO] * problem.n_schools for _ in range(problem.n_students)]
    for matching, probability in lottery.support:
        for i, c in enumerate(matching.assignment):
            rows[i][c] += probability
    return RandomMatching(tuple(tuple(row) for row in rows))


def upper_cdf(problem: Problem, random_matching: RandomMatching) -> UpperCDF:
    values = []
    for i in range(problem.n_students):
        row = [ZERO] * problem.n_schools
        cumulative = ZERO
        for c in problem.preferences[i]:
            cumulative += random_matching.rows[i][c]
            row[c] = cumulative
        values.append(tuple(row))
    return UpperCDF(tuple(values))


def _compare_cdf(first: Tuple[Fraction, ...], second: Tuple[Fraction, ...]) -> Dominance:
    second_above = any(b > a for a, b in zip(first, second))
    first_above = any(a > b for a, b in zip(first, second))
    if second_above and first_above:
        return Dominance.INCOMPARABLE
    if second_above:
        return Dominance.SECOND_STRICTLY_DOMINATES
    if first_above:
        return Dominance.FIRST_STRICTLY_DOMINATES
    return Dominance.EQUAL


def compare_student(problem: Problem, i: int, rm1: RandomMatching, rm2: RandomMatching) -> Dominance:
    first = upper_cdf(problem, rm1).values[i]
    second = upper_cdf(problem, rm2).values[i]
    return _compare_cdf(first, second)


def compare_all(problem: Problem, rm1: RandomMatching, rm2: RandomMatching) -> Tuple[Dominance, ...]:
    """compare_student para todos los estudiantes, calculando F̄ una sola vez"""
    first, second = upper_cdf(problem, rm1), upper_cdf(problem, rm2)
    return tuple(_compare_cdf(a, b) for a, b in zip(first.values, second.values))


def ordinally_dominates(problem: Problem, lot2: Lottery, lot1: Lottery) -> bool:
    """λ2 domina ordinalmente a λ1: débil para todos, estricta para alguno"""
    verdicts = compare_all(problem, marginals(problem, lot1), marginals(problem, lot2))
    return (
        all(v.second_weakly_dominates for v in verdicts)
        and any(v is Dominance.SECOND_STRICTLY_DOMINATES for v in verdicts)
    )


def ete_reassignment_size(groups: GroupPartition) -> int:
    """L = |I_1|! × ⋯ × |I_N|!"""
    return math.prod(math.factorial(len(members)) for members in groups.groups)


def _within_group_permutations(groups: GroupPartition):
    """Todas las biyecciones π que solo permutan dentro de cada grupo, como listas π[i]"""
    per_group = [itertools.permutations(members) for members in groups.groups]
    n = len(groups.group_of)
    for images in itertools.product(*per_group):
        pi = [0] * n
        for members, image in zip(groups.groups, images):
            for i, j in zip(members, image):
                pi[i] = j
        yield pi


def ete_reassignment_support(
    groups: GroupPartition,
    lottery: Lottery,
    limit: Optional[int] = None,
) -> Lottery:
    """
    Reasignación ETE con soporte explícito: λ'_{μ'} = Σ_μ λ_μ · λ^μ_{μ'},
    con λ^μ uniforme sobre los L matchings derivados de μ
    """
    limit = limit or settings.ETE_SUPPORT_LIMIT
    size = ete_reassignment_size(groups)
    if size > limit:
        raise SupportTooLarge(size, limit)

    permutations = list(_within_group_permutations(groups))
    weights: Dict[Matching, Fraction] = {}
    for matching, probability in lottery.support:
        share = probability / size
        assignment = matching.assignment
        for pi in permutations:
            derived = Matching(tuple(assignment[pi[i]] for i in range(len(pi))))
            weights[derived] = weights.get(derived, ZERO) + share

    result = Lottery(tuple(weights.items()))
    logger.info(f"ETE reassignment: L={size}, support {len(lottery.support)} -> {len(result.support)}")
    return result


def ete_reassignment_marginals(groups: GroupPartition, random_matching: RandomMatching) -> RandomMatching:
    """Promedio de filas dentro de cada grupo de iguales"""
    rows = list(random_matching.rows)
    for members in groups.groups:
        averaged = tuple(
            sum((random_matching.rows[j][c] for j in members), ZERO) / len(members)
            for c in range(len(random_matching.rows[members[0]]))
        )
        for i in members:
            rows[i] = averaged
    return RandomMatching(tuple(rows))


def _uniform_below(rng: np.random.Generator, bound: int) -> int:
    """Entero uniforme en [0, bound), exacto también por encima de int64"""
    if bound <= 2 ** 62:
        return int(rng.integers(bound))
    bits = bound.bit_length()
    while True:
        candidate = int.from_bytes(rng.bytes((bits + 7) // 8), "big") >> (-bits % 8)
        if candidate < bound:
            return candidate


def sample_ete_realization(
    groups: GroupPartition,
    lottery: Lottery,
    seed: Union[int, np.random.Generator, None],
) -> Matching:
    """
    Realiza μ según λ y luego redistribuye los asientos de cada grupo con una
    permutación uniforme. La elección de μ es exacta: se sortea un entero bajo el
    denominador común.
    """
    rng = np.random.default_rng(seed)
    denominator = math.lcm(*(p.denominator for _, p in lottery.support))
    draw = _uniform_below(rng, denominator)
    cumulative = 0
    chosen = lottery.support[-1][0]
    for matching, probability in lottery.support:
        cumulative += probability.numerator * (denominator // probability.denominator)
        if draw < cumulative:
            chosen = matching
            break

    assignment = list(chosen.assignment)
    for members in groups.groups:
        if len(members) < 2:
            continue
        seats = [chosen.assignment[i] for i in members]
        for i, k in zip(members, rng.permutation(len(members))):
            assignment[i] = seats[int(k)]
    return Matching(tuple(assignment))


def ete_violation(problem: Problem, groups: GroupPartition, random_matching: RandomMatching) -> Optional[EteViolation]:
    for g, members in enumerate(groups.groups):
        leader = members[0]
        for i in members[1:]:
            for c in range(problem.n_schools):
                if random_matching.rows[i][c] != random_matching.rows[leader][c]:
                    return EteViolation(g, problem.students[leader], problem.students[i], problem.schools[c])
    return None


def satisfies_ete(groups: GroupPartition, random_matching: RandomMatching) -> bool:
    """Todas las filas marginales de cada grupo son idénticas"""
    return all(
        random_matching.rows[i] == random_matching.rows[members[0]]
        for members in groups.groups
        for i in members
    )
