"""
Implementaciones de referencia por fuerza bruta para verificar a escala de escritorio,
y el generador de instancias y loterías aleatorias de las pruebas de propiedades.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np
from django.conf import settings

from .exceptions import BudgetExceeded
from .lottery import Lottery
from .models import Matching, Problem, has_justified_envy, pareto_dominates
from .stable_matching import TieBreakRule, deferred_acceptance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnumerationBudget:
    max_students: int = 6
    max_total_assignments: int = 10_000_000

    def __post_init__(self):
        if self.max_students <= 0 or self.max_total_assignments <= 0:
            raise ValueError("Enumeration budget limits must be positive")

    @classmethod
    def from_settings(cls) -> 'EnumerationBudget':
        return cls(settings.ORACLE_MAX_STUDENTS, settings.ORACLE_MAX_ASSIGNMENTS)


def enumerate_matchings(problem: Problem, budget: Optional[EnumerationBudget] = None) -> List[Matching]:
    """Todas las asignaciones totales que respetan cupos, cada una exactamente una vez"""
    budget = budget or EnumerationBudget.from_settings()
    if problem.n_students > budget.max_students:
        raise BudgetExceeded(
            f"{problem.n_students} students exceed the enumeration budget of {budget.max_students}"
        )

    result: List[Matching] = []
    remaining = list(problem.quotas)
    assignment = [0] * problem.n_students

    def place(i: int):
        if i == problem.n_students:
            if len(result) >= budget.max_total_assignments:
                raise BudgetExceeded(
                    f"More than {budget.max_total_assignments} matchings; refusing to truncate"
                )
            result.append(Matching(tuple(assignment)))
            return
        for c in range(problem.n_schools):
            if remaining[c] == 0:
                continue
            remaining[c] -= 1
            assignment[i] = c
            place(i + 1)
            remaining[c] += 1

    place(0)
    logger.debug(f"Enumerated {len(result)} matchings")
    return result


def enumerate_stable(problem: Problem, budget: Optional[EnumerationBudget] = None) -> List[Matching]:
    return [m for m in enumerate_matchings(problem, budget) if has_justified_envy(problem, m) is None]


def oracle_constrained_efficient(
    problem: Problem,
    matching: Matching,
    budget: Optional[EnumerationBudget] = None,
) -> bool:
    if has_justified_envy(problem, matching) is not None:
        return False
    return not any(
        pareto_dominates(problem, other, matching) for other in enumerate_stable(problem, budget)
    )


def oracle_ex_ante_stable(problem: Problem, lottery: Lottery) -> bool:
    """La definición literal: cuantifica sobre estudiantes, escuelas y pares de matchings del soporte"""
    support = lottery.matchings
    for i in range(problem.n_students):
        for j in range(problem.n_students):
            for s in range(problem.n_schools):
                if not problem.strictly_higher_priority(s, i, j):
                    continue
                for mu in support:
                    if not problem.prefers(i, s, mu.assignment[i]):
                        continue
                    for mu_prime in support:
                        if mu_prime.assignment[j] == s:
                            return False
    return True


def random_problem(seed: int, n_students: int, n_schools: int, tie_density: float) -> Problem:
    """
    Instancia aleatoria determinista dada la semilla.

    tie_density es la probabilidad de que dos estudiantes consecutivos de la lista de
    prioridad queden en el mismo tier: 0 = prioridades estrictas, 1 = un solo tier.
    """
    if not 0 <= tie_density <= 1:
        raise ValueError(f"tie_density must lie in [0, 1], got {tie_density}")
    if n_students <= 0 or n_schools <= 0:
        raise ValueError("Instances need at least one student and one school")

    rng = np.random.default_rng(seed)
    preferences = tuple(tuple(int(c) for c in rng.permutation(n_schools)) for _ in range(n_students))

    tiers = []
    for _ in range(n_schools):
        order = [int(i) for i in rng.permutation(n_students)]
        school_tiers = [[order[0]]]
        for i in order[1:]:
            if rng.random() < tie_density:
                school_tiers[-1].append(i)
            else:
                school_tiers.append([i])
        tiers.append(tuple(tuple(sorted(tier)) for tier in school_tiers))

    quotas = [int(q) for q in rng.integers(1, n_students + 1, size=n_schools)]
    while sum(quotas) < n_students:
        quotas[int(rng.integers(n_schools))] += 1

    return Problem(
        students=tuple(f's{k}' for k in range(n_students)),
        schools=tuple(f'c{k}' for k in range(n_schools)),
        quotas=tuple(quotas),
        preferences=preferences,
        tiers=tuple(tiers),
    )


def _random_weights(rng: np.random.Generator, n: int) -> List[Fraction]:
    raw = [int(w) for w in rng.integers(1, 10, size=n)]
    total = sum(raw)
    return [Fraction(w, total) for w in raw]


def random_matching(problem: Problem, rng: np.random.Generator) -> Matching:
    """Matching uniforme sobre los asientos: se barajan los asientos y se reparten"""
    seats = [c for c, q in enumerate(problem.quotas) for _ in range(q)]
    order = rng.permutation(len(seats))
    return Matching(tuple(seats[int(k)] for k in order[:problem.n_students]))


def random_lottery(problem: Problem, seed, max_support: int = 4) -> Lottery:
    """Lotería con hasta max_support matchings aleatorios y pesos racionales positivos"""
    rng = np.random.default_rng(seed)
    size = int(rng.integers(1, max_support + 1))
    matchings = [random_matching(problem, rng) for _ in range(size)]
    return Lottery.from_pairs(zip(matchings, _random_weights(rng, size)))


def random_stable_lottery(problem: Problem, seed, max_support: int = 4) -> Lottery:
    """Lotería sobre matchings estables obtenidos con DA y desempates aleatorios"""
    rng = np.random.default_rng(seed)
    size = int(rng.integers(1, max_support + 1))
    matchings = [
        deferred_acceptance(problem, TieBreakRule.seeded(problem, int(rng.integers(2 ** 31))))
        for _ in range(size)
    ]
    return Lottery.from_pairs(zip(matchings, _random_weights(rng, size)))
