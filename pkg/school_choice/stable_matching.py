"""
Matching estable constrained efficient: deferred acceptance sobre un desempate de las
prioridades y luego stable improvement cycles (Erdil–Ergin) hasta agotarlos.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from django.conf import settings

from .exceptions import ImprovementLimitExceeded, MatchingUnstable
from .models import Matching, Problem, has_justified_envy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TieBreakRule:
    """Orden estricto por escuela que extiende ≿_c"""

    # orders[c] = permutación de estudiantes, de mayor a menor prioridad desempatada
    orders: Tuple[Tuple[int, ...], ...]
    mode: str

    @classmethod
    def input_order(cls, problem: Problem) -> 'TieBreakRule':
        """Dentro de cada tier, el orden de entrada de los estudiantes"""
        return cls.from_student_order(problem, range(problem.n_students), mode='input-order')

    @classmethod
    def from_student_order(cls, problem: Problem, order: Sequence[int], mode: str = 'declared') -> 'TieBreakRule':
        """Desempate único: el mismo orden explícito en todas las escuelas"""
        position = {i: k for k, i in enumerate(order)}
        orders = []
        for school_tiers in problem.tiers:
            orders.append(tuple(i for tier in school_tiers for i in sorted(tier, key=position.__getitem__)))
        return cls(tuple(orders), mode)

    @classmethod
    def seeded(cls, problem: Problem, seed: int) -> 'TieBreakRule':
        """Desempate múltiple uniforme: permutación aleatoria independiente de cada tier en cada escuela"""
        rng = np.random.default_rng(seed)
        orders = []
        for school_tiers in problem.tiers:
            order = []
            for tier in school_tiers:
                order.extend(int(i) for i in rng.permutation(tier))
            orders.append(tuple(order))
        return cls(tuple(orders), f'seed:{seed}')

    def extends(self, problem: Problem) -> bool:
        """i ≻_c j implica que i va antes que j en orders[c]"""
        for c, order in enumerate(self.orders):
            if sorted(order) != list(range(problem.n_students)):
                return False
            levels = [problem.tier_of[c][i] for i in order]
            if levels != sorted(levels):
                return False
        return True


@dataclass(frozen=True)
class ImprovementCycle:
    """
    Movimientos (estudiante, escuela destino). Un ciclo intercambia asientos; un único
    salto hacia una escuela con vacante es la mejora degenerada de un matching con desperdicio.
    """

    hops: Tuple[Tuple[str, str], ...]

    def __len__(self):
        return len(self.hops)


def deferred_acceptance(problem: Problem, tie_break: TieBreakRule) -> Matching:
    """Deferred acceptance con propuestas de estudiantes sobre la instancia desempatada"""
    priority = [
        {i: position for position, i in enumerate(order)}
        for order in tie_break.orders
    ]
    next_choice = [0] * problem.n_students
    held: List[List[int]] = [[] for _ in range(problem.n_schools)]
    free = list(range(problem.n_students))
    rounds = 0

    while free:
        rounds += 1
        # Cada estudiante libre propone a su siguiente escuela, en orden de entrada
        for i in sorted(free):
            c = problem.preferences[i][next_choice[i]]
            next_choice[i] += 1
            held[c].append(i)
        free = []
        for c in range(problem.n_schools):
            if len(held[c]) > problem.quotas[c]:
                held[c].sort(key=priority[c].__getitem__)
                free.extend(held[c][problem.quotas[c]:])
                del held[c][problem.quotas[c]:]
        logger.debug(f"DA round {rounds}: {len(free)} students rejected")

    assignment = [0] * problem.n_students
    for c, students in enumerate(held):
        for i in students:
            assignment[i] = c
    logger.info(f"Deferred acceptance finished after {rounds} rounds ({tie_break.mode} tie-break)")
    return Matching(tuple(assignment))


def _maximal_desirers(problem: Problem, matching: Matching) -> List[List[int]]:
    """Por escuela, los estudiantes de tier máximo entre quienes la prefieren a su asignación"""
    assignment = matching.assignment
    result = []
    for c in range(problem.n_schools):
        desirers = [
            i for i in range(problem.n_students)
            if problem.rank[i][c] < problem.rank[i][assignment[i]]
        ]
        if desirers:
            best = min(problem.tier_of[c][i] for i in desirers)
            desirers = [i for i in desirers if problem.tier_of[c][i] == best]
        result.append(desirers)
    return result


def find_stable_improvement_cycle(problem: Problem, matching: Matching) -> Optional[ImprovementCycle]:
    """
    Busca un stable improvement cycle en un matching estable

    i apunta a j si i prefiere μ(j) a μ(i) y es de tier máximo entre quienes desean μ(j).
    Se explora por estudiante de menor índice y se devuelve el ciclo más corto (BFS).
    """
    witness = has_justified_envy(problem, matching)
    if witness is not None:
        raise MatchingUnstable(witness)

    assignment = matching.assignment
    maximal = _maximal_desirers(problem, matching)

    # Vacantes deseadas: mover al primer deseante maximal es ya una mejora estable
    occupancy = matching.occupancy(problem.n_schools)
    for c in range(problem.n_schools):
        if occupancy[c] < problem.quotas[c] and maximal[c]:
            i = maximal[c][0]
            logger.debug(f"Vacancy at {problem.schools[c]} desired by {problem.students[i]}")
            return ImprovementCycle(((problem.students[i], problem.schools[c]),))

    graph = nx.DiGraph()
    graph.add_nodes_from(range(problem.n_students))
    for c, desirers in enumerate(maximal):
        holders = matching.students_at(c)
        for i in desirers:
            for j in holders:
                graph.add_edge(i, j)

    best: Optional[List[int]] = None
    for start in range(problem.n_students):
        for successor in sorted(graph.successors(start)):
            if not nx.has_path(graph, successor, start):
                continue
            path = nx.shortest_path(graph, successor, start)
            cycle = [start] + path[:-1]
            if best is None or len(cycle) < len(best):
                best = cycle
        if best is not None:
            break

    if best is None:
        return None
    hops = tuple(
        (problem.students[i], problem.schools[assignment[best[(k + 1) % len(best)]]])
        for k, i in enumerate(best)
    )
    return ImprovementCycle(hops)


def apply_improvement(problem: Problem, matching: Matching, cycle: ImprovementCycle) -> Matching:
    """Cada estudiante del ciclo pasa a su escuela destino"""
    assignment = list(matching.assignment)
    for student, school in cycle.hops:
        assignment[problem.student_index[student]] = problem.school_index[school]
    return Matching(tuple(assignment))


def constrained_efficient_matching(
    problem: Problem,
    tie_break: TieBreakRule,
    max_iterations: Optional[int] = None,
) -> Matching:
    """
    DA con desempate y luego SIC hasta que no quede ningún ciclo.

    Cada paso mejora estrictamente el rango de algún estudiante, así que hay a lo
    sumo |I|·(|C|-1) pasos.
    """
    max_iterations = max_iterations or settings.SIC_MAX_ITERATIONS or problem.n_students * problem.n_schools
    matching = deferred_acceptance(problem, tie_break)

    for iteration in range(1, max_iterations + 1):
        cycle = find_stable_improvement_cycle(problem, matching)
        if cycle is None:
            logger.info(f"Constrained efficient matching reached after {iteration - 1} improvement cycles")
            return matching
        logger.info(f"Applying improvement cycle {iteration}: {list(cycle.hops)}")
        matching = apply_improvement(problem, matching, cycle)

    logger.error(f"No fixed point after {max_iterations} improvement cycles")
    raise ImprovementLimitExceeded(max_iterations)
