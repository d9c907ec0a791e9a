"""
Certificados de estabilidad y optimalidad de loterías: estabilidad ex ante y ex post,
y detección de ex ante stable improvement cycles sobre el dígrafo de pares.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Tuple

import networkx as nx

from .exceptions import AuditInconsistency
from .lottery import (
    EteViolation,
    Lottery,
    RandomMatching,
    ZERO,
    ete_violation,
    marginals,
)
from .models import EnvyWitness, GroupPartition, Problem, has_justified_envy

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ExAnteEnvy:
    """student prefiere school a alguna asignación posible y rival, de menor prioridad, puede recibirla"""

    student: str
    rival: str
    school: str
    # índices en el soporte: μ con school P_i μ(i), μ′ con μ′(rival) = school
    envious_matching: int
    envied_matching: int


@dataclass(frozen=True)
class ExPostEnvy:
    matching_index: int
    witness: EnvyWitness


@dataclass(frozen=True)
class PairDigraph:
    """Nodos (i, c) con Pr(c, i) > 0; aristas ⋗ (pointed) y ▶ (arrow)"""

    nodes: Tuple[Pair, ...]
    pointed_edges: FrozenSet[Tuple[Pair, Pair]]
    arrow_edges: FrozenSet[Tuple[Pair, Pair]]

    def arrow_graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(self.arrow_edges)
        return graph


@dataclass(frozen=True)
class AuditReport:
    ex_ante_stable: bool
    ex_ante_witness: Optional[ExAnteEnvy]
    ex_post_stable: bool
    ex_post_witness: Optional[ExPostEnvy]
    ete_satisfied: bool
    ete_witness: Optional[EteViolation]
    # easic_checked es False si la lotería no es ex ante estable: el certificado no aplica
    easic_checked: bool
    easic: Optional[Tuple[Tuple[str, str], ...]]

    @property
    def passed(self) -> bool:
        return self.ex_ante_stable and self.ete_satisfied and self.easic is None


def _ex_ante_triples(problem: Problem, rm: RandomMatching):
    """(i, j, s) con Pr(s, j) > 0, i ≻_s j y Pr(i recibe algo peor que s) > 0, en orden lexicográfico"""
    rows = rm.rows
    for i in range(problem.n_students):
        rank_i = problem.rank[i]
        for j in range(problem.n_students):
            for s in range(problem.n_schools):
                if rows[j][s] == ZERO or not problem.strictly_higher_priority(s, i, j):
                    continue
                if any(rows[i][c] > ZERO and rank_i[s] < rank_i[c] for c in range(problem.n_schools)):
                    yield i, j, s


def is_ex_ante_stable(problem: Problem, lottery: Lottery) -> Optional[ExAnteEnvy]:
    """
    Primer testigo de envidia justificada ex ante, o None si la lotería es ex ante estable.

    La búsqueda se hace sobre marginales y el testigo se ubica luego en el soporte.
    """
    rm = marginals(problem, lottery)
    for i, j, s in _ex_ante_triples(problem, rm):
        matchings = lottery.matchings
        envious = next(
            k for k, m in enumerate(matchings) if problem.prefers(i, s, m.assignment[i])
        )
        envied = next(k for k, m in enumerate(matchings) if m.assignment[j] == s)
        witness = ExAnteEnvy(
            problem.students[i], problem.students[j], problem.schools[s], envious, envied
        )
        _verify_ex_ante(problem, lottery, i, j, s, witness)
        return witness
    return None


def _verify_ex_ante(problem, lottery, i, j, s, witness):
    mu = lottery.matchings[witness.envious_matching]
    mu_prime = lottery.matchings[witness.envied_matching]
    holds = (
        problem.prefers(i, s, mu.assignment[i])
        and problem.strictly_higher_priority(s, i, j)
        and mu_prime.assignment[j] == s
    )
    if not holds:
        raise AuditInconsistency(f"Ex ante envy witness does not re-verify: {witness}")


def is_ex_post_stable(problem: Problem, lottery: Lottery) -> Optional[ExPostEnvy]:
    """Primer matching inestable del soporte con su testigo, o None"""
    for k, matching in enumerate(lottery.matchings):
        witness = has_justified_envy(problem, matching)
        if witness is not None:
            return ExPostEnvy(k, witness)
    return None


def build_pair_digraph(problem: Problem, rm: RandomMatching) -> PairDigraph:
    """
    (i,c) ⋗ (j,d) ⟺ d P_i c, Pr(c,i) > 0, Pr(d,j) > 0.
    (i,c) ▶ (j,d) ⟺ (i,c) ⋗ (j,d) e i es de tier máximo en d entre todos los que apuntan a (j,d).
    """
    nodes = tuple(
        (i, c)
        for i in range(problem.n_students)
        for c in range(problem.n_schools)
        if rm.rows[i][c] > ZERO
    )
    pointed = set()
    arrows = set()
    for target in nodes:
        _, d = target
        pointers = [
            (i, c) for (i, c) in nodes
            if problem.rank[i][d] < problem.rank[i][c]
        ]
        pointed.update((source, target) for source in pointers)
        if pointers:
            best = min(problem.tier_of[d][i] for i, _ in pointers)
            arrows.update(
                (source, target) for source in pointers if problem.tier_of[d][source[0]] == best
            )
    return PairDigraph(nodes, frozenset(pointed), frozenset(arrows))


def reference_pair_digraph(problem: Problem, rm: RandomMatching) -> PairDigraph:
    """Construcción literal O(|pares|² · |I|), para contrastar build_pair_digraph"""
    pairs = [
        (i, c)
        for i in range(problem.n_students)
        for c in range(problem.n_schools)
        if rm.rows[i][c] > ZERO
    ]

    def points(a, b):
        (i, c), (_, d) = a, b
        return problem.prefers(i, d, c)

    pointed = {(a, b) for a in pairs for b in pairs if points(a, b)}
    arrows = set()
    for a, b in pointed:
        i, d = a[0], b[1]
        if all(
            not problem.strictly_higher_priority(d, k[0], i)
            for k in pairs
            if (k, b) in pointed
        ):
            arrows.add((a, b))
    return PairDigraph(tuple(pairs), frozenset(pointed), frozenset(arrows))


def _shortest_cycle(graph: nx.DiGraph, order: List[Pair]) -> Optional[List[Pair]]:
    """Ciclo más corto dentro de las componentes fuertemente conexas, desempatado por orden de nodos"""
    position = {node: k for k, node in enumerate(order)}
    best = None
    for component in nx.strongly_connected_components(graph):
        if len(component) < 2:
            continue
        sub = graph.subgraph(component)
        for start in sorted(component, key=position.__getitem__):
            for successor in sorted(sub.successors(start), key=position.__getitem__):
                path = nx.shortest_path(sub, successor, start)
                cycle = [start] + path[:-1]
                key = (len(cycle), position[start])
                if best is None or key < best[0]:
                    best = (key, cycle)
    return best[1] if best else None


def find_easic(problem: Problem, rm: RandomMatching) -> Optional[Tuple[Tuple[str, str], ...]]:
    """Ex ante stable improvement cycle como lista de pares (estudiante, escuela), o None"""
    digraph = build_pair_digraph(problem, rm)
    cycle = _shortest_cycle(digraph.arrow_graph(), list(digraph.nodes))
    if cycle is None:
        return None
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        if (a, b) not in digraph.arrow_edges:
            raise AuditInconsistency(f"Cycle edge {a} -> {b} is not in the arrow relation")
    return tuple((problem.students[i], problem.schools[c]) for i, c in cycle)


def full_audit(problem: Problem, groups: GroupPartition, lottery: Lottery) -> AuditReport:
    rm = marginals(problem, lottery)
    ex_ante = is_ex_ante_stable(problem, lottery)
    ex_post = is_ex_post_stable(problem, lottery)
    ete = ete_violation(problem, groups, rm)

    easic = None
    easic_checked = ex_ante is None
    if easic_checked:
        easic = find_easic(problem, rm)

    report = AuditReport(
        ex_ante_stable=ex_ante is None,
        ex_ante_witness=ex_ante,
        ex_post_stable=ex_post is None,
        ex_post_witness=ex_post,
        ete_satisfied=ete is None,
        ete_witness=ete,
        easic_checked=easic_checked,
        easic=easic,
    )
    logger.info(
        f"Audit: ex_ante={report.ex_ante_stable} ex_post={report.ex_post_stable} "
        f"ete={report.ete_satisfied} easic={'n/a' if not easic_checked else easic}"
    )
    return report
