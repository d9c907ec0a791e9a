"""
Tipos de dominio del problema de school choice: problema, matching y grupos de iguales.

No son modelos ORM: son dataclasses inmutables. Los ids de estudiantes y escuelas
son strings en los archivos y se mapean a índices enteros densos internamente.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exceptions import InvalidMatching, UnknownId


@dataclass(frozen=True)
class Problem:
    """Problema de school choice (I, C, q, P, ≿) ya validado"""

    students: Tuple[str, ...]
    schools: Tuple[str, ...]
    quotas: Tuple[int, ...]
    # preferences[i] = índices de escuelas de la más a la menos preferida
    preferences: Tuple[Tuple[int, ...], ...]
    # tiers[c] = tiers de prioridad de la escuela c, del más alto al más bajo
    tiers: Tuple[Tuple[Tuple[int, ...], ...], ...]

    student_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    school_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    rank: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    tier_of: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # Tablas de consulta O(1): rank[i][c] es la posición de c en P_i,
        # tier_of[c][i] la posición del tier de i en ≿_c
        rank = []
        for prefs in self.preferences:
            row = [0] * len(self.schools)
            for position, c in enumerate(prefs):
                row[c] = position
            rank.append(tuple(row))

        tier_of = []
        for school_tiers in self.tiers:
            row = [0] * len(self.students)
            for level, tier in enumerate(school_tiers):
                for i in tier:
                    row[i] = level
            tier_of.append(tuple(row))

        object.__setattr__(self, 'student_index', {s: i for i, s in enumerate(self.students)})
        object.__setattr__(self, 'school_index', {c: k for k, c in enumerate(self.schools)})
        object.__setattr__(self, 'rank', tuple(rank))
        object.__setattr__(self, 'tier_of', tuple(tier_of))

    @classmethod
    def from_ids(
        cls,
        students: Sequence[str],
        schools: Sequence[str],
        quotas: Mapping[str, int],
        preferences: Mapping[str, Sequence[str]],
        priorities: Mapping[str, Sequence[Sequence[str]]],
    ) -> 'Problem':
        """Construye el problema a partir de ids ya validados (ver validators.validate_problem)"""
        s_idx = {s: i for i, s in enumerate(students)}
        c_idx = {c: k for k, c in enumerate(schools)}
        return cls(
            students=tuple(students),
            schools=tuple(schools),
            quotas=tuple(int(quotas[c]) for c in schools),
            preferences=tuple(tuple(c_idx[c] for c in preferences[s]) for s in students),
            tiers=tuple(
                tuple(tuple(sorted(s_idx[s] for s in tier)) for tier in priorities[c])
                for c in schools
            ),
        )

    @property
    def n_students(self) -> int:
        return len(self.students)

    @property
    def n_schools(self) -> int:
        return len(self.schools)

    def prefers(self, i: int, c: int, d: int) -> bool:
        """c P_i d"""
        return self.rank[i][c] < self.rank[i][d]

    def strictly_higher_priority(self, c: int, i: int, j: int) -> bool:
        """i ≻_c j"""
        return self.tier_of[c][i] < self.tier_of[c][j]

    def tied(self, c: int, i: int, j: int) -> bool:
        """i ∼_c j"""
        return self.tier_of[c][i] == self.tier_of[c][j]

    def to_ids(self) -> dict:
        """Representación con ids originales, en el formato del archivo de instancia"""
        return {
            'students': list(self.students),
            'schools': [
                {'id': c, 'quota': q} for c, q in zip(self.schools, self.quotas)
            ],
            'preferences': {
                s: [self.schools[c] for c in self.preferences[i]]
                for i, s in enumerate(self.students)
            },
            'priorities': {
                c: [[self.students[i] for i in tier] for tier in self.tiers[k]]
                for k, c in enumerate(self.schools)
            },
        }


@dataclass(frozen=True)
class Matching:
    """Asignación total μ: assignment[i] es el índice de la escuela de i"""

    assignment: Tuple[int, ...]

    def students_at(self, c: int) -> Tuple[int, ...]:
        """μ(c), en orden de entrada"""
        return tuple(i for i, school in enumerate(self.assignment) if school == c)

    def occupancy(self, n_schools: int) -> List[int]:
        counts = [0] * n_schools
        for c in self.assignment:
            counts[c] += 1
        return counts

    def is_valid_for(self, problem: Problem) -> bool:
        if len(self.assignment) != problem.n_students:
            return False
        if any(c < 0 or c >= problem.n_schools for c in self.assignment):
            return False
        return all(n <= q for n, q in zip(self.occupancy(problem.n_schools), problem.quotas))

    @classmethod
    def from_ids(cls, problem: Problem, mapping: Mapping[str, str]) -> 'Matching':
        for student in mapping:
            if student not in problem.student_index:
                raise UnknownId(f"Unknown student '{student}' in matching", entity=student)
        missing = [s for s in problem.students if s not in mapping]
        if missing:
            raise InvalidMatching(f"Matching leaves student '{missing[0]}' unassigned", entity=missing[0])

        assignment = []
        for student in problem.students:
            school = mapping[student]
            if school not in problem.school_index:
                raise UnknownId(f"Unknown school '{school}' assigned to '{student}'", entity=school)
            assignment.append(problem.school_index[school])

        matching = cls(tuple(assignment))
        for k, n in enumerate(matching.occupancy(problem.n_schools)):
            if n > problem.quotas[k]:
                school = problem.schools[k]
                raise InvalidMatching(
                    f"School '{school}' receives {n} students but its quota is {problem.quotas[k]}",
                    entity=school,
                )
        return matching

    def to_ids(self, problem: Problem) -> Dict[str, str]:
        return {problem.students[i]: problem.schools[c] for i, c in enumerate(self.assignment)}


@dataclass(frozen=True)
class GroupPartition:
    """Partición I_1, …, I_N en grupos de iguales"""

    groups: Tuple[Tuple[int, ...], ...]
    group_of: Tuple[int, ...]

    @classmethod
    def from_groups(cls, groups: Sequence[Sequence[int]], n_students: int) -> 'GroupPartition':
        group_of = [0] * n_students
        for g, members in enumerate(groups):
            for i in members:
                group_of[i] = g
        return cls(tuple(tuple(members) for members in groups), tuple(group_of))

    @property
    def size(self) -> int:
        """N"""
        return len(self.groups)

    def labels(self, problem: Problem) -> List[List[str]]:
        return [[problem.students[i] for i in members] for members in self.groups]


@dataclass(frozen=True)
class EnvyWitness:
    """student prefiere la escuela de rival y tiene prioridad estricta ahí"""

    student: str
    rival: str
    school: str


def are_equals(problem: Problem, i: int, j: int) -> bool:
    """P_i = P_j e i ∼_c j en toda escuela c"""
    if problem.preferences[i] != problem.preferences[j]:
        return False
    return all(problem.tied(c, i, j) for c in range(problem.n_schools))


def has_justified_envy(problem: Problem, matching: Matching) -> Optional[EnvyWitness]:
    """
    Primer testigo (i, j, μ(j)) con μ(j) P_i μ(i) e i ≻_{μ(j)} j, en orden lexicográfico
    de estudiantes según la entrada; None si el matching es estable.
    """
    assignment = matching.assignment
    for i in range(problem.n_students):
        own = problem.rank[i][assignment[i]]
        for j in range(problem.n_students):
            s = assignment[j]
            if problem.rank[i][s] < own and problem.tier_of[s][i] < problem.tier_of[s][j]:
                return EnvyWitness(problem.students[i], problem.students[j], problem.schools[s])
    return None


def is_stable(problem: Problem, matching: Matching) -> bool:
    return has_justified_envy(problem, matching) is None


def pareto_dominates(problem: Problem, m2: Matching, m1: Matching) -> bool:
    """m2 domina en Pareto a m1: nadie empeora y al menos uno mejora"""
    strict = False
    for i in range(problem.n_students):
        new, old = problem.rank[i][m2.assignment[i]], problem.rank[i][m1.assignment[i]]
        if new > old:
            return False
        if new < old:
            strict = True
    return strict


def compute_groups(problem: Problem) -> GroupPartition:
    """Partición maximal en grupos de iguales, grupos ordenados por su primer miembro"""
    by_signature: Dict[tuple, List[int]] = {}
    for i in range(problem.n_students):
        signature = (
            problem.preferences[i],
            tuple(problem.tier_of[c][i] for c in range(problem.n_schools)),
        )
        by_signature.setdefault(signature, []).append(i)
    return GroupPartition.from_groups(list(by_signature.values()), problem.n_students)
