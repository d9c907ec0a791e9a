"""
Validadores de instancias de school choice, particiones en grupos y archivos de lotería
"""

import logging
from typing import List, Mapping, Optional, Sequence

from django.conf import settings
from jsonschema import Draft7Validator

from .exceptions import (
    CapacityShortfall,
    DuplicateId,
    IncompletePreference,
    IncompletePriority,
    InvalidGroupPartition,
    InvalidQuota,
    MalformedInstance,
    OverlappingTiers,
    UnknownId,
)
from .models import GroupPartition, Problem, are_equals

logger = logging.getLogger(__name__)

PRIORITY_COMPLETIONS = ('bottom-tie', 'error')

_ID_LIST = {'type': 'array', 'items': {'type': 'string', 'minLength': 1}}

INSTANCE_SCHEMA = {
    'title': 'SchoolChoiceInstance',
    'type': 'object',
    'required': ['students', 'schools', 'preferences', 'priorities'],
    'properties': {
        'students': {**_ID_LIST, 'minItems': 1},
        'schools': {
            'type': 'array',
            'minItems': 1,
            'items': {
                'type': 'object',
                'required': ['id', 'quota'],
                'additionalProperties': False,
                'properties': {
                    'id': {'type': 'string', 'minLength': 1},
                    'quota': {'type': 'integer', 'minimum': 0},
                },
            },
        },
        'preferences': {'type': 'object', 'additionalProperties': _ID_LIST},
        'priorities': {
            'type': 'object',
            'additionalProperties': {'type': 'array', 'items': _ID_LIST},
        },
        'priority_completion': {'enum': list(PRIORITY_COMPLETIONS)},
        'groups': {'type': 'array', 'items': _ID_LIST},
        'tie_break': _ID_LIST,
    },
}

LOTTERY_SCHEMA = {
    'title': 'SchoolChoiceLottery',
    'type': 'object',
    'required': ['matchings', 'probabilities'],
    'properties': {
        'matchings': {
            'type': 'array',
            'minItems': 1,
            'items': {'type': 'object', 'additionalProperties': {'type': 'string'}},
        },
        'probabilities': {
            'type': 'array',
            'minItems': 1,
            'items': {'type': 'string', 'pattern': r'^\s*\d+\s*(/\s*\d+\s*)?$'},
        },
    },
}


def check_schema(document, schema):
    """
    Valida la estructura de un documento JSON contra su schema

    Raises:
        MalformedInstance: con la ruta JSON del primer error encontrado
    """
    errors = sorted(Draft7Validator(schema).iter_errors(document), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        path = '/'.join(str(p) for p in first.absolute_path) or '<root>'
        logger.warning(f"{schema['title']} rejected at {path}: {first.message}")
        raise MalformedInstance(f"{schema['title']} invalid at '{path}': {first.message}", entity=path)


def _check_unique(ids: Sequence[str], kind: str):
    seen = set()
    for entity in ids:
        if entity in seen:
            raise DuplicateId(f"Duplicate {kind} id '{entity}'", entity=entity)
        seen.add(entity)


def complete_priorities(raw_priorities, schools, students, completion):
    """
    Completa los órdenes de prioridad: con 'bottom-tie' los estudiantes no listados
    forman un último tier, empatados por debajo de todos los listados
    """
    completed = {}
    for school in schools:
        tiers = [list(tier) for tier in raw_priorities.get(school, [])]
        listed = {s for tier in tiers for s in tier}
        absent = [s for s in students if s not in listed]
        if absent:
            if completion != 'bottom-tie':
                raise IncompletePriority(
                    f"School '{school}' does not rank student '{absent[0]}' "
                    "(use priority_completion 'bottom-tie' to tie unlisted students last)",
                    entity=school,
                )
            tiers.append(absent)
        completed[school] = tiers
    return completed


def validate_problem(raw: Mapping, completion: Optional[str] = None) -> Problem:
    """
    Valida un documento de instancia y construye el Problem

    Args:
        raw: Documento JSON ya parseado
        completion: Modo de completado de prioridades; por defecto el del documento
            o DEFAULT_PRIORITY_COMPLETION

    Returns:
        Problem: instancia que cumple todas las invariantes
    """
    check_schema(raw, INSTANCE_SCHEMA)

    students: List[str] = list(raw['students'])
    schools: List[str] = [entry['id'] for entry in raw['schools']]
    quotas = {entry['id']: entry['quota'] for entry in raw['schools']}
    _check_unique(students, 'student')
    _check_unique(schools, 'school')
    student_set, school_set = set(students), set(schools)

    # Ids desconocidos en preferencias y prioridades
    for student in raw['preferences']:
        if student not in student_set:
            raise UnknownId(f"Preferences given for unknown student '{student}'", entity=student)
    for school in raw['priorities']:
        if school not in school_set:
            raise UnknownId(f"Priorities given for unknown school '{school}'", entity=school)
    for student, prefs in raw['preferences'].items():
        for school in prefs:
            if school not in school_set:
                raise UnknownId(f"Student '{student}' ranks unknown school '{school}'", entity=school)
    for school, tiers in raw['priorities'].items():
        for tier in tiers:
            for student in tier:
                if student not in student_set:
                    raise UnknownId(f"School '{school}' ranks unknown student '{student}'", entity=student)

    # Preferencias: permutación completa de C
    for student in students:
        prefs = raw['preferences'].get(student)
        if prefs is None:
            raise IncompletePreference(f"Student '{student}' has no preference list", entity=student)
        if len(prefs) != len(set(prefs)):
            raise IncompletePreference(f"Student '{student}' ranks a school twice", entity=student)
        if set(prefs) != school_set:
            missing = next(c for c in schools if c not in prefs)
            raise IncompletePreference(f"Student '{student}' does not rank school '{missing}'", entity=student)

    # Tiers: disjuntos y no vacíos
    for school, tiers in raw['priorities'].items():
        seen = set()
        for tier in tiers:
            if not tier:
                raise OverlappingTiers(f"School '{school}' has an empty priority tier", entity=school)
            for student in tier:
                if student in seen:
                    raise OverlappingTiers(
                        f"Student '{student}' appears twice in the priorities of school '{school}'",
                        entity=school,
                    )
                seen.add(student)

    completion = completion or raw.get('priority_completion') or settings.DEFAULT_PRIORITY_COMPLETION
    priorities = complete_priorities(raw['priorities'], schools, students, completion)

    total = sum(quotas.values())
    if total < len(students):
        raise CapacityShortfall(
            f"Total capacity {total} is below the number of students {len(students)}",
            entity='quotas',
        )
    for school in schools:
        if quotas[school] <= 0:
            raise InvalidQuota(f"School '{school}' has non-positive quota {quotas[school]}", entity=school)

    problem = Problem.from_ids(students, schools, quotas, raw['preferences'], priorities)
    logger.info(f"Validated problem: {problem.n_students} students, {problem.n_schools} schools")
    return problem


def validate_groups(problem: Problem, raw_groups: Sequence[Sequence[str]]) -> GroupPartition:
    """
    Valida una partición explícita (posiblemente más fina que la maximal)

    Raises:
        InvalidGroupPartition: si no es partición o mezcla estudiantes que no son iguales
    """
    seen = set()
    groups = []
    for members in raw_groups:
        if not members:
            raise InvalidGroupPartition("Group of equals cannot be empty", entity='groups')
        indices = []
        for student in members:
            if student not in problem.student_index:
                raise UnknownId(f"Group lists unknown student '{student}'", entity=student)
            if student in seen:
                raise InvalidGroupPartition(f"Student '{student}' belongs to two groups", entity=student)
            seen.add(student)
            indices.append(problem.student_index[student])
        leader = indices[0]
        for i in indices[1:]:
            if not are_equals(problem, leader, i):
                raise InvalidGroupPartition(
                    f"Students '{problem.students[leader]}' and '{problem.students[i]}' "
                    "differ in preferences or priority tiers",
                    entity=problem.students[i],
                )
        groups.append(indices)

    uncovered = [s for s in problem.students if s not in seen]
    if uncovered:
        raise InvalidGroupPartition(f"Student '{uncovered[0]}' is in no group", entity=uncovered[0])
    return GroupPartition.from_groups(groups, problem.n_students)


def validate_student_order(problem: Problem, order: Sequence[str]) -> List[int]:
    """Valida un orden explícito de desempate: permutación de todos los estudiantes"""
    for student in order:
        if student not in problem.student_index:
            raise UnknownId(f"Tie-break order lists unknown student '{student}'", entity=student)
    _check_unique(order, 'student')
    missing = [s for s in problem.students if s not in order]
    if missing:
        raise MalformedInstance(f"Tie-break order omits student '{missing[0]}'", entity=missing[0])
    return [problem.student_index[s] for s in order]
