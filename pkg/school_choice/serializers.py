"""
Formatos de archivo: instancias, loterías, marginales y reportes de auditoría.

Los racionales se serializan como strings "num/den" (o enteros "0", "1"), nunca floats.
"""

import dataclasses
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

import pandas as pd

from .audit import AuditReport
from .exceptions import InvalidLottery, MalformedInstance
from .lottery import Lottery, RandomMatching
from .models import GroupPartition, Matching, Problem, compute_groups
from .validators import (
    LOTTERY_SCHEMA,
    check_schema,
    validate_groups,
    validate_problem,
    validate_student_order,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Instance:
    """Problema validado más la partición y el orden de desempate declarados en el archivo"""

    problem: Problem
    groups: GroupPartition
    declared_groups: bool
    tie_break: Optional[List[int]]


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.replace(' ', ''))
    except (ValueError, ZeroDivisionError) as e:
        raise InvalidLottery(f"Invalid rational '{text}': {e}", entity=text)


def read_json(path: PathLike):
    try:
        with open(path, encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise MalformedInstance(f"{path} is not valid JSON: {e}", entity=str(path))
    except UnicodeDecodeError as e:
        raise MalformedInstance(f"{path} is not valid UTF-8: {e}", entity=str(path))


def write_json(path: PathLike, document) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2, ensure_ascii=False)
        f.write('\n')


def instance_from_document(document, completion: Optional[str] = None) -> Instance:
    problem = validate_problem(document, completion=completion)
    raw_groups = document.get('groups')
    if raw_groups is not None:
        groups = validate_groups(problem, raw_groups)
    else:
        groups = compute_groups(problem)
    raw_order = document.get('tie_break')
    tie_break = validate_student_order(problem, raw_order) if raw_order is not None else None
    return Instance(problem, groups, raw_groups is not None, tie_break)


def load_instance(path: PathLike, completion: Optional[str] = None) -> Instance:
    instance = instance_from_document(read_json(path), completion=completion)
    logger.info(f"Loaded instance {path}: {instance.groups.size} groups of equals")
    return instance


def lottery_from_document(problem: Problem, document) -> Lottery:
    check_schema(document, LOTTERY_SCHEMA)
    matchings = document['matchings']
    probabilities = document['probabilities']
    if len(matchings) != len(probabilities):
        raise InvalidLottery(
            f"{len(matchings)} matchings but {len(probabilities)} probabilities",
            entity='probabilities',
        )
    pairs = [
        (Matching.from_ids(problem, mapping), parse_fraction(text))
        for mapping, text in zip(matchings, probabilities)
    ]
    return Lottery.from_pairs(pairs)


def lottery_to_document(problem: Problem, lottery: Lottery) -> dict:
    return {
        'matchings': [m.to_ids(problem) for m in lottery.matchings],
        'probabilities': [format_fraction(p) for _, p in lottery.support],
    }


def load_lottery(path: PathLike, problem: Problem) -> Lottery:
    lottery = lottery_from_document(problem, read_json(path))
    logger.info(f"Loaded lottery {path}: support of {len(lottery.support)} matchings")
    return lottery


def write_lottery(path: PathLike, problem: Problem, lottery: Lottery) -> None:
    write_json(path, lottery_to_document(problem, lottery))


def marginals_frame(problem: Problem, rm: RandomMatching) -> pd.DataFrame:
    """Tabla estudiantes × escuelas con celdas "num/den" """
    frame = pd.DataFrame(
        [[format_fraction(p) for p in row] for row in rm.rows],
        index=pd.Index(problem.students, name='student'),
        columns=list(problem.schools),
    )
    return frame


def write_marginals(path: PathLike, problem: Problem, rm: RandomMatching) -> None:
    marginals_frame(problem, rm).to_csv(path)


def matching_frame(problem: Problem, matchings: List[Matching], labels: List[str]) -> pd.DataFrame:
    return pd.DataFrame(
        {label: [problem.schools[c] for c in m.assignment] for label, m in zip(labels, matchings)},
        index=pd.Index(problem.students, name='student'),
    )


def report_to_document(report: AuditReport) -> dict:
    document = dataclasses.asdict(report)
    document['passed'] = report.passed
    if report.easic is not None:
        document['easic'] = [list(pair) for pair in report.easic]
    return document
