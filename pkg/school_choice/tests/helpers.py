"""
Utilidades compartidas por las pruebas: fixtures del ejemplo incluido y el corpus aleatorio sembrado
"""

from pathlib import Path

from django.conf import settings

from school_choice.models import Matching
from school_choice.oracle import random_problem
from school_choice.serializers import load_instance, load_lottery

FIXTURES = Path(__file__).resolve().parent.parent / 'fixtures'

TIE_DENSITIES = (0.3, 0.7, 1.0)

MU_STAR = {'i': 'a', "i'": 'c', 'j': 'a', "j'": 'c', 'k': 'd', 'l': 'b'}
MU_2 = {'i': 'c', "i'": 'a', 'j': 'a', "j'": 'c', 'k': 'd', 'l': 'b'}
MU_3 = {'i': 'c', "i'": 'a', 'j': 'c', "j'": 'a', 'k': 'd', 'l': 'b'}
MU_4 = {'i': 'a', "i'": 'c', 'j': 'c', "j'": 'a', 'k': 'd', 'l': 'b'}
MU_BAR = {'i': 'a', "i'": 'a', 'j': 'c', "j'": 'c', 'k': 'b', 'l': 'd'}
MU_BAR_PRIME = {'i': 'c', "i'": 'c', 'j': 'a', "j'": 'a', 'k': 'd', 'l': 'b'}


def fixture_path(name):
    return str(FIXTURES / name)


def example_instance():
    return load_instance(fixture_path('example1.json'))


def example_lottery(name, problem):
    return load_lottery(fixture_path(f'{name}.json'), problem)


def matching(problem, mapping):
    return Matching.from_ids(problem, mapping)


def corpus_parameters(size=None):
    """(seed, estudiantes, escuelas, densidad) deterministas: 2-6 estudiantes, 2-4 escuelas"""
    size = size or settings.PROPERTY_CORPUS_SIZE
    for seed in range(size):
        yield seed, 2 + seed % 5, 2 + (seed // 5) % 3, TIE_DENSITIES[(seed // 15) % 3]


def corpus(size=None):
    for seed, n_students, n_schools, density in corpus_parameters(size):
        yield seed, random_problem(seed, n_students, n_schools, density)
