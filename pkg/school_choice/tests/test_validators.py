import copy

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase, override_settings

from school_choice.exceptions import (
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
from school_choice.serializers import read_json
from school_choice.validators import validate_groups, validate_problem, validate_student_order

from .helpers import fixture_path


class ValidateProblemTests(SimpleTestCase):

    def setUp(self):
        self.raw = read_json(fixture_path('example1.json'))

    def mutated(self, **changes):
        raw = copy.deepcopy(self.raw)
        raw.update(changes)
        return raw

    def test_example_instance(self):
        problem = validate_problem(self.raw)
        self.assertEqual(problem.n_students, 6)
        self.assertEqual(problem.n_schools, 4)
        self.assertEqual(dict(zip(problem.schools, problem.quotas)), {'a': 2, 'b': 1, 'c': 2, 'd': 1})

    def test_bottom_tie_completion(self):
        problem = validate_problem(self.raw)
        b = problem.school_index['b']
        tiers = [[problem.students[i] for i in tier] for tier in problem.tiers[b]]
        self.assertEqual(tiers, [['l'], ['i', "i'"], ['k'], ['j', "j'"]])
        c = problem.school_index['c']
        self.assertEqual(len(problem.tiers[c]), 1)

    def test_minimal_instance(self):
        problem = validate_problem({
            'students': ['x'],
            'schools': [{'id': 's', 'quota': 1}],
            'preferences': {'x': ['s']},
            'priorities': {'s': [['x']]},
        })
        self.assertEqual(problem.n_students, 1)

    def test_capacity_shortfall(self):
        schools = copy.deepcopy(self.raw['schools'])
        schools[1]['quota'] = 0
        with self.assertRaises(CapacityShortfall) as ctx:
            validate_problem(self.mutated(schools=schools))
        self.assertIn('5', str(ctx.exception))
        self.assertIn('6', str(ctx.exception))

    def test_zero_quota_with_enough_capacity(self):
        schools = copy.deepcopy(self.raw['schools'])
        schools.append({'id': 'e', 'quota': 0})
        preferences = {s: prefs + ['e'] for s, prefs in self.raw['preferences'].items()}
        with self.assertRaises(InvalidQuota) as ctx:
            validate_problem(self.mutated(schools=schools, preferences=preferences))
        self.assertEqual(ctx.exception.entity, 'e')

    def test_incomplete_preference_names_the_student(self):
        preferences = dict(self.raw['preferences'], k=['b', 'd', 'a'])
        with self.assertRaises(IncompletePreference) as ctx:
            validate_problem(self.mutated(preferences=preferences))
        self.assertEqual(ctx.exception.entity, 'k')

    def test_overlapping_tiers(self):
        priorities = dict(self.raw['priorities'], d=[['k'], ['l', 'k']])
        with self.assertRaises(OverlappingTiers) as ctx:
            validate_problem(self.mutated(priorities=priorities))
        self.assertEqual(ctx.exception.entity, 'd')

    def test_unknown_school_in_preferences(self):
        preferences = dict(self.raw['preferences'], l=['d', 'b', 'a', 'z'])
        with self.assertRaises(UnknownId) as ctx:
            validate_problem(self.mutated(preferences=preferences))
        self.assertEqual(ctx.exception.entity, 'z')

    def test_duplicate_student(self):
        with self.assertRaises(DuplicateId):
            validate_problem(self.mutated(students=self.raw['students'] + ['k']))

    def test_incomplete_priorities_fail_without_completion(self):
        raw = self.mutated()
        del raw['priority_completion']
        with self.assertRaises(IncompletePriority):
            validate_problem(raw)

    @override_settings(DEFAULT_PRIORITY_COMPLETION='bottom-tie')
    def test_completion_default_comes_from_settings(self):
        raw = self.mutated()
        del raw['priority_completion']
        self.assertEqual(validate_problem(raw).n_students, 6)

    def test_schema_errors_are_validation_errors(self):
        with self.assertRaises(MalformedInstance) as ctx:
            validate_problem({'students': ['x'], 'schools': [{'id': 's', 'quota': 'one'}]})
        self.assertIsInstance(ctx.exception, ValidationError)


class ValidateGroupsTests(SimpleTestCase):

    def setUp(self):
        self.problem = validate_problem(read_json(fixture_path('example1.json')))

    def test_finer_partition_is_accepted(self):
        groups = validate_groups(self.problem, [['i'], ["i'"], ['j', "j'"], ['k'], ['l']])
        self.assertEqual(groups.size, 5)

    def test_mixing_non_equals_is_rejected(self):
        with self.assertRaises(InvalidGroupPartition):
            validate_groups(self.problem, [['i', 'j'], ["i'"], ["j'"], ['k'], ['l']])

    def test_partition_must_cover(self):
        with self.assertRaises(InvalidGroupPartition) as ctx:
            validate_groups(self.problem, [['i', "i'"], ['j', "j'"], ['k']])
        self.assertEqual(ctx.exception.entity, 'l')

    def test_tie_break_order_must_be_a_permutation(self):
        self.assertEqual(validate_student_order(self.problem, ['l', 'k', "j'", 'j', "i'", 'i']), [5, 4, 3, 2, 1, 0])
        with self.assertRaises(MalformedInstance):
            validate_student_order(self.problem, ['i', 'j'])
