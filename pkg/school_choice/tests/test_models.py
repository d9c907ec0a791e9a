from django.test import SimpleTestCase

from school_choice.exceptions import InvalidMatching, UnknownId
from school_choice.models import (
    EnvyWitness,
    Matching,
    Problem,
    are_equals,
    compute_groups,
    has_justified_envy,
    is_stable,
    pareto_dominates,
)
from school_choice.oracle import enumerate_matchings

from .helpers import MU_BAR, MU_BAR_PRIME, MU_STAR, corpus, example_instance, matching


def two_by_two(tiers_s, tiers_t, prefs_x=('s', 't'), prefs_y=('s', 't')):
    return Problem.from_ids(
        ['x', 'y'], ['s', 't'], {'s': 1, 't': 1},
        {'x': list(prefs_x), 'y': list(prefs_y)},
        {'s': tiers_s, 't': tiers_t},
    )


class ProblemTests(SimpleTestCase):

    def setUp(self):
        self.problem = example_instance().problem

    def test_comparison_queries(self):
        p = self.problem
        i, k, l = p.student_index['i'], p.student_index['k'], p.student_index['l']
        a, b, c, d = (p.school_index[s] for s in 'abcd')
        self.assertTrue(p.prefers(i, b, c))
        self.assertFalse(p.prefers(i, c, b))
        self.assertTrue(p.strictly_higher_priority(b, l, i))
        self.assertTrue(p.strictly_higher_priority(b, i, k))
        self.assertTrue(p.strictly_higher_priority(d, k, l))
        self.assertTrue(p.tied(a, i, p.student_index["j'"]))
        # c no lista prioridades: un único tier tras completar
        self.assertTrue(p.tied(c, k, l))

    def test_to_ids_rebuilds_the_same_problem(self):
        document = self.problem.to_ids()
        rebuilt = Problem.from_ids(
            document['students'],
            [s['id'] for s in document['schools']],
            {s['id']: s['quota'] for s in document['schools']},
            document['preferences'],
            document['priorities'],
        )
        self.assertEqual(rebuilt, self.problem)


class MatchingTests(SimpleTestCase):

    def setUp(self):
        self.problem = example_instance().problem

    def test_inverse_is_consistent(self):
        mu = matching(self.problem, MU_STAR)
        a = self.problem.school_index['a']
        self.assertEqual(
            mu.students_at(a),
            (self.problem.student_index['i'], self.problem.student_index['j']),
        )
        self.assertTrue(mu.is_valid_for(self.problem))
        self.assertEqual(mu.to_ids(self.problem), MU_STAR)

    def test_from_ids_rejects_overfull_school(self):
        overfull = dict(MU_STAR, l='d')
        with self.assertRaises(InvalidMatching) as ctx:
            matching(self.problem, overfull)
        self.assertEqual(ctx.exception.entity, 'd')

    def test_from_ids_rejects_unknown_and_missing_students(self):
        with self.assertRaises(UnknownId):
            matching(self.problem, dict(MU_STAR, z='a'))
        partial = {s: c for s, c in MU_STAR.items() if s != 'k'}
        with self.assertRaises(InvalidMatching):
            matching(self.problem, partial)


class JustifiedEnvyTests(SimpleTestCase):

    def setUp(self):
        self.problem = example_instance().problem

    def test_example_matchings_are_stable(self):
        for mapping in (MU_STAR, MU_BAR, MU_BAR_PRIME):
            self.assertIsNone(has_justified_envy(self.problem, matching(self.problem, mapping)))

    def test_witness_for_lower_priority_student_at_b(self):
        mu = matching(self.problem, dict(MU_BAR_PRIME, k='b', l='d'))
        self.assertEqual(has_justified_envy(self.problem, mu), EnvyWitness('i', 'k', 'b'))
        self.assertFalse(is_stable(self.problem, mu))

    def test_single_student_is_always_stable(self):
        problem = Problem.from_ids(['x'], ['s'], {'s': 1}, {'x': ['s']}, {'s': [['x']]})
        self.assertIsNone(has_justified_envy(problem, Matching((0,))))

    def test_matches_the_pair_scan_definition(self):
        for _, problem in corpus(60):
            for mu in enumerate_matchings(problem):
                a = mu.assignment
                envy = any(
                    problem.prefers(i, a[j], a[i]) and problem.strictly_higher_priority(a[j], i, j)
                    for i in range(problem.n_students)
                    for j in range(problem.n_students)
                )
                self.assertEqual(has_justified_envy(problem, mu) is not None, envy)


class ParetoDominanceTests(SimpleTestCase):

    def test_mu_bar_does_not_dominate_mu_star(self):
        problem = example_instance().problem
        self.assertFalse(
            pareto_dominates(problem, matching(problem, MU_BAR), matching(problem, MU_STAR))
        )

    def test_irreflexive(self):
        problem = example_instance().problem
        mu = matching(problem, MU_STAR)
        self.assertFalse(pareto_dominates(problem, mu, mu))

    def test_symmetric_swap_is_not_an_improvement(self):
        problem = two_by_two([['x', 'y']], [['x', 'y']])
        m1, m2 = Matching((1, 0)), Matching((0, 1))
        self.assertFalse(pareto_dominates(problem, m2, m1))
        self.assertFalse(pareto_dominates(problem, m1, m2))

    def test_strict_improvement(self):
        problem = two_by_two([['x', 'y']], [['x', 'y']], prefs_x=('t', 's'))
        self.assertTrue(pareto_dominates(problem, Matching((1, 0)), Matching((0, 1))))

    def test_transitive(self):
        for _, problem in corpus(25):
            matchings = enumerate_matchings(problem)[:40]
            for m1 in matchings:
                for m2 in matchings:
                    if not pareto_dominates(problem, m2, m1):
                        continue
                    for m3 in matchings:
                        if pareto_dominates(problem, m3, m2):
                            self.assertTrue(pareto_dominates(problem, m3, m1))


class GroupsOfEqualsTests(SimpleTestCase):

    def test_example_groups(self):
        instance = example_instance()
        self.assertEqual(
            instance.groups.labels(instance.problem),
            [['i', "i'"], ['j', "j'"], ['k'], ['l']],
        )
        self.assertEqual(instance.groups.size, 4)

    def test_strict_priorities_give_singletons(self):
        problem = two_by_two([['x'], ['y']], [['y'], ['x']])
        self.assertEqual(compute_groups(problem).groups, ((0,), (1,)))

    def test_fully_symmetric_students_form_one_group(self):
        problem = Problem.from_ids(
            ['x', 'y', 'z'], ['s'], {'s': 3},
            {'x': ['s'], 'y': ['s'], 'z': ['s']},
            {'s': [['x', 'y', 'z']]},
        )
        self.assertEqual(compute_groups(problem).groups, ((0, 1, 2),))

    def test_partition_is_the_equality_relation(self):
        for _, problem in corpus(100):
            groups = compute_groups(problem)
            covered = sorted(i for members in groups.groups for i in members)
            self.assertEqual(covered, list(range(problem.n_students)))
            for g, members in enumerate(groups.groups):
                self.assertTrue(members)
                for i in members:
                    self.assertEqual(groups.group_of[i], g)
            for i in range(problem.n_students):
                for j in range(problem.n_students):
                    self.assertEqual(
                        groups.group_of[i] == groups.group_of[j],
                        are_equals(problem, i, j),
                    )
