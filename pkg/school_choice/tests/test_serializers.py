import os
import tempfile
from fractions import Fraction

import pandas as pd
from django.test import SimpleTestCase

from school_choice.exceptions import InvalidLottery, MalformedInstance, UnknownId
from school_choice.lottery import marginals
from school_choice.serializers import (
    format_fraction,
    instance_from_document,
    lottery_from_document,
    lottery_to_document,
    read_json,
    write_marginals,
)

from .helpers import example_instance, example_lottery, fixture_path


class RationalFormatTests(SimpleTestCase):

    def test_format(self):
        self.assertEqual(format_fraction(Fraction(1, 2)), '1/2')
        self.assertEqual(format_fraction(Fraction(4, 4)), '1')
        self.assertEqual(format_fraction(Fraction(0)), '0')


class LotteryDocumentTests(SimpleTestCase):

    def setUp(self):
        self.problem = example_instance().problem
        self.document = read_json(fixture_path('lambda_double_star.json'))

    def test_write_then_read_is_exact(self):
        lottery = lottery_from_document(self.problem, self.document)
        self.assertEqual(lottery_from_document(self.problem, lottery_to_document(self.problem, lottery)), lottery)

    def test_length_mismatch(self):
        document = dict(self.document, probabilities=['1/2', '1/2'])
        with self.assertRaises(InvalidLottery):
            lottery_from_document(self.problem, document)

    def test_floats_are_rejected_by_the_schema(self):
        document = dict(self.document, probabilities=['0.25'] * 4)
        with self.assertRaises(MalformedInstance):
            lottery_from_document(self.problem, document)

    def test_unknown_school(self):
        document = {'matchings': [dict(self.document['matchings'][0], k='z')], 'probabilities': ['1']}
        with self.assertRaises(UnknownId):
            lottery_from_document(self.problem, document)


class MarginalsFileTests(SimpleTestCase):

    def test_csv_is_exact(self):
        problem = example_instance().problem
        rm = marginals(problem, example_lottery('lambda_bar', problem))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'marginals.csv')
            write_marginals(path, problem, rm)
            frame = pd.read_csv(path, index_col='student', dtype=str, keep_default_na=False)
        self.assertEqual(list(frame.columns), list(problem.schools))
        self.assertEqual(list(frame.index), list(problem.students))
        for i, row in enumerate(rm.rows):
            self.assertEqual(frame.iloc[i].tolist(), [format_fraction(p) for p in row])


class InstanceDocumentTests(SimpleTestCase):

    def test_declared_fields(self):
        instance = instance_from_document(read_json(fixture_path('example1.json')))
        self.assertFalse(instance.declared_groups)
        self.assertEqual(instance.tie_break, [0, 2, 1, 3, 4, 5])


class ReadJsonTests(SimpleTestCase):

    def test_invalid_utf8_names_the_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'latin1.json')
            with open(path, 'wb') as f:
                f.write(b'{"students": ["\xff"]}')
            with self.assertRaises(MalformedInstance) as ctx:
                read_json(path)
        self.assertEqual(ctx.exception.entity, path)
        self.assertIn('UTF-8', str(ctx.exception))

    def test_invalid_json_names_the_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'truncated.json')
            with open(path, 'w', encoding='utf-8') as f:
                f.write('{"students": [')
            with self.assertRaises(MalformedInstance) as ctx:
                read_json(path)
        self.assertEqual(ctx.exception.entity, path)
