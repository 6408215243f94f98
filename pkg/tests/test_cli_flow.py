"""
End-to-end CLI flows: the built-in example, export → check → dilate → equiv, and gen.
"""
import io
import json
import os
import tempfile
import unittest
from unittest.mock import patch

from stinespring_dilator import cli


def _run(argv):
    with patch('sys.stdout', new_callable=io.StringIO) as out:
        code = cli.main(argv)
    return code, out.getvalue()


class TestDemo(unittest.TestCase):
    def test_demo_passes_every_stage(self):
        code, out = _run(['demo-asadi'])
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('demo-asadi: PASS'))
        self.assertNotIn('[FAIL]', out)
        self.assertEqual(out.count('[PASS]'), 5)
        self.assertIn('‖V‖² = ‖φ(1)‖ = 1', out)
        self.assertIn('x₀ condition impossible: rank ≤ 2 < 8', out)


class TestExportedExampleFlow(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name
        code, _ = _run(['demo-asadi', '--export', self.tmp])
        self.assertEqual(code, 0)
        self.instance = os.path.join(self.tmp, 'schur_instance.json')
        self.explicit = os.path.join(self.tmp, 'schur_explicit_pair.json')

    def tearDown(self):
        self._tmp.cleanup()

    def test_export_writes_schur_kind(self):
        with open(self.instance, encoding='utf-8') as f:
            data = json.load(f)
        self.assertEqual(data['phi']['kind'], 'schur')
        self.assertTrue(os.path.exists(self.explicit))

    def test_check(self):
        report_path = os.path.join(self.tmp, 'check.json')
        code, out = _run(['check', self.instance, '--out', report_path])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertTrue(report['verdict'])
        self.assertEqual(report['dimensions']['choi_rank'], 2)
        for got, expected in zip(report['completely_positive']['choi_eigenvalues'],
                                 (0.0, 0.0, 0.5, 1.5)):
            self.assertAlmostEqual(got, expected, delta=1e-12)
        with open(report_path, encoding='utf-8') as f:
            self.assertEqual(json.load(f), report)

    def test_check_human(self):
        code, out = _run(['--human', 'check', self.instance])
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('check: PASS'))

    def test_dilate_then_equiv_against_explicit_pair(self):
        rep = os.path.join(self.tmp, 'rep.json')
        code, out = _run(['dilate', self.instance, '--out', rep])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertEqual(report['dimensions']['k1_dim'], 4)
        self.assertEqual(report['dimensions']['k2_dim'], 8)
        self.assertEqual(report['minimality'], {'minimal_k1': True, 'minimal_k2': True})
        for name, value in report['verification']['residuals'].items():
            self.assertLessEqual(value, 1e-9, name)

        witness_path = os.path.join(self.tmp, 'witness.json')
        code, out = _run(['equiv', self.instance, rep, self.explicit, '--out', witness_path])
        self.assertEqual(code, 0)
        report = json.loads(out)
        self.assertTrue(report['verdict'])
        self.assertLessEqual(max(report['residuals'].values()), 1e-8)
        with open(witness_path, encoding='utf-8') as f:
            witness = json.load(f)
        self.assertEqual(len(witness['U1']), 4)
        self.assertEqual(len(witness['U2']), 8)

    def test_equiv_identical_files_gives_identity(self):
        code, out = _run(['equiv', self.instance, self.explicit, self.explicit])
        self.assertEqual(code, 0)
        witness = json.loads(out)['witness']
        for name, size in (('U1', 4), ('U2', 8)):
            for i, row in enumerate(witness[name]):
                for j, (re, im) in enumerate(row):
                    self.assertAlmostEqual(re, 1.0 if i == j else 0.0, delta=1e-9)
                    self.assertAlmostEqual(im, 0.0, delta=1e-9)
            self.assertEqual(len(witness[name]), size)

    def test_equiv_rejects_representation_of_other_spaces(self):
        rep = os.path.join(self.tmp, 'scalar_rep.json')
        scalar = os.path.join(self.tmp, 'scalar.json')
        with open(scalar, 'w', encoding='utf-8') as f:
            json.dump({'n': 1, 'k': 1, 'h1_dim': 1, 'h2_dim': 1,
                       'phi': {'kind': 'images', 'images': [[[[1.0, 0.0]]]]},
                       'Phi': [[[[1.0, 0.0]]]]}, f)
        self.assertEqual(_run(['dilate', scalar, '--out', rep])[0], 0)
        code, out = _run(['equiv', self.instance, rep, self.explicit])
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)['error']['field'], 'representation A.n')


class TestGen(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = self._tmp.name

    def tearDown(self):
        self._tmp.cleanup()

    def _gen(self, name, *extra):
        path = os.path.join(self.tmp, name)
        code, _ = _run(['gen', '--n', '2', '--k', '1', '--h1', '2', '--h2', '4', '--r', '1',
                        '--seed', '7', '--out', path, *extra])
        return code, path

    def test_generated_instance_checks_and_dilates(self):
        code, path = self._gen('g.json')
        self.assertEqual(code, 0)
        self.assertEqual(_run(['check', path])[0], 0)
        code, out = _run(['dilate', path, '--out', os.path.join(self.tmp, 'rep.json')])
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)['dimensions']['k1_dim'], 2)

    def test_same_seed_is_byte_identical(self):
        _, first = self._gen('a.json')
        _, second = self._gen('b.json')
        with open(first, 'rb') as f1, open(second, 'rb') as f2:
            self.assertEqual(f1.read(), f2.read())

    def test_defaults_come_from_config(self):
        config = os.path.join(self.tmp, 'dilator.yaml')
        with open(config, 'w', encoding='utf-8') as f:
            f.write('gen:\n  n: 1\n  h1: 1\n  h2: 2\n')
        out = os.path.join(self.tmp, 'cfg.json')
        code, _ = _run(['--config', config, 'gen', '--out', out])
        self.assertEqual(code, 0)
        with open(out, encoding='utf-8') as f:
            data = json.load(f)
        self.assertEqual((data['n'], data['h1_dim'], data['h2_dim']), (1, 1, 2))


class TestParser(unittest.TestCase):
    def test_global_flags(self):
        args = cli.build_parser().parse_args(
            ['--atol', '1e-6', '--human', 'equiv', 'i.json', 'a.json', 'b.json'])
        self.assertEqual(args.atol, 1e-6)
        self.assertTrue(args.human)
        self.assertEqual((args.rep_a, args.rep_b), ('a.json', 'b.json'))
        self.assertIsNone(args.out)

    def test_config_overrides(self):
        args = cli.build_parser().parse_args(['--rank-rtol', '1e-8', 'gen', '--seed', '3',
                                              '--out', 'x.json'])
        config = cli._load_config(args)
        self.assertEqual(config.get('tolerance')['rank_rtol'], 1e-8)
        self.assertEqual(config.get('gen')['seed'], 3)
        self.assertEqual(config.get('gen')['n'], 2)


if __name__ == '__main__':
    unittest.main()
