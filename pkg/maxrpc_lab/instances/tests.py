import json
import math
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
import numpy as np

from csp.oracle import enumerate_solutions
from csp.relations import Atom
from csp.search import verify_solution
from instances.documents import CONFLICTS, PREDICATE, SUPPORTS
from instances.exceptions import InstanceFormatError, InstanceParseError, UnsupportedFeatureError
from instances.expressions import Ref, bind, parse_expression, to_atoms
from instances.generators import gen_geometric, gen_model_b, gen_queens, model_b_like, parse_model_b_name
from instances.loaders import dump_document, load_source, parse_generator_spec, parse_text, read_document
from instances.native import parse_native, serialize_native
from instances.xcsp import parse_xcsp


XCSP_HEADER = """<?xml version="1.0" encoding="UTF-8"?>
<instance>
  <presentation name="{name}" format="XCSP 2.1"/>
  <domains nbDomains="1">
    <domain name="D0" nbValues="5">0..4</domain>
  </domains>
  <variables nbVariables="3">
    <variable name="V0" domain="D0"/>
    <variable name="V1" domain="D0"/>
    <variable name="V2" domain="D0"/>
  </variables>
"""

XCSP_CONFLICTS = XCSP_HEADER.format(name="tiny-ext") + """
  <relations nbRelations="1">
    <relation name="R0" arity="2" nbTuples="2" semantics="conflicts">0 0|7 7</relation>
  </relations>
  <constraints nbConstraints="1">
    <constraint name="C0" arity="2" scope="V0 V1" reference="R0"/>
  </constraints>
</instance>
"""

XCSP_PREDICATE = XCSP_HEADER.format(name="tiny-rlfap") + """
  <predicates nbPredicates="1">
    <predicate name="P0">
      <parameters>int X0 int X1 int X2</parameters>
      <expression><functional>gt(abs(sub(X0,X1)),X2)</functional></expression>
    </predicate>
  </predicates>
  <constraints nbConstraints="1">
    <constraint name="C0" arity="2" scope="V0 V1" reference="P0">
      <parameters>V0 V1 3</parameters>
    </constraint>
  </constraints>
</instance>
"""

XCSP_TERNARY = XCSP_HEADER.format(name="tiny-ternary") + """
  <relations nbRelations="1">
    <relation name="R0" arity="3" nbTuples="1" semantics="supports">0 0 0</relation>
  </relations>
  <constraints nbConstraints="1">
    <constraint name="C0" arity="3" scope="V0 V1 V2" reference="R0"/>
  </constraints>
</instance>
"""

XCSP_GLOBAL = XCSP_HEADER.format(name="tiny-global") + """
  <constraints nbConstraints="1">
    <constraint name="C0" arity="2" scope="V0 V1" reference="global:allDifferent"/>
  </constraints>
</instance>
"""


class NativeFormatTest(SimpleTestCase):
    def test_parse_extensional_and_predicate_lines(self):
        doc = parse_native(
            "# two variables\n"
            "instance tiny\n"
            "meta class=toy\n"
            "domain x 0..2\n"
            "domain y 0 1 2\n"
            "domain z -1 3\n"
            "conflicts x y 0:0 1:1\n"
            "predicate x z absgt:1 ne:0\n"
        )
        self.assertEqual(doc.name, "tiny")
        self.assertEqual(doc.variables["z"], (-1, 3))
        self.assertEqual(doc.constraints[0].tuples, ((0, 0), (1, 1)))
        self.assertEqual(doc.constraints[1].atoms, (Atom("gt", 1, absolute=True), Atom("ne", 0)))
        self.assertEqual(doc.class_tag, "toy")

    def test_table_references(self):
        doc = parse_native(
            "domain a 0 1\ndomain b 0 1\ndomain c 0 1\n"
            "table neq 0:1 1:0\n"
            "supports a b @neq\n"
            "supports b c @neq\n"
        )
        self.assertEqual(doc.constraints[0].tuples, doc.constraints[1].tuples)
        self.assertEqual(doc.constraints[0].kind, SUPPORTS)

    def test_negative_tuple_values(self):
        doc = parse_native("domain a -2 -1\ndomain b -2 0\nsupports a b -2:0 -1:-2\n")
        self.assertEqual(doc.constraints[0].tuples, ((-2, 0), (-1, -2)))

    def test_errors_carry_line_numbers(self):
        with self.assertRaises(InstanceParseError) as ctx:
            parse_native("domain x 0 1\ndomain y 0 1\nconflicts x y 0-0\n")
        self.assertEqual(ctx.exception.location, "line 3")
        with self.assertRaises(InstanceParseError):
            parse_native("domian x 0 1\n")
        with self.assertRaises(InstanceParseError):
            parse_native("domain x 0 1\ndomain y 0 1\npredicate x y between:3\n")

    def test_validation_rejects_bad_documents(self):
        with self.assertRaises(InstanceFormatError):
            parse_native("domain x 0 1\nconflicts x y 0:0\n")
        with self.assertRaises(InstanceFormatError):
            parse_native("domain x 0 1\ndomain y 0 1\nconflicts x y 0:0\nsupports y x 1:1\n")
        with self.assertRaises(InstanceFormatError):
            parse_native("domain x 0 1\ndomain y 0 1\nconflicts x y 0:5\n")

    def test_round_trip_generated_documents(self):
        for doc in (
            gen_model_b(8, 4, 0.6, 0.3, seed=5),
            gen_model_b(6, 3, 0.5, 0.2, seed=2, forced=True),
            gen_geometric(7, 4, 0.6, 0.3, seed=1),
            gen_queens(5),
        ):
            self.assertEqual(parse_native(serialize_native(doc)), doc)

    def test_round_trip_structured_formats(self):
        doc = gen_model_b(6, 3, 0.5, 0.4, seed=9)
        queens = gen_queens(4)
        for fmt in ("json", "yaml"):
            self.assertEqual(parse_text(dump_document(doc, fmt), fmt), doc)
            self.assertEqual(parse_text(dump_document(queens, fmt), fmt), queens)


class StructuredDocumentTest(SimpleTestCase):
    def test_invalid_structures_become_format_errors(self):
        data = {
            "name": "bad",
            "variables": {"x": [0, 1], "y": [0, 1]},
            "constraints": [{"scope": ["x", "w"], "kind": "conflicts", "tuples": [[0, 0]]}],
        }
        with self.assertRaises(InstanceFormatError):
            parse_text(json.dumps(data), "json")

        data["constraints"] = [{"scope": ["x", "y"], "kind": "predicate", "tuples": [[0, 0]]}]
        with self.assertRaises(InstanceFormatError):
            parse_text(json.dumps(data), "json")

    def test_malformed_json_is_a_parse_error(self):
        with self.assertRaises(InstanceParseError):
            parse_text("{not json", "json", location="broken.json")


class XCSPTest(SimpleTestCase):
    def test_conflicts_relation_applies_to_its_pair_only(self):
        doc = parse_xcsp(XCSP_CONFLICTS.encode())
        self.assertEqual(doc.name, "tiny-ext")
        self.assertEqual(len(doc.constraints), 1)
        constraint = doc.constraints[0]
        self.assertEqual(constraint.kind, CONFLICTS)
        # (7, 7) lies outside the domains and is dropped
        self.assertEqual(constraint.tuples, ((0, 0),))
        relation = constraint.relation()
        self.assertFalse(relation.evaluate(0, 0))
        self.assertTrue(relation.evaluate(1, 1))
        self.assertTrue(relation.evaluate(0, 1))

    def test_distance_predicate(self):
        doc = parse_xcsp(XCSP_PREDICATE)
        constraint = doc.constraints[0]
        self.assertEqual(constraint.kind, PREDICATE)
        self.assertEqual(constraint.atoms, (Atom("gt", 3, absolute=True),))
        relation = constraint.relation()
        self.assertTrue(relation.evaluate(0, 4))
        self.assertFalse(relation.evaluate(0, 3))
        self.assertTrue(relation.evaluate(4, 0))

    def test_unsupported_features(self):
        with self.assertRaises(UnsupportedFeatureError) as ctx:
            parse_xcsp(XCSP_TERNARY)
        self.assertIn("R0", ctx.exception.location)
        with self.assertRaises(UnsupportedFeatureError) as ctx:
            parse_xcsp(XCSP_GLOBAL)
        self.assertIn("C0", ctx.exception.location)

    def test_malformed_xml_reports_position(self):
        with self.assertRaises(InstanceParseError) as ctx:
            parse_xcsp("<instance><variables></instance>")
        self.assertTrue(ctx.exception.location.startswith("line 1"))

    def test_read_document_by_extension(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "scen-tiny.xml"
            path.write_text(XCSP_PREDICATE.replace('name="tiny-rlfap"', 'name="?"'))
            doc = read_document(path)
            self.assertEqual(doc.name, "scen-tiny")
            self.assertEqual(doc.meta["format"], "xcsp")
            self.assertEqual(doc.to_network().e, 1)


class ExpressionTest(SimpleTestCase):
    def atoms(self, text):
        return to_atoms(bind(parse_expression(text), {"X": Ref("x"), "Y": Ref("y")}), "x", "y")

    def test_linear_forms_normalize_to_differences(self):
        self.assertEqual(self.atoms("lt(X,Y)"), (Atom("lt", 0),))
        self.assertEqual(self.atoms("eq(Y,add(X,2))"), (Atom("eq", -2),))
        self.assertEqual(self.atoms("gt(sub(Y,X),1)"), (Atom("lt", -1),))
        self.assertEqual(self.atoms("not(eq(X,Y))"), (Atom("ne", 0),))

    def test_conjunctions(self):
        atoms = self.atoms("and(ne(X,Y),ne(abs(sub(Y,X)),2))")
        self.assertEqual(atoms, (Atom("ne", 0), Atom("ne", 2, absolute=True)))

    def test_unsupported_expressions(self):
        for text in ("or(eq(X,Y),lt(X,Y))", "eq(mul(2,X),Y)", "lt(X,3)", "eq(abs(X),Y)"):
            with self.assertRaises(UnsupportedFeatureError, msg=text):
                self.atoms(text)

    def test_syntax_errors(self):
        for text in ("eq(X,Y", "eq(X;Y)", "eq(X,Y))"):
            with self.assertRaises(InstanceParseError, msg=text):
                parse_expression(text)


class GeneratorTest(SimpleTestCase):
    def test_model_b_counts(self):
        doc = gen_model_b(10, 5, 0.5, 0.4, seed=1)
        self.assertEqual(len(doc.constraints), 22)
        self.assertTrue(all(len(c.tuples) == 10 for c in doc.constraints))
        self.assertEqual(len({frozenset(c.scope) for c in doc.constraints}), 22)

    def test_model_b_is_deterministic_in_seed(self):
        self.assertEqual(gen_model_b(12, 4, 0.4, 0.3, seed=7), gen_model_b(12, 4, 0.4, 0.3, seed=7))
        self.assertNotEqual(gen_model_b(12, 4, 0.4, 0.3, seed=7), gen_model_b(12, 4, 0.4, 0.3, seed=8))

    def test_zero_tightness_gives_empty_conflict_sets(self):
        doc = gen_model_b(6, 3, 0.5, 0.0, seed=3)
        self.assertTrue(doc.constraints)
        self.assertTrue(all(c.tuples == () for c in doc.constraints))

    def test_parameter_ranges(self):
        for args in ((10, 5, 0.0, 0.4), (10, 5, 1.5, 0.4), (10, 5, 0.5, 1.0), (1, 5, 0.5, 0.4)):
            with self.assertRaises(ValueError, msg=args):
                gen_model_b(*args)
        with self.assertRaises(ValueError):
            gen_geometric(5, 3, 0.0, 0.3)
        with self.assertRaises(ValueError):
            gen_queens(0)

    def test_forced_instances_keep_the_planted_solution(self):
        for seed in range(5):
            for doc in (
                gen_model_b(8, 3, 1.0, 0.6, seed=seed, forced=True),
                gen_geometric(8, 3, 0.8, 0.6, seed=seed, forced=True),
            ):
                planted = [int(v) for v in doc.meta["planted"].split(",")]
                self.assertTrue(verify_solution(doc.to_network(), planted))

    def test_geometric_distance_extremes(self):
        complete = gen_geometric(6, 3, math.sqrt(2) + 0.1, 0.2, seed=4)
        self.assertEqual(len(complete.constraints), 15)
        self.assertEqual(gen_geometric(6, 3, 1e-9, 0.2, seed=4).constraints, [])
        self.assertEqual(gen_geometric(9, 3, 0.4, 0.2, seed=2), gen_geometric(9, 3, 0.4, 0.2, seed=2))

    def test_geometric_joins_strictly_closer_points(self):
        points = np.random.default_rng(3).random((2, 2))
        gap = float(np.sqrt(((points[0] - points[1]) ** 2).sum()))
        self.assertEqual(gen_geometric(2, 3, gap, 0.2, seed=3).constraints, [])
        self.assertEqual(len(gen_geometric(2, 3, gap * 1.001, 0.2, seed=3).constraints), 1)

    def test_queens(self):
        self.assertEqual(len(enumerate_solutions(gen_queens(1).to_network())), 1)
        self.assertEqual(enumerate_solutions(gen_queens(3).to_network()), [])
        self.assertEqual(len(enumerate_solutions(gen_queens(5).to_network())), 10)
        self.assertEqual(len(gen_queens(6).constraints), 15)

    def test_model_b_names(self):
        params = parse_model_b_name("rand-2-40-8-753-100-75_ext")
        self.assertEqual((params["n"], params["d"], params["e"], params["index"]), (40, 8, 753, 75))
        self.assertAlmostEqual(params["p2"], 0.1)
        doc = model_b_like("rand-2-10-4-20-250-3")
        self.assertEqual(len(doc.constraints), 20)
        self.assertTrue(all(len(c.tuples) == 4 for c in doc.constraints))
        self.assertEqual(doc.meta["seed"], "3")
        with self.assertRaises(ValueError):
            parse_model_b_name("queens-8")

    def test_generator_specs(self):
        doc = parse_generator_spec("gen:model-b:n=10,d=5,p1=0.5,p2=0.4,seed=1")
        self.assertEqual(doc, gen_model_b(10, 5, 0.5, 0.4, seed=1))
        self.assertEqual(load_source("gen:queens:n=4"), gen_queens(4))
        with self.assertRaises(InstanceFormatError):
            parse_generator_spec("gen:model-z:n=3")
        with self.assertRaises(InstanceFormatError):
            parse_generator_spec("gen:queens:n=4,colour=red")


class GenCommandTest(SimpleTestCase):
    def test_writes_native_to_stdout(self):
        out = StringIO()
        call_command("gen", "queens", "--n", "4", stdout=out)
        self.assertEqual(parse_native(out.getvalue()), gen_queens(4))

    def test_writes_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "b.yaml"
            out = StringIO()
            call_command(
                "gen", "model-b", "--n", "8", "--d", "3", "--seed", "4", "--format", "yaml", "--out", str(path), stdout=out
            )
            self.assertIn("Wrote", out.getvalue())
            self.assertEqual(read_document(path).constraints, gen_model_b(8, 3, 0.5, 0.4, seed=4).constraints)

    def test_bad_parameters(self):
        with self.assertRaises(CommandError):
            call_command("gen", "model-b", "--p2", "1.5", stdout=StringIO())
        with self.assertRaises(CommandError):
            call_command("gen", "geometric", "--like", "rand-2-10-4-20-250-3", stdout=StringIO())
