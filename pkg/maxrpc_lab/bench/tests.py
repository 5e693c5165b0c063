import tempfile
from io import StringIO
from pathlib import Path

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from bench.checks import MISMATCH, OK, deletion_parity, fixpoint_check, inclusion_chain, run_acceptance
from bench.exceptions import ManifestError
from bench.management.commands.oracle_check import Command as OracleCheckCommand
from bench.manifest import AlgorithmEntry, load_manifest, manifest_from_data, manifest_from_options
from bench.reports import AGGREGATE, COLUMNS, ERROR, Report, ReportRow, emit, parse_csv
from bench.runner import INLINE, build_jobs, run_job, run_preprocess, run_search
from bench.tasks import run_bench_job
from bench.utils import class_tag, expand_sources, seed_generator_spec
from csp.algorithms import algorithm_config
from csp.session import Session
from csp.tests.utils import pc_gap
from instances.generators import gen_model_b, gen_queens, random_suite


HEADER = ",".join(COLUMNS) + "\n"


def manifest(sources, algorithms, **options):
    return manifest_from_data({"sources": sources, "algorithms": algorithms, **options})


class ReportTest(SimpleTestCase):
    def setUp(self):
        self.rows = [
            ReportRow("queens-8", "maxrpc3", "SAT", t=0.25, n=12, cc=3400, bumps=2, class_tag="queens"),
            ReportRow("queens-9", "maxrpc3", "UNSAT", t=0.75, n=30, cc=5000, bumps=7, class_tag="queens", note="a, \"quoted\" note"),
            ReportRow("broken", "maxrpc3", ERROR, note="InstanceParseError: line 2: bad"),
        ]

    def test_empty_report_is_header_only(self):
        self.assertEqual(emit(Report(), "csv").decode(), HEADER)
        markdown = emit(Report(), "markdown").decode().splitlines()
        self.assertEqual(len(markdown), 2)
        self.assertTrue(markdown[0].startswith("| instance | algorithm | verdict | t | n | cc | bumps"))

    def test_one_row_is_one_line(self):
        text = emit(Report.from_rows(self.rows[:1]), "csv").decode()
        lines = text.splitlines()
        # one data line followed by its class aggregate
        self.assertEqual(lines[1], "queens-8,maxrpc3,SAT,0.250000,12,3400,2,queens,0,,")
        self.assertEqual(len(lines), 3)

    def test_aggregates_follow_rows(self):
        report = Report.from_rows(self.rows)
        self.assertEqual(len(report.aggregates), 1)
        total = report.aggregates[0]
        self.assertEqual(total.verdict, AGGREGATE)
        self.assertEqual((total.n, total.cc, total.bumps), (42, 8400, 9))
        self.assertEqual(total.t, 0.5)
        self.assertEqual(total.note, "2 runs")
        self.assertEqual(report.all_rows()[-1], total)
        self.assertEqual(len(report.errors), 1)

    def test_csv_reparses_to_the_same_rows(self):
        report = Report.from_rows(self.rows)
        again = parse_csv(emit(report, "csv"))
        self.assertEqual(again.rows, report.rows)
        self.assertEqual(again.aggregates, report.aggregates)
        self.assertEqual(emit(again, "csv"), emit(report, "csv"))
        with self.assertRaises(ValueError):
            parse_csv("a,b\n1,2\n")

    def test_markdown(self):
        report = Report.from_rows([ReportRow("a|b", "ac3rm", "SAT", class_tag="x")], title="demo")
        lines = emit(report, "markdown").decode().splitlines()
        self.assertEqual(lines[0], "### demo")
        self.assertIn("| a\\|b | ac3rm | SAT |", lines[4])
        self.assertTrue(lines[5].startswith("| **[x]** | ac3rm | AGGREGATE |"))
        with self.assertRaises(ValueError):
            emit(report, "html")


class UtilsTest(SimpleTestCase):
    def test_seeding_generator_specs(self):
        self.assertEqual(seed_generator_spec("gen:model-b:n=5,d=3,p1=0.5,p2=0.3", 4), "gen:model-b:n=5,d=3,p1=0.5,p2=0.3,seed=4")
        self.assertEqual(seed_generator_spec("gen:geometric:n=5,seed=1", 4), "gen:geometric:n=5,seed=1")
        self.assertEqual(seed_generator_spec("gen:queens:n=8", 4), "gen:queens:n=8")

    def test_expand_sources(self):
        with tempfile.TemporaryDirectory() as tmp:
            for name in ("b.csp", "a.csp", "c.json"):
                Path(tmp, name).write_text("")
            sources = expand_sources([f"{tmp}/*.csp", "gen:queens:n=4", f"{tmp}/*.xml"])
        self.assertEqual(sources, [f"{tmp}/a.csp", f"{tmp}/b.csp", "gen:queens:n=4", f"{tmp}/*.xml"])

    def test_class_tags(self):
        self.assertEqual(class_tag(gen_queens(5)), "queens")
        self.assertEqual(class_tag(gen_model_b(5, 3, 0.5, 0.3, forced=True)), "modelB-forced")
        self.assertEqual(class_tag(None, "data/rand-2-30-15-306-230-7.xml"), "modelB")
        self.assertEqual(class_tag(None, "data/scen11.xml"), "rlfap")
        self.assertEqual(class_tag(None, "data/ehi-85-297-1.xml"), "ehi")


class ManifestTest(SimpleTestCase):
    def test_algorithm_entries(self):
        loaded = manifest(["gen:queens:n=4"], ["maxrpc3", {"id": "maxrpc3rm", "case2_ordering": "dom"}, {"id": "maxrpc3", "light": True}])
        labels = [entry.label for entry in loaded.algorithms]
        self.assertEqual(labels, ["maxrpc3", "maxrpc3rm[case2_ordering=dom]", "lmaxrpc3"])
        self.assertEqual(loaded.algorithms[1].config.case2_ordering, "dom")
        entry = loaded.algorithms[1]
        self.assertEqual(AlgorithmEntry.from_data(entry.as_data()), entry)

    def test_invalid_manifests(self):
        for data in (
            {"sources": ["gen:queens:n=4"], "algorithms": ["maxrpc4"]},
            {"sources": ["gen:queens:n=4"], "algorithms": ["maxrpc3", "maxrpc3"]},
            {"sources": ["gen:model-c:n=4"], "algorithms": ["maxrpc3"]},
            {"sources": [], "algorithms": ["maxrpc3"]},
            {"sources": ["gen:queens:n=4"], "algorithms": []},
            {"sources": ["gen:queens:n=4"], "algorithms": ["ac3rm"], "repetitions": 0},
            {"sources": ["gen:queens:n=4"], "algorithms": [{"id": "ac3rm", "case1_ordering": "fifo"}]},
        ):
            with self.assertRaises(ManifestError, msg=str(data)):
                manifest_from_data(data)

    def test_load_yaml_manifest(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "small-batch.yaml")
            path.write_text(
                "mode: search\n"
                "sources: ['gen:queens:n=6']\n"
                "algorithms: [lmaxrpc3rm, lmaxrpcrm]\n"
                "branching: d_way\n"
                "repetitions: 2\n"
                "seed: 3\n"
            )
            loaded = load_manifest(path)
        self.assertEqual(loaded.name, "small-batch")
        self.assertEqual(loaded.mode, "search")
        self.assertEqual(loaded.search_options()["branching"], "d_way")
        self.assertEqual((loaded.repetitions, loaded.seed), (2, 3))
        with self.assertRaises(ManifestError):
            load_manifest(Path("/nonexistent/manifest.yaml"))

    def test_shipped_manifests_load(self):
        shipped = Path(__file__).resolve().parent / "manifests"
        preprocess = load_manifest(shipped / "preprocess.yaml")
        self.assertEqual(preprocess.mode, "preprocess")
        self.assertEqual(len(preprocess.algorithms), 8)
        search = load_manifest(shipped / "search.yaml")
        self.assertEqual(search.mode, "search")
        self.assertIn("lmaxrpc3rm+h", [entry.label for entry in search.algorithms])

    def test_queue_heuristic_follows_the_algorithm_id(self):
        options = {"instances": ["gen:queens:n=5"], "algorithms": ["lmaxrpc3rm", "lmaxrpc3rm+h"]}
        built = manifest_from_options(options, "preprocess")
        self.assertEqual([entry.config.queue_heuristic for entry in built.algorithms], ["fifo", "dom_wdeg"])
        built = manifest_from_options({**options, "algorithms": ["lmaxrpc3rm"], "queue_heuristic": "dom"}, "preprocess")
        self.assertEqual(built.algorithms[0].config.queue_heuristic, "dom")
        self.assertNotIn("DEFAULT_QUEUE_HEURISTIC", settings.MAXRPC_LAB)

    def test_options_layer_over_defaults(self):
        options = {"instances": ["gen:queens:n=5"], "algorithms": ["maxrpc3"], "light": True, "case1": "dom", "node_limit": 50}
        built = manifest_from_options(options, "search")
        self.assertEqual(built.algorithms[0].config.label, "lmaxrpc3+h")
        self.assertEqual(built.node_limit, 50)
        self.assertEqual(built.branching, "binary")
        self.assertEqual(built.var_heuristic, "dom_wdeg")
        with self.assertRaises(ManifestError):
            manifest_from_options({"instances": []}, "search")
        with self.assertRaises(ManifestError):
            manifest_from_options({**options, "node_limit": 0}, "search")
        with self.assertRaises(ManifestError):
            manifest_from_options({"instances": ["x.csp"], "algorithms": ["nope"]}, "preprocess")


class RunnerTest(SimpleTestCase):
    def test_preprocess_rows_and_aggregates(self):
        report = run_preprocess(manifest(["gen:queens:n=4"], ["maxrpc3", "lmaxrpc3"]), executor=INLINE)
        self.assertEqual([row.algorithm for row in report.rows], ["maxrpc3", "lmaxrpc3"])
        self.assertEqual([row.verdict for row in report.rows], ["CONSISTENT"] * 2)
        self.assertEqual({row.class_tag for row in report.rows}, {"queens"})
        self.assertEqual(len(report.aggregates), 2)
        self.assertTrue(all(row.cc > 0 and row.n == 0 for row in report.rows))

    def test_oracle_check_column(self):
        sources = ["gen:queens:n=5", "gen:model-b:n=8,d=4,p1=0.6,p2=0.4", "gen:geometric:n=8,d=4,dist=0.6,p2=0.45"]
        report = run_preprocess(
            manifest(sources, ["maxrpc3", "maxrpc3rm", "lmaxrpc3rm", "maxrpc2", "ac3rm"], oracle_check=True, seed=2),
            executor=INLINE,
        )
        self.assertEqual(len(report.rows), 15)
        self.assertEqual({row.check for row in report.rows}, {OK})
        by_instance = {}
        for row in report.rows:
            by_instance.setdefault(row.instance, {})[row.algorithm] = row
        for rows in by_instance.values():
            self.assertEqual(rows["maxrpc3"].deletions, rows["maxrpc3rm"].deletions)
            self.assertEqual(rows["maxrpc3"].verdict, rows["maxrpc3rm"].verdict)
            self.assertEqual(rows["maxrpc2"].note, "maxRPC2 emulation")

    def test_fixpoint_check_flags_wrong_domains(self):
        network = gen_queens(4).to_network()
        session = Session(network, algorithm_config("maxrpc3"))
        consistent = session.preprocess()
        self.assertEqual(fixpoint_check(network, session.config, consistent, session.value_sets()), OK)
        wrong = [set(range(4))] * 3 + [{0}]
        self.assertEqual(fixpoint_check(network, session.config, True, wrong), MISMATCH)

    def test_failures_are_isolated(self):
        report = run_preprocess(manifest(["/nonexistent/missing.csp", "gen:queens:n=4"], ["maxrpc3rm"]), executor=INLINE)
        self.assertEqual([row.verdict for row in report.rows], [ERROR, "CONSISTENT"])
        self.assertIn("missing.csp", report.rows[0].instance)
        self.assertTrue(report.rows[0].note)
        self.assertEqual(len(report.aggregates), 1)

    def test_repetitions_report_the_median(self):
        report = run_preprocess(manifest(["gen:queens:n=6"], ["maxrpc3rm"], repetitions=3), executor=INLINE)
        row = report.rows[0]
        self.assertEqual(row.note, "median of 3 runs")
        single = run_preprocess(manifest(["gen:queens:n=6"], ["maxrpc3rm"]), executor=INLINE).rows[0]
        self.assertEqual((row.cc, row.deletions), (single.cc, single.deletions))

    def test_search_rows(self):
        report = run_search(
            manifest(["gen:queens:n=8", "gen:model-b:n=10,d=4,p1=0.5,p2=0.45,seed=3"], ["lmaxrpc3rm", "lmaxrpcrm", "ac3rm"], oracle_check=True),
            executor=INLINE,
        )
        rows = {(row.instance, row.algorithm): row for row in report.rows}
        for instance in {row.instance for row in report.rows}:
            fast, emulated = rows[(instance, "lmaxrpc3rm")], rows[(instance, "lmaxrpcrm")]
            self.assertEqual(fast.n, emulated.n)
            self.assertEqual(fast.verdict, emulated.verdict)
            self.assertIn(fast.verdict, ("SAT", "UNSAT"))
        self.assertEqual({row.check for row in report.rows}, {OK})
        self.assertEqual(rows[("queens-8", "ac3rm")].verdict, "SAT")

    def test_limit_rows_are_flagged(self):
        report = run_search(
            manifest(["gen:queens:n=8"], ["maxrpc3rm"], search_mode="count_all", node_limit=2),
            executor=INLINE,
        )
        row = report.rows[0]
        self.assertEqual(row.verdict, "LIMIT")
        self.assertEqual(row.n, 2)
        self.assertIn("limit reached", row.note)

    def test_task_matches_inline_run(self):
        jobs = build_jobs(manifest(["gen:queens:n=5"], ["maxrpc3"]), "preprocess")
        from_task = run_bench_job.apply(args=[jobs[0]]).get()
        inline = run_job(jobs[0])
        self.assertEqual({**from_task, "t": None}, {**inline, "t": None})


class ChecksTest(SimpleTestCase):
    def test_full_variants_delete_the_same_values_after_every_decision(self):
        networks = [doc.to_network() for doc in random_suite(40, seed=12)]
        check = deletion_parity(networks, steps=80, seed=12)
        self.assertTrue(check.passed, check.failures)
        self.assertGreater(check.checked, len(networks))
        queens = gen_queens(6).to_network()
        check = deletion_parity([queens], names=("maxrpc3", "maxrpc3rm", "maxrpc2", "maxrpcrm"), steps=200, seed=3)
        self.assertTrue(check.passed, check.failures)

    def test_deletion_parity_flags_differing_propagators(self):
        check = deletion_parity([pc_gap()], names=("maxrpc3", "ac3rm"))
        self.assertFalse(check.passed)

    def test_inclusion_chain_uses_the_configured_light_ids(self):
        networks = [doc.to_network() for doc in random_suite(60, seed=5)]
        check = inclusion_chain(networks)
        self.assertTrue(check.passed, check.failures)
        self.assertEqual(check.checked, 60)


class CommandTest(SimpleTestCase):
    def test_preprocess_to_stdout(self):
        out = StringIO()
        call_command("preprocess", "gen:queens:n=4", algorithms=["maxrpc3", "ac3rm"], stdout=out)
        report = parse_csv(out.getvalue())
        self.assertEqual([row.algorithm for row in report.rows], ["maxrpc3", "ac3rm"])

    def test_solve_to_file(self):
        out = StringIO()
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp, "report.md")
            call_command(
                "solve", "gen:queens:n=6", algorithms=["lmaxrpc3rm+h"], format="markdown", out=str(path), stdout=out
            )
            text = path.read_text()
        self.assertIn("Wrote 1 rows (0 errors)", out.getvalue())
        self.assertIn("| queens-6 | lmaxrpc3rm+h | SAT |", text)

    def test_harness_errors(self):
        with self.assertRaises(CommandError):
            call_command("preprocess", "gen:queens:n=4", algorithms=["maxrpc9"], stdout=StringIO())
        with self.assertRaises(CommandError):
            call_command("solve", stdout=StringIO())

    def test_count(self):
        out = StringIO()
        call_command("count", "gen:queens:n=5", verify=True, stdout=out)
        self.assertIn("queens-5: 10 solutions", out.getvalue())
        self.assertIn("Enumeration agrees", out.getvalue())
        with self.assertRaises(CommandError):
            call_command("count", "gen:queens:n=6", guard=1, stdout=StringIO())

    def test_oracle_check(self):
        out = StringIO()
        call_command("oracle_check", instances=25, seed=4, stdout=out)
        for name in ("oracle_equivalence", "inclusion_chain", "idempotence", "shortcut_neutrality", "wipeout_sanity"):
            self.assertIn(f"{name}: ", out.getvalue())

    def test_acceptance_checks_pass(self):
        checks = run_acceptance(30, seed=9)
        self.assertTrue(all(check.passed for check in checks), [c.failures for c in checks if not c.passed])

    def test_oracle_check_help_names_the_verb(self):
        self.assertIn("oracle-check", OracleCheckCommand.help)
