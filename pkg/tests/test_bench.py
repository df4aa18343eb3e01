import json

import pytest

from lakebench.bench import (
    BenchPlan,
    BenchReport,
    DblpSource,
    ScaleResult,
    SubsampleSource,
    SuiteTiming,
    SyntheticSource,
    from_csv,
    from_json,
    read_report,
    run_bench,
    to_csv,
    to_json,
    trend_check,
    render_report,
)
from lakebench.engine import IndexConfig
from lakebench.errors import ConfigError
from lakebench.workload import QuerySuite


class FakeClock:
    def __init__(self, values):
        self.values = list(values)
        self.calls = 0

    def __call__(self):
        self.calls += 1
        return self.values.pop(0)


class StaticSource:
    """Serves one fixed node/edge pair at every scale."""

    def __init__(self, nodes, edges):
        self.nodes, self.edges = nodes, edges

    def materialize(self, scale):
        return self.nodes, self.edges, scale


@pytest.fixture
def tiny_source(tmp_path):
    nodes = tmp_path / "node.csv"
    edges = tmp_path / "edge.csv"
    nodes.write_text("0,a\n1,b\n", encoding="utf-8")
    edges.write_text("0,1\n", encoding="utf-8")
    return StaticSource(nodes, edges)


def two_query_suite():
    return QuerySuite(name="pair", queries=[["a"], ["b"]])


def test_plan_validation():
    suite = two_query_suite()
    BenchPlan(suites=[suite], scales=(10, 20))
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite], scales=())
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite], scales=(20, 10))
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite], scales=(10, 10))
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite], scales=(0, 10))
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite], scales=(10,), repetitions=0)
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite], scales=(10,), warmup_runs=-1)
    with pytest.raises(ConfigError):
        BenchPlan(suites=[suite, two_query_suite()], scales=(10,))
    with pytest.raises(ConfigError):
        BenchPlan(suites=[QuerySuite(name="_bad", queries=[["a"]])], scales=(10,))
    assert BenchPlan(suites=[suite]).scales == (2000, 4000, 8000, 16000, 32000, 64000)


def test_fake_clock_phases_and_medians(tiny_source):
    plan = BenchPlan(
        suites=[two_query_suite()],
        scales=(5,),
        index_config=IndexConfig(radius=1),
        repetitions=3,
        warmup_runs=0,
    )
    clock = FakeClock(
        [0, 7, 10, 30]  # graph: 7, index: 20
        + [100, 105, 200, 203]  # rep 1: q0=5, q1=3
        + [300, 301, 400, 410]  # rep 2: q0=1, q1=10
        + [500, 509, 600, 601]  # rep 3: q0=9, q1=1
    )
    report = run_bench(plan, tiny_source, clock=clock)
    assert clock.values == []  # every scripted instant consumed
    (scale,) = report.scales
    assert scale.graph_build_ns == 7
    assert scale.index_build_ns == 20
    (suite,) = scale.suites
    assert suite.per_query_ns == (5, 3)  # medians of {5,1,9} and {3,10,1}
    assert suite.total_ns == 8
    assert suite.name == "pair"
    assert suite.mean_query_len == 1.0


def test_build_phase_advances_never_leak_into_queries(tiny_source):
    plan = BenchPlan(
        suites=[QuerySuite(name="one", queries=[["a"]])],
        scales=(5,),
        index_config=IndexConfig(radius=1),
        repetitions=1,
        warmup_runs=0,
    )
    slow_build = FakeClock([0, 10**12, 10**12, 9 * 10**12, 100, 104])
    fast_build = FakeClock([0, 1, 1, 2, 100, 104])
    slow = run_bench(plan, tiny_source, clock=slow_build)
    fast = run_bench(plan, tiny_source, clock=fast_build)
    assert slow.scales[0].suites[0].per_query_ns == (4,)
    assert fast.scales[0].suites[0].per_query_ns == (4,)
    assert slow.scales[0].graph_build_ns == 10**12


def test_warmup_runs_make_no_clock_calls(tiny_source):
    plan = BenchPlan(
        suites=[QuerySuite(name="one", queries=[["a"]])],
        scales=(5,),
        index_config=IndexConfig(radius=1),
        repetitions=1,
        warmup_runs=3,
    )
    clock = FakeClock([0, 1, 2, 3, 50, 58])  # exactly 4 + 2*1 instants
    report = run_bench(plan, tiny_source, clock=clock)
    assert clock.calls == 6
    assert report.scales[0].suites[0].per_query_ns == (8,)


def test_empty_suite_list_reports_builds_only(tiny_source):
    plan = BenchPlan(suites=[], scales=(5,), index_config=IndexConfig(radius=1))
    clock = FakeClock([0, 1, 2, 4])
    report = run_bench(plan, tiny_source, clock=clock)
    assert report.scales[0].suites == ()
    assert report.scales[0].index_build_ns == 2


def test_synthetic_source_structural_two_scales(tmp_path):
    source = SyntheticSource(
        tmp_path / "work", vocab_size=50, keywords_per_node=3, mean_degree=2.0, seed=7
    )
    suite = QuerySuite(name="kw", queries=[["kw0"], ["kw1"]])
    plan = BenchPlan(
        suites=[suite], scales=(100, 200), index_config=IndexConfig(radius=1),
        repetitions=2, warmup_runs=1,
    )
    report = run_bench(plan, source)
    assert [r.scale for r in report.scales] == [100, 200]
    assert [r.effective_scale for r in report.scales] == [100, 200]
    for r in report.scales:
        assert len(r.suites) == 1
        assert len(r.suites[0].per_query_ns) == 2
        assert r.graph_build_ns > 0
        assert r.index_build_ns > 0
        assert r.index_size_bytes > 0
    assert report.warnings == []
    assert "timestamp" in report.environment


def test_synthetic_source_reuses_materialized_files(tmp_path):
    source = SyntheticSource(
        tmp_path, vocab_size=20, keywords_per_node=2, mean_degree=2.0, seed=1
    )
    nodes, _, _ = source.materialize(60)
    first = nodes.stat().st_mtime_ns
    nodes2, _, _ = source.materialize(60)
    assert nodes2 == nodes
    assert nodes.stat().st_mtime_ns == first


def test_subsample_source_clamps_with_warning(tmp_path):
    nodes = tmp_path / "n.csv"
    edges = tmp_path / "e.csv"
    nodes.write_text("".join(f"{i},k{i}\n" for i in range(5)), encoding="utf-8")
    edges.write_text("0,1\n1,2\n", encoding="utf-8")
    source = SubsampleSource(nodes, edges, tmp_path / "work")
    plan = BenchPlan(
        suites=[QuerySuite(name="kw", queries=[["k0"]])],
        scales=(2, 10),
        index_config=IndexConfig(radius=1),
    )
    report = run_bench(plan, source)
    assert len(report.warnings) == 1
    assert "10" in report.warnings[0]
    assert report.scales[1].effective_scale == 5
    assert report.scales[0].effective_scale == 2


def test_dblp_source_effective_scale(tmp_path):
    records = "".join(
        f"<article><author>A{i}</author><title>Paper {i}</title></article>\n"
        for i in range(6)
    )
    xml = tmp_path / "d.xml"
    xml.write_text(f"<dblp>\n{records}</dblp>\n", encoding="utf-8")
    source = DblpSource(xml, tmp_path / "work")
    _, _, eff = source.materialize(4)
    assert eff == 4
    _, _, eff_all = source.materialize(100)
    assert eff_all == 6
    # cached second call gives the same answer without re-ingesting
    _, _, again = source.materialize(100)
    assert again == 6


def sample_report():
    suites = (
        SuiteTiming(name="single", total_ns=10, per_query_ns=(4, 6), mean_query_len=1.0),
        SuiteTiming(name="multi5", total_ns=30, per_query_ns=(14, 16), mean_query_len=5.0),
    )
    scales = [
        ScaleResult(100, 100, 10, 5, 1000, suites),
        ScaleResult(200, 200, 20, 11, 2100, suites),
        ScaleResult(400, 400, 40, 23, 4300, suites),
        ScaleResult(800, 800, 80, 47, 8700, suites),
    ]
    return BenchReport(environment={"host": "x"}, scales=scales, warnings=["w"])


def test_json_round_trip():
    report = sample_report()
    text = to_json(report)
    back = from_json(text)
    assert back.scales == report.scales
    assert back.environment == report.environment
    assert back.warnings == report.warnings
    assert to_json(back) == text


def test_csv_round_trip_preserves_timings():
    report = sample_report()
    text = to_csv(report)
    back = from_csv(text)
    assert to_csv(back) == text
    for orig, loaded in zip(report.scales, back.scales):
        assert loaded.scale == orig.scale
        assert loaded.graph_build_ns == orig.graph_build_ns
        assert loaded.index_build_ns == orig.index_build_ns
        assert [s.per_query_ns for s in loaded.suites] == [
            s.per_query_ns for s in orig.suites
        ]
        assert all(s.mean_query_len is None for s in loaded.suites)
    assert back.environment == {}


def test_csv_row_accounting():
    suites = (SuiteTiming(name="s", total_ns=3, per_query_ns=(1, 2), mean_query_len=1.0),)
    report = BenchReport(
        environment={}, scales=[ScaleResult(10, 10, 1, 2, 3, suites)], warnings=[]
    )
    lines = to_csv(report).splitlines()
    assert lines[0] == "scale,suite,query_index,duration_ns"
    assert lines[1] == "10,_graph_build,,1"
    assert lines[2] == "10,_index_build,,2"
    assert lines[3] == "10,s,0,1"
    assert lines[4] == "10,s,1,2"
    assert len(lines) == 5

    empty = BenchReport(
        environment={}, scales=[ScaleResult(10, 10, 1, 2, 3, ())], warnings=[]
    )
    assert len(to_csv(empty).splitlines()) == 3  # header + build + index


def test_from_csv_rejects_garbage():
    with pytest.raises(ConfigError):
        from_csv("wrong,header\n")
    with pytest.raises(ConfigError):
        from_csv("scale,suite,query_index,duration_ns\n10,s,1,5\n")  # gap in indices
    with pytest.raises(ConfigError):
        from_csv("scale,suite,query_index,duration_ns\n10,s,0,5\n")  # no metric rows


def test_render_report_and_read_back(tmp_path):
    report = sample_report()
    out = tmp_path / "r.json"
    render_report(report, out)
    assert not out.with_name("r.json.tmp").exists()
    back = read_report(out)
    assert back.scales == report.scales
    csv_out = tmp_path / "r.csv"
    render_report(report, csv_out, fmt="csv")
    assert read_report(csv_out).scales[0].graph_build_ns == 10
    with pytest.raises(ConfigError):
        render_report(report, tmp_path / "r.xml", fmt="xml")
    parsed = json.loads(out.read_text())
    assert parsed["scales"][0]["scale"] == 100


def test_run_bench_writes_report_file(tiny_source, tmp_path):
    plan = BenchPlan(
        suites=[QuerySuite(name="one", queries=[["a"]])],
        scales=(5,),
        index_config=IndexConfig(radius=1),
        repetitions=1,
        warmup_runs=0,
    )
    out = tmp_path / "out" / "report.json"
    run_bench(plan, tiny_source, report_path=out)
    assert out.exists()
    assert read_report(out).scales[0].suites[0].name == "one"


def test_suite_total_invariant():
    with pytest.raises(ValueError):
        SuiteTiming(name="s", total_ns=5, per_query_ns=(1, 2), mean_query_len=1.0)


def test_trend_check_exact_doubling():
    report = sample_report()  # builds 10,20,40,80
    trends = trend_check(report)
    ratios = [b["ratio"] for b in trends["build_ratios"]]
    assert ratios == [2.0, 2.0, 2.0]
    assert all(b["deviation_from_2"] == 0.0 for b in trends["build_ratios"])
    assert [(b["from_scale"], b["to_scale"]) for b in trends["build_ratios"]] == [
        (100, 200), (200, 400), (400, 800)
    ]


def test_trend_check_multi_vs_single():
    trends = trend_check(sample_report())
    rows = trends["multi_vs_single"]
    assert len(rows) == 4  # one multi suite at each of 4 scales
    for row in rows:
        assert row["single_suite"] == "single"
        assert row["multi_suite"] == "multi5"
        assert row["ratio"] == 3.0


def test_trend_check_flags_stragglers():
    suites = (
        SuiteTiming(name="s", total_ns=103, per_query_ns=(1, 1, 1, 100), mean_query_len=1.0),
    )
    scales = [
        ScaleResult(100, 100, 1, 1, 1, suites),
        ScaleResult(200, 200, 2, 1, 1, suites),
        ScaleResult(400, 400, 4, 1, 1, suites),
    ]
    trends = trend_check(BenchReport(environment={}, scales=scales, warnings=[]))
    flagged = trends["stragglers"]
    assert len(flagged) == 3  # once per scale
    assert all(f["query_index"] == 3 for f in flagged)
    assert flagged[0]["duration_ns"] == 100
    assert flagged[0]["suite_median_ns"] == 1


def test_trend_check_requires_three_scales():
    report = sample_report()
    report.scales = report.scales[:2]
    with pytest.raises(ConfigError):
        trend_check(report)


def test_trend_check_rejects_csv_loaded_reports():
    back = from_csv(to_csv(sample_report()))
    with pytest.raises(ConfigError) as exc:
        trend_check(back)
    assert "JSON" in str(exc.value)


def test_trend_check_zero_build_time_gives_null_ratio():
    suites = ()
    scales = [
        ScaleResult(100, 100, 0, 1, 1, suites),
        ScaleResult(200, 200, 5, 1, 1, suites),
        ScaleResult(400, 400, 10, 1, 1, suites),
    ]
    trends = trend_check(BenchReport(environment={}, scales=scales, warnings=[]))
    assert trends["build_ratios"][0]["ratio"] is None
    assert trends["build_ratios"][1]["ratio"] == 2.0
