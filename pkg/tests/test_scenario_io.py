import os

import pytest

from wimaxsched import (
    ConstantBitRate,
    OnOffBitRate,
    PeriodicVariable,
    PoissonArrivals,
    QosClass,
    ScenarioError,
    SchedulerKind,
    find_scenario,
    load_scenario,
    parse_scenario,
    parse_scheduler,
    preset_names,
)

FULL = """
[link]
rate = 130000

[run]
scheduler = "SP"
duration = 12.5
seed = 7
num_queues = 6
queue_capacity_bytes = 64000
weights = [1, 1, 2, 2, 3, 3]

[flows]
stations = 10

[flows.UGS]
kind = "cbr"
packet_bytes = 175
period_s = 0.2

[flows.ertPS]
kind = "on_off_cbr"
packet_bytes = 200
period_s = 0.2
mean_on_s = 1.0
mean_off_s = 3.0

[flows.rtPS]
kind = "periodic_vbr"
period_s = 0.1
size_min_bytes = 100
size_max_bytes = 150

[flows.nrtPS]
kind = "poisson"
mean_rate_bps = 16000
size_min_bytes = 125
size_max_bytes = 125

[sweep]
name = "queue_size"
"""


class TestDefaults:
    def test_empty_document_gives_the_stock_run(self):
        sc = parse_scenario("")
        assert sc.base.scheduler is SchedulerKind.WFQ
        assert sc.base.link.rate_bps == 500000.0
        assert sc.base.duration_s == 30.0
        assert sc.base.seed == 42
        assert sc.base.num_queues == 8
        assert sc.base.queue_capacity_bytes == 1280000
        assert sc.base.weights == tuple(float(i) for i in range(1, 9))
        assert sc.stations == 40
        assert len(sc.base.flows) == 40
        assert sc.sweep_name is None
        assert sc.class_counts is None

    def test_full_document_round_trip(self):
        sc = parse_scenario(FULL)
        assert sc.base.scheduler is SchedulerKind.SP
        assert sc.base.link.rate_bps == 130000.0
        assert sc.base.duration_s == 12.5
        assert sc.base.seed == 7
        assert sc.base.num_queues == 6
        assert sc.base.queue_capacity_bytes == 64000
        assert sc.base.weights == (1.0, 1.0, 2.0, 2.0, 3.0, 3.0)
        assert sc.stations == 10
        assert sc.sweep_name == "queue_size"
        assert sc.profiles[QosClass.UGS] == ConstantBitRate(175, 0.2)
        assert sc.profiles[QosClass.ERTPS] == OnOffBitRate(200, 0.2, 1.0, 3.0)
        assert sc.profiles[QosClass.RTPS] == PeriodicVariable(0.1, 100, 150)
        assert sc.profiles[QosClass.NRTPS] == PoissonArrivals(16000.0, 125, 125)
        assert QosClass.BE not in sc.profiles  # keeps its stock generator


class TestValidation:
    def test_unknown_section(self):
        with pytest.raises(ScenarioError, match="unknown section"):
            parse_scenario("[network]\nrate = 1")

    def test_unknown_run_key(self):
        with pytest.raises(ScenarioError, match="tick"):
            parse_scenario("[run]\ntick = 0.5")

    def test_unknown_profile_kind(self):
        with pytest.raises(ScenarioError, match="kind"):
            parse_scenario('[flows.BE]\nkind = "fractal"')

    def test_profile_kind_required(self):
        with pytest.raises(ScenarioError, match="kind"):
            parse_scenario("[flows.BE]\npacket_bytes = 100")

    def test_profile_size_bounds_ordered(self):
        text = (
            '[flows.BE]\nkind = "poisson"\nmean_rate_bps = 1000\n'
            "size_min_bytes = 200\nsize_max_bytes = 100"
        )
        with pytest.raises(ScenarioError, match="size_min_bytes"):
            parse_scenario(text)

    def test_profile_extra_key_rejected(self):
        text = '[flows.UGS]\nkind = "cbr"\npacket_bytes = 100\nperiod_s = 0.1\nburst = 2'
        with pytest.raises(ScenarioError, match="burst"):
            parse_scenario(text)

    def test_weights_must_be_nonempty_array(self):
        with pytest.raises(ScenarioError, match="weights"):
            parse_scenario("[run]\nweights = []")
        with pytest.raises(ScenarioError, match="weights"):
            parse_scenario("[run]\nweights = 3")

    def test_bool_is_not_a_number(self):
        with pytest.raises(ScenarioError, match="duration"):
            parse_scenario("[run]\nduration = true")
        with pytest.raises(ScenarioError, match="seed"):
            parse_scenario("[run]\nseed = true")

    def test_zero_duration_rejected(self):
        with pytest.raises(ScenarioError, match="duration"):
            parse_scenario("[run]\nduration = 0")

    def test_bad_toml_surfaces_as_scenario_error(self):
        with pytest.raises(ScenarioError, match="TOML"):
            parse_scenario("[run\nbroken")

    def test_sweep_name_checked(self):
        with pytest.raises(ScenarioError, match="queue_size"):
            parse_scenario('[sweep]\nname = "latency"')

    def test_sweep_axis_checked(self):
        with pytest.raises(ScenarioError, match="increasing"):
            parse_scenario('[sweep]\nname = "queue_size"\naxis = [3, 2, 1]')
        with pytest.raises(ScenarioError, match="positive"):
            parse_scenario('[sweep]\nname = "queue_size"\naxis = [0, 1]')
        with pytest.raises(ScenarioError, match="integers"):
            parse_scenario('[sweep]\nname = "queue_size"\naxis = [1.5, 2.5]')

    def test_sweep_axis_alone_is_fine(self):
        sc = parse_scenario("[sweep]\naxis = [100, 200]")
        assert sc.sweep_name is None
        assert sc.sweep_axis == (100, 200)


class TestSchedulerNames:
    def test_aliases(self):
        assert parse_scheduler("SCFQ") is SchedulerKind.SCF
        assert parse_scheduler("DiffServ") is SchedulerKind.DS
        assert parse_scheduler("diffserv") is SchedulerKind.DS

    def test_case_insensitive(self):
        assert parse_scheduler("wfq") is SchedulerKind.WFQ
        assert parse_scheduler("sp") is SchedulerKind.SP

    def test_unknown_name_lists_the_valid_set(self):
        with pytest.raises(ScenarioError, match="WRR"):
            parse_scheduler("EDF")


class TestClassCounts:
    def test_per_class_station_caps(self):
        text = "[flows]\nstations = 12\n[flows.UGS]\nstations = 2\n[flows.BE]\nstations = 1"
        sc = parse_scenario(text)
        assert sc.class_counts[QosClass.UGS] == 2
        assert sc.class_counts[QosClass.BE] == 1
        # uncapped classes keep an even split of the station budget
        assert sc.class_counts[QosClass.ERTPS] == 3
        counts = {}
        for flow in sc.base.flows:
            counts[flow.qos] = counts.get(flow.qos, 0) + 1
        assert counts[QosClass.UGS] == 2
        assert counts[QosClass.BE] == 1


def test_reseed_changes_flows_but_not_layout():
    sc = parse_scenario(FULL)
    other = sc.reseed(99)
    assert other.base.seed == 99
    assert other.base.num_queues == sc.base.num_queues
    assert other.base.weights == sc.base.weights
    assert len(other.base.flows) == len(sc.base.flows)
    assert [f.qos for f in other.base.flows] == [f.qos for f in sc.base.flows]
    assert other.base.flows != sc.base.flows  # per-flow seeds moved


class TestLookup:
    def test_preset_names(self):
        assert preset_names() == ["default", "queue_count", "queue_size"]

    def test_find_by_preset_name(self):
        sc = find_scenario("queue_size")
        assert sc.sweep_name == "queue_size"
        sc = find_scenario("queue_count")
        assert sc.sweep_name == "queue_count"

    def test_find_by_path(self, tmp_path):
        path = tmp_path / "tiny.toml"
        path.write_text('[run]\nscheduler = "RR"\n')
        sc = find_scenario(os.fspath(path))
        assert sc.base.scheduler is SchedulerKind.RR

    def test_unknown_ref_names_the_presets(self):
        with pytest.raises(ScenarioError, match="default"):
            find_scenario("not_a_preset")

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="cannot read"):
            load_scenario(os.fspath(tmp_path / "absent.toml"))

    def test_presets_parse_and_build(self):
        for name in preset_names():
            sc = find_scenario(name)
            assert sc.base.flows  # every preset yields a populated run
