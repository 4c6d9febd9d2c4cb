import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seaexplore.instance import (
    Bump,
    Instance,
    InstanceConfig,
    InstanceSyntaxError,
    InstanceValidationError,
    Sample,
    Surface,
    TrueFunction,
    TruthMismatchError,
    build_mesh,
    evaluate_truth,
    generate_grid_instance,
    generate_random_instance,
    load_instance,
    parse_instance,
    serialize_instance,
)
from seaexplore.rng import SplitMix64

DATA = Path(__file__).parent / "data"
ONE_BUMP = TrueFunction((Bump(5.0, 0.5, 0.5, 0.1),))

HEADER = "surface 0 1 0 1\nbudget 100\nprobe_time 1\nspeed 1\ndepot 0 0\nmesh_step 0.01\n"


def test_splitmix_reference_vector():
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]


def test_uniform_in_unit_interval():
    rng = SplitMix64(7)
    values = [rng.uniform() for _ in range(1000)]
    assert all(0.0 <= v < 1.0 for v in values)
    assert 0.45 < sum(values) / len(values) < 0.55


class TestParse:
    def test_published_grid_table(self):
        inst = load_instance(DATA / "published_f1_16grid.inst")
        assert len(inst.initial_samples) == 16
        assert Sample(0.2, 0.8, 60.65) in inst.initial_samples
        assert inst.truth is None

    def test_appendix_parameters(self):
        inst = parse_instance(HEADER)
        assert inst.budget_T == 100
        assert inst.probe_time_t == 1
        assert inst.speed_s == 1
        assert inst.depot == (0.0, 0.0)
        assert inst.surface == Surface(0, 1, 0, 1)

    def test_zero_speed_names_field(self):
        text = HEADER.replace("speed 1", "speed 0")
        with pytest.raises(InstanceValidationError) as err:
            parse_instance(text)
        assert err.value.field == "speed_s"

    @pytest.mark.parametrize(
        "text, lineno",
        [
            (HEADER.replace("budget 100", "budget abc"), 2),
            (HEADER.replace("depot 0 0", "depot 0"), 5),
            (HEADER + "colour red\n", 7),
            (HEADER.replace("budget 100\nprobe_time 1", "probe_time 1\nbudget 100"), 2),
            (HEADER + "sample 0.1 0.1 0\ntruth_component 1 0.5 0.5 0.1\n", 8),
        ],
    )
    def test_syntax_errors_carry_line_numbers(self, text, lineno):
        with pytest.raises(InstanceSyntaxError) as err:
            parse_instance(text)
        assert err.value.lineno == lineno

    def test_missing_key(self):
        with pytest.raises(InstanceSyntaxError, match="mesh_step"):
            parse_instance(HEADER.replace("mesh_step 0.01\n", ""))

    def test_comments_and_blank_lines(self):
        inst = parse_instance("# leading comment\n\n" + HEADER.replace("speed 1", "speed 2  # knots"))
        assert inst.speed_s == 2

    def test_truth_mismatch(self):
        text = HEADER + "truth_component 5 0.5 0.5 0.1\nsample 0.5 0.5 4.9\n"
        with pytest.raises(TruthMismatchError):
            parse_instance(text)

    def test_truth_match_accepted(self):
        text = HEADER + "truth_component 5 0.5 0.5 0.1\nsample 0.5 0.5 5\n"
        assert parse_instance(text).truth == ONE_BUMP

    @pytest.mark.parametrize(
        "replacement, field",
        [
            (("budget 100", "budget -1"), "budget_T"),
            (("probe_time 1", "probe_time -0.5"), "probe_time_t"),
            (("depot 0 0", "depot 2 0"), "depot"),
            (("surface 0 1 0 1", "surface 1 0 0 1"), "surface"),
        ],
    )
    def test_invariant_violations(self, replacement, field):
        with pytest.raises(InstanceValidationError) as err:
            parse_instance(HEADER.replace(*replacement))
        assert err.value.field == field

    def test_sample_outside_surface(self):
        with pytest.raises(InstanceValidationError, match="outside"):
            parse_instance(HEADER + "sample 1.5 0.5 0\n")


class TestSerialize:
    def test_empty_samples(self):
        inst = Instance()
        text = serialize_instance(inst)
        assert "sample" not in text
        assert parse_instance(text) == inst

    def test_components_in_order(self):
        f = TrueFunction((Bump(1, 0.1, 0.2, 0.3), Bump(2, 0.4, 0.5, 0.6), Bump(3, 0.7, 0.8, 0.9)))
        text = serialize_instance(Instance(truth=f))
        lines = [l for l in text.splitlines() if l.startswith("truth_component")]
        assert lines == [
            "truth_component 1.0 0.1 0.2 0.3",
            "truth_component 2.0 0.4 0.5 0.6",
            "truth_component 3.0 0.7 0.8 0.9",
        ]

    def test_awkward_floats_round_trip(self):
        samples = (Sample(0.1 + 0.2, 1 / 3, -1e-300), Sample(5e-324, 0.9999999999999999, 1.7976931348623157e308))
        inst = Instance(initial_samples=samples, budget_T=math.pi, mesh_step=1 / 7)
        assert parse_instance(serialize_instance(inst)) == inst


unit = st.floats(0.0, 1.0, allow_nan=False)
reals = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def instances(draw):
    samples = draw(st.lists(st.builds(Sample, unit, unit, reals), max_size=8))
    truth = None
    if draw(st.booleans()):
        bumps = draw(
            st.lists(
                st.builds(Bump, reals, unit, unit, st.floats(1e-3, 10.0)),
                min_size=1,
                max_size=4,
            )
        )
        truth = TrueFunction(tuple(bumps))
        samples = [Sample(s.x, s.y, evaluate_truth(truth, s.point)) for s in samples]
    return Instance(
        budget_T=draw(st.floats(1e-6, 1e6)),
        probe_time_t=draw(st.floats(0.0, 10.0)),
        speed_s=draw(st.floats(1e-6, 1e3)),
        depot=(draw(unit), draw(unit)),
        initial_samples=tuple(samples),
        mesh_step=draw(st.floats(1e-4, 1.0)),
        truth=truth,
    )


@settings(max_examples=200, deadline=None)
@given(instances())
def test_round_trip_property(inst):
    assert parse_instance(serialize_instance(inst)) == inst


class TestTruth:
    def test_peak(self):
        assert evaluate_truth(ONE_BUMP, (0.5, 0.5)) == 5.0

    def test_offset(self):
        # 5 * exp(-0.1**2 / (2 * 0.1**2)) = 5 * exp(-0.5)
        assert evaluate_truth(ONE_BUMP, (0.5, 0.6)) == pytest.approx(3.0326532985631671, abs=1e-12)

    def test_additive(self):
        other = Bump(-2.0, 0.1, 0.9, 0.3)
        both = TrueFunction((ONE_BUMP.components[0], other))
        p = (0.3, 0.4)
        expected = evaluate_truth(ONE_BUMP, p) + evaluate_truth(TrueFunction((other,)), p)
        assert evaluate_truth(both, p) == pytest.approx(expected, rel=1e-15)

    def test_vectorised_matches_scalar(self):
        f = TrueFunction((Bump(3, 0.2, 0.3, 0.05), Bump(-1, 0.7, 0.1, 0.2)))
        pts = np.random.default_rng(0).random((50, 2))
        expected = [evaluate_truth(f, p) for p in pts.tolist()]
        np.testing.assert_allclose(f.evaluate_many(pts), expected, rtol=1e-13, atol=1e-15)

    def test_rejects_bad_components(self):
        with pytest.raises(InstanceValidationError):
            TrueFunction(())
        with pytest.raises(InstanceValidationError):
            TrueFunction((Bump(1, 0, 0, 0.0),))


class TestMesh:
    @pytest.mark.parametrize("step, count", [(0.01, 10201), (0.5, 9), (1.0, 4)])
    def test_counts(self, step, count):
        assert len(build_mesh(Surface(), step)) == count

    def test_half_step_points(self):
        pts = {tuple(p) for p in build_mesh(Surface(), 0.5).points.tolist()}
        assert pts == {(x, y) for x in (0, 0.5, 1) for y in (0, 0.5, 1)}

    def test_endpoints(self):
        for surface in (Surface(), Surface(-2.0, 3.0, 1.0, 1.5)):
            mesh = build_mesh(surface, 0.01)
            assert tuple(mesh.points[0]) == (surface.x_min, surface.y_min)
            assert tuple(mesh.points[-1]) == (surface.x_max, surface.y_max)

    def test_bad_step(self):
        with pytest.raises(ValueError):
            build_mesh(Surface(), 0.0)


class TestGenerators:
    def test_grid_16(self):
        inst = generate_grid_instance(ONE_BUMP, 4)
        coords = sorted({s.x for s in inst.initial_samples})
        assert coords == [0.2, 0.4, 0.6, 0.8]
        assert sorted({s.y for s in inst.initial_samples}) == coords
        assert len(inst.initial_samples) == 16

    def test_grid_49_and_1(self):
        assert len(generate_grid_instance(ONE_BUMP, 7).initial_samples) == 49
        (only,) = generate_grid_instance(ONE_BUMP, 1).initial_samples
        assert only.point == (0.5, 0.5)

    def test_random_deterministic(self):
        a = generate_random_instance(ONE_BUMP, 16, 42)
        b = generate_random_instance(ONE_BUMP, 16, 42)
        assert a.initial_samples == b.initial_samples
        assert a.initial_samples != generate_random_instance(ONE_BUMP, 16, 43).initial_samples

    def test_random_inside_surface(self):
        surface = Surface(2.0, 3.0, -1.0, 0.0)
        config = InstanceConfig(surface=surface, depot=(2.0, -1.0))
        inst = generate_random_instance(ONE_BUMP, 100, 5, config)
        assert len(inst.initial_samples) == 100
        assert all(surface.contains(s.x, s.y) for s in inst.initial_samples)

    def test_random_zero_count(self):
        with pytest.raises(ValueError):
            generate_random_instance(ONE_BUMP, 0, 1)

    @pytest.mark.parametrize("make", [lambda f: generate_grid_instance(f, 5), lambda f: generate_random_instance(f, 30, 9)])
    def test_truth_consistency_exact(self, make):
        f = TrueFunction((Bump(40, 0.3, 0.6, 0.07), Bump(25, 0.8, 0.2, 0.15)))
        inst = make(f)
        assert all(s.z == evaluate_truth(f, s.point) for s in inst.initial_samples)
