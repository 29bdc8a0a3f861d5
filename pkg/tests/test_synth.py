import math

import numpy as np
import pytest

from irst import (
    ClutterSpec,
    GaussianTargetSpec,
    SceneSpec,
    clutter_field,
    derivative_kernels,
    hessian_at,
    parse_scene_text,
    render_scene,
    render_sequence,
    render_target,
    scr,
)

from oracles import gaussian_ring_mean


class TestRenderTarget:
    def test_center_value(self):
        spec = GaussianTargetSpec(x=10, y=12, amplitude=40.0, sigma=1.5, background=7.0)
        frame = render_target(spec, (25, 25))
        assert frame[12, 10] == pytest.approx(47.0)

    def test_value_at_sigma_sqrt2(self):
        # place the center so that a grid point sits exactly sigma*sqrt(2)
        # away: the model value there is A * e^-1 + B
        sigma = 1.5
        offset = sigma * math.sqrt(2.0)
        spec = GaussianTargetSpec(x=12.0 - offset, y=12.0, amplitude=40.0, sigma=sigma)
        frame = render_target(spec, (25, 25))
        assert frame[12, 12] == pytest.approx(40.0 * math.exp(-1.0), rel=1e-12)

    def test_ring_mean_matches_scale_oracle(self):
        spec = GaussianTargetSpec(x=15, y=15, amplitude=100.0, sigma=1.2, background=20.0)
        frame = render_target(spec, (31, 31))
        members8 = [(0, 1), (0, -1), (1, 0), (-1, 0), (1, 1), (1, -1), (-1, 1), (-1, -1)]
        direct = np.mean([frame[15 + di, 15 + dj] for di, dj in members8])
        assert direct == pytest.approx(gaussian_ring_mean(1.2, 1, 100.0, 20.0), rel=1e-12)

    def test_invalid_spec_rejected(self):
        with pytest.raises(ValueError):
            GaussianTargetSpec(x=0, y=0, amplitude=-1.0, sigma=1.0)
        with pytest.raises(ValueError):
            GaussianTargetSpec(x=0, y=0, amplitude=1.0, sigma=0.0)


class TestRenderScene:
    def test_noise_free_single_target_equals_render_target(self):
        target = GaussianTargetSpec(x=20.0, y=24.0, amplitude=30.0, sigma=1.4)
        spec = SceneSpec(
            width=48, height=48, background="flat", background_level=11.0,
            sensor_noise_std=0.0, seed=3, targets=(target,),
        )
        frame, truth = render_scene(spec)
        expected = render_target(
            GaussianTargetSpec(x=20.0, y=24.0, amplitude=30.0, sigma=1.4, background=11.0),
            (48, 48),
        )
        np.testing.assert_allclose(frame, expected, rtol=1e-12)
        assert truth.targets == ((20, 24),)

    def test_same_spec_same_frame(self):
        spec = SceneSpec(
            width=64, height=64, background="noise", background_level=50.0,
            background_noise_std=5.0, noise_corr_length=2.0, sensor_noise_std=2.0,
            seed=42,
            targets=(GaussianTargetSpec(x=30.0, y=30.0, amplitude=25.0, sigma=1.5),),
        )
        first, _ = render_scene(spec)
        second, _ = render_scene(spec)
        np.testing.assert_array_equal(first, second)

    def test_different_seed_different_frame(self):
        base = SceneSpec(
            width=32, height=32, background="noise", seed=1,
            background_noise_std=5.0,
        )
        other = SceneSpec(
            width=32, height=32, background="noise", seed=2,
            background_noise_std=5.0,
        )
        assert not np.array_equal(render_scene(base)[0], render_scene(other)[0])

    def test_truth_rounds_half_up(self):
        spec = SceneSpec(
            width=32, height=32, background="flat", seed=0,
            targets=(GaussianTargetSpec(x=10.5, y=11.4, amplitude=5.0, sigma=1.0),),
        )
        _, truth = render_scene(spec)
        assert truth.targets == ((11, 11),)

    def test_clipping_flagged(self):
        spec = SceneSpec(
            width=32, height=32, background="flat", background_level=10.0,
            seed=0, clip=(0.0, 30.0),
            targets=(GaussianTargetSpec(x=16.0, y=16.0, amplitude=100.0, sigma=1.5),),
        )
        frame, truth = render_scene(spec)
        assert truth.notes["clipped"] is True
        assert frame.max() == 30.0

    def test_overlap_flagged(self):
        spec = SceneSpec(
            width=48, height=48, background="flat", seed=0,
            targets=(GaussianTargetSpec(x=24.0, y=24.0, amplitude=10.0, sigma=1.5),),
            clutter=(ClutterSpec(kind="blob", x=25.0, y=24.0, amplitude=20.0, sigma=2.0),),
        )
        _, truth = render_scene(spec)
        assert truth.notes["overlap"] is True

    def test_scr_monotone_in_amplitude(self):
        values = []
        for amplitude in (5.0, 10.0, 20.0, 40.0, 80.0):
            spec = SceneSpec(
                width=64, height=64, background="noise", background_level=50.0,
                background_noise_std=5.0, noise_corr_length=2.0,
                sensor_noise_std=1.0, seed=7,
                targets=(GaussianTargetSpec(x=32.0, y=32.0, amplitude=amplitude, sigma=1.5),),
            )
            frame, truth = render_scene(spec)
            values.append(scr(frame, truth.targets[0]))
        assert all(a < b for a, b in zip(values, values[1:]))


class TestClutterPrimitives:
    def test_ridge_is_anisotropic_at_crest(self):
        clutter = ClutterSpec(kind="ridge", x=32.0, y=32.0, amplitude=50.0, sigma=1.3, angle=0.0)
        field = clutter_field(clutter, (64, 64))
        sample = hessian_at(field, 32, 32, derivative_kernels(1.3))
        # crest runs along x: curvature across (fyy) dominates along (fxx)
        assert abs(sample.fxx) <= 0.2 * abs(sample.fyy)
        assert sample.isotropy <= 0.2

    def test_ridge_angle_rotates_crest(self):
        clutter = ClutterSpec(kind="ridge", x=32.0, y=32.0, amplitude=50.0, sigma=1.3, angle=90.0)
        field = clutter_field(clutter, (64, 64))
        assert field[32, 32] == pytest.approx(50.0)
        assert field[32, 20] < 1.0  # off-crest decays across x now
        assert field[20, 32] == pytest.approx(50.0, rel=1e-6)  # along the crest

    def test_edge_levels(self):
        clutter = ClutterSpec(kind="edge", x=32.0, y=32.0, amplitude=40.0, sigma=1.0, angle=0.0)
        field = clutter_field(clutter, (64, 64))
        assert field[32, 60] == pytest.approx(40.0, rel=1e-6)  # bright side
        assert field[32, 4] == pytest.approx(0.0, abs=1e-6)  # dark side
        assert field[32, 32] == pytest.approx(20.0)  # on the line

    def test_block_plateau_and_falloff(self):
        clutter = ClutterSpec(
            kind="block", x=32.0, y=32.0, amplitude=30.0, sigma=1.0, width=16, height=10
        )
        field = clutter_field(clutter, (64, 64))
        assert field[32, 32] == pytest.approx(30.0, rel=1e-4)
        assert field[32, 50] < 0.5
        assert field[50, 32] < 0.5

    def test_blob_is_gaussian_bump(self):
        clutter = ClutterSpec(kind="blob", x=20.0, y=28.0, amplitude=25.0, sigma=2.0)
        field = clutter_field(clutter, (64, 64))
        expected = render_target(
            GaussianTargetSpec(x=20.0, y=28.0, amplitude=25.0, sigma=2.0), (64, 64)
        )
        np.testing.assert_allclose(field, expected, rtol=1e-12)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ClutterSpec(kind="swirl", x=0, y=0, amplitude=1.0)


class TestRenderSequence:
    def base_spec(self):
        return SceneSpec(
            width=64, height=80, background="noise", background_level=50.0,
            background_noise_std=4.0, noise_corr_length=2.0, sensor_noise_std=1.0,
            seed=9,
            targets=(GaussianTargetSpec(x=20.0, y=30.0, amplitude=25.0, sigma=1.5),),
        )

    def test_zero_velocity_keeps_truth(self):
        rendered = render_sequence(self.base_spec(), 4, velocity=(0.0, 0.0))
        assert all(t.targets == ((20, 30),) for _, t in rendered)
        assert [t.frame_id for _, t in rendered] == [0, 1, 2, 3]

    def test_unit_velocity_translates_truth(self):
        rendered = render_sequence(self.base_spec(), 10, velocity=(1.0, 0.0))
        assert [t.targets[0][0] for _, t in rendered] == list(range(20, 30))
        assert all(t.targets[0][1] == 30 for _, t in rendered)

    def test_fresh_noise_per_frame(self):
        rendered = render_sequence(self.base_spec(), 2, velocity=(0.0, 0.0))
        assert not np.array_equal(rendered[0][0], rendered[1][0])

    def test_exit_trajectory_rejected(self):
        with pytest.raises(ValueError, match="exits"):
            render_sequence(self.base_spec(), 60, velocity=(1.0, 0.0))

    def test_sequence_is_reproducible(self):
        first = render_sequence(self.base_spec(), 3, velocity=(0.5, 0.25))
        second = render_sequence(self.base_spec(), 3, velocity=(0.5, 0.25))
        for (fa, ta), (fb, tb) in zip(first, second):
            np.testing.assert_array_equal(fa, fb)
            assert ta.targets == tb.targets


class TestSceneSpecParsing:
    def test_full_spec_roundtrip(self):
        text = """
        # demo scene
        width = 96
        height = 64
        background = noise
        background_level = 55.5
        background_noise_std = 4.5
        noise_corr_length = 2.5
        sensor_noise_std = 1.5
        seed = 11
        clip_low = 0
        clip_high = 4000
        target = x=30.0 y=20.0 amplitude=25 sigma=1.4
        clutter = ridge x=70 y=20 amplitude=40 sigma=1.3 angle=25 length=40
        clutter = blob x=50 y=50 amplitude=20 sigma=2.0
        """
        spec = parse_scene_text(text)
        assert (spec.width, spec.height) == (96, 64)
        assert spec.background == "noise"
        assert spec.background_level == 55.5
        assert spec.seed == 11
        assert spec.clip == (0.0, 4000.0)
        assert len(spec.targets) == 1
        assert spec.targets[0].amplitude == 25
        assert [c.kind for c in spec.clutter] == ["ridge", "blob"]
        assert spec.clutter[0].length == 40
        frame, truth = render_scene(spec)
        assert frame.shape == (64, 96)
        assert truth.targets == ((30, 20),)

    def test_malformed_line_rejected(self):
        with pytest.raises(ValueError, match="malformed"):
            parse_scene_text("width = 32\nheight 32\n")

    def test_unknown_scalar_rejected(self):
        with pytest.raises(TypeError):
            parse_scene_text("width = 32\nheight = 32\nwobble = 3\n")
