import concurrent.futures

import numpy as np
import pytest

import maxentaug
from maxentaug import PipelineConfig, RngStream, transform_image
from maxentaug.config import loads_config
from maxentaug.errors import ConfigError, InvalidParameterError

from maxentaug_bindings import (
    PRESET_NAMES,
    BoundPipeline,
    __version__,
    augment_array,
    make_pipeline,
)


class TestMakePipeline:
    def test_preset_names_exposed(self):
        assert set(PRESET_NAMES) == {"S1", "S2", "S3", "default"}

    def test_preset_pipeline(self):
        pipe = make_pipeline("S1", 7)
        assert isinstance(pipe, BoundPipeline)
        assert pipe.seed == 7
        assert pipe.config == maxentaug.preset("S1")

    def test_config_text_pipeline(self):
        pipe = make_pipeline("width = 2\ndepth = 1\nk_omega = 1\n", 0)
        assert pipe.config.width == 2 and pipe.config.depth == 1

    def test_unknown_preset_error(self):
        with pytest.raises(ConfigError, match="S9"):
            make_pipeline("S9", 0)

    def test_invalid_config_names_key(self):
        with pytest.raises(ConfigError) as exc:
            make_pipeline("width = 0\n", 0)
        assert exc.value.key == "width"

    @pytest.mark.parametrize(
        "text",
        ["width = 0\n", "wobble = 3\n", "depth = three\n", "width = 3\nwidth = 4\n"],
    )
    def test_diagnostics_match_config_loader(self, text):
        # bindings must surface byte-identical messages to the file loader
        with pytest.raises(ConfigError) as want:
            loads_config(text)
        with pytest.raises(ConfigError) as got:
            make_pipeline(text, 0)
        assert str(got.value) == str(want.value)
        assert got.value.key == want.value.key

    def test_immutable(self):
        pipe = make_pipeline("S1", 0)
        with pytest.raises(AttributeError):
            pipe.seed = 1


class TestAugmentArray:
    def test_zero_strength_identity(self):
        pipe = make_pipeline(
            "sigma_tau_sq = 0.0\nsigma_gamma_sq = 0.0\nsigma_omega_sq = 0.0\n", 3
        )
        x = np.random.default_rng(0).random((16, 16, 3)).astype(np.float32)
        out = augment_array(pipe, x, 0)
        assert out.shape == x.shape and out.dtype == np.float32
        assert np.abs(out.astype(np.float64) - x).max() <= 1e-6

    def test_out_of_range_rejected(self):
        pipe = make_pipeline("S1", 0)
        x = np.full((16, 16, 3), 1.5, dtype=np.float32)
        with pytest.raises(InvalidParameterError):
            augment_array(pipe, x, 0)

    def test_bad_shape_rejected(self):
        pipe = make_pipeline("S1", 0)
        with pytest.raises(InvalidParameterError):
            augment_array(pipe, np.zeros((4, 4, 2), dtype=np.float32), 0)

    def test_parity_with_core_engine(self):
        # the [SECONDARY] gate: 100 randomized (image, seed, stream_id)
        # triples, element-exact agreement with the core call
        gen = np.random.default_rng(42)
        for _ in range(100):
            seed = int(gen.integers(0, 2**31))
            stream_id = int(gen.integers(0, 10_000))
            name = ("S1", "S2", "S3", "default")[int(gen.integers(4))]
            h = int(gen.integers(12, 33))
            w = int(gen.integers(12, 33))
            x = gen.random((h, w, 3)).astype(np.float32)
            got = augment_array(make_pipeline(name, seed), x, stream_id)
            want, _ = transform_image(
                RngStream(seed, stream_id), maxentaug.preset(name), x
            )
            assert np.array_equal(got, want)
        print("CRITERION bindings-parity: PASS")

    def test_stream_order_independence(self):
        pipe = make_pipeline("S2", 5)
        gen = np.random.default_rng(1)
        x = gen.random((16, 16, 3)).astype(np.float32)
        forward = [augment_array(pipe, x, i) for i in range(6)]
        backward = [augment_array(pipe, x, i) for i in reversed(range(6))]
        for i in range(6):
            assert np.array_equal(forward[i], backward[5 - i])

    def test_shared_across_threads(self):
        pipe = make_pipeline("S2", 9)
        gen = np.random.default_rng(2)
        x = gen.random((16, 16, 3)).astype(np.float32)
        serial = [augment_array(pipe, x, i) for i in range(8)]
        with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool:
            threaded = list(pool.map(lambda i: augment_array(pipe, x, i), range(8)))
        for a, b in zip(serial, threaded):
            assert np.array_equal(a, b)


def test_version_matches_core():
    assert __version__ == maxentaug.__version__
