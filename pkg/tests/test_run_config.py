"""Layered run configuration"""
import json

import pytest

from errors import InvalidParams, InvalidSpec
from run_config import DEFAULTS_FILE, build_config, load_defaults, read_key_value_file


@pytest.fixture
def defaults_file(tmp_path):
    path = tmp_path / "defaults.json"
    path.write_text(json.dumps({"smoothing": {"alpha": 0.2}, "flow": {"iterations": 40}}))
    return path


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# smoothing overrides\nalpha = 0.4\nocclusion_threshold = 1.5\n\nwarps = 2  # fewer passes\n")
    return path


class TestPrecedence:

    def test_flag_beats_file_beats_defaults(self, defaults_file, config_file):
        config = build_config("smooth", {"alpha": "0.6"}, config_file, defaults_file)
        assert config.alpha == 0.6
        assert config.iterations == 40
        assert config.warps == 2
        assert config.occlusion_threshold == 1.5

    def test_file_beats_defaults(self, defaults_file, config_file):
        assert build_config("smooth", {}, config_file, defaults_file).alpha == 0.4

    def test_defaults_file_beats_builtins(self, defaults_file):
        config = build_config("smooth", {}, None, defaults_file)
        assert config.alpha == 0.2
        assert config.smoothness_lambda == 15.0

    def test_missing_defaults_file_falls_back(self, tmp_path):
        config = build_config("metrics", {}, None, tmp_path / "absent.json")
        assert config.alpha == 0.5
        assert config.pyramid_levels is None

    def test_project_defaults_parse(self):
        assert load_defaults(DEFAULTS_FILE)
        config = build_config("genseq", {})
        assert config.fixture_spec().frame_count == 64
        assert config.occlusion_threshold is None


class TestValues:

    def test_keyword_values(self, tmp_path):
        config = build_config("smooth", {"pyramid-levels": "auto", "occlusion-threshold": "off"}, None, tmp_path / "x")
        assert config.pyramid_levels is None and config.occlusion_threshold is None

    def test_lambda_maps_to_smoothness(self, tmp_path):
        config = build_config("smooth", {"lambda": "7.5", "flow-dir": "flows"}, None, tmp_path / "x")
        params = config.smoothing_params()
        assert params.flow.smoothness_lambda == 7.5
        assert params.external_flow

    def test_alphas_list(self, tmp_path):
        config = build_config("ablate", {"alphas": "0.3, 0.5,0.8"}, None, tmp_path / "x")
        assert config.ablation_alphas() == (0.3, 0.5, 0.8)
        assert build_config("ablate", {}, None, tmp_path / "x").ablation_alphas() == (0.5,)

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("alpha = 0.5\nsharpness = 3\n")
        with pytest.raises(InvalidParams, match="sharpness"):
            build_config("smooth", {}, path, tmp_path / "x")

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("alpha 0.5\n")
        with pytest.raises(InvalidParams):
            read_key_value_file(path)

    def test_bad_number(self, tmp_path):
        with pytest.raises(InvalidParams):
            build_config("smooth", {"iterations": "many"}, None, tmp_path / "x")

    def test_bad_format(self, tmp_path):
        with pytest.raises(InvalidParams):
            build_config("smooth", {"format": "jpg"}, None, tmp_path / "x")

    def test_library_validation_surfaces(self, tmp_path):
        with pytest.raises(InvalidParams):
            build_config("smooth", {"alpha": "2"}, None, tmp_path / "x").smoothing_params()
        with pytest.raises(InvalidSpec):
            build_config("genseq", {"frames": "0"}, None, tmp_path / "x").fixture_spec()

    def test_manifest_lines_have_no_paths(self, tmp_path):
        lines = build_config("smooth", {"flow-dir": "/tmp/f"}, None, tmp_path / "x").manifest_lines()
        assert "flow_source = external" in lines
        assert "pyramid_levels = auto" in lines
        assert not any("/tmp/f" in line for line in lines)

    def test_verbosity_layers(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("verbosity = 1\n")
        assert build_config("metrics", {}, None, tmp_path / "x").verbosity == 0
        assert build_config("metrics", {}, path, tmp_path / "x").verbosity == 1
        assert build_config("metrics", {"verbosity": -1}, path, tmp_path / "x").verbosity == -1
