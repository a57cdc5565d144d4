# run_config.py - Layered run configuration: defaults, config.json, --config file, flags
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from errors import InvalidParams
from fixtures.generator import FixtureSpec
from flow.horn_schunck import FlowParams
from smoothing.temporal import SmoothingParams

logger = logging.getLogger(__name__)

DEFAULTS_FILE = Path(__file__).with_name("config.json")
COMMANDS = ("smooth", "metrics", "genseq", "ablate")


def _optional_int(text: str) -> Optional[int]:
    if str(text).strip().lower() in ("auto", "none", ""):
        return None
    return int(text)


def _optional_float(text: str) -> Optional[float]:
    if str(text).strip().lower() in ("off", "none", ""):
        return None
    return float(text)


def _optional_path(text: str) -> Optional[Path]:
    if str(text).strip().lower() in ("none", ""):
        return None
    return Path(text)


def _float_list(text: str) -> Tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(x) for x in text)
    return tuple(float(x) for x in str(text).split(",") if x.strip())


# key (flag name without dashes) -> (RunConfig field, parser, help)
OPTIONS: Dict[str, Tuple[str, Callable, str]] = {
    "input-dir": ("input_dir", _optional_path, "Directory holding the input frames"),
    "output-dir": ("output_dir", _optional_path, "Directory for written frames"),
    "pattern": ("pattern", str, "Glob selecting input frame files"),
    "alpha": ("alpha", float, "Blend weight of the warped previous output, in [0, 1]"),
    "alphas": ("alphas", _float_list, "Comma separated alphas for the ablate command"),
    "pyramid-levels": ("pyramid_levels", _optional_int, "Pyramid levels, or 'auto'"),
    "lambda": ("smoothness_lambda", float, "Horn-Schunck smoothness weight"),
    "iterations": ("iterations", int, "Jacobi iterations per warp pass"),
    "warps": ("warps", int, "Warp passes per pyramid level"),
    "flow-dir": ("flow_dir", _optional_path, "Directory of external pair_%06d.flo files"),
    "flow-out": ("flow_out", _optional_path, "Directory to dump the pair flows"),
    "occlusion-threshold": ("occlusion_threshold", _optional_float,
                            "Forward-backward tolerance in px; 'off' disables the check"),
    "report": ("report", _optional_path, "JSON report path"),
    "format": ("format", str, "Frame format: pgm, ppm or png"),
    "workers": ("workers", int, "Threads for flow pre-computation and metrics"),
    "kind": ("kind", str, "Fixture kind: static-noise, global-translation or flat"),
    "width": ("width", int, "Fixture width"),
    "height": ("height", int, "Fixture height"),
    "frames": ("frames", int, "Fixture frame count"),
    "noise-sigma": ("noise_sigma", float, "Fixture noise standard deviation"),
    "shift-x": ("shift_x", int, "Fixture horizontal shift per frame"),
    "shift-y": ("shift_y", int, "Fixture vertical shift per frame"),
    "seed": ("seed", int, "Fixture seed"),
    "verbosity": ("verbosity", int, "Log level: -1 warnings only, 0 progress, 1 debug"),
}

@dataclass
class RunConfig:
    command: str = "metrics"
    input_dir: Optional[Path] = None
    output_dir: Optional[Path] = None
    pattern: str = "frame_*"
    alpha: float = 0.5
    alphas: Tuple[float, ...] = ()
    pyramid_levels: Optional[int] = None
    smoothness_lambda: float = 15.0
    iterations: int = 100
    warps: int = 3
    flow_dir: Optional[Path] = None
    flow_out: Optional[Path] = None
    occlusion_threshold: Optional[float] = None
    report: Optional[Path] = None
    format: str = "pgm"
    workers: int = 1
    kind: str = "static-noise"
    width: int = 256
    height: int = 256
    frames: int = 64
    noise_sigma: float = 10.0
    shift_x: int = 0
    shift_y: int = 0
    seed: int = 0
    verbosity: int = 0

    def flow_params(self) -> FlowParams:
        return FlowParams(
            pyramid_levels=self.pyramid_levels,
            smoothness_lambda=self.smoothness_lambda,
            iterations_per_level=self.iterations,
            warps_per_level=self.warps,
        )

    def smoothing_params(self, alpha: Optional[float] = None) -> SmoothingParams:
        return SmoothingParams(
            alpha=self.alpha if alpha is None else alpha,
            flow=self.flow_params(),
            flow_dir=self.flow_dir,
            occlusion_threshold=self.occlusion_threshold,
        )

    def fixture_spec(self) -> FixtureSpec:
        return FixtureSpec(
            kind=self.kind,
            width=self.width,
            height=self.height,
            frame_count=self.frames,
            noise_sigma=self.noise_sigma,
            shift_per_frame=(self.shift_x, self.shift_y),
            texture_seed=self.seed,
        )

    def ablation_alphas(self) -> Tuple[float, ...]:
        return self.alphas or (self.alpha,)

    def manifest_lines(self) -> List[str]:
        """Every numeric parameter of a smoothing run as key = value"""
        levels = "auto" if self.pyramid_levels is None else self.pyramid_levels
        occlusion = "off" if self.occlusion_threshold is None else repr(self.occlusion_threshold)
        return [
            f"alpha = {self.alpha!r}",
            f"pyramid_levels = {levels}",
            f"lambda = {self.smoothness_lambda!r}",
            f"iterations = {self.iterations}",
            f"warps = {self.warps}",
            f"flow_source = {'external' if self.flow_dir else 'internal'}",
            f"occlusion_threshold = {occlusion}",
            f"format = {self.format}",
        ]


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("_", "-").lower()


def parse_value(key: str, raw) -> Tuple[str, object]:
    """Map a flag-style key and its raw value onto (RunConfig field, typed value)"""
    norm = normalize_key(key)
    if norm not in OPTIONS:
        raise InvalidParams(f"unknown configuration key {key!r}")
    dest, parser, _ = OPTIONS[norm]
    try:
        return dest, parser(raw) if raw is not None else None
    except (TypeError, ValueError) as e:
        raise InvalidParams(f"bad value for {key!r}: {raw!r} ({e})") from e


def read_key_value_file(path: Union[str, Path]) -> Dict[str, str]:
    """Flat `key = value` lines; blank lines and # comments are skipped"""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise InvalidParams(f"cannot read config file {path}: {e}") from e

    values = {}
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise InvalidParams(f"{path.name}:{number}: expected 'key = value', got {line.strip()!r}")
        key, value = text.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_defaults(path: Union[str, Path] = DEFAULTS_FILE) -> Dict[str, object]:
    """Project defaults from config.json; built-in defaults when the file is absent"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            sections = json.load(f)
    except FileNotFoundError:
        logger.warning("⚠️ %s not found, using built-in defaults", path)
        return {}
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParams(f"cannot read defaults {path}: {e}") from e

    flat = {}
    for name, section in sections.items():
        if isinstance(section, dict):
            flat.update(section)
        else:
            flat[name] = section
    return flat


def build_config(
    command: str,
    flags: Dict[str, object],
    config_file: Optional[Union[str, Path]] = None,
    defaults_file: Union[str, Path] = DEFAULTS_FILE,
) -> RunConfig:
    """
    Resolve a RunConfig, highest precedence last:
    built-in defaults, defaults_file, config_file, flags

    Args:
        command: One of COMMANDS
        flags: Flag values given on the command line, keyed by flag name
        config_file: Optional key = value file
    """
    if command not in COMMANDS:
        raise InvalidParams(f"unknown command {command!r}")

    config = RunConfig(command=command)
    layers = [load_defaults(defaults_file)]
    if config_file is not None:
        layers.append(read_key_value_file(config_file))
    layers.append(flags)

    for layer in layers:
        for key, raw in layer.items():
            dest, value = parse_value(key, raw)
            setattr(config, dest, value)

    if config.format not in ("pgm", "ppm", "png"):
        raise InvalidParams(f"format must be pgm, ppm or png, got {config.format!r}")
    if config.workers < 1:
        raise InvalidParams(f"workers must be >= 1, got {config.workers}")
    return config
