# metrics/report.py - ITF / ISI / MOFM over a frame sequence
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Union

from errors import InvalidParams, IoError, TooFewFrames
from flow.field import FlowField, mean_magnitude
from flow.horn_schunck import FlowParams, estimate_flow
from frames.frame import SequenceHandle
from metrics.quality import SsimParams, psnr, ssim
from smoothing.temporal import load_external_flow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairMetrics:
    pair: int
    psnr_db: float
    ssim: float
    flow_mag_px: float


@dataclass(frozen=True)
class MetricsReport:
    """
    Aggregates are plain means of the per-pair values taken in pair order:
    itf_db (PSNR, higher is steadier), isi (SSIM, higher is steadier),
    mofm_px (flow magnitude, lower is steadier)
    """
    frame_count: int
    pair_count: int
    itf_db: float
    isi: float
    mofm_px: float
    per_pair: List[PairMetrics] = field(default_factory=list)

    @classmethod
    def from_pairs(cls, frame_count: int, per_pair: List[PairMetrics]) -> "MetricsReport":
        n = len(per_pair)
        return cls(
            frame_count=frame_count,
            pair_count=n,
            itf_db=sum(p.psnr_db for p in per_pair) / n,
            isi=sum(p.ssim for p in per_pair) / n,
            mofm_px=sum(p.flow_mag_px for p in per_pair) / n,
            per_pair=list(per_pair),
        )

    def summary_line(self) -> str:
        return f"ITF={self.itf_db:.6f} dB  ISI={self.isi:.6f}  MOFM={self.mofm_px:.6f} px"

    def to_json(self) -> str:
        return render_json(report_payload(self)) + "\n"


class Real(float):
    """A float that serializes with six decimals"""


def report_payload(report: MetricsReport) -> dict:
    return {
        "frame_count": report.frame_count,
        "pair_count": report.pair_count,
        "itf_db": Real(report.itf_db),
        "isi": Real(report.isi),
        "mofm_px": Real(report.mofm_px),
        "per_pair": [
            {
                "pair": p.pair,
                "psnr_db": Real(p.psnr_db),
                "ssim": Real(p.ssim),
                "flow_mag_px": Real(p.flow_mag_px),
            }
            for p in report.per_pair
        ],
    }


def render_json(value, indent: int = 0) -> str:
    """JSON text with reals fixed at six decimals; key order is insertion order"""
    pad = "  " * (indent + 1)
    close = "  " * indent
    if isinstance(value, Real):
        text = f"{value:.6f}"
        return "0.000000" if text == "-0.000000" else text
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {render_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [pad + render_json(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    return json.dumps(value)


def write_report_text(text: str, path: Union[str, Path]):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"could not write report {path}: {e}") from e
    logger.info("📝 Report written to %s", path)


def evaluate_pair(
    seq: SequenceHandle, t: int, flow: Union[FlowParams, Path, FlowField], ssim_params: SsimParams
) -> PairMetrics:
    prev, curr = seq[t - 1], seq[t]
    if isinstance(flow, FlowField):
        flow.check_grid(curr.width, curr.height, what=f"pair {t}")
        field_ = flow
    elif isinstance(flow, FlowParams):
        field_ = estimate_flow(prev, curr, flow)
    else:
        field_ = load_external_flow(flow, t, curr.width, curr.height)
    return PairMetrics(
        pair=t,
        psnr_db=psnr(prev, curr),
        ssim=ssim(prev, curr, ssim_params),
        flow_mag_px=mean_magnitude(field_),
    )


def evaluate_sequence(
    seq: SequenceHandle,
    flow: Union[FlowParams, str, Path, None] = None,
    workers: int = 1,
    ssim_params: SsimParams = SsimParams(),
    pair_flows: Optional[Sequence[FlowField]] = None,
) -> MetricsReport:
    """
    ITF / ISI / MOFM of a sequence

    Args:
        seq: At least two frames
        flow: FlowParams to estimate MOFM flow, or a directory of pair_%06d.flo files
        workers: Threads evaluating pairs; the report does not depend on it
        pair_flows: Already computed flows for pairs 1 .. T-1; overrides `flow`

    Returns:
        MetricsReport with one entry per consecutive pair, in order
    """
    if len(seq) < 2:
        raise TooFewFrames(f"metrics need at least 2 frames, got {len(seq)}")
    if pair_flows is not None and len(pair_flows) != len(seq) - 1:
        raise InvalidParams(f"expected {len(seq) - 1} pair flows, got {len(pair_flows)}")
    if flow is None:
        flow = FlowParams()
    elif not isinstance(flow, FlowParams):
        flow = Path(flow)

    def pair_source(t: int):
        return pair_flows[t - 1] if pair_flows is not None else flow

    indices = list(range(1, len(seq)))
    if workers <= 1:
        per_pair = [evaluate_pair(seq, t, pair_source(t), ssim_params) for t in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_pair = list(pool.map(lambda t: evaluate_pair(seq, t, pair_source(t), ssim_params), indices))

    report = MetricsReport.from_pairs(len(seq), per_pair)
    logger.info("📊 %s over %d pairs", report.summary_line(), report.pair_count)
    return report
