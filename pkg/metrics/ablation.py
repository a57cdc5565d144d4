# metrics/ablation.py - Before/after comparison of temporal smoothing
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Sequence, Union

from flow.horn_schunck import FlowParams
from frames.frame import SequenceHandle
from metrics.report import MetricsReport, Real, evaluate_sequence, render_json, report_payload
from smoothing.temporal import SmoothingParams, sequence_flows, smooth_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AblationRow:
    alpha: float
    report: MetricsReport
    before: MetricsReport

    @property
    def itf_gain_db(self) -> float:
        return self.report.itf_db - self.before.itf_db

    @property
    def isi_gain(self) -> float:
        return self.report.isi - self.before.isi

    @property
    def mofm_drop_px(self) -> float:
        return self.before.mofm_px - self.report.mofm_px

    @property
    def improved(self) -> bool:
        """ITF up, ISI up, MOFM down"""
        return self.itf_gain_db > 0 and self.isi_gain > 0 and self.mofm_drop_px > 0


@dataclass
class AblationReport:
    before: MetricsReport
    rows: List[AblationRow]
    smoothed: Optional[SequenceHandle] = None

    def summary_lines(self) -> List[str]:
        lines = [f"before     {self.before.summary_line()}"]
        for row in self.rows:
            lines.append(f"alpha={row.alpha:.3f} {row.report.summary_line()}")
        return lines

    def to_json(self) -> str:
        payload = {
            "before": report_payload(self.before),
            "after": [
                {
                    "alpha": Real(row.alpha),
                    "report": report_payload(row.report),
                    "itf_gain_db": Real(row.itf_gain_db),
                    "isi_gain": Real(row.isi_gain),
                    "mofm_drop_px": Real(row.mofm_drop_px),
                    "improved": row.improved,
                }
                for row in self.rows
            ],
        }
        return render_json(payload) + "\n"


def ablate(
    seq: SequenceHandle,
    alphas: Sequence[float],
    params: SmoothingParams,
    metric_flow: Union[FlowParams, str, Path, None] = None,
    workers: int = 1,
    quantize=None,
) -> AblationReport:
    """
    Metrics of the raw sequence against the smoothed sequence for each alpha

    Args:
        seq: Edited input frames
        alphas: Smoothing coefficients to compare
        params: Smoothing settings; alpha is replaced per row
        metric_flow: Flow used for MOFM (defaults to params.flow)
        quantize: Optional callable applied to each smoothed sequence before
            measuring it, e.g. 8-bit re-quantization to mirror written output

    Returns:
        AblationReport; `smoothed` holds the sequence of the last alpha
    """
    metric_flow = metric_flow if metric_flow is not None else params.flow
    # f_t depends only on the edited frames: estimate once for every alpha
    flows = sequence_flows(seq, params, workers)
    if not params.external_flow and metric_flow == params.flow:
        before = evaluate_sequence(seq, workers=workers, pair_flows=flows)
    else:
        before = evaluate_sequence(seq, metric_flow, workers)

    rows = []
    smoothed = None
    for alpha in alphas:
        smoothed, _ = smooth_sequence(seq, replace(params, alpha=float(alpha)), workers, flows=flows)
        measured = quantize(smoothed) if quantize else smoothed
        row = AblationRow(float(alpha), evaluate_sequence(measured, metric_flow, workers), before)
        logger.info(
            "%s alpha=%.3f: ITF %+.4f dB, ISI %+.4f, MOFM %+.4f px",
            "✅" if row.improved else "⚠️", row.alpha, row.itf_gain_db, row.isi_gain, -row.mofm_drop_px,
        )
        rows.append(row)
    return AblationReport(before, rows, smoothed)
