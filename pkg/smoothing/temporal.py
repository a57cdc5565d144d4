# smoothing/temporal.py - Flow-guided recursive temporal smoothing
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from errors import DimensionMismatch, InvalidParams, IoError, MissingExternalFlow
from flow.field import FlowField
from flow.flo_io import pair_flow_path, read_flo
from flow.horn_schunck import FlowParams, estimate_flow
from frames.frame import Frame, SequenceHandle
from warping import remap_stack, warp

logger = logging.getLogger(__name__)

DEFAULT_OCCLUSION_THRESHOLD = 1.0


@dataclass(frozen=True)
class SmoothingParams:
    """
    alpha: weight of the motion-compensated previous output, in [0, 1]
    flow: estimator settings (also used for the forward pass of the occlusion check)
    flow_dir: directory of pair_%06d.flo files; None estimates flow internally
    occlusion_threshold: forward-backward tolerance in px; None disables the check
    """
    alpha: float = 0.5
    flow: FlowParams = field(default_factory=FlowParams)
    flow_dir: Optional[Path] = None
    occlusion_threshold: Optional[float] = None

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise InvalidParams(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.occlusion_threshold is not None and not self.occlusion_threshold > 0:
            raise InvalidParams(f"occlusion threshold must be positive, got {self.occlusion_threshold}")
        if self.flow_dir is not None:
            object.__setattr__(self, "flow_dir", Path(self.flow_dir))

    @property
    def external_flow(self) -> bool:
        return self.flow_dir is not None


def load_external_flow(flow_dir: Union[str, Path], index: int, width: int, height: int) -> FlowField:
    """Flow onto frame `index` from an external pair_%06d.flo directory"""
    path = pair_flow_path(flow_dir, index)
    if not path.is_file():
        raise MissingExternalFlow(f"missing external flow {path.name} in {flow_dir}")
    try:
        field_ = read_flo(path)
    except IoError as e:
        raise MissingExternalFlow(str(e)) from e
    field_.check_grid(width, height, what=f"frame {index}")
    return field_


def pair_flow(gan_prev: Frame, gan_curr: Frame, index: int, params: SmoothingParams) -> FlowField:
    """f_t = Flow(I_gan[t-1], I_gan[t]), or the external file for pair t"""
    if params.external_flow:
        return load_external_flow(params.flow_dir, index, gan_curr.width, gan_curr.height)
    return estimate_flow(gan_prev, gan_curr, params.flow)


def forward_backward_mask(backward: FlowField, forward: FlowField, threshold: float) -> np.ndarray:
    """
    True where the flows disagree by more than threshold px.

    backward lives on frame t and points into t-1, forward lives on t-1 and
    points into t; a consistent pair satisfies b(x) + f(x + b(x)) = 0.
    """
    if backward.shape != forward.shape:
        raise DimensionMismatch(f"backward {backward.shape} vs forward {forward.shape}")
    sampled = remap_stack(np.stack([forward.u, forward.v], axis=-1), backward.u, backward.v)
    du = backward.u + sampled[:, :, 0]
    dv = backward.v + sampled[:, :, 1]
    return np.sqrt(du * du + dv * dv) > threshold


def blend(warped: np.ndarray, current: np.ndarray, alpha) -> np.ndarray:
    """alpha * warped + (1 - alpha) * current, held inside the per-pixel [min, max] of the inputs"""
    mixed = alpha * warped + (1.0 - alpha) * current
    return np.clip(mixed, np.minimum(warped, current), np.maximum(warped, current))


def smooth_step(
    prev_final: Frame,
    gan_prev: Frame,
    gan_curr: Frame,
    params: SmoothingParams,
    index: int = 1,
    flow: Optional[FlowField] = None,
) -> Tuple[Frame, FlowField]:
    """
    One step of the recursion:
        f_t        = Flow(gan_prev, gan_curr)
        warped     = Warp(prev_final, f_t)
        final_t    = alpha * warped + (1 - alpha) * gan_curr

    Args:
        prev_final: Smoothed output of the previous step
        gan_prev, gan_curr: Edited input frames t-1 and t
        params: Smoothing configuration
        index: t, selects the external flow file
        flow: Precomputed f_t, skips estimation / loading

    Returns:
        (smoothed frame, f_t)
    """
    if not (prev_final.same_shape(gan_prev) and gan_prev.same_shape(gan_curr)):
        raise DimensionMismatch("smooth_step needs three frames of identical size and channel count")

    if flow is None:
        flow = pair_flow(gan_prev, gan_curr, index, params)
    flow.check_grid(gan_curr.width, gan_curr.height)

    warped = warp(prev_final, flow)
    alpha = params.alpha
    if params.occlusion_threshold is not None and alpha > 0:
        forward = estimate_flow(gan_curr, gan_prev, params.flow)
        occluded = forward_backward_mask(flow, forward, params.occlusion_threshold)
        alpha = np.where(occluded, 0.0, alpha)[:, :, np.newaxis]
        logger.debug("🕳️ Pair %d: %d occluded pixels fall back to the edited frame", index, int(occluded.sum()))

    return Frame(blend(warped.data, gan_curr.data, alpha)), flow


def sequence_flows(seq: SequenceHandle, params: SmoothingParams, workers: int = 1) -> List[FlowField]:
    """All f_t for t in [1, T-1]; they depend only on the edited frames so can run ahead"""
    jobs = list(seq.pairs())
    if workers <= 1 or len(jobs) < 2:
        return [pair_flow(prev, curr, t, params) for t, prev, curr in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: pair_flow(job[1], job[2], job[0], params), jobs))


def smooth_sequence(
    seq: SequenceHandle,
    params: SmoothingParams,
    workers: int = 1,
    flows: Optional[List[FlowField]] = None,
) -> Tuple[SequenceHandle, List[FlowField]]:
    """
    Run the recursion over a whole sequence.

    The first output frame is the first input frame; every later frame is
    smooth_step of the previous output. Outputs stay float between steps.

    Args:
        flows: Precomputed f_1 .. f_{T-1} from sequence_flows; estimated when None

    Returns:
        (smoothed sequence with the input's source names, T-1 flow fields)
    """
    if flows is None:
        flows = sequence_flows(seq, params, workers)
    elif len(flows) != len(seq) - 1:
        raise InvalidParams(f"expected {len(seq) - 1} pair flows, got {len(flows)}")
    outputs = [seq[0]]
    for (t, gan_prev, gan_curr), flow in zip(seq.pairs(), flows):
        smoothed, _ = smooth_step(outputs[-1], gan_prev, gan_curr, params, index=t, flow=flow)
        outputs.append(smoothed)

    logger.info("🌊 Smoothed %d frames (alpha=%.3f)", len(outputs), params.alpha)
    return SequenceHandle(outputs, seq.source_names), flows
