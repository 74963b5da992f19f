"""Spread-spectrum image watermarking with partially flattened arrays.

A rank-2n member array is cyclically shifted by the payload, folded down
to two dimensions by repeatedly pairing axis k with axis n+k
(i_k = q_k * d_{n+k} + r_k), tiled over the carrier, and added at a small
integer strength. Extraction reverses the pipeline: fold the tiles back
into one period, remove the DC term, partition into the 2n-dimensional
representation, and search the correlation tables of every family member
for the global peak, which encodes both the member index and all 2n
shifts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arrays import TernaryArray
from .family import ArrayFamily, FamilyMember
from .images import GrayImage

DEFAULT_SNR_THRESHOLD = 4.0


@dataclass(frozen=True)
class Payload:
    """Message carried by one embedded array: member index and 2n shifts."""

    m: int
    shifts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
        if self.m < 0:
            raise ValueError(f"member index must be >= 0, got {self.m}")
        if any(s < 0 for s in self.shifts):
            raise ValueError(f"shifts must be >= 0, got {self.shifts}")


@dataclass(frozen=True)
class EmbedConfig:
    """Additive embedding amplitude; output pixels clamp to [0, 255]."""

    strength: int = 3

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError(f"strength must be >= 0, got {self.strength}")


@dataclass(frozen=True)
class ExtractionResult:
    payload: Payload
    score: float
    snr: float
    confident: bool

    def to_json_dict(self) -> dict:
        return {
            "m": self.payload.m,
            "shifts": list(self.payload.shifts),
            "score": self.score,
            "snr": self.snr,
            "confident": self.confident,
        }


def _flatten_steps(dims: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Plan the axis pairings that fold `dims` down to rank 2.

    Each step pairs the first floor(r/2) axes with the last floor(r/2); an
    odd middle axis is carried unpaired (appended last) into the next step.
    Every step is a pure relabeling, so the composite map is a bijection.
    """
    steps = []
    cur = list(dims)
    while len(cur) > 2:
        r = len(cur)
        h = r // 2
        if r % 2 == 0:
            perm = tuple(x for k in range(h) for x in (k, h + k))
            new_dims = tuple(cur[k] * cur[h + k] for k in range(h))
        else:
            perm = tuple(x for k in range(h) for x in (k, h + 1 + k)) + (h,)
            new_dims = tuple(cur[k] * cur[h + 1 + k] for k in range(h)) + (cur[h],)
        steps.append((perm, new_dims))
        cur = list(new_dims)
    return steps


def _flatten_values(values: np.ndarray) -> np.ndarray:
    out = values
    for perm, new_dims in _flatten_steps(values.shape):
        out = out.transpose(perm).reshape(new_dims)
    return out


def _unflatten_values(values: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    steps = _flatten_steps(dims)
    target = steps[-1][1] if steps else tuple(dims)
    if values.shape != target:
        raise ValueError(f"flattened dims {values.shape} inconsistent with target {target}")
    out = values
    shapes = [tuple(dims)] + [new_dims for _, new_dims in steps[:-1]]
    for (perm, _), prev_shape in zip(reversed(steps), reversed(shapes)):
        interleaved = tuple(prev_shape[ax] for ax in perm)
        out = out.reshape(interleaved).transpose(np.argsort(perm))
    return out


def flatten(arr: TernaryArray) -> TernaryArray:
    """Fold an even-rank array to rank 2; rank 2 passes through unchanged."""
    if arr.rank % 2 != 0:
        raise ValueError(f"flatten requires even rank, got {arr.rank}")
    return TernaryArray(_flatten_values(arr.values))


def unflatten(arr: TernaryArray, dims) -> TernaryArray:
    """Exact inverse of flatten: unflatten(flatten(s), s.dims) == s."""
    dims = tuple(int(d) for d in dims)
    if len(dims) % 2 != 0:
        raise ValueError(f"unflatten requires even target rank, got {len(dims)}")
    if arr.size != math.prod(dims):
        raise ValueError(f"entry count {arr.size} inconsistent with dims {dims}")
    return TernaryArray(_unflatten_values(arr.values, dims))


def tile_dims(member_dims: tuple[int, ...]) -> tuple[int, int]:
    """Pixel size of one flattened watermark period."""
    steps = _flatten_steps(member_dims)
    return steps[-1][1] if steps else tuple(member_dims)


def embed(
    img: GrayImage, member: FamilyMember, payload: Payload, cfg: EmbedConfig = EmbedConfig()
) -> GrayImage:
    """Add the shifted, flattened member over the whole image, tiled.

    Output pixel (r, c) = clamp(img(r, c) + strength * W[r mod th, c mod tw])
    where W = flatten(cyclic_shift(member, payload.shifts)).
    """
    p = member.params.p
    if payload.m != member.m:
        raise ValueError(f"payload member {payload.m} does not match member {member.m}")
    if len(payload.shifts) != member.arr.rank:
        raise ValueError(
            f"expected {member.arr.rank} shift components, got {len(payload.shifts)}"
        )
    if any(not 0 <= s < p for s in payload.shifts):
        raise ValueError(f"shift components must be in [0, {p}), got {payload.shifts}")
    w = flatten(member.arr.cyclic_shift(payload.shifts)).values
    th, tw = w.shape
    if img.height < th or img.width < tw:
        raise ValueError(
            f"image {img.width}x{img.height} smaller than one {tw}x{th} watermark tile"
        )
    reps = (-(-img.height // th), -(-img.width // tw))
    tiled = np.tile(w, reps)[: img.height, : img.width]
    marked = np.clip(
        img.pixels.astype(np.int16) + cfg.strength * tiled.astype(np.int16), 0, 255
    )
    return GrayImage(marked.astype(np.uint8))


def _float_correlation(data: np.ndarray, ref: np.ndarray) -> np.ndarray:
    axes = tuple(range(data.ndim))
    fd = np.fft.rfftn(data, s=data.shape, axes=axes)
    fr = np.fft.rfftn(ref, s=data.shape, axes=axes)
    return np.fft.irfftn(np.conj(fd) * fr, s=data.shape, axes=axes)


def extract(
    img: GrayImage, family: ArrayFamily, snr_threshold: float = DEFAULT_SNR_THRESHOLD
) -> ExtractionResult:
    """Recover (member, shifts) from a marked image by correlation peak search.

    The image is cropped to whole tiles, the tiles are summed into one
    period (coherent gain), the tile mean is removed (members are zero-sum,
    so this only suppresses the carrier's DC), and the period is partitioned
    back into rank 2n. The returned snr is the peak against the RMS of all
    other correlation entries across every member; results with snr below
    `snr_threshold` keep their payload but are flagged not confident.
    """
    member_dims = family[0].arr.dims
    th, tw = tile_dims(member_dims)
    rows, cols = img.height // th, img.width // tw
    if rows < 1 or cols < 1:
        raise ValueError(
            f"image {img.width}x{img.height} smaller than one {tw}x{th} watermark tile"
        )
    crop = img.pixels[: rows * th, : cols * tw].astype(np.float64)
    folded = crop.reshape(rows, th, cols, tw).sum(axis=(0, 2))
    folded -= folded.mean()
    data = _unflatten_values(folded, member_dims)

    best_value = -np.inf
    best_m = 0
    best_shift = (0,) * len(member_dims)
    total_sq = 0.0
    total_count = 0
    for member in family:
        table = _float_correlation(data, member.arr.values.astype(np.float64))
        total_sq += float(np.sum(table**2))
        total_count += table.size
        peak_idx = np.unravel_index(np.argmax(table), table.shape)
        value = float(table[peak_idx])
        if value > best_value:
            best_value = value
            best_m = member.m
            best_shift = tuple(int(x) for x in peak_idx)

    rest_sq = max(total_sq - best_value**2, 0.0)
    rest_count = total_count - 1
    rms = math.sqrt(rest_sq / rest_count) if rest_count > 0 else 0.0
    if rms > 0:
        snr = best_value / rms
    else:
        snr = math.inf if best_value > 0 else 0.0
    return ExtractionResult(
        payload=Payload(m=best_m, shifts=best_shift),
        score=best_value,
        snr=snr,
        confident=snr >= snr_threshold,
    )
