"""Synthetic rasterization and the changed-pixel complexity metric.

The world is painted as flat palette-indexed rectangles; complexity is the
number of pixels that differ between consecutive crops of a fixed window
around the hero, scaled to bits per second.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from brainb.config import BACKGROUND_INDEX, SessionConfig
from brainb.engine import PixelPoint, WorldState
from brainb import kernels


@dataclass(frozen=True, slots=True)
class Bitmap:
    """A width × height grid of palette indices, row-major."""

    width: int
    height: int
    data: np.ndarray = field(compare=False)

    def __post_init__(self) -> None:
        if self.data.shape != (self.height, self.width):
            raise ValueError(
                f"data shape {self.data.shape} does not match {self.height}x{self.width}"
            )
        if self.data.dtype != np.uint8:
            raise ValueError(f"palette indices must be uint8, got {self.data.dtype}")

    @property
    def pixels(self) -> np.ndarray:
        return self.data.reshape(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bitmap):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.data, other.data))
        )


def _world_rects(world: WorldState) -> np.ndarray:
    """Boxes as (n, 5) rows of x0, y0, x1, y1 (exclusive), color, in paint order.

    Row order is paint order, so boxes added later overdraw earlier ones,
    including the hero (row 0).
    """
    n = world.noc
    rects = np.empty((n, 5), dtype=np.int64)
    rects[:, 0] = world.centers[:, 0] - world.halves[:, 0]
    rects[:, 1] = world.centers[:, 1] - world.halves[:, 1]
    rects[:, 2] = world.centers[:, 0] + world.halves[:, 0] + 1
    rects[:, 3] = world.centers[:, 1] + world.halves[:, 1] + 1
    rects[:, 4] = world.colors
    return rects


def rasterize(world: WorldState, config: SessionConfig) -> Bitmap:
    buf = np.full((world.height, world.width), BACKGROUND_INDEX, dtype=np.uint8)
    kernels.paint_window(buf, _world_rects(world), 0, 0)
    return Bitmap(width=world.width, height=world.height, data=buf)


def window_origin(center: PixelPoint, window_w: int, window_h: int) -> tuple[int, int]:
    return center.x - window_w // 2, center.y - window_h // 2


def crop_window(frame: Bitmap, center: PixelPoint, window_w: int, window_h: int) -> Bitmap:
    """Cut a window_w × window_h crop centered on center.

    Parts of the window outside the frame are padded with the background
    index, so the crop shape never depends on where the hero is.
    """
    ox, oy = window_origin(center, window_w, window_h)
    out = np.full((window_h, window_w), BACKGROUND_INDEX, dtype=np.uint8)
    sx0 = max(ox, 0)
    sy0 = max(oy, 0)
    sx1 = min(ox + window_w, frame.width)
    sy1 = min(oy + window_h, frame.height)
    if sx0 < sx1 and sy0 < sy1:
        out[sy0 - oy : sy1 - oy, sx0 - ox : sx1 - ox] = frame.data[sy0:sy1, sx0:sx1]
    return Bitmap(width=window_w, height=window_h, data=out)


def render_crop(world: WorldState, center: PixelPoint, window_w: int, window_h: int) -> Bitmap:
    """Paint the window directly, skipping the full-frame rasterization.

    Equal to crop_window(rasterize(world), center, ...) by construction:
    the paint kernel clips each rectangle to the buffer, and out-of-frame
    window area stays background because no box extends past the frame.
    """
    ox, oy = window_origin(center, window_w, window_h)
    buf = np.full((window_h, window_w), BACKGROUND_INDEX, dtype=np.uint8)
    kernels.paint_window(buf, _world_rects(world), ox, oy)
    return Bitmap(width=window_w, height=window_h, data=buf)


@dataclass(frozen=True, slots=True)
class ComplexityMeter:
    window_w: int
    window_h: int
    prev_crop: Bitmap | None = None
    last_changed: int = 0
    bps: int = 0


def new_meter(config: SessionConfig) -> ComplexityMeter:
    return ComplexityMeter(window_w=config.window_w, window_h=config.window_h)


def measure(
    meter: ComplexityMeter, crop: Bitmap, config: SessionConfig
) -> tuple[ComplexityMeter, int]:
    """Fold one crop into the meter and return the new bps.

    changed counts positions where this crop differs from the previous one;
    the very first crop is compared against all-background. bps scales the
    count by the tick rate and the per-pixel bit weight.
    """
    if (crop.width, crop.height) != (meter.window_w, meter.window_h):
        raise ValueError(
            f"crop is {crop.width}x{crop.height}, meter expects "
            f"{meter.window_w}x{meter.window_h}"
        )
    if meter.prev_crop is None:
        prev_data = np.full(
            (meter.window_h, meter.window_w), BACKGROUND_INDEX, dtype=np.uint8
        )
    else:
        prev_data = meter.prev_crop.data
    changed = kernels.count_changed(prev_data, crop.data)
    bps = changed * config.ticks_per_second * config.bits_per_changed_pixel
    return (
        ComplexityMeter(
            window_w=meter.window_w,
            window_h=meter.window_h,
            prev_crop=crop,
            last_changed=changed,
            bps=bps,
        ),
        bps,
    )
