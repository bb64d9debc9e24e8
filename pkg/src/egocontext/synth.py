"""Synthetic frame-stream generator for desk-scale experiments.

Each location renders a drifting color field (hue center + brightness) with
an oriented sinusoidal texture and pixel noise, so consecutive frames stay
similar (temporal smoothness) while locations separate in hue, lightness
and texture orientation. Frames with hands superimpose a skin-toned striped
patch whose edge orientation follows the location's regime, making HOG
separability regime-conditional.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .colorspace import hsv_to_rgb
from .images import ImageFrame, frame_from_array, save_image
from .manifest import Manifest, ManifestEntry, save_manifest


@dataclass(frozen=True)
class SynthConfig:
    n_locations: int = 5
    frames_per_location: int = 120
    indoor_fraction: float = 0.4
    hue_centers: tuple = None           # degrees per location
    brightness: tuple = None            # value-channel center per location
    texture_orientation: tuple = None   # degrees per location
    hand_signature: tuple = None        # patch stripe orientation per location
    noise_level: float = 6.0            # RGB units
    brightness_jitter: float = 0.05
    train_fraction: float = 0.7
    with_hands: bool = True
    hands_run: int = 10                 # frames per hands-on/off run
    frame_w: int = 96
    frame_h: int = 54
    seed: int = 42

    def __post_init__(self):
        if self.n_locations < 2:
            raise ValueError("n_locations must be >= 2")

    def resolved(self) -> dict:
        """Fill per-location defaults: spread hues, alternate textures,
        indoor locations dim and outdoor ones bright."""
        n = self.n_locations
        indoor = [i < round(n * self.indoor_fraction) for i in range(n)]
        hues = self.hue_centers or tuple((15.0 + 360.0 * i / n) % 360.0 for i in range(n))
        brightness = self.brightness or tuple(0.35 if ind else 0.75 for ind in indoor)
        texture = self.texture_orientation or tuple((0.0, 90.0, 45.0, 135.0)[i % 4] for i in range(n))
        hands_sig = self.hand_signature or tuple(90.0 if i % 2 == 0 else 0.0 for i in range(n))
        return {
            "indoor": indoor,
            "hue_centers": tuple(hues),
            "brightness": tuple(brightness),
            "texture_orientation": tuple(texture),
            "hand_signature": tuple(hands_sig),
        }

    def to_dict(self) -> dict:
        r = self.resolved()
        return {
            "n_locations": self.n_locations,
            "frames_per_location": self.frames_per_location,
            "indoor_fraction": self.indoor_fraction,
            "hue_centers": list(r["hue_centers"]),
            "brightness": list(r["brightness"]),
            "texture_orientation": list(r["texture_orientation"]),
            "hand_signature": list(r["hand_signature"]),
            "noise_level": self.noise_level,
            "brightness_jitter": self.brightness_jitter,
            "train_fraction": self.train_fraction,
            "with_hands": self.with_hands,
            "hands_run": self.hands_run,
            "frame_w": self.frame_w,
            "frame_h": self.frame_h,
            "seed": self.seed,
        }


def _render_frame(config, params, loc, hue_shift, bright_shift, phase, hands, patch_jitter):
    w, h = config.frame_w, config.frame_h
    ys, xs = np.mgrid[0:h, 0:w].astype(np.float64)

    hue = (params["hue_centers"][loc] + hue_shift + 6.0 * np.sin(2 * np.pi * xs / w)) % 360.0
    sat = np.full((h, w), 0.65)
    theta = math.radians(params["texture_orientation"][loc])
    ripple = 0.12 * np.sin(2 * np.pi * (xs * math.cos(theta) + ys * math.sin(theta)) / 8.0 + phase)
    val = np.clip(params["brightness"][loc] + bright_shift + ripple, 0.05, 1.0)

    if hands:
        cx = w / 2.0 + patch_jitter[0] * w * 0.1
        cy = h / 2.0 + patch_jitter[1] * h * 0.1
        mask = ((xs - cx) / (0.22 * w)) ** 2 + ((ys - cy) / (0.3 * h)) ** 2 <= 1.0
        phi = math.radians(params["hand_signature"][loc])
        stripes = np.sign(np.sin(2 * np.pi * (xs * math.cos(phi) + ys * math.sin(phi)) / 4.0))
        hue = np.where(mask, 25.0, hue)
        sat = np.where(mask, 0.55, sat)
        val = np.where(mask, 0.6 + 0.35 * (stripes > 0), val)

    rgb = hsv_to_rgb(np.stack([hue, sat, val], axis=-1))
    return rgb


def synth_frames(config: SynthConfig):
    """Yield (location_idx, frame_idx, ImageFrame, hands_label) in manifest order."""
    params = config.resolved()
    for loc in range(config.n_locations):
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, loc]))
        hue_walk = np.cumsum(rng.normal(scale=1.5, size=config.frames_per_location))
        bright_walk = np.clip(
            np.cumsum(rng.normal(scale=0.01, size=config.frames_per_location))
            + rng.normal(scale=config.brightness_jitter, size=config.frames_per_location),
            -3 * config.brightness_jitter - 0.1,
            3 * config.brightness_jitter + 0.1,
        )
        phases = rng.uniform(0, 2 * np.pi, size=config.frames_per_location)
        jitters = rng.uniform(-1, 1, size=(config.frames_per_location, 2))
        for f in range(config.frames_per_location):
            if config.with_hands:
                hands = "YES" if (f // config.hands_run) % 2 == 1 else "NO"
            else:
                hands = "UNKNOWN"
            rgb = _render_frame(
                config, params, loc, hue_walk[f], bright_walk[f], phases[f],
                hands == "YES", jitters[f],
            )
            noise = rng.normal(scale=config.noise_level, size=rgb.shape)
            pixels = np.clip(rgb + noise, 0, 255).astype(np.uint8)
            yield loc, f, ImageFrame(pixels=pixels), hands


def synth_generate(config: SynthConfig, out_dir) -> Manifest:
    """Render the dataset to PNG files plus a manifest.csv."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = config.resolved()
    n_train = int(round(config.frames_per_location * config.train_fraction))

    entries = []
    for loc, f, frame, hands in synth_frames(config):
        loc_dir = out_dir / f"loc{loc:02d}"
        loc_dir.mkdir(exist_ok=True)
        rel = f"loc{loc:02d}/frame{f:04d}.png"
        save_image(frame, out_dir / rel)
        entries.append(
            ManifestEntry(
                path=rel,
                split="TRAIN" if f < n_train else "TEST",
                location=f"loc{loc:02d}",
                indoor_outdoor="INDOOR" if params["indoor"][loc] else "OUTDOOR",
                hands=hands,
                sequence_index=f,
            )
        )
    manifest = Manifest(entries=entries)
    save_manifest(manifest, out_dir / "manifest.csv")
    return manifest
