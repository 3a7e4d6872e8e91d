"""Recipe configuration: the flat key=value file driving batch runs.

The file is line-oriented ``key = value`` text; ``#`` starts a comment and
blank lines are ignored.  Keys mirror the RecipeConfig fields one-to-one,
unknown keys are rejected (typo protection), and every resolved value can be
dumped back out via ``augment run --print-effective-config``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .augment import AnglePreset, AugmentConfig

OPERATORS = ("polarmix", "scene_swap", "rotate_paste", "simple_paste", "mix3d", "cga", "uda_mix")
PAIRINGS = ("shuffled", "sequential")

# Operators for which the class list must be stated explicitly.
CLASS_OPERATORS = ("polarmix", "rotate_paste", "simple_paste", "uda_mix")


class ConfigError(Exception):
    """Invalid recipe file or option combination."""


def deg_to_rad(deg: float) -> float:
    # 2*pi * (deg/360) rather than radians(): exact at 180/360 and easy to
    # reproduce in other runtimes, which matters for replayable rng draws.
    return 2.0 * math.pi * (deg / 360.0)


@dataclass(frozen=True)
class RecipeConfig:
    """One batch run, fully determined: operator, inputs, sampling, seed."""

    operator: str
    output_root: Path
    input_root: Path | None = None
    source_root: Path | None = None
    target_root: Path | None = None
    pairing: str = "shuffled"
    multiplier: int = 1
    seed: int = 0
    workers: int = 1
    augment: AugmentConfig = field(default_factory=AugmentConfig)
    scale_lo: float = 0.95
    scale_hi: float = 1.05
    conf_threshold: float = 0.0

    def __post_init__(self) -> None:
        if self.operator not in OPERATORS:
            raise ConfigError(f"operator must be one of {', '.join(OPERATORS)}; got {self.operator!r}")
        if self.pairing not in PAIRINGS:
            raise ConfigError(f"pairing must be one of {', '.join(PAIRINGS)}; got {self.pairing!r}")
        if self.multiplier < 1:
            raise ConfigError(f"multiplier must be >= 1, got {self.multiplier}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


_DEFAULTS: dict[str, str] = {
    "pairing": "shuffled",
    "multiplier": "1",
    "seed": "0",
    "workers": "1",
    "sector_width_deg": "180",
    "angle_preset": "kitti3",
    "angles_deg": "",
    "classes": "",
    "delta1": "0.5",
    "delta2": "1.0",
    "scale_lo": "0.95",
    "scale_hi": "1.05",
    "conf_threshold": "0.0",
}

_ALL_KEYS = frozenset(_DEFAULTS) | {
    "operator",
    "input_root",
    "source_root",
    "target_root",
    "output_root",
}


def parse_config_text(text: str, *, origin: str = "<config>") -> dict[str, str]:
    """Parse flat key=value lines into a string map, rejecting unknown keys."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _parse_int(values: dict[str, str], key: str, origin: str) -> int:
    try:
        return int(values[key])
    except ValueError as exc:
        raise ConfigError(f"{origin}: {key} must be an integer, got {values[key]!r}") from exc


def _parse_float(values: dict[str, str], key: str, origin: str) -> float:
    try:
        return float(values[key])
    except ValueError as exc:
        raise ConfigError(f"{origin}: {key} must be a number, got {values[key]!r}") from exc


def _parse_id_list(text: str, key: str, origin: str) -> frozenset[int]:
    ids = set()
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            ids.add(int(chunk))
        except ValueError as exc:
            raise ConfigError(f"{origin}: {key} entries must be integers, got {chunk!r}") from exc
    return frozenset(ids)


def recipe_from_values(values: dict[str, str], *, origin: str = "<config>") -> RecipeConfig:
    """Validate a parsed key map and build the RecipeConfig."""
    merged = dict(_DEFAULTS)
    merged.update(values)

    operator = merged.get("operator", "")
    if operator not in OPERATORS:
        raise ConfigError(f"{origin}: operator must be one of {', '.join(OPERATORS)}; got {operator!r}")

    if merged.get("pairing") not in PAIRINGS:
        raise ConfigError(f"{origin}: pairing must be one of {', '.join(PAIRINGS)}; got {merged.get('pairing')!r}")

    if "output_root" not in merged:
        raise ConfigError(f"{origin}: output_root is required")
    output_root = Path(merged["output_root"])

    input_root = Path(merged["input_root"]) if "input_root" in merged else None
    source_root = Path(merged["source_root"]) if "source_root" in merged else None
    target_root = Path(merged["target_root"]) if "target_root" in merged else None

    if operator == "uda_mix":
        if input_root is not None:
            raise ConfigError(f"{origin}: uda_mix takes source_root/target_root, not input_root")
        if source_root is None or target_root is None:
            raise ConfigError(f"{origin}: uda_mix requires both source_root and target_root")
    else:
        if source_root is not None or target_root is not None:
            raise ConfigError(f"{origin}: source_root/target_root are only valid for uda_mix")
        if input_root is None:
            raise ConfigError(f"{origin}: input_root is required")

    out_resolved = output_root.resolve()
    for root in (input_root, source_root, target_root):
        if root is None:
            continue
        in_resolved = root.resolve()
        if in_resolved == out_resolved or out_resolved.is_relative_to(in_resolved) or in_resolved.is_relative_to(out_resolved):
            raise ConfigError(f"{origin}: output_root must be disjoint from input roots")

    multiplier = _parse_int(merged, "multiplier", origin)
    if multiplier < 1:
        raise ConfigError(f"{origin}: multiplier must be >= 1, got {multiplier}")
    workers = _parse_int(merged, "workers", origin)
    if workers < 1:
        raise ConfigError(f"{origin}: workers must be >= 1, got {workers}")
    seed = _parse_int(merged, "seed", origin)

    classes = _parse_id_list(merged["classes"], "classes", origin)
    if operator in CLASS_OPERATORS and "classes" not in values:
        raise ConfigError(
            f"{origin}: operator {operator} requires an explicit 'classes' key "
            "(it may be empty to disable cropping, but must be stated)"
        )

    preset_name = merged["angle_preset"]
    if preset_name == "kitti3":
        preset = AnglePreset.kitti3()
    elif preset_name == "perpendicular2":
        preset = AnglePreset.perpendicular2()
    elif preset_name == "explicit":
        angles_text = merged["angles_deg"]
        angles = []
        for chunk in angles_text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                angles.append(deg_to_rad(float(chunk)))
            except ValueError as exc:
                raise ConfigError(f"{origin}: angles_deg entries must be numbers, got {chunk!r}") from exc
        if not angles and operator in ("polarmix", "rotate_paste", "uda_mix"):
            raise ConfigError(f"{origin}: angle_preset=explicit requires a non-empty angles_deg")
        preset = AnglePreset.explicit(angles)
    else:
        raise ConfigError(
            f"{origin}: angle_preset must be kitti3, perpendicular2 or explicit; got {preset_name!r}"
        )

    sector_width_deg = _parse_float(merged, "sector_width_deg", origin)
    if not 0.0 <= sector_width_deg <= 360.0:
        raise ConfigError(f"{origin}: sector_width_deg outside [0, 360]")

    delta1 = _parse_float(merged, "delta1", origin)
    delta2 = _parse_float(merged, "delta2", origin)
    scale_lo = _parse_float(merged, "scale_lo", origin)
    scale_hi = _parse_float(merged, "scale_hi", origin)
    if operator == "cga" and not (0.0 < scale_lo <= scale_hi):
        raise ConfigError(f"{origin}: need 0 < scale_lo <= scale_hi for cga")
    conf_threshold = _parse_float(merged, "conf_threshold", origin)

    try:
        aug = AugmentConfig(
            classes=classes,
            sector_width=deg_to_rad(sector_width_deg),
            angle_preset=preset,
            delta1=delta1,
            delta2=delta2,
            seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(f"{origin}: {exc}") from exc

    return RecipeConfig(
        operator=operator,
        output_root=output_root,
        input_root=input_root,
        source_root=source_root,
        target_root=target_root,
        pairing=merged["pairing"],
        multiplier=multiplier,
        seed=seed,
        workers=workers,
        augment=aug,
        scale_lo=scale_lo,
        scale_hi=scale_hi,
        conf_threshold=conf_threshold,
    )


def load_recipe(path: Path | str) -> RecipeConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return recipe_from_values(parse_config_text(text, origin=str(path)), origin=str(path))


def effective_config_text(cfg: RecipeConfig) -> str:
    """Render the fully resolved configuration back as parseable key=value text."""
    lines = [f"operator = {cfg.operator}"]
    if cfg.input_root is not None:
        lines.append(f"input_root = {cfg.input_root}")
    if cfg.source_root is not None:
        lines.append(f"source_root = {cfg.source_root}")
    if cfg.target_root is not None:
        lines.append(f"target_root = {cfg.target_root}")
    lines += [
        f"output_root = {cfg.output_root}",
        f"pairing = {cfg.pairing}",
        f"multiplier = {cfg.multiplier}",
        f"seed = {cfg.seed}",
        f"workers = {cfg.workers}",
        f"sector_width_deg = {math.degrees(cfg.augment.sector_width):g}",
        f"classes = {','.join(str(c) for c in sorted(cfg.augment.classes))}",
        f"angle_preset = {cfg.augment.angle_preset.kind}",
        f"angles_deg = {','.join(f'{math.degrees(a):g}' for a in cfg.augment.angle_preset.angles)}",
        f"delta1 = {cfg.augment.delta1:g}",
        f"delta2 = {cfg.augment.delta2:g}",
        f"scale_lo = {cfg.scale_lo:g}",
        f"scale_hi = {cfg.scale_hi:g}",
        f"conf_threshold = {cfg.conf_threshold:g}",
    ]
    return "\n".join(lines) + "\n"
