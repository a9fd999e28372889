"""
Run configuration for verification commands.
Defaults come from settings.TBVERIFY (environment driven); command-line flags override them.
"""
import logging
from pathlib import Path
from typing import Dict, Optional

from django.conf import settings
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES: Dict[str, float] = {
    "biharmonic_normal": 1e-6,
    "biharmonic_tangent": 1e-6,
    "tb_s1": 1e-6,
    "tb_s2": 1e-6,
    "tb_s3": 1e-6,
    "tb_geodesic": 1e-5,
    "principal_curvatures": 1e-6,
    "isoparametric": 1e-6,
    "hopf_base": 1e-5,
    "negative_control": 0.1,
}


class RunConfig(BaseModel):
    """Numerical and output settings of one command invocation."""
    fd_step: float = 1e-4
    outer_step: float = 1e-3
    curve_step: float = 1e-2
    laplace_step: float = 1e-2
    richardson: bool = True
    geodesic_count: int = 64
    geodesic_length: float = 0.5
    geodesic_step: float = 0.01
    residual_stride: int = 5
    samples: int = 50
    seed: int = 7
    tolerances: Dict[str, float] = Field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_dir: Optional[str] = None

    @field_validator("fd_step", "outer_step", "curve_step", "laplace_step",
                     "geodesic_length", "geodesic_step")
    @classmethod
    def _positive_step(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("steps and lengths must be > 0")
        return value

    @field_validator("geodesic_count", "samples", "residual_stride")
    @classmethod
    def _positive_count(cls, value: int) -> int:
        if value < 1:
            raise ValueError("counts must be >= 1")
        return value

    @field_validator("tolerances")
    @classmethod
    def _positive_tolerances(cls, value: Dict[str, float]) -> Dict[str, float]:
        merged = {**DEFAULT_TOLERANCES, **value}
        for name, tol in merged.items():
            if tol <= 0:
                raise ValueError(f"tolerance for {name} must be > 0")
        return merged

    def tol(self, check: str) -> float:
        return self.tolerances.get(check, DEFAULT_TOLERANCES.get(check, 1e-6))

    def resolve_output(self, path: Optional[str]) -> Optional[Path]:
        """Relative output paths are placed under the configured output directory."""
        if not path:
            return None
        target = Path(path)
        if not target.is_absolute() and self.output_dir:
            target = Path(self.output_dir) / target
        return target


def get_run_config(**overrides) -> RunConfig:
    """Build a RunConfig from settings.TBVERIFY, applying non-None overrides."""
    base = dict(getattr(settings, "TBVERIFY", {}))
    tolerances = {**base.pop("tolerances", {}), **(overrides.pop("tolerances", None) or {})}
    base.update({k: v for k, v in overrides.items() if v is not None})
    base["tolerances"] = tolerances
    return RunConfig(**base)


def parse_tolerance_flags(flags: Optional[list]) -> Dict[str, float]:
    """Parse repeated '--tol check=value' flags."""
    parsed: Dict[str, float] = {}
    for flag in flags or []:
        if "=" not in flag:
            raise ValueError(f"Malformed tolerance flag: {flag!r} (expected check=value)")
        name, value = flag.split("=", 1)
        parsed[name.strip()] = float(value)
    return parsed
