"""Configuration management for the fractional Laplacian toolkit."""

import math
from pathlib import Path
from dataclasses import dataclass
from typing import Dict, Optional, Union

from dotenv import dotenv_values


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and budgets shared by every quadrature call."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    tail_cutoff_tol: float = 1e-16

    def __post_init__(self):
        """Validate configuration after initialization."""
        for name in ("rel_tol", "abs_tol", "tail_cutoff_tol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be a positive finite number, got {value}")
        if self.max_subdivisions < 16:
            raise ValueError("max_subdivisions must be at least 16")

    def loosened(self, factor: float) -> "QuadConfig":
        """Copy with both tolerances multiplied by factor (used for nested integrals)."""
        return QuadConfig(
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            max_subdivisions=self.max_subdivisions,
            tail_cutoff_tol=self.tail_cutoff_tol,
        )


@dataclass(frozen=True)
class ContourSpec:
    """Vertical inversion line Re s = abscissa, truncated to |Im s| <= height."""

    abscissa: Optional[float] = None
    height: float = 16.0
    nodes: int = 256
    target_tol: float = 1e-10
    max_height: float = 400.0
    max_nodes: int = 65536

    def __post_init__(self):
        """Validate configuration after initialization."""
        if not self.height > 0:
            raise ValueError("Contour height must be positive")
        if self.nodes < 64:
            raise ValueError("Contour needs at least 64 nodes")
        if self.max_height < self.height:
            raise ValueError("max_height cannot be below the starting height")
        if self.max_nodes < self.nodes:
            raise ValueError("max_nodes cannot be below nodes")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")
        if self.abscissa is not None and not math.isfinite(self.abscissa):
            raise ValueError("Contour abscissa must be finite")

    def at(self, abscissa: float) -> "ContourSpec":
        """Same contour settings on another vertical line."""
        return ContourSpec(
            abscissa=abscissa,
            height=self.height,
            nodes=self.nodes,
            target_tol=self.target_tol,
            max_height=self.max_height,
            max_nodes=self.max_nodes,
        )


DEFAULT_QUAD = QuadConfig()
DEFAULT_CONTOUR = ContourSpec()


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Load a flat ``key = value`` configuration file.

    Keys use the command-line flag names; dashes and underscores are
    interchangeable. Blank lines and ``#`` comments are ignored.

    Args:
        path: Path to the configuration file

    Returns:
        Dictionary mapping normalised keys (underscores) to raw string values
    """
    config_file = Path(path)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_file}")

    values = dotenv_values(config_file)

    settings = {}
    for key, value in values.items():
        if value is None:
            raise ValueError(f"Missing value for '{key}' in {config_file}")
        settings[key.strip().lstrip("-").replace("-", "_")] = value.strip()

    return settings
