"""Experiment configuration: schema, validation, and shipped presets.

A config is a JSON object:

    {
      "schema_version": 1,
      "name": "regular-half",
      "generator": {"kind": "dilute", "alpha": "1/2", "n": 100000, "seed": 7},
      "oracle": {"kind": "proxy"},
      "grid": {"start": 64, "ratio": 1.3, "boundaries": true},
      "extract": {
        "epsilon": "1/5", "target_n": 50000, "lookahead": 512,
        "floor_dim_H": "3/5", "floor_dim_P": null
      }
    }

Rationals are strings parsed by Fraction. A config plus the code version
determines every output byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from dimlab.errors import UsageError
from dimlab.generators import GeneratorSpec

SCHEMA_VERSION = 1


@dataclass
class ExtractSettings:
    epsilon: Fraction
    target_n: int
    lookahead: int = 8
    variation_blocks: int = 3
    search_budget: int = 100000
    n0: int | None = None
    floor_dim_H: Fraction | None = None
    floor_dim_P: Fraction | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ExtractSettings":
        try:
            return cls(
                epsilon=Fraction(d["epsilon"]),
                target_n=int(d["target_n"]),
                lookahead=int(d.get("lookahead", 8)),
                variation_blocks=int(d.get("variation_blocks", 3)),
                search_budget=int(d.get("search_budget", 100000)),
                n0=int(d["n0"]) if d.get("n0") is not None else None,
                floor_dim_H=Fraction(d["floor_dim_H"]) if d.get("floor_dim_H") else None,
                floor_dim_P=Fraction(d["floor_dim_P"]) if d.get("floor_dim_P") else None,
            )
        except (KeyError, ValueError, ZeroDivisionError) as e:
            raise UsageError(f"bad extract settings: {e}")

    def to_dict(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "target_n": self.target_n,
            "lookahead": self.lookahead,
            "variation_blocks": self.variation_blocks,
            "search_budget": self.search_budget,
            "n0": self.n0,
            "floor_dim_H": str(self.floor_dim_H) if self.floor_dim_H is not None else None,
            "floor_dim_P": str(self.floor_dim_P) if self.floor_dim_P is not None else None,
        }


@dataclass
class ExperimentConfig:
    name: str
    generator: GeneratorSpec
    oracle_kind: str = "proxy"
    oracle_budget: int | None = None
    oracle_max_program_len: int | None = None
    grid_start: int = 64
    grid_ratio: float = 1.3
    grid_boundaries: bool = True
    extract: ExtractSettings | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise UsageError("config must be a JSON object")
        version = d.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise UsageError(f"unsupported schema_version {version}")
        for key in ("name", "generator"):
            if key not in d:
                raise UsageError(f"config missing required key {key!r}")
        try:
            gen = GeneratorSpec.from_dict(d["generator"])
        except (KeyError, ValueError, ZeroDivisionError) as e:
            raise UsageError(f"bad generator spec: {e}")
        oracle = d.get("oracle", {})
        kind = oracle.get("kind", "proxy")
        if kind not in ("proxy", "exact"):
            raise UsageError(f"unknown oracle kind {kind!r}")
        grid = d.get("grid", {})
        ext = d.get("extract")
        return cls(
            name=str(d["name"]),
            generator=gen,
            oracle_kind=kind,
            oracle_budget=(int(oracle["budget"])
                           if oracle.get("budget") is not None else None),
            oracle_max_program_len=(int(oracle["max_program_len"])
                                    if oracle.get("max_program_len") is not None
                                    else None),
            grid_start=int(grid.get("start", 64)),
            grid_ratio=float(grid.get("ratio", 1.3)),
            grid_boundaries=bool(grid.get("boundaries", True)),
            extract=ExtractSettings.from_dict(ext) if ext else None,
        )

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "name": self.name,
            "generator": self.generator.to_dict(),
            "oracle": {"kind": self.oracle_kind,
                       "budget": self.oracle_budget,
                       "max_program_len": self.oracle_max_program_len},
            "grid": {"start": self.grid_start, "ratio": self.grid_ratio,
                     "boundaries": self.grid_boundaries},
            "extract": self.extract.to_dict() if self.extract else None,
        }


def shipped_configs() -> dict[str, ExperimentConfig]:
    """Presets used by the acceptance suite and the experiment demo."""
    return {
        "regular-half": ExperimentConfig(
            name="regular-half",
            generator=GeneratorSpec(kind="dilute", n=100000,
                                    alpha=Fraction(1, 2), seed=7),
            extract=ExtractSettings(
                epsilon=Fraction(1, 5), target_n=50000, lookahead=512,
                floor_dim_H=Fraction(3, 5)),
        ),
        "oscillating-low": ExperimentConfig(
            name="oscillating-low",
            generator=GeneratorSpec(kind="oscillate", n=100000,
                                    alpha=Fraction(3, 10),
                                    beta=Fraction(6, 10), seed=7),
            extract=ExtractSettings(
                epsilon=Fraction(3, 20), target_n=60000, lookahead=512,
                floor_dim_H=Fraction(7, 20), floor_dim_P=Fraction(3, 4)),
        ),
        "zeros-degenerate": ExperimentConfig(
            name="zeros-degenerate",
            generator=GeneratorSpec(kind="zeros", n=100000),
            extract=ExtractSettings(
                epsilon=Fraction(1, 5), target_n=50000, lookahead=512),
        ),
    }
