"""Passage-time report container with JSON and CSV serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

_GMFPT_CONSISTENCY_TOL = 1e-9

NORMALIZATION_NOTE = "grmfpt is the mean of gmfpt over all targets"


@dataclass(frozen=True)
class MfptReport:
    """MFPT results for one (graph, strategy) pair.

    Exact reports and all-pairs simulations carry the per-target vector g_z
    and optionally the full matrix m[a, z]; sampled-pair simulations carry
    only the scalar estimate with its standard error.
    """

    strategy: str
    method: str                      # "exact" | "simulated"
    n_nodes: int
    grmfpt: float
    gmfpt_per_target: Optional[np.ndarray] = None
    mfpt_matrix: Optional[np.ndarray] = None
    normalization: str = NORMALIZATION_NOTE
    pairs_sampled: Optional[int] = None
    repetitions: Optional[int] = None
    total_trajectories: Optional[int] = None
    censored: Optional[int] = None
    standard_error: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.method not in ("exact", "simulated"):
            raise ValueError(f"unknown method tag {self.method!r}")
        if self.mfpt_matrix is not None:
            m = self.mfpt_matrix
            off = ~np.eye(self.n_nodes, dtype=bool)
            if m.shape != (self.n_nodes, self.n_nodes):
                raise ValueError("mfpt matrix shape does not match n_nodes")
            if np.any(m[off] < 1.0):
                raise ValueError("passage times below 1 step in mfpt matrix")
            if self.gmfpt_per_target is not None:
                recomputed = m.sum(axis=0) / (self.n_nodes - 1)
                drift = float(np.abs(recomputed - self.gmfpt_per_target).max())
                if drift > _GMFPT_CONSISTENCY_TOL * max(
                        1.0, float(np.abs(self.gmfpt_per_target).max())):
                    raise ValueError(
                        f"gmfpt vector disagrees with mfpt matrix by {drift:.3e}")

    def to_json_dict(self, include_matrix: bool = False) -> dict:
        out = {
            "strategy": self.strategy,
            "method": self.method,
            "n_nodes": self.n_nodes,
            "grmfpt": self.grmfpt,
            "normalization": self.normalization,
        }
        if self.gmfpt_per_target is not None:
            out["gmfpt_per_target"] = [float(x) for x in self.gmfpt_per_target]
        if include_matrix and self.mfpt_matrix is not None:
            out["mfpt_matrix"] = [[float(x) for x in row]
                                  for row in self.mfpt_matrix]
        for key in ("pairs_sampled", "repetitions", "total_trajectories",
                    "censored", "standard_error", "seed"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        return out

    def to_json(self, include_matrix: bool = False, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(include_matrix), indent=indent)

    @classmethod
    def from_json_dict(cls, d: dict) -> "MfptReport":
        gmfpt = d.get("gmfpt_per_target")
        matrix = d.get("mfpt_matrix")
        return cls(
            strategy=d["strategy"],
            method=d["method"],
            n_nodes=d["n_nodes"],
            grmfpt=d["grmfpt"],
            gmfpt_per_target=None if gmfpt is None else np.asarray(gmfpt),
            mfpt_matrix=None if matrix is None else np.asarray(matrix),
            normalization=d.get("normalization", NORMALIZATION_NOTE),
            pairs_sampled=d.get("pairs_sampled"),
            repetitions=d.get("repetitions"),
            total_trajectories=d.get("total_trajectories"),
            censored=d.get("censored"),
            standard_error=d.get("standard_error"),
            seed=d.get("seed"),
        )

    def to_csv_text(self) -> str:
        """Per-target rows (target, gmfpt), then a summary row with G."""
        lines = ["target,gmfpt"]
        if self.gmfpt_per_target is not None:
            lines.extend(f"{z},{float(v)!r}"
                         for z, v in enumerate(self.gmfpt_per_target))
        lines.append(f"G,{float(self.grmfpt)!r}")
        return "\n".join(lines) + "\n"
