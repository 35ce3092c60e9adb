"""Outcome of a randomized falsification run."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

FALSIFIED = "falsified"
NOT_FALSIFIED = "not_falsified"


@dataclass(frozen=True)
class ConvexityVerdict:
    """Result of a statistical falsifier.

    ``not_falsified`` is evidence gathered over ``trials_run`` samples, never a
    certificate. When ``status`` is ``falsified`` the witness records the first
    violating trial (lowest trial index), so a fixed seed always reports the same one.
    """

    status: str
    witness: Optional[dict[str, Any]] = None
    trials_run: int = 0
    tolerance: float = 0.0
    kind: str = field(default="", compare=False)

    def __post_init__(self):
        if self.status not in (FALSIFIED, NOT_FALSIFIED):
            raise ValueError(f"unknown verdict status {self.status!r}")
        if (self.witness is not None) != (self.status == FALSIFIED):
            raise ValueError("witness must be present exactly when falsified")

    @property
    def falsified(self) -> bool:
        return self.status == FALSIFIED

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "status": self.status,
            "witness": self.witness,
            "trials_run": self.trials_run,
            "tolerance": self.tolerance,
        }
