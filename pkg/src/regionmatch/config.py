"""Shared matcher configuration."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import ENUMERATE, MODES

DEFAULT_GBM_CELLS = 3000

TREE_SIDES = ("auto", "subscriptions", "updates")


@dataclass(frozen=True)
class MatcherConfig:
    """Knobs shared by every matcher entry point.

    ``workers`` is the fork-join width, ``mode`` selects between
    enumerating pairs and counting them, ``gbm_ncells`` sizes the grid
    matcher's mesh, and ``itm_tree_side`` picks which region set the tree
    matcher indexes ("auto" takes the smaller one).
    """

    workers: int = 1
    mode: str = ENUMERATE
    gbm_ncells: int = DEFAULT_GBM_CELLS
    itm_tree_side: str = "auto"

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.gbm_ncells < 1:
            raise ValueError(f"gbm_ncells must be >= 1, got {self.gbm_ncells}")
        if self.itm_tree_side not in TREE_SIDES:
            raise ValueError(
                f"unknown itm_tree_side {self.itm_tree_side!r}, expected one of {TREE_SIDES}"
            )
