"""Search budgets and depth caps.

Every semidecidable search in the package is cut off by one of these.
``EVALPRES_BUDGET_CAP`` in the environment clamps all candidate-count
budgets (never the precision caps).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Budgets:
    tighten_cap: int = 64
    precision_cap: int = 20
    net_level_cap: int = 12
    point_search: int = 1 << 16
    composition: int = 200_000
    cantor: int = 100_000
    cantor_depth: int = 4

    def capped(self, cap: int) -> "Budgets":
        counts = {"point_search", "composition", "cantor"}
        return replace(self, **{f.name: min(getattr(self, f.name), cap)
                                for f in fields(self) if f.name in counts})


def default_budgets() -> Budgets:
    b = Budgets()
    cap = os.environ.get("EVALPRES_BUDGET_CAP")
    if cap:
        b = b.capped(int(cap))
    return b
