"""Deterministic derivative-free minimization for design searches.

Coordinate descent with golden-section line searches: the objective is
cheap and smooth in practice and the design spaces have at most a handful
of dimensions, so this beats stochastic optimizers while keeping runs
exactly reproducible.  Every objective evaluation is logged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class Evaluation:
    params: dict[str, float]
    objective: float
    info: dict = field(default_factory=dict)


@dataclass
class SearchResult:
    best_params: dict[str, float]
    best_objective: float
    best_info: dict
    evaluations: list[Evaluation]

    @property
    def n_evaluations(self) -> int:
        return len(self.evaluations)


class _Budget:
    def __init__(self, budget: int):
        if budget < 1:
            raise ValueError("budget must be at least 1")
        self.remaining = budget

    def take(self) -> bool:
        if self.remaining <= 0:
            return False
        self.remaining -= 1
        return True


def minimize(objective: Callable[[dict[str, float]], tuple[float, dict]],
             bounds: dict[str, tuple[float, float]],
             start: dict[str, float] | None = None,
             budget: int = 50,
             sweeps: int = 4,
             xtol_rel: float = 1e-3) -> SearchResult:
    """Coordinate descent over box bounds, golden section per coordinate.

    ``objective`` maps a parameter dict to (value, info).  Variables are
    cycled in the order given by ``bounds``; each line search shrinks its
    bracket to ``xtol_rel`` of the range or until the evaluation budget is
    exhausted.  The starting point defaults to the box midpoints.  Returns
    the best evaluated point (argmin over the log).
    """
    for name, (lo, hi) in bounds.items():
        if not hi > lo:
            raise ValueError(f"empty range for {name!r}")
    point = {name: 0.5 * (lo + hi) for name, (lo, hi) in bounds.items()}
    if start:
        point.update({k: float(v) for k, v in start.items() if k in bounds})

    log: list[Evaluation] = []
    budget_ = _Budget(budget)
    cache: dict[tuple, Evaluation] = {}

    def run(params: dict[str, float]) -> Evaluation | None:
        key = tuple(sorted((k, round(v, 12)) for k, v in params.items()))
        if key in cache:
            return cache[key]
        if not budget_.take():
            return None
        value, info = objective(dict(params))
        ev = Evaluation(dict(params), float(value), info)
        cache[key] = ev
        log.append(ev)
        return ev

    current = run(point)
    if current is None:  # pragma: no cover - budget >= 1 guarantees one eval
        raise RuntimeError("budget exhausted before the first evaluation")

    for _ in range(sweeps):
        if budget_.remaining <= 0:
            break
        for name, (lo, hi) in bounds.items():
            if budget_.remaining <= 0:
                break
            best_line = _golden_line(run, dict(current.params), name, lo, hi,
                                     xtol_rel * (hi - lo))
            if best_line is not None and best_line.objective < current.objective:
                current = best_line

    best = min(log, key=lambda ev: (ev.objective, tuple(sorted(ev.params.items()))))
    return SearchResult(dict(best.params), best.objective, best.info, log)


def _golden_line(run, params: dict[str, float], name: str, lo: float, hi: float,
                 xtol: float) -> Evaluation | None:
    """Golden-section search along one coordinate; returns the best point."""
    def at(x):
        p = dict(params)
        p[name] = float(x)
        return run(p)

    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    ec, ed = at(c), at(d)
    best = None
    for ev in (ec, ed):
        if ev is not None and (best is None or ev.objective < best.objective):
            best = ev
    while ec is not None and ed is not None and (b - a) > xtol:
        if ec.objective < ed.objective:
            b, d, ed = d, c, ec
            c = b - INV_PHI * (b - a)
            ec = at(c)
        else:
            a, c, ec = c, d, ed
            d = a + INV_PHI * (b - a)
            ed = at(d)
        for ev in (ec, ed):
            if ev is not None and (best is None or ev.objective < best.objective):
                best = ev
    return best
