"""End-to-end certification loop over discretization levels.

Levels are attempted per the configured schedule up to and including the
cap; each level is discretized, solved, lifted, and certified, and the
loop stops at the first certified level.  Failed levels are recorded and
skipped -- only a run where every level fails is fatal.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .certify import certify
from .discretize import build_finite, lift
from .errors import AllLevelsFailed, BnecertError, NoConvergence
from .solver import check_prop1, default_alphas, solve_enum, solve_fp, solve_lp

DIAGNOSTIC_GRID = 1001


@dataclass(frozen=True)
class RunConfig:
    epsilon: float
    max_level: int = 32
    schedule: str = "linear"  # or "doubling"
    backend: str = "auto"     # auto | lp | fp | enum_oracle
    fp_max_iters: int = 2000
    quad_tol: float | None = None
    output_path: str | None = None
    emit_curves: bool = False

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.max_level < 1:
            raise ValueError("max_level must be >= 1")
        if self.schedule not in ("linear", "doubling"):
            raise ValueError(f"unknown schedule {self.schedule!r}")
        if self.backend not in ("auto", "lp", "fp", "enum_oracle"):
            raise ValueError(f"unknown backend {self.backend!r}")


@dataclass
class RunReport:
    config: RunConfig
    status: str = "exhausted"
    certified_level: int | None = None
    levels: list = field(default_factory=list)
    strategies: dict | None = None
    diagnostics: list = field(default_factory=list)
    # (n, F, G, certificate) per solved level; not serialized
    level_strategies: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {
            "config": {
                "epsilon": self.config.epsilon,
                "max_level": self.config.max_level,
                "schedule": self.config.schedule,
                "backend": self.config.backend,
                "fp_max_iters": self.config.fp_max_iters,
                "quad_tol": self.config.quad_tol,
            },
            "status": self.status,
            "certified_level": self.certified_level,
            "levels": self.levels,
            "strategies": self.strategies,
            "diagnostics": self.diagnostics,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def schedule_levels(schedule, max_level):
    """Level sequence: linear 1, 2, 3, ...; doubling 1, 2, 4, 8, ..."""
    if schedule == "linear":
        return list(range(1, max_level + 1))
    levels = []
    n = 1
    while n <= max_level:
        levels.append(n)
        n *= 2
    return levels


def sup_distance(A, B, grid_points=DIAGNOSTIC_GRID):
    """Max over a dense grid and all actions of |F_A - F_B|."""
    grid = np.linspace(0.0, 1.0, grid_points)
    worst = 0.0
    for theta in grid:
        diff = np.max(np.abs(A.values(theta) - B.values(theta)))
        worst = max(worst, float(diff))
    return worst


def convergence_diagnostic(level_strategies):
    """Sup-distances between consecutive solved levels (weak-convergence
    proxy; no assertion is attached -- convergence is only guaranteed
    along a subsequence)."""
    table = []
    for (na, Fa, Ga), (nb, Fb, Gb) in zip(level_strategies,
                                          level_strategies[1:]):
        table.append({
            "level_a": na,
            "level_b": nb,
            "sup_distance1": sup_distance(Fa, Fb),
            "sup_distance2": sup_distance(Ga, Gb),
        })
    return table


def _solve_level(fg, backend, g, prop1, cfg):
    """Run the selected backend; fictitious play falls back to its best
    iterate when the target gap is out of reach."""
    if backend == "lp":
        alpha1, alpha2 = default_alphas(fg, g, prop1)
        return solve_lp(fg, alpha1, alpha2), None
    if backend == "enum_oracle":
        return solve_enum(fg), None
    try:
        return solve_fp(fg, max_iters=cfg.fp_max_iters,
                        target_gap=cfg.epsilon / 10.0), None
    except NoConvergence as exc:
        return exc.result, "fp did not reach the target gap; best iterate used"


def run(g, cfg):
    """Schedule levels, solve, lift, certify; stop on the first success."""
    report = RunReport(config=cfg)
    backend = cfg.backend
    prop1 = None
    if backend in ("auto", "lp"):
        prop1 = check_prop1(g)
        if backend == "auto":
            backend = "lp" if prop1.linearizable else "fp"
        elif not prop1.linearizable:
            raise ValueError(
                "lp backend requires the multiplier condition; "
                "check_prop1 did not detect it"
            )

    solved = []  # (n, F, G, certificate)
    failures = 0
    levels = schedule_levels(cfg.schedule, cfg.max_level)
    for n in levels:
        record = {"n": n, "backend": backend}
        start = time.perf_counter()
        try:
            fg = build_finite(g, n)
            result, note = _solve_level(fg, backend, g, prop1, cfg)
            F = lift(result.profile, 1, actions=g.actions1)
            G = lift(result.profile, 2, actions=g.actions2)
            cert = certify(g, F, G, cfg.epsilon, cfg.quad_tol)
            record.update({
                "finite_gap1": result.finite_gap1,
                "finite_gap2": result.finite_gap2,
                "solver_iterations": result.iterations,
                "certificate": cert.to_dict(),
                "note": note,
                "error": None,
            })
            solved.append((n, F, G, cert))
        except BnecertError as exc:
            failures += 1
            record.update({"error": f"{type(exc).__name__}: {exc}"})
            record["wall_time"] = time.perf_counter() - start
            report.levels.append(record)
            continue
        record["wall_time"] = time.perf_counter() - start
        report.levels.append(record)
        if cert.certified:
            report.status = "certified"
            report.certified_level = n
            break

    if not solved:
        raise AllLevelsFailed(f"all {len(levels)} levels failed")

    report.level_strategies = solved
    report.diagnostics = convergence_diagnostic(
        [(n, F, G) for n, F, G, _ in solved]
    )
    if report.status == "certified":
        n, F, G, _ = solved[-1]
    else:
        # best uncertified attempt by conservative worst-case gap
        n, F, G, _ = min(
            solved,
            key=lambda item: max(item[3].gap1 + item[3].quad_error1,
                                 item[3].gap2 + item[3].quad_error2),
        )
    report.strategies = {
        "player1": F.serialize(1),
        "player2": G.serialize(2),
    }
    return report
