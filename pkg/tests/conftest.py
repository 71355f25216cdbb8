"""Shared builders and independent oracles for the test suite.

The oracles here deliberately avoid the library's own quadrature and
tensor code paths: Riemann sums are plain uniform midpoint sums over
numpy arrays, and reference payoff sums are naive Python loops.
"""

import numpy as np
import pytest

import bnecert as bc

RIEMANN_POINTS = 100_000


def make_game(u, v, prior="1", actions1=None, actions2=None,
              grid_check=21, **extra):
    """Build a validated InfiniteGame from string expression tables."""
    if actions1 is None:
        actions1 = tuple(f"x{i + 1}" for i in range(len(u)))
    if actions2 is None:
        actions2 = tuple(f"y{j + 1}" for j in range(len(u[0])))
    doc = {"actions1": list(actions1), "actions2": list(actions2),
           "u": u, "v": v, "prior": prior}
    doc.update(extra)
    return bc.load_game(bc.GameSpec.from_dict(doc), grid_check=grid_check)


def negate_table(u):
    return [[f"-({e})" for e in row] for row in u]


def zero_sum_match_game(grid_check=21):
    """u = theta1*theta2 on matching actions, v = -u; smooth zero-sum."""
    u = [["theta1*theta2", "0"], ["0", "theta1*theta2"]]
    return make_game(u, negate_table(u), grid_check=grid_check)


def matching_pennies_game(grid_check=21):
    """Type-independent constant-sum matching pennies (win 1, lose 0)."""
    u = [["1", "0"], ["0", "1"]]
    v = [["0", "1"], ["1", "0"]]
    return make_game(u, v, grid_check=grid_check)


def coordination_game(grid_check=21):
    """Common-interest game with identity payoffs."""
    u = [["1", "0"], ["0", "1"]]
    return make_game(u, u, grid_check=grid_check)


def random_monomial(rng, decreasing=False):
    """One random monomial of total degree <= 3 with coefficient in [0, 1].

    With decreasing=True the variables enter as (1 - theta), which makes
    the term non-increasing in both types.
    """
    var1 = "(1-theta1)" if decreasing else "theta1"
    var2 = "(1-theta2)" if decreasing else "theta2"
    p = int(rng.integers(0, 3))
    q = int(rng.integers(0, 3 - p + 1))
    factors = [f"{rng.random():.6f}"] + [var1] * p + [var2] * q
    return "*".join(factors)


def random_poly(rng, terms=3, decreasing=False):
    return " + ".join(random_monomial(rng, decreasing) for _ in range(terms))


def random_poly_game(rng, decreasing=False, grid_check=21):
    """2x2 general-sum game with random polynomial utilities.

    Expressions use only + and * so that Expr.eval also accepts numpy
    arrays (needed by the vectorized Riemann oracles below).
    """
    u = [[random_poly(rng, decreasing=decreasing) for _ in range(2)]
         for _ in range(2)]
    v = [[random_poly(rng, decreasing=decreasing) for _ in range(2)]
         for _ in range(2)]
    return make_game(u, v, grid_check=grid_check)


def random_profile(rng, n, L, H):
    s = rng.random((n, L))
    t = rng.random((n, H))
    return bc.BehavioralProfile(s / s.sum(axis=1, keepdims=True),
                                t / t.sum(axis=1, keepdims=True))


def riemann_br_value(g, player, opponent, points=RIEMANN_POINTS):
    """Uniform midpoint Riemann sum of the best-deviation integrand.

    Independent of the library quadrature; vectorized over theta, so the
    game's expressions must be +/* polynomials (or constants).
    """
    theta = (np.arange(points) + 0.5) / points
    masses = opponent.atom_masses()
    pts = opponent.atom_points
    own_count = g.L if player == 1 else g.H
    payoff = g.u if player == 1 else g.v
    best = np.full(points, -np.inf)
    for a in range(own_count):
        acc = np.zeros(points)
        for j, t in enumerate(pts):
            for o in range(masses.shape[1]):
                m = masses[j, o]
                if m == 0.0:
                    continue
                if player == 1:
                    acc = acc + m * payoff(a, o, theta, t)
                else:
                    acc = acc + m * payoff(o, a, t, theta)
        best = np.maximum(best, acc)
    return float(best.mean())


def naive_profile_value(g, F, G, player):
    """Quadruple loop over atoms; mirrors the definition, not the code."""
    payoff = g.u if player == 1 else g.v
    total = 0.0
    for i, t1 in enumerate(F.atom_points):
        for x in range(len(F.actions)):
            for j, t2 in enumerate(G.atom_points):
                for y in range(len(G.actions)):
                    total += (F.weights[i, x] / F.n) * (G.weights[j, y] / G.n) \
                        * payoff(x, y, t1, t2)
    return total


def ex_ante_value(fg, profile, player):
    """w_n of a finite-game profile (independent of the certifier)."""
    from bnecert.solver import action_values
    if player == 1:
        q = action_values(fg, 1, profile.t)
        return float((profile.s * q).sum())
    q = action_values(fg, 2, profile.s)
    return float((profile.t * q).sum())


def strip_wall_time(obj):
    """Recursively drop wall_time entries from a report dict."""
    if isinstance(obj, dict):
        return {k: strip_wall_time(v) for k, v in obj.items()
                if k != "wall_time"}
    if isinstance(obj, list):
        return [strip_wall_time(v) for v in obj]
    return obj


@pytest.fixture(scope="session")
def zero_sum_match():
    return zero_sum_match_game()


@pytest.fixture(scope="session")
def matching_pennies():
    return matching_pennies_game()


@pytest.fixture(scope="session")
def coordination():
    return coordination_game()
