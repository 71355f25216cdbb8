"""Compare the three finite-game solver backends on small games.

The LP backend applies whenever the multiplier condition makes the
slack program linear (constant-sum raw utilities, or user-supplied
multipliers).  Fictitious play covers the general-sum case, and the
enumeration oracle double-checks small instances exhaustively.
"""

import os

import numpy as np

import bnecert as bc
from bnecert.errors import NoConvergence

HERE = os.path.dirname(__file__)


def main():
    g = bc.load_game_file(os.path.join(HERE, "specs", "zero_sum_match.json"),
                          grid_check=21)
    prop1 = bc.check_prop1(g)
    print(f"multiplier condition: {prop1.kind} (c = {prop1.c})")

    n = 2
    fg = bc.build_finite(g, n)

    lp = bc.solve_lp(fg)
    print(f"\nlp:   gaps ({lp.finite_gap1:.2e}, {lp.finite_gap2:.2e}) "
          f"in {lp.iterations} pivots")

    try:
        fp = bc.solve_fp(fg, max_iters=5000, target_gap=1e-6)
    except NoConvergence as exc:
        fp = exc.result
    print(f"fp:   gaps ({fp.finite_gap1:.2e}, {fp.finite_gap2:.2e}) "
          f"in {fp.iterations} iterations")

    enum = bc.solve_enum(fg)
    print(f"enum: gaps ({enum.finite_gap1:.2e}, {enum.finite_gap2:.2e}) "
          f"after {enum.iterations} candidates")

    print("\nplayer 1 behavioral rows (one per grid type):")
    for name, res in (("lp", lp), ("fp", fp), ("enum", enum)):
        print(f"  {name:4s} {np.round(res.profile.s, 3).tolist()}")

    # the multiplier-based weights from the spec's m1/m2 also work
    g2 = bc.load_game_file(
        os.path.join(HERE, "specs", "linear_prior_multipliers.json"),
        grid_check=21)
    prop2 = bc.check_prop1(g2)
    fg2 = bc.build_finite(g2, 4)
    alpha1, alpha2 = bc.default_alphas(fg2, g2, prop2)
    res = bc.solve_lp(fg2, alpha1, alpha2)
    print(f"\nuser-multiplier game: condition={prop2.kind}, "
          f"gaps ({res.finite_gap1:.2e}, {res.finite_gap2:.2e})")


if __name__ == "__main__":
    main()
