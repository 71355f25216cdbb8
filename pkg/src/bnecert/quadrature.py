"""Adaptive composite Simpson quadrature with Richardson error estimates.

Each panel compares one Simpson estimate against the two-half refinement;
|S2 - S1| / 15 is the classic Richardson a-posteriori error estimate and
S2 + (S2 - S1) / 15 the extrapolated value.  Panels are processed in
deterministic depth-first order, so results do not depend on scheduling.
"""

from __future__ import annotations

from .errors import QuadratureFailure


def _simpson(fa, fm, fb, h):
    return (h / 6.0) * (fa + 4.0 * fm + fb)


def integrate(f, a, b, tol, presplit=(), max_panels=10 ** 6):
    """Integrate f over [a, b] to absolute accuracy tol.

    presplit lists interior abscissae where the integrand may kink; the
    initial partition is split there before adaptive refinement starts.

    Returns (value, error_bound) with error_bound <= tol on success.
    Raises QuadratureFailure if the panel budget runs out first.
    """
    if b <= a:
        return 0.0, 0.0
    points = sorted({a, b, *(p for p in presplit if a < p < b)})
    width = b - a

    total = 0.0
    err_total = 0.0
    panels = 0
    # stack of (lo, hi, f(lo), f(mid), f(hi), S_whole)
    stack = []
    for lo, hi in zip(points[:-1], points[1:]):
        flo, fhi = f(lo), f(hi)
        fm = f(0.5 * (lo + hi))
        stack.append((lo, hi, flo, fm, fhi, _simpson(flo, fm, fhi, hi - lo)))

    while stack:
        lo, hi, flo, fm, fhi, s_whole = stack.pop()
        panels += 1
        if panels > max_panels:
            raise QuadratureFailure(
                f"panel budget {max_panels} exceeded before reaching tol={tol}"
            )
        mid = 0.5 * (lo + hi)
        flm = f(0.5 * (lo + mid))
        frm = f(0.5 * (mid + hi))
        s_left = _simpson(flo, flm, fm, mid - lo)
        s_right = _simpson(fm, frm, fhi, hi - mid)
        s2 = s_left + s_right
        err = abs(s2 - s_whole) / 15.0
        # proportional error allocation keeps the summed bound <= tol
        if err <= tol * (hi - lo) / width or hi - lo < 1e-14:
            total += s2 + (s2 - s_whole) / 15.0
            err_total += err
            continue
        stack.append((mid, hi, fm, frm, fhi, s_right))
        stack.append((lo, mid, flo, flm, fm, s_left))

    return total, err_total


def integrate2d(f, tol):
    """Integrate f(t1, t2) over the unit square to absolute accuracy ~tol."""
    inner_tol = tol / 4.0

    def outer(t1):
        value, _ = integrate(lambda t2: f(t1, t2), 0.0, 1.0, inner_tol)
        return value

    value, err = integrate(outer, 0.0, 1.0, tol / 2.0)
    return value, err + inner_tol
