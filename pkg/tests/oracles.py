"""Exact rational re-derivations of the update rules, written independently of the package."""

from fractions import Fraction as F


def clip(x, lo=-1, hi=1):
    return max(F(lo), min(F(hi), x))


def inertia(openness):
    return 1 - F(openness) * F(1, 2)


def peer_pull(conformity, trust, neighbor_scores, attitude):
    if not neighbor_scores:
        return F(0)
    mean = sum(F(s) for s in neighbor_scores) / len(neighbor_scores)
    return F(conformity) * F(trust) * (mean - F(attitude))


def mood(prev, threat):
    return clip(F(8, 10) * F(prev) + (F(-1, 10) if threat else F(4, 100)))


def composite(econ, cult, sec, hum):
    return F(3, 10) * F(econ) + F(3, 10) * F(cult) + F(2, 10) * F(sec) - F(2, 10) * F(hum)


def attitude(prev, openness, own, pull, comp):
    i = inertia(openness)
    return clip(i * F(prev) + (1 - i) * (F(4, 10) * F(own) + F(3, 10) * F(pull) + F(3, 10) * F(comp)))


def exposure(prev, reactivity, threat):
    if not threat:
        return F(prev)
    return min(F(1), F(prev) + F(7, 100) * F(reactivity))


def close(got, exact, rel=1e-12, floor=1e-15):
    """``|got - exact| <= rel * |exact| + floor``, evaluated exactly.

    The floor (a few ulps at unit scale) only matters when ``exact`` is itself
    a cancellation result close to zero.
    """
    exact = F(exact)
    return abs(F(got) - exact) <= F(rel) * abs(exact) + F(floor)
