"""Shared random generators for property tests (seeded by each caller)."""

import math
from fractions import Fraction

from reebspec.quadfield import QuadIrrational, pairwise_rational_ratio

TWO_PI = 2.0 * math.pi


def min_crossing_separation(freqs, duration):
    """Smallest gap between distinct crossing times t = 2k*pi/alpha_l."""
    times = []
    for f in freqs:
        k = 0
        while 2 * k * math.pi / f <= duration:
            times.append(2 * k * math.pi / f)
            k += 1
    times.sort()
    gaps = [b - a for a, b in zip(times, times[1:]) if b - a > 1e-12]
    return min(gaps) if gaps else duration


def random_rotation_pair(rng, margin=1e-3):
    """Frequencies (a1, a2) and duration with every T*alpha at least margin
    from an integer and all crossings separated well beyond the numeric
    engine's isolation gap (its documented resolution contract; the margin
    scales with the frequency ratio, since a fast block's dip narrows by
    that factor when it hides inside a slow block's low region)."""
    while True:
        a1 = rng.uniform(0.1, 10.0)
        a2 = rng.uniform(0.1, 10.0)
        duration = TWO_PI * rng.uniform(0.1, 10.0)
        turns = [a * duration / TWO_PI for a in (a1, a2)]
        if any(abs(t - round(t)) <= margin for t in turns):
            continue
        ratio = max(a1, a2) / min(a1, a2)
        if min_crossing_separation([a1, a2], duration) < 4e-6 * duration * ratio:
            continue
        return a1, a2, duration


def random_quad(rng, d, num_bound=20, den_bound=9, positive=False):
    """A random element of Q(sqrt(d)) with small numerators/denominators."""
    while True:
        p = Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
        q = Fraction(rng.randint(-num_bound, num_bound), rng.randint(1, den_bound))
        x = QuadIrrational(p, q, d)
        if positive and x.sign() <= 0:
            continue
        return x


def random_weights(rng, d, m, num_bound=12, den_bound=7):
    """m positive weights in Q(sqrt(d)) with pairwise irrational ratios."""
    while True:
        ws = [random_quad(rng, d, num_bound, den_bound, positive=True)
              for _ in range(m)]
        if pairwise_rational_ratio(ws) is None:
            return ws
