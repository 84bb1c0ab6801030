"""Independent oracles shared by the test modules."""
import itertools

from shiftlab.criteria import psp_quantities
from shiftlab.spaces import SeqVector, apply_backward, norm
from shiftlab.weights import WeightSpec


def brute_triples(spec, eps, delta, window):
    """Lexicographically first (k, l, m) with both quantities below delta, by enumeration."""
    lo, hi = window
    for k, l in itertools.combinations_with_replacement(range(lo, hi + 1), 2):
        if psp_quantities(spec, eps, delta, k, l, l)[1] >= delta:
            continue
        for m in range(l, hi + 1):
            a, b = psp_quantities(spec, eps, delta, k, l, m)
            if a < delta and b < delta:
                return k, l, m
    return None


def bridge_is_monotone(spec, bridge, delta, k, l, m):
    """Every vector fed to the radial shrink has norm at least delta."""
    pts = bridge.points
    before = pts[1 : m - l + 1]
    peak = pts[m - l + 1]
    after = pts[m - l + 2 : -1]
    inputs = [peak, *before[1:]]
    inputs += [apply_backward(spec, x) for x in [peak, *after[:-1]]][: l - k]
    return all(norm(x, bridge.space) >= delta for x in inputs)


def random_instance(rng, noise=0.3):
    """Noisy orbit of a two-entry vector under weights with |w| in [0.7, 1.2]."""
    spec = WeightSpec(
        0,
        [],
        (rng.uniform(0.7, 1.2, 2) * rng.choice([-1, 1], 2)).tolist(),
        (rng.uniform(0.7, 1.2, 2) * rng.choice([-1, 1], 2)).tolist(),
    )
    n = int(rng.integers(2, 6))
    base = int(rng.integers(-3, 2))
    x = SeqVector({base + i: float(v) for i, v in enumerate(rng.uniform(-1, 1, 2))})
    points = [x]
    for _ in range(n - 1):
        points.append(apply_backward(spec, points[-1]))
    points = [p + SeqVector({int(rng.integers(base - 2, base + 2)): float(rng.uniform(-noise, noise))}) for p in points]
    return spec, points
