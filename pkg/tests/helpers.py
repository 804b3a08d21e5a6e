"""Random matrices and stacks shared by the test modules."""
import math

import numpy as np

from monodromy import DeltaBarrier, Dielectric, Gap, LayerStack, SquareBarrier
from monodromy.transfer import MonodromyComponents, from_components


def random_components(rng, scale=3.0):
    v, w = rng.normal(0, scale, 2)
    r = math.sqrt(1 + v * v + w * w)
    theta = rng.uniform(-math.pi, math.pi)
    return MonodromyComponents(r * math.cos(theta), r * math.sin(theta), v, w)


def random_canonical(rng, scale=3.0):
    return from_components(random_components(rng, scale))


def random_layer(rng, kinds=("barrier", "delta", "dielectric", "gap")):
    kind = kinds[rng.integers(len(kinds))]
    if kind == "barrier":
        return SquareBarrier(rng.uniform(0.05, 1.0), rng.uniform(0.0, 3.0))
    if kind == "delta":
        return DeltaBarrier(rng.uniform(-5.0, 5.0))
    if kind == "dielectric":
        return Dielectric(rng.uniform(0.05, 1.0), rng.uniform(1.0, 3.0))
    return Gap(rng.uniform(0.0, 2.0))


def random_stack(rng, max_elements=8, **kw):
    n = int(rng.integers(1, max_elements + 1))
    return LayerStack(tuple(random_layer(rng, **kw) for _ in range(n)))


def mirror_stack(rng, half=3, **kw):
    """Palindromic stack built from a random half."""
    left = [random_layer(rng, **kw) for _ in range(half)]
    middle = [random_layer(rng, **kw)]
    return LayerStack(tuple(left + middle + left[::-1]))
