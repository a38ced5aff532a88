import random

from mcenter import generators


def sample_space(rng: random.Random, n: int):
    """Random L1 space on ``n`` points; small cubes so symmetries are common."""
    if rng.random() < 0.3 and n <= 4:
        return generators.random_space(n, rng.randrange(10**6), dim=1, side=max(n - 1, 3))
    side = 2 if n <= 9 else 4
    return generators.random_space(n, rng.randrange(10**6), dim=2, side=side)


def random_spaces(count: int, seed: int, n_min: int = 1, n_max: int = 6):
    rng = random.Random(seed)
    for _ in range(count):
        yield sample_space(rng, rng.randint(n_min, n_max))
