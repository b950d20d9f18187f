"""
Seeded 64-bit linear congruential generator.

state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64,
output = state >> 33. Every sampled stream in the claims layer draws from
this generator so that runs are reproducible from the seed alone.
"""
import logging

logger = logging.getLogger(__name__)

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1
OUTPUT_BITS = 31


class Lcg:
    def __init__(self, seed=0):
        self.state = seed & MASK

    def next(self):
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK
        return self.state >> 33

    def below(self, n):
        """Uniform integer in [0, n) by rejection."""
        if n < 1:
            raise ValueError(f"below() needs n >= 1, got {n}")
        if n == 1:
            return 0
        if n <= 1 << OUTPUT_BITS:
            bits, draw = OUTPUT_BITS, self.next
        else:
            bits, draw = 2 * OUTPUT_BITS, lambda: (self.next() << OUTPUT_BITS) | self.next()
            if n > 1 << bits:
                raise ValueError(f"below() supports n <= 2^{bits}")
        limit = (1 << bits) - (1 << bits) % n
        while True:
            r = draw()
            if r < limit:
                return r % n

    def between(self, lo, hi):
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def choice(self, items):
        return items[self.below(len(items))]
