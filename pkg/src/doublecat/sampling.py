"""Deterministic sampling.

A 64-bit linear congruential generator, chosen so that a (seed, sample size)
pair reproduces the same sample in any implementation:

    state_0     = seed mod 2**64
    state_{k+1} = (6364136223846793005 * state_k + 1442695040888963407) mod 2**64
    below(n)    = (state_{k+1} >> 33) mod n

Each call to ``below`` advances the state once.
"""

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1


class Lcg:
    def __init__(self, seed: int = 0):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (MULTIPLIER * self.state + INCREMENT) & MASK
        return self.state

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next_u64() >> 33) % n
