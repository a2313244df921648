"""Mathematical constants anchoring critical-decay prefactors and the Widom/Dyson constant."""

import math
from dataclasses import dataclass

# Glaisher's constant A = exp(1/12 - zeta'(-1)) and zeta'(-1), stored as
# independent literals and cross-checked against each other at startup.
GLAISHER_A = 1.2824271291006226368753425688697917277676889273250011920637
ZETA_PRIME_NEG1 = -0.1654211437004509292139196602427806427626482783010235401635
EULER_GAMMA = 0.5772156649015328606065120900824024310421593359399235988058


class ConstantConsistencyError(AssertionError):
    """Stored constant literals disagree with their defining relation."""


@dataclass(frozen=True)
class MathConstants:
    glaisher_A: float
    euler_gamma: float
    zeta_prime_neg1: float
    pi: float

    def __post_init__(self):
        derived = math.exp(1.0 / 12.0 - self.zeta_prime_neg1)
        if abs(derived - self.glaisher_A) > 1e-14:
            raise ConstantConsistencyError(
                f"exp(1/12 - zeta'(-1)) = {derived!r} != A = {self.glaisher_A!r}"
            )


def math_constants() -> MathConstants:
    """The verified constant set used throughout the package."""
    return MathConstants(
        glaisher_A=GLAISHER_A,
        euler_gamma=EULER_GAMMA,
        zeta_prime_neg1=ZETA_PRIME_NEG1,
        pi=math.pi,
    )


CONSTANTS = math_constants()

# c0 = (1/12) log 2 + 3 zeta'(-1): the constant term shared by the gap
# probability expansion and the characteristic-interval determinant.
WIDOM_C0 = math.log(2.0) / 12.0 + 3.0 * ZETA_PRIME_NEG1
