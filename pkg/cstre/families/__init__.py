from cstre.families.base import StateFamily
from cstre.families.special import IsotropicQutritFamily, QubitQutritXFamily
from cstre.families.symmetric import CompressedSymmetricFamily, SymmetricNoisyFamily
from cstre.families.white_noise import WhiteNoiseFamily

__all__ = [
    "StateFamily",
    "SymmetricNoisyFamily",
    "CompressedSymmetricFamily",
    "WhiteNoiseFamily",
    "IsotropicQutritFamily",
    "QubitQutritXFamily",
]
