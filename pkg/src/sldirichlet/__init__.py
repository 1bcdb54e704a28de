"""Dirichlet spectra of -y'' + q y on [0, 1] and their large-m asymptotics."""
from .potential import (
    CosineCoeffs,
    EvenOddPair,
    HypothesisReport,
    PotentialError,
    PotentialSpec,
    PotentialTable,
    check_hypotheses,
    cosine_coefficients,
    evaluate,
    even_odd_split,
    l2_norm_squared,
    load_potential,
    mean_normalize,
    parse_potential,
)

__version__ = "0.1.0"
