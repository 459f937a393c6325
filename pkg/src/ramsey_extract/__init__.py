from .cauchy_extractor import CauchyBranch, cauchy_subsequence, largest_grid_cell, pigeonhole_guarantee
from .ramsey_extractor import PairColoring, RamseyExtractor, RamseyResult, ramsey_pairs
from .rosenthal_dichotomy import (
    DichotomyResult, IndependentBranch, Inconclusive, RosenthalDichotomy, rosenthal_dichotomy,
)
