from .feature_selector import FeatureFailure, FeatureSelector, select_features
from .monotone_table import MonotoneTable, build_monotone_table, feature_vectors
from .type_approximator import ApproxResult, TypeApproximator, approximate
