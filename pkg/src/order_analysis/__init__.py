from .defect_profiler import DefectEntry, DefectProfile, DefectProfiler, defect_profile
from .staircase_search import OrderRankResult, StaircaseSearch, negation_transport, order_rank
