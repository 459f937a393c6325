from .l1_certifier import L1Certificate, L1Certifier, l1_lower_cert
from .shatter_search import IndependenceRankResult, ShatterSearch, SignedIndependenceResult, independence_rank
from .witness_transport import ip_to_op
