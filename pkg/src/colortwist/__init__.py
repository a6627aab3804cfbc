"""Colored braids, sl(N) ladder webs and infinite-twist stabilization, computed exactly."""

from .braidcore import (BraidWord, Coloring, CompletenessCertificate, InfiniteBraidWord,
                        color_size, find_clasp, full_twist, maximal_purity_sequence,
                        verify_completeness_certificate)
from .laurent import LaurentPoly, q_binom, q_fact, q_int
from .webalg import LadderWeb, OperatorQ, braid_euler_op, web_op

__all__ = [
    "BraidWord", "Coloring", "CompletenessCertificate", "InfiniteBraidWord", "LadderWeb",
    "LaurentPoly", "OperatorQ", "braid_euler_op", "color_size", "find_clasp", "full_twist",
    "maximal_purity_sequence", "q_binom", "q_fact", "q_int", "verify_completeness_certificate",
    "web_op",
]
