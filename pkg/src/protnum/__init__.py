"""protnum: limiting protection-number statistics of random rooted trees.

The protection number of a rooted tree is the length of the shortest path
from the root to a leaf; a vertex is k-protected when the subtree it roots
has protection number at least k.  This package computes the limiting
distribution, mean and variance of the protection number of the root and
of a random vertex for simply generated trees, unordered (polya) trees and
non-plane binary trees, to arbitrary precision with explicit tail bounds,
and validates everything against exact enumeration and seeded sampling.
"""

from .enumeration import (
    Tree,
    brute_force_stats,
    finite_probabilities,
    protected_count,
    protection_number,
    tk_coefficients,
)
from .errors import ProtnumError
from .families import (
    DEFAULT_PRECISION,
    DEFAULT_TRUNCATION,
    FamilySpec,
    PolyaAuxiliary,
    SingularityData,
    find_singularity,
    make_family,
    tree_series,
)
from .powerseries import FLOAT, RATIONAL, TruncatedSeries, solve_fixed_point
from .protection import (
    ProtectionReport,
    polya_auxiliary,
    protected_root_values,
    root_limit_probability,
    root_limits,
    sk_series,
    vertex_limits,
)
from .sampling import SampleConfig, empirical_protection, sample_tree

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION",
    "DEFAULT_TRUNCATION",
    "FLOAT",
    "FamilySpec",
    "PolyaAuxiliary",
    "ProtectionReport",
    "ProtnumError",
    "RATIONAL",
    "SampleConfig",
    "SingularityData",
    "Tree",
    "TruncatedSeries",
    "brute_force_stats",
    "empirical_protection",
    "find_singularity",
    "finite_probabilities",
    "make_family",
    "polya_auxiliary",
    "protected_count",
    "protected_root_values",
    "protection_number",
    "root_limit_probability",
    "root_limits",
    "sample_tree",
    "sk_series",
    "solve_fixed_point",
    "tk_coefficients",
    "tree_series",
]
