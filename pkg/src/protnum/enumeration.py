"""Exact finite-n ground truth.

Two independent routes to the same numbers:

* coefficient series of T_k (trees whose root protection is at least k)
  and, through the protection module, S_k (total k-protected vertices),
  both in exact rational arithmetic;
* a structural brute-force enumerator that builds every tree of size n
  under the family's symmetry notion and reads the statistics off the
  explicit objects.

Agreement of the two routes is the core acceptance check of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

from .errors import (
    EnumerationCapError,
    UndefinedProbabilityError,
    UnsupportedOracleError,
)
from .families import (
    COMPLETE_BINARY,
    NON_PLANE_BINARY,
    POLYA,
    SIMPLY_GENERATED,
    FamilySpec,
    make_family,
    tree_series,
)
from .powerseries import TruncatedSeries
from .scalars import rational

#: largest size the exhaustive generators accept by default
BRUTE_FORCE_CAP = 12


@dataclass(frozen=True)
class Tree:
    """Rooted tree; child order matters only for plane-like families.

    For the binary kinds, external leaves are materialized as childless
    nodes and only internal vertices count toward the size.
    """

    children: Tuple["Tree", ...] = ()


LEAF = Tree()


def tree_size(t: Tree, internal_only: bool = False) -> int:
    """Number of vertices, counting each occurrence of shared subtrees."""
    total = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if node.children or not internal_only:
            total += 1
        stack.extend(node.children)
    return total


def _protection_map(t: Tree) -> Dict[int, int]:
    """Protection number per distinct node object (iterative post-order)."""
    prot: Dict[int, int] = {}
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in prot:
            continue
        if not node.children:
            prot[id(node)] = 0
        elif expanded:
            prot[id(node)] = 1 + min(prot[id(c)] for c in node.children)
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
    return prot


def protection_number(t: Tree) -> int:
    """Length of the shortest path from the root down to a leaf."""
    return _protection_map(t)[id(t)]


def protected_count(t: Tree, k: int) -> int:
    """Number of vertices whose maximal subtree has protection >= k.

    Counts vertex occurrences, so trees sharing subtree objects (as the
    samplers produce) are handled correctly.  k = 0 counts every vertex.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    prot = _protection_map(t)
    count = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if prot[id(node)] >= k:
            count += 1
        stack.extend(node.children)
    return count


def protection_profile(t: Tree) -> Tuple[int, Dict[int, int]]:
    """(root protection, occurrence count per protection value)."""
    prot = _protection_map(t)
    hist: Dict[int, int] = {}
    stack = [t]
    while stack:
        node = stack.pop()
        p = prot[id(node)]
        hist[p] = hist.get(p, 0) + 1
        stack.extend(node.children)
    return prot[id(t)], hist


def canonical_key(t: Tree, ordered: bool) -> tuple:
    """Shape key; children are sorted for the unordered families."""
    keys = [canonical_key(c, ordered) for c in t.children]
    if not ordered:
        keys.sort()
    return tuple(keys)


# ----------------------------------------------------------------------
# exhaustive generators (memoized; subtrees are shared between results)
# ----------------------------------------------------------------------
@lru_cache(maxsize=None)
def _plane_forests(total: int) -> tuple:
    if total == 0:
        return ((),)
    out = []
    for s in range(1, total + 1):
        for head in _plane_trees(s):
            for rest in _plane_forests(total - s):
                out.append((head,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _plane_trees(n: int) -> tuple:
    if n == 1:
        return (LEAF,)
    return tuple(Tree(ch) for ch in _plane_forests(n - 1))


@lru_cache(maxsize=None)
def _motzkin_trees(n: int) -> tuple:
    if n == 1:
        return (LEAF,)
    m = n - 1
    out = [Tree((t,)) for t in _motzkin_trees(m)]
    for a in range(1, m):
        for left in _motzkin_trees(a):
            for right in _motzkin_trees(m - a):
                out.append(Tree((left, right)))
    return tuple(out)


@lru_cache(maxsize=None)
def _incomplete_binary_trees(n: int) -> tuple:
    # a lone child sits in either the left or the right slot, so each
    # single-child configuration is emitted twice (two distinct trees that
    # happen to share their structural image)
    if n == 1:
        return (LEAF,)
    m = n - 1
    out = []
    for t in _incomplete_binary_trees(m):
        out.append(Tree((t,)))
        out.append(Tree((t,)))
    for a in range(1, m):
        for left in _incomplete_binary_trees(a):
            for right in _incomplete_binary_trees(m - a):
                out.append(Tree((left, right)))
    return tuple(out)


@lru_cache(maxsize=None)
def _complete_binary_trees(n: int) -> tuple:
    """Complete binary trees with n internal vertices."""
    if n == 0:
        return (LEAF,)
    out = []
    for a in range(0, n):
        for left in _complete_binary_trees(a):
            for right in _complete_binary_trees(n - 1 - a):
                out.append(Tree((left, right)))
    return tuple(out)


@lru_cache(maxsize=None)
def _polya_trees(n: int) -> tuple:
    """Unordered rooted trees, one canonical representative per class."""
    if n == 1:
        return (LEAF,)
    return tuple(Tree(ch) for ch in _polya_forests(n - 1, n - 1, -1))


@lru_cache(maxsize=None)
def _polya_forests(total: int, cap_size: int, cap_index: int) -> tuple:
    """Child sequences with sizes in non-increasing canonical order.

    The first child is bounded by (cap_size, cap_index) in the (size,
    generation index) order; cap_index < 0 means no index bound.
    """
    if total == 0:
        return ((),)
    out = []
    top = min(total, cap_size)
    for s in range(top, 0, -1):
        trees = _polya_trees(s)
        hi = cap_index if (s == cap_size and cap_index >= 0) else len(trees) - 1
        for idx in range(hi, -1, -1):
            for rest in _polya_forests(total - s, s, idx):
                out.append((trees[idx],) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _npb_trees(n: int) -> tuple:
    """Non-plane complete binary trees with n internal vertices."""
    if n == 0:
        return (LEAF,)
    m = n - 1
    out = []
    for a in range(0, m // 2 + 1):
        b = m - a
        left_pool = _npb_trees(a)
        if a < b:
            for left in left_pool:
                for right in _npb_trees(b):
                    out.append(Tree((left, right)))
        else:
            for i in range(len(left_pool)):
                for j in range(i, len(left_pool)):
                    out.append(Tree((left_pool[i], left_pool[j])))
    return tuple(out)


_GENERATORS = {
    "plane": _plane_trees,
    "motzkin": _motzkin_trees,
    "incomplete-binary": _incomplete_binary_trees,
    "complete-binary": _complete_binary_trees,
    "polya": _polya_trees,
    "non-plane-binary": _npb_trees,
}


def all_trees(family: FamilySpec, n: int) -> tuple:
    """Every tree of size n under the family's symmetry notion."""
    family = make_family(family)
    gen = _GENERATORS.get(family.name)
    if gen is None:
        raise UnsupportedOracleError(
            f"no structural enumeration for {family.name}; "
            "verify it through series identities instead")
    if n < 1:
        raise EnumerationCapError("size must be at least 1")
    return gen(n)


def brute_force_stats(family: FamilySpec, n: int, k_max: int = None,
                      cap: int = BRUTE_FORCE_CAP) -> Dict[int, Tuple[int, int]]:
    """Exhaustive per-k table {k: (trees with protection >= k,
    total k-protected vertex occurrences)} over all trees of size n."""
    family = make_family(family)
    if n > cap:
        raise EnumerationCapError(
            f"n = {n} exceeds the enumeration cap {cap}; raise `cap` explicitly")
    trees = all_trees(family, n)
    profiles = [protection_profile(t) for t in trees]
    if k_max is None:
        k_max = max(max(h) for _, h in profiles)
    out = {}
    for k in range(0, k_max + 1):
        ge = sum(1 for root_p, _ in profiles if root_p >= k)
        tot = sum(c for _, h in profiles for p, c in h.items() if p >= k)
        out[k] = (ge, tot)
    return out


def stats_to_csv(family: FamilySpec, n: int, stats: Dict[int, Tuple[int, int]]) -> str:
    """CSV rows (family, n, k, trees_ge_k, protected_total)."""
    family = make_family(family)
    lines = ["family,n,k,trees_ge_k,protected_total"]
    for k in sorted(stats):
        ge, tot = stats[k]
        lines.append(f"{family.name},{n},{k},{ge},{tot}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# exact T_k coefficient series
# ----------------------------------------------------------------------
def tk_step(family: FamilySpec, prev: TruncatedSeries) -> TruncatedSeries:
    """One application of the protected-root recurrence T_{k-1} -> T_k.

    Works in either scalar mode; rational inputs give exact outputs.
    """
    kind = family.kind
    z = TruncatedSeries.variable(prev.order, prev.mode)
    if kind == SIMPLY_GENERATED:
        phi = family.phi
        phi0 = TruncatedSeries.from_values([phi.phi0], prev.order, prev.mode)
        return z * (phi.apply_to_series(prev) - phi0)
    if kind == COMPLETE_BINARY:
        return z * (prev * prev)
    if kind == NON_PLANE_BINARY:
        sym = (prev * prev + prev.substitute_power(2)).scaled(rational(1, 2))
        return z * sym
    if kind == POLYA:
        arg = prev
        i = 2
        while i <= prev.order:
            arg = arg + prev.substitute_power(i).scaled(rational(1, i))
            i += 1
        return z * arg.exp() - z
    raise UnsupportedOracleError(f"unknown family kind {kind!r}")  # pragma: no cover


@lru_cache(maxsize=None)
def tk_coefficients(family: FamilySpec, k: int, order: int) -> TruncatedSeries:
    """Exact coefficients of T_k up to `order`; k = 0 is the tree series."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return tree_series(family, order)
    return tk_step(family, tk_coefficients(family, k - 1, order))


def finite_probabilities(family: FamilySpec, n: int, k: int):
    """Exact (P(X_n >= k), P(Y_n >= k)) as rationals.

    X_n is the root protection of a random size-n tree, Y_n the protection
    of a random vertex (random internal vertex for the binary kinds).
    """
    from .protection import sk_series  # local import; protection sits above

    family = make_family(family)
    t = tree_series(family, max(n, 1))
    tn = t.coefficient(n)
    if not tn:
        raise UndefinedProbabilityError(
            f"{family.name} has no trees of size {n}; probability undefined")
    if k == 0:
        return rational(1), rational(1)
    root = tk_coefficients(family, k, n).coefficient(n) / tn
    vertex = sk_series(family, k, n).coefficient(n) / (n * tn)
    return root, vertex
