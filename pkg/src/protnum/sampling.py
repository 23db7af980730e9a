"""Seeded exact-size random tree generation and empirical protection stats.

Trees of exactly n vertices are drawn from each family's weighted uniform
distribution by recursive decomposition against exact integer coefficient
tables; every probability is realized as an integer draw, so the target
distribution is exact, never approximate.  Two special cases deviate from
the table walk: cayley trees are built from uniform labelled rooted trees
(identical shape distribution, no unbounded-degree tables), and the
unordered families use their multiset decompositions (the classical
(j, d)-splitting for polya trees, pair unranking for non-plane binary).

Reproducibility: trial i of a run with seed s uses an independent
Mersenne-Twister stream seeded with SHA-256("protnum:<s>:<i>"), so
aggregates are identical no matter how trials are scheduled.
"""

from __future__ import annotations

import hashlib
import heapq
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .enumeration import LEAF, Tree, protection_number
from .errors import (
    EnumerationCapError,
    ImpossibleSizeError,
    InternalConsistencyError,
    UnsupportedOracleError,
)
from .families import (
    COMPLETE_BINARY,
    NON_PLANE_BINARY,
    POLYA,
    SIMPLY_GENERATED,
    FamilySpec,
    make_family,
)
from .scalars import rational

SAMPLING_CAP = 10_000


@dataclass(frozen=True)
class SampleConfig:
    family: str
    n: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")


def derive_rng(seed: int, trial: int) -> random.Random:
    """Per-trial substream: one independent generator per trial index."""
    digest = hashlib.sha256(f"protnum:{seed}:{trial}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


# ----------------------------------------------------------------------
# coefficient tables (plain ints; rationals only for custom weights)
# ----------------------------------------------------------------------
def _incremental_counts(family: FamilySpec, n: int) -> list:
    """t_0..t_n by direct convolution recurrences (O(n^2), no series solve)."""
    kind = family.kind
    if kind == COMPLETE_BINARY:
        t = [1]
        for m in range(0, n):
            t.append(sum(t[a] * t[m - a] for a in range(m + 1)))
        return t
    if kind == NON_PLANE_BINARY:
        t = [1]
        for m in range(0, n):
            s = sum(t[a] * t[m - a] for a in range(m + 1))
            if m % 2 == 0:
                s += t[m // 2]
            if s % 2:
                raise InternalConsistencyError("pair convolution must be even")
            t.append(s // 2)
        return t
    if kind == POLYA:
        t = [0, 1]
        a = [0]  # a_j = sum_{d|j} d t_d, filled as t grows
        for m in range(2, n + 1):
            a.append(sum(d * t[d] for d in _divisors(m - 1)))
            total = sum(a[j] * t[m - j] for j in range(1, m))
            if total % (m - 1):
                raise InternalConsistencyError("rooted-tree recurrence not integral")
            t.append(total // (m - 1))
        return t if n >= 1 else [0]
    if kind == SIMPLY_GENERATED:
        phi = family.phi
        if phi.kind == "geometric":
            # T = z / (1 - T): t_m = q_{m-1} with q the sequence counts
            q = [1]
            for m in range(1, n):
                q.append(sum(q[m - s] * q[s - 1] for s in range(1, m + 1)))
            return [0] + q[:n]
        if phi.kind == "polynomial":
            # rational weights are scaled by their common denominator D;
            # the table then holds t_n D**n, which leaves every selection
            # probability unchanged because each comparison mixes terms of
            # one fixed total size
            cs = _scaled_weights(phi.coeffs)
            d = len(cs) - 1
            t = [0]
            powers = [[1 if j == 0 else 0] for j in range(d + 1)]  # scaled T^j
            for m in range(1, n + 1):
                tm = sum(cs[j] * powers[j][m - 1]
                         for j in range(min(d, m - 1) + 1) if cs[j])
                t.append(tm)
                for j in range(d + 1):
                    if j == 0:
                        powers[0].append(0)
                    elif j == 1:
                        powers[1] = t
                    else:
                        powers[j].append(
                            sum(t[x] * powers[j - 1][m - x] for x in range(1, m + 1)))
            return t
    raise UnsupportedOracleError(f"no coefficient sampler for {family.name}")


def _scaled_weights(coeffs) -> list:
    scale = 1
    for c in coeffs:
        scale = math.lcm(scale, int(c.denominator))
    return [int(c * scale) for c in coeffs]


@lru_cache(maxsize=8)
def _tables(family: FamilySpec, n: int):
    """Everything the decomposition walk needs, built once per (family, n)."""
    t = _incremental_counts(family, n + 1)
    extra = None
    if family.kind == POLYA:
        # d_rest[j] = sum over proper divisors d of j of d * t_d
        extra = [0] * (n + 1)
        for j in range(1, n + 1):
            extra[j] = sum(d * t[d] for d in _divisors(j) if d != j)
    elif family.kind == SIMPLY_GENERATED and family.phi.kind == "polynomial":
        dmax = len(family.phi.coeffs) - 1
        extra = (_power_tables(t, dmax, n), _scaled_weights(family.phi.coeffs))
    return t, extra


def _power_tables(t: list, dmax: int, n: int) -> list:
    """Coefficient lists of T^j for j = 0..dmax up to index n."""
    zero = 0 * t[1]
    powers = [[zero] * (n + 1) for _ in range(dmax + 1)]
    powers[0][0] = 1
    powers[1] = list(t[: n + 1])
    for j in range(2, dmax + 1):
        pj = powers[j]
        pj_prev = powers[j - 1]
        for m in range(0, n + 1):
            pj[m] = sum(t[x] * pj_prev[m - x] for x in range(1, m + 1))
    return powers


@lru_cache(maxsize=None)
def _divisors(j: int) -> tuple:
    out = []
    for d in range(1, int(math.isqrt(j)) + 1):
        if j % d == 0:
            out.append(d)
            if d != j // d:
                out.append(j // d)
    return tuple(sorted(out))


def _rational_weights_to_ints(weights: list) -> list:
    """Scale rationals/ints to a common integer grid for exact draws."""
    if all(getattr(w, "denominator", 1) == 1 for w in weights):
        return [int(w) for w in weights]
    scale = 1
    for w in weights:
        scale = scale * w.denominator // math.gcd(scale, int(w.denominator))
    return [int(w * scale) for w in weights]


def _choose_index(weights: List[int], rng: random.Random) -> int:
    total = sum(weights)
    if total <= 0:
        raise ImpossibleSizeError("no admissible decomposition (zero total weight)")
    r = rng.randrange(total)
    for i, w in enumerate(weights):
        if r < w:
            return i
        r -= w
    raise InternalConsistencyError("weight walk exhausted")  # pragma: no cover


def _choose_two_ended(weight_at, lo: int, hi: int, total: int, rng: random.Random) -> int:
    """Index in [lo, hi] with probability weight_at(i)/total.

    Scans from both ends because critical splitting weights concentrate
    their mass near the extremes.
    """
    r = rng.randrange(total)
    a, b = lo, hi
    while a <= b:
        w = weight_at(a)
        if r < w:
            return a
        r -= w
        if a != b:
            w = weight_at(b)
            if r < w:
                return b
            r -= w
        a += 1
        b -= 1
    raise InternalConsistencyError("split weights sum below their advertised total")


# ----------------------------------------------------------------------
# lazy decomposition walks
# ----------------------------------------------------------------------
class _LazyNode:
    """Subtree whose children are drawn on first access and then frozen."""

    __slots__ = ("state", "groups")

    def __init__(self, state):
        self.state = state
        self.groups = None  # list of (copies, _LazyNode)


class _Decomposer:
    """Family-specific size bookkeeping and child-group sampling."""

    def __init__(self, family: FamilySpec, n: int):
        self.family = family
        self.kind = family.kind
        self.t, self.extra = _tables(family, n)

    def root_state(self, n: int, rng: random.Random):
        if self.kind == NON_PLANE_BINARY:
            return (n, rng.randrange(self.t[n]))
        return n

    def size(self, state) -> int:
        return state[0] if self.kind == NON_PLANE_BINARY else state

    def is_leaf(self, state) -> bool:
        if self.kind in (COMPLETE_BINARY, NON_PLANE_BINARY):
            return self.size(state) == 0
        return self.size(state) == 1

    def children(self, state, rng: random.Random) -> List[Tuple[int, object]]:
        kind = self.kind
        t = self.t
        if kind == COMPLETE_BINARY:
            m = state - 1
            a = _choose_two_ended(lambda i: t[i] * t[m - i], 0, m, t[m + 1], rng)
            return [(1, a), (1, m - a)]
        if kind == NON_PLANE_BINARY:
            return self._npb_children(state)
        if kind == POLYA:
            return self._polya_children(state, rng)
        phi = self.family.phi
        if phi.kind == "geometric":
            out = []
            rem = state - 1
            while rem > 0:
                a = _choose_two_ended(
                    lambda i: t[i] * t[rem - i + 1], 1, rem, t[rem + 1], rng)
                out.append((1, a))
                rem -= a
            return out
        return self._sg_children(state, rng)

    def _sg_children(self, state, rng) -> list:
        m = state - 1
        if m == 0:
            return []
        powers, weights_by_degree = self.extra
        degs = [j for j in range(1, len(weights_by_degree))
                if weights_by_degree[j] and powers[j][m]]
        weights = [weights_by_degree[j] * powers[j][m] for j in degs]
        j = degs[_choose_index(weights, rng)]
        out = []
        rem = m
        for jj in range(j, 1, -1):
            a = _choose_two_ended(
                lambda i: self.t[i] * powers[jj - 1][rem - i],
                1, rem - (jj - 1), powers[jj][rem], rng)
            out.append((1, a))
            rem -= a
        out.append((1, rem))
        return out

    def _polya_children(self, state, rng) -> list:
        # classical multiset splitting: pick (j, d), d | j, with weight
        # d t_d t_{m-j}, attach j/d copies of a size-d subtree, recurse on m-j
        t, d_rest = self.t, self.extra
        out = []
        m = state
        while m > 1:
            r = rng.randrange((m - 1) * t[m])
            choice = None
            for j in range(m - 1, 0, -1):
                main = j * t[j] * t[m - j]
                if r < main:
                    choice = (j, j)
                    break
                r -= main
                block = d_rest[j] * t[m - j]
                if r < block:
                    for d in reversed(_divisors(j)):
                        if d == j:
                            continue
                        w = d * t[d] * t[m - j]
                        if r < w:
                            choice = (j, d)
                            break
                        r -= w
                    break
                r -= block
            if choice is None:
                raise InternalConsistencyError("splitting weights do not add up")
            j, d = choice
            out.append((j // d, d))
            m -= j
        return out

    def _npb_children(self, state) -> list:
        n, rank = state
        m = n - 1
        t = self.t
        r = rank
        for a in range(0, m // 2 + 1):
            b = m - a
            if a < b:
                block = t[a] * t[b]
                if r < block:
                    ra, rb = divmod(r, t[b])
                    return [(1, (a, ra)), (1, (b, rb))]
            else:
                block = t[a] * (t[a] + 1) // 2
                if r < block:
                    i, j = _triangular_unrank(r, t[a])
                    if i == j:
                        return [(2, (a, i))]
                    return [(1, (a, i)), (1, (a, j))]
            r -= block
        raise InternalConsistencyError("rank exceeds the pair decomposition")


def _triangular_unrank(r: int, t: int) -> Tuple[int, int]:
    """r-th pair (i <= j) with i, j in [0, t), rows enumerated by i."""
    # row i starts at offset i*t - i*(i-1)/2; invert with an integer sqrt
    s = 2 * t + 1
    i = (s - math.isqrt(s * s - 8 * r)) // 2
    while i * t - i * (i - 1) // 2 > r:
        i -= 1
    while (i + 1) * t - (i + 1) * i // 2 <= r:
        i += 1
    j = i + (r - (i * t - i * (i - 1) // 2))
    return i, j


def _expand(node: _LazyNode, dec: _Decomposer, rng: random.Random):
    if node.groups is None:
        if dec.is_leaf(node.state):
            node.groups = []
        else:
            node.groups = [(c, _LazyNode(s)) for c, s in dec.children(node.state, rng)]
    return node.groups


def _materialize(root: _LazyNode, dec: _Decomposer, rng: random.Random) -> Tree:
    order = [root]
    i = 0
    while i < len(order):
        for _, child in _expand(order[i], dec, rng):
            order.append(child)
        i += 1
    built: Dict[int, Tree] = {}
    for node in reversed(order):
        kids: List[Tree] = []
        for copies, child in node.groups:
            kids.extend([built[id(child)]] * copies)
        built[id(node)] = Tree(tuple(kids)) if kids else LEAF
    return built[id(root)]


def _lazy_protection(root: _LazyNode, dec: _Decomposer, rng: random.Random) -> int:
    frontier = [root]
    depth = 0
    while True:
        if any(dec.is_leaf(nd.state) for nd in frontier):
            return depth
        nxt = []
        for nd in frontier:
            for _, child in _expand(nd, dec, rng):
                nxt.append(child)
        frontier = nxt
        depth += 1


def _lazy_uniform_vertex(root: _LazyNode, dec: _Decomposer, rng: random.Random) -> _LazyNode:
    node = root
    while True:
        r = rng.randrange(dec.size(node.state))
        if r == 0:
            return node
        r -= 1
        for copies, child in _expand(node, dec, rng):
            w = copies * dec.size(child.state)
            if r < w:
                node = child
                break
            r -= w
        else:
            raise InternalConsistencyError("subtree sizes do not add up")


# ----------------------------------------------------------------------
# cayley trees via uniform labelled rooted trees
# ----------------------------------------------------------------------
def _cayley_tree(n: int, rng: random.Random) -> Tree:
    """Uniform rooted labelled tree on n vertices, labels stripped.

    The induced shape distribution coincides with the factorial-weight
    decomposition, so protection statistics are exact.
    """
    if n == 1:
        return LEAF
    if n == 2:
        return Tree((LEAF,))
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    adj = [[] for _ in range(n)]
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    for v in seq:
        u = heapq.heappop(leaves)
        adj[u].append(v)
        adj[v].append(u)
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    adj[u].append(w)
    adj[w].append(u)
    root = rng.randrange(n)
    # orient away from the root, build Trees bottom-up
    parent = [-1] * n
    order = [root]
    seen = [False] * n
    seen[root] = True
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for w2 in adj[v]:
            if not seen[w2]:
                seen[w2] = True
                parent[w2] = v
                order.append(w2)
    built: Dict[int, Tree] = {}
    for v in reversed(order):
        kids = tuple(built[w2] for w2 in adj[v] if parent[w2] == v)
        built[v] = Tree(kids) if kids else LEAF
    return built[root]


# ----------------------------------------------------------------------
# public interface
# ----------------------------------------------------------------------
def sample_tree(family: FamilySpec, n: int, rng: random.Random,
                cap: int = SAMPLING_CAP) -> Tree:
    """One tree of exactly size n from the family's distribution."""
    family = make_family(family)
    if n < 1:
        raise ImpossibleSizeError("size must be at least 1")
    if n > cap:
        raise EnumerationCapError(f"n = {n} exceeds the sampling cap {cap}")
    if family.kind == SIMPLY_GENERATED and family.phi.kind == "exponential":
        return _cayley_tree(n, rng)
    dec = _Decomposer(family, n)
    if not dec.t[n]:
        raise ImpossibleSizeError(f"{family.name} has no tree of size {n}")
    root = _LazyNode(dec.root_state(n, rng))
    return _materialize(root, dec, rng)


@dataclass(frozen=True)
class EmpiricalSummary:
    """Point estimates with standard errors from seeded sampling."""

    family: str
    n: int
    trials: int
    seed: int
    root_mean: float
    root_variance: Optional[float]
    root_se: Optional[float]
    vertex_mean: float
    vertex_variance: Optional[float]
    vertex_se: Optional[float]
    per_k_frequencies: Dict[int, float]
    variance_defined: bool

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "root_mean": self.root_mean,
            "root_variance": self.root_variance,
            "root_se": self.root_se,
            "vertex_mean": self.vertex_mean,
            "vertex_variance": self.vertex_variance,
            "vertex_se": self.vertex_se,
            "per_k_frequencies": {str(k): v for k, v in self.per_k_frequencies.items()},
            "variance_defined": self.variance_defined,
        }


def _mean_var_se(values: List[int]):
    t = len(values)
    mean = sum(values) / t
    if t < 2:
        return mean, None, None
    var = sum((v - mean) ** 2 for v in values) / (t - 1)
    return mean, var, math.sqrt(var / t)


def empirical_protection(config: SampleConfig, cap: int = SAMPLING_CAP) -> EmpiricalSummary:
    """Seeded estimates of root and random-vertex protection at size n.

    The vertex draw picks one uniform vertex per sampled tree (uniform
    internal vertex for the binary kinds).  Only the parts of each tree
    that the two statistics touch are ever expanded, so large sizes stay
    cheap; the distribution is identical to full materialization.
    """
    family = make_family(config.family)
    if config.n > cap:
        raise EnumerationCapError(f"n = {config.n} exceeds the sampling cap {cap}")
    roots: List[int] = []
    verts: List[int] = []
    cayley_like = (family.kind == SIMPLY_GENERATED
                   and family.phi.kind == "exponential")
    dec = None
    if not cayley_like:
        dec = _Decomposer(family, config.n)
        if not dec.t[config.n]:
            raise ImpossibleSizeError(f"{family.name} has no tree of size {config.n}")
    for trial in range(config.trials):
        rng = derive_rng(config.seed, trial)
        if cayley_like:
            tree = _cayley_tree(config.n, rng)
            roots.append(protection_number(tree))
            verts.append(_uniform_vertex_protection(tree, rng))
        else:
            root = _LazyNode(dec.root_state(config.n, rng))
            roots.append(_lazy_protection(root, dec, rng))
            vnode = _lazy_uniform_vertex(root, dec, rng)
            verts.append(_lazy_protection(vnode, dec, rng))
    rm, rv, rse = _mean_var_se(roots)
    vm, vv, vse = _mean_var_se(verts)
    freq = {}
    for k in range(1, max(roots) + 1):
        freq[k] = sum(1 for r in roots if r >= k) / config.trials
    return EmpiricalSummary(
        family=family.name, n=config.n, trials=config.trials, seed=config.seed,
        root_mean=rm, root_variance=rv, root_se=rse,
        vertex_mean=vm, vertex_variance=vv, vertex_se=vse,
        per_k_frequencies=freq, variance_defined=config.trials > 1,
    )


def _uniform_vertex_protection(tree: Tree, rng: random.Random) -> int:
    nodes = []
    stack = [tree]
    while stack:
        nd = stack.pop()
        nodes.append(nd)
        stack.extend(nd.children)
    return protection_number(nodes[rng.randrange(len(nodes))])
