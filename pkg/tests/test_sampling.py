import math
from collections import Counter

import pytest
from mpmath import mp

from protnum.enumeration import (
    LEAF,
    Tree,
    all_trees,
    canonical_key,
    protection_number,
    tree_size,
)
from protnum.errors import EnumerationCapError, ImpossibleSizeError
from protnum.families import make_family, tree_series
from protnum.protection import root_limit_probability_exact, root_limits
from protnum.sampling import (
    SampleConfig,
    derive_rng,
    empirical_protection,
    sample_tree,
)

ORDERED = {"plane", "motzkin", "incomplete-binary", "complete-binary"}


def test_sample_tree_determinism():
    fam = make_family("polya")
    a = sample_tree(fam, 40, derive_rng(123, 0))
    b = sample_tree(fam, 40, derive_rng(123, 0))
    c = sample_tree(fam, 40, derive_rng(123, 1))
    assert a == b
    assert tree_size(a) == 40
    assert a != c or canonical_key(a, False) == canonical_key(c, False)


def test_empirical_determinism():
    cfg = SampleConfig("plane", 30, 50, 99)
    assert empirical_protection(cfg).to_dict() == empirical_protection(cfg).to_dict()


def test_smallest_trees():
    assert sample_tree(make_family("plane"), 1, derive_rng(1, 0)) == LEAF
    assert sample_tree(make_family("polya"), 1, derive_rng(1, 0)) == LEAF
    cherry = Tree((LEAF, LEAF))
    assert sample_tree(make_family("complete-binary"), 1, derive_rng(1, 0)) == cherry
    assert sample_tree(make_family("non-plane-binary"), 1, derive_rng(1, 0)) == cherry


@pytest.mark.parametrize("name", [
    "plane", "motzkin", "incomplete-binary", "complete-binary",
    "polya", "non-plane-binary"])
def test_sampled_sizes(name):
    fam = make_family(name)
    internal = name in ("complete-binary", "non-plane-binary")
    for n in (1, 2, 5, 9):
        t = sample_tree(fam, n, derive_rng(3, n))
        assert tree_size(t, internal_only=internal) == n


def test_plane_n3_frequencies():
    fam = make_family("plane")
    counts = Counter()
    trials = 4000
    for i in range(trials):
        counts[canonical_key(sample_tree(fam, 3, derive_rng(17, i)), True)] += 1
    assert len(counts) == 2
    for c in counts.values():
        # each of the two trees has probability 1/2
        assert abs(c / trials - 0.5) < 5 * math.sqrt(0.25 / trials)


@pytest.mark.parametrize("name", [
    "plane", "motzkin", "incomplete-binary", "complete-binary",
    "polya", "non-plane-binary"])
def test_tiny_size_distribution(name):
    # empirical shape frequencies against the coefficient-derived law
    fam = make_family(name)
    n = 5
    ordered = name in ORDERED
    exact = Counter(canonical_key(t, ordered) for t in all_trees(fam, n))
    total = sum(exact.values())
    trials = 12_000
    emp = Counter()
    for i in range(trials):
        emp[canonical_key(sample_tree(fam, n, derive_rng(2024, i)), ordered)] += 1
    assert set(emp) <= set(exact)
    for key, cnt in exact.items():
        p = cnt / total
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(emp[key] / trials - p) <= 5 * se, (name, key)


def test_cayley_root_degree_distribution():
    # no structural enumeration for cayley; check the root-degree law
    # P(deg = j) = (T^(j))[n-1] / (j! [z^(n-1)] e^T ... ) via series powers
    fam = make_family("cayley")
    n = 6
    t = tree_series(fam, n)
    tn = t.coefficient(n)
    weights = {}
    power = t.one(n)
    fact = 1
    for j in range(0, n):
        if j:
            power = power * t
            fact *= j
        w = power.coefficient(n - 1) / fact  # phi_j = 1/j!
        if w:
            weights[j] = w
    trials = 12_000
    emp = Counter()
    for i in range(trials):
        emp[len(sample_tree(fam, n, derive_rng(55, i)).children)] += 1
    for j, w in weights.items():
        p = float(w / tn)
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(emp[j] / trials - p) <= 5 * se, j


def test_trials_one_variance_flagged():
    s = empirical_protection(SampleConfig("plane", 10, 1, 5))
    assert not s.variance_defined
    assert s.root_variance is None and s.root_se is None
    assert s.vertex_variance is None


def test_caps_and_impossible_sizes():
    with pytest.raises(EnumerationCapError):
        sample_tree(make_family("plane"), 10_001, derive_rng(1, 0))
    with pytest.raises(EnumerationCapError):
        empirical_protection(SampleConfig("plane", 10_001, 5, 1))
    fam = make_family("1,0,1,1")  # no tree of size 2
    with pytest.raises(ImpossibleSizeError):
        sample_tree(fam, 2, derive_rng(1, 0))
    with pytest.raises(ValueError):
        SampleConfig("plane", 10, 0, 1)


def test_empirical_tracks_limits_plane():
    cfg = SampleConfig("plane", 400, 1500, 314159)
    s = empirical_protection(cfg)
    rep = root_limits(make_family("plane"), 20)
    assert abs(s.root_mean - float(rep.mean)) <= 5 * s.root_se
    # survival frequencies weakly decreasing and near the limit probabilities
    last = 1.0
    for k, freq in sorted(s.per_k_frequencies.items()):
        assert freq <= last + 1e-12
        last = freq
        if k <= 3:
            p = float(root_limit_probability_exact(make_family("plane"), k))
            se = math.sqrt(max(p * (1 - p), 1e-9) / cfg.trials)
            assert abs(freq - p) <= 5 * se + 5.0 / cfg.n


def test_vertex_protection_internal_only_for_binary_kinds():
    # a size-1 complete binary tree has one internal vertex of protection 1
    s = empirical_protection(SampleConfig("complete-binary", 1, 20, 8))
    assert s.vertex_mean == 1.0
    assert s.root_mean == 1.0
