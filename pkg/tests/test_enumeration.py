import pytest

from protnum.enumeration import (
    LEAF,
    Tree,
    all_trees,
    brute_force_stats,
    finite_probabilities,
    protected_count,
    protection_number,
    stats_to_csv,
    tk_coefficients,
    tree_size,
)
from protnum.errors import (
    EnumerationCapError,
    UndefinedProbabilityError,
    UnsupportedOracleError,
)
from protnum.families import make_family, tree_series
from protnum.scalars import rational
from protnum.verification import example_tree


def path(length):
    t = LEAF
    for _ in range(length):
        t = Tree((t,))
    return t


def test_protection_number_basics():
    assert protection_number(LEAF) == 0
    assert protection_number(path(2)) == 2  # three vertices in a chain
    assert protection_number(Tree((LEAF, path(3)))) == 1


def test_example_tree_counts():
    t = example_tree()
    assert tree_size(t) == 13
    assert protection_number(t) == 1
    assert protected_count(t, 0) == 13
    assert protected_count(t, 1) == 6
    assert protected_count(t, 2) == 1


def test_protected_count_path():
    for k in range(0, 6):
        assert protected_count(path(k), k) == 1


def test_protected_count_zero_is_vertex_count():
    for t in all_trees(make_family("plane"), 5):
        assert protected_count(t, 0) == 5


def test_enumeration_counts_match_series():
    for name in ("plane", "motzkin", "incomplete-binary", "complete-binary",
                 "polya", "non-plane-binary"):
        fam = make_family(name)
        t = tree_series(fam, 9)
        for n in range(1, 10):
            assert len(all_trees(fam, n)) == int(t.coefficient(n)), (name, n)


def test_polya_npb_counts():
    assert len(all_trees(make_family("polya"), 4)) == 4
    assert len(all_trees(make_family("polya"), 12)) == 4766
    assert len(all_trees(make_family("non-plane-binary"), 3)) == 2


def test_brute_force_stats_plane_n3():
    stats = brute_force_stats(make_family("plane"), 3)
    assert stats[0][0] == 2          # two plane trees of size 3
    assert stats[2][0] == 1          # only the path has protection >= 2
    assert stats[1][1] == 3          # three 1-protected vertices in total


def test_brute_force_cap_and_unsupported():
    with pytest.raises(EnumerationCapError):
        brute_force_stats(make_family("plane"), 13)
    with pytest.raises(UnsupportedOracleError):
        brute_force_stats(make_family("cayley"), 4)


def test_stats_csv():
    text = stats_to_csv(make_family("plane"), 3, brute_force_stats(make_family("plane"), 3))
    assert text.splitlines()[0] == "family,n,k,trees_ge_k,protected_total"
    assert "plane,3,2,1,3" in text or "plane,3,2,1," in text


def test_tk_coefficients():
    fam = make_family("plane")
    assert tk_coefficients(fam, 0, 6).coeffs == tree_series(fam, 6).coeffs
    assert int(tk_coefficients(fam, 1, 3).coefficient(3)) == 2
    assert int(tk_coefficients(fam, 2, 3).coefficient(3)) == 1


def test_tk_monotone_in_k():
    for name in ("plane", "polya", "non-plane-binary"):
        fam = make_family(name)
        prev = tk_coefficients(fam, 0, 12)
        for k in range(1, 6):
            cur = tk_coefficients(fam, k, 12)
            for n in range(0, 13):
                assert cur.coefficient(n) <= prev.coefficient(n)
                assert cur.coefficient(n) >= 0
            prev = cur


def test_finite_probabilities():
    fam = make_family("plane")
    root, vertex = finite_probabilities(fam, 3, 2)
    assert root == rational(1, 2)
    root, vertex = finite_probabilities(fam, 3, 1)
    assert vertex == rational(1, 2)
    assert finite_probabilities(fam, 3, 0) == (rational(1), rational(1))


def test_finite_probabilities_zero_denominator():
    fam = make_family("1,0,1,1")  # no tree with 2 vertices
    with pytest.raises(UndefinedProbabilityError):
        finite_probabilities(fam, 2, 1)


def test_shared_subtree_occurrences_counted():
    sub = Tree((LEAF,))
    t = Tree((sub, sub))  # same object twice
    assert tree_size(t) == 5
    assert protected_count(t, 1) == 3  # root and both copies
