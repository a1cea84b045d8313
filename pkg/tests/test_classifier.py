import warnings

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from treestylo.classifier import (AliasMap, LooConfig, adjusted_errors, loo_classify, sweep)
from treestylo.corpus import TermDocMatrix

from conftest import make_matrix, random_matrix_instance


def naive_loo(V, labels, k):
    """Recompute every centroid from scratch for each held-out column."""
    preds = []
    n = V.shape[1]
    for j in range(n):
        best, best_d = None, None
        for i in range(k):
            members = [c for c in range(n) if labels[c] == i and c != j]
            if not members:
                continue
            d = np.linalg.norm(V[:, j] - V[:, members].mean(axis=1))
            if best_d is None or d < best_d:
                best, best_d = i, d
        preds.append(best)
    return preds


@st.composite
def instances(draw):
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    k = draw(st.integers(2, 4))
    n = draw(st.integers(2 * k, 20))
    m = draw(st.integers(1, 8))
    V, labels = random_matrix_instance(rng, m, n, k)
    # every class needs two members so the held-out centroid exists
    labels = np.concatenate([np.arange(k), np.arange(k), rng.integers(0, k, n - 2 * k)])
    return V, labels, k


@settings(max_examples=200, deadline=None)
@given(instances())
def test_matches_naive_oracle(inst):
    V, labels, k = inst
    M = make_matrix(V, labels)
    res = loo_classify(M)
    got = [M.classes.index(p.predicted) for p in res.predictions]
    assert got == naive_loo(V, labels, k)
    assert res.confusion.sum() == V.shape[1]
    assert res.error_count == sum(g != t for g, t in zip(got, labels))


@settings(max_examples=100, deadline=None)
@given(instances(), st.floats(1e-3, 1e3))
def test_scaling_leaves_predictions(inst, c):
    V, labels, k = inst
    # with m >= n - k every class projects to a single point and all
    # projected distances tie at round-off level
    assume(V.shape[1] > V.shape[0] + k)
    for cfg in (LooConfig(), LooConfig("paper", min(k - 1, V.shape[0]))):
        a = loo_classify(make_matrix(V, labels), cfg)
        b = loo_classify(make_matrix(c * V, labels), cfg)
        assert [p.predicted for p in a.predictions] == [p.predicted for p in b.predictions]


@settings(max_examples=100, deadline=None)
@given(instances(), st.randoms())
def test_class_order_irrelevant(inst, rnd):
    V, labels, k = inst
    names = tuple(f"c{i}" for i in range(k))
    perm = list(names)
    rnd.shuffle(perm)
    a = loo_classify(make_matrix(V, labels, names))
    b = loo_classify(TermDocMatrix(V, tuple(f"f{i}" for i in range(V.shape[0])),
                                   tuple(f"d{j}" for j in range(V.shape[1])),
                                   tuple(names[i] for i in labels), classes=tuple(perm)))
    assert [p.predicted for p in a.predictions] == [p.predicted for p in b.predictions]


def test_ties_go_to_lowest_index():
    # identical columns everywhere: every distance ties
    V = np.full((3, 6), 0.25)
    labels = np.array([0, 1, 2, 0, 1, 2])
    res = loo_classify(make_matrix(V, labels, ("x", "y", "z")))
    assert [p.predicted for p in res.predictions] == ["x"] * 6
    assert res.error_count == 4


def test_singleton_class_warns():
    V = np.array([[0.0, 0.1, 5.0], [0.0, 0.1, 5.0]])
    with pytest.warns(UserWarning, match="single document"):
        res = loo_classify(make_matrix(V, np.array([0, 0, 1])))
    assert res.predictions[2].predicted == "c0"
    assert res.warnings


def test_config_validation():
    with pytest.raises(ValueError):
        LooConfig("paper")
    with pytest.raises(ValueError):
        LooConfig("none", 2)
    with pytest.raises(ValueError):
        LooConfig("bogus")
    with pytest.raises(ValueError):
        LooConfig("strict", 0)


def test_alias_parse_and_rules():
    a = AliasMap.parse(["HandM=Madison"])
    assert a.same("HandM", "Madison") and a.same("Madison", "HandM")
    assert not a.same("Hamilton", "Madison")
    with pytest.raises(ValueError):
        AliasMap.parse(["nothing"])
    with pytest.raises(ValueError):
        AliasMap({"A": "B", "B": "C"})
    with pytest.raises(ValueError):
        AliasMap({"A": "A"})


@settings(max_examples=100, deadline=None)
@given(instances())
def test_alias_never_adds_errors(inst):
    V, labels, k = inst
    M = make_matrix(V, labels)
    res = loo_classify(M, alias=AliasMap({"c1": "c0"}))
    assert res.adjusted_error_count <= res.error_count
    assert adjusted_errors(res, AliasMap()) == res.error_count


def test_strict_and_paper_agree_when_well_separated():
    rng = np.random.default_rng(11)
    V, labels = random_matrix_instance(rng, 6, 24, 3, spread=20.0)
    M = make_matrix(V, labels)
    paper = loo_classify(M, LooConfig("paper", 2))
    strict = loo_classify(M, LooConfig("strict", 2))
    assert paper.error_count == strict.error_count == 0


def test_sweep_cells():
    rng = np.random.default_rng(12)
    V, labels = random_matrix_instance(rng, 3, 12, 2, spread=10.0)
    M = make_matrix(V, labels)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = sweep(M, [1, 2, 4], alias=AliasMap())
    assert set(res.err_by_dim) == {1, 2, 4}
    assert res.err_by_dim[4] is None
    assert any("exceeds vocabulary size" in w for w in res.warnings)
    assert res.err_by_dim[1] == loo_classify(M, LooConfig("paper", 1)).error_count
    with pytest.raises(ValueError):
        sweep(M, [1], mode="none")
