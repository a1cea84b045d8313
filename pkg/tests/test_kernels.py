import random

import pytest
from hypothesis import given, settings, strategies as st

from treestylo import _pykernels
from treestylo._tree import TreeSyntaxError

from conftest import random_tree

ckernels = pytest.importorskip("treestylo._ckernels")


@st.composite
def trees(draw):
    return random_tree(random.Random(draw(st.integers(0, 2**32))), max_depth=7)


@settings(max_examples=200, deadline=None)
@given(trees(), st.integers(1, 6))
def test_backends_agree_on_features(t, d):
    for name in ("label_counts", "level_counts", "canonical"):
        assert getattr(ckernels, name)(t) == getattr(_pykernels, name)(t)
    assert ckernels.subtree_counts(t, d) == _pykernels.subtree_counts(t, d)
    assert ckernels.truncated(t, d) == _pykernels.truncated(t, d)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_backends_agree_on_parsing(seed):
    rng = random.Random(seed)
    t = random_tree(rng, words=True)
    text = t.to_sexpr()
    assert ckernels.parse_sexprs(text) == _pykernels.parse_sexprs(text) == [t]


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="() ab\n", max_size=20))
def test_backends_agree_on_errors(text):
    results = []
    for mod in (ckernels, _pykernels):
        try:
            results.append(("ok", mod.parse_sexprs(text)))
        except TreeSyntaxError as exc:
            results.append(("err", exc.offset, exc.reason))
    assert results[0] == results[1]


def test_cython_rejects_words_in_canonical():
    (t,) = ckernels.parse_sexprs("(A (B w))")
    with pytest.raises(ValueError):
        ckernels.canonical(t)


def test_pure_python_switch():
    import os
    import subprocess
    import sys
    env = dict(os.environ, TREESTYLO_PURE_PYTHON="1")
    code = ("from treestylo import _kernels, features, treebank;"
            "t = treebank.parse_trees('(S(NP)(VP(VB)))')[0];"
            "print(_kernels.BACKEND, dict(features.all_subtrees(t, 2)))")
    r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert r.stdout.strip() == "python {'(S(NP)(VP(VB)))': 1}"
