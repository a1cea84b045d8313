import random
from importlib.resources import files

import numpy as np
import pytest

from treestylo._tree import ParseTree
from treestylo.treebank import normalize, parse_trees

DATA = files("treestylo.data")

SENTENCE_CANONICAL = ("(S(PP(IN)(NP(NP(DT)(JJ)(NN))(PP(IN)(NP(NP(DT)(NN))(PP(IN)(NP(DT)(JJ)(JJ)(NN)))))))"
       "(NP(PRP))(VP(VBP)(VP(VBN)(PP(IN))(S(VP(TO)(VP(VB)(PP(IN)(NP(NP(DT)(JJ)(NN))"
       "(PP(IN)(NP(NP(DT)(NNP)(NNP))(PP(IN)(NP(NNP)))))))))))))")

LABELS = ["S", "NP", "VP", "PP", "DT", "NN", "JJ", "IN", "VB", "SBAR", "ADJP", "PRP$", "-LRB-"]


def random_tree(rng: random.Random, max_depth=6, max_children=4, labels=LABELS,
                words=False) -> ParseTree:
    """Independent random-tree generator used as an oracle input source."""
    label = rng.choice(labels)
    if max_depth == 0 or rng.random() < 0.3:
        word = f"w{rng.randrange(50)}" if words else None
        return ParseTree(label, (), word)
    kids = [random_tree(rng, max_depth - 1, max_children, labels, words)
            for _ in range(rng.randint(1, max_children))]
    return ParseTree(label, kids)


def random_matrix_instance(rng: np.random.Generator, m, n, k, spread=1.0):
    """Random labelled columns; every class gets at least one column."""
    labels = np.concatenate([np.arange(k), rng.integers(0, k, n - k)])
    rng.shuffle(labels)
    centers = rng.normal(scale=spread, size=(m, k))
    V = centers[:, labels] + rng.normal(size=(m, n))
    return V, labels


def make_matrix(V, labels, classes=None):
    from treestylo.corpus import TermDocMatrix
    classes = classes or tuple(f"c{i}" for i in range(int(max(labels)) + 1))
    return TermDocMatrix(V, tuple(f"f{i}" for i in range(V.shape[0])),
                         tuple(f"d{j}" for j in range(V.shape[1])),
                         tuple(classes[i] for i in labels), classes=tuple(classes))


@pytest.fixture(scope="session")
def sentence_raw():
    (t,) = parse_trees(DATA.joinpath("federalist1_sentence1.mrg").read_text())
    return t


@pytest.fixture(scope="session")
def sentence_tree(sentence_raw):
    return normalize(sentence_raw)


@pytest.fixture(scope="session")
def airline_text():
    return DATA.joinpath("airline.pcfg").read_text()


@pytest.fixture(scope="session")
def dinner_trees():
    return parse_trees(DATA.joinpath("book_the_dinner_flight.mrg").read_text())


# one pass/fail line per acceptance criterion in the terminal summary; tests
# are named test_c<id>_..., several tests may share one criterion id
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    cid = name.split("_")[1][1:]
    if report.when == "call" or report.failed:
        ok = _ACCEPTANCE.get(cid, True) and report.passed
        _ACCEPTANCE[cid] = ok


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, ok in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {cid}")


# grammar B: three rule probabilities moved by 0.15, touched lhs renormalized
SHIFTS_B = {("NP", ("Pronoun",)): -0.15,
            ("NP", ("Det", "Nominal")): +0.15,
            ("VP", ("Verb",)): -0.15}


def synthetic_grammars():
    from treestylo.pcfg import load_grammar, perturb
    a = load_grammar(DATA.joinpath("airline.pcfg").read_text()).renormalized()
    return a, perturb(a, SHIFTS_B)


def write_synthetic_corpus(root, docs=10, sentences=200, seed=0):
    """Sample tree files for authors A and B and a manifest listing them."""
    import json
    from treestylo.pcfg import sample_trees
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for base, (author, g) in zip((1000, 2000), zip("AB", synthetic_grammars())):
        for d in range(docs):
            trees = sample_trees(g, sentences, seed=seed + base + d)
            name = f"{author}{d}.mrg"
            (root / name).write_text("".join(t.to_sexpr() + "\n" for t in trees))
            entries.append({"author": author, "doc_id": f"{author}{d}", "path": name})
    manifest = root / "manifest.json"
    manifest.write_text(json.dumps({"documents": entries}))
    return manifest
