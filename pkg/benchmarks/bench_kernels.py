"""Time the compiled and pure-Python kernels on a sampled treebank.

    python3 benchmarks/bench_kernels.py [--sentences 5000] [--repeat 5]
"""
import argparse
import timeit
from importlib.resources import files

from treestylo import _pykernels
from treestylo.pcfg import load_grammar, sample_trees
from treestylo.treebank import normalize_all

try:
    from treestylo import _ckernels
except ImportError:
    _ckernels = None


def corpus(n):
    g = load_grammar(files("treestylo.data").joinpath("airline.pcfg").read_text())
    trees = sample_trees(g.renormalized(), n, seed=1)
    return "".join(t.to_sexpr() + "\n" for t in trees)


def bench(mod, text, trees, repeat):
    def parse():
        mod.parse_sexprs(text)

    def subtrees():
        for t in trees:
            mod.subtree_counts(t, 2)
            mod.subtree_counts(t, 3)

    def levels():
        for t in trees:
            mod.level_counts(t)
            mod.truncated(t, 3)

    return {name: min(timeit.repeat(fn, number=1, repeat=repeat))
            for name, fn in (("parse", parse), ("subtrees", subtrees), ("levels", levels))}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sentences", type=int, default=5000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    text = corpus(args.sentences)
    trees = normalize_all(_pykernels.parse_sexprs(text))
    print(f"{args.sentences} sentences, {len(text.encode())} bytes")
    py = bench(_pykernels, text, trees, args.repeat)
    if _ckernels is None:
        print("compiled kernels not built; python only")
        for k, v in py.items():
            print(f"{k:<10} python {v * 1e3:8.1f} ms")
        return
    cy = bench(_ckernels, text, trees, args.repeat)
    print(f"{'kernel':<10} {'python':>10} {'cython':>10} {'speedup':>8}")
    for k in py:
        print(f"{k:<10} {py[k] * 1e3:8.1f}ms {cy[k] * 1e3:8.1f}ms {py[k] / cy[k]:7.2f}x")


if __name__ == "__main__":
    main()
