"""Probabilistic context-free grammars: loading, tree scoring and sampling.

Grammar files hold one rule per line::

    # comment
    S   -> NP VP      [0.80]
    Det -> "the"      [0.60]

Quoted symbols are terminals (words). A terminal must be the only symbol on
its right-hand side, so lexical rules map a part of speech to one word and
produce preterminal nodes such as ``(Det the)``.

The probability of a tree is the product of the probabilities of the rules
used at its internal nodes; it is kept as a log to avoid underflow.
"""
from __future__ import annotations

import bisect
import math
import random
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ._tree import ParseTree, check_token

_RULE = re.compile(r"^(?P<lhs>\S+)\s*->\s*(?P<rhs>.*?)\s*\[(?P<p>[^\]]*)\]$")
_SYMBOL = re.compile(r'"(?P<term>[^"]*)"|(?P<nonterm>[^\s"]+)|(?P<bad>")')


class GrammarError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple
    p: float
    lexical: bool = False

    @property
    def key(self):
        return (self.lhs, self.rhs, self.lexical)

    def __str__(self):
        rhs = f'"{self.rhs[0]}"' if self.lexical else " ".join(self.rhs)
        return f"{self.lhs} -> {rhs} [{self.p:g}]"


class Grammar:
    """Immutable rule set; the start symbol defaults to the first rule's lhs."""

    def __init__(self, rules: Sequence[Rule], start: Optional[str] = None,
                 sum_tol: float = 1e-6):
        if not rules:
            raise GrammarError("grammar has no rules")
        self.rules = tuple(rules)
        self.start = start or self.rules[0].lhs
        self.by_lhs: dict[str, list[Rule]] = defaultdict(list)
        self._lookup: dict[tuple, Rule] = {}
        for r in self.rules:
            if r.key in self._lookup:
                raise GrammarError(f"duplicate rule {r.lhs} -> {' '.join(r.rhs)}")
            self._lookup[r.key] = r
            self.by_lhs[r.lhs].append(r)
        self.by_lhs = dict(self.by_lhs)
        self.sums = {lhs: math.fsum(r.p for r in rs) for lhs, rs in self.by_lhs.items()}
        self.warnings = [f"probabilities for {lhs} sum to {s:.2f}"
                         for lhs, s in self.sums.items() if abs(s - 1.0) > sum_tol]
        self._tables: Optional[dict] = None

    def __len__(self):
        return len(self.rules)

    def lookup(self, lhs: str, rhs: tuple, lexical: bool) -> Optional[Rule]:
        return self._lookup.get((lhs, tuple(rhs), lexical))

    def renormalized(self) -> "Grammar":
        return Grammar([Rule(r.lhs, r.rhs, r.p / self.sums[r.lhs], r.lexical)
                        for r in self.rules], self.start)

    def dumps(self) -> str:
        return "".join(f"{r}\n" for r in self.rules)


def load_grammar(text: str, sum_tol: float = 1e-6) -> Grammar:
    rules, seen = [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        m = _RULE.match(line)
        if not m:
            raise GrammarError(f"expected 'LHS -> symbols [p]', got {raw.strip()!r}", lineno)
        lhs = m["lhs"]
        if lhs.startswith('"'):
            raise GrammarError("left-hand side cannot be a terminal", lineno)
        try:
            check_token(lhs)
            p = float(m["p"])
        except ValueError as exc:
            raise GrammarError(str(exc), lineno) from None
        if not 0.0 < p <= 1.0:
            raise GrammarError(f"probability {p} outside (0, 1]", lineno)
        terms, nonterms = [], []
        for s in _SYMBOL.finditer(m["rhs"]):
            if s["bad"] is not None:
                raise GrammarError("unterminated quote", lineno)
            if s["term"] is not None:
                terms.append(s["term"])
            else:
                nonterms.append(s["nonterm"])
        if not terms and not nonterms:
            raise GrammarError("empty right-hand side", lineno)
        if terms and (nonterms or len(terms) > 1):
            raise GrammarError("a terminal must be the only right-hand symbol", lineno)
        try:
            for sym in terms + nonterms:
                check_token(sym, "symbol")
        except ValueError as exc:
            raise GrammarError(str(exc), lineno) from None
        rule = Rule(lhs, tuple(terms), p, True) if terms else Rule(lhs, tuple(nonterms), p)
        if rule.key in seen:
            raise GrammarError(f"duplicate rule {raw.strip()!r} "
                               f"(first on line {seen[rule.key]})", lineno)
        seen[rule.key] = lineno
        rules.append(rule)
    return Grammar(rules, sum_tol=sum_tol)


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


@dataclass
class ScoredTree:
    tree: ParseTree
    log_prob: float
    rule_trace: tuple     # ((Rule, multiplicity), ...) in first-use order

    @property
    def probability(self) -> float:
        return math.exp(self.log_prob)


def score_tree(g: Grammar, t: ParseTree) -> ScoredTree:
    """Score every rule application in ``t``; unknown expansions raise."""
    used = Counter()
    stack = [(t, t.label)]
    while stack:
        node, path = stack.pop()
        if node.word is not None:
            rule = g.lookup(node.label, (node.word,), True)
            shown = f'"{node.word}"'
        elif node.children:
            rhs = tuple(c.label for c in node.children)
            rule = g.lookup(node.label, rhs, False)
            shown = " ".join(rhs)
        else:
            raise GrammarError(f"node {path} is a nonterminal leaf with no expansion")
        if rule is None:
            raise GrammarError(f"no rule {node.label} -> {shown} (at node {path})")
        used[rule] += 1
        for i in range(len(node.children) - 1, -1, -1):
            c = node.children[i]
            stack.append((c, f"{path}/{c.label}[{i}]"))
    log_prob = math.fsum(math.log(r.p) * k for r, k in used.items())
    return ScoredTree(t, log_prob, tuple(used.items()))


def best_parse(g: Grammar, candidates: Sequence[ParseTree]) -> ScoredTree:
    """The most probable candidate; the earliest one wins ties."""
    if not candidates:
        raise ValueError("no candidate trees")
    best = None
    for t in candidates:
        s = score_tree(g, t)
        if best is None or s.log_prob > best.log_prob:
            best = s
    return best


class _TooDeep(Exception):
    pass


def _tables(g: Grammar) -> dict:
    # per lhs: rules and cumulative renormalized probabilities
    if g._tables is None:
        tables = {}
        for lhs, rules in g.by_lhs.items():
            total = g.sums[lhs]
            cum, acc = [], 0.0
            for r in rules:
                acc += r.p / total
                cum.append(acc)
            cum[-1] = 1.0
            tables[lhs] = (rules, cum)
        g._tables = tables
    return g._tables


def _expand(tables, symbol, rng, depth, max_depth):
    if depth > max_depth:
        raise _TooDeep
    try:
        rules, cum = tables[symbol]
    except KeyError:
        raise GrammarError(f"no rules expand {symbol!r}") from None
    rule = rules[bisect.bisect_right(cum, rng.random())]
    if rule.lexical:
        return ParseTree._raw(symbol, (), rule.rhs[0])
    return ParseTree._raw(symbol, tuple(_expand(tables, s, rng, depth + 1, max_depth)
                                        for s in rule.rhs), None)


def sample_trees(g: Grammar, count: int, seed: int, max_depth: int = 30,
                 max_tries: int = 1000) -> list[ParseTree]:
    """Draw ``count`` derivations top-down from the start symbol.

    Each lhs's rule probabilities are renormalized to sum to 1. Derivations
    deeper than ``max_depth`` edges are thrown away and redrawn, up to
    ``max_tries`` times per tree.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    tables = _tables(g)
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        for _ in range(max_tries):
            try:
                out.append(_expand(tables, g.start, rng, 0, max_depth))
                break
            except _TooDeep:
                continue
        else:
            raise GrammarError(f"no derivation within depth {max_depth} after "
                               f"{max_tries} tries; the grammar may be divergent")
    return out


def sample_tree(g: Grammar, seed: int, max_depth: int = 30) -> ParseTree:
    return sample_trees(g, 1, seed, max_depth)[0]


def perturb(g: Grammar, shifts: Mapping[tuple, float]) -> Grammar:
    """Add ``delta`` to the listed rules, then renormalize the touched lhs.

    ``shifts`` maps ``(lhs, rhs_tuple)`` (or ``(lhs, rhs_tuple, lexical)``)
    to a probability offset.
    """
    delta = {}
    for key, d in shifts.items():
        key = key if len(key) == 3 else (key[0], tuple(key[1]), False)
        if g.lookup(*key) is None:
            raise GrammarError(f"no rule {key[0]} -> {' '.join(key[1])} to perturb")
        delta[key] = d
    touched = {k[0] for k in delta}
    shifted = []
    for r in g.rules:
        p = r.p + delta.get(r.key, 0.0)
        if p <= 0:
            raise GrammarError(f"shift leaves {r} with probability {p:g}")
        shifted.append(Rule(r.lhs, r.rhs, p, r.lexical))
    sums = defaultdict(float)
    for r in shifted:
        sums[r.lhs] += r.p
    return Grammar([Rule(r.lhs, r.rhs, r.p / sums[r.lhs], r.lexical)
                    if r.lhs in touched else r for r in shifted], g.start)
