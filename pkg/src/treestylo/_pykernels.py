"""Pure-Python hot kernels.

Reference implementation of the functions compiled in ``_ckernels.pyx``;
both must return identical results for identical input.
"""
from __future__ import annotations

import re

from ._tree import ParseTree, TreeSyntaxError, byte_offset

_TOKEN = re.compile(r"\(|\)|[^()\s]+")


def parse_sexprs(text):
    trees = []
    # frame: [label, children, word, index of its "("]
    stack = []
    for m in _TOKEN.finditer(text):
        tok = m.group()
        pos = m.start()
        if tok == "(":
            if stack:
                top = stack[-1]
                if top[0] is None:
                    raise TreeSyntaxError("empty label", byte_offset(text, pos))
                if top[2] is not None:
                    raise TreeSyntaxError(
                        f"child node after word in {top[0]!r}", byte_offset(text, pos))
            stack.append([None, [], None, pos])
        elif tok == ")":
            if not stack:
                raise TreeSyntaxError("unbalanced parentheses: unexpected ')'",
                                      byte_offset(text, pos))
            label, children, word, start = stack.pop()
            if label is None:
                raise TreeSyntaxError("empty label", byte_offset(text, pos))
            node = ParseTree._raw(label, tuple(children), word)
            if stack:
                stack[-1][1].append(node)
            else:
                trees.append(node)
        else:
            if not stack:
                raise TreeSyntaxError(f"bare word {tok!r} outside a node",
                                      byte_offset(text, pos))
            top = stack[-1]
            if top[0] is None:
                top[0] = tok
            elif top[2] is None and not top[1]:
                top[2] = tok
            else:
                raise TreeSyntaxError(f"unexpected token {tok!r} in {top[0]!r}",
                                      byte_offset(text, pos))
    if stack:
        raise TreeSyntaxError(
            f"unbalanced parentheses: '(' at byte {byte_offset(text, stack[-1][3])} "
            "is never closed", byte_offset(text, len(text)))
    return trees


def canonical(node):
    if node.word is not None:
        raise ValueError(f"canonical form needs a word-free tree; {node.label!r} "
                         f"carries {node.word!r}")
    return "(" + node.label + "".join([canonical(c) for c in node.children]) + ")"


def truncated(node, depth):
    if depth == 0 or not node.children:
        if node.word is not None:
            raise ValueError(f"canonical form needs a word-free tree; {node.label!r} "
                             f"carries {node.word!r}")
        return "(" + node.label + ")"
    return "(" + node.label + "".join([truncated(c, depth - 1) for c in node.children]) + ")"


def _subtrees(node, depth, out):
    # returns (height, forms) with forms[j] = node truncated j edges down
    if node.word is not None:
        raise ValueError(f"canonical form needs a word-free tree; {node.label!r} "
                         f"carries {node.word!r}")
    leaf = "(" + node.label + ")"
    if not node.children:
        return 0, [leaf] * (depth + 1)
    kids = [_subtrees(c, depth, out) for c in node.children]
    height = 1 + max(k[0] for k in kids)
    forms = [leaf]
    for j in range(1, depth + 1):
        forms.append("(" + node.label + "".join([k[1][j - 1] for k in kids]) + ")")
    if height >= depth:
        key = forms[depth]
        out[key] = out.get(key, 0) + 1
    return height, forms


def subtree_counts(tree, depth):
    out = {}
    _subtrees(tree, depth, out)
    return out


def label_counts(tree):
    out = {}
    stack = [tree]
    while stack:
        node = stack.pop()
        out[node.label] = out.get(node.label, 0) + 1
        stack.extend(node.children)
    return out


def level_counts(tree):
    out = {}
    level = 1
    row = [tree]
    while row:
        prefix = f"{level}:"
        nxt = []
        for node in row:
            key = prefix + node.label
            out[key] = out.get(key, 0) + 1
            nxt.extend(node.children)
        row = nxt
        level += 1
    return out
