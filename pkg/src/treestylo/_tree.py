"""The labeled ordered tree shared by every module."""
from __future__ import annotations

import re
from typing import Iterator, Optional, Sequence

_BAD_TOKEN = re.compile(r"[()\s]")


def check_token(text: str, what: str = "label") -> str:
    if not text:
        raise ValueError(f"empty {what}")
    if _BAD_TOKEN.search(text):
        raise ValueError(f"{what} {text!r} contains parentheses or whitespace")
    return text


class ParseTree:
    """A node of a constituency tree.

    ``label`` is the token (``NP``, ``VBD``, ...), ``children`` an ordered
    tuple of subtrees and ``word`` the terminal attached to a preterminal
    before word stripping. A node carrying a word has no children.
    """

    __slots__ = ("label", "children", "word")

    def __init__(self, label: str, children: Sequence["ParseTree"] = (),
                 word: Optional[str] = None):
        check_token(label)
        children = tuple(children)
        if word is not None:
            check_token(word, "word")
            if children:
                raise ValueError(f"node {label!r} has both a word and children")
        self.label = label
        self.children = children
        self.word = word

    @classmethod
    def _raw(cls, label, children, word):
        # unchecked constructor for the parser kernels
        node = cls.__new__(cls)
        node.label = label
        node.children = children
        node.word = word
        return node

    def __eq__(self, other):
        if not isinstance(other, ParseTree):
            return NotImplemented
        return (self.label == other.label and self.word == other.word
                and self.children == other.children)

    def __hash__(self):
        return hash((self.label, self.word, self.children))

    def __repr__(self):
        return f"ParseTree({self.to_sexpr()!r})"

    def to_sexpr(self) -> str:
        """Penn-style text, words included (``(NP (PRP you))``)."""
        if self.word is not None:
            return f"({self.label} {self.word})"
        if not self.children:
            return f"({self.label})"
        return "(" + self.label + " " + " ".join(c.to_sexpr() for c in self.children) + ")"

    def nodes(self) -> Iterator["ParseTree"]:
        """Pre-order traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def height(self) -> int:
        """Longest downward path, in edges (a lone node has height 0)."""
        best = 0
        stack = [(self, 0)]
        while stack:
            node, d = stack.pop()
            if d > best:
                best = d
            stack.extend((c, d + 1) for c in node.children)
        return best

    def leaves(self) -> Iterator["ParseTree"]:
        return (n for n in self.nodes() if not n.children)

    def words(self) -> list[str]:
        return [n.word for n in self.nodes() if n.word is not None]


class TreeSyntaxError(ValueError):
    """Malformed S-expression input; ``offset`` is the 1-based byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte offset {offset}")
        self.reason = message
        self.offset = offset


def byte_offset(text: str, index: int) -> int:
    """1-based UTF-8 byte offset of character ``index`` in ``text``."""
    return len(text[:index].encode("utf-8")) + 1
