# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels; same contract as ``_pykernels``."""

from cpython.unicode cimport Py_UNICODE_ISSPACE

from treestylo._tree import ParseTree, TreeSyntaxError, byte_offset

cdef object _raw = ParseTree._raw


cdef inline bint _is_space(Py_UCS4 ch):
    return ch == u' ' or Py_UNICODE_ISSPACE(ch)


def parse_sexprs(str text):
    cdef Py_ssize_t i = 0, j, n = len(text)
    cdef Py_UCS4 ch
    cdef list trees = []
    cdef list stack = []
    cdef list top
    cdef str tok
    while i < n:
        ch = text[i]
        if ch == u'(':
            if stack:
                top = <list>stack[len(stack) - 1]
                if top[0] is None:
                    raise TreeSyntaxError("empty label", byte_offset(text, i))
                if top[2] is not None:
                    raise TreeSyntaxError(
                        f"child node after word in {top[0]!r}", byte_offset(text, i))
            stack.append([None, [], None, i])
            i += 1
        elif ch == u')':
            if not stack:
                raise TreeSyntaxError("unbalanced parentheses: unexpected ')'",
                                      byte_offset(text, i))
            top = <list>stack.pop()
            if top[0] is None:
                raise TreeSyntaxError("empty label", byte_offset(text, i))
            node = _raw(top[0], tuple(<list>top[1]), top[2])
            if stack:
                (<list>(<list>stack[len(stack) - 1])[1]).append(node)
            else:
                trees.append(node)
            i += 1
        elif _is_space(ch):
            i += 1
        else:
            j = i + 1
            while j < n:
                ch = text[j]
                if ch == u'(' or ch == u')' or _is_space(ch):
                    break
                j += 1
            tok = text[i:j]
            if not stack:
                raise TreeSyntaxError(f"bare word {tok!r} outside a node",
                                      byte_offset(text, i))
            top = <list>stack[len(stack) - 1]
            if top[0] is None:
                top[0] = tok
            elif top[2] is None and not top[1]:
                top[2] = tok
            else:
                raise TreeSyntaxError(f"unexpected token {tok!r} in {top[0]!r}",
                                      byte_offset(text, i))
            i = j
    if stack:
        raise TreeSyntaxError(
            f"unbalanced parentheses: '(' at byte "
            f"{byte_offset(text, (<list>stack[len(stack) - 1])[3])} is never closed",
            byte_offset(text, n))
    return trees


cdef _word_error(node):
    return ValueError(f"canonical form needs a word-free tree; {node.label!r} "
                      f"carries {node.word!r}")


cdef str _canonical(object node):
    if node.word is not None:
        raise _word_error(node)
    cdef list parts = ["(", node.label]
    for c in node.children:
        parts.append(_canonical(c))
    parts.append(")")
    return "".join(parts)


def canonical(node):
    return _canonical(node)


cdef str _truncated(object node, int depth):
    cdef tuple kids = node.children
    if depth == 0 or not kids:
        if node.word is not None:
            raise _word_error(node)
        return "(" + node.label + ")"
    cdef list parts = ["(", node.label]
    for c in kids:
        parts.append(_truncated(c, depth - 1))
    parts.append(")")
    return "".join(parts)


def truncated(node, int depth):
    return _truncated(node, depth)


cdef int _subtrees(object node, int depth, dict out, list forms):
    # fills ``forms`` (length depth+1) and returns the node height
    cdef str label = node.label
    cdef tuple kids = node.children
    cdef Py_ssize_t nk = len(kids), a
    cdef int j, h, height = 0
    cdef str leaf, key
    cdef list kid_forms, parts, kf
    if node.word is not None:
        raise _word_error(node)
    leaf = "(" + label + ")"
    forms[0] = leaf
    if nk == 0:
        for j in range(1, depth + 1):
            forms[j] = leaf
        return 0
    kid_forms = []
    for a in range(nk):
        kf = [None] * (depth + 1)
        h = _subtrees(kids[a], depth, out, kf)
        if h + 1 > height:
            height = h + 1
        kid_forms.append(kf)
    for j in range(1, depth + 1):
        parts = ["(", label]
        for a in range(nk):
            parts.append((<list>kid_forms[a])[j - 1])
        parts.append(")")
        forms[j] = "".join(parts)
    if height >= depth:
        key = forms[depth]
        out[key] = out.get(key, 0) + 1
    return height


def subtree_counts(tree, int depth):
    cdef dict out = {}
    _subtrees(tree, depth, out, [None] * (depth + 1))
    return out


def label_counts(tree):
    cdef dict out = {}
    cdef list stack = [tree]
    cdef str label
    while stack:
        node = stack.pop()
        label = node.label
        out[label] = out.get(label, 0) + 1
        stack.extend(node.children)
    return out


def level_counts(tree):
    cdef dict out = {}
    cdef int level = 1
    cdef list row = [tree], nxt
    cdef str prefix, key
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
