# cython: language_level=3
"""Compiled word-rewriting kernel.

Same contract as mrw._purewords; see that module for the semantics.  The
win over the pure kernel is fusing the scan/apply loop of normal_form_steps
so the interpreter is not re-entered once per rewrite step.
"""

IMPL = "fast"


def occurrences(str word, str sub):
    cdef list out = []
    cdef Py_ssize_t i, n
    if len(sub) == 0:
        n = len(word)
        for i in range(n + 1):
            out.append(i)
        return out
    i = word.find(sub)
    while i != -1:
        out.append(i)
        i = word.find(sub, i + 1)
    return out


def successors(str word, list rules, bint proper=True):
    cdef list out = []
    cdef Py_ssize_t ri, pos, nrules = len(rules)
    cdef str lhs, rhs
    for ri in range(nrules):
        lhs, rhs = rules[ri]
        if proper and lhs == rhs:
            continue
        pos = word.find(lhs)
        while pos != -1:
            out.append((ri, pos, word[:pos] + rhs + word[pos + len(lhs):]))
            pos = word.find(lhs, pos + 1)
    return out


def normal_form_steps(str word, list rules, Py_ssize_t max_steps):
    cdef list steps = []
    cdef Py_ssize_t ri, pos, nrules = len(rules)
    cdef str lhs, rhs
    cdef bint found
    while True:
        if len(steps) >= max_steps:
            return word, steps, False
        found = False
        for ri in range(nrules):
            lhs, rhs = rules[ri]
            if lhs == rhs:
                continue
            pos = word.find(lhs)
            if pos != -1:
                found = True
                steps.append((ri, pos))
                word = word[:pos] + rhs + word[pos + len(lhs):]
                break
        if not found:
            return word, steps, True
