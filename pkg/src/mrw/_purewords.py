"""Pure-Python word-rewriting kernel.

Words are plain strings in "code space": one character per letter.  The
compiled kernel in _fastwords.pyx implements the same three functions with
identical semantics; mrw._words picks whichever is available.  Rewrite
order is canonical everywhere: rules in declared order, positions left to
right.  A rule with lhs == rhs can never produce a different word in a free
monoid, so proper rewriting skips it outright.
"""

IMPL = "pure"


def occurrences(word, sub):
    """All start indices of sub in word, overlapping included."""
    if not sub:
        return list(range(len(word) + 1))
    out = []
    i = word.find(sub)
    while i != -1:
        out.append(i)
        i = word.find(sub, i + 1)
    return out


def successors(word, rules, proper=True):
    """Canonical list of (rule_index, position, rewritten word)."""
    out = []
    for ri, (lhs, rhs) in enumerate(rules):
        if proper and lhs == rhs:
            continue
        for pos in occurrences(word, lhs):
            out.append((ri, pos, word[:pos] + rhs + word[pos + len(lhs):]))
    return out


def normal_form_steps(word, rules, max_steps):
    """Reduce word by the first applicable proper rule, leftmost position.

    Returns (word, steps, completed) where steps is a list of
    (rule_index, position) and completed is False when max_steps ran out.
    """
    steps = []
    while True:
        if len(steps) >= max_steps:
            return word, steps, False
        hit = None
        for ri, (lhs, rhs) in enumerate(rules):
            if lhs == rhs:
                continue
            pos = word.find(lhs)
            if pos != -1:
                hit = (ri, pos, lhs, rhs)
                break
        if hit is None:
            return word, steps, True
        ri, pos, lhs, rhs = hit
        steps.append((ri, pos))
        word = word[:pos] + rhs + word[pos + len(lhs):]
