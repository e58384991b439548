"""Normalization engine for operator expressions.

Single-word rules (oriented, terminating):

* a generator d_q or ds_q with q < 0 or q >= n is the zero operator; any
  word containing one is dropped (top/bottom of the complex);
* adjacent d d and adjacent ds ds annihilate (the complex property);
* a plain potential commutes past d, ds to the right:
  ``Phi_{q+1} d_q -> d_q Phi_q`` and ``Phi_q ds_q -> ds_q Phi_{q+1}``.
  It is not moved past coefficient matrices or past PhiMu.

Two-term cancellation (applied to the expression's term multiset): wherever
a word contains one half of an inverted operator pair adjacent to its
potential, i.e. one of

* ``ds_q d_q  Phi_q`` / ``d_{q-1} ds_{q-1}  Phi_q``  (the two halves of the
  Hodge Laplacian in front of its inverse),
* ``ds_q M_q d_q  PhiMu_q`` / ``d_{q-1} Mt_q ds_{q-1}  PhiMu_q``,
* ``PhiMu_q  ds_q M_q d_q`` / ``PhiMu_q  d_{q-1} Mt_q ds_{q-1}``,

the complementary word (same prefix and suffix, other half substituted) is
formed.  If the complement normalizes to zero the pattern collapses on its
own; if the complement is present as a term with a same-sign coefficient the
two terms merge.  Both moves strictly decrease a weighted length measure, so
the loop terminates; a step budget guards against blow-ups regardless.

No confluence is claimed: callers treat a nonzero normal form of an expected
zero as a STUCK verdict, never as silent acceptance.
"""

from __future__ import annotations

from .generators import Expression, Generator, Word, word_key

DEFAULT_BUDGET = 10**6

from ..errors import RewriteBudgetError


def _gen_is_zero(g: Generator, n: int) -> bool:
    if g.kind in ("d", "ds"):
        return g.level < 0 or g.level >= n
    if g.kind in ("phi", "phimu"):
        return g.level < 0 or g.level > n
    if g.kind == "mat":
        return not 0 <= g.level + 1 <= n
    if g.kind == "matt":
        return not 0 <= g.level - 1 <= n
    return False


def reduce_word(word: Word, n: int) -> Word | None:
    """Fixed point of the single-word rules; None when the word is zero."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        for g in w:
            if _gen_is_zero(g, n):
                return None
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a.kind == "d" and b.kind == "d":
                return None
            if a.kind == "ds" and b.kind == "ds":
                return None
            if a.kind == "phi" and b.kind == "d":
                # Phi_{q+1} d_q  ->  d_q Phi_q
                w[i], w[i + 1] = b, Generator("phi", b.level)
                changed = True
                break
            if a.kind == "phi" and b.kind == "ds":
                # Phi_q ds_q  ->  ds_q Phi_{q+1}
                w[i], w[i + 1] = b, Generator("phi", b.level + 1)
                changed = True
                break
    return tuple(w)


def _plain_halves(q: int) -> tuple[Word, Word]:
    return (
        (Generator("ds", q), Generator("d", q)),
        (Generator("d", q - 1), Generator("ds", q - 1)),
    )


def _mu_halves(q: int) -> tuple[Word, Word]:
    return (
        (Generator("ds", q), Generator("mat", q), Generator("d", q)),
        (Generator("d", q - 1), Generator("matt", q), Generator("ds", q - 1)),
    )


def _pattern_sites(word: Word, kind: int):
    """Yield (start, stop, complement_segment) for each cancellation site.

    ``kind`` selects the pattern family: 0 = plain potential (fired first,
    as every proof in the verified corpus collapses Hodge pairs eagerly),
    1 = Lame pair right of its potential, 2 = Lame pair left of it.
    ``word[start:stop]`` is the half plus its potential; substituting
    ``complement_segment`` gives the partner word, dropping the segment
    gives the collapsed word.
    """
    L = len(word)
    for i, g in enumerate(word):
        if kind == 0 and g.kind == "phi":
            h1, h2 = _plain_halves(g.level)
            for a, b in ((h1, h2), (h2, h1)):
                j = i - len(a)
                if j >= 0 and word[j:i] == a:
                    yield j, i + 1, b + (g,)
        elif g.kind == "phimu":
            h1, h2 = _mu_halves(g.level)
            for a, b in ((h1, h2), (h2, h1)):
                if kind == 1:
                    j = i - len(a)
                    if j >= 0 and word[j:i] == a:
                        yield j, i + 1, b + (g,)
                elif kind == 2:
                    k = i + 1 + len(a)
                    if k <= L and word[i + 1 : k] == a:
                        yield i, k, (g,) + b


def normalize(expr: Expression, n: int, budget: int = DEFAULT_BUDGET) -> Expression:
    """Fixed point of the oriented rule set over the term multiset."""
    terms: dict[Word, int] = {}
    steps = 0

    def charge(k: int = 1):
        nonlocal steps
        steps += k
        if steps > budget:
            raise RewriteBudgetError(f"rewrite budget of {budget} steps exceeded")

    def put(word: Word | None, c: int):
        if word is None or not c:
            return
        acc = terms.get(word, 0) + c
        if acc:
            terms[word] = acc
        else:
            terms.pop(word, None)

    for w, c in expr.terms.items():
        charge()
        put(reduce_word(w, n), c)

    while True:
        fired = False
        for kind in (0, 1, 2):
            for w in sorted(terms, key=word_key):
                c = terms.get(w)
                if not c:
                    continue
                for start, stop, comp in _pattern_sites(w, kind):
                    charge()
                    partner_raw = w[:start] + comp + w[stop:]
                    partner = reduce_word(partner_raw, n)
                    collapsed = reduce_word(w[:start] + w[stop:], n)
                    if partner is None:
                        # the complementary half is the zero operator: the
                        # pair rule fires on this term alone
                        put(w, -c)
                        put(collapsed, c)
                        fired = True
                        break
                    cp = terms.get(partner, 0)
                    if partner != w and cp and (cp > 0) == (c > 0):
                        m = min(abs(c), abs(cp)) * (1 if c > 0 else -1)
                        put(w, -m)
                        put(partner, -m)
                        put(collapsed, m)
                        fired = True
                        break
                if fired:
                    break
            if fired:
                break
        if not fired:
            break

    return Expression(expr.src, expr.tgt, terms)


def normal_form_equal(a: Expression, b: Expression, n: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Equality test through the engine: normalize the difference to zero.

    Normal forms themselves are not unique (no confluence claim), so
    comparing them syntactically can report false mismatches; normalizing
    the difference lets the two-term rule pair terms across both operands.
    """
    return normalize(a - b, n, budget).is_zero()
