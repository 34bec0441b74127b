"""Symmetric group S_n as a Coxeter group.

Window notation: ``window[j] == w(j)`` on {0..n-1}.  Generator i (1-based,
i in {1..n-1}) is the transposition of positions i-1 and i.  Composition is
``(u * w)(x) = u(w(x))``; words multiply left to right as composition applied
right to left, so the word [a, b] denotes s_a * s_b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_WORD_N = 7  # reduced-word enumeration guard


@dataclass(frozen=True)
class Permutation:
    window: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.window) != list(range(len(self.window))):
            raise ValueError(f"not a permutation window: {self.window}")

    @property
    def n(self) -> int:
        return len(self.window)

    def __call__(self, x: int) -> int:
        return self.window[x]

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def longest(n: int) -> "Permutation":
        return Permutation(tuple(range(n - 1, -1, -1)))

    @staticmethod
    def generator(n: int, i: int) -> "Permutation":
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for S_{n}")
        w = list(range(n))
        w[i - 1], w[i] = w[i], w[i - 1]
        return Permutation(tuple(w))

    def compose(self, other: "Permutation") -> "Permutation":
        """(self * other)(x) = self(other(x))."""
        if self.n != other.n:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.window[other.window[x]] for x in range(self.n)))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return self.compose(other)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.window):
            inv[y] = x
        return Permutation(tuple(inv))


def length(w: Permutation) -> int:
    """Number of inversions #{(a,b) : a < b, w(a) > w(b)}."""
    return sum(
        1
        for a in range(w.n)
        for b in range(a + 1, w.n)
        if w.window[a] > w.window[b]
    )


def word_to_permutation(n: int, letters: list[int]) -> Permutation:
    w = Permutation.identity(n)
    for i in letters:
        w = w * Permutation.generator(n, i)
    return w


def right_descents(w: Permutation) -> list[int]:
    return [i for i in range(1, w.n) if w.window[i - 1] > w.window[i]]


@lru_cache(maxsize=None)
def _reduced_words(window: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    w = Permutation(window)
    if length(w) == 0:
        return ((),)
    out = []
    for i in right_descents(w):
        shorter = w * Permutation.generator(w.n, i)
        for word in _reduced_words(shorter.window):
            out.append(word + (i,))
    return tuple(out)


def reduced_words(w: Permutation) -> set[tuple[int, ...]]:
    """All reduced expressions of w (BFS on right descents).  n <= 7 only."""
    if w.n > MAX_WORD_N:
        raise ValueError(f"reduced_words limited to n <= {MAX_WORD_N}")
    return set(_reduced_words(w.window))


def support(w: Permutation) -> set[int]:
    """Generators occurring in any (equivalently every) reduced word of w.

    Computed as {i : w does not stabilize {0..i-1}}.
    """
    out = set()
    for i in range(1, w.n):
        if set(w.window[:i]) != set(range(i)):
            out.add(i)
    return out


def _check_index(w: Permutation, i: int) -> None:
    if not 1 <= i <= w.n - 1:
        raise ValueError(f"index {i} out of range for S_{w.n}")


def crossing_number(w: Permutation, i: int) -> int:
    """d_i(w) = #{k >= i : w(k) < i} = (n-i) - |w({i..n-1}) cap {i..n-1}|."""
    _check_index(w, i)
    return sum(1 for k in range(i, w.n) if w.window[k] < i)


def pair_count(w: Permutation, i: int) -> int:
    """#{(j,k) in {0..i-1} x {i..n-1} : w(k) < w(j)}."""
    _check_index(w, i)
    return sum(
        1
        for j in range(i)
        for k in range(i, w.n)
        if w.window[k] < w.window[j]
    )


def min_generator_multiplicity(w: Permutation, i: int) -> int:
    """Minimum over all reduced words of the number of occurrences of letter i."""
    _check_index(w, i)
    return min(word.count(i) for word in reduced_words(w))


def rank_matrix(w: Permutation) -> tuple[tuple[int, ...], ...]:
    """r(a,b) = #{c <= b : w(c) <= a}."""
    n = w.n
    return tuple(
        tuple(sum(1 for c in range(b + 1) if w.window[c] <= a) for b in range(n))
        for a in range(n)
    )


def bruhat_leq(u: Permutation, w: Permutation) -> bool:
    """u <= w in Bruhat order iff r_u(a,b) >= r_w(a,b) everywhere."""
    if u.n != w.n:
        raise ValueError("size mismatch")
    ru, rw = rank_matrix(u), rank_matrix(w)
    return all(ru[a][b] >= rw[a][b] for a in range(u.n) for b in range(u.n))


def transpositions(n: int) -> list[Permutation]:
    out = []
    for a in range(n):
        for b in range(a + 1, n):
            win = list(range(n))
            win[a], win[b] = win[b], win[a]
            out.append(Permutation(tuple(win)))
    return out


def reflections_dropping(w: Permutation, i: int) -> int:
    """#{transpositions t : i not in support(t * w)}."""
    _check_index(w, i)
    return sum(1 for t in transpositions(w.n) if i not in support(t * w))


WEIL_FORM_TAGS = ("s_i", "s_i down", "s_i up", "s_i down up")


def _form_words(n: int, i: int) -> list[tuple[str, tuple[int, ...]]]:
    """The four one-occurrence word shapes anchored at generator i."""
    forms: list[tuple[str, tuple[int, ...]]] = [("s_i", (i,))]
    for dm in range(1, i):
        forms.append(("s_i down", tuple([i] + list(range(i - 1, i - dm - 1, -1)))))
    for dp in range(1, n - i):
        forms.append(("s_i up", tuple([i] + list(range(i + 1, i + dp + 1)))))
    for dm in range(1, i):
        for dp in range(1, n - i):
            forms.append(
                (
                    "s_i down up",
                    tuple(
                        [i]
                        + list(range(i - 1, i - dm - 1, -1))
                        + list(range(i + 1, i + dp + 1))
                    ),
                )
            )
    return forms


def multfree_decompose(w: Permutation, i: int) -> tuple[Permutation, str]:
    """Find w' with i outside support(w') such that w' * w is one of the four
    single-occurrence word shapes anchored at i; return (w', form tag).

    Requires crossing_number(w, i) == 1.  Exhaustive search over s_i-free
    permutations ordered by length.
    """
    _check_index(w, i)
    if crossing_number(w, i) != 1:
        raise ValueError("multfree_decompose requires crossing_number == 1")
    n = w.n
    targets = {
        word_to_permutation(n, list(word)).window: (tag, word)
        for tag, word in _form_words(n, i)
        if length(word_to_permutation(n, list(word))) == len(word)
    }
    candidates = sorted(
        (Permutation(p) for p in itertools.permutations(range(n))), key=length
    )
    for wp in candidates:
        if i in support(wp):
            continue
        prod = wp * w
        hit = targets.get(prod.window)
        if hit is not None:
            return wp, hit[0]
    raise ValueError("no decomposition found")  # unreachable for valid input
