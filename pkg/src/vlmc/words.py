"""Binary words.

Words are plain strings over the alphabet {'0', '1'}, written left to
right; for a chain history the rightmost letter is the most recent one.
Tree nodes are also words, read root-first, so the tree node matching a
history suffix is the reversed suffix.
"""

from __future__ import annotations

ALPHABET = ("0", "1")


def check_word(w: str) -> str:
    if not isinstance(w, str) or any(ch not in "01" for ch in w):
        raise ValueError(f"not a binary word: {w!r}")
    return w


def reverse(w: str) -> str:
    return w[::-1]


def is_subword(u: str, v: str) -> bool:
    """u occurs in v as a contiguous block."""
    return u in v


def all_words(length: int):
    """All binary words of the given length, alphabetical order."""
    if length == 0:
        yield ""
        return
    for i in range(1 << length):
        yield format(i, f"0{length}b")


def alternating(first: str, length: int) -> str:
    """The alternating word of given length starting with `first`."""
    other = "1" if first == "0" else "0"
    return "".join(first if i % 2 == 0 else other for i in range(length))


def is_alternating(w: str) -> bool:
    return all(w[i] != w[i + 1] for i in range(len(w) - 1))


def last_equal_pair(w: str) -> int:
    """Index i of the rightmost adjacent equal pair w[i] == w[i+1], or -1."""
    for i in range(len(w) - 2, -1, -1):
        if w[i] == w[i + 1]:
            return i
    return -1
