"""Braid words as signed generator sequences, plus the letter codec.

A word stores signed 1-based indices: ``+k`` is the k-th generator, ``-k`` its
inverse. Two alphabets are in use: the five-generator six-anyon alphabet
(letters A..E, inverses F..J) and the two-generator three-anyon alphabet
(letters a,b, inverses A,B).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class BraidWord:
    """Immutable braid word over ``arity`` generators."""

    letters: tuple
    arity: int

    def __init__(self, letters: Iterable[int], arity: int):
        letters = tuple(int(v) for v in letters)
        for v in letters:
            if v == 0 or abs(v) > arity:
                raise ValueError(f"letter {v} outside arity {arity}")
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "arity", arity)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.arity != other.arity:
            raise ValueError("arity mismatch")
        return BraidWord(self.letters + other.letters, self.arity)

    def inverse(self) -> "BraidWord":
        """Reverse the letter order and flip every sign."""
        return BraidWord(tuple(-v for v in reversed(self.letters)), self.arity)

    @property
    def is_freely_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    def free_reduce(self) -> "BraidWord":
        """Cancel adjacent letter-inverse pairs until none remain."""
        out: list = []
        for v in self.letters:
            if out and out[-1] == -v:
                out.pop()
            else:
                out.append(v)
        return BraidWord(out, self.arity)


@dataclass(frozen=True)
class LetterCodec:
    """Bijection between signed generator indices and a letter alphabet."""

    arity: int
    plain: str
    inverse: str

    def __post_init__(self):
        if len(self.plain) != self.arity or len(self.inverse) != self.arity:
            raise ValueError("alphabet size must equal arity")
        if len(set(self.plain + self.inverse)) != 2 * self.arity:
            raise ValueError("alphabet letters must be distinct")

    def encode(self, word: BraidWord) -> str:
        if word.arity != self.arity:
            raise ValueError("arity mismatch")
        return "".join(
            self.plain[v - 1] if v > 0 else self.inverse[-v - 1]
            for v in word.letters
        )

    def decode(self, text: str) -> BraidWord:
        out = []
        for ch in text:
            if ch in self.plain:
                out.append(self.plain.index(ch) + 1)
            elif ch in self.inverse:
                out.append(-(self.inverse.index(ch) + 1))
            else:
                raise ValueError(f"unknown letter {ch!r}")
        return BraidWord(out, self.arity)


TWO_QUBIT_CODEC = LetterCodec(5, "ABCDE", "FGHIJ")
ONE_QUBIT_CODEC = LetterCodec(2, "ab", "AB")


def codec_for(arity: int) -> LetterCodec:
    if arity == 5:
        return TWO_QUBIT_CODEC
    if arity == 2:
        return ONE_QUBIT_CODEC
    raise ValueError(f"no letter alphabet for arity {arity}")
