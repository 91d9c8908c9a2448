"""Words in a free product of free groups.

The factors are free groups presented by generator names only, so the whole
product is itself a free group on the union of the generators.  Group
elements are reduced words over signed letters: generator g (in the global
numbering across factors) gets letter id 2*g, its inverse 2*g + 1, and
inversion of a letter is id ^ 1.

Text form: whitespace-separated tokens "a", "a^-1", "a^3"; a bare generator
name works when it is unique across all factors, otherwise qualify it as
"Factor:name".  The empty string (or the token "1") is the identity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = ["FactorPresentation", "FreeProduct", "Word", "reduce_letters"]


@dataclass(frozen=True)
class FactorPresentation:
    """One free factor: a name and its generator names."""

    name: str
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if not self.name or not isinstance(self.name, str):
            raise ValueError("factor needs a non-empty name")
        if len(self.generators) == 0:
            raise ValueError(f"factor {self.name!r} has no generators")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError(f"factor {self.name!r} repeats a generator name")
        for g in self.generators:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", g):
                raise ValueError(f"bad generator name {g!r}")

    @property
    def rank(self) -> int:
        return len(self.generators)


def reduce_letters(letters: Iterable[int]) -> tuple:
    """Cancel adjacent inverse pairs (letter ids x and x^1)."""
    stack: list = []
    for let in letters:
        if stack and stack[-1] == (let ^ 1):
            stack.pop()
        else:
            stack.append(let)
    return tuple(stack)


_TOKEN_RE = re.compile(
    r"(?:(?P<factor>[A-Za-z_][A-Za-z_0-9]*):)?"
    r"(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"(?:\^(?P<exp>-?\d+))?$")


class FreeProduct:
    """Free product of named free factors, with word arithmetic."""

    def __init__(self, factors: Sequence[FactorPresentation]):
        factors = tuple(factors)
        if not factors:
            raise ValueError("need at least one factor")
        names = [f.name for f in factors]
        if len(set(names)) != len(names):
            raise ValueError("factor names must be distinct")
        self.factors = factors
        self._offsets = []
        total = 0
        for f in factors:
            self._offsets.append(total)
            total += f.rank
        self.num_generators = total
        self.num_letters = 2 * total
        # generator name -> list of (factor index, global generator index)
        by_name: dict = {}
        for fi, f in enumerate(factors):
            for gi, g in enumerate(f.generators):
                by_name.setdefault(g, []).append((fi, self._offsets[fi] + gi))
        self._by_name = by_name

    # -- structure ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FreeProduct):
            return NotImplemented
        return self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        parts = " * ".join(f"{f.name}(rank {f.rank})" for f in self.factors)
        return f"FreeProduct({parts})"

    @property
    def num_factors(self) -> int:
        return len(self.factors)

    def factor_of_letter(self, letter: int) -> int:
        """Index of the factor the letter's generator belongs to."""
        g = self._check_letter(letter) // 2
        for fi in range(len(self.factors) - 1, -1, -1):
            if g >= self._offsets[fi]:
                return fi
        raise AssertionError("unreachable")

    def letter_name(self, letter: int, qualified: bool | None = None) -> str:
        g = self._check_letter(letter) // 2
        fi = self.factor_of_letter(letter)
        name = self.factors[fi].generators[g - self._offsets[fi]]
        if qualified is None:
            qualified = len(self._by_name[name]) > 1
        text = f"{self.factors[fi].name}:{name}" if qualified else name
        return text + ("^-1" if letter & 1 else "")

    def _check_letter(self, letter: int) -> int:
        if not 0 <= letter < self.num_letters:
            raise ValueError(f"letter id {letter} out of range 0..{self.num_letters - 1}")
        return letter

    # -- constructing words --------------------------------------------------

    def identity(self) -> "Word":
        return Word(self, ())

    def word(self, letters: Iterable[int]) -> "Word":
        lets = tuple(self._check_letter(x) for x in letters)
        return Word(self, reduce_letters(lets))

    def generator(self, factor_index: int, gen_index: int = 0) -> "Word":
        f = self.factors[factor_index]
        if not 0 <= gen_index < f.rank:
            raise ValueError(f"factor {f.name!r} has no generator {gen_index}")
        return Word(self, (2 * (self._offsets[factor_index] + gen_index),))

    def generators(self) -> list:
        return [Word(self, (2 * g,)) for g in range(self.num_generators)]

    def parse(self, text: str) -> "Word":
        letters: list = []
        for token in text.split():
            if token == "1":
                continue
            m = _TOKEN_RE.match(token)
            if m is None:
                raise ValueError(f"cannot parse token {token!r}")
            name, factor = m.group("name"), m.group("factor")
            exp = int(m.group("exp")) if m.group("exp") else 1
            candidates = self._by_name.get(name, [])
            if factor is not None:
                candidates = [(fi, g) for fi, g in candidates
                              if self.factors[fi].name == factor]
            if not candidates:
                raise ValueError(f"unknown generator in token {token!r}")
            if len(candidates) > 1:
                owners = ", ".join(self.factors[fi].name for fi, _ in candidates)
                raise ValueError(
                    f"generator {name!r} is ambiguous (factors {owners}); qualify it")
            g = candidates[0][1]
            letter = 2 * g + (1 if exp < 0 else 0)
            letters.extend([letter] * abs(exp))
        return Word(self, reduce_letters(letters))

    # -- enumeration ---------------------------------------------------------

    def ball_count(self, radius: int) -> int:
        """Number of reduced words of length <= radius (identity included)."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        big_l = self.num_letters
        total = 1
        for k in range(1, radius + 1):
            total += big_l * (big_l - 1) ** (k - 1)
        return total

    def enumerate_ball(self, radius: int) -> list:
        """All reduced words of length <= radius, in length-then-lex order.

        Lex order is by letter id, so a generator precedes its inverse and
        factors appear in presentation order.
        """
        if radius < 0:
            raise ValueError("radius must be >= 0")
        out = [Word(self, ())]
        frontier = [()]
        for _ in range(radius):
            nxt = []
            for lets in frontier:
                last = lets[-1] if lets else None
                for letter in range(self.num_letters):
                    if last is not None and letter == (last ^ 1):
                        continue
                    nxt.append(lets + (letter,))
            out.extend(Word(self, lets) for lets in nxt)
            frontier = nxt
        return out

    def enumerate_sphere(self, radius: int) -> list:
        if radius == 0:
            return [Word(self, ())]
        return [w for w in self.enumerate_ball(radius) if len(w) == radius]

    def enumerate_factor_ball(self, factor_index: int, radius: int) -> list:
        """Reduced words in one factor's letters only, length-then-lex order."""
        if not 0 <= factor_index < len(self.factors):
            raise ValueError(f"no factor with index {factor_index}")
        if radius < 0:
            raise ValueError("radius must be >= 0")
        lo = 2 * self._offsets[factor_index]
        hi = lo + 2 * self.factors[factor_index].rank
        out = [Word(self, ())]
        frontier = [()]
        for _ in range(radius):
            nxt = []
            for lets in frontier:
                last = lets[-1] if lets else None
                for letter in range(lo, hi):
                    if last is not None and letter == (last ^ 1):
                        continue
                    nxt.append(lets + (letter,))
            out.extend(Word(self, lets) for lets in nxt)
            frontier = nxt
        return out


class Word:
    """A reduced word; construct through FreeProduct methods, not directly."""

    __slots__ = ("group", "letters")

    def __init__(self, group: FreeProduct, letters: tuple):
        self.group = group
        self.letters = letters

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if self.group != other.group:
            raise ValueError("words from different groups")
        return Word(self.group, reduce_letters(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(self.group, tuple((x ^ 1) for x in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.group.identity()
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def factors_touched(self) -> set:
        return {self.group.factor_of_letter(x) for x in self.letters}

    def syllables(self) -> tuple:
        """Maximal runs of letters from one factor: ((factor, letters), ...).

        Adjacent syllables always come from distinct factors; within a
        syllable the letters are reduced but may repeat.
        """
        out = []
        i = 0
        while i < len(self.letters):
            f = self.group.factor_of_letter(self.letters[i])
            j = i
            while j < len(self.letters) and \
                    self.group.factor_of_letter(self.letters[j]) == f:
                j += 1
            out.append((f, self.letters[i:j]))
            i = j
        return tuple(out)

    def __eq__(self, other):
        if not isinstance(other, Word):
            return NotImplemented
        return self.group == other.group and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            j = i
            while j < len(self.letters) and self.letters[j] == self.letters[i]:
                j += 1
            run = j - i
            letter = self.letters[i]
            base = self.group.letter_name(letter & ~1)
            if letter & 1:
                parts.append(f"{base}^-{run}" if run > 1 else f"{base}^-1")
            else:
                parts.append(f"{base}^{run}" if run > 1 else base)
            i = j
        return " ".join(parts)

    def __repr__(self):
        return f"Word({str(self)!r})"
