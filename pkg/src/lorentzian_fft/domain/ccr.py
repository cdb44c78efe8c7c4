"""CCR quantization of Poisson vector spaces.

Elements of ``CCR(V)`` are kept in normal form: linear combinations of
nonincreasing words in the basis generators with Gaussian-rational
coefficients. The rewrite rule ``v_a v_b -> v_b v_a + i tau(a, b) 1`` for
``a < b`` is applied until every word is nonincreasing.
"""

from __future__ import annotations

import logging
import random
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

from .kleingordon import FormMismatch, PoissonMap, PoissonSpace
from .linalg import RationalMatrix
from .scalars import (
    Gaussian,
    RationalParseError,
    conjugate,
    gaussian,
    is_zero,
    parse_rational,
    render_gaussian,
)

LOGGER = logging.getLogger(__name__)

Word = tuple[int, ...]

_GAUSSIAN_PATTERN = re.compile(
    r"^\(\s*([+-]?[\d/]+)?\s*(?:([+-])\s*([\d/]*)\s*i)?\s*\)$"
)
_IMAGINARY_PATTERN = re.compile(r"^([+-]?)\s*([\d/]*)\s*i$")
_LETTER_PATTERN = re.compile(r"^e(\d+)$")


class IndexOutOfRange(ValueError):
    """Raised when a word uses a generator the parent space lacks."""


class ParentMismatch(ValueError):
    """Raised when elements of different CCR algebras are combined."""


class NotPoisson(ValueError):
    """Raised when a generator map does not preserve the Poisson forms."""


class ElementParseError(ValueError):
    """Raised when an element literal is malformed."""


@dataclass(frozen=True)
class CCRElement:
    """Normal-ordered element of ``CCR(parent)``."""

    parent: PoissonSpace
    terms: Mapping[Word, Gaussian] = field(default_factory=dict)

    def __post_init__(self) -> None:  # pragma: no cover - dataclass hook
        cleaned: dict[Word, Gaussian] = {}
        for word, coefficient in self.terms.items():
            word = tuple(word)
            _check_letters(self.parent, word)
            if any(a < b for a, b in zip(word, word[1:])):
                raise ValueError(f"Word {word} is not normal ordered")
            if not is_zero(coefficient):
                cleaned[word] = coefficient
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def zero(cls, parent: PoissonSpace) -> CCRElement:
        return cls(parent, {})

    @classmethod
    def unit(cls, parent: PoissonSpace) -> CCRElement:
        return cls(parent, {(): gaussian(1)})

    @classmethod
    def scalar(cls, parent: PoissonSpace, value: Any) -> CCRElement:
        return cls(parent, {(): _as_gaussian(value)})

    @classmethod
    def generator(cls, parent: PoissonSpace, index: int) -> CCRElement:
        return cls(parent, {(index,): gaussian(1)})

    @classmethod
    def linear(
        cls, parent: PoissonSpace, coefficients: Iterable[Any]
    ) -> CCRElement:
        return cls(
            parent,
            {
                (k,): _as_gaussian(value)
                for k, value in enumerate(coefficients)
            },
        )

    @property
    def degree(self) -> int:
        return max((len(word) for word in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def scale(self, value: Any) -> CCRElement:
        factor = _as_gaussian(value)
        return CCRElement(
            self.parent,
            {word: factor * c for word, c in self.terms.items()},
        )

    def __add__(self, other: CCRElement) -> CCRElement:
        _same_parent(self, other)
        merged = dict(self.terms)
        for word, coefficient in other.terms.items():
            merged[word] = merged.get(word, gaussian(0)) + coefficient
        return CCRElement(self.parent, merged)

    def __neg__(self) -> CCRElement:
        return self.scale(-1)

    def __sub__(self, other: CCRElement) -> CCRElement:
        return self + (-other)

    def __mul__(self, other: CCRElement) -> CCRElement:
        return multiply(self, other)

    def render(self) -> str:
        if not self.terms:
            return "0"
        words = sorted(
            self.terms, key=lambda w: (-len(w), tuple(-k for k in w))
        )
        return " + ".join(
            f"{render_gaussian(self.terms[w])}*{_render_word(w)}"
            for w in words
        )


def _as_gaussian(value: Any) -> Gaussian:
    if hasattr(value, "x") and hasattr(value, "y"):
        return value
    return gaussian(value)


def _render_word(word: Word) -> str:
    if not word:
        return "1"
    return ".".join(f"e{k + 1}" for k in word)


def _check_letters(parent: PoissonSpace, word: Word) -> None:
    for letter in word:
        if not 0 <= letter < parent.dim:
            raise IndexOutOfRange(
                f"Generator index {letter} outside 0..{parent.dim - 1}"
            )


def _same_parent(a: CCRElement, b: CCRElement) -> None:
    if a.parent != b.parent:
        raise ParentMismatch("Elements belong to different CCR algebras")


def normal_form(
    parent: PoissonSpace,
    raw: Mapping[Word, Any] | Iterable[tuple[Word, Any]],
    rng: random.Random | None = None,
) -> CCRElement:
    """Rewrite a word sum into normal order.

    Without ``rng`` the leftmost ascent is rewritten first; with ``rng``
    a random ascent is chosen at every step.
    """

    items = raw.items() if isinstance(raw, Mapping) else raw
    pending = []
    for word, coefficient in items:
        word = tuple(word)
        _check_letters(parent, word)
        pending.append((word, _as_gaussian(coefficient)))
    form = parent.form
    result: dict[Word, Gaussian] = {}
    while pending:
        word, coefficient = pending.pop()
        if is_zero(coefficient):
            continue
        ascents = [
            k for k in range(len(word) - 1) if word[k] < word[k + 1]
        ]
        if not ascents:
            result[word] = result.get(word, gaussian(0)) + coefficient
            continue
        k = rng.choice(ascents) if rng is not None else ascents[0]
        a, b = word[k], word[k + 1]
        pending.append((word[:k] + (b, a) + word[k + 2 :], coefficient))
        pairing = form.entry(a, b)
        if pairing != 0:
            pending.append(
                (word[:k] + word[k + 2 :], coefficient * gaussian(0, pairing))
            )
    return CCRElement(parent, result)


def multiply(a: CCRElement, b: CCRElement) -> CCRElement:
    """Concatenate words and renormalize."""

    _same_parent(a, b)
    raw: dict[Word, Gaussian] = {}
    for left, x in a.terms.items():
        for right, y in b.terms.items():
            word = left + right
            raw[word] = raw.get(word, gaussian(0)) + x * y
    return normal_form(a.parent, raw)


def star(a: CCRElement) -> CCRElement:
    """Involution: reverse words, conjugate coefficients."""

    return normal_form(
        a.parent,
        [(word[::-1], conjugate(c)) for word, c in a.terms.items()],
    )


def commutator(a: CCRElement, b: CCRElement) -> CCRElement:
    return multiply(a, b) - multiply(b, a)


@dataclass(frozen=True)
class CCRMorphism:
    """``CCR(f)`` for a Poisson map ``f``, acting on generators."""

    generator_map: PoissonMap

    @classmethod
    def from_matrix(
        cls,
        source: PoissonSpace,
        target: PoissonSpace,
        matrix: RationalMatrix,
    ) -> CCRMorphism:
        try:
            return cls(PoissonMap(source, target, matrix))
        except FormMismatch as exc:
            raise NotPoisson(str(exc)) from exc

    @classmethod
    def identity(cls, space: PoissonSpace) -> CCRMorphism:
        return cls(PoissonMap.identity(space))

    @property
    def source(self) -> PoissonSpace:
        return self.generator_map.source

    @property
    def target(self) -> PoissonSpace:
        return self.generator_map.target

    def then(self, after: CCRMorphism) -> CCRMorphism:
        return CCRMorphism(self.generator_map.then(after.generator_map))

    def inverse(self) -> CCRMorphism:
        return CCRMorphism(self.generator_map.inverse())

    def image_of_generator(self, index: int) -> CCRElement:
        return CCRElement.linear(
            self.target, self.generator_map.matrix.column(index)
        )


def ccr_map(f: CCRMorphism, a: CCRElement) -> CCRElement:
    """Apply ``CCR(f)`` letterwise and renormalize."""

    if a.parent != f.source:
        raise ParentMismatch("Element does not live in the morphism source")
    images = [f.image_of_generator(k) for k in range(f.source.dim)]
    total = CCRElement.zero(f.target)
    for word, coefficient in a.terms.items():
        product = CCRElement.unit(f.target)
        for letter in word:
            product = multiply(product, images[letter])
        total = total + product.scale(coefficient)
    return total


def random_element(
    parent: PoissonSpace,
    rng: random.Random,
    max_degree: int,
    max_terms: int = 3,
) -> CCRElement:
    """Small random element, for probing algebra maps."""

    raw: dict[Word, Gaussian] = {}
    for _ in range(rng.randint(1, max_terms)):
        degree = rng.randint(0, max_degree)
        word = tuple(rng.randrange(parent.dim) for _ in range(degree))
        raw[word] = gaussian(rng.randint(-3, 3), rng.randint(-3, 3))
    return normal_form(parent, raw)


def _split_terms(text: str) -> list[tuple[int, str]]:
    terms: list[tuple[int, str]] = []
    depth, sign, current = 0, 1, ""
    for char in text:
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        if depth == 0 and char in "+-":
            if current.strip():
                terms.append((sign, current.strip()))
                current, sign = "", 1
            sign *= -1 if char == "-" else 1
            continue
        current += char
    if depth != 0:
        raise ElementParseError(f"Unbalanced parentheses in {text!r}")
    if current.strip():
        terms.append((sign, current.strip()))
    return terms


def _parse_coefficient(text: str) -> Gaussian:
    inner = text
    if text.startswith("(") and text.endswith(")"):
        inner = text[1:-1].strip()
    pure = _IMAGINARY_PATTERN.match(inner)
    if pure is not None:
        sign, imag_text = pure.groups()
        imag = parse_rational(imag_text or "1")
        return gaussian(0, -imag if sign == "-" else imag)
    if not text.startswith("("):
        return gaussian(parse_rational(text))
    match = _GAUSSIAN_PATTERN.match(text)
    if match is None:
        raise ElementParseError(f"Bad coefficient {text!r}")
    real_text, imag_sign, imag_text = match.groups()
    real = parse_rational(real_text) if real_text else 0
    imag = 0
    if imag_sign is not None:
        imag = parse_rational(imag_text or "1")
        imag = -imag if imag_sign == "-" else imag
    return gaussian(real, imag)


def _parse_word(text: str) -> Word:
    if text == "1":
        return ()
    letters = []
    for chunk in text.split("."):
        match = _LETTER_PATTERN.match(chunk.strip())
        if match is None or int(match.group(1)) < 1:
            raise ElementParseError(f"Bad generator {chunk!r}")
        letters.append(int(match.group(1)) - 1)
    return tuple(letters)


def parse_element(parent: PoissonSpace, text: str) -> CCRElement:
    """Parse literals such as ``"(1+2i)*e3.e1 + (0+1i)*1"``.

    Generators are ``e1 .. en`` (one-based, in basis-label order).
    """

    raw: list[tuple[Word, Gaussian]] = []
    try:
        for sign, term in _split_terms(text.strip()):
            if "*" in term:
                coefficient_text, word_text = term.split("*", 1)
                coefficient = _parse_coefficient(coefficient_text.strip())
                word = _parse_word(word_text.strip())
            elif term.startswith("e"):
                coefficient, word = gaussian(1), _parse_word(term)
            else:
                coefficient, word = _parse_coefficient(term), ()
            raw.append((word, coefficient * gaussian(sign)))
    except RationalParseError as exc:
        raise ElementParseError(str(exc)) from exc
    return normal_form(parent, raw)


__all__ = [
    "CCRElement",
    "CCRMorphism",
    "ElementParseError",
    "IndexOutOfRange",
    "NotPoisson",
    "ParentMismatch",
    "ccr_map",
    "commutator",
    "multiply",
    "normal_form",
    "parse_element",
    "random_element",
    "star",
]
