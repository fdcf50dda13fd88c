"""Exact digit systems, homogeneous IFSs, words and cylinder geometry.

All geometry uses :class:`fractions.Fraction`; nothing here touches floats.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

DEFAULT_BUDGET = 10**8

Vector = tuple  # tuple of Fraction (or int for digits)


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed the configured word budget."""


def check_budget(count: int, budget: int | None, what: str = "words") -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    if count > limit:
        raise BudgetExceeded(f"{count} {what} exceeds the enumeration budget {limit}")


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


@dataclass(frozen=True)
class CarpetSpec:
    """The x N invariant set whose base-N digit tuples all lie in ``digits``.

    ``digits`` is stored sorted; alphabet index ``i`` refers to ``digits[i]``.
    Pass ``require_proper=False`` only for test fixtures that use the full
    digit set (e.g. Lebesgue measure on the cube).
    """

    base: int
    dim: int
    digits: tuple
    require_proper: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.base, int) or self.base < 2:
            raise ValueError("base must be an integer >= 2")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise ValueError("dim must be an integer >= 1")
        digs = []
        for dgt in self.digits:
            if isinstance(dgt, int):
                dgt = (dgt,)
            dgt = tuple(int(c) for c in dgt)
            if len(dgt) != self.dim:
                raise ValueError(f"digit {dgt} does not have dimension {self.dim}")
            if any(c < 0 or c >= self.base for c in dgt):
                raise ValueError(f"digit {dgt} outside [0, {self.base - 1}]")
            digs.append(dgt)
        digs = tuple(sorted(set(digs)))
        if not digs:
            raise ValueError("digit set is empty")
        if self.require_proper and len(digs) >= self.base**self.dim:
            raise ValueError("digit set must be a proper subset of {0..N-1}^d")
        object.__setattr__(self, "digits", digs)

    @property
    def size(self) -> int:
        return len(self.digits)

    def digit_index(self, digit) -> int:
        if isinstance(digit, int):
            digit = (digit,)
        return self.digits.index(tuple(digit))


@dataclass(frozen=True)
class HomIfsSpec:
    """Homogeneous IFS ``{x -> r x + t_i}`` with exact rational data."""

    ratio: Fraction
    translations: tuple

    def __post_init__(self):
        r = as_fraction(self.ratio)
        if not 0 < r < 1:
            raise ValueError("ratio must lie in (0, 1)")
        trans = []
        for t in self.translations:
            if isinstance(t, (int, Fraction, str)):
                t = (t,)
            trans.append(tuple(as_fraction(c) for c in t))
        if not trans:
            raise ValueError("an IFS needs at least one map")
        dims = {len(t) for t in trans}
        if len(dims) != 1:
            raise ValueError("translations have mixed dimensions")
        if len(set(trans)) != len(trans):
            raise ValueError("translations must be pairwise distinct")
        object.__setattr__(self, "ratio", r)
        object.__setattr__(self, "translations", tuple(trans))

    @property
    def size(self) -> int:
        return len(self.translations)

    @property
    def dim(self) -> int:
        return len(self.translations[0])

    def hull_box(self) -> "Box":
        """Exact bounding box of the attractor (fixed points of extreme maps per axis)."""
        s = 1 - self.ratio
        lo = tuple(min(t[j] for t in self.translations) / s for j in range(self.dim))
        hi = tuple(max(t[j] for t in self.translations) / s for j in range(self.dim))
        return Box(lo, hi)


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(as_fraction(a) for a in self.lo)
        hi = tuple(as_fraction(b) for b in self.hi)
        if len(lo) != len(hi):
            raise ValueError("lo and hi differ in dimension")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError("box has a_j > b_j")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, other: "Box") -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    @property
    def sides(self) -> tuple:
        return tuple(b - a for a, b in zip(self.lo, self.hi))


@dataclass(frozen=True)
class HoleReport:
    depth: int
    cube_index: tuple
    alpha_lower: Fraction


def carpet_to_ifs(spec: CarpetSpec) -> HomIfsSpec:
    n = spec.base
    return HomIfsSpec(Fraction(1, n), tuple(tuple(Fraction(c, n) for c in dgt) for dgt in spec.digits))


def carpet_base(ifs: HomIfsSpec) -> int | None:
    """Return N if ``ifs`` has ratio 1/N and translations i/N with digits in [0, N-1], else None."""
    r = ifs.ratio
    if r.numerator != 1:
        return None
    n = r.denominator
    for t in ifs.translations:
        for c in t:
            s = c * n
            if s.denominator != 1 or not 0 <= s < n:
                return None
    return n


def ifs_to_carpet(ifs: HomIfsSpec) -> CarpetSpec:
    n = carpet_base(ifs)
    if n is None:
        raise ValueError("IFS is not of the form {x/N + i/N}")
    digits = [tuple(int(c * n) for c in t) for t in ifs.translations]
    return CarpetSpec(n, ifs.dim, tuple(digits), require_proper=len(digits) < n**ifs.dim)


def check_word(word: Sequence[int], size: int) -> tuple:
    w = tuple(int(s) for s in word)
    for s in w:
        if not 0 <= s < size:
            raise ValueError(f"symbol {s} outside alphabet of size {size}")
    return w


def word_translation(ifs: HomIfsSpec, word: Sequence[int]) -> tuple:
    """f_w(0) = sum_k r^(k-1) t_{w_k}, exact."""
    word = check_word(word, ifs.size)
    acc = [Fraction(0)] * ifs.dim
    scale = Fraction(1)
    for s in word:
        t = ifs.translations[s]
        for j in range(ifs.dim):
            acc[j] += scale * t[j]
        scale *= ifs.ratio
    return tuple(acc)


def iterate_ifs(ifs: HomIfsSpec, m: int, budget: int | None = None) -> HomIfsSpec:
    """The level-m IFS {f_w : |w| = m}, words in lexicographic order."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return ifs
    check_budget(ifs.size**m, budget)
    # prefix translations extend by r^k t_i; lexicographic order is kept by nesting
    level = [tuple(t) for t in ifs.translations]
    scale = ifs.ratio
    for _ in range(m - 1):
        level = [
            tuple(a + scale * b for a, b in zip(prefix, t))
            for prefix in level
            for t in ifs.translations
        ]
        scale *= ifs.ratio
    return HomIfsSpec(ifs.ratio**m, tuple(level))


def cylinder_box(system, word: Sequence) -> Box:
    """Box of f_w(base) where base is [0,1]^d for a CarpetSpec and the attractor hull box otherwise.

    For a CarpetSpec the word may be given as digit tuples or as alphabet indices.
    """
    if isinstance(system, CarpetSpec):
        idx = [s if isinstance(s, int) and system.dim > 1 else system.digit_index(s) for s in word]
        ifs = carpet_to_ifs(system)
        base = Box((0,) * system.dim, (1,) * system.dim)
    else:
        idx = list(word)
        ifs = system
        base = ifs.hull_box()
    t = word_translation(ifs, idx)
    scale = ifs.ratio ** len(idx)
    return Box(
        tuple(tj + scale * a for tj, a in zip(t, base.lo)),
        tuple(tj + scale * b for tj, b in zip(t, base.hi)),
    )


def _present_cubes(spec: CarpetSpec, depth: int) -> set:
    present = {(0,) * spec.dim}
    for _ in range(depth):
        present = {
            tuple(spec.base * c + g for c, g in zip(cube, dgt))
            for cube in present
            for dgt in spec.digits
        }
    return present


def find_hole(spec: CarpetSpec, max_depth: int = 8) -> HoleReport:
    """Smallest depth m with an N-adic cube missing every depth-m cylinder; lexicographically first cube."""
    for m in range(1, max_depth + 1):
        present = _present_cubes(spec, m)
        if len(present) == spec.base ** (spec.dim * m):
            continue
        for cube in itertools.product(range(spec.base**m), repeat=spec.dim):
            if cube not in present:
                return HoleReport(m, cube, Fraction(1, 2 * spec.base**m))
    raise ValueError("no empty cube found; the digit set is full")


def reduce_invariant_set(base: int, dim: int, allowed_blocks: Iterable) -> CarpetSpec:
    """Re-encode the allowed length-q blocks of an x N invariant set as base-N^q digits.

    A block is a sequence of q digits (ints when ``dim == 1``, d-tuples otherwise);
    block (b_1..b_q) becomes the digit sum_k N^(q-k) b_k taken coordinatewise.
    The language is not checked for closedness or shift invariance: the result
    is the superset carpet that contains the invariant set.
    """
    blocks = []
    for blk in allowed_blocks:
        if isinstance(blk, str):
            blk = [int(ch) for ch in blk]
        blk = [(b,) if isinstance(b, int) else tuple(b) for b in blk]
        blocks.append(tuple(blk))
    if not blocks:
        raise ValueError("allowed_blocks is empty")
    lengths = {len(b) for b in blocks}
    if len(lengths) != 1:
        raise ValueError("blocks must share one length q")
    q = lengths.pop()
    if q < 1:
        raise ValueError("block length must be >= 1")
    digits = set()
    for blk in blocks:
        code = [0] * dim
        for b in blk:
            if len(b) != dim or any(c < 0 or c >= base for c in b):
                raise ValueError(f"block symbol {b} is not a digit of dimension {dim} base {base}")
            code = [base * c + x for c, x in zip(code, b)]
        digits.add(tuple(code))
    if len(digits) >= base ** (dim * q):
        raise ValueError("allowed blocks cover every word; the set is not proper")
    return CarpetSpec(base**q, dim, tuple(sorted(digits)))
