"""Sum encodings that keep tuples of bounded multisets apart.

Each component ``i`` has a token map ``f_i`` into rational vectors. The
encoding of a tuple ``(X_1, ..., X_k)`` is

    g = sum f_1(X_1) + sum_{i >= 2} (1 + eps_i) * sum f_i(X_i)

Two builders are provided. :func:`separated_encoding` shifts components
until their images are disjoint, then gives every image point a power of a
base larger than any possible multiplicity (all ``eps_i`` are zero).
:func:`scaled_encoding` keeps caller maps and searches scalars ``eps_i``
that avoid every ratio that could produce a tie. Uniqueness is certified
by exhaustive enumeration with :func:`certify_uniqueness`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Any, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import EnumerationTooLarge, SizeBoundExceeded, UnknownToken
from .values import as_fraction, format_exact

Vector = tuple[Fraction, ...]

MAX_DENOMINATOR = 64
ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class FeatureMap:
    """Total map from a finite token domain to rational vectors of one length."""

    values: Mapping[Hashable, Vector]
    domain: tuple = field(init=False)

    def __post_init__(self):
        vals = {t: tuple(as_fraction(x) for x in v) for t, v in self.values.items()}
        if len({len(v) for v in vals.values()}) > 1:
            raise ValueError("feature vectors must share one length")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "domain", tuple(sorted(vals, key=_token_order)))

    @property
    def dim(self) -> int:
        return len(next(iter(self.values.values()))) if self.values else 1

    def __call__(self, token: Hashable) -> Vector:
        try:
            return self.values[token]
        except KeyError:
            raise UnknownToken(f"token {token!r} not in domain") from None

    def image(self) -> set[Vector]:
        return set(self.values.values())

    def shifted(self, eps: Vector) -> FeatureMap:
        return FeatureMap({t: _add(v, eps) for t, v in self.values.items()})


def _token_order(t: Hashable):
    return (type(t).__name__, str(t)) if not isinstance(t, (int, Fraction)) else ("", t)


def _add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def _sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def _scale(c: Fraction, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def candidate_scalars(max_den: int = MAX_DENOMINATOR) -> Iterator[Fraction]:
    """Positive rationals in ``(0, 1]`` by increasing denominator: 1, 1/2, 1/3, 2/3, ..."""
    for q in range(1, max_den + 1):
        for p in range(1, q + 1):
            if math.gcd(p, q) == 1:
                yield Fraction(p, q)


def difference_set(f1: FeatureMap, f2: FeatureMap) -> set[Vector]:
    """All ``f1(x1) - f2(x2)``; a shift avoiding this set separates the images."""
    return {_sub(a, b) for a in f1.image() for b in f2.image()}


def is_separating(f1: FeatureMap, f2: FeatureMap, eps: Sequence[Fraction]) -> bool:
    """True iff the images of ``f1`` and ``f2 + eps`` are disjoint."""
    shifted = {_add(b, tuple(eps)) for b in f2.image()}
    return not (f1.image() & shifted)


def find_separating_epsilon(f1: FeatureMap, f2: FeatureMap) -> Vector:
    """Constant shift vector ``e * (1, ..., 1)`` outside the difference set.

    ``e`` is the first admissible entry of :func:`candidate_scalars`; if all
    of those are blocked, an integer larger than every coordinate of the
    difference set is used. Candidates are tested against the image of
    ``f1`` directly, which is equivalent to membership in the difference set
    and avoids building it.
    """
    dim = f1.dim
    target = f1.image()
    source = f2.image()
    for e in candidate_scalars():
        vec = (e,) * dim
        if not any(_add(b, vec) in target for b in source):
            return vec
    bound = max((abs(x) for v in target for x in v), default=Fraction(0))
    bound += max((abs(x) for v in source for x in v), default=Fraction(0))
    return (Fraction(math.floor(bound) + 1),) * dim


def bounded_multisets(domain: Sequence[Hashable], bound: int) -> Iterator[tuple]:
    """Every multiset of size ``0..bound`` over ``domain``, as sorted tuples."""
    for k in range(bound + 1):
        yield from combinations_with_replacement(domain, k)


def count_bounded_multisets(domain_size: int, bound: int) -> int:
    return sum(math.comb(domain_size + k - 1, k) for k in range(bound + 1))


@dataclass(frozen=True)
class IntegratedEncoding:
    component_maps: tuple[FeatureMap, ...]
    epsilons: tuple[Fraction, ...]
    bound: int

    def __post_init__(self):
        if len(self.epsilons) != max(len(self.component_maps) - 1, 0):
            raise ValueError("need one epsilon per component after the first")

    @property
    def dim(self) -> int:
        return self.component_maps[0].dim

    def factors(self) -> tuple[Fraction, ...]:
        return (Fraction(1),) + tuple(1 + e for e in self.epsilons)

    def to_json_obj(self) -> dict[str, Any]:
        comps = []
        for fm in self.component_maps:
            comps.append(
                [{"token": _token_json(t), "value": [format_exact(x) for x in fm.values[t]]} for t in fm.domain]
            )
        return {
            "bound": self.bound,
            "epsilons": [format_exact(e) for e in self.epsilons],
            "components": comps,
        }

    @classmethod
    def from_json_obj(cls, obj: Mapping[str, Any]) -> IntegratedEncoding:
        maps = []
        for comp in obj["components"]:
            maps.append(FeatureMap({_token_unjson(r["token"]): tuple(as_fraction(x) for x in r["value"]) for r in comp}))
        return cls(tuple(maps), tuple(as_fraction(e) for e in obj["epsilons"]), int(obj["bound"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)


def _token_json(t: Hashable):
    if isinstance(t, tuple):
        return [_token_json(x) for x in t]
    return t


def _token_unjson(t):
    if isinstance(t, list):
        return tuple(_token_unjson(x) for x in t)
    return t


def _component_sum(fm: FeatureMap, tokens: Iterable[Hashable]) -> Vector:
    total = (Fraction(0),) * fm.dim
    for t in tokens:
        total = _add(total, fm(t))
    return total


def integrate(encoding: IntegratedEncoding, multisets: Sequence[Iterable[Hashable]]) -> Vector:
    """Exact value of the encoding on one tuple of multisets."""
    if len(multisets) != len(encoding.component_maps):
        raise ValueError(f"expected {len(encoding.component_maps)} multisets, got {len(multisets)}")
    total = (Fraction(0),) * encoding.dim
    for fm, factor, xs in zip(encoding.component_maps, encoding.factors(), multisets):
        xs = list(xs)
        if len(xs) > encoding.bound:
            raise SizeBoundExceeded(f"multiset of size {len(xs)} exceeds bound {encoding.bound}")
        total = _add(total, _scale(factor, _component_sum(fm, xs)))
    return total


@dataclass(frozen=True)
class UniquenessCertificate:
    unique: bool
    tuples_checked: int
    collision: tuple[tuple, tuple] | None = None


def enumeration_size(encoding: IntegratedEncoding, bound: int | None = None) -> int:
    b = encoding.bound if bound is None else bound
    return math.prod(count_bounded_multisets(len(fm.domain), b) for fm in encoding.component_maps)


def certify_uniqueness(
    encoding: IntegratedEncoding,
    bound: int | None = None,
    limit: int = ENUMERATION_LIMIT,
) -> UniquenessCertificate:
    """Enumerate every tuple of multisets up to ``bound`` and look for ties."""
    b = encoding.bound if bound is None else bound
    if b > encoding.bound:
        raise SizeBoundExceeded(f"bound {b} exceeds the encoding bound {encoding.bound}")
    total = enumeration_size(encoding, b)
    if total > limit:
        raise EnumerationTooLarge(f"{total} tuples exceed the enumeration limit {limit}")
    # per-component partial sums, scaled, so the product loop only adds vectors
    partials = []
    for fm, factor in zip(encoding.component_maps, encoding.factors()):
        partials.append([(ms, _scale(factor, _component_sum(fm, ms))) for ms in bounded_multisets(fm.domain, b)])
    seen: dict[Vector, tuple] = {}
    zero = (Fraction(0),) * encoding.dim
    checked = 0
    for combo in product(*partials):
        value = zero
        for _, v in combo:
            value = _add(value, v)
        key = tuple(ms for ms, _ in combo)
        checked += 1
        if value in seen:
            return UniquenessCertificate(False, checked, (seen[value], key))
        seen[value] = key
    return UniquenessCertificate(True, checked)


def index_map(domain: Iterable[Hashable]) -> FeatureMap:
    """Token ``k``-th in sorted order goes to ``(k,)``; overlapping across domains on purpose."""
    toks = sorted(set(domain), key=_token_order)
    return FeatureMap({t: (Fraction(k),) for k, t in enumerate(toks)})


def power_map(domain: Iterable[Hashable], base: int, offset: int = 0) -> FeatureMap:
    """Token ``k``-th in sorted order goes to ``(base ** (k + offset),)``.

    With ``base`` above the largest multiplicity, sums over bounded multisets
    are base-``base`` numerals and recover the multiset.
    """
    toks = sorted(set(domain), key=_token_order)
    return FeatureMap({t: (Fraction(base) ** (k + offset),) for k, t in enumerate(toks)})


def separated_encoding(base_maps: Sequence[FeatureMap], bound: int) -> IntegratedEncoding:
    """Shift components apart, then assign powers to the union of image points.

    Component ``i`` is shifted by :func:`find_separating_epsilon` against the
    union of the already-shifted images of components ``< i``. The disjoint
    union of images is then sorted and point ``k`` mapped to
    ``(base ** k,)`` with ``base = len(base_maps) * bound + 1``.
    """
    shifted: list[FeatureMap] = []
    union: dict[Hashable, Vector] = {}
    for k, fm in enumerate(base_maps):
        if shifted:
            prev = FeatureMap({("u", n): v for n, v in enumerate(sorted(set(union.values())))})
            fm = fm.shifted(find_separating_epsilon(prev, fm))
        shifted.append(fm)
        for t, v in fm.values.items():
            union[(k, t)] = v
    points = sorted(set(union.values()))
    base = separated_base(len(base_maps), bound)
    code = {}
    power = 1
    for p in points:
        code[p] = (Fraction(power),)
        power *= base
    maps = tuple(FeatureMap({t: code[v] for t, v in fm.values.items()}) for fm in shifted)
    return IntegratedEncoding(maps, (Fraction(0),) * (len(maps) - 1), bound)


def separated_base(components: int, bound: int) -> int:
    return components * bound + 1


def sparse_numeral(value: Fraction, base: int) -> list[tuple[int, int]]:
    """Nonzero base-``base`` digits of a non-negative integer as ``(exponent, digit)``.

    Fingerprints of :func:`separated_encoding` are such numerals and can run
    to thousands of decimal digits; this form is exact and much smaller.
    """
    if value.denominator != 1 or value < 0:
        raise ValueError(f"{value} is not a non-negative integer")
    n = value.numerator
    # split on base ** (2 ** i); zero halves are skipped, so sparse numerals are cheap
    squares = [base]
    while squares[-1] <= n:
        squares.append(squares[-1] * squares[-1])
    out: list[tuple[int, int]] = []

    def walk(x: int, level: int, offset: int) -> None:
        if not x:
            return
        if level < 0:
            out.append((offset, x))
            return
        hi, lo = divmod(x, squares[level])
        walk(lo, level - 1, offset)
        walk(hi, level - 1, offset + (1 << level))

    walk(n, len(squares) - 1, 0)
    return out


def _sum_set(fm: FeatureMap, factor: Fraction, bound: int) -> set[Vector]:
    return {_scale(factor, _component_sum(fm, ms)) for ms in bounded_multisets(fm.domain, bound)}


def _ratio_blocked(lam: Fraction, lhs: set[Vector], rhs: set[Vector]) -> bool:
    """Whether ``a = lam * b`` for some nonzero ``a`` in lhs, ``b`` in rhs."""
    for a in lhs:
        if any(a) and tuple(x / lam for x in a) in rhs:
            return True
    return False


def scaled_encoding(maps: Sequence[FeatureMap], bound: int) -> IntegratedEncoding:
    """Keep ``maps`` and choose ``eps_i`` so the scaled sum has no ties.

    For component ``i`` let ``A`` be the differences of partial encodings of
    components ``< i`` and ``B`` the differences of this component's sums.
    ``1 + eps_i`` must avoid every ratio ``a / b``; the first admissible
    :func:`candidate_scalars` entry is taken. Each map should already be
    injective on bounded multisets (``power_map`` is).
    """
    eps: list[Fraction] = []
    partial = _sum_set(maps[0], Fraction(1), bound)
    for fm in maps[1:]:
        sums = _sum_set(fm, Fraction(1), bound)
        lhs = {_sub(a, b) for a in partial for b in partial if a != b}
        rhs = {_sub(a, b) for a in sums for b in sums if a != b}
        chosen = None
        for e in candidate_scalars():
            if not _ratio_blocked(1 + e, lhs, rhs):
                chosen = e
                break
        if chosen is None:
            biggest = max((abs(x) for a in lhs for x in a), default=Fraction(1))
            smallest = min((abs(x) for b in rhs for x in b if x), default=Fraction(1))
            chosen = biggest / smallest + 1
        eps.append(chosen)
        partial = {_add(p, _scale(1 + chosen, s)) for p in partial for s in sums}
    return IntegratedEncoding(tuple(maps), tuple(eps), bound)
