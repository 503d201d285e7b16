"""Free-associative-algebra kernel with exact Gaussian-rational coefficients.

The algebra consists of finite sums of *words* over declared noncommuting
generators.  Each coefficient is a Laurent polynomial in the central
parameter ``lam`` and an ordinary polynomial in the central parameters
``hbar`` and ``alpha``, over the Gaussian rationals (exact complex numbers
with rational real and imaginary parts).

Nothing in this module touches floating point.  Identities between
generators (commutation relations, inverse cancellation) are never built
in; they are imposed explicitly by rewriting with a :class:`RuleSet`
through :func:`normalize`.

Conventions baked into the kernel:

* ``z`` is a generator (it need not commute with the field variables), but
  its formal derivative is the empty word: ``d_dz(z) == 1``.
* ``lam``, ``hbar``, ``alpha`` are central and live in the coefficients;
  ``beta`` and ``delta`` are parse-time macros for ``i*hbar/4`` and
  ``alpha - 1/2``.
* Inverse atoms exist only for generators declared invertible, and only at
  derivative order zero; the derivative of an inverse is produced by the
  Leibniz rule as ``d_dz(p^-1) == -p^-1*p'*p^-1``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple

__all__ = [
    "LaxlabError",
    "ParseError",
    "ContextError",
    "RuleError",
    "SubstitutionError",
    "PassBudgetExhausted",
    "QQi",
    "Scalar",
    "Atom",
    "Word",
    "GenContext",
    "DEFAULT_CONTEXT",
    "NCExpr",
    "Rule",
    "RuleSet",
    "normalize",
    "parse",
    "commutator",
    "anticommutator",
    "d_dz",
    "d_dlambda",
    "substitute",
    "classical_limit",
    "scalarize",
    "builtin_ruleset",
    "BUILTIN_RULESET_NAMES",
    "DEFAULT_PASS_BUDGET",
    "PASS_BUDGET_ENV",
    "DERIVATIVE_TOWER_ORDER",
]

DEFAULT_PASS_BUDGET = 10_000
PASS_BUDGET_ENV = "LAXLAB_PASS_BUDGET"
#: Highest derivative order for which the generated rewrite towers carry
#: rules.  Derivations in this package never exceed order 4; 8 leaves slack.
DERIVATIVE_TOWER_ORDER = 8


class LaxlabError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LaxlabError):
    """Raised for malformed expression text; carries the offending position."""

    def __init__(self, message: str, text: str = "", pos: int | None = None):
        if pos is not None:
            window = text[pos : pos + 16]
            message = f"{message} (at position {pos}, near {window!r})"
        super().__init__(message)
        self.pos = pos


class ContextError(LaxlabError):
    """Undeclared generator, illegal atom, or mixed generator contexts."""


class RuleError(LaxlabError):
    """Rejected rewrite rule (for example, one that reintroduces itself)."""


class SubstitutionError(LaxlabError):
    """Substitution that cannot be carried out (bad inverse replacement)."""


class PassBudgetExhausted(LaxlabError):
    """Rewriting did not reach a normal form within the application budget."""

    def __init__(self, ruleset: str, budget: int):
        super().__init__(
            f"rewrite budget of {budget} rule applications exhausted by rule "
            f"set {ruleset!r} without reaching a normal form; the rule set "
            f"may be non-terminating (or raise the budget via the "
            f"{PASS_BUDGET_ENV} environment variable)"
        )
        self.ruleset = ruleset
        self.budget = budget


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


def _frac(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("exact arithmetic only: floats are not accepted here")
    return Fraction(value)


class QQi:
    """A Gaussian rational: ``re + im*i`` with exact ``Fraction`` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    # -- helpers ------------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "QQi | None":
        if isinstance(other, QQi):
            return other
        if isinstance(other, (int, Fraction)):
            return QQi(other)
        return None

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QQi(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def inverse(self) -> "QQi":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return QQi(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"QQi({self.re!r}, {self.im!r})"


_QQI_ONE = QQi(1)
_QQI_I = QQi(0, 1)


# ---------------------------------------------------------------------------
# Coefficients: Laurent in lam, polynomial in hbar and alpha
# ---------------------------------------------------------------------------

#: Exponent key: (lam exponent, hbar exponent, alpha exponent).
ExpKey = tuple[int, int, int]


class Scalar:
    """A coefficient: finite map from exponent keys to Gaussian rationals.

    The ``lam`` exponent may be negative (Laurent); the ``hbar`` and
    ``alpha`` exponents must be non-negative.  Zero values are never stored.
    Instances are immutable by convention: no method mutates ``terms``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[ExpKey, QQi] | None = None):
        clean: dict[ExpKey, QQi] = {}
        if terms:
            for key, val in terms.items():
                l, h, a = key
                if h < 0 or a < 0:
                    raise ValueError(
                        "hbar and alpha exponents must be non-negative"
                    )
                if not isinstance(val, QQi):
                    val = QQi(val)
                key = (int(l), int(h), int(a))
                acc = clean.get(key)
                val = val if acc is None else acc + val
                if val:
                    clean[key] = val
                elif acc is not None:
                    del clean[key]
        self.terms = clean

    # -- constructors ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({(0, 0, 0): _QQI_ONE})

    @classmethod
    def from_value(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, QQi):
            return cls({(0, 0, 0): value})
        return cls({(0, 0, 0): QQi(value)})

    @classmethod
    def mono(cls, coeff, lam: int = 0, hbar: int = 0, alpha: int = 0) -> "Scalar":
        c = coeff if isinstance(coeff, QQi) else QQi(coeff)
        return cls({(lam, hbar, alpha): c})

    # -- ring operations ------------------------------------------------------
    def __add__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        out = dict(self.terms)
        for key, val in other.terms.items():
            acc = out.get(key)
            val = val if acc is None else acc + val
            if val:
                out[key] = val
            elif acc is not None:
                del out[key]
        result = Scalar()
        result.terms = out
        return result

    def __sub__(self, other: "Scalar") -> "Scalar":
        return self + (-other)

    def __neg__(self) -> "Scalar":
        result = Scalar()
        result.terms = {k: -v for k, v in self.terms.items()}
        return result

    def __mul__(self, other: "Scalar") -> "Scalar":
        if not isinstance(other, Scalar):
            return NotImplemented
        out: dict[ExpKey, QQi] = {}
        for (l1, h1, a1), c1 in self.terms.items():
            for (l2, h2, a2), c2 in other.terms.items():
                key = (l1 + l2, h1 + h2, a1 + a2)
                val = c1 * c2
                acc = out.get(key)
                val = val if acc is None else acc + val
                if val:
                    out[key] = val
                elif acc is not None:
                    del out[key]
        result = Scalar()
        result.terms = out
        return result

    def mul_qqi(self, c: QQi) -> "Scalar":
        if not c:
            return Scalar()
        result = Scalar()
        result.terms = {k: v * c for k, v in self.terms.items()}
        return result

    # -- queries ----------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def qqi_if_constant(self) -> QQi | None:
        """The plain Gaussian-rational value, if free of lam/hbar/alpha."""
        if not self.terms:
            return QQi(0)
        if len(self.terms) == 1 and (0, 0, 0) in self.terms:
            return self.terms[(0, 0, 0)]
        return None

    def single_mono(self) -> tuple[ExpKey, QQi] | None:
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        return None

    # -- calculus / limits --------------------------------------------------------
    def d_dlambda(self) -> "Scalar":
        out: dict[ExpKey, QQi] = {}
        for (l, h, a), c in self.terms.items():
            if l != 0:
                out[(l - 1, h, a)] = c * l
        result = Scalar()
        result.terms = out
        return result

    def classical_limit(self) -> "Scalar":
        result = Scalar()
        result.terms = {k: v for k, v in self.terms.items() if k[1] == 0}
        return result

    def bind_alpha(self, value: QQi) -> "Scalar":
        out: dict[ExpKey, QQi] = {}
        for (l, h, a), c in self.terms.items():
            v = c
            for _ in range(a):
                v = v * value
            key = (l, h, 0)
            acc = out.get(key)
            v = v if acc is None else acc + v
            if v:
                out[key] = v
            elif acc is not None:
                del out[key]
        result = Scalar()
        result.terms = out
        return result

    def negate_alpha(self) -> "Scalar":
        result = Scalar()
        result.terms = {
            k: (v if k[2] % 2 == 0 else -v) for k, v in self.terms.items()
        }
        return result

    def __repr__(self):
        return f"Scalar({self.terms!r})"


# ---------------------------------------------------------------------------
# Atoms, words, generator contexts
# ---------------------------------------------------------------------------


class Atom(NamedTuple):
    """One letter of a word: a generator, its derivative order, inverse flag."""

    gen: str
    order: int = 0
    inv: bool = False


#: Words are plain tuples of :class:`Atom`; the empty tuple is the identity.
Word = tuple

_RESERVED_NAMES = frozenset({"i", "lam", "hbar", "alpha", "beta", "delta"})


@dataclass(frozen=True)
class GenContext:
    """Declared generators, in precedence order, plus the invertible subset."""

    names: tuple[str, ...] = ("z", "u", "v", "p", "q", "r", "nu")
    invertible: frozenset[str] = frozenset({"p", "q", "r"})

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ContextError("duplicate generator names")
        bad = _RESERVED_NAMES.intersection(self.names)
        if bad:
            raise ContextError(f"reserved names cannot be generators: {sorted(bad)}")
        for name in self.names:
            if not name.isalpha():
                raise ContextError(f"generator names must be alphabetic: {name!r}")
        extra = set(self.invertible) - set(self.names)
        if extra:
            raise ContextError(f"invertible set has undeclared names: {sorted(extra)}")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ContextError(f"undeclared generator {name!r}") from None

    def check_atom(self, atom: Atom) -> None:
        self.index(atom.gen)
        if atom.order < 0:
            raise ContextError("negative derivative order")
        if atom.inv:
            if atom.gen not in self.invertible:
                raise ContextError(
                    f"generator {atom.gen!r} is not declared invertible"
                )
            if atom.order != 0:
                raise ContextError(
                    "inverse atoms carry derivative order 0; derivatives of "
                    "inverses arise from the Leibniz rule"
                )


DEFAULT_CONTEXT = GenContext()


def _atom_key(ctx: GenContext, atom: Atom) -> tuple[int, int, int]:
    return (ctx.index(atom.gen), atom.order, 1 if atom.inv else 0)


def _word_key(ctx: GenContext, word: tuple) -> tuple:
    return (len(word), tuple(_atom_key(ctx, a) for a in word))


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


class NCExpr:
    """A finite sum of coefficient-weighted words over a generator context.

    Instances are immutable by convention; every operation returns a new
    expression.  Equality is literal equality of the term maps (use
    :func:`normalize` first when equality modulo relations is intended).
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: GenContext, terms: Mapping[tuple, Scalar] | None = None):
        clean: dict[tuple, Scalar] = {}
        if terms:
            for word, scal in terms.items():
                if not isinstance(scal, Scalar):
                    scal = Scalar.from_value(scal)
                if not scal:
                    continue
                acc = clean.get(word)
                scal = scal if acc is None else acc + scal
                if scal:
                    clean[word] = scal
                elif acc is not None:
                    del clean[word]
        self.ctx = ctx
        self.terms = clean

    # -- constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls(ctx)

    @classmethod
    def one(cls, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls(ctx, {(): Scalar.one()})

    @classmethod
    def scalar(cls, value, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls(ctx, {(): Scalar.from_value(value)})

    @classmethod
    def gen(
        cls,
        name: str,
        order: int = 0,
        inv: bool = False,
        ctx: GenContext = DEFAULT_CONTEXT,
    ) -> "NCExpr":
        atom = Atom(name, order, inv)
        ctx.check_atom(atom)
        if name == "z" and order >= 1 and not inv:
            # z' is the multiplicative identity, higher derivatives vanish
            return cls.one(ctx) if order == 1 else cls.zero(ctx)
        return cls(ctx, {(atom,): Scalar.one()})

    @classmethod
    def lam(cls, power: int = 1, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls(ctx, {(): Scalar.mono(1, lam=power)})

    @classmethod
    def hbar(cls, power: int = 1, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls(ctx, {(): Scalar.mono(1, hbar=power)})

    @classmethod
    def alpha(cls, power: int = 1, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls(ctx, {(): Scalar.mono(1, alpha=power)})

    @classmethod
    def imag_unit(cls, ctx: GenContext = DEFAULT_CONTEXT) -> "NCExpr":
        return cls.scalar(_QQI_I, ctx)

    # -- plumbing ---------------------------------------------------------------
    def _require_same_ctx(self, other: "NCExpr") -> None:
        if self.ctx != other.ctx:
            raise ContextError("expressions come from different generator contexts")

    @staticmethod
    def _coerce(value, ctx: GenContext) -> "NCExpr | None":
        if isinstance(value, NCExpr):
            return value
        if isinstance(value, (int, Fraction, QQi, Scalar)):
            return NCExpr.scalar(value, ctx)
        return None

    # -- ring operations ----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other, self.ctx)
        if o is None:
            return NotImplemented
        self._require_same_ctx(o)
        out = dict(self.terms)
        for word, scal in o.terms.items():
            acc = out.get(word)
            scal = scal if acc is None else acc + scal
            if scal:
                out[word] = scal
            elif acc is not None:
                del out[word]
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other, self.ctx)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other, self.ctx)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __neg__(self):
        result = NCExpr(self.ctx)
        result.terms = {w: -s for w, s in self.terms.items()}
        return result

    def __mul__(self, other):
        o = self._coerce(other, self.ctx)
        if o is None:
            return NotImplemented
        self._require_same_ctx(o)
        out: dict[tuple, Scalar] = {}
        for w1, s1 in self.terms.items():
            for w2, s2 in o.terms.items():
                word = w1 + w2
                scal = s1 * s2
                acc = out.get(word)
                scal = scal if acc is None else acc + scal
                if scal:
                    out[word] = scal
                elif acc is not None:
                    del out[word]
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    def __rmul__(self, other):
        o = self._coerce(other, self.ctx)
        if o is None:
            return NotImplemented
        return o * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QQi(other)
        if isinstance(other, QQi):
            return self.scalar_mul(other.inverse())
        return NotImplemented

    def scalar_mul(self, value) -> "NCExpr":
        scal = Scalar.from_value(value)
        result = NCExpr(self.ctx)
        out = {}
        for w, s in self.terms.items():
            prod = s * scal
            if prod:
                out[w] = prod
        result.terms = out
        return result

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            raise ContextError(
                "negative powers exist only for single invertible generators"
            )
        acc = NCExpr.one(self.ctx)
        for _ in range(n):
            acc = acc * self
        return acc

    # -- queries --------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QQi, Scalar)):
            other = NCExpr.scalar(other, self.ctx)
        if not isinstance(other, NCExpr):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def coefficient(self, word: tuple) -> Scalar:
        return self.terms.get(word, Scalar.zero())

    def sorted_terms(self) -> list[tuple[tuple, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: _word_key(self.ctx, kv[0]))

    def min_word(self) -> tuple | None:
        if not self.terms:
            return None
        return min(self.terms, key=lambda w: _word_key(self.ctx, w))

    # -- calculus ---------------------------------------------------------------
    def d_dz(self) -> "NCExpr":
        out: dict[tuple, Scalar] = {}

        def bump(word: tuple, scal: Scalar) -> None:
            if not scal:
                return
            acc = out.get(word)
            scal = scal if acc is None else acc + scal
            if scal:
                out[word] = scal
            elif acc is not None:
                del out[word]

        for word, scal in self.terms.items():
            for i, atom in enumerate(word):
                head, tail = word[:i], word[i + 1 :]
                if atom.inv:
                    mid = (atom, Atom(atom.gen, 1, False), atom)
                    bump(head + mid + tail, -scal)
                elif atom.gen == "z":
                    bump(head + tail, scal)
                else:
                    bump(head + (Atom(atom.gen, atom.order + 1, False),) + tail, scal)
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    def d_dlambda(self) -> "NCExpr":
        out = {}
        for word, scal in self.terms.items():
            d = scal.d_dlambda()
            if d:
                out[word] = d
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    # -- substitution --------------------------------------------------------------
    def substitute(self, mapping: Mapping[str, "NCExpr"]) -> "NCExpr":
        """Substitute expressions for generators.

        A binding for a generator also binds every derivative: the k-th
        derivative atom is replaced by the k-th ``d_dz`` of the replacement.
        A binding for an *invertible* generator whose inverse atoms occur
        must itself be invertible in the obvious restricted sense
        (a central multiple of a single order-0 atom of an invertible
        generator, or of the empty word); anything else raises
        :class:`SubstitutionError`.
        """
        for name, repl in mapping.items():
            self.ctx.index(name)
            if not isinstance(repl, NCExpr):
                raise SubstitutionError("replacements must be expressions")
            if repl.ctx != self.ctx:
                raise ContextError("replacement from a different generator context")

        towers: dict[tuple[str, int], NCExpr] = {}
        inverses: dict[str, NCExpr] = {}

        def tower(name: str, order: int) -> NCExpr:
            key = (name, order)
            got = towers.get(key)
            if got is None:
                if order == 0:
                    got = mapping[name]
                else:
                    got = tower(name, order - 1).d_dz()
                towers[key] = got
            return got

        def inverse_replacement(name: str) -> NCExpr:
            got = inverses.get(name)
            if got is not None:
                return got
            repl = mapping[name]
            items = list(repl.terms.items())
            if len(items) != 1:
                raise SubstitutionError(
                    f"cannot invert the replacement of {name!r}: not a single term"
                )
            word, scal = items[0]
            mono = scal.single_mono()
            if mono is None:
                raise SubstitutionError(
                    f"cannot invert the replacement of {name!r}: coefficient is "
                    "not a single monomial"
                )
            (l, h, a), c = mono
            if h or a:
                raise SubstitutionError(
                    f"cannot invert the replacement of {name!r}: hbar/alpha "
                    "factors have no inverse here"
                )
            inv_scal = Scalar.mono(c.inverse(), lam=-l)
            if word == ():
                inv_word: tuple = ()
            elif len(word) == 1 and word[0].order == 0 and (
                word[0].gen in self.ctx.invertible
            ):
                inv_word = (Atom(word[0].gen, 0, not word[0].inv),)
            else:
                raise SubstitutionError(
                    f"cannot invert the replacement of {name!r}: not a single "
                    "invertible atom"
                )
            got = NCExpr(self.ctx, {inv_word: inv_scal})
            inverses[name] = got
            return got

        result = NCExpr.zero(self.ctx)
        for word, scal in self.terms.items():
            acc = NCExpr.scalar(scal, self.ctx)
            for atom in word:
                if atom.gen in mapping:
                    if atom.inv:
                        factor = inverse_replacement(atom.gen)
                    else:
                        factor = tower(atom.gen, atom.order)
                else:
                    factor = NCExpr(self.ctx, {(atom,): Scalar.one()})
                acc = acc * factor
            result = result + acc
        return result

    # -- limits and quotients ---------------------------------------------------------
    def classical_limit(self) -> "NCExpr":
        out = {}
        for word, scal in self.terms.items():
            s = scal.classical_limit()
            if s:
                out[word] = s
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    def scalarize(self) -> "NCExpr":
        """Project onto the commutative quotient.

        Atoms of every word are sorted into the canonical order and adjacent
        inverse pairs of the same generator cancel (exponent arithmetic).
        Inverse atoms remain atomic in the quotient, so no fraction-field
        machinery is needed and the operation is total.
        """
        out: dict[tuple, Scalar] = {}
        for word, scal in self.terms.items():
            counts: dict[tuple[int, str, int], int] = {}
            for atom in word:
                key = (self.ctx.index(atom.gen), atom.gen, atom.order)
                counts[key] = counts.get(key, 0) + (-1 if atom.inv else 1)
            new_word: list[Atom] = []
            for (idx, gen, order), count in sorted(counts.items()):
                if count == 0:
                    continue
                inv = count < 0
                new_word.extend(Atom(gen, order, inv) for _ in range(abs(count)))
            key_word = tuple(new_word)
            acc = out.get(key_word)
            scal = scal if acc is None else acc + scal
            if scal:
                out[key_word] = scal
            elif acc is not None:
                del out[key_word]
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    # -- structural transforms -----------------------------------------------------
    def split_lambda(self) -> dict[int, "NCExpr"]:
        """Coefficients of each lam power, with lam stripped from the keys."""
        buckets: dict[int, dict[tuple, Scalar]] = {}
        for word, scal in self.terms.items():
            for (l, h, a), c in scal.terms.items():
                b = buckets.setdefault(l, {})
                add = Scalar.mono(c, hbar=h, alpha=a)
                acc = b.get(word)
                add = add if acc is None else acc + add
                if add:
                    b[word] = add
                elif acc is not None:
                    del b[word]
        out: dict[int, NCExpr] = {}
        for l, terms in buckets.items():
            e = NCExpr(self.ctx)
            e.terms = {w: s for w, s in terms.items() if s}
            if e.terms:
                out[l] = e
        return out

    def bind_alpha(self, value) -> "NCExpr":
        v = value if isinstance(value, QQi) else QQi(value)
        out = {}
        for word, scal in self.terms.items():
            s = scal.bind_alpha(v)
            if s:
                out[word] = s
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    def negate_alpha(self) -> "NCExpr":
        result = NCExpr(self.ctx)
        result.terms = {w: s.negate_alpha() for w, s in self.terms.items()}
        return result

    def reflect_z(self) -> "NCExpr":
        """The image under z -> -z with fields transported by the chain rule.

        Each order-0 ``z`` atom contributes a factor -1 and each derivative
        order k of a field atom contributes (-1)^k, so an equation in
        ``u(z)`` maps to the equation satisfied by ``u(-z)``.
        """
        out: dict[tuple, Scalar] = {}
        for word, scal in self.terms.items():
            sign = 0
            for atom in word:
                if atom.gen == "z" and not atom.inv:
                    sign += 1
                sign += atom.order
            s = scal if sign % 2 == 0 else -scal
            acc = out.get(word)
            s = s if acc is None else acc + s
            if s:
                out[word] = s
        result = NCExpr(self.ctx)
        result.terms = out
        return result

    def canonical_with_scale(self) -> tuple["NCExpr", QQi]:
        """Divide by the Gaussian-rational of the minimal word's minimal
        monomial, returning (canonical form, the divisor).

        Scalar multiples by plain Gaussian rationals share one canonical
        form; multiples by hbar/alpha/lam monomials do not (they are
        genuinely different equations).
        """
        w0 = self.min_word()
        if w0 is None:
            return self, _QQI_ONE
        scal = self.terms[w0]
        k0 = min(scal.terms)
        c = scal.terms[k0]
        return self.scalar_mul(c.inverse()), c

    def canonical(self) -> "NCExpr":
        return self.canonical_with_scale()[0]

    # -- printing -------------------------------------------------------------------
    def to_string(self) -> str:
        if not self.terms:
            return "0"
        items: list[tuple[tuple, ExpKey, QQi]] = []
        for word, scal in self.sorted_terms():
            for key in sorted(scal.terms):
                items.append((word, key, scal.terms[key]))
        chunks: list[str] = []
        for n, (word, key, c) in enumerate(items):
            sign, body = _format_term(word, key, c)
            if n == 0:
                chunks.append(("-" if sign < 0 else "") + body)
            else:
                chunks.append((" - " if sign < 0 else " + ") + body)
        return "".join(chunks)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"NCExpr({self.to_string()})"


def _format_fraction(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _format_term(word: tuple, key: ExpKey, c: QQi) -> tuple[int, str]:
    """Return (sign, body) for one printed monomial; body has no leading sign."""
    l, h, a = key
    centrals: list[str] = []
    if l:
        centrals.append("lam" if l == 1 else f"lam^{l}")
    if h:
        centrals.append("hbar" if h == 1 else f"hbar^{h}")
    if a:
        centrals.append("alpha" if a == 1 else f"alpha^{a}")
    atoms = [
        (atom.gen + "^-1") if atom.inv else (atom.gen + "'" * atom.order)
        for atom in word
    ]
    tail = centrals + atoms

    if c.re and c.im:
        # mixed complex number: keep it intact inside parentheses
        re_s = _format_fraction(c.re)
        im_abs = abs(c.im)
        im_s = "i" if im_abs == 1 else f"{_format_fraction(im_abs)}*i"
        joiner = "+" if c.im > 0 else "-"
        head = f"({re_s}{joiner}{im_s})"
        return 1, "*".join([head] + tail)
    if c.im:
        sign = 1 if c.im > 0 else -1
        mag = abs(c.im)
        head = "i" if mag == 1 else f"{_format_fraction(mag)}*i"
        return sign, "*".join([head] + tail)
    sign = 1 if c.re > 0 else -1
    mag = abs(c.re)
    if mag == 1 and tail:
        return sign, "*".join(tail)
    return sign, "*".join([_format_fraction(mag)] + tail)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<int>\d+)"
    r"|(?P<name>[A-Za-z]+)"
    r"|(?P<caret>\^-?\d+)"
    r"|(?P<primes>'+)"
    r"|(?P<subscript>_[+-])"
    r"|(?P<op>[-+*/(),\[\]])"
)


class _Token(NamedTuple):
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup or ""
        if kind != "ws":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ctx: GenContext):
        self.text = text
        self.ctx = ctx
        self.tokens = _tokenize(text)
        self.i = 0

    # -- token plumbing ----------------------------------------------------------
    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}", self.text, tok.pos)
        self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.text, self.peek().pos)

    # -- grammar -------------------------------------------------------------------
    def parse(self) -> NCExpr:
        expr = self.parse_expr()
        if self.peek().kind != "eof":
            raise self.error("trailing input")
        return expr

    def parse_expr(self) -> NCExpr:
        tok = self.peek()
        negate = False
        if tok.kind == "op" and tok.text in "+-":
            negate = tok.text == "-"
            self.advance()
        acc = self.parse_term()
        if negate:
            acc = -acc
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text in "+-":
                self.advance()
                term = self.parse_term()
                acc = acc - term if tok.text == "-" else acc + term
            else:
                return acc

    def parse_term(self) -> NCExpr:
        acc = self.parse_factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                self.advance()
                acc = acc * self.parse_factor()
            elif tok.kind == "op" and tok.text == "/":
                self.advance()
                acc = acc * self.parse_divisor()
            else:
                return acc

    def parse_divisor(self) -> NCExpr:
        pos = self.peek().pos
        factor = self.parse_factor()
        items = list(factor.terms.items())
        if len(items) != 1 or items[0][0] != ():
            raise ParseError(
                "division only by central scalars", self.text, pos
            )
        mono = items[0][1].single_mono()
        if mono is None:
            raise ParseError(
                "division only by a single central monomial", self.text, pos
            )
        (l, h, a), c = mono
        if h or a:
            raise ParseError(
                "division by hbar or alpha is not representable", self.text, pos
            )
        return NCExpr(self.ctx, {(): Scalar.mono(c.inverse(), lam=-l)})

    def _caret_value(self) -> int | None:
        tok = self.peek()
        if tok.kind == "caret":
            self.advance()
            return int(tok.text[1:])
        return None

    def parse_factor(self) -> NCExpr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return NCExpr.scalar(int(tok.text), self.ctx)
        if tok.kind == "name":
            return self.parse_name()
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        if tok.kind == "op" and tok.text == "[":
            self.advance()
            left = self.parse_expr()
            self.expect_op(",")
            right = self.parse_expr()
            self.expect_op("]")
            sub = self.peek()
            anti = False
            if sub.kind == "subscript":
                self.advance()
                anti = sub.text == "_+"
            return left * right + right * left if anti else left * right - right * left
        raise self.error("expected a factor")

    def parse_name(self) -> NCExpr:
        tok = self.advance()
        name = tok.text
        if name == "i":
            return NCExpr.imag_unit(self.ctx)
        if name in ("lam", "hbar", "alpha"):
            power = self._caret_value()
            if power is None:
                power = 1
            if power < 0 and name != "lam":
                raise ParseError(
                    f"{name} admits only non-negative exponents", self.text, tok.pos
                )
            return NCExpr(self.ctx, {(): Scalar.mono(1, **{name: power})})
        if name == "beta":
            base = NCExpr(self.ctx, {(): Scalar.mono(QQi(0, Fraction(1, 4)), hbar=1)})
            return self._macro_power(base, tok)
        if name == "delta":
            base = NCExpr(
                self.ctx,
                {(): Scalar({(0, 0, 1): _QQI_ONE, (0, 0, 0): QQi(Fraction(-1, 2))})},
            )
            return self._macro_power(base, tok)
        # a generator
        try:
            self.ctx.index(name)
        except ContextError:
            raise ParseError(f"undeclared generator {name!r}", self.text, tok.pos)
        order = 0
        nxt = self.peek()
        if nxt.kind == "primes":
            order = len(nxt.text)
            self.advance()
        power = self._caret_value()
        if power is None:
            return NCExpr.gen(name, order, ctx=self.ctx)
        if power >= 0:
            base = NCExpr.gen(name, order, ctx=self.ctx)
            acc = NCExpr.one(self.ctx)
            for _ in range(power):
                acc = acc * base
            return acc
        if order != 0:
            raise ParseError(
                "negative powers apply only to underived generators",
                self.text,
                tok.pos,
            )
        if name not in self.ctx.invertible:
            raise ParseError(
                f"generator {name!r} is not declared invertible", self.text, tok.pos
            )
        atom = Atom(name, 0, True)
        acc = NCExpr.one(self.ctx)
        single = NCExpr(self.ctx, {(atom,): Scalar.one()})
        for _ in range(-power):
            acc = acc * single
        return acc

    def _macro_power(self, base: NCExpr, tok: _Token) -> NCExpr:
        power = self._caret_value()
        if power is None:
            return base
        if power < 0:
            raise ParseError(
                "macros admit only non-negative exponents", self.text, tok.pos
            )
        acc = NCExpr.one(self.ctx)
        for _ in range(power):
            acc = acc * base
        return acc


def parse(text: str, ctx: GenContext = DEFAULT_CONTEXT) -> NCExpr:
    """Parse expression text into an (unnormalized) expression.

    The grammar: sums/differences of terms; terms are ``*``-products of
    factors with ``/`` by central scalars; factors are integers, ``i``,
    the central symbols ``lam``/``hbar``/``alpha`` (with integer caret
    exponents, negative only for ``lam``), the macros ``beta`` (= i*hbar/4)
    and ``delta`` (= alpha - 1/2), generators with prime derivatives and
    caret powers (negative powers only for invertible generators),
    commutators ``[a,b]`` / ``[a,b]_-`` and anticommutators ``[a,b]_+``,
    and parenthesized expressions.  ``print``/``parse`` round-trip.
    """
    return _Parser(text, ctx).parse()


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    """An oriented rewrite rule: an adjacent atom pair -> an expression."""

    pattern: tuple[Atom, Atom]
    replacement: NCExpr

    def __post_init__(self):
        ctx = self.replacement.ctx
        for atom in self.pattern:
            ctx.check_atom(atom)
        for word in self.replacement.terms:
            for i in range(len(word) - 1):
                if (word[i], word[i + 1]) == self.pattern:
                    raise RuleError(
                        "rule replacement reintroduces its own pattern: "
                        f"{self.pattern!r}"
                    )


class RuleSet:
    """A named, ordered list of rewrite rules with an application budget.

    Rules are applied leftmost-first: positions are scanned left to right
    and at each position the first matching rule (in registration order)
    fires.  Earlier rules take precedence when two share a pattern.
    """

    def __init__(
        self,
        name: str,
        rules: Iterable[Rule],
        max_passes: int = DEFAULT_PASS_BUDGET,
        ctx: GenContext = DEFAULT_CONTEXT,
    ):
        if max_passes <= 0:
            raise RuleError("the pass budget must be positive")
        self.name = name
        self.rules = tuple(rules)
        self.max_passes = max_passes
        self.ctx = ctx
        table: dict[tuple[Atom, Atom], Rule] = {}
        for rule in self.rules:
            if rule.replacement.ctx != ctx:
                raise ContextError("rule from a different generator context")
            table.setdefault(rule.pattern, rule)
        self._table = table

    def find(self, word: tuple) -> tuple[int, Rule] | None:
        table = self._table
        for pos in range(len(word) - 1):
            rule = table.get((word[pos], word[pos + 1]))
            if rule is not None:
                return pos, rule
        return None

    def __repr__(self):
        return f"RuleSet({self.name!r}, {len(self.rules)} rules)"


def combine_rulesets(name: str, *rulesets: RuleSet) -> RuleSet:
    if not rulesets:
        raise RuleError("no rule sets to combine")
    ctx = rulesets[0].ctx
    rules: list[Rule] = []
    for rs in rulesets:
        if rs.ctx != ctx:
            raise ContextError("rule sets from different generator contexts")
        rules.extend(rs.rules)
    budget = max(rs.max_passes for rs in rulesets)
    return RuleSet(name, rules, budget, ctx)


def _resolve_budget(rules: RuleSet, budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(PASS_BUDGET_ENV)
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise LaxlabError(
                f"{PASS_BUDGET_ENV} must be an integer, got {env!r}"
            ) from None
        if value <= 0:
            raise LaxlabError(f"{PASS_BUDGET_ENV} must be positive, got {value}")
        return value
    return rules.max_passes


def normalize(e: NCExpr, rules: RuleSet | None, budget: int | None = None) -> NCExpr:
    """Rewrite to a normal form in which no rule pattern occurs.

    Deterministic: pending words are processed smallest-first in the
    canonical word order.  Every rule application counts against the
    budget (explicit argument, then the LAXLAB_PASS_BUDGET environment
    variable, then the rule set's own maximum); exhausting it raises
    :class:`PassBudgetExhausted` rather than looping forever.
    """
    if rules is None:
        return e
    if rules.ctx != e.ctx:
        raise ContextError("rule set from a different generator context")
    limit = _resolve_budget(rules, budget)

    pending: dict[tuple, Scalar] = dict(e.terms)
    done: dict[tuple, Scalar] = {}
    applications = 0
    ctx = e.ctx
    while pending:
        word = min(pending, key=lambda w: _word_key(ctx, w))
        scal = pending.pop(word)
        if not scal:
            continue
        hit = rules.find(word)
        if hit is None:
            acc = done.get(word)
            scal = scal if acc is None else acc + scal
            if scal:
                done[word] = scal
            elif acc is not None:
                del done[word]
            continue
        applications += 1
        if applications > limit:
            raise PassBudgetExhausted(rules.name, limit)
        pos, rule = hit
        head, tail = word[:pos], word[pos + 2 :]
        for rword, rscal in rule.replacement.terms.items():
            new_word = head + rword + tail
            add = scal * rscal
            acc = pending.get(new_word)
            add = add if acc is None else acc + add
            if add:
                pending[new_word] = add
            elif acc is not None:
                del pending[new_word]
    result = NCExpr(e.ctx)
    result.terms = done
    return result


# ---------------------------------------------------------------------------
# Functional conveniences mirroring the method API
# ---------------------------------------------------------------------------


def commutator(a: NCExpr, b: NCExpr) -> NCExpr:
    return a * b - b * a


def anticommutator(a: NCExpr, b: NCExpr) -> NCExpr:
    return a * b + b * a


def d_dz(e: NCExpr) -> NCExpr:
    return e.d_dz()


def d_dlambda(e: NCExpr) -> NCExpr:
    return e.d_dlambda()


def substitute(e: NCExpr, mapping: Mapping[str, NCExpr]) -> NCExpr:
    return e.substitute(mapping)


def classical_limit(e: NCExpr) -> NCExpr:
    return e.classical_limit()


def scalarize(e: NCExpr) -> NCExpr:
    return e.scalarize()


# ---------------------------------------------------------------------------
# Built-in rule sets
# ---------------------------------------------------------------------------


def _half_i_hbar(ctx: GenContext) -> NCExpr:
    return NCExpr(ctx, {(): Scalar.mono(QQi(0, Fraction(1, 2)), hbar=1)})


def quantum_zv_rules(
    ctx: GenContext = DEFAULT_CONTEXT, order: int = DERIVATIVE_TOWER_ORDER
) -> RuleSet:
    """The relation [z, v] = -(i/2)*hbar*u and its derivative tower.

    Oriented to push z leftward: v^(k) * z -> z * v^(k) + (i/2)*hbar*u^(k).
    """
    rules = []
    for k in range(order + 1):
        repl = (
            NCExpr.gen("z", ctx=ctx) * NCExpr.gen("v", k, ctx=ctx)
            + _half_i_hbar(ctx) * NCExpr.gen("u", k, ctx=ctx)
        )
        rules.append(Rule((Atom("v", k), Atom("z", 0)), repl))
    return RuleSet("quantum-zv", rules, ctx=ctx)


def quantum_zu_rules(
    ctx: GenContext = DEFAULT_CONTEXT, order: int = DERIVATIVE_TOWER_ORDER
) -> RuleSet:
    """The relation [z, u] = -(i/2)*hbar*u and its derivative tower.

    Oriented to push z leftward: u^(k) * z -> z * u^(k) + (i/2)*hbar*u^(k).
    """
    rules = []
    for k in range(order + 1):
        repl = (
            NCExpr.gen("z", ctx=ctx) * NCExpr.gen("u", k, ctx=ctx)
            + _half_i_hbar(ctx) * NCExpr.gen("u", k, ctx=ctx)
        )
        rules.append(Rule((Atom("u", k), Atom("z", 0)), repl))
    return RuleSet("quantum-zu", rules, ctx=ctx)


def inverse_rules(ctx: GenContext = DEFAULT_CONTEXT) -> RuleSet:
    """Two-sided cancellation g * g^-1 -> 1 for every invertible generator."""
    rules = []
    for name in sorted(ctx.invertible, key=ctx.index):
        plain = Atom(name, 0, False)
        inv = Atom(name, 0, True)
        one = NCExpr.one(ctx)
        rules.append(Rule((plain, inv), one))
        rules.append(Rule((inv, plain), one))
    return RuleSet("inverse-pq", rules, ctx=ctx)


def commute_vu_rules(
    ctx: GenContext = DEFAULT_CONTEXT, order: int = DERIVATIVE_TOWER_ORDER
) -> RuleSet:
    """Let v and all its derivatives commute past u and all its derivatives."""
    rules = []
    for j in range(order + 1):
        for k in range(order + 1):
            repl = NCExpr.gen("u", k, ctx=ctx) * NCExpr.gen("v", j, ctx=ctx)
            rules.append(Rule((Atom("v", j), Atom("u", k)), repl))
    return RuleSet("commute-vu", rules, ctx=ctx)


def commute_uu_rules(
    ctx: GenContext = DEFAULT_CONTEXT,
    gen: str = "u",
    order: int = DERIVATIVE_TOWER_ORDER,
) -> RuleSet:
    """Let one generator family commute with its own derivatives (sorted)."""
    rules = []
    for j in range(order + 1):
        for k in range(j):
            repl = NCExpr.gen(gen, k, ctx=ctx) * NCExpr.gen(gen, j, ctx=ctx)
            rules.append(Rule((Atom(gen, j), Atom(gen, k)), repl))
    return RuleSet("commute-uu", rules, ctx=ctx)


def weyl_pii_rules(ctx: GenContext = DEFAULT_CONTEXT) -> RuleSet:
    """The symmetric-form commutation relations [r,q] = 2*hbar*u,
    [u,q] = hbar, [u,r] = hbar, oriented toward the canonical order."""
    hbar = NCExpr.hbar(ctx=ctx)
    u = NCExpr.gen("u", ctx=ctx)
    q = NCExpr.gen("q", ctx=ctx)
    r = NCExpr.gen("r", ctx=ctx)
    rules = [
        Rule((Atom("r", 0), Atom("q", 0)), q * r + 2 * hbar * u),
        Rule((Atom("q", 0), Atom("u", 0)), u * q - hbar),
        Rule((Atom("r", 0), Atom("u", 0)), u * r - hbar),
    ]
    return RuleSet("weyl-pii", rules, ctx=ctx)


_BUILTIN_FACTORIES: dict[str, Callable[[GenContext], RuleSet]] = {
    "quantum-zv": quantum_zv_rules,
    "quantum-zu": quantum_zu_rules,
    "inverse-pq": inverse_rules,
    "commute-vu": commute_vu_rules,
    "commute-uu": commute_uu_rules,
    "weyl-pii": weyl_pii_rules,
}

BUILTIN_RULESET_NAMES = tuple(sorted(_BUILTIN_FACTORIES))


def builtin_ruleset(name: str, ctx: GenContext = DEFAULT_CONTEXT) -> RuleSet:
    try:
        factory = _BUILTIN_FACTORIES[name]
    except KeyError:
        raise LaxlabError(
            f"unknown rule set {name!r}; available: {', '.join(BUILTIN_RULESET_NAMES)}"
        ) from None
    return factory(ctx)
