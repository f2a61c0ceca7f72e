"""Polynomial maps V^n x Q^p -> V with exact rational coefficients.

Variables are laid out block by block: the components of input slot 1,
then of slot 2 and so on, followed by the parameters.  A polynomial map
stores one sparse polynomial per output component; a sparse polynomial
is a dict from exponent tuples to non-zero Fractions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable, Mapping, Sequence

from .errors import DomainError, ValidationError
from .linalg import frac

Exponent = tuple


# sparse scalar polynomials


def padd(a: dict, b: Mapping, scale=1) -> dict:
    """Return a + scale*b as a new dict."""
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def padd_into(acc: dict, b: Mapping, scale=1) -> None:
    for e, c in b.items():
        v = acc.get(e, 0) + scale * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def pmul(a: Mapping, b: Mapping) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def pconst(c, nvars: int) -> dict:
    c = frac(c)
    return {(0,) * nvars: c} if c else {}


def pvar(v: int, nvars: int) -> dict:
    e = [0] * nvars
    e[v] = 1
    return {tuple(e): Fraction(1)}


def ppow(a: Mapping, k: int, nvars: int) -> dict:
    out = pconst(1, nvars)
    base = dict(a)
    while k:
        if k & 1:
            out = pmul(out, base)
        k >>= 1
        if k:
            base = pmul(base, base)
    return out


def pderiv(a: Mapping, v: int) -> dict:
    out = {}
    for e, c in a.items():
        if e[v]:
            e2 = list(e)
            e2[v] -= 1
            out[tuple(e2)] = c * e[v]
    return out


def exponents_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, in descending lex order."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in exponents_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


class PolyMap:
    """A polynomial map with exact rational coefficients.

    ``blocks`` gives the dimension of each input slot, ``m`` the output
    dimension and ``p`` the number of parameters.  For homogeneous
    networks every block has dimension m.
    """

    __slots__ = ("blocks", "m", "p", "components", "_offsets", "_hash")

    def __init__(self, components: Sequence[Mapping], n: int | None = None, m: int | None = None,
                 p: int = 0, blocks: Sequence[int] | None = None):
        comps = list(components)
        if m is None:
            m = len(comps)
        if blocks is None:
            if n is None:
                raise DomainError("either n or blocks must be given")
            blocks = (m,) * n
        self.blocks = tuple(int(b) for b in blocks)
        self.m = int(m)
        self.p = int(p)
        if len(comps) != self.m:
            raise DomainError(f"expected {self.m} components, got {len(comps)}")
        offs = []
        acc = 0
        for b in self.blocks:
            offs.append(acc)
            acc += b
        self._offsets = tuple(offs)
        nv = acc + self.p
        clean = []
        for comp in comps:
            d = {}
            for e, c in comp.items():
                e = tuple(e)
                if len(e) != nv or any(x < 0 for x in e):
                    raise DomainError(f"exponent {e} does not fit {nv} variables")
                c = frac(c)
                if c:
                    d[e] = c
            clean.append(d)
        self.components = tuple(clean)
        self._hash = None

    # layout

    @property
    def n(self) -> int:
        return len(self.blocks)

    @property
    def nstate(self) -> int:
        return sum(self.blocks)

    @property
    def nvars(self) -> int:
        return self.nstate + self.p

    def var_index(self, slot: int, comp: int = 1) -> int:
        if not 1 <= slot <= self.n:
            raise DomainError(f"slot {slot} outside 1..{self.n}")
        if not 1 <= comp <= self.blocks[slot - 1]:
            raise DomainError(f"component {comp} outside 1..{self.blocks[slot - 1]}")
        return self._offsets[slot - 1] + comp - 1

    def param_index(self, t: int) -> int:
        if not 1 <= t <= self.p:
            raise DomainError(f"parameter {t} outside 1..{self.p}")
        return self.nstate + t - 1

    def layout(self) -> tuple:
        return (self.blocks, self.m, self.p)

    def same_layout(self, other: "PolyMap") -> bool:
        return self.layout() == other.layout()

    def _check_layout(self, other: "PolyMap"):
        if not isinstance(other, PolyMap) or not self.same_layout(other):
            raise DomainError("polynomial maps have different layouts")

    def _new(self, comps, blocks=None, m=None) -> "PolyMap":
        return PolyMap(comps, m=self.m if m is None else m, p=self.p,
                       blocks=self.blocks if blocks is None else blocks)

    # construction helpers

    @classmethod
    def zero(cls, n=None, m=1, p=0, blocks=None) -> "PolyMap":
        return cls([{}] * m, n=n, m=m, p=p, blocks=blocks)

    def zero_like(self) -> "PolyMap":
        return self._new([{}] * self.m)

    @classmethod
    def monomial(cls, exponent, component=1, coeff=1, n=None, m=1, p=0, blocks=None) -> "PolyMap":
        comps = [{} for _ in range(m)]
        comps[component - 1] = {tuple(exponent): frac(coeff)}
        return cls(comps, n=n, m=m, p=p, blocks=blocks)

    @classmethod
    def variable(cls, slot, comp=1, out=1, n=None, m=1, p=0, blocks=None) -> "PolyMap":
        z = cls.zero(n=n, m=m, p=p, blocks=blocks)
        comps = [{} for _ in range(z.m)]
        comps[out - 1] = pvar(z.var_index(slot, comp), z.nvars)
        return z._new(comps)

    # vector space structure

    def __add__(self, other):
        self._check_layout(other)
        return self._new([padd(a, b) for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        self._check_layout(other)
        return self._new([padd(a, b, -1) for a, b in zip(self.components, other.components)])

    def __neg__(self):
        return self._new([{e: -c for e, c in a.items()} for a in self.components])

    def scale(self, c) -> "PolyMap":
        c = frac(c)
        if not c:
            return self.zero_like()
        return self._new([{e: c * v for e, v in a.items()} for a in self.components])

    def __mul__(self, other):
        if isinstance(other, PolyMap):
            if other.m != 1 or other.blocks != self.blocks or other.p != self.p:
                raise DomainError("products need a scalar factor with the same variables")
            return self._new([pmul(a, other.components[0]) for a in self.components])
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        return self.scale(1 / frac(other))

    def __pow__(self, k: int):
        if self.m != 1:
            raise DomainError("powers are defined for scalar maps only")
        return self._new([ppow(self.components[0], int(k), self.nvars)])

    def __eq__(self, other):
        return (isinstance(other, PolyMap) and self.layout() == other.layout()
                and self.components == other.components)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.layout(), tuple(frozenset(c.items()) for c in self.components)))
        return self._hash

    def __bool__(self):
        return any(self.components)

    def is_zero(self) -> bool:
        return not self

    def __repr__(self):
        return f"PolyMap({format_polymap(self)!r}, blocks={self.blocks}, m={self.m}, p={self.p})"

    def __str__(self):
        text = format_polymap(self)
        return text if isinstance(text, str) else "(" + ", ".join(text) + ")"

    # grading

    def degrees(self, e: Exponent) -> tuple[int, int]:
        ns = self.nstate
        return sum(e[:ns]), sum(e[ns:])

    def grade_of(self, e: Exponent) -> tuple[int, int]:
        s, t = self.degrees(e)
        return s - 1, t

    def grade_parts(self) -> dict:
        parts: dict = {}
        for ci, comp in enumerate(self.components):
            for e, c in comp.items():
                g = self.grade_of(e)
                parts.setdefault(g, [{} for _ in range(self.m)])[ci][e] = c
        return {g: self._new(cs) for g, cs in sorted(parts.items(), key=lambda kv: (kv[0][1], kv[0][0]))}

    def grade(self, k: int, l: int = 0) -> "PolyMap":
        return self._new([{e: c for e, c in comp.items() if self.grade_of(e) == (k, l)}
                          for comp in self.components])

    def in_grade(self, k: int, l: int = 0) -> bool:
        return all(self.grade_of(e) == (k, l) for comp in self.components for e in comp)

    def truncate(self, r1: int, r2: int = 0) -> "PolyMap":
        """Keep terms of state degree at most r1+1 and parameter degree at most r2."""
        def keep(e):
            k, l = self.grade_of(e)
            return k <= r1 and l <= r2
        return self._new([{e: c for e, c in comp.items() if keep(e)} for comp in self.components])

    def max_degree(self) -> int:
        return max((sum(e) for comp in self.components for e in comp), default=0)

    # evaluation and calculus

    def evaluate(self, x: Sequence, lam: Sequence = ()) -> list[Fraction]:
        """Exact value at state x (flat, length nstate) and parameters lam."""
        if len(x) != self.nstate:
            raise DomainError(f"state point has length {len(x)}, expected {self.nstate}")
        if len(lam) != self.p:
            raise DomainError(f"parameter point has length {len(lam)}, expected {self.p}")
        point = [frac(v) for v in x] + [frac(v) for v in lam]
        out = []
        for comp in self.components:
            total = Fraction(0)
            for e, c in comp.items():
                term = c
                for v, k in zip(point, e):
                    if k:
                        term *= v ** k
                total += term
            out.append(total)
        return out

    def partial(self, slot: int, direction: int = 1) -> "PolyMap":
        v = self.var_index(slot, direction)
        return self._new([pderiv(comp, v) for comp in self.components])

    def partial_param(self, t: int) -> "PolyMap":
        v = self.param_index(t)
        return self._new([pderiv(comp, v) for comp in self.components])

    def directional(self, slot: int, w: "PolyMap") -> "PolyMap":
        """D_slot f · w, where w supplies one polynomial per component of the slot."""
        b = self.blocks[slot - 1]
        if w.m != b or w.blocks != self.blocks or w.p != self.p:
            raise DomainError("direction does not match the slot")
        comps = [{} for _ in range(self.m)]
        for c in range(1, b + 1):
            wc = w.components[c - 1]
            if not wc:
                continue
            v = self.var_index(slot, c)
            for i, comp in enumerate(self.components):
                d = pderiv(comp, v)
                if d:
                    padd_into(comps[i], pmul(d, wc))
        return self._new(comps)

    def compose_linear(self, selector: Sequence[int], source_blocks: Sequence[int]) -> "PolyMap":
        """f(X_{s(1)}, ..., X_{s(n)}) as a map on the source slots.

        ``selector[j-1]`` is the source slot feeding slot j; whole blocks are
        substituted so the dimensions must agree.
        """
        selector = getattr(selector, "selector", selector)
        if len(selector) != self.n:
            raise DomainError(f"selector has {len(selector)} entries, expected {self.n}")
        src = tuple(source_blocks)
        offs = []
        acc = 0
        for b in src:
            offs.append(acc)
            acc += b
        nv_new = acc + self.p
        targets = []
        for j, s in enumerate(selector):
            if not 1 <= s <= len(src):
                raise DomainError(f"selector entry {s} outside 1..{len(src)}")
            if src[s - 1] != self.blocks[j]:
                raise DomainError("selected block has the wrong dimension")
            targets.extend(offs[s - 1] + c for c in range(self.blocks[j]))
        targets.extend(acc + t for t in range(self.p))
        comps = []
        for comp in self.components:
            d: dict = {}
            for e, c in comp.items():
                ne = [0] * nv_new
                for v, k in enumerate(e):
                    if k:
                        ne[targets[v]] += k
                ne = tuple(ne)
                val = d.get(ne, 0) + c
                if val:
                    d[ne] = val
                else:
                    d.pop(ne)
            comps.append(d)
        return PolyMap(comps, m=self.m, p=self.p, blocks=src)

    def substitute_blocks(self, subs: Sequence["PolyMap"]) -> "PolyMap":
        """f(g_1, ..., g_n) where g_j supplies slot j; parameters pass through."""
        if len(subs) != self.n:
            raise DomainError(f"expected {self.n} substitutions, got {len(subs)}")
        layout = subs[0].blocks
        for j, g in enumerate(subs):
            if g.blocks != layout or g.p != self.p:
                raise DomainError("substitutions must share one variable layout")
            if g.m != self.blocks[j]:
                raise DomainError(f"substitution for slot {j + 1} has the wrong dimension")
        nst = sum(layout)
        nv = nst + self.p
        scalars = [g.components[c] for g in subs for c in range(g.m)]
        scalars += [pvar(nst + t, nv) for t in range(self.p)]
        cache: dict = {}

        def power(v, k):
            key = (v, k)
            if key not in cache:
                cache[key] = ppow(scalars[v], k, nv) if k > 1 else dict(scalars[v])
            return cache[key]

        comps = []
        for comp in self.components:
            acc: dict = {}
            for e, c in comp.items():
                term = pconst(c, nv)
                for v, k in enumerate(e):
                    if k:
                        term = pmul(term, power(v, k))
                        if not term:
                            break
                padd_into(acc, term)
            comps.append(acc)
        return PolyMap(comps, m=self.m, p=self.p, blocks=layout)

    def extend(self, n_new: int) -> "PolyMap":
        """The same map viewed with extra trailing input slots it ignores."""
        if n_new < self.n:
            raise DomainError("cannot shrink the arity")
        extra = (self.m,) * (n_new - self.n)
        pad = (0,) * (self.m * (n_new - self.n))
        ns = self.nstate
        comps = [{e[:ns] + pad + e[ns:]: c for e, c in comp.items()} for comp in self.components]
        return PolyMap(comps, m=self.m, p=self.p, blocks=self.blocks + extra)

    def with_params(self, p: int) -> "PolyMap":
        """Re-embed with p parameters (only adding parameters that are unused)."""
        if p < self.p:
            if any(any(e[self.nstate + t] for t in range(p, self.p)) for comp in self.components for e in comp):
                raise DomainError("cannot drop a parameter that is in use")
            comps = [{e[: self.nstate + p]: c for e, c in comp.items()} for comp in self.components]
        else:
            pad = (0,) * (p - self.p)
            comps = [{e + pad: c for e, c in comp.items()} for comp in self.components]
        return PolyMap(comps, m=self.m, p=p, blocks=self.blocks)

    def terms(self):
        """(component, exponent, coefficient) triples in basis order."""
        out = []
        for ci, comp in enumerate(self.components, start=1):
            for e in sorted(comp, key=lambda e: (self.degrees(e), tuple(-x for x in e))):
                out.append((ci, e, comp[e]))
        return out


@dataclass(frozen=True)
class GradedBasis:
    """Ordered monomial basis of the maps of grade (k, l).

    Entries have state degree k+1 and parameter degree l.  They are
    ordered by output component, then by descending lexicographic order
    of the exponent, which is graded lex with X1 before X2.
    """

    k: int
    l: int
    blocks: tuple
    m: int
    p: int
    keys: tuple

    @property
    def n(self) -> int:
        return len(self.blocks)

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def index(self) -> dict:
        return _key_index(self.keys)

    @property
    def entries(self) -> tuple:
        return tuple(PolyMap.monomial(e, comp, 1, m=self.m, p=self.p, blocks=self.blocks)
                     for comp, e in self.keys)

    def coordinates(self, f: PolyMap) -> list[Fraction]:
        if f.layout() != (self.blocks, self.m, self.p):
            raise DomainError("polynomial map does not match the basis layout")
        idx = self.index
        vec = [Fraction(0)] * len(self.keys)
        for ci, comp in enumerate(f.components, start=1):
            for e, c in comp.items():
                pos = idx.get((ci, e))
                if pos is None:
                    raise DomainError(f"term {e} of component {ci} is not in grade ({self.k},{self.l})")
                vec[pos] = c
        return vec

    def from_coordinates(self, vec: Sequence) -> PolyMap:
        if len(vec) != len(self.keys):
            raise DomainError("coordinate vector has the wrong length")
        comps = [{} for _ in range(self.m)]
        for (ci, e), c in zip(self.keys, vec):
            if c:
                comps[ci - 1][e] = frac(c)
        return PolyMap(comps, m=self.m, p=self.p, blocks=self.blocks)


@lru_cache(maxsize=None)
def _key_index(keys):
    return {key: i for i, key in enumerate(keys)}


@lru_cache(maxsize=None)
def _basis_cached(k, l, blocks, m, p):
    if k < -1 or l < 0:
        raise DomainError(f"grade ({k},{l}) is not valid")
    ns = sum(blocks)
    if (k == -1 and l == 0) or (l > 0 and p == 0):
        keys = ()
    else:
        states = list(exponents_of_degree(ns, k + 1))
        params = list(exponents_of_degree(p, l))
        keys = tuple((c, s + t) for c in range(1, m + 1) for s in states for t in params)
    return GradedBasis(k, l, blocks, m, p, keys)


def basis(k: int, l: int = 0, n: int | None = None, m: int = 1, p: int = 0,
          blocks: Sequence[int] | None = None) -> GradedBasis:
    if blocks is None:
        if n is None:
            raise DomainError("either n or blocks must be given")
        blocks = (m,) * n
    return _basis_cached(int(k), int(l), tuple(blocks), int(m), int(p))


def basis_size(k: int, l: int, n: int, m: int, p: int) -> int:
    """Closed-form dimension of the grade (k, l) space for a homogeneous layout."""
    if k == -1 and l == 0:
        return 0
    return m * comb(n * m + k, k + 1) * comb(p + l - 1, l) if l else m * comb(n * m + k, k + 1)


def evaluate(f: PolyMap, x: Sequence, lam: Sequence = ()) -> list[Fraction]:
    return f.evaluate(x, lam)


def partial(f: PolyMap, slot: int, direction: int = 1) -> PolyMap:
    return f.partial(slot, direction)


def compose_linear(f: PolyMap, selection, source_blocks: Sequence[int] | None = None) -> PolyMap:
    """Substitute whole blocks according to an index selection."""
    if source_blocks is None:
        arity = getattr(selection, "source_arity", None)
        if arity is None:
            arity = f.n
        source_blocks = (f.blocks[0] if f.blocks else f.m,) * arity
    return f.compose_linear(selection, source_blocks)


# text form


def variable_names(blocks: Sequence[int], p: int = 0, prefix: str = "X", param_prefix: str = "l",
                   vector: bool | None = None) -> list[str]:
    if vector is None:
        vector = any(b > 1 for b in blocks)
    names = []
    for j, b in enumerate(blocks, start=1):
        for c in range(1, b + 1):
            names.append(f"{prefix}{j}_{c}" if vector else f"{prefix}{j}")
    names += [f"{param_prefix}{t}" for t in range(1, p + 1)]
    return names


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_scalar(poly: Mapping, names: Sequence[str], nstate: int | None = None) -> str:
    if not poly:
        return "0"
    nstate = len(names) if nstate is None else nstate

    def order(e):
        return (sum(e[:nstate]), sum(e[nstate:]), tuple(-x for x in e))

    parts = []
    for e in sorted(poly, key=order):
        c = poly[e]
        factors = []
        for v, k in enumerate(e):
            if k == 1:
                factors.append(names[v])
            elif k:
                factors.append(f"{names[v]}^{k}")
        mag = abs(c)
        if not factors:
            body = format_rational(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = format_rational(mag) + "*" + "*".join(factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def format_polymap(f: PolyMap, names: Sequence[str] | None = None):
    """String for scalar maps, list of strings for vector-valued maps."""
    if names is None:
        names = variable_names(f.blocks, f.p)
    out = [format_scalar(c, names, f.nstate) for c in f.components]
    return out[0] if f.m == 1 else out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_.]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, resolve: Callable[[str], int], nvars: int):
        self.text = text
        self.resolve = resolve
        self.nvars = nvars
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            mt = _TOKEN.match(text, pos)
            if not mt:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise ValidationError(f"column {col}: unexpected character {text[col - 1]!r}")
            start = mt.start(mt.lastindex)
            kind = ("num", "name", "op")[mt.lastindex - 1]
            self.tokens.append((kind, mt.group(mt.lastindex), start + 1))
            pos = mt.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.text) + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, tok, what):
        shown = tok[1] if tok[0] != "end" else "end of input"
        raise ValidationError(f"column {tok[2]}: {what}, found {shown!r}")

    def parse(self) -> dict:
        if not self.tokens:
            raise ValidationError("column 1: empty polynomial")
        out = self.expr()
        if self.peek()[0] != "end":
            self.fail(self.peek(), "expected an operator")
        return out

    def expr(self):
        acc = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            acc = padd(acc, self.term(), 1 if op == "+" else -1)
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            _, op, col = self.take()
            rhs = self.unary()
            if op == "*":
                acc = pmul(acc, rhs)
            else:
                if any(any(e) for e in rhs) or not rhs:
                    raise ValidationError(f"column {col}: division is only allowed by a non-zero constant")
                c = next(iter(rhs.values()))
                acc = {e: v / c for e, v in acc.items()}
        return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            inner = self.unary()
            return inner if tok[1] == "+" else {e: -c for e, c in inner.items()}
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("^", "**"):
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num":
                self.fail(exp_tok, "expected a non-negative integer exponent")
            base = ppow(base, int(exp_tok[1]), self.nvars)
        return base

    def atom(self):
        tok = self.take()
        kind, val, col = tok
        if kind == "num":
            return pconst(int(val), self.nvars)
        if kind == "name":
            try:
                v = self.resolve(val)
            except (ValidationError, DomainError) as exc:
                raise ValidationError(f"column {col}: {exc}") from None
            return pvar(v, self.nvars)
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[1] != ")":
                self.fail(close, "expected ')'")
            return inner
        self.fail(tok, "expected a number, variable or '('")


def parse_scalar(text: str, resolve: Callable[[str], int], nvars: int) -> dict:
    """Parse polynomial text using a name resolver that returns variable positions."""
    if not isinstance(text, str):
        raise ValidationError(f"polynomial must be given as text, got {type(text).__name__}")
    return _Parser(text, resolve, nvars).parse()


_HOM_VAR = re.compile(r"X(\d+)(?:_(\d+))?$")
_PARAM = re.compile(r"l(\d+)$")


def homogeneous_resolver(n: int, m: int, p: int):
    def resolve(name: str) -> int:
        mt = _PARAM.match(name)
        if mt:
            t = int(mt.group(1))
            if not 1 <= t <= p:
                raise ValidationError(f"parameter {name} outside l1..l{p}")
            return n * m + t - 1
        mt = _HOM_VAR.match(name)
        if not mt:
            raise ValidationError(f"unknown name {name!r}")
        j = int(mt.group(1))
        if not 1 <= j <= n:
            raise ValidationError(f"input {name} outside X1..X{n}")
        if mt.group(2) is None:
            if m != 1:
                raise ValidationError(f"{name} needs a component index, e.g. {name}_1")
            c = 1
        else:
            c = int(mt.group(2))
            if not 1 <= c <= m:
                raise ValidationError(f"component of {name} outside 1..{m}")
        return (j - 1) * m + c - 1
    return resolve


def parse_polymap(text, n: int, m: int = 1, p: int = 0) -> PolyMap:
    """Parse a scalar string (m = 1) or a list of m component strings."""
    texts = [text] if isinstance(text, str) else list(text)
    if len(texts) != m:
        raise ValidationError(f"expected {m} component expressions, got {len(texts)}")
    resolve = homogeneous_resolver(n, m, p)
    nv = n * m + p
    return PolyMap([parse_scalar(t, resolve, nv) for t in texts], n=n, m=m, p=p)


def random_polymap(rng, n: int | None = None, m: int = 1, p: int = 0, max_degree: int = 2,
                   min_degree: int = 1, density: float = 0.6, max_param_degree: int = 1,
                   blocks: Sequence[int] | None = None, coeff_range: int = 5) -> PolyMap:
    """Random map with small rational coefficients, for tests and self checks.

    State degrees run from min_degree to max_degree.  Parameter-only terms
    are included when p > 0 and min_degree allows it.
    """
    if blocks is None:
        blocks = (m,) * n
    comps = [{} for _ in range(m)]
    for deg in range(max(min_degree, 0), max_degree + 1):
        for l in range(0, (max_param_degree if p else 0) + 1):
            if deg == 0 and l == 0:
                continue
            b = basis(deg - 1, l, m=m, p=p, blocks=blocks)
            for comp, e in b.keys:
                if rng.random() < density:
                    num = rng.randint(-coeff_range, coeff_range)
                    den = rng.randint(1, 3)
                    if num:
                        comps[comp - 1][e] = Fraction(num, den)
    return PolyMap(comps, m=m, p=p, blocks=blocks)
