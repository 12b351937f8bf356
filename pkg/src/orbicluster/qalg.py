"""Exact arithmetic for the quantum torus.

Two layers live here: integer Laurent polynomials in the quantum parameter v
(`VLaurent`), and v-twisted Laurent polynomials in torus generators
(`QTorusElement`), where monomials multiply by

    X^a * X^b = v^L(a,b) * X^(a+b)

for a fixed integer skew form L.  Everything is immutable and exact; the
zero polynomial is the empty mapping.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping


class QalgError(Exception):
    pass


class DivisionError(QalgError):
    """Exact division failed (quotient does not exist in the ring)."""


# ---------------------------------------------------------------------------
# Laurent polynomials in v over the integers
# ---------------------------------------------------------------------------

class VLaurent:
    """Sparse integer Laurent polynomial in v, keyed by exponent."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | int = 0):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs} if coeffs else {}
        self.coeffs = {d: c for d, c in coeffs.items() if c}
        self._hash = None

    @staticmethod
    def v_power(k: int, coeff: int = 1) -> "VLaurent":
        return VLaurent({k: coeff})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_nonnegative(self) -> bool:
        return all(c > 0 for c in self.coeffs.values())

    def __add__(self, other: "VLaurent") -> "VLaurent":
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            s = out.get(d, 0) + c
            if s:
                out[d] = s
            else:
                out.pop(d, None)
        return VLaurent(out)

    def __neg__(self) -> "VLaurent":
        return VLaurent({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other: "VLaurent") -> "VLaurent":
        return self + (-other)

    def __mul__(self, other: "VLaurent") -> "VLaurent":
        out: dict[int, int] = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                s = out.get(d, 0) + c1 * c2
                if s:
                    out[d] = s
                else:
                    out.pop(d, None)
        return VLaurent(out)

    def vshift(self, k: int) -> "VLaurent":
        if k == 0:
            return self
        return VLaurent({d + k: c for d, c in self.coeffs.items()})

    def at_one(self) -> int:
        return sum(self.coeffs.values())

    def bar(self) -> "VLaurent":
        """The involution v -> v^-1."""
        return VLaurent({-d: c for d, c in self.coeffs.items()})

    def divide_exact(self, other: "VLaurent") -> "VLaurent":
        """Exact quotient self/other in Z[v,v^-1]; raises DivisionError."""
        if other.is_zero():
            raise DivisionError("division by zero")
        if self.is_zero():
            return VLaurent(0)
        # schoolbook division from the top; the quotient degree range is
        # pinned by both ends, which also bounds the loop
        num = dict(self.coeffs)
        dmax = max(other.coeffs)
        lead = other.coeffs[dmax]
        qmin = min(self.coeffs) - min(other.coeffs)
        out: dict[int, int] = {}
        while num:
            nmax = max(num)
            if nmax - dmax < qmin:
                raise DivisionError("quotient does not exist in Z[v^±1]")
            c, r = divmod(num[nmax], lead)
            if r:
                raise DivisionError("non-exact coefficient division")
            out[nmax - dmax] = c
            for d, co in other.coeffs.items():
                key = d + nmax - dmax
                s = num.get(key, 0) - c * co
                if s:
                    num[key] = s
                else:
                    num.pop(key, None)
        return VLaurent(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, VLaurent) and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.coeffs.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d]
            if d == 0:
                parts.append(f"{c}")
            else:
                vp = "v" if d == 1 else f"v^{d}"
                if c == 1:
                    parts.append(vp)
                elif c == -1:
                    parts.append(f"-{vp}")
                else:
                    parts.append(f"{c}*{vp}")
        s = " + ".join(parts)
        return s.replace("+ -", "- ")

    __repr__ = __str__


_TERM_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<coef>\d+)?\s*\*?\s*(?P<v>v(\^(?P<exp>-?\d+))?)?\s*$")


def parse_vlaurent(text: str) -> VLaurent:
    """Parse strings like '1 + 2*v^2 - v^-1'."""
    text = text.strip()
    if text in ("0", ""):
        return VLaurent(0)
    text = text.replace("^-", "^~").replace("-", "+-").replace("^~", "^-")
    out: dict[int, int] = {}
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        m = _TERM_RE.match(chunk)
        if not m or (m.group("coef") is None and m.group("v") is None):
            raise QalgError(f"cannot parse v-polynomial term {chunk!r}")
        c = int(m.group("coef")) if m.group("coef") else 1
        if m.group("sign") == "-":
            c = -c
        if m.group("v"):
            d = int(m.group("exp")) if m.group("exp") is not None else 1
        else:
            d = 0
        out[d] = out.get(d, 0) + c
    return VLaurent(out)


ONE = VLaurent(1)

# ---------------------------------------------------------------------------
# Exponent vectors and the skew form
# ---------------------------------------------------------------------------

ExponentVector = tuple  # integer tuples of fixed length m


def vec_add(a: ExponentVector, b: ExponentVector) -> ExponentVector:
    return tuple(x + y for x, y in zip(a, b))


def vec_neg(a: ExponentVector) -> ExponentVector:
    return tuple(-x for x in a)


def vec_scale(a: ExponentVector, k: int) -> ExponentVector:
    return tuple(k * x for x in a)


def unit_vector(m: int, i: int, value: int = 1) -> ExponentVector:
    return tuple(value if j == i else 0 for j in range(m))


class SkewForm:
    """Integer skew-symmetric bilinear form on Z^m."""

    __slots__ = ("matrix", "m")

    def __init__(self, matrix: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        m = len(rows)
        if any(len(r) != m for r in rows):
            raise QalgError("skew form matrix must be square")
        for i in range(m):
            for j in range(m):
                if rows[i][j] != -rows[j][i]:
                    raise QalgError("matrix is not skew-symmetric")
        self.matrix = rows
        self.m = m

    def eval(self, a: ExponentVector, b: ExponentVector) -> int:
        total = 0
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self.matrix[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
        return total

    def __eq__(self, other) -> bool:
        return isinstance(other, SkewForm) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"SkewForm({self.matrix})"


# ---------------------------------------------------------------------------
# Quantum torus elements
# ---------------------------------------------------------------------------

class QTorusElement:
    """Z[v^&pm;1]-combination of torus monomials X^a under a fixed skew form."""

    __slots__ = ("form", "terms", "_hash")

    def __init__(self, form: SkewForm, terms: Mapping[ExponentVector, VLaurent] | None = None):
        self.form = form
        tt = {}
        if terms:
            for a, c in terms.items():
                if not c.is_zero():
                    tt[tuple(a)] = c
        self.terms = tt
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(form: SkewForm) -> "QTorusElement":
        return QTorusElement(form)

    @staticmethod
    def monomial(form: SkewForm, exps: ExponentVector, coeff: VLaurent = ONE) -> "QTorusElement":
        return QTorusElement(form, {tuple(exps): coeff})

    @staticmethod
    def one(form: SkewForm) -> "QTorusElement":
        return QTorusElement.monomial(form, (0,) * form.m)

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def _require_same_form(self, other: "QTorusElement"):
        if self.form is not other.form and self.form != other.form:
            raise QalgError("operands live over different skew forms")

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "QTorusElement") -> "QTorusElement":
        self._require_same_form(other)
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a, VLaurent(0)) + c
            if s.is_zero():
                out.pop(a, None)
            else:
                out[a] = s
        return QTorusElement(self.form, out)

    def __neg__(self) -> "QTorusElement":
        return QTorusElement(self.form, {a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "QTorusElement") -> "QTorusElement":
        return self + (-other)

    def __mul__(self, other: "QTorusElement") -> "QTorusElement":
        self._require_same_form(other)
        form = self.form
        out: dict[ExponentVector, VLaurent] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = vec_add(a, b)
                c = (ca * cb).vshift(form.eval(a, b))
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return QTorusElement(form, out)

    def scale(self, c: VLaurent) -> "QTorusElement":
        return QTorusElement(self.form, {a: ca * c for a, ca in self.terms.items()})

    def vshift(self, k: int) -> "QTorusElement":
        return QTorusElement(self.form, {a: ca.vshift(k) for a, ca in self.terms.items()})

    def pow(self, n: int) -> "QTorusElement":
        if n < 0:
            raise QalgError("negative powers only exist for monomials")
        out = QTorusElement.one(self.form)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def monomial_inverse(self) -> "QTorusElement":
        if len(self.terms) != 1:
            raise QalgError("only monomials are invertible in the torus")
        (a, c), = self.terms.items()
        if len(c.coeffs) != 1:
            raise QalgError("coefficient is not a unit")
        (d, u), = c.coeffs.items()
        if u not in (1, -1):
            raise QalgError("coefficient is not a unit")
        # X^a * X^-a = X^0 exactly since L(a,-a)=0
        return QTorusElement.monomial(self.form, vec_neg(a), VLaurent({-d: u}))

    # -- queries ---------------------------------------------------------

    def specialize_v1(self) -> "CLaurent":
        return CLaurent({a: c.at_one() for a, c in self.terms.items()})

    def is_positive(self) -> bool:
        return all(c.is_nonnegative() for c in self.terms.values())

    def min_exponents(self) -> ExponentVector:
        if not self.terms:
            raise QalgError("zero element has no exponent bound")
        cols = zip(*self.terms.keys())
        return tuple(min(col) for col in cols)

    def denominator_vector(self) -> ExponentVector:
        """Componentwise max(0, -min exponent): the monomial denominator."""
        return tuple(max(0, -x) for x in self.min_exponents())

    def bar_invariant_after_recentering(self) -> bool:
        """Diagnostic: is every coefficient fixed by v -> v^-1 after the
        shift by the term's self-pairing?  (Self-pairing of X^a is 0 for a
        skew form, so this is plain bar-invariance of each coefficient.)"""
        return all(c == c.bar() for c in self.terms.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QTorusElement)
            and self.form == other.form
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items(), key=lambda t: t[0])))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for a in sorted(self.terms):
            c = self.terms[a]
            exp = ",".join(str(x) for x in a)
            parts.append(f"({c}) * X^[{exp}]")
        return " + ".join(parts)

    __repr__ = __str__


def parse_torus_element(form: SkewForm, text: str) -> QTorusElement:
    """Inverse of str(): '(1 + v^2) * X^[-1,1,0] + (1) * X^[0,0,1]'."""
    text = text.strip()
    if text == "0":
        return QTorusElement.zero(form)
    out: dict[ExponentVector, VLaurent] = {}
    for part in re.split(r"\+\s*(?=\()", text):
        m = re.match(r"^\s*\((?P<coef>[^)]*)\)\s*\*\s*X\^\[(?P<exp>[^\]]*)\]\s*$", part)
        if not m:
            raise QalgError(f"cannot parse torus term {part!r}")
        exps = tuple(int(x) for x in m.group("exp").split(","))
        if len(exps) != form.m:
            raise QalgError("exponent vector has wrong length")
        c = parse_vlaurent(m.group("coef"))
        if exps in out:
            c = out[exps] + c
        out[exps] = c
    return QTorusElement(form, out)


# ---------------------------------------------------------------------------
# Exact division
# ---------------------------------------------------------------------------

def divide_exact(num: QTorusElement, den: QTorusElement, max_steps: int | None = None) -> QTorusElement:
    """Right quotient Q with Q * den == num, when it exists.

    Works greedily on lex-leading exponents; each step is forced, so the
    algorithm succeeds whenever an exact quotient exists and raises
    DivisionError otherwise.
    """
    num._require_same_form(den)
    if den.is_zero():
        raise DivisionError("division by zero element")
    if num.is_zero():
        return QTorusElement.zero(num.form)
    form = num.form
    d_lead = max(den.terms)
    d_coeff = den.terms[d_lead]
    if max_steps is None:
        max_steps = 64 * (len(num.terms) + len(den.terms)) + 1024
    rem = num
    quot: dict[ExponentVector, VLaurent] = {}
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > max_steps:
            raise DivisionError("division does not terminate: non-monomial denominator?")
        n_lead = max(rem.terms)
        q_exp = tuple(x - y for x, y in zip(n_lead, d_lead))
        twist = form.eval(q_exp, d_lead)
        q_coeff = rem.terms[n_lead].divide_exact(d_coeff.vshift(twist))
        quot[q_exp] = q_coeff
        rem = rem - QTorusElement.monomial(form, q_exp, q_coeff) * den
        if not rem.is_zero() and max(rem.terms) >= n_lead:
            raise DivisionError("leading term did not drop; quotient does not exist")
    return QTorusElement(form, quot)


# ---------------------------------------------------------------------------
# Commutative Laurent polynomials (v = 1 image and the classical engine)
# ---------------------------------------------------------------------------

class CLaurent:
    """Commutative Laurent polynomial: exponent vector -> integer."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[ExponentVector, int] | None = None):
        self.terms = {tuple(a): c for a, c in (terms or {}).items() if c}
        self._hash = None

    @staticmethod
    def monomial(exps: ExponentVector, c: int = 1) -> "CLaurent":
        return CLaurent({tuple(exps): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "CLaurent") -> "CLaurent":
        out = dict(self.terms)
        for a, c in other.terms.items():
            s = out.get(a, 0) + c
            if s:
                out[a] = s
            else:
                out.pop(a, None)
        return CLaurent(out)

    def __neg__(self) -> "CLaurent":
        return CLaurent({a: -c for a, c in self.terms.items()})

    def __sub__(self, other: "CLaurent") -> "CLaurent":
        return self + (-other)

    def __mul__(self, other: "CLaurent") -> "CLaurent":
        out: dict[ExponentVector, int] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                key = vec_add(a, b)
                s = out.get(key, 0) + ca * cb
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return CLaurent(out)

    def divide_exact(self, other: "CLaurent", max_steps: int | None = None) -> "CLaurent":
        if other.is_zero():
            raise DivisionError("division by zero")
        if self.is_zero():
            return CLaurent()
        d_lead = max(other.terms)
        d_c = other.terms[d_lead]
        rem = self
        quot: dict[ExponentVector, int] = {}
        if max_steps is None:
            max_steps = 64 * (len(self.terms) + len(other.terms)) + 1024
        steps = 0
        while not rem.is_zero():
            steps += 1
            if steps > max_steps:
                raise DivisionError("division does not terminate")
            n_lead = max(rem.terms)
            c, r = divmod(rem.terms[n_lead], d_c)
            if r:
                raise DivisionError("non-exact coefficient division")
            q_exp = tuple(x - y for x, y in zip(n_lead, d_lead))
            quot[q_exp] = c
            rem = rem - CLaurent.monomial(q_exp, c) * other
            if not rem.is_zero() and max(rem.terms) >= n_lead:
                raise DivisionError("quotient does not exist")
        return CLaurent(quot)

    def __eq__(self, other) -> bool:
        return isinstance(other, CLaurent) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for a in sorted(self.terms):
            exp = ",".join(str(x) for x in a)
            parts.append(f"{self.terms[a]} * x^[{exp}]")
        return " + ".join(parts)

    __repr__ = __str__


# -- module-level operation aliases matching the public surface ------------

def vlaurent_mul(a: VLaurent, b: VLaurent) -> VLaurent:
    return a * b


def torus_mul(x: QTorusElement, y: QTorusElement) -> QTorusElement:
    return x * y


def torus_add(x: QTorusElement, y: QTorusElement) -> QTorusElement:
    return x + y


def specialize_v1(x: QTorusElement) -> CLaurent:
    return x.specialize_v1()


def is_positive(x: QTorusElement) -> bool:
    return x.is_positive()
