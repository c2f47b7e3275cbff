"""Exact models of the nilpotent Artin algebras W_1, W_2, W_3.

Each algebra is a finite-dimensional commutative E-algebra presented by a
fixed monomial basis and a dense multiplication table.  The defining ideals
are monomial apart from the binomial relations, which are oriented into
rewriting rules:

    case 1:  pi^{r_an+1} = 0, eps_i^2 = eps_i pi = 0,
             eps_1...eps_r -> (-1)^{r_an+1} L pi^{r_an}
    case 2:  additionally y(pi - y) = 0 (pi*y -> y^2), y^{r_an+1} = 0,
             pi^{r_an} -> y^{r_an} (W+1)/W,  eps_i y = 0,
             eps_1...eps_r -> (-1)^{r_an+1} L W^{-1} y^{r_an}
    case 3:  pi^{s+1} = 0, y^{t+1} = 0, pi*y -> y^2, y^t -> c pi^s
             (the W-datum is c pi^{s-t}, stored by its unit coefficient c),
             eps_1...eps_r -> (-1)^{s+1} L pi^s

Every product of two basis monomials reduces to scalar * basis monomial, so
the table is dense and exact.  Scalars are Fractions, PadicNumbers, or (in
formal mode) Laurent polynomials over Q in the symbols L and W, letting the
determinant identities be verified as polynomial identities.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import ConstructionError, DomainError
from .lambdaring import LambdaElement
from .padic import PadicNumber


class Laurent:
    """Laurent polynomial over Q in the formal symbols L and W."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        cleaned = {}
        for key, val in (terms or {}).items():
            v = Fraction(val)
            if v:
                cleaned[key] = v
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("Laurent is immutable")

    @classmethod
    def const(cls, c):
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def var_L(cls):
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def var_W(cls):
        return cls({(0, 1): Fraction(1)})

    @staticmethod
    def _coerce(x):
        if isinstance(x, Laurent):
            return x
        if isinstance(x, (int, Fraction)):
            return Laurent.const(x)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for (a, b), v in self.terms.items():
            for (c, d), w in other.terms.items():
                k = (a + c, b + d)
                out[k] = out.get(k, Fraction(0)) + v * w
        return Laurent(out)

    __rmul__ = __mul__

    def inverse(self):
        """Defined for monomials only (all the algebra construction needs)."""
        if len(self.terms) != 1:
            raise DomainError("can only invert Laurent monomials")
        (a, b), v = next(iter(self.terms.items()))
        return Laurent({(-a, -b): 1 / v})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (a, b), v in sorted(self.terms.items()):
            mono = "".join(s for s, e in (("L", a), ("W", b)) for s in
                           ([f"{s}^{e}"] if e not in (0, 1) else [s] * (e == 1)))
            bits.append(f"{v}" + ("*" + mono if mono else ""))
        return " + ".join(bits)


def _scalar_zero(s) -> bool:
    if isinstance(s, PadicNumber):
        return s.exact_zero or s.is_zero_to_precision()
    if isinstance(s, Laurent):
        return not s.terms
    return s == 0


def _scalar_inv(s):
    if isinstance(s, PadicNumber):
        return s.inverse()
    if isinstance(s, Laurent):
        return s.inverse()
    return 1 / Fraction(s)


# monomials: ("pi", a) with a >= 0 (("pi", 0) is 1), ("y", b) with b >= 1,
# ("eps", frozenset J) with J a nonempty proper-or-full subset of {1..r}


def _degree(mono) -> int:
    kind, v = mono
    return len(v) if kind == "eps" else v


class WAlgebra:
    """One of the three local algebras, with basis and multiplication table."""

    def __init__(self, case, r, r_an=None, s=None, t=None, L=0, W=None, check=True):
        self.case = case
        self.r = r
        if case in (1, 2):
            if r_an is None or r < 1 or r_an < r:
                raise ConstructionError("need r_an >= r >= 1")
            self.r_an, self.s, self.t = r_an, None, None
            self.max_degree = r_an
        elif case == 3:
            if s is None or t is None or r < 1 or not s > t >= 1:
                raise ConstructionError(
                    "case 3 needs s > t >= 1 (t = 0 degenerates the W-relation)")
            self.r_an, self.s, self.t = None, s, t
            self.max_degree = s
        else:
            raise ConstructionError(f"unknown case {case}")
        if case == 1:
            if W is not None:
                raise ConstructionError("case 1 carries no W-datum")
        else:
            if W is None or _scalar_zero(W):
                raise ConstructionError("cases 2 and 3 need a nonzero W scalar")
        if isinstance(L, Laurent) != isinstance(W, Laurent) and case != 1:
            raise ConstructionError("L and W must both be formal or both concrete")
        self.L = L
        self.W = W
        self.formal = isinstance(L, Laurent)
        self.basis = self._make_basis()
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.table = self._make_table()
        if check:
            self._check_structure()

    # -- construction ---------------------------------------------------

    def _make_basis(self):
        basis = []
        if self.case == 1:
            basis += [("pi", a) for a in range(self.r_an + 1)]
        elif self.case == 2:
            basis += [("pi", a) for a in range(self.r_an)]
            basis += [("y", b) for b in range(1, self.r_an + 1)]
        else:
            basis += [("pi", a) for a in range(self.s + 1)]
            basis += [("y", b) for b in range(1, self.t)]
        indices = range(1, self.r + 1)
        for size in range(1, self.r):
            for J in itertools.combinations(indices, size):
                basis.append(("eps", frozenset(J)))
        return basis

    def _one(self):
        return Laurent.const(1) if self.formal else Fraction(1)

    def _reduce(self, a, b, J):
        """Reduce pi^a y^b eps_J to (scalar, basis monomial) or None for zero."""
        if J:
            if a or b:
                return None
            if len(J) == self.r:
                # the full eps-product rewrites into pi/y powers
                if self.case == 1:
                    sc = self.L * self._one() * (-1) ** (self.r_an + 1)
                    return None if _scalar_zero(sc) else (sc, ("pi", self.r_an))
                if self.case == 2:
                    sc = (self.L * _scalar_inv(self.W)) * (-1) ** (self.r_an + 1)
                    return None if _scalar_zero(sc) else (sc, ("y", self.r_an))
                sc = self.L * self._one() * (-1) ** (self.s + 1)
                return None if _scalar_zero(sc) else (sc, ("pi", self.s))
            return (self._one(), ("eps", J))
        if a and b:
            a, b = 0, a + b
        if b:
            if self.case == 1:
                raise DomainError("case 1 has no y")
            if self.case == 2:
                if b > self.r_an:
                    return None
                return (self._one(), ("y", b))
            if b > self.t:
                return None
            if b == self.t:
                return (self.W * self._one(), ("pi", self.s))
            return (self._one(), ("y", b))
        cap = self.r_an if self.case in (1, 2) else self.s
        if self.case == 2 and a == self.r_an:
            sc = (self.W + 1) * _scalar_inv(self.W)
            return (sc, ("y", self.r_an))
        if a > cap:
            return None
        return (self._one(), ("pi", a))

    def _mul_monomials(self, m1, m2):
        k1, v1 = m1
        k2, v2 = m2
        a = b = 0
        J = frozenset()
        for kind, val in (m1, m2):
            if kind == "pi":
                a += val
            elif kind == "y":
                b += val
            else:
                if J & val:
                    return None  # eps_i^2 = 0
                J = J | val
        return self._reduce(a, b, J)

    def _make_table(self):
        n = len(self.basis)
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                entry = self._mul_monomials(self.basis[i], self.basis[j])
                if entry is not None:
                    sc, mono = entry
                    entry = (sc, self.index[mono])
                table[i][j] = entry
                table[j][i] = entry
        return table

    def _check_structure(self):
        one = self.one()
        for x in self.basis:
            e = self.element({x: 1})
            if (e * one - e).nonzero():
                raise ConstructionError("unit failure")
        # associativity on all basis triples
        els = [self.element({m: 1}) for m in self.basis]
        for x in els:
            for y in els:
                xy = x * y
                for z in els:
                    if ((xy * z) - (x * (y * z))).nonzero():
                        raise ConstructionError("associativity failure")

    # -- element constructors --------------------------------------------

    @property
    def dimension(self):
        return len(self.basis)

    def element(self, data):
        coords = {}
        for mono, sc in data.items():
            if isinstance(mono, str):
                mono = (mono, 1) if mono in ("pi", "y") else mono
            idx = self.index[mono]
            coords[idx] = coords.get(idx, 0) + sc
        return WElement(self, coords)

    def zero(self):
        return WElement(self, {})

    def one(self):
        return self.element({("pi", 0): self._one()})

    def pi(self, power=1):
        if power == 0:
            return self.one()
        entry = self._reduce(power, 0, frozenset())
        if entry is None:
            return self.zero()
        sc, mono = entry
        return self.element({mono: sc})

    def y(self, power=1):
        if power == 0:
            return self.one()
        entry = self._reduce(0, power, frozenset())
        if entry is None:
            return self.zero()
        sc, mono = entry
        return self.element({mono: sc})

    def eps(self, *indices):
        J = frozenset(indices)
        if not J or not J <= set(range(1, self.r + 1)):
            raise DomainError("eps indices must be a nonempty subset of 1..r")
        entry = self._reduce(0, 0, J)
        if entry is None:
            return self.zero()
        sc, mono = entry
        return self.element({mono: sc})

    def eps_product(self):
        """eps_1 * ... * eps_r, already reduced."""
        return self.eps(*range(1, self.r + 1))

    def from_scalar(self, sc):
        return self.element({("pi", 0): sc})

    def from_lambda(self, h: LambdaElement, at: str = "pi"):
        """Image of a truncated power series under T -> pi, y, or pi - y.

        This is the specialization used by the cyclotomic characters; only
        coefficients up to the algebra's nilpotency degree matter.
        """
        if self.formal:
            raise DomainError("Lambda images need concrete scalars")
        if at == "pi":
            base = self.pi()
        elif at == "y":
            base = self.y()
        elif at == "pi-y":
            base = self.pi() - self.y()
        else:
            raise DomainError(f"unknown substitution target {at!r}")
        out = self.zero()
        power = self.one()
        for i in range(min(h.M, self.max_degree) + 1):
            c = h.coeff(i)
            if not (c.exact_zero or c.is_zero_to_precision()):
                out = out + power * c
            if i < self.max_degree:
                power = power * base
        return out

    def truncate_degree(self, x: "WElement", d: int) -> "WElement":
        """Drop basis monomials of degree > d (reduction mod m_W^{d+1})."""
        return WElement(self, {i: c for i, c in x.coords.items()
                               if _degree(self.basis[i]) <= d})


class WElement:
    """Element of a WAlgebra in coordinates over the monomial basis."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coords",
                           {i: c for i, c in coords.items() if not _scalar_zero(c)})

    def __setattr__(self, name, value):
        raise AttributeError("WElement is immutable")

    def coefficient(self, mono):
        if isinstance(mono, str):
            mono = (mono, 1) if mono in ("pi", "y") else mono
        return self.coords.get(self.algebra.index[mono], 0)

    def nonzero(self) -> bool:
        return bool(self.coords)

    def __add__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber, Laurent)):
            other = self.algebra.from_scalar(other)
        if not isinstance(other, WElement):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise DomainError("elements of different algebras")
        out = dict(self.coords)
        for i, c in other.coords.items():
            out[i] = out.get(i, 0) + c
        return WElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return WElement(self.algebra, {i: -c for i, c in self.coords.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber, Laurent)):
            other = self.algebra.from_scalar(other)
        if not isinstance(other, WElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber, Laurent)):
            return WElement(self.algebra,
                            {i: c * other for i, c in self.coords.items()})
        if not isinstance(other, WElement):
            return NotImplemented
        if other.algebra is not self.algebra:
            raise DomainError("elements of different algebras")
        table = self.algebra.table
        out = {}
        for i, a in self.coords.items():
            row = table[i]
            for j, b in other.coords.items():
                entry = row[j]
                if entry is None:
                    continue
                sc, k = entry
                out[k] = out.get(k, 0) + a * b * sc
        return WElement(self.algebra, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.from_scalar(
                Laurent.const(other) if self.algebra.formal else Fraction(other))
        if not isinstance(other, WElement):
            return NotImplemented
        return not (self - other).nonzero()

    def __hash__(self):
        return hash((id(self.algebra), frozenset(self.coords.items())))

    def __repr__(self):
        if not self.coords:
            return "0"
        names = []
        for i, c in sorted(self.coords.items()):
            kind, v = self.algebra.basis[i]
            if kind == "eps":
                mono = "*".join(f"eps{j}" for j in sorted(v))
            elif v == 0:
                mono = "1"
            else:
                mono = f"{kind}^{v}" if v > 1 else kind
            names.append(f"({c})*{mono}")
        return " + ".join(names)


def build_W(case, r, r_an=None, s=None, t=None, L=0, W=None, check=True) -> WAlgebra:
    """Construct one of the three algebras; see the module docstring."""
    return WAlgebra(case, r, r_an=r_an, s=s, t=t, L=L, W=W, check=check)


def det(matrix) -> WElement:
    """Leibniz-expansion determinant of a square matrix of WElements."""
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise DomainError("matrix must be square")
    if n == 0:
        raise DomainError("empty matrix")
    alg = matrix[0][0].algebra
    total = alg.zero()
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        prod = alg.one()
        for i in range(n):
            prod = prod * matrix[i][perm[i]]
        total = total + prod * sign
    return total


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- cyclotomic-character images -----------------------------------------


def epsilon_y(h: LambdaElement, alg: WAlgebra) -> WElement:
    """Image of a Lambda-adic character value under T -> y (cases 2 and 3).

    For h = epsilon_char(x) this is 1 + [(h - 1)/pi] y: the division by pi
    shifts the series one step, and multiplying by y turns pi-powers into
    y-powers through pi*y = y^2, which is exactly the T -> y substitution.
    """
    if alg.case == 1:
        raise DomainError("epsilon_y lives in cases 2 and 3")
    return alg.from_lambda(h, "y")


def epsilon_pi_minus_y(h: LambdaElement, alg: WAlgebra) -> WElement:
    """Image under T -> pi - y (cases 2 and 3)."""
    if alg.case == 1:
        raise DomainError("epsilon_pi_minus_y lives in cases 2 and 3")
    return alg.from_lambda(h, "pi-y")


def hecke_u_image(h: LambdaElement, alg: WAlgebra) -> WElement:
    """Image of U_l for l split outside p: 1 + [(eps(l) - 1)/pi] y = epsilon_y."""
    return epsilon_y(h, alg)


def hecke_t_image(h: LambdaElement, chi_l, alg: WAlgebra) -> WElement:
    """Image of T_l: 1 + chi(l) eps(l) + (chi(l) - 1) [(1 - eps(l))/pi] y."""
    if alg.case == 1:
        raise DomainError("the y-carrying image lives in cases 2 and 3")
    full = alg.from_lambda(h, "pi")
    ypart = alg.from_lambda(h, "y") - alg.one()  # (eps - 1)/pi * y
    return alg.one() + full * chi_l + ypart * (1 - chi_l)


def u_p_image(alg: WAlgebra, i: int) -> WElement:
    """Image of U_{p_i}: 1 + eps_i."""
    return alg.one() + alg.eps(i)


# -- determinant identities ----------------------------------------------


def case1_det_identity(o_matrix, l_matrix, alg: WAlgebra, n_matrix=None) -> WElement:
    """Residue of det(l_ij pi + o_ij eps_i + n_ij) - det(l) pi^r - det(o) eps_1..eps_r.

    Reduced modulo m_W^{r+1}; the contract is a zero residue.  Row index i
    carries eps_i; n_ij, when given, must lie in m_W^2.
    """
    if alg.case != 1:
        raise DomainError("case 1 identity")
    return _det_identity(o_matrix, l_matrix, alg, alg.pi(), alg.pi(alg.r),
                         n_matrix)


def case2_det_identity(o_matrix, l_matrix, alg: WAlgebra, n_matrix=None) -> WElement:
    """Residue of the (pi - y) determinant identity in case 2.

    det(l_ij (pi-y) + o_ij eps_i + n_ij) - det(l)(pi^r - y^r) - det(o) eps_1..eps_r,
    reduced mod m_W^{r+1}; uses (pi - y)^r = pi^r - y^r.
    """
    if alg.case != 2:
        raise DomainError("case 2 identity")
    lead = alg.pi(alg.r) - alg.y(alg.r)
    return _det_identity(o_matrix, l_matrix, alg, alg.pi() - alg.y(), lead,
                         n_matrix)


def case3_det_identity(o_matrix, l_matrix, alg: WAlgebra, n_matrix=None) -> WElement:
    """Residue of the y-side determinant identity in case 3 (t = r exact).

    det(l_ij y + o_ij eps_i + n_ij) - det(l) y^r - det(o) eps_1..eps_r.
    For t = r the correction module m_W*(y, eps)^r vanishes and the residue
    must be exactly zero; n_ij, when given, must lie in m_W*(y, eps).
    """
    if alg.case != 3:
        raise DomainError("case 3 identity")
    return _det_identity(o_matrix, l_matrix, alg, alg.y(), alg.y(alg.r),
                         n_matrix)


def _det_identity(o_matrix, l_matrix, alg, gen, lead_gen, n_matrix):
    r = alg.r
    if len(o_matrix) != r or len(l_matrix) != r:
        raise DomainError(f"need {r} x {r} matrices")
    rows = []
    for i in range(r):
        row = []
        eps_i = alg.eps(i + 1)
        for j in range(r):
            entry = gen * l_matrix[i][j] + eps_i * o_matrix[i][j]
            if n_matrix is not None:
                entry = entry + n_matrix[i][j]
            row.append(entry)
        rows.append(row)
    D = det(rows)
    detl = _scalar_det(l_matrix, alg)
    deto = _scalar_det(o_matrix, alg)
    rhs = lead_gen * detl + alg.eps_product() * deto
    return alg.truncate_degree(D - rhs, r)


def _scalar_det(m, alg):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        prod = alg._one() if alg.formal else Fraction(1)
        for i in range(n):
            prod = prod * m[i][perm[i]]
        total = prod * sign + total
    return total
