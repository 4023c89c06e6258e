"""Sparse multivariate polynomials over the Gaussian rationals.

A :class:`SparsePoly` is a map from exponent vectors to nonzero
:class:`~kplump.scalars.ExactScalar` coefficients, over an ordered tuple of
variable names.  Term iteration, printing, and leading-term queries use the
graded reverse lexicographic order on the declared variable order.
"""

from __future__ import annotations

import re as _re
from math import gcd as _int_gcd

from .scalars import ExactScalar, QQ, ZERO, ONE, IMAG, scalar, rational, rational_str


def grevlex_key(exps):
    """Sort key implementing grevlex: tuple comparison of the keys matches
    the monomial order (larger key = larger monomial)."""
    return (sum(exps),) + tuple(-e for e in reversed(exps))


class SparsePoly:
    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        self.terms = {}
        if terms:
            nv = len(self.vars)
            for exps, coef in terms.items() if isinstance(terms, dict) else terms:
                exps = tuple(exps)
                if len(exps) != nv:
                    raise ValueError("exponent vector length mismatch")
                coef = scalar(coef)
                if not coef.is_zero():
                    cur = self.terms.get(exps)
                    if cur is None:
                        self.terms[exps] = coef
                    else:
                        s = cur + coef
                        if s.is_zero():
                            del self.terms[exps]
                        else:
                            self.terms[exps] = s

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, vars):
        return cls(vars)

    @classmethod
    def const(cls, vars, value):
        value = scalar(value)
        p = cls(vars)
        if not value.is_zero():
            p.terms[(0,) * len(p.vars)] = value
        return p

    @classmethod
    def variable(cls, name, vars):
        vars = tuple(vars)
        idx = vars.index(name)
        exps = tuple(1 if i == idx else 0 for i in range(len(vars)))
        return cls(vars, {exps: ONE})

    @classmethod
    def monomial(cls, vars, exps, coef=ONE):
        return cls(vars, {tuple(exps): scalar(coef)})

    def copy(self):
        p = SparsePoly(self.vars)
        p.terms = dict(self.terms)
        return p

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> ExactScalar:
        if not self.terms:
            return ZERO
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        if not self.terms:
            return -1
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def joint_degree(self, names) -> int:
        """Maximum over monomials of the exponent sum on the given variables."""
        if not self.terms:
            return -1
        idx = [self.vars.index(n) for n in names]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def used_vars(self):
        used = set()
        for e in self.terms:
            for i, x in enumerate(e):
                if x:
                    used.add(self.vars[i])
        return used

    def leading_exps(self):
        if not self.terms:
            return None
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> ExactScalar:
        lm = self.leading_exps()
        return ZERO if lm is None else self.terms[lm]

    def sorted_terms(self):
        """Terms in descending grevlex order (leading term first)."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def coefficient(self, exps) -> ExactScalar:
        return self.terms.get(tuple(exps), ZERO)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def conjugate_coefficients(self) -> "SparsePoly":
        p = SparsePoly(self.vars)
        p.terms = {e: c.conjugate() for e, c in self.terms.items()}
        return p

    # -- variable context handling -------------------------------------------

    def with_vars(self, vars) -> "SparsePoly":
        """Re-express on a variable tuple that must contain every used var."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = []
        for i, v in enumerate(self.vars):
            pos.append(vars.index(v) if v in vars else None)
        out = {}
        nz = len(vars)
        for e, c in self.terms.items():
            ne = [0] * nz
            for i, x in enumerate(e):
                if x:
                    if pos[i] is None:
                        raise ValueError(f"variable {self.vars[i]} used but absent from new context")
                    ne[pos[i]] = x
            out[tuple(ne)] = c
        p = SparsePoly(vars)
        p.terms = out
        return p

    def rename(self, mapping: dict) -> "SparsePoly":
        new_vars = tuple(mapping.get(v, v) for v in self.vars)
        if len(set(new_vars)) != len(new_vars):
            raise ValueError("renaming collides variable names")
        p = SparsePoly(new_vars)
        p.terms = dict(self.terms)
        return p

    @staticmethod
    def align(a: "SparsePoly", b: "SparsePoly"):
        """Merge variable contexts (left order first, new right vars appended)."""
        if a.vars == b.vars:
            return a, b
        merged = list(a.vars) + [v for v in b.vars if v not in a.vars]
        return a.with_vars(merged), b.with_vars(merged)

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.const(self.vars, other)
        a, b = SparsePoly.align(self, other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            cur = out.get(e)
            if cur is None:
                out[e] = c
            else:
                s = cur + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
        p = SparsePoly(a.vars)
        p.terms = out
        return p

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = SparsePoly(self.vars)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def scale(self, c) -> "SparsePoly":
        c = scalar(c)
        p = SparsePoly(self.vars)
        if not c.is_zero():
            p.terms = {e: k * c for e, k in self.terms.items()}
        return p

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        a, b = SparsePoly.align(self, other)
        if not a.terms or not b.terms:
            return SparsePoly(a.vars)
        if len(a.terms) * len(b.terms) >= 4096:
            from . import fastpoly
            fast = fastpoly.try_mul(a, b)
            if fast is not None:
                return fast
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = {}
        get = out.get
        for eb, cb in b.terms.items():
            for ea, ca in a.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                cur = get(e)
                prod = ca * cb
                if cur is None:
                    out[e] = prod
                else:
                    s = cur + prod
                    if s.is_zero():
                        del out[e]
                    else:
                        out[e] = s
        p = SparsePoly(a.vars)
        p.terms = out
        return p

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = SparsePoly.const(self.vars, ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            if base_needed:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, ExactScalar)):
            other = SparsePoly.const(self.vars, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a, b = SparsePoly.align(self, other)
        return a.terms == b.terms

    def __hash__(self):
        raise TypeError("SparsePoly is not hashable")

    # -- calculus / substitution ----------------------------------------------

    def derivative(self, var: str) -> "SparsePoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                nc = c * k
                cur = out.get(ne)
                out[ne] = nc if cur is None else cur + nc
        p = SparsePoly(self.vars)
        p.terms = {e: c for e, c in out.items() if not c.is_zero()}
        return p

    def substitute(self, bindings) -> "SparsePoly":
        """Compose with polynomial (or scalar) values; unbound vars pass through.

        Exact composition: each binding value is coerced to a SparsePoly and
        the result lives on the merged variable context.
        """
        if not bindings:
            return self
        values = {}
        extra_vars = []
        for name, val in bindings.items():
            if name not in self.vars:
                continue
            if not isinstance(val, SparsePoly):
                val = SparsePoly.const((), scalar(val))
            values[name] = val
            for v in val.vars:
                if v not in extra_vars:
                    extra_vars.append(v)
        if not values:
            return self
        keep = [v for v in self.vars if v not in values]
        out_vars = tuple(keep) + tuple(v for v in extra_vars if v not in keep)
        result = SparsePoly(out_vars)
        pow_cache = {name: {0: SparsePoly.const(out_vars, ONE)} for name in values}

        def power(name, k):
            cache = pow_cache[name]
            if k in cache:
                return cache[k]
            base = values[name].with_vars(
                tuple(dict.fromkeys(tuple(values[name].vars) + out_vars))
            )
            best = max(j for j in cache if j <= k)
            acc = cache[best]
            for j in range(best, k):
                acc = acc * base
                cache[j + 1] = acc
            return cache[k]

        keep_idx = [self.vars.index(v) for v in keep]
        for e, c in self.terms.items():
            ne = [0] * len(out_vars)
            for j, i in enumerate(keep_idx):
                ne[j] = e[i]
            term = SparsePoly(out_vars)
            term.terms = {tuple(ne): c}
            for name, val in values.items():
                k = e[self.vars.index(name)]
                if k:
                    term = term * power(name, k)
            result = result + term
        return result

    def evaluate(self, point: dict) -> ExactScalar:
        """Exact evaluation; every used variable must be bound to a scalar."""
        vals = [scalar(point[v]) if v in point else None for v in self.vars]
        total = ZERO
        cache = [dict() for _ in self.vars]
        for e, c in self.terms.items():
            acc = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise ValueError(f"no value for variable {self.vars[i]}")
                    pk = cache[i].get(k)
                    if pk is None:
                        pk = vals[i] ** k
                        cache[i][k] = pk
                    acc = acc * pk
            total = total + acc
        return total

    # -- univariate views -----------------------------------------------------

    def univariate_coeffs(self, var: str):
        """Coefficients in `var` as SparsePolys in the remaining variables."""
        i = self.vars.index(var)
        rest = self.vars[:i] + self.vars[i + 1:]
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            re_ = e[:i] + e[i + 1:]
            bucket = out.setdefault(k, {})
            bucket[re_] = bucket.get(re_, ZERO) + c
        deg = max(out) if out else -1
        coeffs = []
        for k in range(deg + 1):
            p = SparsePoly(rest)
            p.terms = {e: c for e, c in out.get(k, {}).items() if not c.is_zero()}
            coeffs.append(p)
        return coeffs

    @staticmethod
    def from_univariate(coeffs, var: str, vars=None):
        """Inverse of univariate_coeffs: sum coeffs[k] * var^k."""
        if vars is None:
            rest = coeffs[0].vars if coeffs else ()
            vars = (var,) + tuple(v for v in rest if v != var)
        vars = tuple(vars)
        i = vars.index(var)
        result = SparsePoly(vars)
        for k, c in enumerate(coeffs):
            if c.is_zero():
                continue
            c = c.with_vars(tuple(v for v in vars if v != var))
            for e, coef in c.terms.items():
                ne = list(e[:i]) + [k] + list(e[i:])
                result.terms[tuple(ne)] = coef
        return result

    # -- content and normalization ---------------------------------------------

    def content(self):
        """Positive rational content (gcd of all re/im parts); 0 for zero poly."""
        if not self.terms:
            return QQ(0)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            for part in (c.re, c.im):
                if part:
                    num_gcd = _int_gcd(num_gcd, abs(int(part.numerator)))
                    d = int(part.denominator)
                    den_lcm = den_lcm * d // _int_gcd(den_lcm, d)
        return QQ(num_gcd, den_lcm)

    def primitive(self):
        """(content*unit, primitive part): coefficients integral, content 1,
        leading coefficient with positive real part (or positive imaginary
        part if purely imaginary)."""
        if not self.terms:
            return QQ(0), self
        cont = self.content()
        lead = self.terms[self.leading_exps()]
        lead = lead / ExactScalar(cont)
        if lead.re < 0 or (not lead.re and lead.im < 0):
            sign = -1
        else:
            sign = 1
        c = ExactScalar(cont * sign)
        p = SparsePoly(self.vars)
        p.terms = {e: k / c for e, k in self.terms.items()}
        return cont * sign, p

    def monic(self):
        lc = self.leading_coefficient()
        if lc.is_zero() or lc.is_one():
            return self
        return self.scale(ONE / lc)

    # -- exact division ----------------------------------------------------------

    def try_divide(self, divisor: "SparsePoly"):
        """Exact quotient self/divisor, or None if division leaves a remainder."""
        a, d = SparsePoly.align(self, divisor)
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q = SparsePoly(a.vars)
        r = a.copy()
        dl = d.leading_exps()
        dc = d.terms[dl]
        while r.terms:
            rl = r.leading_exps()
            diff = tuple(x - y for x, y in zip(rl, dl))
            if any(x < 0 for x in diff):
                return None
            coef = r.terms[rl] / dc
            q.terms[diff] = coef
            step = SparsePoly(a.vars)
            step.terms = {diff: coef}
            r = r - step * d
        return q

    # -- serialization ------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.vars, e) if k
            )
            if c.is_real():
                neg = c.re < 0
                mag = ExactScalar(-c.re) if neg else c
                if mono and mag.is_one():
                    body = mono
                else:
                    body = mag.as_str() + (f"*{mono}" if mono else "")
                sign = "-" if neg else "+"
            else:
                if not c.re:
                    neg = c.im < 0
                    mag = (-c if neg else c).as_str()
                    body = mag + (f"*{mono}" if mono else "")
                    sign = "-" if neg else "+"
                else:
                    cs = c.as_str()
                    body = f"({cs})" + (f"*{mono}" if mono else "")
                    sign = "+"
            pieces.append((sign, body))
        sign0, body0 = pieces[0]
        out = ("-" if sign0 == "-" else "") + body0
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_json_dict(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"exps": list(e), "re": rational_str(c.re), "im": rational_str(c.im)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SparsePoly":
        p = cls(tuple(data["vars"]))
        for t in data["terms"]:
            c = ExactScalar(rational(t["re"]), rational(t.get("im", "0")))
            if not c.is_zero():
                p.terms[tuple(t["exps"])] = c
        return p

    @classmethod
    def parse(cls, text: str, vars=None) -> "SparsePoly":
        return _parse_poly(text, vars)

    def __repr__(self):
        return f"SparsePoly({self.to_text()})"

    def __str__(self):
        return self.to_text()


# -- text parser ------------------------------------------------------------

_TOKEN = _re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\*\*|[-+*/^()])")


def _tokenize(text):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"cannot tokenize {text[pos:]!r}")
            break
        tok = m.group(1)
        tokens.append("^" if tok == "**" else tok)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, vars):
        self.tokens = tokens
        self.pos = 0
        self.declared = tuple(vars) if vars is not None else None
        self.seen = []

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, tok):
        got = self.take()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")

    def var_poly(self, name):
        if self.declared is not None:
            if name not in self.declared:
                raise ValueError(f"undeclared variable {name!r}")
        elif name not in self.seen:
            self.seen.append(name)
        # Build on a single-variable context; alignment merges later.
        return SparsePoly((name,), {(1,): ONE})

    def parse_expr(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        node = self.parse_term()
        if sign < 0:
            node = -node
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.parse_factor()
            if op == "*":
                node = node * rhs
            else:
                if not rhs.is_constant():
                    raise ValueError("division only by constants")
                node = node.scale(ONE / rhs.constant_value())
        return node

    def parse_factor(self):
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        tok = self.peek()
        if tok is None:
            raise ValueError("unexpected end of input")
        if tok == "(":
            self.take()
            node = self.parse_expr()
            self.expect(")")
        elif tok.isdigit():
            self.take()
            num = int(tok)
            if self.peek() == "/":
                self.take()
                den = self.take()
                if den is None or not den.isdigit():
                    raise ValueError("expected integer denominator")
                node = SparsePoly.const((), ExactScalar(QQ(num, int(den))))
            else:
                node = SparsePoly.const((), ExactScalar(num))
        elif tok == "i":
            self.take()
            node = SparsePoly.const((), IMAG)
        else:
            self.take()
            node = self.var_poly(tok)
        if self.peek() == "^":
            self.take()
            exp = self.take()
            if exp is None or not exp.isdigit():
                raise ValueError("expected integer exponent")
            node = node ** int(exp)
        return node if sign > 0 else -node


def _parse_poly(text, vars=None) -> SparsePoly:
    parser = _Parser(_tokenize(text), vars)
    node = parser.parse_expr()
    if parser.peek() is not None:
        raise ValueError(f"trailing tokens at {parser.tokens[parser.pos:]!r}")
    if vars is not None:
        return node.with_vars(tuple(vars))
    order = [v for v in parser.seen if v in node.used_vars()] or list(parser.seen)
    return node.with_vars(tuple(order)) if order else node


def poly_arith(a: SparsePoly, b: SparsePoly, op: str) -> SparsePoly:
    """Spec-facing wrapper: exact add/sub/mul with variable auto-merge."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")
