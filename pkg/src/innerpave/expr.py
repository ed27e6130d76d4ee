"""Parsing and evaluation of vector-valued function descriptions.

The accepted text format is::

    param tau = 0.01
    f(u, v) = (cos(u)*cos(v), sin(u)*cos(v), sin(v))

i.e. zero or more ``param name = value`` lines followed by one function
line.  Expressions use C-like syntax with ``+ - * / ^`` (``^`` only with an
integer literal exponent), the elementary functions sin, cos, tan, asin,
acos, atan, atan2, exp, log, sqrt, the constant ``pi``, and any declared
parameter names.

A parsed FunctionModel is immutable and supports real evaluation, the
natural interval extension, interval and real Jacobians via forward-mode
differentiation, and the mean-value (centered) form.
"""

from __future__ import annotations

import math

from . import interval as iv
from .errors import DomainError, ExprSyntaxError, ShapeError, SoundnessError
from .interval import Interval, IntervalBox, IntervalMatrix

# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_SYMBOLS = ("(", ")", ",", "+", "-", "*", "/", "^", "=")


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind  # 'num' | 'name' | symbol | 'end'
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    while k < n and text[k].isdigit():
                        k += 1
                    j = k
            tokens.append(_Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Node:
    """Expression tree node.

    kind is one of 'const', 'var', 'neg', 'add', 'sub', 'mul', 'div',
    'pow', 'call'.  For 'var', ``value`` is the input index; for 'const' the
    float value; for 'pow' the integer exponent (child in ``args[0]``); for
    'call' the function name (children in ``args``).
    """

    __slots__ = ("kind", "value", "args")

    def __init__(self, kind, value=None, args=()):
        self.kind = kind
        self.value = value
        self.args = tuple(args)

    def __repr__(self):
        return f"Node({self.kind}, {self.value!r}, {self.args!r})"


_FUNCTIONS_1 = {
    "sin": (math.sin, Interval.sin),
    "cos": (math.cos, Interval.cos),
    "tan": (math.tan, Interval.tan),
    "asin": (math.asin, Interval.asin),
    "acos": (math.acos, Interval.acos),
    "atan": (math.atan, Interval.atan),
    "exp": (math.exp, Interval.exp),
    "log": (math.log, Interval.log),
    "sqrt": (math.sqrt, Interval.sqrt),
}

_FUNCTIONS_2 = {
    "atan2": (math.atan2, iv.atan2),
}


# ---------------------------------------------------------------------------
# Parser (recursive descent)
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens, var_index, constants):
        self.toks = tokens
        self.pos = 0
        self.vars = var_index
        self.constants = constants

    def peek(self):
        return self.toks[self.pos]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok.kind != kind:
            raise ExprSyntaxError(
                f"expected {kind!r}, found {tok.text!r}", tok.line, tok.col
            )
        self.pos += 1
        return tok

    def parse_expr(self):
        node = self.parse_term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.parse_term()
            node = Node("add" if op == "+" else "sub", args=(node, rhs))
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind in ("*", "/"):
            op = self.take().kind
            rhs = self.parse_unary()
            node = Node("mul" if op == "*" else "div", args=(node, rhs))
        return node

    def parse_unary(self):
        if self.peek().kind == "-":
            self.take()
            return Node("neg", args=(self.parse_unary(),))
        if self.peek().kind == "+":
            self.take()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek().kind == "^":
            tok = self.take()
            sign = 1
            if self.peek().kind == "-":
                self.take()
                sign = -1
            etok = self.take("num")
            try:
                exponent = int(etok.text)
            except ValueError:
                raise ExprSyntaxError(
                    "exponent must be an integer literal", etok.line, etok.col
                ) from None
            return Node("pow", value=sign * exponent, args=(base,))
        return base

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Node("const", value=float(tok.text))
        if tok.kind == "(":
            self.take()
            node = self.parse_expr()
            self.take(")")
            return node
        if tok.kind == "name":
            self.take()
            name = tok.text
            if self.peek().kind == "(":
                self.take()
                args = [self.parse_expr()]
                while self.peek().kind == ",":
                    self.take()
                    args.append(self.parse_expr())
                self.take(")")
                if name in _FUNCTIONS_1:
                    if len(args) != 1:
                        raise ExprSyntaxError(
                            f"{name} takes 1 argument, got {len(args)}",
                            tok.line,
                            tok.col,
                        )
                elif name in _FUNCTIONS_2:
                    if len(args) != 2:
                        raise ExprSyntaxError(
                            f"{name} takes 2 arguments, got {len(args)}",
                            tok.line,
                            tok.col,
                        )
                else:
                    raise ExprSyntaxError(f"unknown function {name!r}", tok.line, tok.col)
                return Node("call", value=name, args=args)
            if name in self.vars:
                return Node("var", value=self.vars[name])
            if name == "pi":
                return Node("const", value="pi")
            if name in self.constants:
                return Node("const", value=float(self.constants[name]))
            raise ExprSyntaxError(f"unknown identifier {name!r}", tok.line, tok.col)
        raise ExprSyntaxError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def parse(text, params=None):
    """Parse a function description into a FunctionModel.

    ``params`` overrides or supplies values for ``param`` lines; a parameter
    referenced in an expression must be defined by one of the two.
    """
    constants = {}
    func_line = None
    func_lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("param") and (len(line) == 5 or not line[5].isalnum()):
            body = line[5:].strip()
            if "=" not in body:
                raise ExprSyntaxError("malformed param line", lineno, 1)
            name, _, value = body.partition("=")
            name = name.strip()
            if not name.isidentifier():
                raise ExprSyntaxError(f"bad parameter name {name!r}", lineno, 1)
            try:
                constants[name] = float(value.strip())
            except ValueError:
                raise ExprSyntaxError(
                    f"bad parameter value {value.strip()!r}", lineno, 1
                ) from None
            continue
        if func_line is not None:
            raise ExprSyntaxError("more than one function line", lineno, 1)
        func_line = raw
        func_lineno = lineno
    if func_line is None:
        raise ExprSyntaxError("no function line found", 1, 1)
    if params:
        constants.update({k: float(v) for k, v in params.items()})

    tokens = _tokenize(func_line)
    for t in tokens:
        t.line = func_lineno
    p = _Parser(tokens, {}, constants)
    fname = p.take("name").text
    p.take("(")
    names = [p.take("name").text]
    while p.peek().kind == ",":
        p.take()
        names.append(p.take("name").text)
    p.take(")")
    if len(set(names)) != len(names):
        tok = p.peek()
        raise ExprSyntaxError("duplicate input variable", tok.line, tok.col)
    p.take("=")
    p.take("(")
    p.vars = {nm: i for i, nm in enumerate(names)}
    outputs = [p.parse_expr()]
    while p.peek().kind == ",":
        p.take()
        outputs.append(p.parse_expr())
    p.take(")")
    p.take("end")
    return FunctionModel(fname, names, outputs, constants)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _eval_real(node, x):
    kind = node.kind
    if kind == "const":
        return math.pi if node.value == "pi" else node.value
    if kind == "var":
        return x[node.value]
    if kind == "neg":
        return -_eval_real(node.args[0], x)
    if kind == "add":
        return _eval_real(node.args[0], x) + _eval_real(node.args[1], x)
    if kind == "sub":
        return _eval_real(node.args[0], x) - _eval_real(node.args[1], x)
    if kind == "mul":
        return _eval_real(node.args[0], x) * _eval_real(node.args[1], x)
    if kind == "div":
        den = _eval_real(node.args[1], x)
        if den == 0.0:
            raise DomainError("division by zero in real evaluation")
        return _eval_real(node.args[0], x) / den
    if kind == "pow":
        return _eval_real(node.args[0], x) ** node.value
    if kind == "call":
        try:
            if node.value in _FUNCTIONS_1:
                return _FUNCTIONS_1[node.value][0](_eval_real(node.args[0], x))
            return _FUNCTIONS_2[node.value][0](
                _eval_real(node.args[0], x), _eval_real(node.args[1], x)
            )
        except ValueError as exc:
            raise DomainError(str(exc)) from None
    raise AssertionError(f"unknown node kind {kind}")


def _eval_interval(node, box):
    kind = node.kind
    if kind == "const":
        if node.value == "pi":
            return Interval.pi()
        return Interval.point(node.value)
    if kind == "var":
        return box[node.value]
    if kind == "neg":
        return -_eval_interval(node.args[0], box)
    if kind == "add":
        return _eval_interval(node.args[0], box) + _eval_interval(node.args[1], box)
    if kind == "sub":
        return _eval_interval(node.args[0], box) - _eval_interval(node.args[1], box)
    if kind == "mul":
        return _eval_interval(node.args[0], box) * _eval_interval(node.args[1], box)
    if kind == "div":
        return _eval_interval(node.args[0], box) / _eval_interval(node.args[1], box)
    if kind == "pow":
        return _eval_interval(node.args[0], box).pow_int(node.value)
    if kind == "call":
        if node.value in _FUNCTIONS_1:
            return _FUNCTIONS_1[node.value][1](_eval_interval(node.args[0], box))
        return _FUNCTIONS_2[node.value][1](
            _eval_interval(node.args[0], box), _eval_interval(node.args[1], box)
        )
    raise AssertionError(f"unknown node kind {kind}")


# Forward-mode dual evaluation.  A dual is (value, grad) with grad a list of
# m partials; both float-valued and interval-valued arithmetic share the
# same recursion via a small ops table.


class _RealOps:
    zero = 0.0
    one = 1.0

    @staticmethod
    def const(v):
        return math.pi if v == "pi" else v

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)

    @staticmethod
    def div(a, b):
        if b == 0.0:
            raise DomainError("division by zero in real evaluation")
        return a / b

    @staticmethod
    def func(name, v):
        try:
            return _FUNCTIONS_1[name][0](v)
        except ValueError as exc:
            raise DomainError(str(exc)) from None

    @staticmethod
    def sqr(v):
        return v * v

    @staticmethod
    def pow(v, n):
        return v ** n


class _IntervalOps:
    zero = Interval(0.0, 0.0)
    one = Interval(1.0, 1.0)

    @staticmethod
    def const(v):
        return Interval.pi() if v == "pi" else Interval.point(v)

    add = staticmethod(lambda a, b: a + b)
    sub = staticmethod(lambda a, b: a - b)
    mul = staticmethod(lambda a, b: a * b)
    neg = staticmethod(lambda a: -a)
    div = staticmethod(lambda a, b: a / b)

    @staticmethod
    def func(name, v):
        return _FUNCTIONS_1[name][1](v)

    @staticmethod
    def sqr(v):
        return v.sqr()

    @staticmethod
    def pow(v, n):
        return v.pow_int(n)


def _dual(node, x, m, ops):
    """Evaluate (value, partials[0..m-1]) for a node; shared float/interval."""
    kind = node.kind
    if kind == "const":
        return ops.const(node.value), [ops.zero] * m
    if kind == "var":
        grad = [ops.zero] * m
        grad[node.value] = ops.one
        return x[node.value], grad
    if kind == "neg":
        v, g = _dual(node.args[0], x, m, ops)
        return ops.neg(v), [ops.neg(gi) for gi in g]
    if kind == "add":
        va, ga = _dual(node.args[0], x, m, ops)
        vb, gb = _dual(node.args[1], x, m, ops)
        return ops.add(va, vb), [ops.add(a, b) for a, b in zip(ga, gb)]
    if kind == "sub":
        va, ga = _dual(node.args[0], x, m, ops)
        vb, gb = _dual(node.args[1], x, m, ops)
        return ops.sub(va, vb), [ops.sub(a, b) for a, b in zip(ga, gb)]
    if kind == "mul":
        va, ga = _dual(node.args[0], x, m, ops)
        vb, gb = _dual(node.args[1], x, m, ops)
        return (
            ops.mul(va, vb),
            [ops.add(ops.mul(a, vb), ops.mul(va, b)) for a, b in zip(ga, gb)],
        )
    if kind == "div":
        va, ga = _dual(node.args[0], x, m, ops)
        vb, gb = _dual(node.args[1], x, m, ops)
        val = ops.div(va, vb)
        den = ops.sqr(vb)
        return (
            val,
            [
                ops.div(ops.sub(ops.mul(a, vb), ops.mul(va, b)), den)
                for a, b in zip(ga, gb)
            ],
        )
    if kind == "pow":
        va, ga = _dual(node.args[0], x, m, ops)
        n = node.value
        if n == 0:
            return ops.const(1.0), [ops.zero] * m
        factor = ops.mul(ops.const(float(n)), ops.pow(va, n - 1))
        return ops.pow(va, n), [ops.mul(factor, a) for a in ga]
    if kind == "call":
        name = node.value
        if name in _FUNCTIONS_1:
            va, ga = _dual(node.args[0], x, m, ops)
            val = ops.func(name, va)
            der = _derivative_factor(name, va, val, ops)
            return val, [ops.mul(der, a) for a in ga]
        # atan2(y, x): d = (x dy - y dx) / (x^2 + y^2)
        vy, gy = _dual(node.args[0], x, m, ops)
        vx, gx = _dual(node.args[1], x, m, ops)
        if ops is _RealOps:
            val = math.atan2(vy, vx)
        else:
            val = iv.atan2(vy, vx)
        den = ops.add(ops.sqr(vx), ops.sqr(vy))
        return (
            val,
            [
                ops.div(ops.sub(ops.mul(vx, a), ops.mul(vy, b)), den)
                for a, b in zip(gy, gx)
            ],
        )
    raise AssertionError(f"unknown node kind {kind}")


def _derivative_factor(name, v, value, ops):
    one = ops.const(1.0)
    if name == "sin":
        return ops.func("cos", v)
    if name == "cos":
        return ops.neg(ops.func("sin", v))
    if name == "tan":
        return ops.add(one, ops.sqr(value))
    if name == "exp":
        return value
    if name == "log":
        return ops.div(one, v)
    if name == "sqrt":
        return ops.div(ops.const(0.5), value)
    if name == "asin":
        return ops.div(one, ops.func("sqrt", ops.sub(one, ops.sqr(v))))
    if name == "acos":
        return ops.neg(ops.div(one, ops.func("sqrt", ops.sub(one, ops.sqr(v)))))
    if name == "atan":
        return ops.div(one, ops.add(one, ops.sqr(v)))
    raise AssertionError(f"no derivative rule for {name}")


# ---------------------------------------------------------------------------
# Pretty printing (round-trip check support)
# ---------------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def _pp(node, names, parent_prec=0):
    kind = node.kind
    if kind == "const":
        return "pi" if node.value == "pi" else repr(node.value)
    if kind == "var":
        return names[node.value]
    if kind == "call":
        return f"{node.value}(" + ", ".join(_pp(a, names) for a in node.args) + ")"
    if kind == "neg":
        inner = _pp(node.args[0], names, _PREC["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PREC["neg"] else text
    if kind == "pow":
        base = _pp(node.args[0], names, _PREC["pow"] + 1)
        text = f"{base}^{node.value}"
        return f"({text})" if parent_prec > _PREC["pow"] else text
    sym = {"add": " + ", "sub": " - ", "mul": "*", "div": "/"}[kind]
    prec = _PREC[kind]
    left = _pp(node.args[0], names, prec)
    right = _pp(node.args[1], names, prec + 1)
    text = f"{left}{sym}{right}"
    return f"({text})" if parent_prec > prec else text


def _structurally_equal(a, b):
    return (
        a.kind == b.kind
        and a.value == b.value
        and len(a.args) == len(b.args)
        and all(_structurally_equal(x, y) for x, y in zip(a.args, b.args))
    )


# ---------------------------------------------------------------------------
# FunctionModel
# ---------------------------------------------------------------------------


class FunctionModel:
    """Parsed vector-valued function f: R^m -> R^n."""

    __slots__ = ("name", "input_names", "outputs", "constants")

    def __init__(self, name, input_names, outputs, constants=None):
        self.name = name
        self.input_names = tuple(input_names)
        self.outputs = tuple(outputs)
        self.constants = dict(constants or {})

    @property
    def m(self):
        return len(self.input_names)

    @property
    def n(self):
        return len(self.outputs)

    def pretty(self):
        args = ", ".join(self.input_names)
        body = ", ".join(_pp(o, self.input_names) for o in self.outputs)
        return f"{self.name}({args}) = ({body})"

    def structurally_equal(self, other):
        return (
            self.input_names == other.input_names
            and len(self.outputs) == len(other.outputs)
            and all(
                _structurally_equal(a, b)
                for a, b in zip(self.outputs, other.outputs)
            )
        )

    def _check_input(self, k, what):
        if k != self.m:
            raise ShapeError(f"{what} of dimension {k}, expected {self.m}")

    def eval_real(self, x):
        """Plain floating evaluation; returns a list of n floats."""
        self._check_input(len(x), "point")
        return [_eval_real(node, x) for node in self.outputs]

    def eval_natural(self, box):
        """Natural interval extension over a box."""
        self._check_input(len(box), "box")
        return IntervalBox(_eval_interval(node, box) for node in self.outputs)

    def eval_point_enclosure(self, x):
        """Rigorous enclosure of f(x) at a real point (degenerate box)."""
        return self.eval_natural(IntervalBox.point(x))

    def jacobian_interval(self, box):
        """n x m interval matrix enclosing f'(x) for every x in the box."""
        self._check_input(len(box), "box")
        m = self.m
        rows = []
        for node in self.outputs:
            _, grad = _dual(node, box.components, m, _IntervalOps)
            rows.append(grad)
        return IntervalMatrix(rows)

    def jacobian_real(self, x):
        """Point Jacobian as a list of n rows of m floats."""
        self._check_input(len(x), "point")
        m = self.m
        rows = []
        for node in self.outputs:
            _, grad = _dual(node, list(x), m, _RealOps)
            rows.append(grad)
        return rows

    def mean_value_enclosure(self, box, natural=None):
        """Centered form at mid(box) intersected with a natural extension.

        ``natural`` defaults to the natural extension over ``box`` itself;
        the paver passes the extension over the full initial domain instead.
        Both operands enclose the true range over ``box``, so an empty
        intersection can only mean broken arithmetic.
        """
        self._check_input(len(box), "box")
        if natural is None:
            natural = self.eval_natural(box)
        center = box.mid
        f_center = self.eval_point_enclosure(center)
        jac = self.jacobian_interval(box)
        spread = jac.matvec(box.translate(center))
        centered = IntervalBox(
            fc + sp for fc, sp in zip(f_center.components, spread.components)
        )
        out = centered.intersect(natural)
        if out is None:
            raise SoundnessError(
                "centered form and natural extension are disjoint; "
                f"box={box!r}"
            )
        return out
