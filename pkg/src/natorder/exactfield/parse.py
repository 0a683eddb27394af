"""Text round trip for tower elements.

Expressions use the generator names of the tower, integer literals and the
operators ``+ - * / **`` (``^`` is accepted as a synonym for ``**``). The
printer emits a flat sum of rational multiples of monomials, so
``parse_element(K, format_element(x)) == x`` always holds.
"""

from __future__ import annotations

import ast
from fractions import Fraction

from .field import QQ, FieldElement, _monomials


class ParseError(ValueError):
    pass


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
}


def parse_element(field, text: str):
    """Parse ``text`` as an element of ``field``."""
    if not isinstance(text, str):
        raise ParseError(f"expected text, got {type(text).__name__}")
    src = text.replace("^", "**").strip()
    if not src:
        raise ParseError("empty expression")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from None
    names = field.generators()
    value = _eval(tree.body, names, text)
    return field.coerce(value)


def _eval(node, names, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        raise ParseError(f"only integer literals are allowed in {text!r}")
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ParseError(f"unknown generator {node.id!r} in {text!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, names, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval(node.left, names, text)
            exp = _eval(node.right, names, text)
            if not isinstance(exp, Fraction) or exp.denominator != 1:
                raise ParseError(f"exponent must be an integer in {text!r}")
            return base ** int(exp)
        op = _BINOPS.get(type(node.op))
        if op is None:
            raise ParseError(f"unsupported operator in {text!r}")
        return op(_eval(node.left, names, text), _eval(node.right, names, text))
    raise ParseError(f"unsupported syntax in {text!r}")


def _generator_names(field):
    # innermost generator first, matching the monomial exponent order
    return [f.generator_name for f in reversed(field.chain()) if f is not QQ]


def format_element(x) -> str:
    if not isinstance(x, FieldElement):
        return _format_rational(Fraction(x))
    gens = _generator_names(x.field)
    terms = _monomials(x)
    if not terms:
        return "0"
    keys = sorted(terms, key=lambda e: tuple(reversed(e)))
    parts = []
    for exps in keys:
        coeff = terms[exps]
        mono = "*".join(
            g if e == 1 else f"{g}^{e}" for g, e in zip(gens, exps) if e
        )
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if not mono:
            body = _format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_rational(mag)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
