# -*- coding: UTF-8 -*-
"""
tractorholonomy.expressions
~~~~~~~~~~~~~~~~~~~~~~~~~~~

Small arithmetic expression language for metric components and scalar fields.

Supported: ``+ - * / ^`` (``**`` works as well), ``exp``, ``log``, ``sin``,
``cos``, ``sqrt``, ``sinh``, ``cosh``, numbers, ``pi`` and the coordinate
names of the chart. The text is parsed once with sympy and compiled into a
tree of closures that is evaluated with :class:`~tractorholonomy.jets.Jet`
arithmetic (or with plain floats). Expressions are not simplified.

:author: Wannes Meert
:copyright: Copyright 2017-2025 KU Leuven, DTAI Research Group.
:license: Apache License, Version 2.0, see LICENSE for details.

"""
import logging
from functools import reduce
from tokenize import TokenError

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations, convert_xor

from . import jets
from .jets import Jet
from .exceptions import ConfigError


logger = logging.getLogger("be.kuleuven.dtai.tractorholonomy")


_functions = {
    "exp": jets.exp,
    "log": jets.log,
    "sin": jets.sin,
    "cos": jets.cos,
    "sqrt": jets.sqrt,
    "sinh": jets.sinh,
    "cosh": jets.cosh,
}
_transformations = standard_transformations + (convert_xor,)


class Expression:
    def __init__(self, text, variables):
        """Parse an expression over the given coordinate names.

        :param text: Expression text, or a number
        :param variables: Sequence of coordinate names, in chart order
        """
        self.text = str(text).strip()
        self.variables = tuple(str(v) for v in variables)
        local_dict = {name: sympy.Symbol(name) for name in self.variables}
        for name in _functions:
            local_dict.setdefault(name, getattr(sympy, name))
        try:
            self.expr = parse_expr(self.text, local_dict=local_dict,
                                   transformations=_transformations, evaluate=False)
        except (SyntaxError, TypeError, TokenError, sympy.SympifyError) as exc:
            raise ConfigError(f"Cannot parse expression '{self.text}': {exc}") from exc
        unknown = sorted(str(s) for s in self.expr.free_symbols if str(s) not in self.variables)
        if unknown:
            raise ConfigError(f"Expression '{self.text}' uses unknown symbols: {', '.join(unknown)}")
        self._fn = self._compile(self.expr)
        self.symbols = frozenset(str(s) for s in self.expr.free_symbols)

    def _compile(self, expr):
        if expr.is_Symbol:
            idx = self.variables.index(str(expr))
            return lambda env: env[idx]
        if expr.is_Number or expr.is_NumberSymbol:
            if not expr.is_real:
                raise ConfigError(f"Complex constant in expression '{self.text}'")
            c = float(expr)
            return lambda env: c
        if expr.is_Add:
            parts = [self._compile(arg) for arg in expr.args]
            return lambda env: reduce(lambda a, b: a + b, (part(env) for part in parts))
        if expr.is_Mul:
            parts = [self._compile(arg) for arg in expr.args]
            return lambda env: reduce(lambda a, b: a * b, (part(env) for part in parts))
        if expr.is_Pow:
            base_expr, exp_expr = expr.args
            base = self._compile(base_expr)
            if exp_expr.is_Integer:
                n = int(exp_expr)
                return lambda env: base(env) ** n
            if exp_expr.is_Number:
                p = float(exp_expr)
                return lambda env: base(env) ** p
            exponent = self._compile(exp_expr)
            return lambda env: _power(base(env), exponent(env))
        if isinstance(expr, sympy.Function):
            name = expr.func.__name__
            if name in _functions and len(expr.args) == 1:
                fn = _functions[name]
                arg = self._compile(expr.args[0])
                return lambda env: fn(arg(env))
            raise ConfigError(f"Unsupported function '{name}' in expression '{self.text}'")
        raise ConfigError(f"Unsupported construct '{expr}' in expression '{self.text}'")

    @property
    def is_constant(self):
        return len(self.symbols) == 0

    def depends_on(self, name):
        return name in self.symbols

    def value(self, coords):
        """Evaluate with plain floats."""
        return float(self._fn([float(c) for c in coords]))

    def jet(self, coords, order=3):
        """Evaluate as a jet with exact derivatives up to the given order."""
        env = Jet.variables(coords, order)
        result = self._fn(env)
        if not isinstance(result, Jet):
            return Jet.constant(result, len(coords), order)
        return result

    def derivative_expression(self, name):
        """Symbolic partial derivative, returned as a new Expression."""
        return Expression(str(sympy.diff(self.expr, sympy.Symbol(name))), self.variables)

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Expression('{self.text}', {self.variables})"


def _power(base, exponent):
    if isinstance(base, Jet) or isinstance(exponent, Jet):
        if not isinstance(base, Jet):
            return exponent.__rpow__(base)
        return base ** exponent
    return np.power(base, exponent)


def wrap(text, variables):
    if isinstance(text, Expression):
        if text.variables != tuple(variables):
            return Expression(text.text, variables)
        return text
    return Expression(text, variables)
