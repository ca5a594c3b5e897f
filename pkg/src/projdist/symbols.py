"""Symbols and the append-only symbol table.

A symbol is one of four kinds: a base coordinate, a fiber coordinate, a
parameter, or a jet of a named coefficient function.  Jets are created
lazily (differentiation promotes them) and are totally ordered within a
function by (total order, x-order).

The table fixes a global precedence used by the monomial order:
coordinates come first (in declaration order), then parameters, then
jets.  Precedence is derived from declaration data only, so canonical
forms are reproducible across runs and across the order in which jets
happen to be created.
"""
from __future__ import annotations

import re
import threading

KIND_BASE = "base-coordinate"
KIND_FIBER = "fiber-coordinate"
KIND_PARAM = "parameter"
KIND_JET = "function-jet"

_COORD_KINDS = (KIND_BASE, KIND_FIBER)

_JET_NAME_RE = re.compile(r"(?P<base>[A-Za-z][A-Za-z0-9]*)_(?P<jx>x*)(?P<jy>y*)\Z")


class SymbolError(ValueError):
    """Bad symbol declaration or lookup."""


class Symbol:
    __slots__ = ("name", "kind", "order_key", "table", "func", "jet_orders")

    def __init__(self, name, kind, order_key, table, func=None, jet_orders=None):
        self.name = name
        self.kind = kind
        self.order_key = order_key
        self.table = table
        self.func = func
        self.jet_orders = jet_orders

    @property
    def is_coordinate(self):
        return self.kind in _COORD_KINDS

    def __repr__(self):
        return f"Symbol({self.name!r})"


class JetFunction:
    """A named coefficient function of one or two base coordinates.

    Its jets are symbols named ``f``, ``f_x``, ``f_xy``, ... meaning
    iterated partials in the first / second variable.
    """

    __slots__ = ("name", "index", "var_x", "var_y", "table")

    def __init__(self, name, index, var_x, var_y, table):
        self.name = name
        self.index = index
        self.var_x = var_x
        self.var_y = var_y
        self.table = table

    def jet(self, j, k):
        return self.table.jet(self, j, k)

    def __repr__(self):
        deps = self.var_x.name + ("" if self.var_y is None else "," + self.var_y.name)
        return f"JetFunction({self.name}({deps}))"


class SymbolTable:
    """Append-only registry of symbols; safe for concurrent jet promotion."""

    def __init__(self):
        self._lock = threading.RLock()
        self._symbols: dict[str, Symbol] = {}
        self._functions: dict[str, JetFunction] = {}
        self._coord_count = 0
        self._param_count = 0
        self._func_count = 0

    def _check_new_name(self, name):
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name):
            raise SymbolError(f"invalid identifier {name!r}")
        if name in self._symbols or name in self._functions:
            raise SymbolError(f"duplicate symbol name {name!r}")

    def _add(self, sym):
        self._symbols[sym.name] = sym
        return sym

    def _coordinate(self, name, kind):
        with self._lock:
            self._check_new_name(name)
            key = (0, self._coord_count, 0, 0)
            self._coord_count += 1
            return self._add(Symbol(name, kind, key, self))

    def base_coordinate(self, name):
        return self._coordinate(name, KIND_BASE)

    def fiber_coordinate(self, name):
        return self._coordinate(name, KIND_FIBER)

    def parameter(self, name):
        with self._lock:
            self._check_new_name(name)
            key = (1, self._param_count, 0, 0)
            self._param_count += 1
            return self._add(Symbol(name, KIND_PARAM, key, self))

    def jet_function(self, name, variables):
        """Declare an opaque coefficient function of the given base coordinates."""
        variables = tuple(variables)
        if not 1 <= len(variables) <= 2:
            raise SymbolError("a jet function depends on one or two base coordinates")
        for v in variables:
            if v.kind != KIND_BASE:
                raise SymbolError(f"jet function variable {v.name!r} is not a base coordinate")
        with self._lock:
            self._check_new_name(name)
            var_y = variables[1] if len(variables) == 2 else None
            func = JetFunction(name, self._func_count, variables[0], var_y, self)
            self._func_count += 1
            self._functions[name] = func
            self.jet(func, 0, 0)
            return func

    def jet(self, func, j, k):
        if j < 0 or k < 0:
            raise SymbolError("jet orders must be non-negative")
        if k > 0 and func.var_y is None:
            raise SymbolError(f"{func.name} depends only on {func.var_x.name}")
        name = func.name if j == k == 0 else f"{func.name}_{'x' * j}{'y' * k}"
        with self._lock:
            sym = self._symbols.get(name)
            if sym is not None:
                if sym.kind != KIND_JET or sym.func is not func:
                    raise SymbolError(f"name {name!r} already taken by a non-jet symbol")
                return sym
            key = (2, func.index, j + k, j)
            return self._add(Symbol(name, KIND_JET, key, self, func=func, jet_orders=(j, k)))

    def function(self, name):
        return self._functions.get(name)

    def get(self, name):
        """Look up a symbol; jet names of declared functions are created on demand."""
        sym = self._symbols.get(name)
        if sym is not None:
            return sym
        m = _JET_NAME_RE.match(name)
        if m:
            func = self._functions.get(m.group("base"))
            if func is not None:
                j, k = len(m.group("jx")), len(m.group("jy"))
                if k == 0 or func.var_y is not None:
                    return self.jet(func, j, k)
        return None

    def __contains__(self, name):
        return self.get(name) is not None
