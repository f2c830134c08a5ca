"""Coefficient fields written as expression strings.

Only numbers, ``pi``, the variables ``y1..yN``/``z1..zN``, the operators
``+ - * / **`` and the functions ``sin``, ``cos``, ``exp`` are accepted. The
string is parsed once into a tree of numpy closures; nothing is ``eval``-ed.
"""

from __future__ import annotations

import ast
import operator
import re
from typing import Callable

import numpy as np

from reithom.errors import ConfigError

Node = Callable[[np.ndarray, np.ndarray], np.ndarray]

_FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}
_BINARY = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_VARIABLE = re.compile(r"^([yz])([1-9]\d*)$")


def _compile(node: ast.AST, dim: int, source: str, used: set[str]) -> Node:
    if isinstance(node, ast.Expression):
        return _compile(node.body, dim, source, used)

    if isinstance(node, ast.Constant) and type(node.value) in (int, float):
        value = float(node.value)
        return lambda y, z: np.full(np.shape(y)[:-1], value)

    if isinstance(node, ast.Name):
        if node.id == "pi":
            return lambda y, z: np.full(np.shape(y)[:-1], np.pi)
        match = _VARIABLE.match(node.id)
        if not match:
            raise ConfigError(f"Unknown name '{node.id}' in coefficient '{source}'")
        slot, index = match.group(1), int(match.group(2)) - 1
        if index >= dim:
            raise ConfigError(
                f"Variable '{node.id}' exceeds the space dimension N={dim} in '{source}'"
            )
        used.add(slot)
        if slot == "y":
            return lambda y, z: y[..., index]
        return lambda y, z: z[..., index]

    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _compile(node.operand, dim, source, used)
        if isinstance(node.op, ast.USub):
            return lambda y, z: -inner(y, z)
        return inner

    if isinstance(node, ast.BinOp) and type(node.op) in _BINARY:
        op = _BINARY[type(node.op)]
        left = _compile(node.left, dim, source, used)
        right = _compile(node.right, dim, source, used)
        return lambda y, z: op(left(y, z), right(y, z))

    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ConfigError(f"Only sin, cos and exp may be called in '{source}'")
        if len(node.args) != 1 or node.keywords:
            raise ConfigError(f"{node.func.id} takes exactly one argument in '{source}'")
        fn = _FUNCTIONS[node.func.id]
        arg = _compile(node.args[0], dim, source, used)
        return lambda y, z: fn(arg(y, z))

    raise ConfigError(
        f"Unsupported syntax '{type(node).__name__}' in coefficient '{source}'"
    )


class CoefficientExpression:
    """A compiled coefficient ``a(y, z)`` over ``(..., N)`` point arrays."""

    def __init__(self, source: str, dim: int = 1):
        self.source = source
        self.dim = dim
        try:
            tree = ast.parse(source.strip(), mode="eval")
        except SyntaxError as e:
            raise ConfigError(f"Coefficient '{source}' does not parse: {e.msg}")
        used: set[str] = set()
        self._fn = _compile(tree, dim, source, used)
        self.depends_on_y = "y" in used
        self.depends_on_z = "z" in used

    def __call__(self, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return np.asarray(self._fn(np.asarray(y, float), np.asarray(z, float)), float)

    def __repr__(self) -> str:
        return f"CoefficientExpression({self.source!r}, dim={self.dim})"


def compile_coefficient(source: str, dim: int = 1) -> CoefficientExpression:
    return CoefficientExpression(source, dim)
