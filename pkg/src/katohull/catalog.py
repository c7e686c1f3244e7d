"""Small test algebras used by the examples, tests and acceptance suite."""
from __future__ import annotations

import numpy as np

from .algebra import QuiverSpec, build_bound_quiver_algebra, build_structure_constant_algebra

_CACHE = {}


def _cached(key, make):
    if key not in _CACHE:
        _CACHE[key] = make()
    return _CACHE[key]


def a2(p=2):
    """Path algebra of 1 -> 2."""
    return _cached(("a2", p), lambda: build_bound_quiver_algebra(
        QuiverSpec(("1", "2"), (("a", "1", "2"),), (), p, 2), name="kA2"))


def dual_numbers(p=2):
    """k[x]/(x^2) as a one-loop quiver."""
    return _cached(("dual", p), lambda: build_bound_quiver_algebra(
        QuiverSpec(("1",), (("x", "1", "1"),), ("x*x",), p, 2), name="k[x]/(x^2)"))


def cyclic_nakayama(p=2):
    """Two-cycle 1 <-> 2 with radical square zero."""
    return _cached(("cyc", p), lambda: build_bound_quiver_algebra(
        QuiverSpec(("1", "2"), (("a", "1", "2"), ("b", "2", "1")), ("a*b", "b*a"), p, 2),
        name="cyclic Nakayama"))


def a3_linear(p=2):
    """Path algebra of 1 -> 2 -> 3 without relations."""
    return _cached(("a3", p), lambda: build_bound_quiver_algebra(
        QuiverSpec(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3")), (), p, 3), name="kA3"))


def a3_radical_square_zero(p=2):
    """1 -> 2 -> 3 with the length-two path killed."""
    return _cached(("a3r2", p), lambda: build_bound_quiver_algebra(
        QuiverSpec(("1", "2", "3"), (("a", "1", "2"), ("b", "2", "3")), ("a*b",), p, 2),
        name="kA3/rad^2"))


def semisimple(n=2, p=2):
    return _cached(("ss", n, p), lambda: build_bound_quiver_algebra(
        QuiverSpec(tuple(str(i + 1) for i in range(n)), (), (), p, 2), name=f"k^{n}"))


def dual_numbers_table(p=2):
    """k[x]/(x^2) from raw structure constants (basis 1, x)."""
    mul = np.zeros((2, 2, 2), dtype=np.int64)
    mul[0, 0, 0] = mul[0, 1, 1] = mul[1, 0, 1] = 1
    return _cached(("dual-sc", p), lambda: build_structure_constant_algebra(
        2, mul, [1, 0], p, labels=["1", "x"], name="k[x]/(x^2) table"))


def matrix_algebra(n=2, p=2):
    """Full matrix algebra M_n(k) with basis of matrix units."""
    dim = n * n
    mul = np.zeros((dim, dim, dim), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                mul[i * n + j, j * n + k, i * n + k] = 1
    unit = np.zeros(dim, dtype=np.int64)
    for i in range(n):
        unit[i * n + i] = 1
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return _cached(("mat", n, p), lambda: build_structure_constant_algebra(
        dim, mul, unit, p, labels=labels, name=f"M_{n}"))


def by_name(name, p=2):
    table = {
        "a2": a2, "dual": dual_numbers, "cyclic": cyclic_nakayama, "a3": a3_linear, "a3r2": a3_radical_square_zero,
        "semisimple": semisimple, "dual-table": dual_numbers_table, "matrix": matrix_algebra,
    }
    return table[name](p=p)
