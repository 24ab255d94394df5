"""Small algebras shipped with the package, and constructors for them."""
from __future__ import annotations

import itertools
from fractions import Fraction
from importlib import resources

from .algebra import EffectAlgebra, QEffectAlgebra, direct_product, lattice_qd


def chain_names(n: int) -> list[str]:
    return [str(Fraction(i, n - 1)) for i in range(n)]


def lukasiewicz(n: int) -> QEffectAlgebra:
    """The chain ``{0, 1/(n-1), ..., 1}`` with ``x ⊕ x`` and ``x ⊙ x``."""
    if n < 2:
        raise ValueError("a chain needs at least two elements")
    names = chain_names(n)
    sums = [(names[i], names[j], names[i + j]) for i in range(n) for j in range(n) if i + j < n]
    base = EffectAlgebra.from_sums(names, names[0], names[-1], sums, close=False)
    return lattice_qd(base, name=f"L{n}")


def dyadic_chain(k: int) -> QEffectAlgebra:
    """The chain of multiples of ``2^-k``."""
    out = lukasiewicz(2**k + 1)
    out.name = f"D{k}"
    return out


def boolean_cube(k: int) -> QEffectAlgebra:
    """``2^k`` on bit strings, with ``q = d = identity``."""
    names = ["".join(bits) for bits in itertools.product("01", repeat=k)]
    sums = []
    for x, y in itertools.product(names, repeat=2):
        if all(not (a == b == "1") for a, b in zip(x, y)):
            sums.append((x, y, "".join("1" if "1" in (a, b) else "0" for a, b in zip(x, y))))
    base = EffectAlgebra.from_sums(names, "0" * k, "1" * k, sums, close=False)
    return lattice_qd(base, name=f"B{k}")


def product_l2_l3() -> QEffectAlgebra:
    return direct_product(lukasiewicz(2), lukasiewicz(3), name="L2xL3")


def mo2() -> QEffectAlgebra:
    """Two blocks ``{0, a, a', 1}`` and ``{0, b, b', 1}`` glued at 0 and 1.

    ``q`` sends every nonzero element to 1 and ``d`` every element below 1
    to 0; these satisfy the q-axioms here.
    """
    names = ["0", "a", "a'", "b", "b'", "1"]
    sums = [("0", x, x) for x in names] + [("a", "a'", "1"), ("b", "b'", "1")]
    q = {x: ("0" if x == "0" else "1") for x in names}
    d = {x: ("1" if x == "1" else "0") for x in names}
    return QEffectAlgebra.from_sums(names, "0", "1", sums, name="MO2", q=q, d=d)


BUNDLED = (["fig1", "fig1v"] + [f"L{n}" for n in range(2, 8)] + [f"B{k}" for k in range(1, 5)]
           + ["L2xL3", "MO2", "D1", "D2", "D3"])


def bundled_examples() -> list[str]:
    return list(BUNDLED)


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise KeyError(f"no bundled algebra {name!r}")
    return resources.files("qtense.data").joinpath(f"{name}.alg").read_text()


def load_bundled(name: str) -> EffectAlgebra:
    from .io import parse_algebra

    return parse_algebra(bundled_text(name), f"{name}.alg")


def build(name: str) -> EffectAlgebra:
    """Construct a bundled algebra in code (``fig1`` variants come from files)."""
    if name.startswith("L") and name[1:].isdigit():
        return lukasiewicz(int(name[1:]))
    if name.startswith("B") and name[1:].isdigit():
        return boolean_cube(int(name[1:]))
    if name.startswith("D") and name[1:].isdigit():
        return dyadic_chain(int(name[1:]))
    if name == "L2xL3":
        return product_l2_l3()
    if name == "MO2":
        return mo2()
    return load_bundled(name)
