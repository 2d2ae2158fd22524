"""The named example catalog exposed by the command line."""
from __future__ import annotations

from fractions import Fraction

from .tame import (
    BarnesDescriptor,
    BuiltinDescriptor,
    CharacterDescriptor,
    EhrhartDescriptor,
    LerchDescriptor,
    RationalDescriptor,
)

__all__ = ["CATALOG_NAMES", "catalog_descriptor", "default_members"]

CATALOG_NAMES = (
    "hurwitz",
    "eta",
    "dirichletL",
    "lerch",
    "barnes",
    "ehrhart",
    "central-binomial",
    "zeta-even",
)

# the quadratic (Legendre-symbol) character mod 7: nonprincipal, rational-valued
CHI7_QUADRATIC = (1, 1, -1, 1, -1, -1, 0)
CHI3_NONPRINCIPAL = (1, -1, 0)
CHI4_NONPRINCIPAL = (1, 0, -1, 0)


def catalog_descriptor(name: str, **params):
    """Descriptor for a catalog entry; keyword arguments override defaults."""
    if name == "hurwitz":
        return RationalDescriptor((1,), (1, -1))
    if name == "eta":
        return RationalDescriptor((1,), (1, 1))
    if name == "dirichletL":
        modulus = int(params.get("modulus", 4))
        chi = params.get("chi")
        if chi is None:
            chi = {3: CHI3_NONPRINCIPAL, 4: CHI4_NONPRINCIPAL, 7: CHI7_QUADRATIC}.get(modulus)
            if chi is None:
                raise ValueError("no default character for modulus %d; pass chi" % modulus)
        return CharacterDescriptor(modulus, tuple(chi), int(params.get("power", 1)))
    if name == "lerch":
        return LerchDescriptor(params.get("w", Fraction(1, 2)))
    if name == "barnes":
        return BarnesDescriptor(tuple(params.get("a", (1, 1))))
    if name == "ehrhart":
        return EhrhartDescriptor(
            tuple(params.get("g", (Fraction(1),))), int(params.get("p", 1)), int(params.get("d", 1))
        )
    if name in ("central-binomial", "zeta-even"):
        return BuiltinDescriptor(name)
    raise ValueError("unknown catalog entry %r" % (name,))


def default_members():
    """The whole catalog at default parameters, as (label, descriptor) pairs."""
    return [
        ("hurwitz", catalog_descriptor("hurwitz")),
        ("eta", catalog_descriptor("eta")),
        ("dirichletL-3", catalog_descriptor("dirichletL", modulus=3)),
        ("dirichletL-7", catalog_descriptor("dirichletL", modulus=7)),
        ("lerch-1/2", catalog_descriptor("lerch")),
        ("barnes-1,1", catalog_descriptor("barnes")),
        ("ehrhart", catalog_descriptor("ehrhart")),
        ("central-binomial", catalog_descriptor("central-binomial")),
        ("zeta-even", catalog_descriptor("zeta-even")),
    ]
