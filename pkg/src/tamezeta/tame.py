"""Generating-series descriptors, Laurent data at z=1, multi-power expansions.

A descriptor is a symbolic recipe for a generating series alpha(z) =
sum a_{n+1} z^n that is holomorphic in the unit disk with at most a pole at
z=1.  This module extracts the Laurent data at z=1, locates the other
singularities, chooses integer exponents that push each singularity out of
the relevant polydisk, and assembles the product-form multi-power expansion
of (-ln z)^nu * alpha(z) used by the difference-operator evaluator.

Scalar policy: rational data stays exact (Fraction, or CycloNum for roots
of unity); everything else is mpmath at an explicit precision, and callers
are expected to wrap floating computations in ``mp.workprec``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd

import mpmath
from mpmath import mp

from .cyclotomic import CycloNum, cyclotomic_poly, zeta_power
from .scalar import as_mpc, as_mpf, binomial
from .series import (
    Poly,
    RationalFn,
    TruncSeries,
    poly_divmod,
    poly_gcd,
    recenter,
    series_pow_log_factor,
)

__all__ = [
    "NotTameError",
    "RationalDescriptor",
    "CharacterDescriptor",
    "LerchDescriptor",
    "BarnesDescriptor",
    "EhrhartDescriptor",
    "BuiltinDescriptor",
    "LaurentAtOne",
    "Singularity",
    "SingularityPlan",
    "MPTerm",
    "MultiPowerExpansion",
    "coeffs",
    "laurent_at_one",
    "plan_exponents",
    "build_multipower",
    "build_shifted_multipower",
    "shifted_rational",
    "evaluate_multipower",
    "as_rational_fn",
    "alpha_exp_arg_series",
    "DEFAULT_MARGIN",
]

DEFAULT_MARGIN = Fraction(1, 20)

BUILTIN_NAMES = ("central-binomial", "zeta-even")


class NotTameError(ValueError):
    """The descriptor does not represent a tame generating series."""


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalDescriptor:
    """alpha(z) = num(z)/den(z) with rational coefficients (ascending)."""

    num: tuple
    den: tuple

    def __post_init__(self):
        object.__setattr__(self, "num", tuple(Fraction(c) for c in self.num))
        object.__setattr__(self, "den", tuple(Fraction(c) for c in self.den))
        if not any(c != 0 for c in self.den):
            raise ValueError("zero denominator")


@dataclass(frozen=True)
class CharacterDescriptor:
    """alpha(z) = (sum_i chi(i) z^(i-1)) / (1 - z^k)^q for a mod-k character."""

    modulus: int
    values: tuple
    power: int = 1

    def __post_init__(self):
        if self.modulus < 1 or len(self.values) != self.modulus:
            raise ValueError("need chi(1..k) for modulus k")
        if self.power < 1:
            raise ValueError("power must be >= 1")
        vals = []
        for v in self.values:
            if isinstance(v, float):
                v = Fraction(v)
            if not isinstance(v, (int, Fraction)):
                # complex-valued characters would need field coefficients in
                # every exact layer; only rational values are supported
                raise ValueError("character values must be rational")
            vals.append(Fraction(v))
        object.__setattr__(self, "values", tuple(vals))


@dataclass(frozen=True)
class LerchDescriptor:
    """alpha(z) = 1/(1 - w z), |w| <= 1."""

    w: object

    def __post_init__(self):
        if isinstance(self.w, float):
            object.__setattr__(self, "w", Fraction(self.w))


@dataclass(frozen=True)
class BarnesDescriptor:
    """alpha(z) = prod_i 1/(1 - z^(a_i)) for positive integers a_i."""

    a: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if not a or any(x < 1 for x in a):
            raise ValueError("a must be a nonempty tuple of positive integers")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class EhrhartDescriptor:
    """alpha(z) = (Ehr(z) - 1)/z with Ehr(z) = g(z)/(1 - z^p)^(d+1), g(0)=1."""

    g: tuple
    p: int
    d: int

    def __post_init__(self):
        g = tuple(Fraction(c) for c in self.g)
        if not g or g[0] != 1:
            raise ValueError("g must have constant term 1")
        if self.p < 1 or self.d < 0:
            raise ValueError("need p >= 1 and d >= 0")
        object.__setattr__(self, "g", g)


@dataclass(frozen=True)
class BuiltinDescriptor:
    """Named series with coefficient rule and closed-form alpha(e^u)."""

    name: str

    def __post_init__(self):
        if self.name not in BUILTIN_NAMES:
            raise ValueError("unknown builtin %r" % (self.name,))


# ---------------------------------------------------------------------------
# coefficient streams and rational reduction
# ---------------------------------------------------------------------------


def as_rational_fn(desc) -> RationalFn | None:
    """Exact rational form of the descriptor, when it has one."""
    if isinstance(desc, RationalDescriptor):
        return RationalFn(Poly(desc.num), Poly(desc.den))
    if isinstance(desc, CharacterDescriptor):
        if not all(isinstance(v, (int, Fraction)) for v in desc.values):
            return None
        num = Poly([Fraction(v) for v in desc.values])
        den_base = Poly([Fraction(1)] + [Fraction(0)] * (desc.modulus - 1) + [Fraction(-1)])
        den = Poly([Fraction(1)])
        for _ in range(desc.power):
            den = den * den_base
        return RationalFn(num, den)
    if isinstance(desc, LerchDescriptor):
        if isinstance(desc.w, (int, Fraction)):
            return RationalFn(Poly([Fraction(1)]), Poly([Fraction(1), -Fraction(desc.w)]))
        return None
    if isinstance(desc, BarnesDescriptor):
        den = Poly([Fraction(1)])
        for ai in desc.a:
            den = den * Poly([Fraction(1)] + [Fraction(0)] * (ai - 1) + [Fraction(-1)])
        return RationalFn(Poly([Fraction(1)]), den)
    if isinstance(desc, EhrhartDescriptor):
        den_base = Poly([Fraction(1)] + [Fraction(0)] * (desc.p - 1) + [Fraction(-1)])
        den = Poly([Fraction(1)])
        for _ in range(desc.d + 1):
            den = den * den_base
        num = Poly(desc.g) - den  # Ehr - 1 over the common denominator
        # alpha = (Ehr - 1)/z: numerator divisible by z
        if num.coefficient(0) != 0:
            raise AssertionError("Ehrhart numerator lost its unit constant term")
        num = Poly(num.coeffs[1:])
        return RationalFn(num, den)
    return None


def _zeta_even_coefficient(n: int, prec: int):
    """a_n for the even-zeta series: zeta(n) for even n >= 2, else 0.

    Small n uses the exact Bernoulli formula; for large n the defining sum
    zeta(n) = sum k^-n converges geometrically and needs only ~prec/n terms
    (the Bernoulli route would drag factorially large rationals around).
    """
    if n < 2 or n % 2:
        return mpmath.mpf(0)
    with mp.workprec(prec):
        if n >= 64:
            acc = mpmath.mpf(1)
            k = 2
            while True:
                term = mpmath.mpf(k) ** (-n)
                acc += term
                if term < mpmath.mpf(2) ** (-prec - 8):
                    break
                k += 1
            return acc
        from .bernoulli import bernoulli_number

        m = n // 2
        rat = (
            Fraction((-1) ** (m + 1), 2)
            * Fraction(2**n)
            / Fraction(factorial(n))
            * bernoulli_number(n)
        )
        return as_mpf(rat, prec) * mpmath.pi**n


def coeffs(desc, count: int, prec: int | None = None) -> list:
    """First ``count`` Taylor coefficients a_1..a_count of alpha at 0.

    Exact for rational-style descriptors (linear recurrence from the
    denominator); builtins use their coefficient rule, the even-zeta one at
    ``prec`` bits.
    """
    p = prec if prec is not None else mp.prec
    cached = _coeffs_cached(desc, _pow2_at_least(count), p)
    return list(cached[:count])


def _pow2_at_least(count: int) -> int:
    n = 64
    while n < count:
        n *= 2
    return n


@lru_cache(maxsize=256)
def _coeffs_cached(desc, count: int, prec: int) -> tuple:
    return tuple(_coeffs_impl(desc, count, prec))


def _coeffs_impl(desc, count: int, prec: int | None = None) -> list:
    rf = as_rational_fn(desc)
    if rf is not None:
        den = rf.den.coeffs
        if not den or den[0] == 0:
            raise NotTameError("singular at z = 0")
        num = rf.num.coeffs
        out = []
        for n in range(count):
            acc = num[n] if n < len(num) else Fraction(0)
            for j in range(1, min(n, len(den) - 1) + 1):
                if den[j] != 0:
                    acc = acc - den[j] * out[n - j]
            out.append(acc / den[0])
        return out
    if isinstance(desc, LerchDescriptor):
        p = prec if prec is not None else mp.prec
        with mp.workprec(p):
            w = as_mpc(desc.w, p)
            out, cur = [], mpmath.mpc(1)
            for _ in range(count):
                out.append(cur)
                cur = cur * w
            return out
    if isinstance(desc, BuiltinDescriptor):
        if desc.name == "central-binomial":
            return [Fraction(1, binomial(2 * n + 2, n + 1)) for n in range(count)]
        p = prec if prec is not None else mp.prec
        return [_zeta_even_coefficient(n + 1, p) for n in range(count)]
    raise TypeError("unknown descriptor %r" % (desc,))


# ---------------------------------------------------------------------------
# Laurent data at z = 1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LaurentAtOne:
    """Pole order nu, principal coefficients k_1..k_nu, and regular data.

    ``phis[m]`` is the m-th derivative of the regular part at z=1 (that is,
    m! times the Taylor coefficient), matching the exponential generating
    conventions of the Todd series.  ``kind`` is "exact" or "approx".
    """

    nu: int
    ks: tuple
    phis: tuple
    kind: str = "exact"

    def __post_init__(self):
        if self.nu < 0:
            raise ValueError("nu must be nonnegative")
        if len(self.ks) != self.nu:
            raise ValueError("need exactly nu principal coefficients")
        if self.nu > 0 and self.ks[-1] == 0:
            raise ValueError("k_nu must be nonzero")

    def principal_only(self, order: int | None = None) -> "LaurentAtOne":
        n = order if order is not None else len(self.phis) - 1
        return LaurentAtOne(self.nu, self.ks, tuple([Fraction(0)] * (n + 1)), self.kind)


def _laurent_of_rational(rf: RationalFn, order: int) -> LaurentAtOne:
    num1 = recenter(rf.num, Fraction(1))
    den1 = recenter(rf.den, Fraction(1))
    val_n = next((i for i, c in enumerate(num1.coeffs) if c != 0), None)
    val_d = next((i for i, c in enumerate(den1.coeffs) if c != 0), None)
    if val_n is None:
        return LaurentAtOne(0, (), tuple([Fraction(0)] * (order + 1)))
    nu = max(0, val_d - val_n)
    m = order + nu
    a = TruncSeries(list(num1.coeffs[val_n:]) + [Fraction(0)] * (m + 1), m, center=1)
    b = TruncSeries(list(den1.coeffs[val_d:]) + [Fraction(0)] * (m + 1), m, center=1)
    q = a / b  # alpha(1+w) = w^(-nu) * q(w) when val_d >= val_n
    shift = val_d - val_n  # actual pole order before clamping
    if shift < 0:
        # zero of order -shift at z=1: regular part only
        ks = ()
        reg = [Fraction(0)] * (-shift) + list(q.coeffs)
        phis = tuple(reg[m_] * factorial(m_) for m_ in range(order + 1))
        return LaurentAtOne(0, (), phis)
    ks = tuple(q.coeffs[shift - j] for j in range(1, shift + 1))  # k_1..k_nu
    phis = tuple(q.coeffs[shift + m_] * factorial(m_) for m_ in range(order + 1))
    return LaurentAtOne(nu, ks, phis)


def _lerch_laurent_numeric(desc: LerchDescriptor, order: int, prec: int) -> LaurentAtOne:
    with mp.workprec(prec):
        w = as_mpc(desc.w, prec)
        if abs(w) > 1 + mpmath.mpf(2) ** (-prec // 2):
            raise NotTameError("Lerch factor needs |w| <= 1")
        if w == 1:
            return LaurentAtOne(1, (mpmath.mpf(-1),), tuple([mpmath.mpf(0)] * (order + 1)), "approx")
        # 1/(1 - w(1+x)) = (1/(1-w)) * 1/(1 - wx/(1-w))
        base = 1 / (1 - w)
        ratio = w * base
        phis, cur = [], base
        for m_ in range(order + 1):
            phis.append(cur * factorial(m_))
            cur = cur * ratio
        return LaurentAtOne(0, (), tuple(phis), "approx")


def _zeta_even_regular_series(order: int, prec: int) -> list:
    """Taylor coefficients (ordinary) of the regular part at z=1."""
    with mp.workprec(prec):
        out = []
        for j in range(order + 1):
            if j % 2 == 0:
                out.append(mpmath.mpf(1) / 2)
            else:
                out.append(_zeta_even_coefficient(j + 1, prec) - mpmath.mpf(1) / 2)
        return out


def _central_binomial_alpha_series(z_series: TruncSeries, prec: int) -> TruncSeries:
    """alpha composed with a unit-constant series for z, via the closed form

        alpha(z) = 1/(4-z) + 4*arcsin(sqrt(z)/2) / (sqrt(z) (4-z)^(3/2)).

    The arcsin factor costs one order (differentiate, then integrate), so
    the result is one order shorter than the input series.
    """
    order = z_series.order
    with mp.workprec(prec):
        one = TruncSeries([mpmath.mpf(1)], order, z_series.center)
        if z_series.coeffs[0] != 1:
            raise ValueError("z-series must have constant term 1")
        sqrt_z = _series_pow_unit(z_series, mpmath.mpf(1) / 2)
        four_minus = 4 - z_series
        inv_four_minus = one / four_minus
        pow_32 = _series_pow_scalar(four_minus, mpmath.mpf(-3) / 2, prec)
        g = sqrt_z * (mpmath.mpf(1) / 2)  # sqrt(z)/2, constant 1/2
        # arcsin(g) = pi/6 + integral of g' / sqrt(1-g^2)
        one_minus_g2 = one - g * g  # constant 3/4
        inv_sqrt = _series_pow_scalar(one_minus_g2, mpmath.mpf(-1) / 2, prec)
        integrand = g.differentiate() * inv_sqrt.truncate(max(0, order - 1))
        arcsin_g = integrand.integrate(mpmath.pi / 6)
        alpha = inv_four_minus.truncate(arcsin_g.order) + 4 * arcsin_g * (one / sqrt_z).truncate(
            arcsin_g.order
        ) * pow_32.truncate(arcsin_g.order)
        return alpha


def _series_pow_unit(ts: TruncSeries, alpha) -> TruncSeries:
    """(1 + s)^alpha for a series with constant term exactly 1."""
    return _series_exp_zero(_series_log_unit(ts) * alpha)


def _series_log_unit(ts: TruncSeries) -> TruncSeries:
    """log of a series with constant term 1 (floating scalars)."""
    one = TruncSeries([1], ts.order, ts.center)
    d = ts.differentiate()
    inv = one / ts
    return (d * inv.truncate(max(0, ts.order - 1))).integrate(ts.coeffs[0] * 0)


def _series_exp_zero(ts: TruncSeries) -> TruncSeries:
    """exp of a series with zero constant term, by the ODE y' = y * t'."""
    if ts.coeffs[0] != 0:
        raise ValueError("exp needs zero constant term")
    order = ts.order
    zero = ts.coeffs[0] * 0
    y = [zero + 1] + [zero] * order
    d = ts.differentiate()
    for n in range(1, order + 1):
        acc = zero
        for k in range(n):
            if n - 1 - k <= d.order:
                acc = acc + d.coeffs[n - 1 - k] * y[k]
        y[n] = acc / n
    return TruncSeries(y, order, ts.center)


def _series_pow_scalar(ts: TruncSeries, alpha, prec: int) -> TruncSeries:
    """ts^alpha for a series with nonzero constant term (floating scalars)."""
    c0 = ts.coeffs[0]
    with mp.workprec(prec):
        unit = ts * (1 / c0)
        return _series_pow_unit(unit, alpha) * mpmath.power(c0, alpha)


def alpha_exp_arg_series(desc, order: int, prec: int) -> TruncSeries:
    """Taylor series (ordinary coefficients) of alpha(e^u) around u=0.

    Only available for builtins; this is the closed-form route that powers
    their Todd data.  For the even-zeta series the z=1 pole makes
    alpha(e^u) itself singular, so the returned series is of
    (-u)^nu*alpha(e^u), i.e. the Todd numerator tau(u).
    """
    if not isinstance(desc, BuiltinDescriptor):
        raise TypeError("closed-form exponential series only exists for builtins")
    from .bernoulli import _todd_base

    with mp.workprec(prec):
        if desc.name == "central-binomial":
            expu = TruncSeries(
                [Fraction(1, factorial(n)) for n in range(order + 2)], order + 1
            ).map(lambda c: as_mpf(c, prec))
            return _central_binomial_alpha_series(expu, prec).truncate(order)
        # zeta-even: tau(u) = T(u)/2 - u*sum_n zeta(2n) y^(2n-1) - (u/2) e^(-u),
        # with T the classical Todd base and y = e^u - 1.
        T = _todd_base(order).map(lambda c: as_mpf(c, prec))
        y = TruncSeries(
            [Fraction(0)] + [Fraction(1, factorial(n)) for n in range(1, order + 1)], order
        ).map(lambda c: as_mpf(c, prec))
        acc = T * (mpmath.mpf(1) / 2)
        ypow = y  # y^(2n-1), starting at n=1
        y2 = y * y
        n = 1
        while 2 * n - 1 <= order:
            zeta_2n = _zeta_even_coefficient(2 * n, prec)
            acc = acc - (ypow * zeta_2n).shift_mul(1)
            ypow = ypow * y2
            n += 1
        expmu = TruncSeries(
            [Fraction((-1) ** n, factorial(n)) for n in range(order + 1)], order
        ).map(lambda c: as_mpf(c, prec))
        acc = acc - expmu.shift_mul(1) * (mpmath.mpf(1) / 2)
        return acc


def laurent_at_one(desc, order: int, prec: int | None = None) -> LaurentAtOne:
    """Laurent data of alpha at z=1: nu, k_1..k_nu, phi_0..phi_order.

    Exact for rational descriptors over the rationals; builtins and
    non-rational Lerch factors produce floating data at ``prec`` bits.
    Raises :class:`NotTameError` when alpha has a singularity in the open
    unit disk or on (0, 1].
    """
    p = prec if prec is not None else mp.prec
    rf = as_rational_fn(desc)
    if rf is not None:
        _check_tame_rational(rf, p)
        return _laurent_of_rational(rf, order)
    if isinstance(desc, LerchDescriptor):
        return _lerch_laurent_numeric(desc, order, p)
    if isinstance(desc, BuiltinDescriptor):
        with mp.workprec(p):
            if desc.name == "central-binomial":
                w_series = TruncSeries(
                    [mpmath.mpf(1), mpmath.mpf(1)] + [mpmath.mpf(0)] * order,
                    order + 1,
                    center=1,
                )
                alpha1 = _central_binomial_alpha_series(w_series, p)
                phis = tuple(alpha1.coeffs[m] * factorial(m) for m in range(order + 1))
                return LaurentAtOne(0, (), phis, "approx")
            reg = _zeta_even_regular_series(order, p)
            phis = tuple(reg[m] * factorial(m) for m in range(order + 1))
            return LaurentAtOne(1, (as_mpf(Fraction(-1, 2), p),), phis, "approx")
    raise TypeError("unknown descriptor %r" % (desc,))


# ---------------------------------------------------------------------------
# singularities and exponent planning
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Singularity:
    """One singularity of alpha away from z=1."""

    value: object  # Fraction | CycloNum | mpc
    multiplicity: int
    exact: bool
    root_of_unity: tuple | None = None  # (j, d) when value = zeta_d^j
    e: int = 1  # exponent assigned by the plan


@dataclass(frozen=True)
class SingularityPlan:
    singularities: tuple
    delta: Fraction
    field_order: int = 1  # lcm of root-of-unity orders involved (1 = plain Q)

    @property
    def evec(self) -> tuple:
        return (1,) + tuple(s.e for s in self.singularities)


def _cyclotomic_factor_split(den: Poly):
    """Split den into cyclotomic part {d: multiplicity} and the rest."""
    orders = {}
    rest = den
    deg = den.degree
    bound = 2 * deg * deg + 4
    d = 1
    while d <= bound and rest.degree > 0:
        phi = Poly(cyclotomic_poly(d))
        if phi.degree <= rest.degree:
            q, r = poly_divmod(rest, phi)
            while r.is_zero():
                orders[d] = orders.get(d, 0) + 1
                rest = q
                if rest.degree < phi.degree:
                    break
                q, r = poly_divmod(rest, phi)
        d += 1
    return orders, rest


def _squarefree_decomposition(f: Poly):
    """Yun's algorithm: list of (square-free factor, multiplicity)."""
    out = []
    fp = f.derivative()
    a = poly_gcd(f, fp)
    b = poly_divmod(f, a)[0]
    c = poly_divmod(fp, a)[0]
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = poly_divmod(b, g)[0]
        c = poly_divmod(d, g)[0]
        d = c - b.derivative()
        i += 1
    return out


def _aberth_roots(f: Poly, prec: int) -> list:
    """All roots of a square-free rational polynomial, at ~prec bits."""
    n = f.degree
    with mp.workprec(2 * prec + 32):
        cs = [as_mpc(c, 2 * prec + 32) for c in f.coeffs]
        dcs = [k * cs[k] for k in range(1, n + 1)]

        def ev(coeffs, x):
            acc = mpmath.mpc(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        # start on a slightly irrational circle to avoid symmetry stalls
        radius = 1 + mpmath.mpf(1) / 3
        roots = [
            radius * mpmath.exp(2j * mpmath.pi * (k + mpmath.mpf(1) / 7) / n) for k in range(n)
        ]
        tol = mpmath.mpf(2) ** (-(2 * prec))
        for _ in range(200):
            moved = mpmath.mpf(0)
            new_roots = []
            for i, r in enumerate(roots):
                pv = ev(cs, r)
                dv = ev(dcs, r)
                if dv == 0:
                    dv = tol
                w = pv / dv
                s = mpmath.mpc(0)
                for j, rj in enumerate(roots):
                    if j != i:
                        s += 1 / (r - rj)
                denom = 1 - w * s
                step = w / denom if denom != 0 else w
                new_roots.append(r - step)
                moved = max(moved, abs(step))
            roots = new_roots
            if moved < tol:
                break
        return roots


def _rational_snap(f: Poly, roots: list, prec: int):
    """Detect exact rational roots among numeric ones; return (exact, numeric)."""
    exact = []
    remaining = f
    numeric = []
    for r in roots:
        if abs(r.imag) < mpmath.mpf(2) ** (-prec // 2):
            cand = Fraction(float(r.real)).limit_denominator(10**6)
            test = Poly([-cand, Fraction(1)])
            q, rem = poly_divmod(remaining, test)
            if rem.is_zero():
                exact.append(cand)
                remaining = q
                continue
        numeric.append(r)
    return exact, numeric


def singularities(desc, prec: int | None = None) -> list:
    """Singularities of alpha other than z=1, with tameness screening."""
    p = prec if prec is not None else mp.prec
    rf = as_rational_fn(desc)
    if rf is not None:
        return _rational_singularities(rf, p)
    if isinstance(desc, LerchDescriptor):
        with mp.workprec(p):
            w = as_mpc(desc.w, p)
            if w == 0:
                return []
            if abs(w) > 1 + mpmath.mpf(2) ** (-p // 2):
                raise NotTameError("Lerch factor needs |w| <= 1")
            if w == 1:
                return []
            q = 1 / w
            return [Singularity(value=q, multiplicity=1, exact=False)]
    if isinstance(desc, BuiltinDescriptor):
        if desc.name == "central-binomial":
            return [Singularity(value=Fraction(4), multiplicity=1, exact=True)]
        # even-zeta: poles at every nonzero integer; only z=2 sits inside the
        # unit polydisk margin, the rest stay at distance >= 2 from z=1.
        return [Singularity(value=Fraction(2), multiplicity=1, exact=True)]
    raise TypeError("unknown descriptor %r" % (desc,))


def _check_tame_rational(rf: RationalFn, prec: int) -> None:
    """Raise NotTameError when the denominator has a forbidden root."""
    _rational_singularities(rf, prec)


def _rational_singularities(rf: RationalFn, prec: int) -> list:
    den = rf.den
    if den.coefficient(0) == 0:
        raise NotTameError("pole at z = 0")
    orders, rest = _cyclotomic_factor_split(den)
    out = []
    for d, mult in sorted(orders.items()):
        if d == 1:
            continue  # pole at z=1 handled by the Laurent data
        for j in range(1, d):
            if gcd(j, d) == 1:
                out.append(
                    Singularity(
                        value=zeta_power(d, j), multiplicity=mult, exact=True, root_of_unity=(j, d)
                    )
                )
    if rest.degree > 0:
        for factor, mult in _squarefree_decomposition(rest):
            if factor.degree == 0:
                continue
            roots = _aberth_roots(factor, prec)
            exact, numeric = _rational_snap(factor, roots, prec)
            for q in exact:
                _screen_singularity(as_mpc(q, prec), prec, exact=True)
                out.append(Singularity(value=q, multiplicity=mult, exact=True))
            for r in numeric:
                _screen_singularity(r, prec, exact=False)
                out.append(Singularity(value=_round_mpc(r, prec), multiplicity=mult, exact=False))
    return out


def _round_mpc(z, prec):
    with mp.workprec(prec):
        return +mpmath.mpc(z)


def _screen_singularity(q, prec: int, exact: bool):
    with mp.workprec(prec):
        q = mpmath.mpc(q)
        tol = mpmath.mpf(2) ** (-prec // 2)
        if abs(q - 1) <= tol:
            raise NotTameError("denominator root collides with z = 1")
        if abs(q) < 1 - tol:
            raise NotTameError("singularity at %s inside the unit disk" % mpmath.nstr(q))
        if abs(q) < 1 + tol and not exact:
            raise NotTameError(
                "cannot certify unit-circle singularity %s away from roots of unity"
                % mpmath.nstr(q)
            )
        if abs(q.imag) <= tol and 0 < q.real <= 1 + tol:
            raise NotTameError("singularity at %s on (0, 1]" % mpmath.nstr(q))


def _abs_one_minus_qe(sing: Singularity, e: int, prec: int):
    with mp.workprec(prec):
        if sing.root_of_unity is not None:
            j, d = sing.root_of_unity
            theta = mpmath.pi * mpmath.mpf(e * j % d) / d
            return 2 * abs(mpmath.sin(theta))
        q = as_mpc(sing.value, prec)
        return abs(1 - q**e)


def plan_exponents(desc, delta: Fraction = DEFAULT_MARGIN, prec: int | None = None) -> SingularityPlan:
    """Choose the minimal exponent e_i per singularity with |1 - q^e| >= 1+delta.

    The per-variable expansions around 1 then have convergence radius at
    least 1+delta, so evaluation anywhere on (0,1] (and the associated
    operator series bookkeeping) sees geometric per-variable tails.
    """
    p = prec if prec is not None else mp.prec
    sings = singularities(desc, p)
    threshold = 1 + Fraction(delta)
    planned = []
    field_order = 1
    for s in sings:
        e = None
        for cand in range(1, 1_000_001):
            val = _abs_one_minus_qe(s, cand, max(p, 64))
            if val >= as_mpf(threshold, max(p, 64)):
                e = cand
                break
        if e is None:
            raise NotTameError("no admissible exponent for singularity %r" % (s,))
        planned.append(Singularity(s.value, s.multiplicity, s.exact, s.root_of_unity, e))
        if s.root_of_unity is not None:
            field_order = field_order * s.root_of_unity[1] // gcd(field_order, s.root_of_unity[1])
    return SingularityPlan(tuple(planned), Fraction(delta), field_order)


# ---------------------------------------------------------------------------
# multi-power expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MPTerm:
    """One product term: coeff * prod_j (series in (z^(e_j) - 1))."""

    coeff: object
    factors: tuple  # tuple of (e, TruncSeries with center=1)


@dataclass(frozen=True)
class MultiPowerExpansion:
    nu: int
    evec: tuple
    terms: tuple
    order: int
    delta: Fraction
    kind: str = "exact"


def _inverse_power_series(a, r: int, order: int, one_scalar) -> TruncSeries:
    """(w + (1-a))^(-r) as a series in w: requires |1-a| > 1 territory.

    Coefficients: (-1)^j C(r-1+j, j) (1-a)^(-r-j), exact over a field.
    """
    base = one_scalar / (1 - a) if not isinstance(a, CycloNum) else (1 - a).inverse()
    out = []
    cur = base**r if not isinstance(base, CycloNum) else base**r
    for j in range(order + 1):
        out.append(((-1) ** j * binomial(r - 1 + j, j)) * cur)
        cur = cur * base
    return TruncSeries(out, order, center=1)


def _pole_value_in_field(sing: Singularity, field_order: int, prec: int):
    """Pole location as an exact field element or mpc."""
    if sing.root_of_unity is not None:
        j, d = sing.root_of_unity
        value = zeta_power(field_order, j * (field_order // d))
        if value.is_rational():
            return value.to_fraction()
        return value
    if sing.exact:
        return Fraction(sing.value)
    return as_mpc(sing.value, prec)


def _laurent_coeffs_at_pole(rf: RationalFn, q, mult: int):
    """Principal coefficients c_{q,1}..c_{q,mult} of rf at a simple/multiple pole q.

    Works over whatever exact field q lives in (Fraction or CycloNum).
    """
    den = rf.den
    lin = Poly([-q, _one_like(q)])
    rest = den
    for _ in range(mult):
        quot, rem = poly_divmod(_lift_poly(rest, q), lin)
        if not rem.is_zero():
            raise AssertionError("pole multiplicity mismatch in partial fractions")
        rest = quot
    # expand num/rest around z=q to order mult-1
    num_q = recenter(_lift_poly(rf.num, q), q)
    rest_q = recenter(rest, q)
    m = mult - 1
    a = TruncSeries(list(num_q.coeffs) + [0] * (m + 1), m, center=0)
    b = TruncSeries(list(rest_q.coeffs) + [0] * (m + 1), m, center=0)
    h = a / b
    # c_{q,r} = coefficient of (z-q)^(mult-r)
    return [h.coeffs[mult - r] for r in range(1, mult + 1)]


def _one_like(x):
    if isinstance(x, CycloNum):
        return CycloNum.from_rational(x.n, 1)
    if isinstance(x, Fraction):
        return Fraction(1)
    return x * 0 + 1


def _lift_poly(p: Poly, sample) -> Poly:
    if isinstance(sample, CycloNum):
        return p.map(lambda c: c if isinstance(c, CycloNum) else CycloNum.from_rational(sample.n, Fraction(c)))
    return p


def _k_factor_poly(q, e: int):
    """k_q(z) = (z^e - q^e)/(z - q) = sum_{i<e} q^(e-1-i) z^i."""
    one = _one_like(q)
    powers = [one]
    for _ in range(e - 1):
        powers.append(powers[-1] * q)
    return Poly([powers[e - 1 - i] for i in range(e)])


def build_multipower(
    desc, plan: SingularityPlan | None = None, order: int = 64, prec: int | None = None
) -> MultiPowerExpansion:
    """Product-form multi-power expansion of (-ln z)^nu * alpha(z) around 1.

    Rational descriptors produce exact coefficients (cyclotomic ones over
    Q(zeta)); builtins and non-rational Lerch factors produce floating data.
    """
    return build_shifted_multipower(desc, 0, plan=plan, order=order, prec=prec)


def shifted_rational(rf: RationalFn, head: list, m: int) -> RationalFn:
    """(alpha - head)/z^m as an exact rational function; head = a_1..a_m."""
    if m == 0:
        return rf
    head_poly = Poly(head)
    num = rf.num - head_poly * rf.den
    cs = list(num.coeffs)
    if any(c != 0 for c in cs[:m]):
        raise AssertionError("head does not match the coefficient stream")
    return RationalFn(Poly(cs[m:]), rf.den)


def build_shifted_multipower(
    desc,
    shift: int,
    plan: SingularityPlan | None = None,
    order: int = 64,
    prec: int | None = None,
) -> MultiPowerExpansion:
    """Multi-power expansion of (-ln z)^nu * alpha_shift(z), where
    alpha_shift = (alpha - first shift coefficients)/z^shift.

    The index shift preserves the denominator (hence the singularity plan
    and nu) while moving the evaluation argument of the associated
    difference series from t to t+shift, which is what makes the operator
    route fast at small t.
    """
    p = prec if prec is not None else mp.prec
    if plan is None:
        plan = plan_exponents(desc, prec=p)
    _check_plan_radii(plan, p)
    rf = as_rational_fn(desc)
    if rf is not None:
        if shift:
            rf = shifted_rational(rf, coeffs(desc, shift), shift)
        return _build_mp_rational(rf, plan, order)
    if isinstance(desc, LerchDescriptor):
        with mp.workprec(p):
            w = as_mpc(desc.w, p)
            scale = w**shift
            mpx = _build_mp_lerch(w, plan, order, p)
            terms = tuple(MPTerm(t.coeff * scale, t.factors) for t in mpx.terms)
            return MultiPowerExpansion(mpx.nu, mpx.evec, terms, order, plan.delta, "approx")
    if isinstance(desc, BuiltinDescriptor):
        return _build_mp_builtin(desc, plan, order, p, shift)
    raise TypeError("unknown descriptor %r" % (desc,))


def _check_plan_radii(plan: SingularityPlan, prec: int) -> None:
    """Refuse plans whose per-variable expansion radius misses the margin."""
    p = max(prec, 64)
    for sing in plan.singularities:
        margin = _abs_one_minus_qe(sing, sing.e, p)
        if margin < as_mpf(1 + Fraction(plan.delta), p):
            raise NotTameError(
                "per-variable radius check failed: |1 - q^%d| = %s < 1 + %s for q near %r"
                % (sing.e, mpmath.nstr(margin, 8), plan.delta, sing.value)
            )


def _build_mp_rational(rf: RationalFn, plan: SingularityPlan, order: int) -> MultiPowerExpansion:
    laur = _laurent_of_rational(rf, 0)
    nu = laur.nu
    logfac = series_pow_log_factor(nu, order + nu)
    terms = []
    # polynomial part of the partial fraction decomposition
    g, _rem = poly_divmod(rf.num, rf.den)
    if not g.is_zero():
        g1 = recenter(g, Fraction(1))
        base = TruncSeries(list(g1.coeffs), order + nu, center=1) * logfac
        series = TruncSeries(base.shift_mul(nu).coeffs[: order + 1], order, center=1)
        terms.append(MPTerm(Fraction((-1) ** nu), ((1, series),)))
    # principal part at z=1
    if nu:
        pcoeffs = [Fraction(0)] * nu
        for r in range(1, nu + 1):
            pcoeffs[nu - r] = laur.ks[r - 1]
        base = TruncSeries(pcoeffs + [Fraction(0)] * (order + 1), order + nu, center=1) * logfac
        series = base.truncate(order)
        terms.append(MPTerm(Fraction((-1) ** nu), ((1, series),)))
    # other poles
    kind = "exact"
    field_order = plan.field_order
    for sing in plan.singularities:
        q = _pole_value_in_field(sing, field_order, mp.prec)
        exact = not isinstance(q, mpmath.mpc)
        if not exact:
            kind = "approx"
        cs = _laurent_coeffs_at_pole(rf, q, sing.multiplicity)
        e = sing.e
        qe = q**e
        one = _one_like(q)
        for r in range(1, sing.multiplicity + 1):
            c = cs[r - 1]
            if c == 0:
                continue
            # z1 factor: (-1)^nu w^nu logfac^nu k_q(1+w)^r
            kpoly = _k_factor_poly(q, e)
            kpow = Poly([one])
            for _ in range(r):
                kpow = kpow * kpoly
            k1 = recenter(kpow, one)
            z1 = TruncSeries(list(k1.coeffs) + [0] * (order + nu + 1), order + nu, center=1)
            if nu:
                z1 = z1 * _lift_series(logfac, q)
                z1 = TruncSeries(z1.shift_mul(nu).coeffs[: order + 1], order, center=1)
            else:
                z1 = z1.truncate(order)
            factors = [(1, z1)]
            inv = _inverse_power_series(qe, r, order, one)
            if e == 1:
                merged = z1 * inv
                factors = [(1, merged)]
            else:
                factors.append((e, inv))
            terms.append(MPTerm(c * Fraction((-1) ** nu), tuple(factors)))
    return MultiPowerExpansion(nu, plan.evec, tuple(terms), order, plan.delta, kind)


def _lift_series(ts: TruncSeries, sample) -> TruncSeries:
    if isinstance(sample, CycloNum):
        return ts.map(lambda c: CycloNum.from_rational(sample.n, Fraction(c)) if not isinstance(c, CycloNum) else c)
    if isinstance(sample, mpmath.mpc):
        return ts.map(lambda c: as_mpc(c))
    return ts


def _build_mp_lerch(w, plan: SingularityPlan, order: int, prec: int) -> MultiPowerExpansion:
    with mp.workprec(prec):
        if not plan.singularities:
            raise AssertionError("Lerch plan must carry its pole")
        sing = plan.singularities[0]
        q = 1 / w
        e = sing.e
        c = -q  # residue of 1/(1-wz) at z=q
        one = mpmath.mpf(1)
        kpoly = _k_factor_poly(q, e)
        k1 = recenter(kpoly, mpmath.mpc(1))
        z1 = TruncSeries(list(k1.coeffs) + [mpmath.mpc(0)] * (order + 1), order, center=1)
        inv = _inverse_power_series(q**e, 1, order, one)
        if e == 1:
            factors = ((1, z1 * inv),)
        else:
            factors = ((1, z1), (e, inv))
        return MultiPowerExpansion(0, plan.evec, (MPTerm(c, factors),), order, plan.delta, "approx")


def _build_mp_builtin(
    desc: BuiltinDescriptor, plan: SingularityPlan, order: int, prec: int, shift: int
) -> MultiPowerExpansion:
    with mp.workprec(prec):
        if desc.name == "central-binomial":
            w_series = TruncSeries(
                [mpmath.mpf(1), mpmath.mpf(1)] + [mpmath.mpf(0)] * order,
                order + 1,
                center=1,
            )
            alpha1 = _central_binomial_alpha_series(w_series, prec).truncate(order)
            if shift:
                alpha1 = _shift_series_at_one(alpha1, coeffs(desc, shift), order)
            return MultiPowerExpansion(
                0, (1,), (MPTerm(mpmath.mpf(1), ((1, alpha1),)),), order, plan.delta, "approx"
            )
        return _build_mp_zeta_even(plan, order, prec, shift)


def _shift_series_at_one(alpha1: TruncSeries, head: list, order: int) -> TruncSeries:
    """(alpha(1+w) - head(1+w)) / (1+w)^shift as a series in w."""
    m = len(head)
    head1 = recenter(Poly([as_mpc(h) for h in head]), mpmath.mpf(1))
    acc = alpha1 - TruncSeries(list(head1.coeffs) + [mpmath.mpc(0)] * (order + 1), order, center=1)
    inv = _inverse_power_series(mpmath.mpf(0), m, order, mpmath.mpf(1))
    # (w + 1)^(-m) via the same binomial helper with a = 0
    return acc * inv


def _build_mp_zeta_even(plan: SingularityPlan, order: int, prec: int, shift: int) -> MultiPowerExpansion:
    """Terms for alpha(z) = -(pi cot(pi z) - 1/z)/2, pole order 1 at z=1.

    Decomposition: k1/(z-1) + c2/(z-2) + g(z) with k1 = c2 = -1/2 and
    g(1+w) = sum_n (zeta(2n)-1) w^(2n-1), holomorphic for |w| < 2.  The z=2
    pole is pushed out with exponent e=2 via (z+2)/(z^2-4).
    """
    with mp.workprec(prec):
        e2 = plan.singularities[0].e if plan.singularities else 2
        k1 = mpmath.mpf(-1) / 2
        c2 = mpmath.mpf(-1) / 2
        nu = 1
        # regular series g(1+w): odd coefficients zeta(2n) - 1
        gcoeffs = [mpmath.mpf(0)] * (order + nu + 1)
        n = 1
        while 2 * n - 1 <= order + nu:
            gcoeffs[2 * n - 1] = _zeta_even_coefficient(2 * n, prec) - 1
            n += 1
        head = coeffs(BuiltinDescriptor("zeta-even"), shift, prec) if shift else []
        logfac = series_pow_log_factor(nu, order + nu).map(lambda c: as_mpf(c, prec))
        if shift:
            # alpha_m(1+w) = (alpha(1+w) - head(1+w)) (1+w)^(-m); split off the
            # 1/w pole exactly: k1 (1+w)^(-m) / w = k1/w + k1 ((1+w)^(-m)-1)/w
            minv = _inverse_power_series(mpmath.mpf(0), shift, order + nu + 1, mpmath.mpf(1))
            reg = TruncSeries(gcoeffs, order + nu, center=1)
            # regular part of alpha at 1 (minus the c2/(z-2) that we keep separate):
            # full regular = g + c2-part regular; here rebuild from scratch:
            c2reg = _inverse_power_series(mpmath.mpf(2), 1, order + nu, mpmath.mpf(1)) * c2
            head1 = recenter(Poly([as_mpc(h, prec) for h in head]), mpmath.mpf(1))
            head_s = TruncSeries(list(head1.coeffs) + [mpmath.mpc(0)] * (order + nu + 1), order + nu, center=1)
            combined = (reg + c2reg - head_s) * minv.truncate(order + nu)
            pole_extra = TruncSeries(list(minv.coeffs[1:]), order + nu, center=1) * k1
            regular_total = combined + pole_extra
            # subtract the (shifted) z=2 pole part to keep it as its own term
            c2_m = c2 / mpmath.mpf(2) ** shift
            c2reg_m = _inverse_power_series(mpmath.mpf(2), 1, order + nu, mpmath.mpf(1)) * c2_m
            g_series = regular_total - c2reg_m
            c2_use = c2_m
        else:
            g_series = TruncSeries(gcoeffs, order + nu, center=1)
            c2_use = c2
        terms = []
        # A: (-ln z) k1/(z-1) = -k1 * logfac
        terms.append(MPTerm(-k1, ((1, logfac.truncate(order)),)))
        # C: (-ln z) g(z) = -(w logfac) g(1+w)
        cz1 = (g_series * logfac).shift_mul(1).truncate(order)
        terms.append(MPTerm(mpmath.mpf(-1), ((1, cz1),)))
        # B: (-ln z) c2 k(z)/(z^e2 - 2^e2)
        kpoly = _k_factor_poly(mpmath.mpf(2), e2)
        k1p = recenter(kpoly, mpmath.mpf(1))
        z1 = TruncSeries(list(k1p.coeffs) + [mpmath.mpf(0)] * (order + 2), order + nu, center=1)
        z1 = (z1 * logfac).shift_mul(1).truncate(order)
        inv = _inverse_power_series(mpmath.mpf(2) ** e2, 1, order, mpmath.mpf(1))
        if e2 == 1:
            factors = ((1, z1 * inv),)
        else:
            factors = ((1, z1), (e2, inv))
        terms.append(MPTerm(-c2_use, factors))
        return MultiPowerExpansion(nu, plan.evec, tuple(terms), order, plan.delta, "approx")


def evaluate_multipower(mpx: MultiPowerExpansion, z, prec: int) -> mpmath.mpc:
    """Evaluate the expansion at lambda_e(z); truncation follows the build order."""
    with mp.workprec(prec):
        zc = as_mpc(z, prec)
        acc = mpmath.mpc(0)
        for term in mpx.terms:
            val = _embed_scalar(term.coeff, prec)
            for e, series in term.factors:
                x = zc**e - 1
                sval = mpmath.mpc(0)
                for c in reversed(series.coeffs):
                    sval = sval * x + _embed_scalar(c, prec)
                val = val * sval
            acc += val
        return acc


def _embed_scalar(c, prec: int):
    if isinstance(c, CycloNum):
        return c.embed(prec)
    return as_mpc(c, prec)
