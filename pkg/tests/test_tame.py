import random
from fractions import Fraction as F
from math import factorial

import mpmath
import pytest
from mpmath import mp

from tamezeta.catalog import catalog_descriptor, default_members
from tamezeta.scalar import agree_within, as_mpc
from tamezeta.tame import (
    BarnesDescriptor,
    BuiltinDescriptor,
    CharacterDescriptor,
    EhrhartDescriptor,
    LerchDescriptor,
    NotTameError,
    RationalDescriptor,
    build_multipower,
    build_shifted_multipower,
    coeffs,
    evaluate_multipower,
    laurent_at_one,
    plan_exponents,
    shifted_rational,
    as_rational_fn,
)

GEO = catalog_descriptor("hurwitz")
ETA = catalog_descriptor("eta")


def test_coeffs_examples():
    assert coeffs(GEO, 4) == [1, 1, 1, 1]
    assert coeffs(ETA, 4) == [1, -1, 1, -1]
    cb = BuiltinDescriptor("central-binomial")
    assert coeffs(cb, 3) == [F(1, 2), F(1, 6), F(1, 20)]


def test_coeffs_against_recurrence_families():
    assert coeffs(BarnesDescriptor((1, 1)), 5) == [1, 2, 3, 4, 5]
    # Ehrhart of the unit segment: |nP cap Z| = n+1, alpha coefficients n+2
    assert coeffs(EhrhartDescriptor((F(1),), 1, 1), 4) == [2, 3, 4, 5]
    assert coeffs(LerchDescriptor(F(1, 3)), 4) == [1, F(1, 3), F(1, 9), F(1, 27)]


def test_laurent_examples():
    lg = laurent_at_one(GEO, 6)
    assert lg.nu == 1 and lg.ks == (F(-1),)
    assert all(p == 0 for p in lg.phis)
    le = laurent_at_one(ETA, 6)
    assert le.nu == 0
    for m in range(7):
        assert le.phis[m] == F(factorial(m) * (-1) ** m, 2 ** (m + 1))
    l2 = laurent_at_one(RationalDescriptor((1,), (1, -2, 1)), 6)
    assert l2.nu == 2 and l2.ks == (F(0), F(1))
    assert all(p == 0 for p in l2.phis)


def test_laurent_reassembles_taylor_at_zero():
    # alpha_p + alpha_h around z=1 must reproduce the Taylor data at 0
    for desc in (
        GEO,
        ETA,
        BarnesDescriptor((1, 2)),
        RationalDescriptor((1, 2), (1, -2, 1)),
        catalog_descriptor("dirichletL", modulus=3),
    ):
        laur = laurent_at_one(desc, 34)
        rf = as_rational_fn(desc)
        # subtract the exact principal part and compare the regular Taylor
        from tamezeta.series import Poly, RationalFn

        principal_num = Poly()
        principal_den = Poly([F(1)])
        wpoly = Poly([F(-1), F(1)])
        for r, k in enumerate(laur.ks, start=1):
            den_r = Poly([F(1)])
            for _ in range(r):
                den_r = den_r * wpoly
            principal_num = principal_num * den_r + Poly([k]) * principal_den
            principal_den = principal_den * den_r
            # keep in lowest terms as we go
            rfp = RationalFn(principal_num, principal_den)
            principal_num, principal_den = rfp.num, rfp.den
        reg = rf + RationalFn(-1 * principal_num, principal_den)
        reg_desc = RationalDescriptor(tuple(reg.num.coeffs), tuple(reg.den.coeffs))
        stream = coeffs(reg_desc, 31)
        # Taylor of the regular part at 0 from the phi data is not direct;
        # instead verify alpha_h(1+w) expansion equals laurent phis
        lreg = laurent_at_one(reg_desc, 30)
        assert lreg.nu == 0
        assert lreg.phis[:29] == laur.phis[:29]
        # and the full stream at 0 matches the original coefficients
        orig = coeffs(desc, 31)
        principal_stream = [orig[i] - stream[i] for i in range(31)]
        # principal part stream: sum_r k_r * C(r-1+n, n) (-1)^r
        for n in range(31):
            acc = F(0)
            for r, k in enumerate(laur.ks, start=1):
                from tamezeta.scalar import binomial

                acc += k * F((-1) ** r) * binomial(r - 1 + n, n)
            assert acc == principal_stream[n]


def test_not_tame_rejections():
    with pytest.raises(NotTameError):
        laurent_at_one(RationalDescriptor((1,), (1, -2)), 4)  # pole at 1/2
    # a pole at z=2 is outside the closed unit disk and fine
    laurent_at_one(RationalDescriptor((1,), (1, F(-1, 2))), 4)


def test_not_tame_open_interval():
    # pole on (0,1): alpha = 1/(1 - 4z^2) has poles at +-1/2
    with pytest.raises(NotTameError):
        plan_exponents(RationalDescriptor((1,), (1, 0, -4)), prec=128)


def test_plan_exponents_examples():
    pe = plan_exponents(ETA, prec=128)
    assert [s.e for s in pe.singularities] == [1]  # q = -1
    p7 = plan_exponents(catalog_descriptor("dirichletL", modulus=7), prec=128)
    es = sorted(s.e for s in p7.singularities)
    assert es == [1, 1, 1, 1, 2, 2]  # e=2 exactly for the primitive angle pair
    pl = plan_exponents(LerchDescriptor(F(1, 2)), prec=128)
    assert pl.singularities[0].e == 2  # q = 4 at e=2; |1-2| = 1 fails the margin
    pc = plan_exponents(BuiltinDescriptor("central-binomial"), prec=128)
    assert pc.singularities[0].e == 1  # |1-4| = 3


def test_plan_invariant_numeric():
    threshold = 1 + F(1, 20)
    for label, desc in default_members():
        plan = plan_exponents(desc, prec=128)
        with mp.workprec(128):
            slack = mpmath.mpf(2) ** -100
            for s in plan.singularities:
                q = as_mpc(s.value if not hasattr(s.value, "embed") else s.value.embed(128), 128)
                assert abs(1 - q**s.e) >= float(threshold) - slack
                assert not (abs(q.imag) < slack and 0 < q.real <= 1)
                assert abs(q) >= 1 - slack


def test_build_multipower_examples():
    mpg = build_multipower(GEO, order=8)
    term = mpg.terms[0]
    series = term.factors[0][1]
    vals = [term.coeff * c for c in series.coeffs]
    assert vals == [F((-1) ** n, n + 1) for n in range(9)]
    mpe = build_multipower(ETA, order=8)
    vals = [mpe.terms[0].coeff * c for c in mpe.terms[0].factors[0][1].coeffs]
    assert vals == [F((-1) ** n, 2 ** (n + 1)) for n in range(9)]
    one = build_multipower(RationalDescriptor((1,), (1,)), order=4)
    assert one.nu == 0 and len(one.terms) == 1
    coeffs_ = one.terms[0].factors[0][1].coeffs
    assert coeffs_[0] * one.terms[0].coeff == 1 and all(c == 0 for c in coeffs_[1:])


def test_multipower_evaluation_matches_alpha():
    # catalog-wide: evaluation at lambda_e(z) reproduces (-ln z)^nu alpha(z)
    rng = random.Random(99)
    prec = 160
    for label, desc in default_members():
        nu = laurent_at_one(desc, 2, prec=prec).nu
        mpx = build_multipower(desc, order=220, prec=prec)
        for _ in range(6):
            z = F(rng.randint(200, 990), 1000)
            with mp.workprec(prec):
                zc = as_mpc(z, prec)
                val = evaluate_multipower(mpx, zc, prec)
                # oracle: partial sums of the coefficient stream
                n_terms = 4000
                stream = coeffs(desc, n_terms, prec=prec)
                alpha = mpmath.mpc(0)
                zn = mpmath.mpc(1)
                for a in stream:
                    alpha += as_mpc(a, prec) * zn
                    zn *= zc
                tail = abs(zn) / (1 - abs(zc)) * 4
                series_tail = abs(1 - zc) ** 220 * 40  # per-variable truncation slack
                ref = (-mpmath.log(zc)) ** nu * alpha
                tol = max(1e-20, float(tail) * 10, float(series_tail))
                assert agree_within(val, ref, tol), (label, z, val, ref)


def test_shifted_rational_exactness():
    rf = as_rational_fn(BarnesDescriptor((1, 1)))
    head = coeffs(BarnesDescriptor((1, 1)), 5)
    shifted = shifted_rational(rf, head, 5)
    # shifted stream = original shifted by 5
    sdesc = RationalDescriptor(tuple(shifted.num.coeffs), tuple(shifted.den.coeffs))
    assert coeffs(sdesc, 6) == coeffs(BarnesDescriptor((1, 1)), 11)[5:]


def test_shifted_multipower_matches_shifted_alpha():
    prec = 160
    shift = 6
    for label, desc in default_members():
        nu = laurent_at_one(desc, 2, prec=prec).nu
        mpx = build_shifted_multipower(desc, shift, order=160, prec=prec)
        with mp.workprec(prec):
            z = mpmath.mpf("0.7")
            val = evaluate_multipower(mpx, z, prec)
            stream = coeffs(desc, 3000, prec=prec)
            alpha = mpmath.mpc(0)
            zn = mpmath.mpc(1)
            for a in stream[shift:]:
                alpha += as_mpc(a, prec) * zn
                zn *= z
            ref = (-mpmath.log(z)) ** nu * alpha
            assert agree_within(val, ref, 1e-20), (label, val, ref)


def test_build_refuses_insufficient_exponent():
    from tamezeta.tame import Singularity, SingularityPlan

    desc = LerchDescriptor(F(1, 2))
    plan = plan_exponents(desc, prec=128)
    bad = SingularityPlan(
        tuple(
            Singularity(s.value, s.multiplicity, s.exact, s.root_of_unity, 1)
            for s in plan.singularities
        ),
        plan.delta,
        plan.field_order,
    )
    with pytest.raises(NotTameError):
        build_multipower(desc, plan=bad, order=8)


def test_character_descriptor_validation():
    with pytest.raises(ValueError):
        CharacterDescriptor(3, (1, -1))
    with pytest.raises(ValueError):
        EhrhartDescriptor((F(2),), 1, 1)
    with pytest.raises(ValueError):
        BuiltinDescriptor("nope")
