#include "phimod/k0.hpp"
#include "phimod/linalg.hpp"
#include "phimod/matrix.hpp"

#include <doctest.h>

using namespace phimod;

TEST_CASE("3-adic arithmetic and inversion") {
    PadicNumber two = PadicNumber::from_int(2, 5);
    PadicNumber inv = two.inverse();
    CHECK(inv.valuation_int() == 0);
    CHECK(inv.unit() == 122);  // 1/2 = 122 mod 3^5
    CHECK((two * inv - PadicNumber::from_int(1, 5)).is_zero());

    PadicNumber x = PadicNumber::make(2, BigInt(5), 4);
    CHECK(x.valuation_int() == 2);
    CHECK((x + (-x)).is_zero());
    CHECK((x * x).valuation_int() == 4);

    // cancellation reduces precision instead of inventing digits
    PadicNumber a = PadicNumber::from_int(10, 4);
    PadicNumber b = PadicNumber::from_int(1, 4);
    CHECK((a - b).valuation_int() == 2);
}

TEST_CASE("Hensel lifting and rational reconstruction") {
    PadicPoly f = poly_from_integers({-7, 0, 1}, 5);  // X^2 - 7
    PadicNumber r = hensel_root(f, PadicNumber::from_int(1, 5));
    CHECK(r.canonical_integer() % 243 == 175);
    CHECK(poly_eval(f, r).is_zero());

    PadicNumber half = PadicNumber::make(0, BigInt(122), 5);
    auto q = rational_reconstruct(half, BigInt(10));
    REQUIRE(q.has_value());
    CHECK(*q == Rational(1, 2));
    // out-of-bound heights are refused rather than guessed
    PadicNumber junk = PadicNumber::make(0, BigInt(101), 5);
    CHECK(!rational_reconstruct(junk, BigInt(3)).has_value());
}

TEST_CASE("3-adic square roots") {
    auto s = padic_sqrt(PadicNumber::from_int(7, 8));
    REQUIRE(s.has_value());
    CHECK((*s * *s - PadicNumber::from_int(7, 8)).is_zero());
    CHECK(!padic_sqrt(PadicNumber::from_int(2, 8)).has_value());  // 2 is a non-residue
    CHECK(!padic_sqrt(PadicNumber::from_int(3, 8)).has_value());  // odd valuation
}

TEST_CASE("K0 values: exact layer, demotion, conjugation") {
    K0Value z(GaussianRational(Rational(1, 2), Rational(-3)));
    CHECK(z.is_exact());
    CHECK(z.conj().exact().im == 3);
    CHECK((z * z.inverse()).exact() == GaussianRational(1));
    CHECK(gaussian_valuation(z.exact()) == Val::of(0));
    // i has valuation 0; 3i has valuation 1
    CHECK(gaussian_valuation(GaussianRational(0, 3)) == Val::of(1));

    K0Value d = z.demoted(20);
    CHECK(!d.is_exact());
    CHECK(d.equals_to_precision(z));

    auto g = d.as_gaussian(BigInt(100));
    REQUIRE(g.has_value());
    CHECK(*g == z.exact());
}

TEST_CASE("k0_sqrt over Q3 and Q3(zeta4)") {
    auto r1 = k0_sqrt(K0Value::from_int(7), 1);
    REQUIRE(r1.has_value());
    CHECK((*r1 * *r1 - K0Value::from_int(7)).is_zero());
    // -11 = (1+2i)^2 * ... check a Gaussian square root exists for f=2
    K0Value w(GaussianRational(Rational(-3), Rational(4)));  // (1+2i)^2
    auto r2 = k0_sqrt(w, 2);
    REQUIRE(r2.has_value());
    CHECK((*r2 * *r2 - w).is_zero());
}

TEST_CASE("matrices: semilinear composition and char poly") {
    K0Matrix A = K0Matrix::from_ints(0, -3, 1, 0, 1, 1);  // phi-shaped, twist 1
    K0Matrix A2 = A.compose(A);
    CHECK(A2.twist() == 0);  // f=1 normalizes twists mod 1
    CHECK(A2.at(0, 0).exact().re == -3);

    K0Matrix M = K0Matrix::from_ints(2, 1, 1, 1, 1, 0);
    auto cp = rational_char_poly(M, BigInt(100));
    REQUIRE(cp.has_value());
    CHECK((*cp)[0] == -3);  // X^2 - (tr)X + det
    CHECK((*cp)[1] == 1);
    K0Matrix I = M.compose(M.inverse());
    CHECK(I.equals_to_precision(K0Matrix::identity(1)));

    // f=2: conjugation twist composes correctly: (A,1)^2 applies sigma once
    K0Matrix C(K0Value(GaussianRational(0, 1)), K0Value(GaussianRational(0)),
               K0Value(GaussianRational(0)), K0Value(GaussianRational(0, 1)), 2, 1);
    K0Matrix C2 = C.compose(C);
    CHECK(C2.twist() == 0);
    // i * sigma(i) = i * (-i) = 1
    CHECK(C2.at(0, 0).exact() == GaussianRational(1));
}
