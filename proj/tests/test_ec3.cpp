#include "phimod/ec3.hpp"

#include "phimod/catalog.hpp"

#include <doctest.h>

using namespace phimod;

namespace {

const CurveF3q kXm{1, F9(0), F9(0), F9(0), F9(-1), F9(0)};    // y^2 = x^3 - x
const CurveF3q kXp1{1, F9(0), F9(0), F9(0), F9(-1), F9(1)};   // y^2 = x^3 - x + 1
const CurveF3q kXm1{1, F9(0), F9(0), F9(0), F9(-1), F9(-1)};  // y^2 = x^3 - x - 1
const CurveF3q kPx{1, F9(0), F9(0), F9(0), F9(1), F9(0)};     // y^2 = x^3 + x
const CurveF3q kOrd{1, F9(0), F9(1), F9(0), F9(0), F9(1)};    // y^2 = x^3 + x^2 + 1

AutElement order3_element(const AutGroupDescription& A) {
    for (const AutElement& g : A.elements)
        if (g.order() == 3) return g;
    FAIL("no order-3 automorphism");
    return {};
}

}  // namespace

TEST_CASE("point counts and Frobenius traces over F3 and F9") {
    CHECK(point_count(kXm) == 4);
    CHECK(point_count(kXp1) == 7);
    CHECK(point_count(kPx.base_change()) == 16);
    CHECK(frobenius_trace(kXm) == 0);
    CHECK(frobenius_trace(kXp1) == -3);
    CHECK(frobenius_trace(kXm1) == 3);
    CHECK(is_supersingular(kPx));
    CHECK(!is_supersingular(kOrd));
    CHECK_THROWS_AS(point_count(CurveF3q{1, F9(0), F9(1), F9(0), F9(0), F9(0)}), singular_curve);
}

TEST_CASE("automorphism groups: orders, shapes, 3-Sylow structure") {
    AutGroupDescription a12 = automorphism_group(kPx.base_change());
    CHECK(a12.order == 12);
    CHECK(a12.shape == "Z3:Z4");
    int ord3 = 0;
    for (const AutElement& g : a12.elements)
        if (g.order() == 3) ++ord3;
    CHECK(ord3 == 2);  // unique, hence normal, 3-Sylow
    for (const AutElement& g : a12.elements) CHECK(g.compose(g.inverse()).is_identity());

    AutGroupDescription a6 = automorphism_group(kXm);
    CHECK(a6.order == 6);
    CHECK(a6.shape == "C6");
    AutGroupDescription a2 = automorphism_group(kOrd);
    CHECK(a2.order == 2);
    CHECK(a2.shape == "C2");

    // over F3 the same curve has no order-3 automorphism at all
    AutGroupDescription af3 = automorphism_group(kPx);
    for (const AutElement& g : af3.elements) CHECK(g.order() != 3);
}

TEST_CASE("quadratic twists negate traces and preserve supersingularity") {
    CurveF3q tw = quadratic_twist(kXp1);
    CHECK(frobenius_trace(tw) == 3);
    CHECK(frobenius_trace(quadratic_twist(tw)) == -3);
    CHECK(frobenius_trace(quadratic_twist(kXm)) == 0);
    CHECK(frobenius_trace(quadratic_twist(kPx.base_change())) ==
          -frobenius_trace(kPx.base_change()));
    CHECK(is_supersingular(tw) == is_supersingular(kXp1));
}

TEST_CASE("Galois pairs over the abelian cubic field") {
    const GaloisGroup& G = get_group("Lg");
    for (const CurveF3q* C : {&kXp1, &kXm, &kXm1}) {
        AutElement tau = order3_element(automorphism_group(*C));
        GaloisPair P;
        P.curve = *C;
        P.s = 1;
        P.gamma = {AutElement{}, tau, tau.compose(tau)};
        P.nu["t3"] = {tau, 0};
        CHECK(galois_pair_verify(P, G).status == PairVerdict::Status::valid_minimal);
    }
}

TEST_CASE("Galois pair over the nonabelian cubic closure") {
    const GaloisGroup& G = get_group("Lng-closure");
    AutElement tau = order3_element(automorphism_group(kPx.base_change()));
    GaloisPair P;
    P.curve = kPx;
    P.s = 2;
    P.gamma = {AutElement{}, tau, tau.compose(tau)};
    P.nu["t3"] = {tau, 0};
    P.nu["w"] = {AutElement{}, 1};
    CHECK(galois_pair_verify(P, G).status == PairVerdict::Status::valid_minimal);
}

TEST_CASE("trace -3 curve admits no injective pair over the nonabelian field") {
    const GaloisGroup& G = get_group("Lng-closure");
    AutElement tau = order3_element(automorphism_group(kXp1.base_change()));
    GaloisPair P;
    P.curve = kXp1;
    P.s = 2;
    P.gamma = {AutElement{}, tau, tau.compose(tau)};
    P.nu["t3"] = {tau, 0};
    P.nu["w"] = {AutElement{}, 1};
    CHECK(galois_pair_verify(P, G).status == PairVerdict::Status::invalid);

    PairSearchReport rep = search_galois_pairs(kXp1, G);
    CHECK(!rep.injective_possible);
    CHECK(rep.assignments_checked > 0);
}
