#include "phimod/phigal.hpp"

#include <doctest.h>

using namespace phimod;

TEST_CASE("Dc(1;-3;0): canonical data, conditions, classification") {
    ClassLabel L{Kind::Dc, 1, -3};
    L.alpha = ProjQ3::finite(0);
    FilteredModule D = canonical_module(L);
    CHECK(D.base.phi.at(1, 1).exact().re == 3);
    const PlaneBasis& P = fixed_plane_in_DK(D.base);
    CHECK(P.x1.coord(0).exact().re == 1);
    CHECK(P.y1.is_zero());
    CHECK(D.fil_x.is_zero());

    ConditionsReport rep = check_conditions(D);
    CHECK(rep.all_pass());
    CHECK((*rep.char_poly_coeffs)[0] == -3);
    CHECK((*rep.char_poly_coeffs)[1] == 3);
    CHECK(stable_lines(D.base).empty());
    CHECK(t_newton(D.base) == 1);
    CHECK(t_hodge(D) == 1);
    CHECK(classify(D) == L);
}

TEST_CASE("Dc(1;0): filtration parameters collapse to the canonical point") {
    ClassLabel L{Kind::Dc, 1, 0};
    L.alpha = ProjQ3::finite(0);
    FilteredModule D0 = canonical_module(L);
    L.alpha = ProjQ3::finite(5);
    FilteredModule D5 = canonical_module(L);
    CHECK(is_isomorphic(D5, D0).has_value());
    ClassLabel got = classify(D5);
    REQUIRE(got.alpha.has_value());
    CHECK(!got.alpha->is_infinity());
    CHECK(got.alpha->alpha() == 0);
}

TEST_CASE("Dc(1;1): ordinary stable lines and the admissibility boundary") {
    ClassLabel L{Kind::Dc, 1, 1};
    L.alpha = ProjQ3::finite(1);
    FilteredModule D1 = canonical_module(L);
    CHECK(stable_lines(D1.base).size() == 2);
    CHECK(check_conditions(D1).all_pass());

    // the line of slope 1 sitting inside Fil^1 violates t_H <= t_N
    L.alpha = ProjQ3::infinity();
    CHECK(!is_admissible(canonical_module(L)).first);

    // nonzero parameters collapse to 1; zero stays a separate class
    L.alpha = ProjQ3::finite(7);
    ClassLabel got = classify(canonical_module(L));
    CHECK(got.alpha->alpha() == 1);
    L.alpha = ProjQ3::finite(0);
    FilteredModule D0 = canonical_module(L);
    CHECK(!is_isomorphic(D0, D1).has_value());
    CHECK(classify(D0).alpha->alpha() == 0);
}

TEST_CASE("distinct traces are never isomorphic") {
    ClassLabel A{Kind::Dc, 1, -3}, B{Kind::Dc, 1, 3};
    A.alpha = B.alpha = ProjQ3::finite(0);
    CHECK(!is_isomorphic(canonical_module(A), canonical_module(B)).has_value());
}

TEST_CASE("Dc(2;-1): ramified quadratic row and its fixed plane") {
    ClassLabel L{Kind::Dc, 2, -1};
    L.alpha = ProjQ3::finite(1);
    FilteredModule D = canonical_module(L);
    const PlaneBasis& P = fixed_plane_in_DK(D.base);
    Val r = P.x1.residual_valuation(FieldElement::pi(D.base.field));
    CHECK((r.infinite || r.v >= 20));  // v1 = sqrt3 e1
    CHECK(P.y1.is_zero());
    CHECK(P.x2.is_zero());
    CHECK(check_conditions(D).all_pass());
    CHECK(classify(D) == L);
}

TEST_CASE("Dpc(4;0): quartic wild row") {
    ClassLabel L{Kind::Dpc, 4, 0};
    L.alpha = ProjQ3::finite(2);
    FilteredModule D = canonical_module(L);
    const PlaneBasis& P = fixed_plane_in_DK(D.base);
    CHECK(!P.x1.valuation().infinite);
    CHECK(P.x1.valuation().v == Rational(-1, 4));
    CHECK(P.y2.valuation().v == Rational(1, 4));
    CHECK(check_conditions(D).all_pass());
    CHECK(stable_lines(D.base).empty());
    CHECK(classify(D) == L);

    L.alpha = ProjQ3::finite(3);
    CHECK(!is_isomorphic(D, canonical_module(L)).has_value());
    CHECK(is_isomorphic(D, D).has_value());
}

TEST_CASE("Dpcg(3;-3,mu): abelian cubic row") {
    ClassLabel L{Kind::Dpcg, 3, -3};
    L.mu = 1;
    FilteredModule D = canonical_module(L);
    ConditionsReport rep = check_conditions(D);
    CHECK(rep.all_pass());
    CHECK((*rep.char_poly_coeffs)[0] == -3);

    ClassLabel M = L;
    M.mu = 2;
    CHECK(!is_isomorphic_unfiltered(D.base, canonical_module(M).base).has_value());

    // the filtration position does not affect the class on this row
    FilteredModule D2 = filtration_from_point(D.base, ProjQ3::finite(4));
    CHECK(is_isomorphic(D, D2).has_value());
    CHECK(classify(D) == L);

    // mu outside the lambda-table is rejected
    ClassLabel bad{Kind::Dpcg, 3, 0};
    bad.mu = 2;
    CHECK_THROWS_AS(canonical_module(bad), invalid_label);

    CHECK(membership_check("M3a", fil_slope(D)));
}

TEST_CASE("Dpcng(3;0): nonabelian cubic row") {
    ClassLabel L{Kind::Dpcng, 3, 0};
    L.alpha = ProjQ3::finite(1);
    FilteredModule D = canonical_module(L);
    CHECK(check_conditions(D).all_pass());
    CHECK(stable_lines(D.base).empty());
    CHECK(membership_check("M3na", fil_slope(D)));
    CHECK(!membership_check("M3na", FieldElement::zero(D.base.field)));

    L.alpha = ProjQ3::finite(-2);
    CHECK(!is_isomorphic(D, canonical_module(L)).has_value());
    CHECK(classify(D).alpha->alpha() == 1);
}

TEST_CASE("Dpc(12;0;3;1): dodecic row and the unramified twist") {
    ClassLabel L{Kind::Dpc, 12, 0};
    L.field_index = 3;
    L.epsilon = 1;
    L.alpha = ProjQ3::finite(2);
    FilteredModule D = canonical_module(L);
    CHECK(check_conditions(D).all_pass());
    CHECK(membership_check("M12(3,1)", fil_slope(D)));

    ClassLabel M = L;
    M.epsilon = 0;
    CHECK(!is_isomorphic_unfiltered(D.base, canonical_module(M).base).has_value());
    CHECK(classify(D) == L);

    ClassLabel TL = classify(twist_unramified(D));
    REQUIRE(TL.epsilon.has_value());
    CHECK(*TL.epsilon == 0);
}

TEST_CASE("ramified twist moves Dc(1;a) to Dc(2;a)") {
    ClassLabel L{Kind::Dc, 1, 2};
    L.alpha = ProjQ3::finite(1);
    ClassLabel got = classify(twist_ramified(canonical_module(L)));
    ClassLabel want{Kind::Dc, 2, 2};
    want.alpha = ProjQ3::finite(1);
    CHECK(got == want);
}

TEST_CASE("Weil traces are rational; (t3, 0) has trace -1 on Dpcng(3;0)") {
    PhiGalModule B = canonical_base(ClassLabel{Kind::Dpcng, 3, 0});
    bool seen = false;
    for (const WeilWitness& w : weil_traces(B, 6)) {
        CHECK(w.trace.has_value());
        if (w.word == "t3" && w.n == 0) {
            seen = true;
            CHECK(*w.trace == -1);
        }
    }
    CHECK(seen);
}

TEST_CASE("condition (3) rejects a non-unimodular Galois action") {
    ClassLabel L{Kind::Dc, 2, 0};
    L.alpha = ProjQ3::finite(0);
    FilteredModule D = canonical_module(L);
    D.base.galois.at("t2") = K0Matrix::from_ints(1, 0, 0, -1, 1, 0);
    D.base.plane_cache.reset();
    CHECK(!check_conditions(D).cond3);
}
