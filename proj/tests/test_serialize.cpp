#include "phimod/serialize.hpp"

#include <doctest.h>

using namespace phimod;

namespace {

bool mod_eq(const FilteredModule& A, const FilteredModule& B) {
    if (A.base.field->label() != B.base.field->label()) return false;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!A.base.phi.at(i, j).equals_to_precision(B.base.phi.at(i, j))) return false;
    for (const auto& [n, M] : A.base.galois)
        if (!M.equals_to_precision(B.base.galois.at(n))) return false;
    return A.fil_x.equals_to_precision(B.fil_x) && A.fil_y.equals_to_precision(B.fil_y);
}

}  // namespace

TEST_CASE("entry grammar: exact values") {
    CHECK(k0_to_string(K0Value(GaussianRational(Rational(1, 2), Rational(-3, 2)))) ==
          "1/2-3/2*i");
    CHECK(k0_from_string("1/2-3/2*i").exact() == GaussianRational(Rational(1, 2), Rational(-3, 2)));
    CHECK(k0_from_string("-i").exact() == GaussianRational(0, -1));
    CHECK(k0_from_string("1+i").exact() == GaussianRational(1, 1));
    CHECK(k0_from_string("2*i").exact() == GaussianRational(0, 2));
    CHECK(k0_from_string("-7").exact() == GaussianRational(-7));
    // unit imaginary serializes without a spurious coefficient
    CHECK(k0_to_string(K0Value(GaussianRational(0, 1))) == "i");
    CHECK(k0_to_string(K0Value(GaussianRational(0, -1))) == "-i");
}

TEST_CASE("entry grammar: approximate 3-adic values round-trip") {
    PadicNumber p = PadicNumber::make(2, BigInt(122), 5);
    std::string s = padic_to_string(p);
    K0Value v = k0_from_string("(" + s + ")+(0~7)*i");
    CHECK(!v.is_exact());
    CHECK(v.re(5).equals_to_precision(p));
    CHECK(k0_from_string(k0_to_string(v)).re(5).equals_to_precision(p));
}

TEST_CASE("malformed entries report the offending position") {
    try {
        k0_from_string("1+*i");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.position == 2);
        CHECK(std::string(e.what()).find("position 2") != std::string::npos);
    }
}

TEST_CASE("module files round-trip and re-classify") {
    std::vector<ClassLabel> labels;
    {
        ClassLabel l{Kind::Dpc, 4, 0};
        l.alpha = ProjQ3::finite(Rational(2, 3));
        labels.push_back(l);
    }
    {
        ClassLabel l{Kind::Dc, 1, 2};
        l.alpha = ProjQ3::finite(1);
        labels.push_back(l);
    }
    {
        ClassLabel l{Kind::Dpcg, 6, 0};
        l.mu = -1;
        labels.push_back(l);
    }
    for (const ClassLabel& L : labels) {
        CAPTURE(L.str());
        FilteredModule D = canonical_module(L);
        FilteredModule R = read_module(write_module(D));
        CHECK(mod_eq(D, R));
        CHECK(classify(R) == L);
    }
}

TEST_CASE("module files: structural validation") {
    ClassLabel L{Kind::Dc, 2, 0};
    L.alpha = ProjQ3::finite(0);
    nlohmann::json j = module_to_json(canonical_module(L));

    nlohmann::json bad = j;
    bad["format"] = "phimod3-module/999";
    CHECK_THROWS_AS(module_from_json(bad), parse_error);

    bad = j;
    bad["field_label"] = "Q7(sqrt7)";
    CHECK_THROWS_AS(module_from_json(bad), parse_error);

    bad = j;
    bad["group_presentation_ref"] = "Lg";
    CHECK_THROWS_AS(module_from_json(bad), parse_error);

    bad = j;
    bad["galois"].erase("t2");
    CHECK_THROWS_AS(module_from_json(bad), parse_error);

    bad = j;
    bad["fil"]["x_coords"] = nlohmann::json::array({"1"});  // wrong length (e = 2)
    CHECK_THROWS_AS(module_from_json(bad), parse_error);
}

TEST_CASE("curve specs parse over F3 and F9") {
    CurveF3q E = parse_curve("y^2 = x^3 - x + 1", 1);
    CHECK(frobenius_trace(E) == -3);
    CurveF3q E9 = parse_curve("y^2 = x^3 + (1+t)*x", 2);
    CHECK(E9.s == 2);
    CHECK_THROWS_AS(parse_curve("y^2 = x^4 + 1", 1), parse_error);
    CHECK_THROWS_AS(parse_curve("y^2 = x^3 + t*x", 1), parse_error);  // t needs F9
}
