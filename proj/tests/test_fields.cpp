#include "phimod/catalog.hpp"
#include "phimod/semilinear.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace phimod;

TEST_CASE("tower arithmetic in Q3(sqrt3)") {
    TowerFieldPtr K = get_field("Q3(sqrt3)");
    FieldElement pi = FieldElement::pi(K);
    FieldElement three = FieldElement::from_scalar(K, K0Value::from_int(3));
    CHECK((pi * pi - three).is_zero());
    CHECK(pi.valuation() == Val::of(Rational(1, 2)));
    CHECK((pi.inverse() * pi - FieldElement::one(K)).is_zero());
    CHECK(pi.pow(4).valuation() == Val::of(2));
}

TEST_CASE("root finding: quadratic and quartic stages") {
    TowerFieldPtr K2 = get_field("Q3(sqrt3)");
    // X^2 - 3 has both square roots inside its own field
    auto roots = find_roots_in_field({Rational(-3), Rational(0), Rational(1)}, K2);
    CHECK(roots.size() == 2);
    for (const auto& r : roots) {
        FieldElement v = r * r - FieldElement::from_scalar(K2, K0Value::from_int(3));
        CHECK(v.is_zero());
    }
    // X^2 + 3 needs zeta_4: no roots over Q3(sqrt3), two over Q3(zeta4,pi4)
    CHECK(find_roots_in_field({Rational(3), Rational(0), Rational(1)}, K2).empty());
    TowerFieldPtr K4 = get_field("Q3(zeta4,pi4)");
    CHECK(find_roots_in_field({Rational(3), Rational(0), Rational(1)}, K4).size() == 2);
}

TEST_CASE("catalog: embedded text matches the shipped data file byte for byte") {
    std::ifstream in(PHIMOD_CATALOG_FILE, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == field_catalog_text());
}

TEST_CASE("catalog: entries and lookups") {
    CHECK(field_catalog().size() == 17);
    const CatalogEntry& k3 = catalog_entry("K3");
    CHECK(k3.e == 12);
    CHECK(k3.f == 2);
    CHECK(k3.pair_index == 3);
    CHECK(k3.presentation.generators.size() == 3);
    CHECK(catalog_fields(3).size() == 2);
    CHECK(catalog_fields(12).size() == 10);
    CHECK_THROWS_AS(catalog_entry("Q7"), unknown_label);
    CHECK_THROWS_AS(catalog_fields(5), unsupported_index);
}

TEST_CASE("Galois groups of the small fields") {
    for (const char* label : {"Q3(sqrt3)", "Lg", "Lng-closure", "Q3(zeta4,pi4)", "Lg(sqrt3)",
                              "Lng-closure(sqrt3)"}) {
        const GaloisGroup& G = get_group(label);
        const CatalogEntry& c = catalog_entry(label);
        CHECK(G.order() == static_cast<size_t>(c.e * c.f));
        CHECK(G.inertia_order() == static_cast<size_t>(c.e));
        Val res = G.min_relation_residual();
        CHECK((res.infinite || res.v >= 20));
    }
    // the non-abelian cubic closure: w t3 w = t3^-1
    const GaloisGroup& G = get_group("Lng-closure");
    Automorphism lhs = G.generator("w").compose(G.generator("t3")).compose(G.generator("w"));
    Automorphism rhs = G.generator("t3").power(2);
    CHECK(lhs.equals(rhs));
}

TEST_CASE("semilinear solver: equivariant spaces and fixed spaces") {
    // commutant of the supersingular companion matrix over Q3 is 2-dim
    K0Matrix phi = K0Matrix::from_ints(0, -3, 1, 0, 1, 1);
    SolutionSpace S = equivariant_solution_space({{phi, phi}});
    CHECK(S.dimension_over_Q3 == 2);

    // fixed space of sigma (twist-1 identity, f=2) is the rational plane
    K0Matrix sig = K0Matrix::identity(2);
    K0Matrix sig1(sig.at(0, 0), sig.at(0, 1), sig.at(1, 0), sig.at(1, 1), 2, 1);
    auto fs = fixed_space({sig1});
    CHECK(fs.size() == 2);
    for (const auto& v : fs) {
        CHECK(v[0].conj().equals_to_precision(v[0]));
        CHECK(v[1].conj().equals_to_precision(v[1]));
    }

    // char_poly agrees with rational_char_poly
    K0Matrix M = K0Matrix::from_ints(1, 2, 0, 3, 1, 0);
    auto cp = char_poly(M);
    CHECK(cp[0] == -4);
    CHECK(cp[1] == 3);
}
