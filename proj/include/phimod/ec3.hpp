#ifndef PHIMOD_EC3_HPP
#define PHIMOD_EC3_HPP

#include "phimod/galois.hpp"

#include <map>
#include <optional>

namespace phimod {

struct singular_curve : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct shape_mismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An element of F3 or F9 = F3[t]/(t^2+1), written a + b*t.
struct F9 {
    int a = 0, b = 0;  // reduced mod 3, in {0,1,2}

    F9() = default;
    F9(int x, int y = 0) : a(((x % 3) + 3) % 3), b(((y % 3) + 3) % 3) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool in_f3() const { return b == 0; }
    F9 frob() const { return {a, -b}; }  // x -> x^3

    F9 operator-() const { return {-a, -b}; }
    F9 operator+(const F9& o) const { return {a + o.a, b + o.b}; }
    F9 operator-(const F9& o) const { return {a - o.a, b - o.b}; }
    F9 operator*(const F9& o) const { return {a * o.a - b * o.b, a * o.b + b * o.a}; }
    F9 inverse() const;
    bool operator==(const F9& o) const { return a == o.a && b == o.b; }
    bool operator<(const F9& o) const { return a != o.a ? a < o.a : b < o.b; }

    std::string str() const;
};

/// A general Weierstrass curve over F3 (s=1) or F9 (s=2).
struct CurveF3q {
    int s = 1;
    F9 a1, a2, a3, a4, a6;

    int q() const { return s == 1 ? 3 : 9; }
    F9 discriminant() const;
    bool is_smooth() const { return !discriminant().is_zero(); }
    /// The same equation read over F9.
    CurveF3q base_change() const;
    std::string str() const;
};

/// A Weierstrass substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct AutElement {
    F9 u{1}, r, s, t;

    bool operator==(const AutElement& o) const {
        return u == o.u && r == o.r && s == o.s && t == o.t;
    }
    bool is_identity() const { return *this == AutElement{}; }
    /// Coefficient-wise Frobenius (conjugate substitution).
    AutElement frob() const { return {u.frob(), r.frob(), s.frob(), t.frob()}; }
    /// Composition as maps, this after o.
    AutElement compose(const AutElement& o) const;
    AutElement inverse() const;
    int order() const;
    std::string str() const;
};

struct AutGroupDescription {
    std::vector<AutElement> elements;
    int order = 0;
    std::string shape;  // C1, C2, C3, C6, Z3:Z4, other
};

int point_count(const CurveF3q& E);
int frobenius_trace(const CurveF3q& E);
bool is_supersingular(const CurveF3q& E);
AutGroupDescription automorphism_group(const CurveF3q& E);
CurveF3q quadratic_twist(const CurveF3q& E);

/// Descent datum: a curve over F3, a subgroup Gamma of Aut over F_{3^s},
/// and an antimorphism nu from the Galois group's generators into
/// Aut rtimes Gal(F_{3^s}/F_3), each image a (substitution, Frobenius
/// power) pair.
struct GaloisPair {
    CurveF3q curve;  // s = 1
    int s = 1;
    std::vector<AutElement> gamma;
    std::map<std::string, std::pair<AutElement, int>> nu;
};

struct PairVerdict {
    enum class Status { valid_minimal, valid_nonminimal, invalid };
    Status status = Status::invalid;
    std::string reason;

    bool valid() const { return status != Status::invalid; }
    std::string str() const;
};

PairVerdict galois_pair_verify(const GaloisPair& P, const GaloisGroup& G);

struct PairSearchReport {
    std::optional<GaloisPair> best;  // the best pair found, if any is valid
    PairVerdict best_verdict;
    bool injective_possible = false;  // some valid assignment is injective
    long assignments_checked = 0;
};

/// Exhausts every generator assignment compatible with the projection
/// condition and reports the best valid pair (valid-minimal preferred).
PairSearchReport search_galois_pairs(const CurveF3q& base_curve, const GaloisGroup& G);

struct Table2Row {
    std::string name;
    std::string curve;
    std::string verdict;
    bool pass = false;
    std::vector<std::string> notes;
};

/// Re-derives the minimal-Galois-pair table: the cubic rows and the five
/// dodecic fields verify valid-minimal, and the trace +-3 curves over the
/// non-abelian cubic closure admit no injective assignment at all.
std::vector<Table2Row> verify_table2();

}  // namespace phimod

#endif
