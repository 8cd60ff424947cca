#ifndef PHIMOD_TOWER_HPP
#define PHIMOD_TOWER_HPP

#include "phimod/k0.hpp"

#include <memory>
#include <vector>

namespace phimod {

struct field_mismatch : std::invalid_argument {
    field_mismatch() : std::invalid_argument("elements live in different fields") {}
};

/// A finite extension K/Q3 as a two-stage tower: the unramified stage
/// K0 = Q3 (f=1) or Q3(zeta_4) (f=2), then a totally ramified stage cut
/// out by a monic Eisenstein polynomial of degree e with rational
/// coefficients.  Elements are written on the basis pi^i zeta_4^j.
class TowerField : public std::enable_shared_from_this<TowerField> {
public:
    /// eisenstein holds a_0..a_{e-1} of X^e + a_{e-1}X^{e-1} + ... + a_0.
    static std::shared_ptr<const TowerField> make(std::string label, int f,
                                                  std::vector<Rational> eisenstein);

    const std::string& label() const { return label_; }
    int f() const { return f_; }
    int e() const { return e_; }
    int degree() const { return e_ * f_; }
    const std::vector<Rational>& eisenstein() const { return eis_; }
    /// Nonzero Eisenstein coefficients as (index, K0Value), for the
    /// pi^e-folding step of multiplication.
    const std::vector<std::pair<size_t, K0Value>>& fold_terms() const { return fold_; }

private:
    TowerField() = default;
    std::string label_;
    int f_ = 1;
    int e_ = 1;
    std::vector<Rational> eis_;
    std::vector<std::pair<size_t, K0Value>> fold_;
};

using TowerFieldPtr = std::shared_ptr<const TowerField>;

/// An element of a TowerField: coords[i] is the K0-coefficient of pi^i.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(TowerFieldPtr home, std::vector<K0Value> coords);

    static FieldElement zero(const TowerFieldPtr& K);
    static FieldElement one(const TowerFieldPtr& K);
    static FieldElement pi(const TowerFieldPtr& K);
    static FieldElement from_scalar(const TowerFieldPtr& K, const K0Value& c);

    const TowerFieldPtr& home() const { return home_; }
    const std::vector<K0Value>& coords() const { return c_; }
    const K0Value& coord(int i) const { return c_[static_cast<size_t>(i)]; }

    bool is_zero() const;
    /// min over i of v3(coords[i]) + i/e; infinity iff zero to precision.
    Val valuation() const;

    FieldElement operator-() const;
    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator*(const K0Value& s) const;
    FieldElement inverse() const;
    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }
    FieldElement pow(long n) const;

    /// Entrywise Frobenius of the K0-coefficients (the basis pi^i is kept).
    FieldElement coeff_frob(int m) const;

    /// Coordinates forced onto the approximate 3-adic layer.
    FieldElement demoted(int precision) const;

    bool equals_to_precision(const FieldElement& o) const;
    /// Valuation of the difference, for residual checks.
    Val residual_valuation(const FieldElement& o) const;

    std::string str() const;

private:
    TowerFieldPtr home_;
    std::vector<K0Value> c_;
};

/// Evaluates a monic-or-not polynomial with rational coefficients
/// (coefficient of X^i at index i) at a field element.
FieldElement eval_rational_poly(const std::vector<Rational>& poly, const FieldElement& x);

/// All roots of the given rational polynomial inside K, to working
/// precision: digit-wise branch over pi-adic residues, then Newton once
/// the strong Hensel condition holds.  Returned in a canonical order.
std::vector<FieldElement> find_roots_in_field(const std::vector<Rational>& poly,
                                              const TowerFieldPtr& K,
                                              const PrecisionPolicy& policy = {});

}  // namespace phimod

#endif
