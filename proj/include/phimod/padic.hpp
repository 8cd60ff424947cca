#ifndef PHIMOD_PADIC_HPP
#define PHIMOD_PADIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace phimod {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kPrime = 3;

BigInt pow3(long n);

struct PrecisionPolicy {
    int working_precision = 40;
    int min_acceptable = 20;
};

struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct inversion_of_zero : std::domain_error {
    inversion_of_zero() : std::domain_error("inversion of a number that is zero to precision") {}
};
struct hensel_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exact valuation with an infinity symbol (for zero).
struct Val {
    bool infinite = false;
    Rational v = 0;

    static Val inf() { return Val{true, 0}; }
    static Val of(Rational r) { return Val{false, std::move(r)}; }

    bool operator==(const Val& o) const {
        return infinite == o.infinite && (infinite || v == o.v);
    }
    bool operator<(const Val& o) const {
        if (infinite) return false;
        if (o.infinite) return true;
        return v < o.v;
    }
    std::string str() const;
};

/// A truncated 3-adic number: 3^val * unit, with the unit part known
/// modulo 3^prec.  "Zero to precision A" is the coset 3^A * Z_3, stored
/// with val = A and no unit.  All arithmetic keeps track of the surviving
/// absolute precision, so cancellation shows up as lost digits rather than
/// as wrong ones.
class PadicNumber {
public:
    PadicNumber() : val_(1), prec_(0), zero_(true) {}

    /// Canonicalizes 3^valuation * raw at the given unit precision.
    static PadicNumber make(long valuation, const BigInt& raw, int precision);
    static PadicNumber zero_to(long abs_precision);
    static PadicNumber from_int(long n, int precision) { return make(0, BigInt(n), precision); }
    static PadicNumber from_rational(const Rational& q, int precision);

    bool is_zero() const { return zero_; }
    long valuation_int() const;           // throws on zero
    Val valuation() const { return zero_ ? Val::inf() : Val::of(Rational(val_)); }
    int precision() const { return zero_ ? 0 : prec_; }
    long abs_precision() const { return zero_ ? val_ : val_ + prec_; }
    const BigInt& unit() const { return unit_; }

    PadicNumber operator-() const;
    PadicNumber operator+(const PadicNumber& o) const;
    PadicNumber operator-(const PadicNumber& o) const { return *this + (-o); }
    PadicNumber operator*(const PadicNumber& o) const;
    PadicNumber operator/(const PadicNumber& o) const { return *this * o.inverse(); }
    PadicNumber inverse() const;
    PadicNumber pow(long n) const;

    /// Truncates to a smaller absolute precision.
    PadicNumber truncated(long abs_precision) const;
    /// Multiplies by 3^k (exact, no precision change in the unit part).
    PadicNumber shifted(long k) const;

    bool equals_to_precision(const PadicNumber& o) const { return (*this - o).is_zero(); }

    /// Residue of the unit part modulo 3 (1 or 2); throws on zero.
    int leading_digit() const;
    /// Canonical integer representative of 3^val*unit mod 3^abs_precision,
    /// in [0, 3^abs_precision).  Only for val >= 0.
    BigInt canonical_integer() const;

    std::string str() const;

private:
    long val_;
    BigInt unit_;
    int prec_;
    bool zero_;
};

/// sqrt in Q_3: exists iff valuation even and unit = 1 mod 3.
std::optional<PadicNumber> padic_sqrt(const PadicNumber& x);

/// Polynomials over Q_3, coefficient of X^i at index i.
using PadicPoly = std::vector<PadicNumber>;

PadicNumber poly_eval(const PadicPoly& f, const PadicNumber& x);
PadicPoly poly_derivative(const PadicPoly& f);
PadicPoly poly_from_integers(const std::vector<long>& coeffs, int precision);

/// Newton lifting of a simple root from a seed satisfying the strong
/// Hensel condition v(f(seed)) > 2 v(f'(seed)).
PadicNumber hensel_root(const PadicPoly& f, const PadicNumber& seed,
                        const PrecisionPolicy& policy = {});

/// Unique rational a/b with |a|,|b| <= height_bound, gcd(b,3)=1, congruent
/// to x at full precision; nullopt when none exists.
std::optional<Rational> rational_reconstruct(const PadicNumber& x, const BigInt& height_bound);

long newton_iteration_cap(int working_precision);

}  // namespace phimod

#endif
