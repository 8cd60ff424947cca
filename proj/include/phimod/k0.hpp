#ifndef PHIMOD_K0_HPP
#define PHIMOD_K0_HPP

#include "phimod/padic.hpp"

#include <optional>
#include <string>

namespace phimod {

/// a + b*i with exact rational parts (i = zeta_4).
struct GaussianRational {
    Rational re = 0;
    Rational im = 0;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_rational() const { return im == 0; }
    GaussianRational conj() const { return {re, -im}; }
    Rational norm() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }
    GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
    GaussianRational operator-(const GaussianRational& o) const { return {re - o.re, im - o.im}; }
    GaussianRational operator*(const GaussianRational& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussianRational operator/(const GaussianRational& o) const;
    bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }

    std::string str() const;
};

Val gaussian_valuation(const GaussianRational& z);

/// An element of K0 (= Q_3 or Q_3(zeta_4)) carried exactly as a Gaussian
/// rational whenever possible, with a truncated 3-adic coordinate pair as
/// the fallback.  Mixed arithmetic demotes the exact operand on the fly.
class K0Value {
public:
    K0Value() : exact_(true), ex_(Rational(0)) {}
    K0Value(GaussianRational g) : exact_(true), ex_(std::move(g)) {}
    static K0Value from_rational(const Rational& q) { return K0Value(GaussianRational(q)); }
    static K0Value from_int(long n) { return from_rational(Rational(n)); }
    static K0Value i_times(const Rational& q) { return K0Value(GaussianRational(0, q)); }
    static K0Value approx(PadicNumber re, PadicNumber im);

    bool is_exact() const { return exact_; }
    const GaussianRational& exact() const { return ex_; }
    PadicNumber re(int precision) const;
    PadicNumber im(int precision) const;

    bool is_zero() const;
    Val valuation() const;
    K0Value conj() const;            // zeta_4 -> -zeta_4 (the Frobenius on K0 when f=2)
    K0Value frob(int m, int f) const { return (f == 2 && (m % 2 + 2) % 2 == 1) ? conj() : *this; }

    K0Value operator-() const;
    K0Value operator+(const K0Value& o) const;
    K0Value operator-(const K0Value& o) const { return *this + (-o); }
    K0Value operator*(const K0Value& o) const;
    K0Value inverse() const;
    K0Value operator/(const K0Value& o) const { return *this * o.inverse(); }

    bool equals_to_precision(const K0Value& o) const { return (*this - o).is_zero(); }

    /// Forces the approximate representation at the given unit precision
    /// (identity on already-approximate values).
    K0Value demoted(int precision) const {
        return is_exact() ? approx(re(precision), im(precision)) : *this;
    }

    /// Rational part extraction when the value is (known) rational:
    /// exact path returns the rational, approx path reconstructs.
    std::optional<Rational> as_rational(const BigInt& height_bound) const;
    std::optional<GaussianRational> as_gaussian(const BigInt& height_bound) const;

    std::string str() const;

    static int default_precision;   // demotion precision for exact->approx

private:
    bool exact_;
    GaussianRational ex_;
    PadicNumber re_, im_;
};

std::optional<K0Value> k0_sqrt(const K0Value& x, int f);

}  // namespace phimod

#endif
