#ifndef PHIMOD_MATRIX_HPP
#define PHIMOD_MATRIX_HPP

#include "phimod/k0.hpp"

#include <array>

namespace phimod {

/// A column vector in K0^2.
using K0Vec = std::array<K0Value, 2>;

/// A 2x2 matrix over K0 together with a semilinear twist: the map it
/// represents is x |-> M * sigma^twist(x), sigma the Frobenius of K0/Q3
/// (trivial when f=1, zeta_4-conjugation when f=2).  Composition adds
/// twists; a twist-0 matrix is an ordinary K0-linear map.
class K0Matrix {
public:
    K0Matrix() : f_(1), twist_(0) {}
    K0Matrix(K0Value a, K0Value b, K0Value c, K0Value d, int f, int twist = 0);

    static K0Matrix identity(int f);
    static K0Matrix scalar(const K0Value& s, int f);
    static K0Matrix from_rationals(const Rational& a, const Rational& b,
                                   const Rational& c, const Rational& d,
                                   int f, int twist = 0);
    static K0Matrix from_ints(long a, long b, long c, long d, int f, int twist = 0);

    const K0Value& at(int i, int j) const { return e_[i][j]; }
    K0Value& at(int i, int j) { return e_[i][j]; }
    int f() const { return f_; }
    int twist() const { return twist_; }

    bool is_exact() const;
    bool is_zero() const;

    K0Value det() const;
    K0Value trace() const;
    bool is_invertible() const { return !det().is_zero(); }

    /// Entrywise Frobenius sigma^m (twist unchanged).
    K0Matrix frob(int m) const;

    K0Matrix operator+(const K0Matrix& o) const;   // requires equal twists
    K0Matrix operator-(const K0Matrix& o) const;
    K0Matrix operator*(const K0Value& s) const;
    K0Matrix operator-() const;

    /// Composition as semilinear maps: (A, tA) o (B, tB) = (A sigma^tA(B), tA+tB).
    K0Matrix compose(const K0Matrix& o) const;
    K0Matrix pow(long n) const;                    // n >= 0 semilinear power
    K0Matrix inverse() const;                      // inverse as a semilinear map

    /// Applies the semilinear map to a vector.
    K0Vec apply(const K0Vec& v) const;

    bool equals_to_precision(const K0Matrix& o) const;

    std::string str() const;

private:
    std::array<std::array<K0Value, 2>, 2> e_;
    int f_;
    int twist_;
};

/// trace / det of the linear map (twist must be 0), reconstructed to exact
/// rationals; nullopt when a coefficient is irrational within the bound.
std::optional<std::array<Rational, 2>> rational_char_poly(const K0Matrix& M,
                                                          const BigInt& height_bound);

}  // namespace phimod

#endif
