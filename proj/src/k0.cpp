#include "phimod/k0.hpp"

#include <sstream>

namespace phimod {

int K0Value::default_precision = 40;

GaussianRational GaussianRational::operator/(const GaussianRational& o) const {
    Rational n = o.norm();
    if (n == 0) throw inversion_of_zero{};
    GaussianRational t = *this * o.conj();
    return {t.re / n, t.im / n};
}

std::string GaussianRational::str() const {
    std::ostringstream os;
    if (im == 0) {
        os << re;
    } else if (re == 0) {
        os << im << "*i";
    } else {
        os << re;
        if (im > 0) os << "+";
        os << im << "*i";
    }
    return os.str();
}

static Val rat_val(const Rational& q) {
    if (q == 0) return Val::inf();
    long v = 0;
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    while (n % 3 == 0) { n /= 3; ++v; }
    while (d % 3 == 0) { d /= 3; --v; }
    return Val::of(Rational(v));
}

Val gaussian_valuation(const GaussianRational& z) {
    // v is unramified on Q_3(zeta_4): v(a+bi) = min(v(a), v(b)).
    Val a = rat_val(z.re), b = rat_val(z.im);
    return a < b ? a : b;
}

K0Value K0Value::approx(PadicNumber re, PadicNumber im) {
    K0Value x;
    x.exact_ = false;
    x.re_ = std::move(re);
    x.im_ = std::move(im);
    return x;
}

PadicNumber K0Value::re(int precision) const {
    return exact_ ? PadicNumber::from_rational(ex_.re, precision) : re_;
}

PadicNumber K0Value::im(int precision) const {
    return exact_ ? PadicNumber::from_rational(ex_.im, precision) : im_;
}

bool K0Value::is_zero() const {
    if (exact_) return ex_.is_zero();
    return re_.is_zero() && im_.is_zero();
}

Val K0Value::valuation() const {
    if (exact_) return gaussian_valuation(ex_);
    Val a = re_.valuation(), b = im_.valuation();
    return a < b ? a : b;
}

K0Value K0Value::conj() const {
    if (exact_) return K0Value(ex_.conj());
    return approx(re_, -im_);
}

K0Value K0Value::operator-() const {
    if (exact_) return K0Value(-ex_);
    return approx(-re_, -im_);
}

K0Value K0Value::operator+(const K0Value& o) const {
    if (exact_ && o.exact_) return K0Value(ex_ + o.ex_);
    int p = default_precision;
    return approx(re(p) + o.re(p), im(p) + o.im(p));
}

K0Value K0Value::operator*(const K0Value& o) const {
    if (exact_ && o.exact_) return K0Value(ex_ * o.ex_);
    int p = default_precision;
    PadicNumber a = re(p), b = im(p), c = o.re(p), d = o.im(p);
    return approx(a * c - b * d, a * d + b * c);
}

K0Value K0Value::inverse() const {
    if (exact_) {
        if (ex_.is_zero()) throw inversion_of_zero{};
        return K0Value(GaussianRational(Rational(1)) / ex_);
    }
    PadicNumber n = re_ * re_ + im_ * im_;
    PadicNumber ni = n.inverse();
    return approx(re_ * ni, -(im_ * ni));
}

std::optional<Rational> K0Value::as_rational(const BigInt& height_bound) const {
    if (exact_) {
        if (!ex_.is_rational()) return std::nullopt;
        return ex_.re;
    }
    if (!im_.is_zero()) return std::nullopt;
    return rational_reconstruct(re_, height_bound);
}

std::optional<GaussianRational> K0Value::as_gaussian(const BigInt& height_bound) const {
    if (exact_) return ex_;
    auto a = rational_reconstruct(re_, height_bound);
    auto b = rational_reconstruct(im_, height_bound);
    if (!a || !b) return std::nullopt;
    return GaussianRational(*a, *b);
}

std::string K0Value::str() const {
    if (exact_) return ex_.str();
    std::ostringstream os;
    os << "(" << re_.str() << ") + (" << im_.str() << ")*i";
    return os.str();
}

std::optional<K0Value> k0_sqrt(const K0Value& x, int f) {
    int p = K0Value::default_precision;
    PadicNumber a = x.re(p), b = x.im(p);
    if (b.is_zero()) {
        if (auto r = padic_sqrt(a)) return K0Value::approx(*r, PadicNumber::zero_to(r->abs_precision()));
        if (f == 2) {
            if (auto r = padic_sqrt(-a)) return K0Value::approx(PadicNumber::zero_to(r->abs_precision()), *r);
        }
        return std::nullopt;
    }
    if (f != 2) return std::nullopt;
    // (u+vi)^2 = a+bi:  u^2 = (a + s)/2 with s^2 = a^2+b^2, v = b/(2u).
    PadicNumber n = a * a + b * b;
    auto s = padic_sqrt(n);
    if (!s) return std::nullopt;
    PadicNumber half = PadicNumber::from_int(2, p).inverse();
    for (int sign = 0; sign < 2; ++sign) {
        PadicNumber ss = sign ? -*s : *s;
        PadicNumber u2 = (a + ss) * half;
        if (auto u = padic_sqrt(u2)) {
            if (!u->is_zero()) {
                PadicNumber v = b * half * u->inverse();
                return K0Value::approx(*u, v);
            }
        }
    }
    return std::nullopt;
}

}  // namespace phimod
