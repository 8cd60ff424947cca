#include "phimod/padic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phimod {

BigInt pow3(long n) {
    if (n < 0) throw std::invalid_argument("pow3: negative exponent");
    BigInt r = 1, b = 3;
    long e = n;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

std::string Val::str() const {
    if (infinite) return "inf";
    std::ostringstream os;
    os << v;
    return os.str();
}

static BigInt mod_pos(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

PadicNumber PadicNumber::make(long valuation, const BigInt& raw, int precision) {
    if (precision < 1) throw precondition_error("padic: precision must be >= 1");
    PadicNumber x;
    BigInt u = mod_pos(raw, pow3(precision));
    if (u == 0) return zero_to(valuation + precision);
    long k = 0;
    while (u % 3 == 0) {
        u /= 3;
        ++k;
    }
    x.zero_ = false;
    x.val_ = valuation + k;
    x.prec_ = precision - static_cast<int>(k);
    if (x.prec_ <= 0) return zero_to(valuation + precision);
    x.unit_ = u % pow3(x.prec_);
    if (x.unit_ == 0) return zero_to(valuation + precision);
    return x;
}

PadicNumber PadicNumber::zero_to(long abs_precision) {
    PadicNumber x;
    x.zero_ = true;
    x.val_ = abs_precision;
    x.unit_ = 0;
    x.prec_ = 0;
    return x;
}

static BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    // extended Euclid
    BigInt r0 = m, r1 = mod_pos(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: not invertible");
    return mod_pos(s0, m);
}

PadicNumber PadicNumber::from_rational(const Rational& q, int precision) {
    if (q == 0) return zero_to(precision);
    BigInt num = boost::multiprecision::numerator(q);
    BigInt den = boost::multiprecision::denominator(q);
    long v = 0;
    while (num % 3 == 0) { num /= 3; ++v; }
    while (den % 3 == 0) { den /= 3; --v; }
    BigInt m = pow3(precision);
    BigInt u = mod_pos(num * mod_inverse(den, m), m);
    return make(v, u, precision);
}

long PadicNumber::valuation_int() const {
    if (zero_) throw std::domain_error("valuation of zero-to-precision");
    return val_;
}

PadicNumber PadicNumber::operator-() const {
    if (zero_) return *this;
    PadicNumber x = *this;
    x.unit_ = pow3(prec_) - unit_;
    return x;
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
    long a = std::min(abs_precision(), o.abs_precision());
    if (zero_ && o.zero_) return zero_to(a);
    if (zero_) return o.truncated(a);
    if (o.zero_) return truncated(a);
    long v = std::min(val_, o.val_);
    if (a <= v) return zero_to(a);
    BigInt s = unit_ * pow3(val_ - v) + o.unit_ * pow3(o.val_ - v);
    return make(v, s, static_cast<int>(a - v));
}

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
    if (zero_ || o.zero_) {
        long va = zero_ ? val_ : val_;
        long vb = o.zero_ ? o.val_ : o.val_;
        return zero_to(va + vb);
    }
    int p = std::min(prec_, o.prec_);
    return make(val_ + o.val_, unit_ * o.unit_, p);
}

PadicNumber PadicNumber::inverse() const {
    if (zero_) throw inversion_of_zero{};
    PadicNumber x;
    x.zero_ = false;
    x.val_ = -val_;
    x.prec_ = prec_;
    x.unit_ = mod_inverse(unit_, pow3(prec_));
    return x;
}

PadicNumber PadicNumber::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    PadicNumber r = from_int(1, zero_ ? 1 : prec_);
    PadicNumber b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        if (n >>= 1) b = b * b;
    }
    return r;
}

PadicNumber PadicNumber::truncated(long a) const {
    if (zero_) return zero_to(std::min(val_, a));
    if (a >= abs_precision()) return *this;
    if (a <= val_) return zero_to(a);
    return make(val_, unit_, static_cast<int>(a - val_));
}

PadicNumber PadicNumber::shifted(long k) const {
    PadicNumber x = *this;
    x.val_ += k;
    return x;
}

int PadicNumber::leading_digit() const {
    if (zero_) throw std::domain_error("leading digit of zero");
    return static_cast<int>(unit_ % 3);
}

BigInt PadicNumber::canonical_integer() const {
    if (zero_) return 0;
    if (val_ < 0) throw std::domain_error("canonical_integer: negative valuation");
    return unit_ * pow3(val_);
}

std::string PadicNumber::str() const {
    std::ostringstream os;
    if (zero_) {
        os << "O(3^" << val_ << ")";
    } else {
        os << unit_;
        if (val_ != 0) os << "*3^" << val_;
        os << " + O(3^" << abs_precision() << ")";
    }
    return os.str();
}

std::optional<PadicNumber> padic_sqrt(const PadicNumber& x) {
    if (x.is_zero()) return PadicNumber::zero_to((x.abs_precision() + 1) / 2);
    long v = x.valuation_int();
    if (v % 2 != 0) return std::nullopt;
    if (x.leading_digit() != 1) return std::nullopt;
    PadicNumber u = x.shifted(-v);
    // Newton on y^2 - u with seed 1 (derivative 2 is a unit).
    int prec = u.precision();
    PadicNumber y = PadicNumber::from_int(1, prec);
    PadicNumber two_inv = PadicNumber::from_int(2, prec).inverse();
    long cap = newton_iteration_cap(prec);
    for (long i = 0; i < cap; ++i) {
        PadicNumber r = y * y - u;
        if (r.is_zero()) break;
        y = y - r * two_inv * y.inverse();
    }
    return y.shifted(v / 2);
}

PadicNumber poly_eval(const PadicPoly& f, const PadicNumber& x) {
    PadicNumber r = PadicNumber::zero_to(x.abs_precision() + 64);
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = r * x + *it;
    return r;
}

PadicPoly poly_derivative(const PadicPoly& f) {
    PadicPoly d;
    for (size_t i = 1; i < f.size(); ++i) {
        int prec = f[i].is_zero() ? 1 : f[i].precision();
        d.push_back(f[i] * PadicNumber::from_int(static_cast<long>(i), std::max(prec, 1)));
    }
    return d;
}

PadicPoly poly_from_integers(const std::vector<long>& coeffs, int precision) {
    PadicPoly f;
    for (long c : coeffs) f.push_back(PadicNumber::from_int(c, precision));
    return f;
}

long newton_iteration_cap(int working_precision) {
    return 2 * static_cast<long>(std::log2(std::max(2, working_precision))) + 8;
}

PadicNumber hensel_root(const PadicPoly& f, const PadicNumber& seed, const PrecisionPolicy& policy) {
    PadicPoly df = poly_derivative(f);
    PadicNumber fx = poly_eval(f, seed);
    PadicNumber dfx = poly_eval(df, seed);
    if (dfx.is_zero()) throw hensel_error("hensel: derivative vanishes at seed to precision");
    long vd = dfx.valuation_int();
    long vf = fx.is_zero() ? fx.abs_precision() : fx.valuation_int();
    if (!(vf > 2 * vd)) throw hensel_error("hensel: precondition v(f(x)) > 2 v(f'(x)) fails");
    PadicNumber x = seed;
    long target = policy.working_precision - vd;
    long cap = newton_iteration_cap(policy.working_precision);
    for (long i = 0; i < cap; ++i) {
        fx = poly_eval(f, x);
        if (fx.is_zero() || fx.valuation_int() >= target) return x;
        dfx = poly_eval(df, x);
        x = x - fx / dfx;
    }
    fx = poly_eval(f, x);
    if (fx.is_zero() || fx.valuation_int() >= policy.min_acceptable) return x;
    throw hensel_error("hensel: no convergence within iteration budget");
}

std::optional<Rational> rational_reconstruct(const PadicNumber& x, const BigInt& height_bound) {
    if (height_bound < 1) throw precondition_error("rational_reconstruct: bound must be >= 1");
    if (x.is_zero()) return Rational(0);
    int prec = x.precision();
    BigInt m = pow3(prec);
    if (height_bound * height_bound > m)
        throw precondition_error("rational_reconstruct: bound^2 exceeds 3^precision");
    BigInt r0 = m, r1 = x.unit(), s0 = 0, s1 = 1;
    while (r1 > height_bound) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    BigInt a = r1, b = s1;
    if (b == 0) return std::nullopt;
    if (b < 0) { a = -a; b = -b; }
    BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(a), b);
    if (g > 1) { a /= g; b /= g; }
    if (boost::multiprecision::abs(a) > height_bound || b > height_bound) return std::nullopt;
    if (b % 3 == 0) return std::nullopt;
    if (mod_pos(a - b * x.unit(), m) != 0) return std::nullopt;
    Rational q(a, b);
    long v = x.valuation_int();
    if (v > 0) {
        q *= Rational(pow3(v));
        if (boost::multiprecision::abs(boost::multiprecision::numerator(q)) > height_bound)
            return std::nullopt;
    } else if (v < 0) {
        q /= Rational(pow3(-v));
        if (boost::multiprecision::denominator(q) > height_bound) return std::nullopt;
    }
    return q;
}

}  // namespace phimod
