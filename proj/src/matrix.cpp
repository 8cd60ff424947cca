#include "phimod/matrix.hpp"

#include <sstream>

namespace phimod {

static int mod_f(int t, int f) { return ((t % f) + f) % f; }

K0Matrix::K0Matrix(K0Value a, K0Value b, K0Value c, K0Value d, int f, int twist)
    : f_(f), twist_(mod_f(twist, f)) {
    if (f != 1 && f != 2) throw precondition_error("K0Matrix: f must be 1 or 2");
    e_[0][0] = std::move(a);
    e_[0][1] = std::move(b);
    e_[1][0] = std::move(c);
    e_[1][1] = std::move(d);
}

K0Matrix K0Matrix::identity(int f) {
    return K0Matrix(K0Value::from_int(1), K0Value::from_int(0),
                    K0Value::from_int(0), K0Value::from_int(1), f, 0);
}

K0Matrix K0Matrix::scalar(const K0Value& s, int f) {
    return K0Matrix(s, K0Value::from_int(0), K0Value::from_int(0), s, f, 0);
}

K0Matrix K0Matrix::from_rationals(const Rational& a, const Rational& b,
                                  const Rational& c, const Rational& d,
                                  int f, int twist) {
    return K0Matrix(K0Value::from_rational(a), K0Value::from_rational(b),
                    K0Value::from_rational(c), K0Value::from_rational(d), f, twist);
}

K0Matrix K0Matrix::from_ints(long a, long b, long c, long d, int f, int twist) {
    return from_rationals(Rational(a), Rational(b), Rational(c), Rational(d), f, twist);
}

bool K0Matrix::is_exact() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!e_[i][j].is_exact()) return false;
    return true;
}

bool K0Matrix::is_zero() const {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!e_[i][j].is_zero()) return false;
    return true;
}

K0Value K0Matrix::det() const { return e_[0][0] * e_[1][1] - e_[0][1] * e_[1][0]; }
K0Value K0Matrix::trace() const { return e_[0][0] + e_[1][1]; }

K0Matrix K0Matrix::frob(int m) const {
    K0Matrix r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j].frob(m, f_);
    return r;
}

K0Matrix K0Matrix::operator+(const K0Matrix& o) const {
    if (f_ != o.f_ || twist_ != o.twist_)
        throw precondition_error("K0Matrix: addition needs equal f and twist");
    K0Matrix r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j] + o.e_[i][j];
    return r;
}

K0Matrix K0Matrix::operator-(const K0Matrix& o) const { return *this + (-o); }

K0Matrix K0Matrix::operator*(const K0Value& s) const {
    K0Matrix r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = e_[i][j] * s;
    return r;
}

K0Matrix K0Matrix::operator-() const {
    K0Matrix r = *this;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r.e_[i][j] = -e_[i][j];
    return r;
}

K0Matrix K0Matrix::compose(const K0Matrix& o) const {
    if (f_ != o.f_) throw precondition_error("K0Matrix: composing over different K0");
    K0Matrix b = o.frob(twist_);
    K0Matrix r;
    r.f_ = f_;
    r.twist_ = mod_f(twist_ + o.twist_, f_);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.e_[i][j] = e_[i][0] * b.e_[0][j] + e_[i][1] * b.e_[1][j];
    return r;
}

K0Matrix K0Matrix::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    K0Matrix r = identity(f_);
    K0Matrix b = *this;
    while (n > 0) {
        if (n & 1) r = r.compose(b);
        if (n >>= 1) b = b.compose(b);
    }
    return r;
}

K0Matrix K0Matrix::inverse() const {
    K0Value d = det();
    if (d.is_zero()) throw inversion_of_zero{};
    K0Value di = d.inverse();
    K0Matrix adj(e_[1][1] * di, -(e_[0][1] * di), -(e_[1][0] * di), e_[0][0] * di, f_, 0);
    // inverse of x |-> M sigma^t(x) is x |-> sigma^{-t}(M^{-1}) sigma^{-t}(x)
    K0Matrix r = adj.frob(-twist_);
    r.twist_ = mod_f(-twist_, f_);
    return r;
}

K0Vec K0Matrix::apply(const K0Vec& v) const {
    K0Value x = v[0].frob(twist_, f_), y = v[1].frob(twist_, f_);
    return {e_[0][0] * x + e_[0][1] * y, e_[1][0] * x + e_[1][1] * y};
}

bool K0Matrix::equals_to_precision(const K0Matrix& o) const {
    if (f_ != o.f_ || twist_ != o.twist_) return false;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (!e_[i][j].equals_to_precision(o.e_[i][j])) return false;
    return true;
}

std::string K0Matrix::str() const {
    std::ostringstream os;
    os << "[[" << e_[0][0].str() << ", " << e_[0][1].str() << "], ["
       << e_[1][0].str() << ", " << e_[1][1].str() << "]]";
    if (twist_) os << " * sigma^" << twist_;
    return os.str();
}

std::optional<std::array<Rational, 2>> rational_char_poly(const K0Matrix& M,
                                                          const BigInt& height_bound) {
    if (M.twist() != 0)
        throw precondition_error("rational_char_poly: matrix must be K0-linear (twist 0)");
    auto tr = M.trace().as_rational(height_bound);
    auto dt = M.det().as_rational(height_bound);
    if (!tr || !dt) return std::nullopt;
    // X^2 + a1 X + a0
    return std::array<Rational, 2>{-*tr, *dt};
}

}  // namespace phimod
