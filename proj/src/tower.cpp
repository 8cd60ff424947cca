#include "phimod/tower.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace phimod {

static Val rational_val3(const Rational& q) {
    if (q == 0) return Val::inf();
    long v = 0;
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    while (n % 3 == 0) { n /= 3; ++v; }
    while (d % 3 == 0) { d /= 3; --v; }
    return Val::of(Rational(v));
}

std::shared_ptr<const TowerField> TowerField::make(std::string label, int f,
                                                   std::vector<Rational> eisenstein) {
    if (f != 1 && f != 2) throw precondition_error("TowerField: f must be 1 or 2");
    if (eisenstein.empty()) throw precondition_error("TowerField: empty Eisenstein stage");
    for (size_t i = 0; i < eisenstein.size(); ++i) {
        Val v = rational_val3(eisenstein[i]);
        if (!v.infinite && v.v < 1)
            throw precondition_error("TowerField: coefficient of valuation < 1 in " + label);
        if (i == 0 && !(v == Val::of(1)))
            throw precondition_error("TowerField: constant term valuation != 1 in " + label);
    }
    auto K = std::shared_ptr<TowerField>(new TowerField());
    K->label_ = std::move(label);
    K->f_ = f;
    K->e_ = static_cast<int>(eisenstein.size());
    K->eis_ = std::move(eisenstein);
    for (size_t i = 0; i < K->eis_.size(); ++i)
        if (K->eis_[i] != 0) K->fold_.emplace_back(i, K0Value::from_rational(K->eis_[i]));
    return K;
}

FieldElement::FieldElement(TowerFieldPtr home, std::vector<K0Value> coords)
    : home_(std::move(home)), c_(std::move(coords)) {
    if (static_cast<int>(c_.size()) != home_->e())
        throw precondition_error("FieldElement: coordinate count != e");
}

FieldElement FieldElement::zero(const TowerFieldPtr& K) {
    return FieldElement(K, std::vector<K0Value>(static_cast<size_t>(K->e())));
}

FieldElement FieldElement::one(const TowerFieldPtr& K) {
    return from_scalar(K, K0Value::from_int(1));
}

FieldElement FieldElement::pi(const TowerFieldPtr& K) {
    if (K->e() == 1) {
        // pi is the root of the linear Eisenstein stage: X + a0 = 0
        return from_scalar(K, K0Value::from_rational(-K->eisenstein()[0]));
    }
    FieldElement x = zero(K);
    x.c_[1] = K0Value::from_int(1);
    return x;
}

FieldElement FieldElement::from_scalar(const TowerFieldPtr& K, const K0Value& c) {
    FieldElement x = zero(K);
    x.c_[0] = c;
    return x;
}

bool FieldElement::is_zero() const {
    for (const auto& c : c_)
        if (!c.is_zero()) return false;
    return true;
}

Val FieldElement::valuation() const {
    Val best = Val::inf();
    int e = home_->e();
    for (int i = 0; i < e; ++i) {
        if (c_[static_cast<size_t>(i)].is_zero()) continue;
        Val v = c_[static_cast<size_t>(i)].valuation();
        v.v += Rational(i, e);
        if (v < best) best = v;
    }
    return best;
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    if (home_ != o.home_) throw field_mismatch{};
    FieldElement r = *this;
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    if (home_ != o.home_) throw field_mismatch{};
    size_t e = c_.size();
    std::vector<K0Value> prod(2 * e - 1);
    for (size_t i = 0; i < e; ++i) {
        if (c_[i].is_zero()) continue;
        for (size_t j = 0; j < e; ++j) prod[i + j] = prod[i + j] + c_[i] * o.c_[j];
    }
    // fold pi^k for k >= e via pi^e = -sum a_i pi^i
    const auto& fold = home_->fold_terms();
    for (size_t k = prod.size(); k-- > e;) {
        if (prod[k].is_zero()) continue;
        for (const auto& [i, ai] : fold)
            prod[k - e + i] = prod[k - e + i] - prod[k] * ai;
    }
    prod.resize(e);
    return FieldElement(home_, std::move(prod));
}

FieldElement FieldElement::operator*(const K0Value& s) const {
    FieldElement r = *this;
    for (auto& c : r.c_) c = c * s;
    return r;
}

/// Solves the square K0-linear system A x = b by Gaussian elimination with
/// minimal-valuation pivoting.
static std::vector<K0Value> solve_k0(std::vector<std::vector<K0Value>> A,
                                     std::vector<K0Value> b) {
    size_t n = A.size();
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        Val best = Val::inf();
        for (size_t i = c; i < n; ++i) {
            if (A[i][c].is_zero()) continue;
            Val v = A[i][c].valuation();
            if (v < best) { best = v; p = i; }
        }
        if (A[p][c].is_zero()) throw inversion_of_zero{};
        std::swap(A[c], A[p]);
        std::swap(b[c], b[p]);
        K0Value inv = A[c][c].inverse();
        for (size_t j = c; j < n; ++j) A[c][j] = A[c][j] * inv;
        b[c] = b[c] * inv;
        for (size_t i = 0; i < n; ++i) {
            if (i == c || A[i][c].is_zero()) continue;
            K0Value f = A[i][c];
            for (size_t j = c; j < n; ++j) A[i][j] = A[i][j] - f * A[c][j];
            b[i] = b[i] - f * b[c];
        }
    }
    return b;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw inversion_of_zero{};
    size_t e = c_.size();
    // column j of A = coordinates of (*this) * pi^j
    std::vector<std::vector<K0Value>> A(e, std::vector<K0Value>(e));
    FieldElement p = one(home_);
    FieldElement piK = pi(home_);
    for (size_t j = 0; j < e; ++j) {
        FieldElement col = *this * p;
        for (size_t i = 0; i < e; ++i) A[i][j] = col.c_[i];
        if (j + 1 < e) p = p * piK;
    }
    std::vector<K0Value> b(e);
    b[0] = K0Value::from_int(1);
    return FieldElement(home_, solve_k0(std::move(A), std::move(b)));
}

FieldElement FieldElement::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    FieldElement r = one(home_);
    FieldElement b = *this;
    while (n > 0) {
        if (n & 1) r = r * b;
        if (n >>= 1) b = b * b;
    }
    return r;
}

FieldElement FieldElement::coeff_frob(int m) const {
    FieldElement r = *this;
    for (auto& c : r.c_) c = c.frob(m, home_->f());
    return r;
}

FieldElement FieldElement::demoted(int precision) const {
    FieldElement r = *this;
    for (auto& c : r.c_) c = c.demoted(precision);
    return r;
}

bool FieldElement::equals_to_precision(const FieldElement& o) const {
    return (*this - o).is_zero();
}

Val FieldElement::residual_valuation(const FieldElement& o) const {
    return (*this - o).valuation();
}

std::string FieldElement::str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << c_[i].str() << ")";
        if (i > 0) os << "*pi^" << i;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

FieldElement eval_rational_poly(const std::vector<Rational>& poly, const FieldElement& x) {
    FieldElement r = FieldElement::zero(x.home());
    for (auto it = poly.rbegin(); it != poly.rend(); ++it)
        r = r * x + FieldElement::from_scalar(x.home(), K0Value::from_rational(*it));
    return r;
}

static std::vector<K0Value> residue_digits(int f) {
    std::vector<K0Value> d;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < (f == 2 ? 3 : 1); ++b)
            d.push_back(K0Value(GaussianRational(Rational(a), Rational(b))));
    }
    return d;
}

/// pi-normalized valuation e*v3(x); LONG_MAX stands for infinity.
static long pi_val(const FieldElement& x, int e) {
    Val v = x.valuation();
    if (v.infinite) return std::numeric_limits<long>::max();
    Rational r = v.v * e;
    return static_cast<long>(boost::multiprecision::numerator(r) /
                             boost::multiprecision::denominator(r));
}

static FieldElement newton_root(const std::vector<Rational>& poly,
                                const std::vector<Rational>& dpoly,
                                FieldElement x, const PrecisionPolicy& policy) {
    if (eval_rational_poly(poly, x).is_zero()) return x;  // exact root: keep it exact
    // iterate on the 3-adic layer; exact iterates would square in height
    x = x.demoted(policy.working_precision);
    long cap = newton_iteration_cap(policy.working_precision);
    for (long it = 0; it < cap; ++it) {
        FieldElement fx = eval_rational_poly(poly, x);
        Val vf = fx.valuation();
        FieldElement dfx = eval_rational_poly(dpoly, x);
        Val vd = dfx.valuation();
        if (vf.infinite || (!vd.infinite && vf.v + vd.v >= Rational(policy.working_precision)))
            return x;
        x = x - fx / dfx;
    }
    FieldElement fx = eval_rational_poly(poly, x);
    Val vf = fx.valuation();
    if (vf.infinite || vf.v >= policy.min_acceptable) return x;
    throw hensel_error("field Newton: no convergence within iteration budget");
}

/// Deterministic sort key: canonical digit strings of the integral
/// coordinates at a fixed shared precision.
static std::vector<BigInt> root_key(const FieldElement& x, int prec) {
    std::vector<BigInt> key;
    for (const auto& c : x.coords()) {
        key.push_back(c.re(prec).truncated(prec).canonical_integer());
        if (x.home()->f() == 2)
            key.push_back(c.im(prec).truncated(prec).canonical_integer());
    }
    return key;
}

static constexpr long kValInf = std::numeric_limits<long>::max() / 4;

/// pi-normalized valuation with precision awareness.  A coordinate that is
/// zero to precision only gives a floor (the valuation is at least the
/// absolute precision); the second component reports whether the returned
/// minimum is attained by a genuinely nonzero coordinate, i.e. exact.
static std::pair<long, bool> pi_val_bound(const FieldElement& x, int e) {
    long known = kValInf, floor_ = kValInf;
    for (int i = 0; i < e; ++i) {
        const K0Value& c = x.coord(i);
        if (c.is_exact()) {
            Val v = c.valuation();
            if (v.infinite) continue;
            long cv = static_cast<long>(boost::multiprecision::numerator(v.v));
            known = std::min(known, cv * e + i);
        } else {
            auto comp = [&](const PadicNumber& p) {
                if (p.is_zero())
                    floor_ = std::min(floor_, p.abs_precision() * e + i);
                else
                    known = std::min(known, p.valuation_int() * e + i);
            };
            comp(c.re(1));
            comp(c.im(1));
        }
    }
    if (known <= floor_) return {known, known < kValInf};
    return {floor_, false};
}

/// Coordinates truncated onto the approximate layer at absolute precision A
/// (in v3 units); keeps filtering arithmetic on tiny integers.
static FieldElement truncate_abs(const FieldElement& x, long A) {
    std::vector<K0Value> cs;
    int p = static_cast<int>(A) + 8;
    for (const auto& c : x.coords())
        cs.push_back(K0Value::approx(c.re(p).truncated(A), c.im(p).truncated(A)));
    return FieldElement(x.home(), std::move(cs));
}

/// Hasse derivatives P^{[j]}: coefficient of X^i in P^{[j]} is C(i,j) a_i.
static std::vector<std::vector<Rational>> hasse_derivatives(const std::vector<Rational>& poly) {
    size_t n = poly.size();
    std::vector<std::vector<Rational>> h(n);
    for (size_t j = 0; j < n; ++j) {
        for (size_t i = j; i < n; ++i) {
            BigInt binom = 1;
            for (size_t t = 0; t < j; ++t) binom = binom * BigInt(i - t) / BigInt(t + 1);
            h[j].push_back(poly[i] * Rational(binom));
        }
    }
    return h;
}

std::vector<FieldElement> find_roots_in_field(const std::vector<Rational>& poly,
                                              const TowerFieldPtr& K,
                                              const PrecisionPolicy& policy) {
    int e = K->e();
    size_t deg = poly.size() - 1;
    std::vector<Rational> dpoly;
    for (size_t i = 1; i < poly.size(); ++i) dpoly.push_back(poly[i] * Rational(i));
    std::vector<std::vector<Rational>> hasse = hasse_derivatives(poly);

    std::vector<K0Value> digits = residue_digits(K->f());
    std::vector<FieldElement> roots;
    auto record = [&](const FieldElement& r) {
        for (const auto& seen : roots) {
            Val d = seen.residual_valuation(r);
            if (d.infinite || d.v >= Rational(policy.min_acceptable)) return;
        }
        roots.push_back(r);
    };

    struct Candidate {
        FieldElement y;   // exact digits fixed so far
        FieldElement yt;  // truncation of y at absolute precision A
        long A;
    };
    std::vector<Candidate> candidates = {
        {FieldElement::zero(K), truncate_abs(FieldElement::zero(K), 4), 4}};
    FieldElement piK = FieldElement::pi(K);
    FieldElement pik = FieldElement::one(K);  // pi^k
    long level_cap = static_cast<long>(policy.working_precision) * e;
    for (long k = 0; k < level_cap && !candidates.empty(); ++k) {
        // filtering only needs valuations up to ~2(k+2) pi-units
        long A = (2 * (k + 2)) / e + 4;
        std::vector<FieldElement> digit_t;  // truncations of pi^k * d
        for (const auto& d : digits)
            digit_t.push_back(truncate_abs(pik * d, A));
        std::vector<Candidate> next;
        for (auto& cand : candidates) {
            if (cand.A < A) {
                cand.yt = truncate_abs(cand.y, A);
                cand.A = A;
            }
            for (size_t di = 0; di < digits.size(); ++di) {
                const K0Value& d = digits[di];
                FieldElement y = d.is_zero() ? cand.y : cand.y + pik * d;
                FieldElement yt = d.is_zero() ? cand.yt : cand.yt + digit_t[di];
                // powers of yt, shared by all Hasse derivative evaluations
                std::vector<FieldElement> pw = {FieldElement::one(K)};
                for (size_t i = 1; i <= deg; ++i) pw.push_back(pw.back() * yt);
                auto eval_h = [&](const std::vector<Rational>& h) {
                    FieldElement r = FieldElement::zero(K);
                    for (size_t i = 0; i < h.size(); ++i) {
                        if (h[i] == 0) continue;
                        r = r + pw[i] * K0Value::from_rational(h[i]);
                    }
                    return r;
                };
                auto [v0, v0_exact] = pi_val_bound(eval_h(hasse[0]), e);
                long v1 = pi_val_bound(eval_h(hasse[1]), e).first;
                // Taylor bound at a root: v0 >= min(v1 + k+1, 2(k+1))
                long threshold = std::min(v1 >= kValInf ? kValInf : v1 + k + 1, 2 * (k + 1));
                if (v0 < threshold) continue;
                // Newton polygon of P(y + pi^{k+1} X): an integral root X
                // (hence any extension of this prefix) needs some j >= 1
                // with v(P^{[j]}(y)) + j(k+1) <= v(P(y)).  Only prune on an
                // exactly known v0; a floor value would over-prune.
                if (v0_exact) {
                    long npmin = kValInf;
                    for (size_t j = 1; j <= deg && npmin > v0; ++j) {
                        long vj = pi_val_bound(eval_h(hasse[j]), e).first;
                        if (vj < kValInf) npmin = std::min(npmin, vj + static_cast<long>(j) * (k + 1));
                    }
                    if (npmin > v0) continue;
                }
                // Once k >= v(P'(y)), other roots differ from y inside the
                // already-fixed digits: the branch holds at most one root
                // and can be consumed by Newton.
                if (v1 < kValInf && k >= v1) {
                    FieldElement fy = eval_rational_poly(poly, y);
                    long vf = fy.is_zero() ? kValInf : pi_val(fy, e);
                    if (vf > 2 * v1) {
                        record(newton_root(poly, dpoly, y, policy));
                        continue;
                    }
                }
                next.push_back({std::move(y), std::move(yt), A});
            }
        }
        candidates = std::move(next);
        pik = pik * piK;
    }
    if (!candidates.empty())
        throw hensel_error("find_roots_in_field: precision exhausted before separation");

    int key_prec = policy.min_acceptable;
    std::sort(roots.begin(), roots.end(), [&](const FieldElement& a, const FieldElement& b) {
        return root_key(a, key_prec) < root_key(b, key_prec);
    });
    return roots;
}

}  // namespace phimod
