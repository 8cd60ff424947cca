#include "phimod/phigal.hpp"

#include "phimod/linalg.hpp"
#include "phigal_detail.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace phimod {

using detail::apply_matrix_K;
using detail::galois_apply_K;
using detail::k_cross;

// ---------------------------------------------------------------- ProjQ3

ProjQ3 ProjQ3::of(const Rational& x, const Rational& y) {
    if (x == 0 && y == 0) throw precondition_error("ProjQ3: (0,0) is not projective");
    if (y == 0) return infinity();
    return finite(x / y);
}

const Rational& ProjQ3::alpha() const {
    if (inf_) throw precondition_error("ProjQ3: alpha() at infinity");
    return a_;
}

std::string ProjQ3::str() const {
    if (inf_) return "inf";
    std::ostringstream os;
    os << a_;
    return os.str();
}

// ------------------------------------------------------------ ClassLabel

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Dc: return "Dc";
        case Kind::Dpc: return "Dpc";
        case Kind::Dpcg: return "Dpcg";
        case Kind::Dpcng: return "Dpcng";
    }
    return "?";
}

bool ClassLabel::operator==(const ClassLabel& o) const {
    return kind == o.kind && e == o.e && trace == o.trace && mu == o.mu &&
           field_index == o.field_index && epsilon == o.epsilon && alpha == o.alpha;
}

std::string ClassLabel::str() const {
    std::ostringstream os;
    os << kind_name(kind) << "(" << e << ";" << trace;
    if (mu) os << "," << *mu;
    if (field_index) os << ";" << *field_index;
    if (epsilon) os << ";" << *epsilon;
    if (alpha) os << ";" << alpha->str();
    os << ")";
    return os.str();
}

// ----------------------------------------------------------- K helpers

namespace detail {

std::pair<FieldElement, FieldElement> apply_matrix_K(const K0Matrix& M, const FieldElement& x,
                                                     const FieldElement& y) {
    return {x * M.at(0, 0) + y * M.at(0, 1), x * M.at(1, 0) + y * M.at(1, 1)};
}

FieldElement k_cross(const FieldElement& x, const FieldElement& y, const FieldElement& xp,
                     const FieldElement& yp) {
    return x * yp - y * xp;
}

std::pair<FieldElement, FieldElement> galois_apply_K(const PhiGalModule& D,
                                                     const std::string& name,
                                                     const FieldElement& x,
                                                     const FieldElement& y) {
    const Automorphism& g = D.group->generator(name);
    const K0Matrix& M = D.galois.at(name);
    return apply_matrix_K(M, g.apply(x), g.apply(y));
}

bool fil_is_galois_stable(const FilteredModule& D) {
    for (const auto& [name, M] : D.base.galois) {
        auto [gx, gy] = galois_apply_K(D.base, name, D.fil_x, D.fil_y);
        if (!k_cross(gx, gy, D.fil_x, D.fil_y).is_zero()) return false;
    }
    return true;
}

K0Matrix element_matrix(const PhiGalModule& D, const std::string& word) {
    int f = D.field->f();
    K0Matrix M = K0Matrix::identity(f);
    if (word == "id") return M;
    std::istringstream is(word);
    std::string tok;
    while (std::getline(is, tok, '*')) M = M.compose(D.galois.at(tok));
    return M;
}

}  // namespace detail

// ------------------------------------------------------------ validation

static bool is_identity_mod_twist(const K0Matrix& M, int f) {
    if (((M.twist() % f) + f) % f != 0) return false;
    K0Value one = K0Value::from_int(1);
    return (M.at(0, 0) - one).is_zero() && M.at(0, 1).is_zero() && M.at(1, 0).is_zero() &&
           (M.at(1, 1) - one).is_zero();
}

static const GeneratorSpec& spec_of(const PhiGalModule& D, const std::string& name) {
    for (const auto& s : D.group->presentation().generators)
        if (s.name == name) return s;
    throw precondition_error("module references unknown generator " + name);
}

static K0Matrix matrix_word(const PhiGalModule& D, const RelationWord& w) {
    int f = D.field->f();
    K0Matrix M = K0Matrix::identity(f);
    for (const auto& [name, n] : w) {
        long ord = spec_of(D, name).order;
        long k = ((n % ord) + ord) % ord;
        M = M.compose(D.galois.at(name).pow(k));
    }
    return M;
}

void validate_module(const PhiGalModule& D) {
    if (!D.field || !D.group) throw precondition_error("module missing field or group");
    int f = D.field->f();
    if (D.phi.twist() != 1 % f) throw precondition_error("phi must have twist 1");
    if (!D.phi.is_invertible()) throw precondition_error("phi is not bijective");
    for (const auto& name : D.group->generator_names())
        if (!D.galois.count(name))
            throw precondition_error("module missing generator matrix " + name);
    for (const auto& [name, M] : D.galois) {
        const GeneratorSpec& s = spec_of(D, name);
        if (((M.twist() - s.unramified_exponent) % f + f) % f != 0)
            throw precondition_error("generator " + name + " twist mismatch");
        if (s.unramified_exponent % f == 0 && M.twist() % f != 0)
            throw precondition_error("inertia generator " + name + " must act K0-linearly");
        K0Matrix lhs = D.phi.compose(M), rhs = M.compose(D.phi);
        if (!(lhs - rhs).is_zero())
            throw precondition_error("phi does not commute with generator " + name);
        if (!is_identity_mod_twist(matrix_word(D, RelationWord{{name, s.order}}), f))
            throw precondition_error("generator " + name + " violates its order");
    }
    for (const auto& rel : D.group->presentation().relations)
        if (!is_identity_mod_twist(matrix_word(D, rel), f))
            throw precondition_error("module violates a group relation");
}

// --------------------------------------------------- canonical modules

namespace {

const std::map<int, std::vector<int>>& mu_table() {
    static const std::map<int, std::vector<int>> t = {
        {-3, {1, 2}}, {0, {-1, 1}}, {3, {-2, -1}}};
    return t;
}

bool mu_allowed(int a, int mu) {
    auto it = mu_table().find(a);
    if (it == mu_table().end()) return false;
    return std::find(it->second.begin(), it->second.end(), mu) != it->second.end();
}

/// The unit root u of X^2 + aX + 3 for ordinary a (3-adically, via the
/// quadratic formula; a^2 - 12 is a unit square mod 3).
K0Value ordinary_unit(int a) {
    auto s = k0_sqrt(K0Value::from_rational(Rational(a) * a - 12), 1);
    if (!s) throw precondition_error("ordinary trace without a unit root");
    K0Value half = K0Value::from_rational(Rational(1, 2));
    for (int sign = 0; sign < 2; ++sign) {
        K0Value u = (K0Value::from_int(-a) + (sign ? -*s : *s)) * half;
        Val v = u.valuation();
        if (!v.infinite && v.v == 0) return u;
    }
    throw precondition_error("no unit root found");
}

K0Matrix minus_identity(int f) { return K0Matrix::from_ints(-1, 0, 0, -1, f, 0); }

}  // namespace

namespace detail {

PhiGalModule canonical_base_over(const std::string& field_label, const ClassLabel& L) {
    PhiGalModule M;
    M.field = get_field(field_label);
    M.group = &get_group(field_label);
    int f = M.field->f();
    switch (L.kind) {
        case Kind::Dc: {
            if (L.e != 1 && L.e != 2) throw invalid_label("Dc: e must be 1 or 2");
            if (L.trace < -3 || L.trace > 3) throw invalid_label("Dc: |trace| <= 3 required");
            if (L.trace % 3 == 0) {
                M.phi = K0Matrix::from_ints(0, -3, 1, -L.trace, f, 1);
            } else {
                K0Value u = ordinary_unit(L.trace);
                M.phi = K0Matrix(u, K0Value(), K0Value(), K0Value::from_int(3) / u, f, 1);
            }
            if (L.e == 2) M.galois.emplace("t2", minus_identity(f));
            break;
        }
        case Kind::Dpcg: {
            if (L.e != 3 && L.e != 6) throw invalid_label("Dpcg: e must be 3 or 6");
            if (!L.mu || !mu_allowed(L.trace, *L.mu))
                throw invalid_label("Dpcg: (trace, mu) outside the root table");
            long lam = *L.mu, a = L.trace;
            M.phi = K0Matrix::from_ints(lam, -2 * lam - a, 2 * lam + a, -lam - a, f, 1);
            M.galois.emplace("t3", K0Matrix::from_ints(0, -1, 1, -1, f, 0));
            if (L.e == 6) M.galois.emplace("t2", minus_identity(f));
            break;
        }
        case Kind::Dpcng: {
            if (L.e != 3 && L.e != 6) throw invalid_label("Dpcng: e must be 3 or 6");
            if (L.trace != 0) throw invalid_label("Dpcng: trace must be 0");
            M.phi = K0Matrix::from_ints(0, -3, 1, 0, f, 1);
            M.galois.emplace(
                "t3", K0Matrix(K0Value::from_rational(Rational(-1, 2)),
                               K0Value::i_times(Rational(3, 2)), K0Value::i_times(Rational(1, 2)),
                               K0Value::from_rational(Rational(-1, 2)), f, 0));
            M.galois.emplace("w", K0Matrix::from_ints(1, 0, 0, 1, f, 1));
            if (L.e == 6) M.galois.emplace("t2", minus_identity(f));
            break;
        }
        case Kind::Dpc: {
            if (L.e != 4 && L.e != 12) throw invalid_label("Dpc: e must be 4 or 12");
            if (L.trace != 0) throw invalid_label("Dpc: trace must be 0");
            M.phi = K0Matrix::from_ints(0, -3, 1, 0, f, 1);
            M.galois.emplace("t4", K0Matrix(K0Value::i_times(1), K0Value(), K0Value(),
                                            K0Value::i_times(-1), f, 0));
            if (L.e == 12) {
                if (!L.epsilon || (*L.epsilon != 0 && *L.epsilon != 1))
                    throw invalid_label("Dpc(12): epsilon must be 0 or 1");
                int s = *L.epsilon == 0 ? -1 : 1;  // (-1)^{eps+1}
                M.galois.emplace(
                    "t3", K0Matrix(K0Value::from_rational(Rational(-1, 2)),
                                   K0Value::from_rational(Rational(3 * s, 2)),
                                   K0Value::from_rational(Rational(-s, 2)),
                                   K0Value::from_rational(Rational(-1, 2)), f, 0));
            }
            M.galois.emplace("w", K0Matrix::from_ints(1, 0, 0, 1, f, 1));
            break;
        }
    }
    validate_module(M);
    return M;
}

}  // namespace detail

static std::string field_for_label(const ClassLabel& L) {
    switch (L.kind) {
        case Kind::Dc: return L.e == 1 ? "Q3" : "Q3(sqrt3)";
        case Kind::Dpcg: return L.e == 3 ? "Lg" : "Lg(sqrt3)";
        case Kind::Dpcng: return L.e == 3 ? "Lng-closure" : "Lng-closure(sqrt3)";
        case Kind::Dpc:
            if (L.e == 4) return "Q3(zeta4,pi4)";
            if (!L.field_index || *L.field_index < 1 || *L.field_index > 5)
                throw invalid_label("Dpc(12): field index must be in 1..5");
            return "K" + std::to_string(*L.field_index);
    }
    throw invalid_label("unknown kind");
}

PhiGalModule canonical_base(const ClassLabel& label) {
    return detail::canonical_base_over(field_for_label(label), label);
}

FilteredModule canonical_module(const ClassLabel& label) {
    PhiGalModule base = canonical_base(label);
    ProjQ3 t = label.alpha ? *label.alpha : ProjQ3::finite(0);
    return filtration_from_point(base, t);
}

std::vector<ClassLabel> finite_row_labels() {
    std::vector<ClassLabel> out;
    for (int e : {1, 2}) {
        for (int a : {-3, 0, 3}) {
            ClassLabel L{Kind::Dc, e, a};
            L.alpha = ProjQ3::finite(0);
            out.push_back(L);
        }
        for (int a : {-2, -1, 1, 2})
            for (int al : {0, 1}) {
                ClassLabel L{Kind::Dc, e, a};
                L.alpha = ProjQ3::finite(al);
                out.push_back(L);
            }
    }
    for (int e : {3, 6})
        for (const auto& [a, mus] : mu_table())
            for (int mu : mus) {
                ClassLabel L{Kind::Dpcg, e, a};
                L.mu = mu;
                out.push_back(L);
            }
    return out;
}

std::vector<ClassLabel> p1_row_labels() {
    std::vector<ClassLabel> out;
    out.push_back(ClassLabel{Kind::Dpc, 4, 0});
    out.push_back(ClassLabel{Kind::Dpcng, 3, 0});
    out.push_back(ClassLabel{Kind::Dpcng, 6, 0});
    for (int i = 1; i <= 5; ++i)
        for (int eps : {0, 1}) {
            ClassLabel L{Kind::Dpc, 12, 0};
            L.field_index = i;
            L.epsilon = eps;
            out.push_back(L);
        }
    return out;
}

// --------------------------------------------------------- fixed plane

static std::vector<PadicNumber> flatten_field_element(const FieldElement& x, int prec) {
    std::vector<PadicNumber> out;
    const TowerFieldPtr& K = x.home();
    out.reserve(static_cast<size_t>(K->e() * K->f()));
    for (int i = 0; i < K->e(); ++i) {
        out.push_back(x.coord(i).re(prec));
        if (K->f() == 2) out.push_back(x.coord(i).im(prec));
    }
    return out;
}

static BigInt ceil_div(const BigInt& n, const BigInt& d) {
    BigInt q = n / d;  // truncates toward zero
    if (n % d > 0) q += 1;
    return q;
}

/// Scales v (a pair of K-coordinates) by a power of 3 so that its minimal
/// valuation lands in (-1/2, 1/2]; a canonical representative of the line.
static void normalize_plane_vector(FieldElement& x, FieldElement& y) {
    Val vx = x.valuation(), vy = y.valuation();
    Val v = vx < vy ? vx : vy;
    if (v.infinite) throw descent_failure("fixed plane contains a zero vector");
    Rational r = v.v - Rational(1, 2);
    BigInt k = ceil_div(numerator(r), denominator(r));
    long kl = static_cast<long>(k);
    Rational scale = kl >= 0 ? Rational(1) / Rational(pow3(kl)) : Rational(pow3(-kl));
    K0Value s = K0Value::from_rational(scale);
    x = x * s;
    y = y * s;
}

const PlaneBasis& fixed_plane_in_DK(const PhiGalModule& D) {
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (D.plane_cache) return *D.plane_cache;
    }
    const TowerFieldPtr& K = D.field;
    int e = K->e(), f = K->f();
    auto plane = std::make_shared<PlaneBasis>();
    if (D.group->generator_names().empty()) {
        plane->x1 = FieldElement::one(K);
        plane->y1 = FieldElement::zero(K);
        plane->x2 = FieldElement::zero(K);
        plane->y2 = FieldElement::one(K);
    } else {
        int prec = PrecisionPolicy{}.working_precision;
        size_t n = static_cast<size_t>(2 * e * f);
        auto uidx = [&](int j, int i, int part) {
            return static_cast<size_t>((j * e + i) * f + part);
        };
        // Q3-basis elements pi^i * zeta4^part of K
        std::vector<FieldElement> belem;
        for (int i = 0; i < e; ++i)
            for (int part = 0; part < f; ++part) {
                std::vector<K0Value> cs(static_cast<size_t>(e));
                cs[static_cast<size_t>(i)] =
                    part ? K0Value::i_times(1) : K0Value::from_int(1);
                belem.emplace_back(K, std::move(cs));
            }
        PadicMat A;
        for (const auto& name : D.group->generator_names()) {
            const Automorphism& g = D.group->generator(name);
            const K0Matrix& M = D.galois.at(name);
            std::vector<FieldElement> gimg;
            gimg.reserve(belem.size());
            for (const auto& b : belem) gimg.push_back(g.apply(b));
            for (int r = 0; r < 2; ++r) {
                std::vector<std::vector<PadicNumber>> cols(n);
                for (int j = 0; j < 2; ++j)
                    for (int i = 0; i < e; ++i)
                        for (int part = 0; part < f; ++part) {
                            size_t bi = static_cast<size_t>(i * f + part);
                            FieldElement Ecol = gimg[bi] * M.at(r, j);
                            if (j == r) Ecol = Ecol - belem[bi];
                            cols[uidx(j, i, part)] = flatten_field_element(Ecol, prec);
                        }
                for (size_t row = 0; row < static_cast<size_t>(e * f); ++row) {
                    PadicVec rv(n);
                    for (size_t c = 0; c < n; ++c) rv[c] = cols[c][row];
                    A.push_back(std::move(rv));
                }
            }
        }
        std::vector<PadicVec> basis = rref(nullspace(A));
        if (basis.size() != 2)
            throw descent_failure("fixed plane has dimension " + std::to_string(basis.size()));
        auto rebuild = [&](const PadicVec& u, int j) {
            std::vector<K0Value> cs;
            cs.reserve(static_cast<size_t>(e));
            for (int i = 0; i < e; ++i) {
                PadicNumber re = u[uidx(j, i, 0)];
                PadicNumber im = f == 2 ? u[uidx(j, i, 1)] : PadicNumber::zero_to(prec);
                cs.push_back(K0Value::approx(std::move(re), std::move(im)));
            }
            return FieldElement(K, std::move(cs));
        };
        plane->x1 = rebuild(basis[0], 0);
        plane->y1 = rebuild(basis[0], 1);
        plane->x2 = rebuild(basis[1], 0);
        plane->y2 = rebuild(basis[1], 1);
        normalize_plane_vector(plane->x1, plane->y1);
        normalize_plane_vector(plane->x2, plane->y2);
    }
    std::lock_guard<std::mutex> lock(mtx);
    if (!D.plane_cache) D.plane_cache = std::move(plane);
    return *D.plane_cache;
}

FilteredModule filtration_from_point(const PhiGalModule& D, const ProjQ3& t) {
    const PlaneBasis& P = fixed_plane_in_DK(D);
    K0Value x = K0Value::from_rational(t.x()), y = K0Value::from_rational(t.y());
    FilteredModule F;
    F.base = D;
    F.fil_x = P.x1 * x + P.x2 * y;
    F.fil_y = P.y1 * x + P.y2 * y;
    if (F.fil_x.is_zero() && F.fil_y.is_zero())
        throw descent_failure("filtration_from_point produced the zero line");
    if (!detail::fil_is_galois_stable(F))
        throw descent_failure("fixed-plane filtration is not Galois-stable");
    return F;
}

std::optional<ProjQ3> point_from_filtration(const FilteredModule& D, const BigInt& height_bound) {
    const PlaneBasis& P = fixed_plane_in_DK(D.base);
    FieldElement d1 = k_cross(P.x1, P.y1, D.fil_x, D.fil_y);
    FieldElement d2 = k_cross(P.x2, P.y2, D.fil_x, D.fil_y);
    bool z1 = d1.is_zero(), z2 = d2.is_zero();
    if (z1 && z2) return std::nullopt;
    if (z1) return ProjQ3::infinity();
    if (z2) return ProjQ3::finite(0);
    // x*d1 + y*d2 = 0, so [x : y] = [d2 : -d1]; the ratio must be rational.
    FieldElement q = -(d2 / d1);
    for (int i = 1; i < D.base.field->e(); ++i)
        if (!q.coord(i).is_zero()) return std::nullopt;
    auto r = q.coord(0).as_rational(height_bound);
    if (!r) return std::nullopt;
    return ProjQ3::finite(*r);
}

FieldElement fil_slope(const FilteredModule& D) {
    if (D.fil_y.is_zero()) throw precondition_error("fil_slope: line is (1:0)");
    return D.fil_x / D.fil_y;
}

// ------------------------------------------------------------ membership

bool membership_check(const std::string& set_id, const FieldElement& alpha) {
    const std::string& fl = alpha.home()->label();
    std::string want_field;
    int eps = 0;
    bool need_t4 = false, need_w = false, abelian = false;
    if (set_id == "M3na") { want_field = "Lng-closure"; need_w = true; }
    else if (set_id == "M6na") { want_field = "Lng-closure(sqrt3)"; need_w = true; }
    else if (set_id == "M3a") { want_field = "Lg"; abelian = true; }
    else if (set_id == "M6a") { want_field = "Lg(sqrt3)"; abelian = true; }
    else if (set_id.rfind("M12(", 0) == 0 && set_id.back() == ')') {
        std::string body = set_id.substr(4, set_id.size() - 5);
        size_t comma = body.find(',');
        if (comma == std::string::npos) throw precondition_error("bad set id " + set_id);
        int i = std::stoi(body.substr(0, comma));
        eps = std::stoi(body.substr(comma + 1));
        if (i < 1 || i > 10 || (eps != 0 && eps != 1))
            throw precondition_error("bad set id " + set_id);
        want_field = "K" + std::to_string(i);
        need_t4 = need_w = true;
    } else {
        throw precondition_error("unknown membership set " + set_id);
    }
    if (fl != want_field) throw wrong_field(set_id + ": alpha lives in " + fl);
    const GaloisGroup& G = get_group(fl);
    const TowerFieldPtr& K = alpha.home();
    if (need_w && !G.generator("w").apply(alpha).equals_to_precision(alpha)) return false;
    if (need_t4) {
        FieldElement t4a = G.generator("t4").apply(alpha);
        if (!(t4a + alpha).is_zero()) return false;
    }
    FieldElement t3a = G.generator("t3").apply(alpha);
    if (abelian) {
        // t3(alpha) = (alpha - 1) / alpha
        return (t3a * alpha - (alpha - FieldElement::one(K))).is_zero();
    }
    if (need_t4) {
        // t3(alpha) = (alpha + (-1)^{eps+1} 3) / (1 + (-1)^eps alpha)
        K0Value s = K0Value::from_int(eps == 0 ? 1 : -1);  // (-1)^eps
        FieldElement lhs = t3a * (FieldElement::one(K) + alpha * s);
        FieldElement rhs = alpha - FieldElement::from_scalar(K, K0Value::from_int(3) * s);
        return (lhs - rhs).is_zero();
    }
    // t3(alpha) = (3 zeta4 + alpha) / (1 + zeta4 alpha)
    FieldElement i4 = FieldElement::from_scalar(K, K0Value::i_times(1));
    FieldElement lhs = t3a * (FieldElement::one(K) + i4 * alpha);
    FieldElement rhs = i4 * FieldElement::from_scalar(K, K0Value::from_int(3)) + alpha;
    return (lhs - rhs).is_zero();
}

// ------------------------------------------------- admissibility pieces

Rational t_newton(const PhiGalModule& D) {
    Val v = D.phi.det().valuation();
    if (v.infinite) throw precondition_error("t_newton: phi is not bijective");
    return v.v;
}

int t_hodge(const FilteredModule& D) {
    return (D.fil_x.is_zero() && D.fil_y.is_zero()) ? 0 : 1;
}

static bool k0vec_parallel(const K0Vec& a, const K0Vec& b) {
    return (a[0] * b[1] - a[1] * b[0]).is_zero();
}

std::vector<StableLine> stable_lines(const PhiGalModule& D) {
    int f = D.field->f();
    K0Matrix F = f == 1 ? D.phi : D.phi.compose(D.phi);
    K0Matrix T(F.at(0, 0), F.at(0, 1), F.at(1, 0), F.at(1, 1), f, 0);
    bool off_zero = T.at(0, 1).is_zero() && T.at(1, 0).is_zero();
    bool scalar = off_zero && (T.at(0, 0) - T.at(1, 1)).is_zero();
    std::vector<K0Vec> candidates;
    if (scalar) {
        Val v = T.at(0, 0).valuation();
        if (v.infinite) throw precondition_error("stable_lines: phi is not bijective");
        // f=2: a phi-stable line needs a multiplier of norm-valuation v, so
        // odd v rules every line out; anything else is an infinite family.
        if (f == 2 && numerator(v.v) % 2 != 0) return {};
        throw precondition_error("stable_lines: scalar linearization is unsupported");
    } else if (off_zero) {
        candidates.push_back({K0Value::from_int(1), K0Value()});
        candidates.push_back({K0Value(), K0Value::from_int(1)});
    } else {
        K0Value tr = T.trace(), det = T.det();
        K0Value disc = tr * tr - det * K0Value::from_int(4);
        auto s = k0_sqrt(disc, f);
        if (!s) return {};
        K0Value half = K0Value::from_rational(Rational(1, 2));
        for (int sign = 0; sign < 2; ++sign) {
            K0Value lam = (tr + (sign ? -*s : *s)) * half;
            K0Vec v;
            if (!T.at(0, 1).is_zero()) v = {T.at(0, 1), lam - T.at(0, 0)};
            else v = {lam - T.at(1, 1), T.at(1, 0)};
            if (v[0].is_zero() && v[1].is_zero()) continue;
            candidates.push_back(std::move(v));
        }
    }
    std::vector<StableLine> lines;
    for (const auto& v : candidates) {
        bool dup = false;
        for (const auto& l : lines)
            if (k0vec_parallel(l.v, v)) { dup = true; break; }
        if (dup) continue;
        K0Vec pv = D.phi.apply(v);
        if (!k0vec_parallel(pv, v)) continue;
        bool galois_ok = true;
        for (const auto& [name, M] : D.galois) {
            K0Vec gv = M.apply(v);
            if (!k0vec_parallel(gv, v)) { galois_ok = false; break; }
        }
        if (!galois_ok) continue;
        K0Vec Fv = (f == 1 ? D.phi : K0Matrix(T)).apply(v);
        int i = v[0].is_zero() ? 1 : 0;
        K0Value mult = Fv[static_cast<size_t>(i)] / v[static_cast<size_t>(i)];
        Val mv = mult.valuation();
        if (mv.infinite) throw precondition_error("stable_lines: zero multiplier");
        lines.push_back(StableLine{v, mv.v / f, false});
    }
    return lines;
}

std::pair<bool, std::vector<StableLine>> is_admissible(const FilteredModule& D) {
    std::vector<StableLine> lines = stable_lines(D.base);
    bool ok = t_newton(D.base) == t_hodge(D);
    const TowerFieldPtr& K = D.base.field;
    for (auto& l : lines) {
        FieldElement lx = FieldElement::from_scalar(K, l.v[0]);
        FieldElement ly = FieldElement::from_scalar(K, l.v[1]);
        l.line_in_fil = k_cross(lx, ly, D.fil_x, D.fil_y).is_zero();
        Rational th = l.line_in_fil ? 1 : 0;
        if (th > l.t_newton) ok = false;
    }
    return {ok, std::move(lines)};
}

// ------------------------------------------------------- Weil and report

std::vector<WeilWitness> weil_traces(const PhiGalModule& D, int N_max,
                                     const BigInt& height_bound) {
    int f = D.field->f();
    if (N_max < f) throw precondition_error("weil_traces: N_max must be >= f");
    K0Matrix phi_inv = D.phi.inverse();
    std::vector<K0Matrix> pos = {K0Matrix::identity(f)}, neg = {K0Matrix::identity(f)};
    for (int n = 1; n <= N_max; ++n) {
        pos.push_back(pos.back().compose(D.phi));
        neg.push_back(neg.back().compose(phi_inv));
    }
    std::vector<WeilWitness> out;
    for (const auto& el : D.group->elements()) {
        K0Matrix M = detail::element_matrix(D, el.word);
        int m = el.aut.unramified_exponent();
        for (int n = -N_max; n <= N_max; ++n) {
            if (((n - m) % f + f) % f != 0) continue;
            K0Matrix W = M.compose(n >= 0 ? neg[static_cast<size_t>(n)]
                                          : pos[static_cast<size_t>(-n)]);
            out.push_back(WeilWitness{el.word, n, W.trace().as_rational(height_bound)});
        }
    }
    return out;
}

ConditionsReport check_conditions(const FilteredModule& D, int weil_window,
                                  const BigInt& height_bound) {
    ConditionsReport rep;
    rep.weil_window = weil_window;
    const PhiGalModule& B = D.base;
    int f = B.field->f();

    // (1) the Frobenius on the unramified descent D0 has char poly X^2+aX+3
    K0Matrix C = K0Matrix::identity(f);
    bool have_c = false;
    if (f == 1) {
        C = K0Matrix(B.phi.at(0, 0), B.phi.at(0, 1), B.phi.at(1, 0), B.phi.at(1, 1), 1, 0);
        have_c = true;
    } else {
        std::vector<K0Matrix> odd;
        for (const auto& [name, M] : B.galois)
            if (((M.twist() % f) + f) % f == 1) odd.push_back(M);
        if (!odd.empty()) {
            std::vector<K0Vec> fs = fixed_space(odd);
            if (fs.size() == 2) {
                K0Matrix Bm(fs[0][0], fs[1][0], fs[0][1], fs[1][1], f, 0);
                K0Vec c1 = B.phi.apply(fs[0]), c2 = B.phi.apply(fs[1]);
                K0Matrix P(c1[0], c2[0], c1[1], c2[1], f, 0);
                C = Bm.inverse().compose(P);
                have_c = true;
            }
        }
    }
    if (have_c) {
        if (auto cp = rational_char_poly(C, height_bound)) {
            rep.char_poly_coeffs = cp;
            const Rational& a = (*cp)[0];
            rep.cond1 = (*cp)[1] == 3 && denominator(a) == 1 && a * a <= 12;
        }
    }

    // (2) rationality of the Weil traces over the finite window
    rep.weil = weil_traces(B, weil_window, height_bound);
    rep.cond2 = !rep.weil.empty();
    for (const auto& w : rep.weil)
        if (!w.trace) rep.cond2 = false;

    // (3) Lambda^2 D = K0{-1}: unimodular Galois, det phi = 3
    rep.cond3 = (B.phi.det() - K0Value::from_int(3)).is_zero();
    for (const auto& [name, M] : B.galois)
        if (!(M.det() - K0Value::from_int(1)).is_zero()) rep.cond3 = false;

    // (4) well-formed Galois-stable filtration line
    rep.cond4 = !(D.fil_x.is_zero() && D.fil_y.is_zero()) && detail::fil_is_galois_stable(D);

    rep.t_N = t_newton(B);
    rep.t_H = t_hodge(D);
    if (rep.cond4) {
        try {
            auto [ok, lines] = is_admissible(D);
            rep.admissible = ok;
            rep.lines = std::move(lines);
        } catch (const precondition_error&) {
            rep.admissible = false;
        }
    }
    return rep;
}

// --------------------------------------------------------------- twists

FilteredModule twist_unramified(const FilteredModule& D) {
    FilteredModule T = D;
    T.base.phi = -D.base.phi;
    T.base.plane_cache = D.base.plane_cache;  // same Galois action, same plane
    return T;
}

FilteredModule twist_ramified(const FilteredModule& D) {
    static const std::map<std::string, std::string> up = {
        {"Q3", "Q3(sqrt3)"},
        {"Lg", "Lg(sqrt3)"},
        {"Lng-closure", "Lng-closure(sqrt3)"},
    };
    auto it = up.find(D.base.field->label());
    if (it == up.end())
        throw catalog_miss("no catalog tower for " + D.base.field->label() + "(sqrt3)");
    const TowerFieldPtr& oldK = D.base.field;
    TowerFieldPtr K = get_field(it->second);
    const GaloisGroup& G = get_group(it->second);
    int f = K->f();

    FilteredModule T;
    T.base.field = K;
    T.base.group = &G;
    T.base.phi = D.base.phi;
    for (const auto& name : G.generator_names()) {
        if (name == "t2") T.base.galois.emplace("t2", minus_identity(f));
        else T.base.galois.emplace(name, D.base.galois.at(name));
    }
    validate_module(T.base);

    // transport the filtration along an embedding K_old -> K determined by
    // a root of the old Eisenstein polynomial; pick the root for which the
    // transported line is stable under the larger Galois group
    std::vector<Rational> poly = oldK->eisenstein();
    poly.push_back(1);
    std::vector<FieldElement> roots = find_roots_in_field(poly, K);
    for (const auto& r : roots) {
        std::vector<FieldElement> rp = {FieldElement::one(K)};
        for (int i = 1; i < oldK->e(); ++i) rp.push_back(rp.back() * r);
        auto embed = [&](const FieldElement& x) {
            FieldElement out = FieldElement::zero(K);
            for (int i = 0; i < oldK->e(); ++i) out = out + rp[static_cast<size_t>(i)] * x.coord(i);
            return out;
        };
        T.fil_x = embed(D.fil_x);
        T.fil_y = embed(D.fil_y);
        if (!(T.fil_x.is_zero() && T.fil_y.is_zero()) && detail::fil_is_galois_stable(T))
            return T;
    }
    throw descent_failure("twist_ramified: no embedding keeps the filtration Galois-stable");
}

}  // namespace phimod
