#include "phimod/ec3.hpp"

#include "phimod/catalog.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

namespace phimod {

namespace {

std::vector<F9> field_elements(int s) {
    std::vector<F9> out;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < (s == 1 ? 1 : 3); ++b) out.emplace_back(a, b);
    return out;
}

bool on_curve(const CurveF3q& E, const F9& x, const F9& y) {
    F9 lhs = y * y + E.a1 * x * y + E.a3 * y;
    F9 rhs = x * x * x + E.a2 * x * x + E.a4 * x + E.a6;
    return lhs == rhs;
}

void require_smooth(const CurveF3q& E) {
    if (!E.is_smooth()) throw singular_curve("curve has discriminant 0: " + E.str());
}

/// The Weierstrass coefficients of E carried through x = u^2 x' + r,
/// y = u^3 y' + s u^2 x' + t.
CurveF3q transform(const CurveF3q& E, const AutElement& g) {
    const F9 &u = g.u, &r = g.r, &s = g.s, &t = g.t;
    F9 ui = u.inverse();
    F9 ui2 = ui * ui, ui3 = ui2 * ui;
    CurveF3q out;
    out.s = E.s;
    out.a1 = ui * (E.a1 + s + s);
    out.a2 = ui2 * (E.a2 - s * E.a1 - s * s);  // +3r = 0
    out.a3 = ui3 * (E.a3 + r * E.a1 + t + t);
    out.a4 = ui2 * ui2 *
             (E.a4 - s * E.a3 + (r + r) * E.a2 - (t + r * s) * E.a1 - (s * t + s * t));
    out.a6 = ui3 * ui3 *
             (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1);
    return out;
}

bool same_equation(const CurveF3q& A, const CurveF3q& B) {
    return A.a1 == B.a1 && A.a2 == B.a2 && A.a3 == B.a3 && A.a4 == B.a4 && A.a6 == B.a6;
}

/// An element of Aut(E) rtimes Gal(F_{3^s}/F_3): a substitution together
/// with a Frobenius power.
struct SemiElem {
    AutElement g;
    int j = 0;

    bool operator==(const SemiElem& o) const { return g == o.g && j == o.j; }
    bool operator<(const SemiElem& o) const {
        auto key = [](const SemiElem& x) {
            return std::array<int, 9>{x.j,       x.g.u.a, x.g.u.b, x.g.r.a, x.g.r.b,
                                      x.g.s.a,   x.g.s.b, x.g.t.a, x.g.t.b};
        };
        return key(*this) < key(o);
    }
};

AutElement frob_pow(AutElement g, int j, int s) {
    for (int k = 0; k < ((j % s) + s) % s; ++k) g = g.frob();
    return g;
}

SemiElem semi_mul(const SemiElem& A, const SemiElem& B, int s) {
    return {A.g.compose(frob_pow(B.g, A.j, s)), (A.j + B.j) % s};
}

SemiElem semi_inv(const SemiElem& A, int s) {
    int j = ((-A.j % s) + s) % s;
    return {frob_pow(A.g.inverse(), j, s), j};
}

SemiElem semi_pow(const SemiElem& A, int n, int s) {
    SemiElem acc;
    SemiElem base = n < 0 ? semi_inv(A, s) : A;
    for (int k = 0; k < std::abs(n); ++k) acc = semi_mul(acc, base, s);
    return acc;
}

std::set<SemiElem> semi_closure(const std::vector<SemiElem>& gens, int s) {
    std::set<SemiElem> seen{SemiElem{}};
    std::vector<SemiElem> frontier{SemiElem{}};
    while (!frontier.empty()) {
        std::vector<SemiElem> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                SemiElem y = semi_mul(x, g, s);
                if (seen.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return seen;
}

/// nu evaluated on a relation word in reverse order (antimorphism rule).
SemiElem nu_of_word_reversed(const RelationWord& w,
                             const std::map<std::string, SemiElem>& nu, int s) {
    SemiElem acc;
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        acc = semi_mul(acc, semi_pow(nu.at(it->first), it->second, s), s);
    return acc;
}

std::string word_str(const RelationWord& w) {
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << " ";
        os << w[i].first;
        if (w[i].second != 1) os << "^" << w[i].second;
    }
    return os.str();
}

bool gamma_is_subgroup(const std::vector<AutElement>& gamma,
                       const std::vector<AutElement>& aut) {
    auto in = [](const std::vector<AutElement>& v, const AutElement& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    if (!in(gamma, AutElement{})) return false;
    for (const auto& a : gamma) {
        if (!in(aut, a)) return false;
        for (const auto& b : gamma)
            if (!in(gamma, a.compose(b))) return false;
    }
    return true;
}

bool gamma_defined_over_f3(const std::vector<AutElement>& gamma) {
    return std::all_of(gamma.begin(), gamma.end(), [](const AutElement& g) {
        return g.u.in_f3() && g.r.in_f3() && g.s.in_f3() && g.t.in_f3();
    });
}

PairVerdict invalid(const std::string& reason) {
    return {PairVerdict::Status::invalid, reason};
}

}  // namespace

F9 F9::inverse() const {
    if (is_zero()) throw std::domain_error("F9: division by zero");
    // norm a^2 + b^2 lies in F3*
    int n = ((a * a + b * b) % 3 + 3) % 3;
    int ninv = n;  // 1 and 2 are self-inverse mod 3
    return F9(a * ninv, -b * ninv);
}

std::string F9::str() const {
    if (b == 0) return std::to_string(a);
    std::string out = a ? std::to_string(a) + "+" : "";
    return out + (b == 1 ? "t" : std::to_string(b) + "*t");
}

F9 CurveF3q::discriminant() const {
    // standard b-invariants, reduced mod 3
    F9 b2 = a1 * a1 + a2;       // +4a2 = +a2
    F9 b4 = -a4 + a1 * a3;      // 2a4 = -a4
    F9 b6 = a3 * a3 + a6;       // +4a6 = +a6
    F9 b8 = a1 * a1 * a6 + a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    // delta = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6, with -8 = 1, 27 = 9 = 0 mod 3
    return -(b2 * b2 * b8) + b4 * b4 * b4;
}

CurveF3q CurveF3q::base_change() const {
    CurveF3q out = *this;
    out.s = 2;
    return out;
}

std::string CurveF3q::str() const {
    auto term = [](const F9& c, const std::string& mono) -> std::string {
        if (c.is_zero()) return "";
        std::string cs = c.str();
        if (mono.empty()) return "+" + cs;
        if (cs == "1") return "+" + mono;
        if (cs == "2") return "-" + mono;
        if (cs.find('+') != std::string::npos || cs.find('*') != std::string::npos)
            cs = "(" + cs + ")";
        return "+" + cs + "*" + mono;
    };
    std::string lhs = "y^2" + term(a1, "x*y") + term(a3, "y");
    std::string rhs = "x^3" + term(a2, "x^2") + term(a4, "x") + term(a6, "");
    return lhs + " = " + rhs + " over F" + std::to_string(q());
}

AutElement AutElement::compose(const AutElement& o) const {
    AutElement out;
    out.u = u * o.u;
    out.r = u * u * o.r + r;
    out.s = u * o.s + s;
    out.t = u * u * u * o.t + s * u * u * o.r + t;
    return out;
}

AutElement AutElement::inverse() const {
    AutElement out;
    F9 ui = u.inverse();
    out.u = ui;
    out.r = -(r * ui * ui);
    out.s = -(s * ui);
    out.t = (s * r - t) * ui * ui * ui;
    return out;
}

int AutElement::order() const {
    AutElement acc = *this;
    for (int n = 1; n <= 12; ++n) {
        if (acc.is_identity()) return n;
        acc = acc.compose(*this);
    }
    throw std::logic_error("AutElement: order exceeds 12");
}

std::string AutElement::str() const {
    std::ostringstream os;
    os << "(u=" << u.str() << ",r=" << r.str() << ",s=" << s.str() << ",t=" << t.str() << ")";
    return os.str();
}

int point_count(const CurveF3q& E) {
    require_smooth(E);
    int n = 1;  // the point at infinity
    for (const F9& x : field_elements(E.s))
        for (const F9& y : field_elements(E.s))
            if (on_curve(E, x, y)) ++n;
    return n;
}

int frobenius_trace(const CurveF3q& E) {
    int t = E.q() + 1 - point_count(E);
    if (t * t > 4 * E.q()) throw std::logic_error("frobenius_trace: Hasse bound violated");
    return t;
}

bool is_supersingular(const CurveF3q& E) { return frobenius_trace(E) % 3 == 0; }

AutGroupDescription automorphism_group(const CurveF3q& E) {
    require_smooth(E);
    AutGroupDescription out;
    for (const F9& u : field_elements(E.s)) {
        if (u.is_zero()) continue;
        for (const F9& r : field_elements(E.s))
            for (const F9& s : field_elements(E.s))
                for (const F9& t : field_elements(E.s)) {
                    AutElement g{u, r, s, t};
                    if (same_equation(transform(E, g), E)) out.elements.push_back(g);
                }
    }
    out.order = static_cast<int>(out.elements.size());
    // closure sanity: a group by construction, but cheap to confirm
    for (const auto& a : out.elements)
        for (const auto& b : out.elements) {
            AutElement c = a.compose(b);
            if (std::find(out.elements.begin(), out.elements.end(), c) == out.elements.end())
                throw std::logic_error("automorphism_group: not closed under composition");
        }
    std::multiset<int> profile;
    for (const auto& g : out.elements) profile.insert(g.order());
    if (profile == std::multiset<int>{1})
        out.shape = "C1";
    else if (profile == std::multiset<int>{1, 2})
        out.shape = "C2";
    else if (profile == std::multiset<int>{1, 3, 3})
        out.shape = "C3";
    else if (profile == std::multiset<int>{1, 2, 3, 3, 6, 6})
        out.shape = "C6";
    else if (profile == std::multiset<int>{1, 2, 3, 3, 4, 4, 4, 4, 4, 4, 6, 6})
        out.shape = "Z3:Z4";
    else
        out.shape = "other";
    return out;
}

CurveF3q quadratic_twist(const CurveF3q& E) {
    require_smooth(E);
    // complete the square (2 is invertible): kill a1 and a3
    CurveF3q S = transform(E, AutElement{F9(1), F9(0), E.a1, E.a3});
    if (!S.a1.is_zero() || !S.a3.is_zero())
        throw std::logic_error("quadratic_twist: completing the square failed");
    F9 d = E.s == 1 ? F9(2) : F9(1, 1);  // a fixed non-square
    CurveF3q out;
    out.s = E.s;
    out.a2 = d * S.a2;
    out.a4 = d * d * S.a4;
    out.a6 = d * d * d * S.a6;
    return out;
}

PairVerdict galois_pair_verify(const GaloisPair& P, const GaloisGroup& G) {
    int s = static_cast<int>(G.field()->f());
    if (P.s != s)
        throw shape_mismatch("galois_pair_verify: pair over F_{3^" + std::to_string(P.s) +
                             "} but the group's residue field is F_{3^" + std::to_string(s) +
                             "}");
    if (P.curve.s != 1) throw shape_mismatch("galois_pair_verify: base curve must live over F3");
    require_smooth(P.curve);
    CurveF3q E = P.s == 2 ? P.curve.base_change() : P.curve;
    AutGroupDescription aut = automorphism_group(E);

    if (!gamma_is_subgroup(P.gamma, aut.elements))
        return invalid("gamma is not a subgroup of Aut(E) over F_{3^" + std::to_string(s) + "}");

    std::map<std::string, SemiElem> nu;
    for (const auto& g : G.presentation().generators) {
        auto it = P.nu.find(g.name);
        if (it == P.nu.end()) return invalid("nu is missing generator " + g.name);
        const auto& [gamma, j] = it->second;
        if (std::find(aut.elements.begin(), aut.elements.end(), gamma) == aut.elements.end())
            return invalid("nu(" + g.name + ") is not an automorphism of E");
        if (((j % s) + s) % s != ((g.unramified_exponent % s) + s) % s)
            return invalid("projection condition fails at " + g.name);
        nu[g.name] = {gamma, ((j % s) + s) % s};
    }
    if (P.nu.size() != G.presentation().generators.size())
        return invalid("nu assigns a value outside the generator set");

    for (const auto& g : G.presentation().generators) {
        if (!semi_pow(nu[g.name], g.order, s).g.is_identity() ||
            semi_pow(nu[g.name], g.order, s).j != 0)
            return invalid("nu(" + g.name + ") does not kill the order relation " + g.name +
                           "^" + std::to_string(g.order));
    }
    for (const auto& rel : G.presentation().relations) {
        SemiElem v = nu_of_word_reversed(rel, nu, s);
        if (!v.g.is_identity() || v.j != 0)
            return invalid("antimorphism fails on relation " + word_str(rel));
    }

    std::vector<SemiElem> gens;
    for (const auto& [name, v] : nu) gens.push_back(v);
    std::set<SemiElem> image = semi_closure(gens, s);
    std::set<SemiElem> target;
    for (const auto& g : P.gamma)
        for (int j = 0; j < s; ++j) target.insert({g, j});
    if (image != target) return invalid("image of nu differs from gamma x Gal");

    bool injective = image.size() == G.order();
    bool minimal_field = s == 1 || !gamma_defined_over_f3(P.gamma);
    if (injective && minimal_field) return {PairVerdict::Status::valid_minimal, ""};
    std::string why = !injective ? "nu is not injective" : "gamma is already defined over F3";
    return {PairVerdict::Status::valid_nonminimal, why};
}

PairSearchReport search_galois_pairs(const CurveF3q& base_curve, const GaloisGroup& G) {
    int s = static_cast<int>(G.field()->f());
    require_smooth(base_curve);
    CurveF3q E = s == 2 ? base_curve.base_change() : base_curve;
    AutGroupDescription aut = automorphism_group(E);
    const auto& gens = G.presentation().generators;

    // candidate images per generator: projection condition plus order kill
    std::vector<std::vector<SemiElem>> cands(gens.size());
    for (size_t k = 0; k < gens.size(); ++k) {
        int j = ((gens[k].unramified_exponent % s) + s) % s;
        for (const auto& g : aut.elements) {
            SemiElem v{g, j};
            SemiElem p = semi_pow(v, gens[k].order, s);
            if (p.g.is_identity() && p.j == 0) cands[k].push_back(v);
        }
    }

    PairSearchReport report;
    std::vector<size_t> idx(gens.size(), 0);
    bool done = gens.empty();
    while (!done) {
        ++report.assignments_checked;
        std::map<std::string, SemiElem> nu;
        for (size_t k = 0; k < gens.size(); ++k) nu[gens[k].name] = cands[k][idx[k]];

        bool rels_ok = true;
        for (const auto& rel : G.presentation().relations) {
            SemiElem v = nu_of_word_reversed(rel, nu, s);
            if (!v.g.is_identity() || v.j != 0) {
                rels_ok = false;
                break;
            }
        }
        if (rels_ok) {
            std::vector<SemiElem> ngens;
            for (const auto& [name, v] : nu) ngens.push_back(v);
            std::set<SemiElem> image = semi_closure(ngens, s);
            std::vector<AutElement> gamma;
            for (const auto& v : image)
                if (v.j == 0) gamma.push_back(v.g);
            std::set<SemiElem> target;
            for (const auto& g : gamma)
                for (int j = 0; j < s; ++j) target.insert({g, j});
            if (image == target) {
                GaloisPair P;
                P.curve = base_curve;
                P.s = s;
                P.gamma = gamma;
                for (const auto& [name, v] : nu) P.nu[name] = {v.g, v.j};
                PairVerdict v = galois_pair_verify(P, G);
                if (v.valid() && image.size() == G.order()) report.injective_possible = true;
                bool better =
                    !report.best ||
                    (v.status == PairVerdict::Status::valid_minimal &&
                     report.best_verdict.status != PairVerdict::Status::valid_minimal);
                if (v.valid() && better) {
                    report.best = P;
                    report.best_verdict = v;
                }
            }
        }

        // odometer
        size_t k = 0;
        for (; k < gens.size(); ++k) {
            if (++idx[k] < cands[k].size()) break;
            idx[k] = 0;
        }
        done = k == gens.size();
    }
    return report;
}

std::vector<Table2Row> verify_table2() {
    std::vector<Table2Row> out;
    auto curve_f3 = [](int a4, int a6) {
        CurveF3q E;
        E.a4 = F9(a4);
        E.a6 = F9(a6);
        return E;
    };
    auto order3 = [](const AutGroupDescription& A) {
        for (const auto& g : A.elements)
            if (g.order() == 3) return g;
        throw std::logic_error("no order-3 automorphism");
    };

    // cubic abelian rows: Gamma = the unique 3-Sylow over F3, nu: t3 -> tau
    const GaloisGroup& Glg = get_group("Lg");
    for (int a3 : {-3, 0, 3}) {
        CurveF3q E = curve_f3(-1, -a3 / 3);  // y^2 = x^3 - x - a3/3
        Table2Row row;
        row.name = "Lg, a3=" + std::to_string(a3);
        row.curve = E.str();
        row.notes.push_back("trace " + std::to_string(frobenius_trace(E)));
        AutElement tau = order3(automorphism_group(E));
        GaloisPair P;
        P.curve = E;
        P.s = 1;
        P.gamma = {AutElement{}, tau, tau.compose(tau)};
        P.nu["t3"] = {tau, 0};
        PairVerdict v = galois_pair_verify(P, Glg);
        row.verdict = v.str();
        row.pass = v.status == PairVerdict::Status::valid_minimal &&
                   frobenius_trace(E) == a3;
        out.push_back(std::move(row));
    }

    // cubic non-abelian row: trace 0 over the closure, Gamma = 3-Sylow of
    // Aut over F9, nu: t3 -> tau, w -> the Frobenius descent datum
    const GaloisGroup& Glng = get_group("Lng-closure");
    {
        CurveF3q E = curve_f3(1, 0);  // y^2 = x^3 + x
        Table2Row row;
        row.name = "Lng(zeta4), a3=0";
        row.curve = E.str();
        AutElement tau = order3(automorphism_group(E.base_change()));
        GaloisPair P;
        P.curve = E;
        P.s = 2;
        P.gamma = {AutElement{}, tau, tau.compose(tau)};
        P.nu["t3"] = {tau, 0};
        P.nu["w"] = {AutElement{}, 1};
        PairVerdict v = galois_pair_verify(P, Glng);
        row.verdict = v.str();
        row.pass = v.status == PairVerdict::Status::valid_minimal;
        row.notes.push_back("Gamma lives in Aut over F9 (the F3 group has a trivial 3-Sylow)");
        out.push_back(std::move(row));
    }

    // the trace +-3 curves over the closure: no injective assignment exists
    for (int a3 : {-3, 3}) {
        CurveF3q E = curve_f3(-1, -a3 / 3);
        Table2Row row;
        row.name = "Lng(zeta4), a3=" + std::to_string(a3) + " (excluded)";
        row.curve = E.str();
        AutElement tau = order3(automorphism_group(E.base_change()));
        GaloisPair P;
        P.curve = E;
        P.s = 2;
        P.gamma = {AutElement{}, tau, tau.compose(tau)};
        P.nu["t3"] = {tau, 0};
        P.nu["w"] = {AutElement{}, 1};
        PairVerdict v = galois_pair_verify(P, Glng);
        PairSearchReport search = search_galois_pairs(E, Glng);
        row.verdict = v.str();
        row.pass = v.status == PairVerdict::Status::invalid && !search.injective_possible;
        row.notes.push_back("exhaustive search over " +
                            std::to_string(search.assignments_checked) +
                            " assignments finds no injective nu");
        out.push_back(std::move(row));
    }

    // dodecic row: Gamma = the full automorphism group over F9
    {
        CurveF3q E = curve_f3(1, 0);
        for (int i = 1; i <= 5; ++i) {
            Table2Row row;
            row.name = "K" + std::to_string(i) + ", a3=0";
            row.curve = E.str();
            PairSearchReport search = search_galois_pairs(E, get_group("K" + std::to_string(i)));
            row.verdict = search.best ? search.best_verdict.str() : "no valid pair";
            row.pass = search.best &&
                       search.best_verdict.status == PairVerdict::Status::valid_minimal &&
                       search.best->gamma.size() == 12;
            if (search.best)
                row.notes.push_back("|gamma| = " + std::to_string(search.best->gamma.size()));
            out.push_back(std::move(row));
        }
    }
    return out;
}

std::string PairVerdict::str() const {
    switch (status) {
        case Status::valid_minimal:
            return "valid-minimal";
        case Status::valid_nonminimal:
            return "valid-nonminimal (" + reason + ")";
        default:
            return "invalid (" + reason + ")";
    }
}

}  // namespace phimod
