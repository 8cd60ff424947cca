#include "phimod/linalg.hpp"
#include "phigal_detail.hpp"

#include <sstream>

namespace phimod {

namespace detail {

SolutionSpace morphism_space(const PhiGalModule& D, const PhiGalModule& E) {
    if (D.field != E.field) throw precondition_error("morphism_space: different fields");
    if (D.group != E.group) throw precondition_error("morphism_space: different groups");
    std::vector<std::pair<K0Matrix, K0Matrix>> constraints;
    constraints.emplace_back(D.phi, E.phi);
    for (const auto& name : D.group->generator_names())
        constraints.emplace_back(D.galois.at(name), E.galois.at(name));
    return equivariant_solution_space(constraints);
}

std::optional<K0Matrix> pick_invertible(const std::vector<K0Matrix>& basis) {
    if (basis.empty()) return std::nullopt;
    size_t d = basis.size();
    static const long kCoeffs[] = {0, 1, -1, 2, -2};
    std::vector<size_t> odo(d, 0);
    while (true) {
        bool all_zero = true;
        for (size_t i = 0; i < d; ++i)
            if (odo[i] != 0) { all_zero = false; break; }
        if (!all_zero) {
            K0Matrix X = basis[0] * K0Value::from_int(kCoeffs[odo[0]]);
            for (size_t i = 1; i < d; ++i)
                X = X + basis[i] * K0Value::from_int(kCoeffs[odo[i]]);
            if (!X.det().is_zero()) return X;
        }
        size_t i = 0;
        while (i < d && ++odo[i] == 5) odo[i++] = 0;
        if (i == d) return std::nullopt;
    }
}

std::optional<K0Matrix> find_iso(const SolutionSpace& S, const FilteredModule& D,
                                 const FilteredModule& E) {
    if (S.basis.empty()) return std::nullopt;
    // the condition "X carries Fil1 to Fil1'" is linear in the coordinates
    // of X on the solution-space basis: cross(X fil, fil') = 0
    std::vector<FieldElement> crosses;
    bool all_exact = true;
    bool any_nonzero = false;
    for (const auto& X : S.basis) {
        auto [wx, wy] = apply_matrix_K(X, D.fil_x, D.fil_y);
        FieldElement c = k_cross(wx, wy, E.fil_x, E.fil_y);
        if (!c.is_zero()) any_nonzero = true;
        for (const auto& k0 : c.coords())
            if (!k0.is_exact()) all_exact = false;
        crosses.push_back(std::move(c));
    }
    if (!any_nonzero) return pick_invertible(S.basis);

    size_t dim = S.basis.size();
    const TowerFieldPtr& K = D.fil_x.home();
    int e = K->e(), f = K->f();
    std::vector<K0Matrix> restricted;
    if (all_exact) {
        RatMat A(static_cast<size_t>(e * f), RatVec(dim, 0));
        for (size_t k = 0; k < dim; ++k)
            for (int i = 0; i < e; ++i) {
                const GaussianRational& g = crosses[k].coord(i).exact();
                A[static_cast<size_t>(i * f)][k] = g.re;
                if (f == 2) A[static_cast<size_t>(i * f + 1)][k] = g.im;
            }
        for (const auto& c : nullspace(A)) {
            K0Matrix Y = S.basis[0] * K0Value::from_rational(c[0]);
            for (size_t k = 1; k < dim; ++k)
                Y = Y + S.basis[k] * K0Value::from_rational(c[k]);
            restricted.push_back(std::move(Y));
        }
    } else {
        int prec = PrecisionPolicy{}.working_precision;
        PadicMat A(static_cast<size_t>(e * f), PadicVec(dim));
        for (size_t k = 0; k < dim; ++k)
            for (int i = 0; i < e; ++i) {
                A[static_cast<size_t>(i * f)][k] = crosses[k].coord(i).re(prec);
                if (f == 2) A[static_cast<size_t>(i * f + 1)][k] = crosses[k].coord(i).im(prec);
            }
        for (const auto& c : nullspace(A)) {
            auto scal = [&](const PadicNumber& p) {
                return K0Value::approx(p, PadicNumber::zero_to(p.abs_precision()));
            };
            K0Matrix Y = S.basis[0] * scal(c[0]);
            for (size_t k = 1; k < dim; ++k) Y = Y + S.basis[k] * scal(c[k]);
            restricted.push_back(std::move(Y));
        }
    }
    return pick_invertible(restricted);
}

}  // namespace detail

std::optional<K0Matrix> is_isomorphic_unfiltered(const PhiGalModule& D, const PhiGalModule& E) {
    return detail::pick_invertible(detail::morphism_space(D, E).basis);
}

std::optional<K0Matrix> is_isomorphic(const FilteredModule& D, const FilteredModule& E) {
    return detail::find_iso(detail::morphism_space(D.base, E.base), D, E);
}

// --------------------------------------------------------------- classify

namespace {

/// Pushes the filtration of D forward through the twist-0 matrix psi.
FilteredModule push_filtration(const FilteredModule& D, const PhiGalModule& target,
                               const K0Matrix& psi) {
    FilteredModule F;
    F.base = target;
    auto [x, y] = detail::apply_matrix_K(psi, D.fil_x, D.fil_y);
    F.fil_x = std::move(x);
    F.fil_y = std::move(y);
    return F;
}

int integer_trace(const ConditionsReport& rep) {
    const Rational& a = (*rep.char_poly_coeffs)[0];
    return static_cast<int>(numerator(a));
}

ProjQ3 fil_parameter(const FilteredModule& D, const PhiGalModule& B, const K0Matrix& psi) {
    auto t = point_from_filtration(push_filtration(D, B, psi));
    if (!t) throw unclassifiable("filtration parameter is not a rational point");
    return *t;
}

}  // namespace

ClassLabel classify_unfiltered(const PhiGalModule& D) {
    FilteredModule F;
    F.base = D;
    F.fil_x = FieldElement::zero(D.field);
    F.fil_y = FieldElement::one(D.field);
    ConditionsReport rep = check_conditions(F);
    if (!rep.cond1 || !rep.cond3)
        throw unclassifiable("module violates condition (1) or (3)");
    int a = integer_trace(rep);
    const std::string& fl = D.field->label();
    ClassLabel L;
    L.trace = a;
    if (fl == "Q3" || fl == "Q3(sqrt3)") {
        L.kind = Kind::Dc;
        L.e = fl == "Q3" ? 1 : 2;
        PhiGalModule B = detail::canonical_base_over(fl, L);
        if (!is_isomorphic_unfiltered(D, B)) throw unclassifiable("no Dc normal form");
        return L;
    }
    if (fl == "Lg" || fl == "Lg(sqrt3)") {
        L.kind = Kind::Dpcg;
        L.e = fl == "Lg" ? 3 : 6;
        for (int mu : {-2, -1, 1, 2}) {
            ClassLabel cand = L;
            cand.mu = mu;
            PhiGalModule B;
            try {
                B = detail::canonical_base_over(fl, cand);
            } catch (const invalid_label&) {
                continue;
            }
            if (is_isomorphic_unfiltered(D, B)) return cand;
        }
        throw unclassifiable("no Dpcg normal form matches");
    }
    if (fl == "Lng-closure" || fl == "Lng-closure(sqrt3)") {
        L.kind = Kind::Dpcng;
        L.e = fl == "Lng-closure" ? 3 : 6;
        if (a != 0) throw unclassifiable("nonabelian cubic/sextic trace must be 0");
        PhiGalModule B = detail::canonical_base_over(fl, L);
        if (!is_isomorphic_unfiltered(D, B)) throw unclassifiable("no Dpcng normal form");
        return L;
    }
    if (fl == "Q3(zeta4,pi4)") {
        L.kind = Kind::Dpc;
        L.e = 4;
        if (a != 0) throw unclassifiable("quartic trace must be 0");
        PhiGalModule B = detail::canonical_base_over(fl, L);
        if (!is_isomorphic_unfiltered(D, B)) throw unclassifiable("no Dpc(4) normal form");
        return L;
    }
    if (fl.size() >= 2 && fl[0] == 'K') {
        int n = std::stoi(fl.substr(1));
        L.kind = Kind::Dpc;
        L.e = 12;
        L.field_index = ((n - 1) % 5) + 1;
        if (a != 0) throw unclassifiable("dodecic trace must be 0");
        for (int eps : {0, 1}) {
            ClassLabel cand = L;
            cand.epsilon = eps;
            PhiGalModule B = detail::canonical_base_over(fl, cand);
            if (is_isomorphic_unfiltered(D, B)) return cand;
        }
        throw unclassifiable("no Dpc(12) normal form matches");
    }
    throw unclassifiable("field " + fl + " is not a Table 1 field");
}

ClassLabel classify(const FilteredModule& D) {
    ConditionsReport rep = check_conditions(D);
    if (!rep.all_pass())
        throw unclassifiable("module fails conditions (1)-(4) or admissibility");
    int a = integer_trace(rep);
    const std::string& fl = D.base.field->label();
    ClassLabel L;
    L.trace = a;

    auto normal_form = [&](const ClassLabel& cand) -> std::optional<std::pair<PhiGalModule, K0Matrix>> {
        PhiGalModule B = detail::canonical_base_over(fl, cand);
        auto psi = is_isomorphic_unfiltered(D.base, B);
        if (!psi) return std::nullopt;
        return std::make_pair(std::move(B), std::move(*psi));
    };

    if (fl == "Q3" || fl == "Q3(sqrt3)") {
        L.kind = Kind::Dc;
        L.e = fl == "Q3" ? 1 : 2;
        auto nf = normal_form(L);
        if (!nf) throw unclassifiable("no Dc normal form");
        if (a % 3 == 0) {
            L.alpha = ProjQ3::finite(0);  // supersingular: the filtration collapses
        } else {
            ProjQ3 t = fil_parameter(D, nf->first, nf->second);
            if (t.is_infinity()) L.alpha = ProjQ3::infinity();
            else L.alpha = ProjQ3::finite(t.alpha() == 0 ? 0 : 1);
        }
    } else if (fl == "Lg" || fl == "Lg(sqrt3)") {
        L.kind = Kind::Dpcg;
        L.e = fl == "Lg" ? 3 : 6;
        bool found = false;
        for (int mu : {-2, -1, 1, 2}) {
            ClassLabel cand = L;
            cand.mu = mu;
            std::optional<std::pair<PhiGalModule, K0Matrix>> nf;
            try {
                nf = normal_form(cand);
            } catch (const invalid_label&) {
                continue;
            }
            if (nf) { L = cand; found = true; break; }
        }
        if (!found) throw unclassifiable("no Dpcg normal form matches");
    } else if (fl == "Lng-closure" || fl == "Lng-closure(sqrt3)") {
        L.kind = Kind::Dpcng;
        L.e = fl == "Lng-closure" ? 3 : 6;
        if (a != 0) throw unclassifiable("nonabelian cubic/sextic trace must be 0");
        auto nf = normal_form(L);
        if (!nf) throw unclassifiable("no Dpcng normal form");
        L.alpha = fil_parameter(D, nf->first, nf->second);
    } else if (fl == "Q3(zeta4,pi4)") {
        L.kind = Kind::Dpc;
        L.e = 4;
        if (a != 0) throw unclassifiable("quartic trace must be 0");
        auto nf = normal_form(L);
        if (!nf) throw unclassifiable("no Dpc(4) normal form");
        L.alpha = fil_parameter(D, nf->first, nf->second);
    } else if (fl.size() >= 2 && fl[0] == 'K') {
        int n = std::stoi(fl.substr(1));
        L.kind = Kind::Dpc;
        L.e = 12;
        L.field_index = ((n - 1) % 5) + 1;
        if (a != 0) throw unclassifiable("dodecic trace must be 0");
        bool found = false;
        for (int eps : {0, 1}) {
            ClassLabel cand = L;
            cand.epsilon = eps;
            if (auto nf = normal_form(cand)) {
                cand.alpha = fil_parameter(D, nf->first, nf->second);
                L = cand;
                found = true;
                break;
            }
        }
        if (!found) throw unclassifiable("no Dpc(12) normal form matches");
    } else {
        throw unclassifiable("field " + fl + " is not a Table 1 field");
    }

    // sanity: the label's canonical module over this field is isomorphic to D
    ClassLabel check = L;
    if (!check.alpha) check.alpha = ProjQ3::finite(0);
    FilteredModule E = filtration_from_point(detail::canonical_base_over(fl, check),
                                             *check.alpha);
    if (!is_isomorphic(D, E))
        throw unclassifiable("normal form does not round-trip for " + L.str());
    return L;
}

}  // namespace phimod
