#include "phimod/galois.hpp"

#include <algorithm>

namespace phimod {

Automorphism Automorphism::identity(const TowerFieldPtr& K) {
    return make(K, FieldElement::pi(K), 0);
}

Automorphism Automorphism::make(const TowerFieldPtr& K, FieldElement image_of_pi, int m) {
    Automorphism a;
    a.home_ = K;
    a.img_ = std::move(image_of_pi);
    a.m_ = ((m % K->f()) + K->f()) % K->f();
    a.img_powers_.reserve(static_cast<size_t>(K->e()));
    FieldElement p = FieldElement::one(K);
    for (int i = 0; i < K->e(); ++i) {
        a.img_powers_.push_back(p);
        if (i + 1 < K->e()) p = p * a.img_;
    }
    return a;
}

FieldElement Automorphism::apply(const FieldElement& x) const {
    if (x.home() != home_) throw field_mismatch{};
    FieldElement r = FieldElement::zero(home_);
    for (int i = 0; i < home_->e(); ++i) {
        const K0Value& c = x.coord(i);
        if (c.is_zero()) continue;
        r = r + img_powers_[static_cast<size_t>(i)] * c.frob(m_, home_->f());
    }
    return r;
}

Automorphism Automorphism::compose(const Automorphism& o) const {
    if (o.home_ != home_) throw field_mismatch{};
    return make(home_, apply(o.img_), m_ + o.m_);
}

Automorphism Automorphism::power(long n) const {
    Automorphism r = identity(home_);
    for (long i = 0; i < n; ++i) r = compose(r);
    return r;
}

/// Approximate roots make composed automorphisms match the identity only up
/// to the achievable precision; distinct automorphisms differ at valuations
/// bounded by the discriminant, far below this threshold.
static bool close_enough(const Val& v) {
    return v.infinite || v.v >= PrecisionPolicy{}.min_acceptable;
}

bool Automorphism::is_identity() const {
    return m_ == 0 && close_enough(img_.residual_valuation(FieldElement::pi(home_)));
}

bool Automorphism::equals(const Automorphism& o) const {
    return m_ == o.m_ && close_enough(img_.residual_valuation(o.img_));
}

Val Automorphism::residual_against(const Automorphism& o) const {
    return img_.residual_valuation(o.img_);
}

int Automorphism::order(int cap) const {
    Automorphism p = *this;
    for (int k = 1; k <= cap; ++k) {
        if (p.is_identity()) return k;
        p = compose(p);
    }
    return 0;
}

size_t GaloisGroup::inertia_order() const {
    size_t n = 0;
    for (const auto& g : elems_)
        if (g.aut.unramified_exponent() == 0) ++n;
    return n;
}

bool GaloisGroup::has_generator(const std::string& name) const {
    return std::find(gen_names_.begin(), gen_names_.end(), name) != gen_names_.end();
}

const Automorphism& GaloisGroup::generator(const std::string& name) const {
    for (size_t i = 0; i < gen_names_.size(); ++i)
        if (gen_names_[i] == name) return gens_[i];
    throw precondition_error("unknown generator: " + name);
}

static Automorphism eval_word(const std::vector<GeneratorSpec>& specs,
                              const std::vector<Automorphism>& gens, const RelationWord& w,
                              const TowerFieldPtr& K) {
    Automorphism r = Automorphism::identity(K);
    for (const auto& [name, n] : w) {
        size_t i = 0;
        while (i < specs.size() && specs[i].name != name) ++i;
        if (i == specs.size()) throw precondition_error("relation uses unknown generator " + name);
        long ord = specs[i].order;
        long k = ((n % ord) + ord) % ord;
        r = r.compose(gens[i].power(k));
    }
    return r;
}

Automorphism GaloisGroup::word(const RelationWord& w) const {
    return eval_word(pres_.generators, gens_, w, field_);
}

Val GaloisGroup::min_relation_residual() const {
    Val best = Val::inf();
    FieldElement piK = FieldElement::pi(field_);
    auto consider = [&](const Automorphism& a) {
        if (a.unramified_exponent() != 0) { best = Val::of(-1); return; }
        Val v = a.image_of_pi().residual_valuation(piK);
        if (v < best) best = v;
    };
    for (const auto& rel : pres_.relations) consider(word(rel));
    for (size_t i = 0; i < gens_.size(); ++i)
        consider(gens_[i].power(pres_.generators[i].order));
    return best;
}

static bool try_assignment(const TowerFieldPtr& K, const Presentation& pres,
                           const std::vector<std::vector<Automorphism>>& candidates,
                           std::vector<Automorphism>& chosen, size_t idx) {
    if (idx == pres.generators.size()) {
        for (const auto& rel : pres.relations)
            if (!eval_word(pres.generators, chosen, rel, K).is_identity()) return false;
        // the generated group must exhaust Gal(K/Q3)
        std::vector<Automorphism> table = {Automorphism::identity(K)};
        size_t target = static_cast<size_t>(K->degree());
        for (size_t i = 0; i < table.size(); ++i) {
            for (const auto& g : chosen) {
                Automorphism next = table[i].compose(g);
                bool seen = false;
                for (const auto& t : table)
                    if (t.equals(next)) { seen = true; break; }
                if (!seen) {
                    if (table.size() == target) return false;
                    table.push_back(next);
                }
            }
        }
        return table.size() == target;
    }
    for (const auto& cand : candidates[idx]) {
        bool duplicate = false;
        for (size_t j = 0; j < idx; ++j)
            if (chosen[j].equals(cand)) { duplicate = true; break; }
        if (duplicate) continue;
        chosen[idx] = cand;
        if (try_assignment(K, pres, candidates, chosen, idx + 1)) return true;
    }
    return false;
}

GaloisGroup build_galois_group(const TowerFieldPtr& K, const Presentation& pres,
                               const PrecisionPolicy& policy) {
    std::vector<Rational> poly = K->eisenstein();
    poly.push_back(1);
    return build_galois_group(K, pres, find_roots_in_field(poly, K, policy), policy);
}

GaloisGroup build_galois_group(const TowerFieldPtr& K, const Presentation& pres,
                               const std::vector<FieldElement>& roots,
                               const PrecisionPolicy& policy) {
    (void)policy;
    if (static_cast<int>(roots.size()) < K->e())
        throw not_galois(K->label() + ": only " + std::to_string(roots.size()) +
                         " of " + std::to_string(K->e()) + " Eisenstein roots found");

    std::vector<std::vector<Automorphism>> candidates;
    for (const auto& spec : pres.generators) {
        std::vector<Automorphism> cs;
        for (const auto& r : roots) {
            Automorphism a = Automorphism::make(K, r, spec.unramified_exponent);
            if (a.order(spec.order) == spec.order) cs.push_back(a);
        }
        if (cs.empty())
            throw relation_violation(K->label() + ": no root realizes generator " + spec.name);
        candidates.push_back(std::move(cs));
    }

    std::vector<Automorphism> chosen(pres.generators.size(), Automorphism::identity(K));
    if (!pres.generators.empty() && !try_assignment(K, pres, candidates, chosen, 0))
        throw relation_violation(K->label() + ": no root assignment satisfies the relations");

    GaloisGroup G;
    G.field_ = K;
    G.pres_ = pres;
    for (const auto& spec : pres.generators) G.gen_names_.push_back(spec.name);
    G.gens_ = chosen;

    // BFS element table with reduced words
    G.elems_.push_back({"id", Automorphism::identity(K)});
    for (size_t i = 0; i < G.elems_.size(); ++i) {
        for (size_t gi = 0; gi < G.gens_.size(); ++gi) {
            Automorphism next = G.elems_[i].aut.compose(G.gens_[gi]);
            bool seen = false;
            for (const auto& t : G.elems_)
                if (t.aut.equals(next)) { seen = true; break; }
            if (seen) continue;
            std::string w = G.elems_[i].word == "id" ? G.gen_names_[gi]
                                                     : G.elems_[i].word + "*" + G.gen_names_[gi];
            G.elems_.push_back({w, next});
        }
    }
    if (G.elems_.size() != static_cast<size_t>(K->degree()))
        throw not_galois(K->label() + ": element table has size " +
                         std::to_string(G.elems_.size()) + ", expected " +
                         std::to_string(K->degree()));
    return G;
}

}  // namespace phimod
