#ifndef PHIMOD_GALOIS_HPP
#define PHIMOD_GALOIS_HPP

#include "phimod/tower.hpp"

#include <map>
#include <string>

namespace phimod {

struct relation_violation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct not_galois : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A field automorphism of a tower K/Q3, determined by the image of pi
/// and the unramified exponent m (action zeta_4 -> (-1)^m zeta_4).
class Automorphism {
public:
    static Automorphism identity(const TowerFieldPtr& K);
    static Automorphism make(const TowerFieldPtr& K, FieldElement image_of_pi, int m);

    const TowerFieldPtr& home() const { return home_; }
    const FieldElement& image_of_pi() const { return img_; }
    int unramified_exponent() const { return m_; }

    FieldElement apply(const FieldElement& x) const;
    /// (this o other)(x) = this(other(x)).
    Automorphism compose(const Automorphism& o) const;
    Automorphism power(long n) const;  // n >= 0

    bool is_identity() const;
    bool equals(const Automorphism& o) const;
    /// Valuation of image_of_pi(this) - image_of_pi(o); infinity on equality
    /// (only meaningful when the unramified exponents agree).
    Val residual_against(const Automorphism& o) const;
    /// Smallest k in [1, cap] with this^k = id; 0 when none found.
    int order(int cap) const;

private:
    TowerFieldPtr home_;
    FieldElement img_;
    int m_ = 0;
    std::vector<FieldElement> img_powers_;  // img^0 .. img^{e-1}
};

struct GeneratorSpec {
    std::string name;
    int order;
    int unramified_exponent;  // mod f
};

/// A relation word: product over factors (generator name, exponent) = id.
using RelationWord = std::vector<std::pair<std::string, int>>;

struct Presentation {
    std::vector<GeneratorSpec> generators;
    std::vector<RelationWord> relations;
};

struct GroupElement {
    std::string word;  // reduced word in the generator names ("id" for 1)
    Automorphism aut;
};

class GaloisGroup {
public:
    const TowerFieldPtr& field() const { return field_; }
    const Presentation& presentation() const { return pres_; }
    const std::vector<GroupElement>& elements() const { return elems_; }
    size_t order() const { return elems_.size(); }
    size_t inertia_order() const;

    bool has_generator(const std::string& name) const;
    const Automorphism& generator(const std::string& name) const;
    const std::vector<std::string>& generator_names() const { return gen_names_; }

    /// Evaluates a word in the generators.
    Automorphism word(const RelationWord& w) const;
    /// Minimum residual valuation over all presented relations and all
    /// generator-order words (how close each is to the identity).
    Val min_relation_residual() const;

    friend GaloisGroup build_galois_group(const TowerFieldPtr& K, const Presentation& pres,
                                          const std::vector<FieldElement>& roots,
                                          const PrecisionPolicy& policy);

private:
    TowerFieldPtr field_;
    Presentation pres_;
    std::vector<std::string> gen_names_;
    std::vector<Automorphism> gens_;
    std::vector<GroupElement> elems_;
};

/// Assigns each presented generator an automorphism (root of the Eisenstein
/// stage, canonical ordering, backtracking on the relation set), verifies
/// orders and relations, and builds the full element table of size e*f.
GaloisGroup build_galois_group(const TowerFieldPtr& K, const Presentation& pres,
                               const PrecisionPolicy& policy = {});

/// Same, over an already-computed canonical root list of the Eisenstein
/// stage (as produced by find_roots_in_field).
GaloisGroup build_galois_group(const TowerFieldPtr& K, const Presentation& pres,
                               const std::vector<FieldElement>& roots,
                               const PrecisionPolicy& policy = {});

}  // namespace phimod

#endif
