#ifndef PHIMOD_PHIGAL_DETAIL_HPP
#define PHIMOD_PHIGAL_DETAIL_HPP

#include "phimod/phigal.hpp"

namespace phimod::detail {

/// K-linear extension of a twist-0 K0-matrix applied to a vector of K (x) D
/// written in the coordinates (x, y) on e1, e2.
std::pair<FieldElement, FieldElement> apply_matrix_K(const K0Matrix& M, const FieldElement& x,
                                                     const FieldElement& y);

/// x * y' - y * x', the parallelism test for two K-lines.
FieldElement k_cross(const FieldElement& x, const FieldElement& y, const FieldElement& xp,
                     const FieldElement& yp);

/// The action of the generator `name` on a K (x) D vector: matrix on the
/// D-side, field automorphism on the coordinates.
std::pair<FieldElement, FieldElement> galois_apply_K(const PhiGalModule& D,
                                                     const std::string& name,
                                                     const FieldElement& x, const FieldElement& y);

bool fil_is_galois_stable(const FilteredModule& D);

/// Canonical matrices of a label skeleton realized over the given catalog
/// field (the field must carry the right group); alpha is ignored.
PhiGalModule canonical_base_over(const std::string& field_label, const ClassLabel& label);

/// Semilinear matrix of a reduced group-element word ("id" or "a*b*c").
K0Matrix element_matrix(const PhiGalModule& D, const std::string& word);

/// First invertible small-integer combination of the basis, or absence.
std::optional<K0Matrix> pick_invertible(const std::vector<K0Matrix>& basis);

/// Within a precomputed equivariant solution space between D.base and
/// E.base, an invertible element carrying D's filtration to E's.
std::optional<K0Matrix> find_iso(const SolutionSpace& S, const FilteredModule& D,
                                 const FilteredModule& E);

/// The constraint list (phi plus every generator) between two modules over
/// the same field and group.
SolutionSpace morphism_space(const PhiGalModule& D, const PhiGalModule& E);

}  // namespace phimod::detail

#endif
