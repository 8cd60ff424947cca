#ifndef PHIMOD_SEMILINEAR_HPP
#define PHIMOD_SEMILINEAR_HPP

#include "phimod/matrix.hpp"

#include <utility>
#include <vector>

namespace phimod {

struct not_rational : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A Q3-basis of matrices (twist 0) cut out by a semilinear constraint
/// system.
struct SolutionSpace {
    std::vector<K0Matrix> basis;
    int dimension_over_Q3 = 0;
};

/// Solves for X (twist 0) with X o L_i = R_i o X as semilinear maps, i.e.
/// X L_i = R_i sigma^{t_i}(X) entrywise, flattened to a Q3-linear system in
/// the 4f real/imaginary coordinates of X.  The twists of L_i and R_i must
/// agree.  Exact throughout when every entry is exact.
SolutionSpace equivariant_solution_space(
    const std::vector<std::pair<K0Matrix, K0Matrix>>& constraints);

/// Q3-basis of the simultaneous fixed space { v in K0^2 : M_g sigma^{t_g}(v)
/// = v for all g }.
std::vector<K0Vec> fixed_space(const std::vector<K0Matrix>& generators);

/// Exact rational characteristic polynomial X^2 + c[0] X + c[1] of a
/// twist-0 matrix; throws not_rational when trace or determinant fails to
/// reconstruct within the height bound.
std::array<Rational, 2> char_poly(const K0Matrix& M,
                                  const BigInt& height_bound = BigInt(1000000));

}  // namespace phimod

#endif
