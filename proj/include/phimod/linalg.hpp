#ifndef PHIMOD_LINALG_HPP
#define PHIMOD_LINALG_HPP

#include "phimod/padic.hpp"

namespace phimod {

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;
using PadicVec = std::vector<PadicNumber>;
using PadicMat = std::vector<PadicVec>;

struct degenerate_precision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Basis of the right nullspace { x : A x = 0 }, exact over Q.
std::vector<RatVec> nullspace(const RatMat& A);

/// Same over truncated 3-adics; pivots chosen by minimal valuation
/// (maximal 3-adic absolute value).  Entries that are zero to precision
/// are treated as zero; throws degenerate_precision when a pivot would
/// have fewer retained digits than `digit_floor`.
std::vector<PadicVec> nullspace(const PadicMat& A, int digit_floor = 5);

/// Reduced row echelon form of the row space (pivots 1, cleared columns).
/// Zero rows dropped.  Canonicalizes a basis deterministically.
RatMat rref(const RatMat& rows);
std::vector<PadicVec> rref(const std::vector<PadicVec>& rows, int digit_floor = 5);

/// Rank of A, exact over Q.
size_t rank(const RatMat& A);

}  // namespace phimod

#endif
