#include "phimod/linalg.hpp"

#include <algorithm>

namespace phimod {

RatMat rref(const RatMat& rows) {
    RatMat m = rows;
    size_t nr = m.size();
    size_t nc = nr ? m[0].size() : 0;
    size_t r = 0;
    for (size_t c = 0; c < nc && r < nr; ++c) {
        size_t p = r;
        while (p < nr && m[p][c] == 0) ++p;
        if (p == nr) continue;
        std::swap(m[r], m[p]);
        Rational inv = Rational(1) / m[r][c];
        for (size_t j = c; j < nc; ++j) m[r][j] *= inv;
        for (size_t i = 0; i < nr; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = c; j < nc; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

size_t rank(const RatMat& A) { return rref(A).size(); }

std::vector<RatVec> nullspace(const RatMat& A) {
    RatMat e = rref(A);
    size_t nc = A.empty() ? 0 : A[0].size();
    std::vector<long> pivot_of_col(nc, -1);
    for (size_t i = 0; i < e.size(); ++i) {
        size_t c = 0;
        while (c < nc && e[i][c] == 0) ++c;
        pivot_of_col[c] = static_cast<long>(i);
    }
    std::vector<RatVec> basis;
    for (size_t c = 0; c < nc; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        RatVec v(nc, 0);
        v[c] = 1;
        for (size_t j = 0; j < nc; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -e[static_cast<size_t>(pivot_of_col[j])][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

static bool pivot_better(const PadicNumber& a, const PadicNumber& b) {
    // prefer the 3-adically largest entry (smallest valuation)
    if (b.is_zero()) return !a.is_zero();
    if (a.is_zero()) return false;
    return a.valuation_int() < b.valuation_int();
}

std::vector<PadicVec> rref(const std::vector<PadicVec>& rows, int digit_floor) {
    std::vector<PadicVec> m = rows;
    size_t nr = m.size();
    size_t nc = nr ? m[0].size() : 0;
    size_t r = 0;
    for (size_t c = 0; c < nc && r < nr; ++c) {
        size_t p = r;
        for (size_t i = r + 1; i < nr; ++i)
            if (pivot_better(m[i][c], m[p][c])) p = i;
        if (m[p][c].is_zero()) continue;
        if (m[p][c].precision() < digit_floor)
            throw degenerate_precision("padic elimination: pivot retains too few digits");
        std::swap(m[r], m[p]);
        PadicNumber inv = m[r][c].inverse();
        for (size_t j = 0; j < nc; ++j) m[r][j] = m[r][j] * inv;
        for (size_t i = 0; i < nr; ++i) {
            if (i == r || m[i][c].is_zero()) continue;
            PadicNumber f = m[i][c];
            for (size_t j = 0; j < nc; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

std::vector<PadicVec> nullspace(const PadicMat& A, int digit_floor) {
    std::vector<PadicVec> e = rref(A, digit_floor);
    size_t nc = A.empty() ? 0 : A[0].size();
    std::vector<long> pivot_of_col(nc, -1);
    for (size_t i = 0; i < e.size(); ++i) {
        size_t c = 0;
        while (c < nc && e[i][c].is_zero()) ++c;
        if (c < nc) pivot_of_col[c] = static_cast<long>(i);
    }
    std::vector<PadicVec> basis;
    for (size_t c = 0; c < nc; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        PadicVec v;
        v.reserve(nc);
        for (size_t j = 0; j < nc; ++j) v.push_back(PadicNumber::zero_to(40));
        v[c] = PadicNumber::from_int(1, 40);
        for (size_t j = 0; j < nc; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -e[static_cast<size_t>(pivot_of_col[j])][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace phimod
