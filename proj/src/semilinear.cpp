#include "phimod/semilinear.hpp"

#include "phimod/linalg.hpp"

namespace phimod {

namespace {

/// Unknown index of entry (i,j)'s real (part 0) or zeta_4 (part 1)
/// coordinate in the flattened 4f-vector.
size_t uidx(int i, int j, int part, int f) {
    return static_cast<size_t>((i * 2 + j) * f + part);
}

/// Adds to `row` the Q3-linear coefficients of known * sigma^s(unknown),
/// where the unknown occupies columns base..base+f-1 and `sign` is an
/// overall scalar.  s_odd applies the conjugation b -> -b first.
struct LinTerm {
    Rational re, im;  // the known multiplier c + d*zeta_4
    bool conj;
    int sign;
};

void add_term_rat(RatVec& row_re, RatVec* row_im, size_t base, int f, const LinTerm& t) {
    Rational c = t.sign * t.re, d = t.sign * t.im;
    Rational s = t.conj ? -1 : 1;
    // (c + d i)(a + s b i) = (ca - s d b) + (da + s c b) i
    row_re[base] += c;
    if (f == 2) {
        row_re[base + 1] += -s * d;
        (*row_im)[base] += d;
        (*row_im)[base + 1] += s * c;
    }
}

bool all_exact(const std::vector<std::pair<K0Matrix, K0Matrix>>& cs) {
    for (const auto& [L, R] : cs)
        if (!L.is_exact() || !R.is_exact()) return false;
    return true;
}

LinTerm term_of(const K0Value& k, bool conj, int sign) {
    const GaussianRational& g = k.exact();
    return {g.re, g.im, conj, sign};
}

PadicNumber pnum(const Rational& q) {
    return PadicNumber::from_rational(q, K0Value::default_precision);
}

}  // namespace

SolutionSpace equivariant_solution_space(
    const std::vector<std::pair<K0Matrix, K0Matrix>>& constraints) {
    if (constraints.empty()) throw precondition_error("equivariant_solution_space: no constraints");
    int f = constraints.front().first.f();
    for (const auto& [L, R] : constraints) {
        if (L.f() != f || R.f() != f)
            throw precondition_error("equivariant_solution_space: mixed f");
        if (((L.twist() - R.twist()) % f + f) % f != 0)
            throw precondition_error("equivariant_solution_space: twist mismatch in constraint");
    }
    size_t n = static_cast<size_t>(4 * f);

    if (all_exact(constraints)) {
        RatMat A;
        for (const auto& [L, R] : constraints) {
            bool conj = f == 2 && ((R.twist() % f) + f) % f == 1;
            for (int i = 0; i < 2; ++i) {
                for (int k = 0; k < 2; ++k) {
                    RatVec row_re(n, 0), row_im(n, 0);
                    for (int j = 0; j < 2; ++j) {
                        // + X[i][j] L[j][k]
                        add_term_rat(row_re, &row_im, uidx(i, j, 0, f), f,
                                     term_of(L.at(j, k), false, +1));
                        // - R[i][j] sigma^t(X[j][k])
                        add_term_rat(row_re, &row_im, uidx(j, k, 0, f), f,
                                     term_of(R.at(i, j), conj, -1));
                    }
                    A.push_back(std::move(row_re));
                    if (f == 2) A.push_back(std::move(row_im));
                }
            }
        }
        std::vector<RatVec> null = rref(nullspace(A));
        SolutionSpace S;
        for (const auto& u : null) {
            K0Matrix X(K0Value(GaussianRational(u[uidx(0, 0, 0, f)], f == 2 ? u[uidx(0, 0, 1, f)] : 0)),
                       K0Value(GaussianRational(u[uidx(0, 1, 0, f)], f == 2 ? u[uidx(0, 1, 1, f)] : 0)),
                       K0Value(GaussianRational(u[uidx(1, 0, 0, f)], f == 2 ? u[uidx(1, 0, 1, f)] : 0)),
                       K0Value(GaussianRational(u[uidx(1, 1, 0, f)], f == 2 ? u[uidx(1, 1, 1, f)] : 0)),
                       f, 0);
            S.basis.push_back(std::move(X));
        }
        S.dimension_over_Q3 = static_cast<int>(S.basis.size());
        return S;
    }

    // approximate layer: same flattening with padic coefficients
    int prec = K0Value::default_precision;
    PadicMat A;
    auto add_term = [&](PadicVec& row_re, PadicVec* row_im, size_t base, const K0Value& k,
                        bool conj, int sign) {
        PadicNumber c = k.re(prec) * pnum(sign);
        PadicNumber d = k.im(prec) * pnum(sign);
        PadicNumber s = pnum(conj ? -1 : 1);
        row_re[base] = row_re[base] + c;
        if (f == 2) {
            row_re[base + 1] = row_re[base + 1] - s * d;
            (*row_im)[base] = (*row_im)[base] + d;
            (*row_im)[base + 1] = (*row_im)[base + 1] + s * c;
        }
    };
    for (const auto& [L, R] : constraints) {
        bool conj = f == 2 && ((R.twist() % f) + f) % f == 1;
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 2; ++k) {
                PadicVec row_re(n, PadicNumber::zero_to(prec));
                PadicVec row_im(n, PadicNumber::zero_to(prec));
                for (int j = 0; j < 2; ++j) {
                    add_term(row_re, &row_im, uidx(i, j, 0, f), L.at(j, k), false, +1);
                    add_term(row_re, &row_im, uidx(j, k, 0, f), R.at(i, j), conj, -1);
                }
                A.push_back(std::move(row_re));
                if (f == 2) A.push_back(std::move(row_im));
            }
        }
    }
    std::vector<PadicVec> null = rref(nullspace(A));
    SolutionSpace S;
    for (const auto& u : null) {
        auto ent = [&](int i, int j) {
            PadicNumber re = u[uidx(i, j, 0, f)];
            PadicNumber im = f == 2 ? u[uidx(i, j, 1, f)] : PadicNumber::zero_to(prec);
            return K0Value::approx(std::move(re), std::move(im));
        };
        S.basis.push_back(K0Matrix(ent(0, 0), ent(0, 1), ent(1, 0), ent(1, 1), f, 0));
    }
    S.dimension_over_Q3 = static_cast<int>(S.basis.size());
    return S;
}

std::vector<K0Vec> fixed_space(const std::vector<K0Matrix>& generators) {
    if (generators.empty()) throw precondition_error("fixed_space: no generators");
    int f = generators.front().f();
    size_t n = static_cast<size_t>(2 * f);
    bool exact = true;
    for (const auto& g : generators) {
        if (g.f() != f) throw precondition_error("fixed_space: mixed f");
        if (!g.is_exact()) exact = false;
    }
    auto vidx = [&](int j, int part) { return static_cast<size_t>(j * f + part); };

    if (exact) {
        RatMat A;
        for (const auto& g : generators) {
            bool conj = f == 2 && ((g.twist() % f) + f) % f == 1;
            for (int i = 0; i < 2; ++i) {
                RatVec row_re(n, 0), row_im(n, 0);
                for (int j = 0; j < 2; ++j)
                    add_term_rat(row_re, &row_im, vidx(j, 0), f, term_of(g.at(i, j), conj, +1));
                row_re[vidx(i, 0)] -= 1;
                if (f == 2) row_im[vidx(i, 1)] -= 1;
                A.push_back(std::move(row_re));
                if (f == 2) A.push_back(std::move(row_im));
            }
        }
        std::vector<RatVec> null = rref(nullspace(A));
        std::vector<K0Vec> basis;
        for (const auto& u : null) {
            K0Vec v;
            for (int j = 0; j < 2; ++j)
                v[static_cast<size_t>(j)] =
                    K0Value(GaussianRational(u[vidx(j, 0)], f == 2 ? u[vidx(j, 1)] : 0));
            basis.push_back(std::move(v));
        }
        return basis;
    }

    int prec = K0Value::default_precision;
    PadicMat A;
    for (const auto& g : generators) {
        bool conj = f == 2 && ((g.twist() % f) + f) % f == 1;
        PadicNumber s = pnum(conj ? -1 : 1);
        for (int i = 0; i < 2; ++i) {
            PadicVec row_re(n, PadicNumber::zero_to(prec));
            PadicVec row_im(n, PadicNumber::zero_to(prec));
            for (int j = 0; j < 2; ++j) {
                PadicNumber c = g.at(i, j).re(prec);
                PadicNumber d = g.at(i, j).im(prec);
                row_re[vidx(j, 0)] = row_re[vidx(j, 0)] + c;
                if (f == 2) {
                    row_re[vidx(j, 1)] = row_re[vidx(j, 1)] - s * d;
                    row_im[vidx(j, 0)] = row_im[vidx(j, 0)] + d;
                    row_im[vidx(j, 1)] = row_im[vidx(j, 1)] + s * c;
                }
            }
            row_re[vidx(i, 0)] = row_re[vidx(i, 0)] - pnum(1);
            if (f == 2) row_im[vidx(i, 1)] = row_im[vidx(i, 1)] - pnum(1);
            A.push_back(std::move(row_re));
            if (f == 2) A.push_back(std::move(row_im));
        }
    }
    std::vector<PadicVec> null = rref(nullspace(A));
    std::vector<K0Vec> basis;
    for (const auto& u : null) {
        K0Vec v;
        for (int j = 0; j < 2; ++j) {
            PadicNumber re = u[vidx(j, 0)];
            PadicNumber im = f == 2 ? u[vidx(j, 1)] : PadicNumber::zero_to(prec);
            v[static_cast<size_t>(j)] = K0Value::approx(std::move(re), std::move(im));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::array<Rational, 2> char_poly(const K0Matrix& M, const BigInt& height_bound) {
    auto c = rational_char_poly(M, height_bound);
    if (!c) throw not_rational("char_poly: trace or determinant is not rational within bound");
    return *c;
}

}  // namespace phimod
