#ifndef PHIMOD_PHIGAL_HPP
#define PHIMOD_PHIGAL_HPP

#include "phimod/catalog.hpp"
#include "phimod/semilinear.hpp"

#include <map>
#include <memory>
#include <optional>

namespace phimod {

struct invalid_label : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct unclassifiable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct descent_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct catalog_miss : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct wrong_field : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A point of P^1(Q3), stored normalized: (alpha : 1) or (1 : 0).
class ProjQ3 {
public:
    ProjQ3() = default;
    static ProjQ3 finite(Rational a) { ProjQ3 t; t.a_ = std::move(a); return t; }
    static ProjQ3 infinity() { ProjQ3 t; t.inf_ = true; return t; }
    /// Normalizes an arbitrary nonzero pair (x : y).
    static ProjQ3 of(const Rational& x, const Rational& y);

    bool is_infinity() const { return inf_; }
    const Rational& alpha() const;  // finite points only
    Rational x() const { return inf_ ? Rational(1) : a_; }
    Rational y() const { return inf_ ? Rational(0) : Rational(1); }

    bool operator==(const ProjQ3& o) const { return inf_ == o.inf_ && (inf_ || a_ == o.a_); }
    bool operator!=(const ProjQ3& o) const { return !(*this == o); }
    std::string str() const;  // "0", "-5/3", "inf"

private:
    bool inf_ = false;
    Rational a_ = 0;
};

/// A Q3-basis { (x1,y1), (x2,y2) } of the Galois-fixed plane in K (x) D.
struct PlaneBasis {
    FieldElement x1, y1;
    FieldElement x2, y2;
};

/// A rank-2 (phi, Gal(K/Q3))-module: D = K0 e1 + K0 e2 with a sigma-
/// semilinear bijective Frobenius and a semilinear Galois action given on
/// the group's generators (twist = generator's unramified exponent).
struct PhiGalModule {
    TowerFieldPtr field;
    const GaloisGroup* group = nullptr;  // catalog-owned, stable address
    K0Matrix phi;                        // twist 1
    std::map<std::string, K0Matrix> galois;

    // lazily computed by fixed_plane_in_DK; copies share the cache
    mutable std::shared_ptr<const PlaneBasis> plane_cache;
};

/// PhiGalModule plus Fil^1 D_K = (fil_x (x) e1 + fil_y (x) e2) K.
struct FilteredModule {
    PhiGalModule base;
    FieldElement fil_x, fil_y;
};

enum class Kind { Dc, Dpc, Dpcg, Dpcng };
std::string kind_name(Kind k);

/// Table 1 class label.  alpha is the filtration parameter as a point of
/// P^1(Q3) in the fixed-plane coordinates of the canonical module; it is
/// absent for the abelian cubic/sextic rows (where the filtration position
/// does not affect the isomorphism class) and in unfiltered mode.
struct ClassLabel {
    Kind kind = Kind::Dc;
    int e = 1;
    int trace = 0;                    // the a of X^2 + aX + 3
    std::optional<int> mu;            // abelian cubic/sextic lambda-root
    std::optional<int> field_index;   // dodecic i in 1..5
    std::optional<int> epsilon;       // dodecic sign pattern
    std::optional<ProjQ3> alpha;

    bool operator==(const ClassLabel& o) const;
    std::string str() const;  // e.g. "Dc(1;-3;0)", "Dpcg(3;-3,1)", "Dpc(12;0;3;1;5)"
};

struct WeilWitness {
    std::string word;  // group element, reduced word
    int n;             // phi-exponent: the map is g o phi^{-n}
    std::optional<Rational> trace;
};

struct StableLine {
    K0Vec v;             // spanning vector of the K0-line
    Rational t_newton;   // v3 of the phi^f-multiplier divided by f
    bool line_in_fil = false;  // D'_K equals Fil^1 (set by is_admissible)
};

struct ConditionsReport {
    bool cond1 = false;
    std::optional<std::array<Rational, 2>> char_poly_coeffs;  // X^2 + c0 X + c1
    bool cond2 = false;
    std::vector<WeilWitness> weil;
    int weil_window = 6;
    bool cond3 = false;
    bool cond4 = false;
    bool admissible = false;
    std::vector<StableLine> lines;
    Rational t_N = 0;
    int t_H = 1;

    bool all_pass() const { return cond1 && cond2 && cond3 && cond4 && admissible; }
};

/// Checks the PhiGalModule invariants: bijective phi, phi-equivariance of
/// every generator, the representation property on all presented relations,
/// K0-linear inertia.  Throws precondition_error on violation.
void validate_module(const PhiGalModule& D);

/// The canonical module of a Table 1 label; alpha defaults to [0:1].
FilteredModule canonical_module(const ClassLabel& label);
/// Same without the filtration (matrices only).
PhiGalModule canonical_base(const ClassLabel& label);

/// All finite-row labels (e=1,2 and the abelian cubic/sextic rows).
std::vector<ClassLabel> finite_row_labels();
/// The 13 P^1(Q3)-row base labels (alpha unset).
std::vector<ClassLabel> p1_row_labels();

Rational t_newton(const PhiGalModule& D);
int t_hodge(const FilteredModule& D);

/// All K0-lines stable under phi and the full Galois action, with their
/// Newton numbers.  Computed from the phi^f linearization's eigenlines.
std::vector<StableLine> stable_lines(const PhiGalModule& D);

/// t_N = t_H globally plus t_H(D') <= t_N(D') on every stable line.
std::pair<bool, std::vector<StableLine>> is_admissible(const FilteredModule& D);

/// Q3-basis of the simultaneous Galois fixed space in K (x) D; asserts
/// dimension 2 (throws descent_failure otherwise).  Cached on the module.
const PlaneBasis& fixed_plane_in_DK(const PhiGalModule& D);

/// [x:y] -> line through x*v1 + y*v2 in the fixed-plane basis.
FilteredModule filtration_from_point(const PhiGalModule& D, const ProjQ3& t);
/// Inverse: the fixed-plane parameter of a Galois-stable filtration line;
/// nullopt when the parameter fails to be rational.
std::optional<ProjQ3> point_from_filtration(const FilteredModule& D,
                                            const BigInt& height_bound = BigInt(1000000));

/// Slope fil_x / fil_y of the filtration line (fil_y invertible).
FieldElement fil_slope(const FilteredModule& D);

/// set_id in {M3na, M6na, M3a, M6a, M12(i,eps)}; checks the defining
/// Galois/Moebius relation of alpha and the field-of-definition constraint.
bool membership_check(const std::string& set_id, const FieldElement& alpha);

/// Isomorphism of filtered modules over the same field and group: an
/// invertible twist-0 matrix commuting with phi and the Galois action and
/// carrying Fil^1 to Fil^1'.  Returns a witness or absence.
std::optional<K0Matrix> is_isomorphic(const FilteredModule& D, const FilteredModule& E);
std::optional<K0Matrix> is_isomorphic_unfiltered(const PhiGalModule& D, const PhiGalModule& E);

/// The Table 1 label of a filtered module satisfying conditions (1)-(4)
/// and admissibility; throws unclassifiable otherwise.
ClassLabel classify(const FilteredModule& D);
/// Unfiltered mode: the label family (no alpha).
ClassLabel classify_unfiltered(const PhiGalModule& D);

/// Unramified quadratic twist: phi negated, everything else kept.
FilteredModule twist_unramified(const FilteredModule& D);
/// Ramified quadratic twist: extends to K(sqrt3) (which must exist in the
/// catalog), adjoins t2 = -Id, transports the filtration.
FilteredModule twist_ramified(const FilteredModule& D);

/// Traces of g o phi^{-n} for every group element g and every n with
/// n = m(g) mod f and |n| <= N_max, rational-reconstructed.
std::vector<WeilWitness> weil_traces(const PhiGalModule& D, int N_max = 6,
                                     const BigInt& height_bound = BigInt(1000000));

ConditionsReport check_conditions(const FilteredModule& D, int weil_window = 6,
                                  const BigInt& height_bound = BigInt(1000000));

struct RowReport {
    std::string row;
    int expected = 0;
    int computed = 0;
    bool pass = false;
    std::vector<std::string> notes;
};

struct Table1Report {
    int sample_budget = 5;
    int weil_window = 6;
    unsigned seed = 0;
    std::vector<RowReport> rows;
    bool all_pass() const;
};

/// Reproduces Table 1: exact class counts on the finite rows, sampled
/// pairwise non-isomorphism, conditions, admissibility and classify
/// round-trips on the P^1(Q3) rows.
Table1Report verify_table1(int sample_budget = 5, unsigned seed = 20240913u);

}  // namespace phimod

#endif
