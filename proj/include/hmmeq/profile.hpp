#pragma once

#include <hmmeq/linalg.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace hmmeq {

// Symbolic density atoms. Gaussian, exponential and interval-domain monomial
// atoms live on the real line; discrete atoms are point masses on the finite
// side alphabet of a disjoint-union observation space. All parameters are
// exact rationals and atom identity is exact parameter equality.

struct GaussianAtom {
    Rational mean;
    Rational stddev;  // > 0
    friend bool operator==(const GaussianAtom&, const GaussianAtom&) = default;
};

struct ExponentialAtom {
    Rational rate;  // > 0
    friend bool operator==(const ExponentialAtom&, const ExponentialAtom&) = default;
};

/// x^degree restricted to [lo, hi).
struct MonomialAtom {
    unsigned degree = 0;
    Rational lo;
    Rational hi;  // lo < hi
    friend bool operator==(const MonomialAtom&, const MonomialAtom&) = default;
};

struct DiscreteAtom {
    std::string symbol;
    friend bool operator==(const DiscreteAtom&, const DiscreteAtom&) = default;
};

using Atom = std::variant<GaussianAtom, ExponentialAtom, MonomialAtom, DiscreteAtom>;

/// Canonical atom order: Gaussians by (stddev, mean), then exponentials by
/// decreasing rate, then monomials by (lo, hi, degree), then discrete atoms
/// by symbol.
bool atom_less(const Atom& a, const Atom& b);

std::string atom_to_string(const Atom& a);

/// A point of the observation space: a real number or a discrete symbol.
using Observation = std::variant<double, std::string>;

struct Term {
    Rational coeff;
    Atom atom;
    friend bool operator==(const Term&, const Term&) = default;
};

/// A rational-weighted sum of atoms in canonical form: terms sorted by atom,
/// no duplicate atoms, no zero coefficients. Value semantics throughout; the
/// linear-combination operators below are the closure constructor of the
/// profile language.
class ProfileExpr {
public:
    ProfileExpr() = default;  // the zero function
    explicit ProfileExpr(Atom atom) : terms_{{Rational(1), std::move(atom)}} {}
    static ProfileExpr from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    std::string to_string() const;

    friend ProfileExpr operator+(const ProfileExpr& a, const ProfileExpr& b);
    friend ProfileExpr operator-(const ProfileExpr& a, const ProfileExpr& b);
    friend ProfileExpr operator*(const Rational& c, const ProfileExpr& p);
    ProfileExpr operator-() const { return Rational(-1) * *this; }

    friend bool operator==(const ProfileExpr&, const ProfileExpr&) = default;
    friend bool operator<(const ProfileExpr& a, const ProfileExpr& b);

    friend std::ostream& operator<<(std::ostream& os, const ProfileExpr& p);

private:
    std::vector<Term> terms_;
};

/// Exact integral over the whole observation space.
Rational total_mass(const ProfileExpr& p);

/// Floating-point evaluation at a real point; discrete atoms contribute 0.
double evaluate_numeric(const ProfileExpr& p, double x);

/// Evaluation at a point of the disjoint-union space. At a symbol the value
/// is the summed coefficient of matching discrete atoms (density w.r.t. the
/// counting measure); continuous atoms contribute 0 there.
double evaluate_at(const ProfileExpr& p, const Observation& x);

/// Ordered list of pairwise-distinct, linearly independent atoms; monomial
/// atoms range over pairwise-disjoint refined intervals.
struct AtomBasis {
    std::vector<Atom> atoms;

    Eigen::Index size() const { return static_cast<Eigen::Index>(atoms.size()); }
    /// Position of an exactly-matching atom, or -1.
    Eigen::Index index_of(const Atom& a) const;
};

struct RefinedProfiles {
    AtomBasis basis;
    std::vector<RVector> coordinates;  // one exact coordinate vector per input profile
};

/// Common refinement of all input profiles: every Gaussian/exponential/
/// discrete atom that appears, plus x^n * chi_I for every degree n appearing
/// and every interval I of the common interval refinement. Each input profile
/// is reproduced exactly by its coordinate vector.
RefinedProfiles refine_atoms(const std::vector<ProfileExpr>& profiles);

struct LinearDecomposition {
    std::vector<std::size_t> basis_indices;  // indices of the selected input profiles
    RMatrix coefficients;                    // coefficients(i,j): profile i over basis j
    RefinedProfiles refined;                 // the atom coordinates everything was computed in
};

/// Greedy (input-order) selection of a subset of the input profiles whose
/// functions form a basis of the span of all inputs, with exact expansion
/// coefficients for every input. This is what makes the profile language
/// linearly decomposable.
LinearDecomposition linear_decompose(const std::vector<ProfileExpr>& profiles);

/// Matrix of numeric evaluations f_j(x_i).
Eigen::MatrixXd alternant_matrix(const std::vector<ProfileExpr>& profiles,
                                 const std::vector<Observation>& points);

enum class Independence { Independent, Undetermined };

/// Randomised independence witness: samples input points and accepts if some
/// trial yields a well-conditioned non-singular alternant matrix. Never
/// claims dependence; floats cannot certify singularity.
Independence alternant_probe(const std::vector<ProfileExpr>& profiles, int trials,
                             std::uint64_t rng_seed);

struct LintViolation {
    Observation where;
    double value;
};

/// Advisory numeric scan for negative density regions; grid_per_segment
/// sample points between consecutive breakpoints plus tail segments.
/// Exact negative discrete masses are always reported.
std::vector<LintViolation> nonnegativity_lint(const ProfileExpr& p, int grid_per_segment = 10000);

}  // namespace hmmeq
