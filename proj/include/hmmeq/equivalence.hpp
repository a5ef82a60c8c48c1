#pragma once

#include <hmmeq/hmm.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hmmeq {

/// Which reduction decided a continuous-model check.
enum class Method { Labelling, Nonneg, Theta };

std::string_view method_name(Method m);

struct Witness {
    std::vector<std::string> word;  // letters of the finite alphabet
    Rational value;                 // (pi1 - pi2) M(word) 1^T, nonzero
};

struct EquivalenceVerdict {
    bool equivalent = false;
    std::optional<Witness> witness;      // present iff not equivalent
    Eigen::Index basis_dimension = 0;    // size of the computed span basis, <= |Q|
    std::optional<Method> method;        // set by check_continuous
};

/// Finite-observation equivalence kernel: pi1 and pi2 are equivalent iff
/// pi1 - pi2 is orthogonal to the span of {M(w) 1^T}, computed by the
/// breadth-first span closure. The witness, when present, is the word of the
/// first basis vector that breaks orthogonality (shortest found).
EquivalenceVerdict check_finite(const FiniteHMM& f, const InitialDistribution& pi1,
                                const InitialDistribution& pi2);

struct CheckOptions {
    /// Try the labelling reduction first; sound when it answers "equivalent",
    /// so a positive answer short-circuits the decomposition pipeline.
    bool fast_path = true;
};

/// Full decision procedure for continuous-observation models: optional
/// labelling fast path, then independent functional decomposition followed by
/// the non-negative or theta-scaled reduction, then the finite kernel.
EquivalenceVerdict check_continuous(const ContinuousHMM& h, const InitialDistribution& pi1,
                                    const InitialDistribution& pi2, const CheckOptions& options = {});

/// Exact pi * M(w_1) * ... * M(w_n) * 1^T.
Rational finite_prefix_probability(const FiniteHMM& f, const InitialDistribution& pi,
                                   const std::vector<std::string>& word);

/// Certificate check: prefix probability under pi1 minus the one under pi2.
Rational verify_witness(const FiniteHMM& f, const InitialDistribution& pi1,
                        const InitialDistribution& pi2, const std::vector<std::string>& word);

}  // namespace hmmeq
