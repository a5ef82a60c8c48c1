#pragma once

#include <hmmeq/profile.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hmmeq {

/// One transition of a continuous-observation HMM: move from
/// states[from] to states[to] with probability prob while emitting an
/// observation with density profile. Several transitions may share the same
/// state pair (parallel edges with distinct densities, as in mixture
/// self-loops); the entry of the observation density matrix is their sum.
struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    Rational prob;
    ProfileExpr profile;
};

class ContinuousHMM {
public:
    ContinuousHMM(std::vector<std::string> states, std::vector<Transition> transitions);

    const std::vector<std::string>& states() const { return states_; }
    std::size_t num_states() const { return states_.size(); }
    /// Transitions in row-major order (by source, then target, then original
    /// position); all profile enumeration order derives from this.
    const std::vector<Transition>& transitions() const { return transitions_; }

    std::optional<std::size_t> state_index(std::string_view name) const;

private:
    std::vector<std::string> states_;
    std::vector<Transition> transitions_;
};

class FiniteHMM {
public:
    FiniteHMM(std::vector<std::string> states, std::vector<std::string> alphabet,
              std::vector<RMatrix> matrices);

    const std::vector<std::string>& states() const { return states_; }
    std::size_t num_states() const { return states_.size(); }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::vector<RMatrix>& matrices() const { return matrices_; }
    const RMatrix& matrix(std::size_t letter) const { return matrices_[letter]; }

    std::optional<std::size_t> state_index(std::string_view name) const;
    std::optional<std::size_t> letter_index(std::string_view letter) const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> alphabet_;
    std::vector<RMatrix> matrices_;
};

struct InitialDistribution {
    RRowVector weights;

    static InitialDistribution dirac(std::size_t num_states, std::size_t state);
    static InitialDistribution uniform(std::size_t num_states);
};

struct Diagnostic {
    enum class Severity { Error, Warning };
    Severity severity = Severity::Error;
    std::string message;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// Def.-1 checks: positive transition probabilities, unit profile masses,
/// unit row sums (all exact), plus advisory non-negativity lint warnings.
std::vector<Diagnostic> validate(const ContinuousHMM& h);

/// Non-negative matrices whose sum is stochastic.
std::vector<Diagnostic> validate(const FiniteHMM& f);

std::vector<Diagnostic> validate(const InitialDistribution& pi, std::size_t num_states);

/// Thrown by operations whose precondition is a valid model.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

void require_valid(const ContinuousHMM& h);

/// The syntactically distinct canonical profiles of h in first-appearance
/// (row-major) order; position k corresponds to fresh letter a{k+1} in the
/// labelling reduction.
std::vector<ProfileExpr> distinct_profiles(const ContinuousHMM& h);

/// Fresh letter per distinct profile: M(a_k)[i][j] collects the probability
/// of the (i, j) transitions whose profile equals the k-th distinct profile.
/// Sound for equivalence but incomplete: linearly dependent yet syntactically
/// distinct densities get distinct letters.
FiniteHMM labelling_reduction(const ContinuousHMM& h);

/// Psi = sum_k basis_profiles[k] * matrices[k] with linearly independent
/// basis profiles drawn from the model's own profiles.
struct FunctionalDecomposition {
    std::vector<std::string> states;
    std::vector<ProfileExpr> basis_profiles;
    std::vector<RMatrix> matrices;

    std::size_t size() const { return basis_profiles.size(); }
    RMatrix total() const;  // sum of the matrices; stochastic for valid models
};

FunctionalDecomposition functional_decomposition(const ContinuousHMM& h);

/// theta = min(1/2, min positive entry of P / max entry over all P_k), the
/// scaling that keeps P - theta*P_k entrywise non-negative.
Rational theta(const FunctionalDecomposition& fd);

/// Finite HMM over fresh letters a1..ad with M(a_k) = (P - theta*P_k)/(d - theta);
/// preserves the span of the P_k and hence equivalence.
FiniteHMM finite_reduction(const FunctionalDecomposition& fd);

/// When every P_k is entrywise non-negative the decomposition itself is a
/// finite HMM: M(a_k) = P_k. Otherwise nullopt (use finite_reduction).
std::optional<FiniteHMM> nonneg_reduction(const FunctionalDecomposition& fd);

}  // namespace hmmeq
