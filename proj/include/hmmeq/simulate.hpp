#pragma once

#include <hmmeq/hmm.hpp>
#include <hmmeq/rng.hpp>

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

namespace hmmeq {

struct Trace {
    std::vector<Observation> observations;
};

/// Draw one observation from a density profile. The profile must be a genuine
/// density (lint-clean, mass 1); single atoms use closed-form transforms,
/// mixtures invert the CDF by bisection to 1e-12.
Observation sample_observation(const ProfileExpr& profile, Rng& rng);

/// Prepared sampler for a continuous-observation model; construction checks
/// once that every transition density is sampleable (non-negative under the
/// lint) and precomputes per-profile inversion data.
class TraceSampler {
public:
    explicit TraceSampler(const ContinuousHMM& h);
    ~TraceSampler();
    TraceSampler(TraceSampler&&) noexcept;
    TraceSampler& operator=(TraceSampler&&) noexcept;

    Trace sample(const InitialDistribution& pi, int length, Rng& rng) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One reproducible trace of n observations under P_pi semantics.
Trace sample_trace(const ContinuousHMM& h, const InitialDistribution& pi, int length,
                   std::uint64_t rng_seed);

/// count traces with per-trace derived seeds; the result does not depend on
/// how the work would be split across workers.
std::vector<Trace> sample_traces(const ContinuousHMM& h, const InitialDistribution& pi, int length,
                                 int count, std::uint64_t rng_seed);

struct TwoSampleResult {
    bool pass = true;          // no rejection at the given significance level
    double statistic = 0.0;    // chi-square homogeneity statistic
    double critical_value = 0.0;
    int dof = 0;
    int cells = 0;
};

/// Chi-square homogeneity test between length-n observation prefixes sampled
/// under pi1 and pi2 (product binning: per-coordinate value buckets plus
/// discrete symbols). A stochastic, advisory oracle for equivalence verdicts.
TwoSampleResult two_sample_check(const ContinuousHMM& h, const InitialDistribution& pi1,
                                 const InitialDistribution& pi2, int prefix_length, int samples,
                                 int bins, double alpha, std::uint64_t rng_seed);

struct RationalInterval {
    Rational lo;
    Rational hi;
};

/// One coordinate constraint of a cylinder set: a real interval [lo, hi) or a
/// discrete symbol.
using ObservationBox = std::variant<RationalInterval, std::string>;

/// Numeric pi * (int_B1 Psi) * ... * (int_Bn Psi) * 1^T. Monomial atoms
/// integrate exactly, Gaussians via the error function, exponentials in
/// closed form.
double cylinder_probability(const ContinuousHMM& h, const InitialDistribution& pi,
                            const std::vector<ObservationBox>& boxes);

}  // namespace hmmeq
