#pragma once

#include <hmmeq/model_io.hpp>

#include <string>

namespace testsupport {

// Profile shorthands used all over the tests.
hmmeq::ProfileExpr uniform_profile(const hmmeq::Rational& lo, const hmmeq::Rational& hi);
hmmeq::ProfileExpr gaussian_profile(const hmmeq::Rational& mean, const hmmeq::Rational& stddev);
hmmeq::ProfileExpr exponential_profile(const hmmeq::Rational& rate);
hmmeq::ProfileExpr monomial_profile(unsigned degree, const hmmeq::Rational& lo,
                                    const hmmeq::Rational& hi, const hmmeq::Rational& coeff);
hmmeq::ProfileExpr dirac_profile(const std::string& symbol);

/// Parses a bundled model from the models/ directory.
hmmeq::ModelDocument load_model(const std::string& name);

// The worked examples, constructed directly (independent of the parser).

/// Four-state chain where q1 and q4 are equivalent but the labelling
/// reduction separates them: q1 splits into triangular densities 2x and
/// 2(1-x) on [0,1) whose even mixture is U(0,1).
hmmeq::ContinuousHMM make_counterexample();

/// Two-state chain of overlapping uniform windows U(0,2), U(1,3), U(2,4) and
/// the dependent mixture (chi_[0,1) + chi_[3,4))/2.
hmmeq::ContinuousHMM make_two_state_overlap();

/// Exp(2) / U(-1,0) / U(0,2) / Exp(1) two-state chain.
hmmeq::ContinuousHMM make_def1();

/// Disconnected three-state chain over the Gaussian densities N(0,1), N(1,2).
hmmeq::ContinuousHMM make_labelling_gaussians();

/// The finite labelling of make_labelling_gaussians: letters a1 (for N(0,1))
/// and a2 (for N(1,2)); states q1 and q2 are equivalent.
hmmeq::FiniteHMM make_labelling_right_diagram();

/// Two-state finite chain with M(a) = [[1/8, 1/2], [1/3, 0]] and
/// M(b) = [[3/8, 0], [0, 2/3]].
hmmeq::FiniteHMM make_intro_finite();

/// Timing side-channel pair: keys i = 1, 2 dispatch to functions a (prob 1/3)
/// and b (prob 2/3) and emit uniform execution times U(m - 1/2, m + 1/2)
/// with key-dependent means. States: s1 t1a t1b s2 t2a t2b.
hmmeq::ContinuousHMM make_timing(const hmmeq::Rational& m1a, const hmmeq::Rational& m1b,
                                 const hmmeq::Rational& m2a, const hmmeq::Rational& m2b);

/// Padded timing pair: every execution time is U(w + u, w + 2u).
hmmeq::ContinuousHMM make_timing_padded(const hmmeq::Rational& w, const hmmeq::Rational& u);

}  // namespace testsupport
