#include <hmmeq/equivalence.hpp>

#include <stdexcept>

namespace hmmeq {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::Labelling: return "labelling";
        case Method::Nonneg: return "nonneg";
        case Method::Theta: return "theta";
    }
    return "unknown";
}

namespace {

void require_distribution(const InitialDistribution& pi, std::size_t num_states) {
    std::vector<Diagnostic> diagnostics = validate(pi, num_states);
    if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));
}

}  // namespace

EquivalenceVerdict check_finite(const FiniteHMM& f, const InitialDistribution& pi1,
                                const InitialDistribution& pi2) {
    const Eigen::Index n = static_cast<Eigen::Index>(f.num_states());
    if (pi1.weights.size() != n || pi2.weights.size() != n)
        throw std::invalid_argument("check_finite: distribution dimension mismatch");

    const RVector ones = RVector::Constant(n, Rational(1));
    const SpanBasis basis = span_closure(ones, f.matrices());
    const RRowVector delta = pi1.weights - pi2.weights;

    EquivalenceVerdict verdict;
    verdict.basis_dimension = basis.size();
    for (Eigen::Index k = 0; k < basis.size(); ++k) {
        Rational value(0);
        const RVector& v = basis.vectors[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 0; i < n; ++i) value += delta(i) * v(i);
        if (value.is_zero()) continue;
        Witness w;
        for (std::size_t g : basis.witness_words[static_cast<std::size_t>(k)])
            w.word.push_back(f.alphabet()[g]);
        w.value = std::move(value);
        verdict.witness = std::move(w);
        verdict.equivalent = false;
        return verdict;
    }
    verdict.equivalent = true;
    return verdict;
}

EquivalenceVerdict check_continuous(const ContinuousHMM& h, const InitialDistribution& pi1,
                                    const InitialDistribution& pi2, const CheckOptions& options) {
    require_valid(h);
    require_distribution(pi1, h.num_states());
    require_distribution(pi2, h.num_states());

    if (options.fast_path) {
        EquivalenceVerdict fast = check_finite(labelling_reduction(h), pi1, pi2);
        if (fast.equivalent) {
            fast.method = Method::Labelling;
            return fast;
        }
        // A negative labelling answer proves nothing; fall through.
    }

    const FunctionalDecomposition fd = functional_decomposition(h);
    if (std::optional<FiniteHMM> direct = nonneg_reduction(fd)) {
        EquivalenceVerdict verdict = check_finite(*direct, pi1, pi2);
        verdict.method = Method::Nonneg;
        return verdict;
    }
    EquivalenceVerdict verdict = check_finite(finite_reduction(fd), pi1, pi2);
    verdict.method = Method::Theta;
    return verdict;
}

Rational finite_prefix_probability(const FiniteHMM& f, const InitialDistribution& pi,
                                   const std::vector<std::string>& word) {
    if (pi.weights.size() != static_cast<Eigen::Index>(f.num_states()))
        throw std::invalid_argument("finite_prefix_probability: distribution dimension mismatch");
    RRowVector row = pi.weights;
    for (const std::string& letter : word) {
        std::optional<std::size_t> a = f.letter_index(letter);
        if (!a) throw std::invalid_argument("finite_prefix_probability: unknown letter " + letter);
        row = row * f.matrix(*a);
    }
    Rational sum(0);
    for (Eigen::Index i = 0; i < row.size(); ++i) sum += row(i);
    return sum;
}

Rational verify_witness(const FiniteHMM& f, const InitialDistribution& pi1,
                        const InitialDistribution& pi2, const std::vector<std::string>& word) {
    return finite_prefix_probability(f, pi1, word) - finite_prefix_probability(f, pi2, word);
}

}  // namespace hmmeq
