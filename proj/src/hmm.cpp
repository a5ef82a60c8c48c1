#include <hmmeq/hmm.hpp>

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hmmeq {

namespace {

std::string letter_name(std::size_t k) { return "a" + std::to_string(k + 1); }

}  // namespace

ContinuousHMM::ContinuousHMM(std::vector<std::string> states, std::vector<Transition> transitions)
    : states_(std::move(states)), transitions_(std::move(transitions)) {
    for (const Transition& t : transitions_) {
        if (t.from >= states_.size() || t.to >= states_.size())
            throw std::invalid_argument("ContinuousHMM: transition endpoint out of range");
    }
    std::stable_sort(transitions_.begin(), transitions_.end(),
                     [](const Transition& a, const Transition& b) {
                         if (a.from != b.from) return a.from < b.from;
                         return a.to < b.to;
                     });
}

std::optional<std::size_t> ContinuousHMM::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name) return i;
    return std::nullopt;
}

FiniteHMM::FiniteHMM(std::vector<std::string> states, std::vector<std::string> alphabet,
                     std::vector<RMatrix> matrices)
    : states_(std::move(states)), alphabet_(std::move(alphabet)), matrices_(std::move(matrices)) {
    if (alphabet_.size() != matrices_.size())
        throw std::invalid_argument("FiniteHMM: one matrix per letter required");
    const Eigen::Index n = static_cast<Eigen::Index>(states_.size());
    for (const RMatrix& m : matrices_) {
        if (m.rows() != n || m.cols() != n)
            throw std::invalid_argument("FiniteHMM: matrix dimension mismatch");
    }
}

std::optional<std::size_t> FiniteHMM::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (states_[i] == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> FiniteHMM::letter_index(std::string_view letter) const {
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
        if (alphabet_[i] == letter) return i;
    return std::nullopt;
}

InitialDistribution InitialDistribution::dirac(std::size_t num_states, std::size_t state) {
    InitialDistribution pi;
    pi.weights = RRowVector::Constant(static_cast<Eigen::Index>(num_states), Rational(0));
    pi.weights(static_cast<Eigen::Index>(state)) = Rational(1);
    return pi;
}

InitialDistribution InitialDistribution::uniform(std::size_t num_states) {
    InitialDistribution pi;
    pi.weights = RRowVector::Constant(static_cast<Eigen::Index>(num_states),
                                      Rational(1, static_cast<long>(num_states)));
    return pi;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
        return d.severity == Diagnostic::Severity::Error;
    });
}

std::vector<Diagnostic> validate(const ContinuousHMM& h) {
    std::vector<Diagnostic> out;
    auto error = [&out](std::string msg) { out.push_back({Diagnostic::Severity::Error, std::move(msg)}); };
    auto warning = [&out](std::string msg) { out.push_back({Diagnostic::Severity::Warning, std::move(msg)}); };

    std::vector<Rational> row_sum(h.num_states(), Rational(0));
    std::map<ProfileExpr, bool> lint_clean;  // per distinct profile

    for (const Transition& t : h.transitions()) {
        std::ostringstream where;
        where << "transition " << h.states()[t.from] << " -> " << h.states()[t.to];
        if (t.prob.sign() <= 0)
            error(where.str() + ": probability must be positive, got " + t.prob.to_string());
        row_sum[t.from] += t.prob;

        Rational mass = total_mass(t.profile);
        if (mass != Rational(1))
            error(where.str() + ": profile has total mass " + mass.to_string() + ", expected 1");

        auto [it, inserted] = lint_clean.try_emplace(t.profile, true);
        if (inserted) it->second = nonnegativity_lint(t.profile).empty();
        if (!it->second)
            warning(where.str() + ": density appears negative somewhere (profile " +
                    t.profile.to_string() + ")");
    }
    for (std::size_t i = 0; i < h.num_states(); ++i) {
        if (row_sum[i] != Rational(1))
            error("state " + h.states()[i] + ": outgoing probabilities sum to " +
                  row_sum[i].to_string() + ", expected 1");
    }
    return out;
}

std::vector<Diagnostic> validate(const FiniteHMM& f) {
    std::vector<Diagnostic> out;
    const Eigen::Index n = static_cast<Eigen::Index>(f.num_states());
    RMatrix sum = RMatrix::Constant(n, n, Rational(0));
    for (std::size_t a = 0; a < f.alphabet().size(); ++a) {
        const RMatrix& m = f.matrix(a);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (m(i, j).sign() < 0)
                    out.push_back({Diagnostic::Severity::Error,
                                   "matrix for letter " + f.alphabet()[a] + " has negative entry at (" +
                                       f.states()[static_cast<std::size_t>(i)] + ", " +
                                       f.states()[static_cast<std::size_t>(j)] + ")"});
        sum += m;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        Rational s(0);
        for (Eigen::Index j = 0; j < n; ++j) s += sum(i, j);
        if (s != Rational(1))
            out.push_back({Diagnostic::Severity::Error,
                           "state " + f.states()[static_cast<std::size_t>(i)] +
                               ": summed letter matrices have row sum " + s.to_string() + ", expected 1"});
    }
    return out;
}

std::vector<Diagnostic> validate(const InitialDistribution& pi, std::size_t num_states) {
    std::vector<Diagnostic> out;
    if (pi.weights.size() != static_cast<Eigen::Index>(num_states)) {
        out.push_back({Diagnostic::Severity::Error, "distribution has wrong dimension"});
        return out;
    }
    Rational sum(0);
    for (Eigen::Index i = 0; i < pi.weights.size(); ++i) {
        if (pi.weights(i).sign() < 0)
            out.push_back({Diagnostic::Severity::Error, "distribution has a negative weight"});
        sum += pi.weights(i);
    }
    if (sum != Rational(1))
        out.push_back({Diagnostic::Severity::Error,
                       "distribution weights sum to " + sum.to_string() + ", expected 1"});
    return out;
}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(diagnostics.empty() || !has_errors(diagnostics)
                             ? std::string("model is invalid")
                             : std::find_if(diagnostics.begin(), diagnostics.end(),
                                            [](const Diagnostic& d) {
                                                return d.severity == Diagnostic::Severity::Error;
                                            })
                                   ->message),
      diagnostics_(std::move(diagnostics)) {}

void require_valid(const ContinuousHMM& h) {
    std::vector<Diagnostic> diagnostics = validate(h);
    if (has_errors(diagnostics)) throw ValidationError(std::move(diagnostics));
}

std::vector<ProfileExpr> distinct_profiles(const ContinuousHMM& h) {
    std::vector<ProfileExpr> out;
    std::map<ProfileExpr, std::size_t> seen;
    for (const Transition& t : h.transitions()) {
        if (seen.try_emplace(t.profile, out.size()).second) out.push_back(t.profile);
    }
    return out;
}

FiniteHMM labelling_reduction(const ContinuousHMM& h) {
    std::vector<ProfileExpr> profiles = distinct_profiles(h);
    std::map<ProfileExpr, std::size_t> index;
    for (std::size_t k = 0; k < profiles.size(); ++k) index.emplace(profiles[k], k);

    const Eigen::Index n = static_cast<Eigen::Index>(h.num_states());
    std::vector<RMatrix> matrices(profiles.size(), RMatrix::Constant(n, n, Rational(0)));
    std::vector<std::string> letters(profiles.size());
    for (std::size_t k = 0; k < profiles.size(); ++k) letters[k] = letter_name(k);

    for (const Transition& t : h.transitions()) {
        RMatrix& m = matrices[index.at(t.profile)];
        m(static_cast<Eigen::Index>(t.from), static_cast<Eigen::Index>(t.to)) += t.prob;
    }
    return FiniteHMM(h.states(), std::move(letters), std::move(matrices));
}

RMatrix FunctionalDecomposition::total() const {
    const Eigen::Index n = static_cast<Eigen::Index>(states.size());
    RMatrix p = RMatrix::Constant(n, n, Rational(0));
    for (const RMatrix& m : matrices) p += m;
    return p;
}

FunctionalDecomposition functional_decomposition(const ContinuousHMM& h) {
    const std::vector<ProfileExpr> profiles = distinct_profiles(h);
    std::map<ProfileExpr, std::size_t> index;
    for (std::size_t i = 0; i < profiles.size(); ++i) index.emplace(profiles[i], i);

    // Per-profile coefficient matrices P'_i with Psi = sum_i [[gamma_i]] P'_i.
    const Eigen::Index n = static_cast<Eigen::Index>(h.num_states());
    std::vector<RMatrix> per_profile(profiles.size(), RMatrix::Constant(n, n, Rational(0)));
    for (const Transition& t : h.transitions()) {
        per_profile[index.at(t.profile)](static_cast<Eigen::Index>(t.from),
                                         static_cast<Eigen::Index>(t.to)) += t.prob;
    }

    LinearDecomposition ld = linear_decompose(profiles);
    const std::size_t d = ld.basis_indices.size();

    FunctionalDecomposition fd;
    fd.states = h.states();
    fd.basis_profiles.reserve(d);
    for (std::size_t idx : ld.basis_indices) fd.basis_profiles.push_back(profiles[idx]);
    fd.matrices.assign(d, RMatrix::Constant(n, n, Rational(0)));
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const Rational& b = ld.coefficients(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
            if (!b.is_zero()) fd.matrices[k] += b * per_profile[i];
        }
    }
    return fd;
}

Rational theta(const FunctionalDecomposition& fd) {
    const RMatrix p = fd.total();
    std::optional<Rational> min_positive;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        for (Eigen::Index j = 0; j < p.cols(); ++j)
            if (p(i, j).sign() > 0 && (!min_positive || p(i, j) < *min_positive))
                min_positive = p(i, j);

    std::optional<Rational> max_entry;
    for (const RMatrix& m : fd.matrices)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (!max_entry || m(i, j) > *max_entry) max_entry = m(i, j);

    if (!min_positive || !max_entry || max_entry->sign() <= 0)
        throw std::logic_error("theta: decomposition of a valid HMM must have positive entries");
    Rational ratio = *min_positive / *max_entry;
    return std::min(Rational(1, 2), ratio);
}

FiniteHMM finite_reduction(const FunctionalDecomposition& fd) {
    const std::size_t d = fd.size();
    if (d == 0) throw std::invalid_argument("finite_reduction: empty decomposition");
    const RMatrix p = fd.total();
    const Rational th = theta(fd);
    const Rational scale = Rational(1) / (Rational(static_cast<long>(d)) - th);

    std::vector<std::string> letters(d);
    std::vector<RMatrix> matrices;
    matrices.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        letters[k] = letter_name(k);
        matrices.push_back(scale * (p - th * fd.matrices[k]));
    }
    return FiniteHMM(fd.states, std::move(letters), std::move(matrices));
}

std::optional<FiniteHMM> nonneg_reduction(const FunctionalDecomposition& fd) {
    if (fd.size() == 0) throw std::invalid_argument("nonneg_reduction: empty decomposition");
    for (const RMatrix& m : fd.matrices)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                if (m(i, j).sign() < 0) return std::nullopt;

    std::vector<std::string> letters(fd.size());
    for (std::size_t k = 0; k < fd.size(); ++k) letters[k] = letter_name(k);
    return FiniteHMM(fd.states, std::move(letters), fd.matrices);
}

}  // namespace hmmeq
