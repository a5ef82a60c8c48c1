#include <hmmeq/simulate.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace hmmeq {

namespace {

double ipow(double x, unsigned n) {
    double r = 1.0;
    while (n) {
        if (n & 1u) r *= x;
        x *= x;
        n >>= 1u;
    }
    return r;
}

double signed_root(double v, unsigned n) {
    if (n % 2 == 1 && v < 0.0) return -std::pow(-v, 1.0 / n);
    return std::pow(v, 1.0 / n);
}

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// CDF contribution of a single continuous atom at x (mass below x).
double atom_cdf(const Atom& a, double x) {
    if (const auto* g = std::get_if<GaussianAtom>(&a)) {
        return gaussian_cdf((x - g->mean.to_double()) / g->stddev.to_double());
    }
    if (const auto* e = std::get_if<ExponentialAtom>(&a)) {
        const double rate = e->rate.to_double();
        return x <= 0.0 ? 0.0 : 1.0 - std::exp(-rate * x);
    }
    const auto& m = std::get<MonomialAtom>(a);
    const double lo = m.lo.to_double(), hi = m.hi.to_double();
    const unsigned k1 = m.degree + 1;
    if (x <= lo) return 0.0;
    const double upper = std::min(x, hi);
    return (ipow(upper, k1) - ipow(lo, k1)) / k1;
}

struct PreparedProfile {
    std::vector<std::pair<std::string, double>> discrete_cumulative;
    double discrete_mass = 0.0;

    std::vector<Term> continuous;  // may contain negative coefficients
    double continuous_mass = 0.0;
    double window_lo = 0.0, window_hi = 0.0;
    bool single_positive_atom = false;

    double total_mass_d = 1.0;

    double continuous_cdf(double x) const {
        double f = 0.0;
        for (const Term& t : continuous) f += t.coeff.to_double() * atom_cdf(t.atom, x);
        return f;
    }
};

PreparedProfile prepare_profile(const ProfileExpr& p) {
    PreparedProfile out;
    out.total_mass_d = total_mass(p).to_double();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Term& t : p.terms()) {
        if (const auto* d = std::get_if<DiscreteAtom>(&t.atom)) {
            out.discrete_mass += t.coeff.to_double();
            out.discrete_cumulative.emplace_back(d->symbol, out.discrete_mass);
            continue;
        }
        out.continuous.push_back(t);
        if (const auto* g = std::get_if<GaussianAtom>(&t.atom)) {
            const double mu = g->mean.to_double(), sigma = g->stddev.to_double();
            lo = std::min(lo, mu - 14 * sigma);
            hi = std::max(hi, mu + 14 * sigma);
        } else if (const auto* e = std::get_if<ExponentialAtom>(&t.atom)) {
            lo = std::min(lo, 0.0);
            hi = std::max(hi, 60.0 / e->rate.to_double());
        } else {
            const auto& m = std::get<MonomialAtom>(t.atom);
            lo = std::min(lo, m.lo.to_double());
            hi = std::max(hi, m.hi.to_double());
        }
    }
    if (!out.continuous.empty()) {
        out.window_lo = lo;
        out.window_hi = hi;
        out.continuous_mass = out.total_mass_d - out.discrete_mass;
        out.single_positive_atom = out.continuous.size() == 1 && out.continuous[0].coeff.sign() > 0;
    }
    return out;
}

double sample_single_atom(const Atom& a, Rng& rng) {
    if (const auto* g = std::get_if<GaussianAtom>(&a))
        return g->mean.to_double() + g->stddev.to_double() * rng.normal();
    if (const auto* e = std::get_if<ExponentialAtom>(&a)) return rng.exponential(e->rate.to_double());
    const auto& m = std::get<MonomialAtom>(a);
    const unsigned k1 = m.degree + 1;
    const double a1 = ipow(m.lo.to_double(), k1), b1 = ipow(m.hi.to_double(), k1);
    return signed_root(a1 + rng.uniform() * (b1 - a1), k1);
}

Observation sample_prepared(const PreparedProfile& pp, Rng& rng) {
    const double u = rng.uniform() * pp.total_mass_d;
    if (pp.continuous.empty()) {
        for (const auto& [symbol, cum] : pp.discrete_cumulative)
            if (u < cum) return symbol;
        return pp.discrete_cumulative.back().first;
    }
    if (u < pp.discrete_mass) {
        for (const auto& [symbol, cum] : pp.discrete_cumulative)
            if (u < cum) return symbol;
    }
    if (pp.single_positive_atom) return sample_single_atom(pp.continuous[0].atom, rng);

    // General mixture: invert the piecewise CDF by bisection.
    const double target = u - pp.discrete_mass;
    double lo = pp.window_lo, hi = pp.window_hi;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pp.continuous_cdf(mid) < target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

void require_sampleable(const ProfileExpr& p) {
    if (!nonnegativity_lint(p, 2000).empty())
        throw std::domain_error("cannot sample profile " + p.to_string() +
                                ": density has a negative region");
}

double box_integral(const ProfileExpr& p, const ObservationBox& box) {
    if (const auto* symbol = std::get_if<std::string>(&box)) {
        double mass = 0.0;
        for (const Term& t : p.terms())
            if (const auto* d = std::get_if<DiscreteAtom>(&t.atom); d && d->symbol == *symbol)
                mass += t.coeff.to_double();
        return mass;
    }
    const auto& iv = std::get<RationalInterval>(box);
    const double lo = iv.lo.to_double(), hi = iv.hi.to_double();
    double mass = 0.0;
    for (const Term& t : p.terms()) {
        if (std::holds_alternative<DiscreteAtom>(t.atom)) continue;
        if (const auto* m = std::get_if<MonomialAtom>(&t.atom)) {
            // Exact rational overlap integral.
            const Rational s = std::max(iv.lo, m->lo), e = std::min(iv.hi, m->hi);
            if (s < e) {
                const unsigned k1 = m->degree + 1;
                mpz_class sn, sd, en, ed;
                mpz_pow_ui(sn.get_mpz_t(), s.numerator().get_mpz_t(), k1);
                mpz_pow_ui(sd.get_mpz_t(), s.denominator().get_mpz_t(), k1);
                mpz_pow_ui(en.get_mpz_t(), e.numerator().get_mpz_t(), k1);
                mpz_pow_ui(ed.get_mpz_t(), e.denominator().get_mpz_t(), k1);
                Rational piece =
                    (Rational(mpq_class(en, ed)) - Rational(mpq_class(sn, sd))) / Rational(static_cast<long>(k1));
                mass += (t.coeff * piece).to_double();
            }
        } else {
            mass += t.coeff.to_double() * (atom_cdf(t.atom, hi) - atom_cdf(t.atom, lo));
        }
    }
    return mass;
}

}  // namespace

Observation sample_observation(const ProfileExpr& profile, Rng& rng) {
    require_sampleable(profile);
    PreparedProfile pp = prepare_profile(profile);
    if (pp.discrete_cumulative.empty() && pp.continuous.empty())
        throw std::domain_error("cannot sample the zero profile");
    return sample_prepared(pp, rng);
}

struct TraceSampler::Impl {
    const ContinuousHMM* hmm = nullptr;
    std::vector<PreparedProfile> prepared;             // per transition (indices into transitions())
    std::vector<std::vector<std::pair<double, std::size_t>>> row;  // per state: (cumulative prob, transition index)
};

TraceSampler::TraceSampler(const ContinuousHMM& h) : impl_(std::make_unique<Impl>()) {
    require_valid(h);
    impl_->hmm = &h;

    std::map<ProfileExpr, bool> checked;
    for (const Transition& t : h.transitions()) {
        if (checked.try_emplace(t.profile, true).second) require_sampleable(t.profile);
        impl_->prepared.push_back(prepare_profile(t.profile));
    }
    impl_->row.resize(h.num_states());
    std::vector<double> acc(h.num_states(), 0.0);
    for (std::size_t i = 0; i < h.transitions().size(); ++i) {
        const Transition& t = h.transitions()[i];
        acc[t.from] += t.prob.to_double();
        impl_->row[t.from].emplace_back(acc[t.from], i);
    }
}

TraceSampler::~TraceSampler() = default;
TraceSampler::TraceSampler(TraceSampler&&) noexcept = default;
TraceSampler& TraceSampler::operator=(TraceSampler&&) noexcept = default;

Trace TraceSampler::sample(const InitialDistribution& pi, int length, Rng& rng) const {
    const ContinuousHMM& h = *impl_->hmm;
    if (pi.weights.size() != static_cast<Eigen::Index>(h.num_states()))
        throw std::invalid_argument("sample: distribution dimension mismatch");

    // Initial state.
    std::size_t state = h.num_states() - 1;
    {
        const double u = rng.uniform();
        double acc = 0.0;
        for (Eigen::Index i = 0; i < pi.weights.size(); ++i) {
            acc += pi.weights(i).to_double();
            if (u < acc) { state = static_cast<std::size_t>(i); break; }
        }
    }

    Trace trace;
    trace.observations.reserve(static_cast<std::size_t>(std::max(length, 0)));
    for (int step = 0; step < length; ++step) {
        const auto& choices = impl_->row[state];
        const double u = rng.uniform();
        std::size_t pick = choices.back().second;
        for (const auto& [cum, idx] : choices) {
            if (u < cum) { pick = idx; break; }
        }
        trace.observations.push_back(sample_prepared(impl_->prepared[pick], rng));
        state = h.transitions()[pick].to;
    }
    return trace;
}

Trace sample_trace(const ContinuousHMM& h, const InitialDistribution& pi, int length,
                   std::uint64_t rng_seed) {
    TraceSampler sampler(h);
    Rng rng(rng_seed);
    return sampler.sample(pi, length, rng);
}

std::vector<Trace> sample_traces(const ContinuousHMM& h, const InitialDistribution& pi, int length,
                                 int count, std::uint64_t rng_seed) {
    TraceSampler sampler(h);
    std::vector<Trace> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        Rng rng(Rng::derive(rng_seed, static_cast<std::uint64_t>(i)));
        out.push_back(sampler.sample(pi, length, rng));
    }
    return out;
}

TwoSampleResult two_sample_check(const ContinuousHMM& h, const InitialDistribution& pi1,
                                 const InitialDistribution& pi2, int prefix_length, int samples,
                                 int bins, double alpha, std::uint64_t rng_seed) {
    if (prefix_length <= 0 || samples <= 0 || bins <= 0 || alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("two_sample_check: bad parameters");

    TraceSampler sampler(h);
    std::array<std::vector<Trace>, 2> groups;
    for (int g = 0; g < 2; ++g) {
        const InitialDistribution& pi = g == 0 ? pi1 : pi2;
        groups[g].reserve(static_cast<std::size_t>(samples));
        for (int s = 0; s < samples; ++s) {
            Rng rng(Rng::derive(rng_seed, static_cast<std::uint64_t>(g) * samples + s));
            groups[g].push_back(sampler.sample(pi, prefix_length, rng));
        }
    }

    // Product binning: per coordinate, equiprobable buckets from the pooled
    // continuous values; each discrete symbol is its own bucket.
    const int n = prefix_length;
    std::vector<std::vector<double>> edges(static_cast<std::size_t>(n));
    std::vector<std::map<std::string, int>> symbol_ids(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) {
        std::vector<double> pooled;
        for (const auto& group : groups)
            for (const Trace& t : group)
                if (const double* x = std::get_if<double>(&t.observations[static_cast<std::size_t>(pos)]))
                    pooled.push_back(*x);
                else
                    symbol_ids[static_cast<std::size_t>(pos)].try_emplace(
                        std::get<std::string>(t.observations[static_cast<std::size_t>(pos)]), 0);
        int next_id = bins;
        for (auto& [sym, id] : symbol_ids[static_cast<std::size_t>(pos)]) id = next_id++;
        std::sort(pooled.begin(), pooled.end());
        for (int b = 1; b < bins && !pooled.empty(); ++b)
            edges[static_cast<std::size_t>(pos)].push_back(
                pooled[pooled.size() * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins)]);
    }

    auto cell_of = [&](const Trace& t) {
        std::vector<int> key(static_cast<std::size_t>(n));
        for (int pos = 0; pos < n; ++pos) {
            const Observation& obs = t.observations[static_cast<std::size_t>(pos)];
            if (const double* x = std::get_if<double>(&obs)) {
                const auto& e = edges[static_cast<std::size_t>(pos)];
                key[static_cast<std::size_t>(pos)] =
                    static_cast<int>(std::upper_bound(e.begin(), e.end(), *x) - e.begin());
            } else {
                key[static_cast<std::size_t>(pos)] =
                    symbol_ids[static_cast<std::size_t>(pos)].at(std::get<std::string>(obs));
            }
        }
        return key;
    };

    std::map<std::vector<int>, std::array<long, 2>> counts;
    for (int g = 0; g < 2; ++g)
        for (const Trace& t : groups[static_cast<std::size_t>(g)])
            counts[cell_of(t)][static_cast<std::size_t>(g)] += 1;

    // Merge sparsely populated cells so the chi-square approximation holds.
    std::array<long, 2> overflow{0, 0};
    std::vector<std::array<long, 2>> cells;
    for (const auto& [key, c] : counts) {
        if (c[0] + c[1] < 10) {
            overflow[0] += c[0];
            overflow[1] += c[1];
        } else {
            cells.push_back(c);
        }
    }
    if (overflow[0] + overflow[1] > 0) cells.push_back(overflow);

    TwoSampleResult result;
    result.cells = static_cast<int>(cells.size());
    result.dof = std::max(result.cells - 1, 0);
    if (result.dof == 0) return result;  // one cell: nothing to compare

    const double n1 = static_cast<double>(samples), n2 = static_cast<double>(samples);
    double stat = 0.0;
    for (const auto& c : cells) {
        const double pooled = static_cast<double>(c[0] + c[1]) / (n1 + n2);
        const double e1 = n1 * pooled, e2 = n2 * pooled;
        stat += (c[0] - e1) * (c[0] - e1) / e1 + (c[1] - e2) * (c[1] - e2) / e2;
    }
    result.statistic = stat;
    boost::math::chi_squared_distribution<double> dist(result.dof);
    result.critical_value = boost::math::quantile(dist, 1.0 - alpha);
    result.pass = stat <= result.critical_value;
    return result;
}

double cylinder_probability(const ContinuousHMM& h, const InitialDistribution& pi,
                            const std::vector<ObservationBox>& boxes) {
    const std::size_t n = h.num_states();
    if (pi.weights.size() != static_cast<Eigen::Index>(n))
        throw std::invalid_argument("cylinder_probability: distribution dimension mismatch");

    Eigen::RowVectorXd row(n);
    for (std::size_t i = 0; i < n; ++i) row(static_cast<Eigen::Index>(i)) = pi.weights(static_cast<Eigen::Index>(i)).to_double();

    for (const ObservationBox& box : boxes) {
        Eigen::MatrixXd step = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (const Transition& t : h.transitions())
            step(static_cast<Eigen::Index>(t.from), static_cast<Eigen::Index>(t.to)) +=
                t.prob.to_double() * box_integral(t.profile, box);
        row = row * step;
    }
    return row.sum();
}

}  // namespace hmmeq
