#include <hmmeq/profile.hpp>
#include <hmmeq/rng.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace hmmeq {

namespace {

Rational rational_pow(const Rational& base, unsigned exp) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), exp);
    mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), exp);
    return Rational(mpq_class(num, den));
}

int atom_family(const Atom& a) { return static_cast<int>(a.index()); }

}  // namespace

bool atom_less(const Atom& a, const Atom& b) {
    if (atom_family(a) != atom_family(b)) return atom_family(a) < atom_family(b);
    if (const auto* ga = std::get_if<GaussianAtom>(&a)) {
        const auto& gb = std::get<GaussianAtom>(b);
        if (ga->stddev != gb.stddev) return ga->stddev < gb.stddev;
        return ga->mean < gb.mean;
    }
    if (const auto* ea = std::get_if<ExponentialAtom>(&a)) {
        return ea->rate > std::get<ExponentialAtom>(b).rate;  // decreasing rate
    }
    if (const auto* ma = std::get_if<MonomialAtom>(&a)) {
        const auto& mb = std::get<MonomialAtom>(b);
        if (ma->lo != mb.lo) return ma->lo < mb.lo;
        if (ma->hi != mb.hi) return ma->hi < mb.hi;
        return ma->degree < mb.degree;
    }
    return std::get<DiscreteAtom>(a).symbol < std::get<DiscreteAtom>(b).symbol;
}

std::string atom_to_string(const Atom& a) {
    std::ostringstream os;
    if (const auto* g = std::get_if<GaussianAtom>(&a)) {
        os << "N(" << g->mean << "," << g->stddev << ")";
    } else if (const auto* e = std::get_if<ExponentialAtom>(&a)) {
        os << "Exp(" << e->rate << ")";
    } else if (const auto* m = std::get_if<MonomialAtom>(&a)) {
        os << "Mono(" << m->degree << "," << m->lo << "," << m->hi << ")";
    } else {
        os << "Dirac(" << std::get<DiscreteAtom>(a).symbol << ")";
    }
    return os.str();
}

ProfileExpr ProfileExpr::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return atom_less(x.atom, y.atom); });
    ProfileExpr p;
    for (Term& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().atom == t.atom) {
            p.terms_.back().coeff += t.coeff;
            if (p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
        } else if (!t.coeff.is_zero()) {
            p.terms_.push_back(std::move(t));
        }
    }
    return p;
}

ProfileExpr operator+(const ProfileExpr& a, const ProfileExpr& b) {
    std::vector<Term> terms = a.terms_;
    terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
    return ProfileExpr::from_terms(std::move(terms));
}

ProfileExpr operator-(const ProfileExpr& a, const ProfileExpr& b) {
    return a + Rational(-1) * b;
}

ProfileExpr operator*(const Rational& c, const ProfileExpr& p) {
    if (c.is_zero()) return ProfileExpr();
    ProfileExpr out = p;
    for (Term& t : out.terms_) t.coeff *= c;
    return out;
}

bool operator<(const ProfileExpr& a, const ProfileExpr& b) {
    const auto &ta = a.terms_, &tb = b.terms_;
    for (std::size_t i = 0; i < ta.size() && i < tb.size(); ++i) {
        if (atom_less(ta[i].atom, tb[i].atom)) return true;
        if (atom_less(tb[i].atom, ta[i].atom)) return false;
        if (ta[i].coeff != tb[i].coeff) return ta[i].coeff < tb[i].coeff;
    }
    return ta.size() < tb.size();
}

std::string ProfileExpr::to_string() const {
    if (terms_.empty()) return "0*Mono(0,0,1)";
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
        Rational c = t.coeff;
        if (first) {
            first = false;
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
            c = abs(c);
        }
        if (c != Rational(1)) os << c << "*";
        os << atom_to_string(t.atom);
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ProfileExpr& p) { return os << p.to_string(); }

Rational total_mass(const ProfileExpr& p) {
    Rational mass(0);
    for (const Term& t : p.terms()) {
        if (const auto* m = std::get_if<MonomialAtom>(&t.atom)) {
            const unsigned k1 = m->degree + 1;
            Rational piece = (rational_pow(m->hi, k1) - rational_pow(m->lo, k1)) / Rational(static_cast<long>(k1));
            mass += t.coeff * piece;
        } else {
            mass += t.coeff;  // Gaussian, exponential and discrete atoms integrate to 1
        }
    }
    return mass;
}

double evaluate_numeric(const ProfileExpr& p, double x) {
    double v = 0.0;
    for (const Term& t : p.terms()) {
        const double c = t.coeff.to_double();
        if (const auto* g = std::get_if<GaussianAtom>(&t.atom)) {
            const double mu = g->mean.to_double(), sigma = g->stddev.to_double();
            const double z = (x - mu) / sigma;
            v += c * std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
        } else if (const auto* e = std::get_if<ExponentialAtom>(&t.atom)) {
            const double rate = e->rate.to_double();
            if (x >= 0.0) v += c * rate * std::exp(-rate * x);
        } else if (const auto* m = std::get_if<MonomialAtom>(&t.atom)) {
            if (x >= m->lo.to_double() && x < m->hi.to_double()) v += c * std::pow(x, m->degree);
        }
    }
    return v;
}

double evaluate_at(const ProfileExpr& p, const Observation& x) {
    if (const double* r = std::get_if<double>(&x)) return evaluate_numeric(p, *r);
    const std::string& sym = std::get<std::string>(x);
    double v = 0.0;
    for (const Term& t : p.terms()) {
        if (const auto* d = std::get_if<DiscreteAtom>(&t.atom); d && d->symbol == sym)
            v += t.coeff.to_double();
    }
    return v;
}

Eigen::Index AtomBasis::index_of(const Atom& a) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == a) return static_cast<Eigen::Index>(i);
    return -1;
}

RefinedProfiles refine_atoms(const std::vector<ProfileExpr>& profiles) {
    struct AtomCmp {
        bool operator()(const Atom& a, const Atom& b) const { return atom_less(a, b); }
    };

    std::set<Atom, AtomCmp> plain;  // Gaussian, exponential, discrete atoms: kept as-is
    std::set<Rational> endpoints;
    std::set<unsigned> degrees;
    std::vector<std::pair<Rational, Rational>> source_intervals;

    for (const ProfileExpr& p : profiles) {
        for (const Term& t : p.terms()) {
            if (const auto* m = std::get_if<MonomialAtom>(&t.atom)) {
                endpoints.insert(m->lo);
                endpoints.insert(m->hi);
                degrees.insert(m->degree);
                source_intervals.emplace_back(m->lo, m->hi);
            } else {
                plain.insert(t.atom);
            }
        }
    }

    // Common refinement: consecutive endpoint pairs that lie inside at least
    // one source interval.
    std::vector<std::pair<Rational, Rational>> refined;
    if (!endpoints.empty()) {
        std::vector<Rational> pts(endpoints.begin(), endpoints.end());
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const Rational &s = pts[i], &t = pts[i + 1];
            bool covered = false;
            for (const auto& [a, b] : source_intervals) {
                if (a <= s && t <= b) { covered = true; break; }
            }
            if (covered) refined.emplace_back(s, t);
        }
    }

    RefinedProfiles out;
    for (const Atom& a : plain) {
        if (!std::holds_alternative<DiscreteAtom>(a)) out.basis.atoms.push_back(a);
    }
    std::stable_sort(out.basis.atoms.begin(), out.basis.atoms.end(), atom_less);
    for (const auto& [s, t] : refined) {
        for (unsigned k : degrees) out.basis.atoms.push_back(MonomialAtom{k, s, t});
    }
    for (const Atom& a : plain) {
        if (std::holds_alternative<DiscreteAtom>(a)) out.basis.atoms.push_back(a);
    }

    std::map<Atom, Eigen::Index, AtomCmp> position;
    for (std::size_t i = 0; i < out.basis.atoms.size(); ++i)
        position.emplace(out.basis.atoms[i], static_cast<Eigen::Index>(i));

    const Eigen::Index dim = out.basis.size();
    out.coordinates.reserve(profiles.size());
    for (const ProfileExpr& p : profiles) {
        RVector coord = RVector::Constant(dim, Rational(0));
        for (const Term& t : p.terms()) {
            if (const auto* m = std::get_if<MonomialAtom>(&t.atom)) {
                for (const auto& [s, e] : refined) {
                    if (m->lo <= s && e <= m->hi)
                        coord(position.at(MonomialAtom{m->degree, s, e})) += t.coeff;
                }
            } else {
                coord(position.at(t.atom)) += t.coeff;
            }
        }
        out.coordinates.push_back(std::move(coord));
    }
    return out;
}

LinearDecomposition linear_decompose(const std::vector<ProfileExpr>& profiles) {
    LinearDecomposition out;
    out.refined = refine_atoms(profiles);

    const Eigen::Index dim = out.refined.basis.size();
    SpanTracker tracker(dim);
    std::vector<RVector> selected;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (tracker.insert(out.refined.coordinates[i])) {
            out.basis_indices.push_back(i);
            selected.push_back(out.refined.coordinates[i]);
        }
    }

    const Eigen::Index m = static_cast<Eigen::Index>(selected.size());
    out.coefficients = RMatrix::Constant(static_cast<Eigen::Index>(profiles.size()), m, Rational(0));
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        auto coeffs = coordinates_in_span(out.refined.coordinates[i], selected);
        // The selected profiles span all inputs by construction.
        for (Eigen::Index j = 0; j < m; ++j)
            out.coefficients(static_cast<Eigen::Index>(i), j) = (*coeffs)[static_cast<std::size_t>(j)];
    }
    return out;
}

Eigen::MatrixXd alternant_matrix(const std::vector<ProfileExpr>& profiles,
                                 const std::vector<Observation>& points) {
    const Eigen::Index n = static_cast<Eigen::Index>(profiles.size());
    if (static_cast<Eigen::Index>(points.size()) != n)
        throw std::invalid_argument("alternant_matrix: need as many points as profiles");
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = evaluate_at(profiles[static_cast<std::size_t>(j)], points[static_cast<std::size_t>(i)]);
    return m;
}

namespace {

Observation sample_support_point(const ProfileExpr& p, Rng& rng) {
    if (p.terms().empty()) return 0.0;
    const std::size_t pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(p.terms().size()));
    const Atom& a = p.terms()[std::min(pick, p.terms().size() - 1)].atom;
    if (const auto* g = std::get_if<GaussianAtom>(&a))
        return g->mean.to_double() + g->stddev.to_double() * rng.normal();
    if (const auto* e = std::get_if<ExponentialAtom>(&a))
        return rng.exponential(e->rate.to_double());
    if (const auto* m = std::get_if<MonomialAtom>(&a))
        return rng.uniform(m->lo.to_double(), m->hi.to_double());
    return std::get<DiscreteAtom>(a).symbol;
}

}  // namespace

Independence alternant_probe(const std::vector<ProfileExpr>& profiles, int trials,
                             std::uint64_t rng_seed) {
    if (profiles.empty()) return Independence::Independent;
    Rng rng(rng_seed);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Observation> points;
        points.reserve(profiles.size());
        for (const ProfileExpr& p : profiles) points.push_back(sample_support_point(p, rng));

        Eigen::MatrixXd m = alternant_matrix(profiles, points);
        if (!m.allFinite()) continue;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
        const Eigen::Index n = m.rows();
        const double pmax = std::abs(lu.matrixLU()(0, 0));
        const double pmin = std::abs(lu.matrixLU()(n - 1, n - 1));
        if (pmax > 0.0 && pmin / pmax > 1e-10) return Independence::Independent;
    }
    return Independence::Undetermined;
}

std::vector<LintViolation> nonnegativity_lint(const ProfileExpr& p, int grid_per_segment) {
    constexpr double kEps = 1e-9;
    std::vector<LintViolation> violations;

    bool has_continuous = false;
    std::set<double> breakpoints;
    for (const Term& t : p.terms()) {
        if (const auto* g = std::get_if<GaussianAtom>(&t.atom)) {
            const double mu = g->mean.to_double(), sigma = g->stddev.to_double();
            breakpoints.insert({mu - 10 * sigma, mu - sigma, mu, mu + sigma, mu + 10 * sigma});
            has_continuous = true;
        } else if (const auto* e = std::get_if<ExponentialAtom>(&t.atom)) {
            const double rate = e->rate.to_double();
            breakpoints.insert({0.0, 1.0 / rate, 30.0 / rate});
            has_continuous = true;
        } else if (const auto* m = std::get_if<MonomialAtom>(&t.atom)) {
            breakpoints.insert(m->lo.to_double());
            breakpoints.insert(m->hi.to_double());
            has_continuous = true;
        } else if (t.coeff.sign() < 0) {
            // Negative point mass is exactly detectable.
            violations.push_back({std::get<DiscreteAtom>(t.atom).symbol, t.coeff.to_double()});
        }
    }
    if (!has_continuous || grid_per_segment <= 0) return violations;

    std::vector<double> pts(breakpoints.begin(), breakpoints.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        for (int j = 0; j < grid_per_segment; ++j) {
            const double x = lo + (hi - lo) * (j + 0.5) / grid_per_segment;
            const double v = evaluate_numeric(p, x);
            if (v < -kEps) violations.push_back({x, v});
        }
    }
    return violations;
}

}  // namespace hmmeq
