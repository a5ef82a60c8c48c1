#include <hmmeq/model_io.hpp>
#include <hmmeq/profile_parser.hpp>

#include <fstream>
#include <sstream>

namespace hmmeq {

namespace {

std::string position_prefix(int line, int column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
}

struct LineTokens {
    std::vector<std::string> tokens;
    std::vector<int> columns;  // 1-based start column per token
    std::size_t rest_offset = 0;  // byte offset just after a given token (set on demand)
};

LineTokens tokenize(const std::string& line) {
    LineTokens out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size() || line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.tokens.push_back(line.substr(start, i - start));
        out.columns.push_back(static_cast<int>(start) + 1);
    }
    return out;
}

}  // namespace

ModelParseError::ModelParseError(int line, int column, const std::string& message)
    : std::runtime_error(position_prefix(line, column) + message), line_(line), column_(column) {}

ModelDocument parse_model(std::istream& in) {
    std::vector<std::string> states;
    std::map<std::string, std::size_t> state_index;
    std::vector<Transition> transitions;
    std::map<std::string, InitialDistribution> distributions;
    bool have_states = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        LineTokens t = tokenize(line);
        if (t.tokens.empty()) continue;
        const std::string& kind = t.tokens[0];

        auto fail = [&](std::size_t token_idx, const std::string& msg) -> void {
            const int col = token_idx < t.columns.size() ? t.columns[token_idx]
                                                         : static_cast<int>(line.size()) + 1;
            throw ModelParseError(line_no, col, msg);
        };

        if (kind == "states") {
            if (have_states) fail(0, "duplicate states line");
            if (t.tokens.size() < 2) fail(0, "states line needs at least one state name");
            for (std::size_t i = 1; i < t.tokens.size(); ++i) {
                if (!state_index.emplace(t.tokens[i], states.size()).second)
                    fail(i, "duplicate state name '" + t.tokens[i] + "'");
                states.push_back(t.tokens[i]);
            }
            have_states = true;
        } else if (kind == "transition") {
            if (!have_states) fail(0, "transition before states line");
            if (t.tokens.size() < 5) fail(t.tokens.size() - 1, "transition needs: from to prob profile");
            auto from = state_index.find(t.tokens[1]);
            if (from == state_index.end()) fail(1, "unknown state '" + t.tokens[1] + "'");
            auto to = state_index.find(t.tokens[2]);
            if (to == state_index.end()) fail(2, "unknown state '" + t.tokens[2] + "'");
            auto prob = Rational::parse(t.tokens[3]);
            if (!prob) fail(3, "invalid rational '" + t.tokens[3] + "' (floats are not accepted)");

            // The profile expression is the remainder of the line.
            const std::size_t expr_begin = static_cast<std::size_t>(t.columns[4]) - 1;
            const std::string expr = line.substr(expr_begin);
            try {
                ProfileExpr profile = parse_profile(expr);
                transitions.push_back({from->second, to->second, *prob, std::move(profile)});
            } catch (const ProfileParseError& e) {
                throw ModelParseError(line_no, static_cast<int>(expr_begin + e.column()) + 1, e.what());
            }
        } else if (kind == "distribution") {
            if (!have_states) fail(0, "distribution before states line");
            if (t.tokens.size() < 3) fail(0, "distribution needs a name and at least one state=weight");
            const std::string& name = t.tokens[1];
            if (distributions.count(name)) fail(1, "duplicate distribution '" + name + "'");
            RRowVector weights = RRowVector::Constant(static_cast<Eigen::Index>(states.size()), Rational(0));
            for (std::size_t i = 2; i < t.tokens.size(); ++i) {
                const std::string& assign = t.tokens[i];
                const std::size_t eq = assign.find('=');
                if (eq == std::string::npos) fail(i, "expected state=weight, got '" + assign + "'");
                const std::string state = assign.substr(0, eq);
                auto it = state_index.find(state);
                if (it == state_index.end()) fail(i, "unknown state '" + state + "'");
                auto w = Rational::parse(assign.substr(eq + 1));
                if (!w) fail(i, "invalid rational weight in '" + assign + "'");
                weights(static_cast<Eigen::Index>(it->second)) += *w;
            }
            InitialDistribution pi{std::move(weights)};
            if (std::vector<Diagnostic> d = validate(pi, states.size()); has_errors(d))
                fail(1, "distribution '" + name + "': " + d.front().message);
            distributions.emplace(name, std::move(pi));
        } else {
            fail(0, "unknown directive '" + kind + "' (expected states, transition or distribution)");
        }
    }
    if (!have_states) throw ModelParseError(line_no ? line_no : 1, 1, "model has no states line");

    return ModelDocument{ContinuousHMM(std::move(states), std::move(transitions)),
                         std::move(distributions)};
}

ModelDocument parse_model_text(const std::string& text) {
    std::istringstream in(text);
    return parse_model(in);
}

ModelDocument parse_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return parse_model(in);
}

std::string format_finite_model(const FiniteHMM& f, const std::vector<ProfileExpr>& letter_profiles,
                                const std::map<std::string, InitialDistribution>& distributions) {
    std::ostringstream os;
    os << "# finite-observation model (" << f.alphabet().size() << " letters)\n";
    for (std::size_t k = 0; k < f.alphabet().size() && k < letter_profiles.size(); ++k)
        os << "# " << f.alphabet()[k] << " ~ " << letter_profiles[k] << "\n";
    os << "states";
    for (const std::string& s : f.states()) os << " " << s;
    os << "\n";
    const Eigen::Index n = static_cast<Eigen::Index>(f.num_states());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (std::size_t k = 0; k < f.alphabet().size(); ++k) {
                const Rational& p = f.matrix(k)(i, j);
                if (p.is_zero()) continue;
                os << "transition " << f.states()[static_cast<std::size_t>(i)] << " "
                   << f.states()[static_cast<std::size_t>(j)] << " " << p << " Dirac("
                   << f.alphabet()[k] << ")\n";
            }
    for (const auto& [name, pi] : distributions) {
        os << "distribution " << name;
        for (Eigen::Index i = 0; i < pi.weights.size(); ++i)
            if (!pi.weights(i).is_zero())
                os << " " << f.states()[static_cast<std::size_t>(i)] << "=" << pi.weights(i);
        os << "\n";
    }
    return os.str();
}

InitialDistribution resolve_distribution(const ModelDocument& doc, const std::string& spec) {
    if (auto it = doc.distributions.find(spec); it != doc.distributions.end()) return it->second;

    const std::size_t n = doc.hmm.num_states();
    if (spec.rfind("Dirac(", 0) == 0 && spec.back() == ')') {
        const std::string state = spec.substr(6, spec.size() - 7);
        if (auto idx = doc.hmm.state_index(state)) return InitialDistribution::dirac(n, *idx);
        throw std::invalid_argument("unknown state in distribution '" + spec + "'");
    }
    if (spec.find('=') != std::string::npos) {
        RRowVector weights = RRowVector::Constant(static_cast<Eigen::Index>(n), Rational(0));
        std::size_t start = 0;
        while (start <= spec.size()) {
            const std::size_t end = std::min(spec.find(',', start), spec.size());
            const std::string assign = spec.substr(start, end - start);
            const std::size_t eq = assign.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("expected state=weight in distribution '" + spec + "'");
            auto idx = doc.hmm.state_index(assign.substr(0, eq));
            if (!idx) throw std::invalid_argument("unknown state in distribution '" + spec + "'");
            auto w = Rational::parse(assign.substr(eq + 1));
            if (!w) throw std::invalid_argument("invalid rational weight in '" + assign + "'");
            weights(static_cast<Eigen::Index>(*idx)) += *w;
            start = end + 1;
        }
        InitialDistribution pi{std::move(weights)};
        if (std::vector<Diagnostic> d = validate(pi, n); has_errors(d))
            throw std::invalid_argument("distribution '" + spec + "': " + d.front().message);
        return pi;
    }
    throw std::invalid_argument("unknown distribution '" + spec +
                                "' (expected a declared name, Dirac(state), or state=weight,...)");
}

}  // namespace hmmeq
