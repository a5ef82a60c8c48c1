// hmmeq: decide trace equivalence of initial distributions of HMMs with
// continuous observations, exactly and in polynomial time.
//
// Exit codes: 0 equivalent (or success for non-check commands),
//             1 not equivalent, 2 invalid input, 3 internal error.

#include <hmmeq/equivalence.hpp>
#include <hmmeq/model_io.hpp>
#include <hmmeq/simulate.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>

namespace {

using nlohmann::json;

constexpr int kExitEquivalent = 0;
constexpr int kExitNotEquivalent = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitInternal = 3;

void print_diagnostics(const std::vector<hmmeq::Diagnostic>& diagnostics) {
    for (const hmmeq::Diagnostic& d : diagnostics) {
        const char* tag = d.severity == hmmeq::Diagnostic::Severity::Error ? "error" : "warning";
        std::cerr << tag << ": " << d.message << "\n";
    }
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const hmmeq::ModelParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const hmmeq::ValidationError& e) {
        print_diagnostics(e.diagnostics());
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("HMMEQ_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring non-numeric HMMEQ_SEED\n";
        }
    }
    return 1;
}

struct ReductionChoice {
    hmmeq::FiniteHMM hmm;
    std::vector<hmmeq::ProfileExpr> letter_profiles;
    hmmeq::Method method;
};

ReductionChoice reduce_model(const hmmeq::ContinuousHMM& h, const std::string& method) {
    using hmmeq::Method;
    if (method == "labelling")
        return {hmmeq::labelling_reduction(h), hmmeq::distinct_profiles(h), Method::Labelling};

    hmmeq::FunctionalDecomposition fd = hmmeq::functional_decomposition(h);
    if (method == "nonneg" || method == "auto") {
        if (auto direct = hmmeq::nonneg_reduction(fd))
            return {std::move(*direct), fd.basis_profiles, Method::Nonneg};
        if (method == "nonneg")
            throw std::invalid_argument(
                "nonneg reduction not applicable: a decomposition matrix has a negative entry "
                "(use --method=theta or --method=auto)");
    }
    return {hmmeq::finite_reduction(fd), fd.basis_profiles, Method::Theta};
}

int cmd_validate(const std::string& file) {
    hmmeq::ModelDocument doc = hmmeq::parse_model_file(file);
    std::vector<hmmeq::Diagnostic> diagnostics = hmmeq::validate(doc.hmm);
    print_diagnostics(diagnostics);
    if (hmmeq::has_errors(diagnostics)) return kExitInvalidInput;
    std::cout << "ok: " << doc.hmm.num_states() << " states, " << doc.hmm.transitions().size()
              << " transitions, " << hmmeq::distinct_profiles(doc.hmm).size()
              << " distinct profiles\n";
    return kExitEquivalent;
}

int cmd_check(const std::string& file, const std::string& dist1, const std::string& dist2,
              bool no_fast_path, bool as_json) {
    hmmeq::ModelDocument doc = hmmeq::parse_model_file(file);
    hmmeq::InitialDistribution pi1 = hmmeq::resolve_distribution(doc, dist1);
    hmmeq::InitialDistribution pi2 = hmmeq::resolve_distribution(doc, dist2);

    hmmeq::CheckOptions options;
    options.fast_path = !no_fast_path;
    hmmeq::EquivalenceVerdict verdict = hmmeq::check_continuous(doc.hmm, pi1, pi2, options);
    const std::string method(verdict.method ? hmmeq::method_name(*verdict.method) : "finite");

    if (as_json) {
        json out;
        out["equivalent"] = verdict.equivalent;
        out["method"] = method;
        out["basis_dimension"] = static_cast<long>(verdict.basis_dimension);
        if (verdict.witness) {
            out["witness"] = verdict.witness->word;
            out["value"] = verdict.witness->value.to_string();
        } else {
            out["witness"] = nullptr;
            out["value"] = nullptr;
        }
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "verdict: " << (verdict.equivalent ? "equivalent" : "not equivalent") << "\n";
        std::cout << "method: " << method << "\n";
        std::cout << "basis dimension: " << verdict.basis_dimension << "\n";
        if (verdict.witness) {
            std::cout << "witness:";
            for (const std::string& letter : verdict.witness->word) std::cout << " " << letter;
            if (verdict.witness->word.empty()) std::cout << " (empty word)";
            std::cout << "\n";
            std::cout << "value: " << verdict.witness->value << "\n";
            ReductionChoice used = reduce_model(
                doc.hmm, std::string(hmmeq::method_name(verdict.method.value_or(hmmeq::Method::Theta))));
            std::cout << "letters:\n";
            for (std::size_t k = 0; k < used.hmm.alphabet().size(); ++k)
                std::cout << "  " << used.hmm.alphabet()[k] << " ~ " << used.letter_profiles[k] << "\n";
        }
    }
    return verdict.equivalent ? kExitEquivalent : kExitNotEquivalent;
}

int cmd_reduce(const std::string& file, const std::string& method) {
    hmmeq::ModelDocument doc = hmmeq::parse_model_file(file);
    hmmeq::require_valid(doc.hmm);
    ReductionChoice choice = reduce_model(doc.hmm, method);
    std::cout << format_finite_model(choice.hmm, choice.letter_profiles, doc.distributions);
    return kExitEquivalent;
}

int cmd_decompose(const std::string& file) {
    hmmeq::ModelDocument doc = hmmeq::parse_model_file(file);
    hmmeq::require_valid(doc.hmm);

    std::vector<hmmeq::ProfileExpr> profiles = hmmeq::distinct_profiles(doc.hmm);
    hmmeq::LinearDecomposition ld = hmmeq::linear_decompose(profiles);
    hmmeq::FunctionalDecomposition fd = hmmeq::functional_decomposition(doc.hmm);

    std::cout << "profiles: " << profiles.size() << ", basis size: " << fd.size() << "\n";
    std::cout << "basis profiles:\n";
    for (std::size_t k = 0; k < fd.size(); ++k)
        std::cout << "  a" << (k + 1) << " ~ " << fd.basis_profiles[k] << "\n";

    std::cout << "coefficients (profile = sum of basis profiles):\n";
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        std::cout << "  " << profiles[i] << " =";
        for (Eigen::Index j = 0; j < ld.coefficients.cols(); ++j)
            std::cout << " " << (j ? "+ " : "") << ld.coefficients(static_cast<Eigen::Index>(i), j)
                      << "*a" << (j + 1);
        std::cout << "\n";
    }

    std::cout << "theta: " << hmmeq::theta(fd) << "\n";
    for (std::size_t k = 0; k < fd.size(); ++k) {
        std::cout << "P[a" << (k + 1) << "]:\n";
        const hmmeq::RMatrix& m = fd.matrices[k];
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            std::cout << " ";
            for (Eigen::Index j = 0; j < m.cols(); ++j) std::cout << " " << m(i, j);
            std::cout << "\n";
        }
    }
    return kExitEquivalent;
}

int cmd_sample(const std::string& file, const std::string& dist, int length, int count,
               std::uint64_t seed) {
    hmmeq::ModelDocument doc = hmmeq::parse_model_file(file);
    hmmeq::InitialDistribution pi = hmmeq::resolve_distribution(doc, dist);

    std::vector<hmmeq::Trace> traces = hmmeq::sample_traces(doc.hmm, pi, length, count, seed);
    std::cout.precision(17);
    for (const hmmeq::Trace& trace : traces) {
        bool first = true;
        for (const hmmeq::Observation& obs : trace.observations) {
            if (!first) std::cout << " ";
            first = false;
            if (const double* x = std::get_if<double>(&obs))
                std::cout << *x;
            else
                std::cout << std::get<std::string>(obs);
        }
        std::cout << "\n";
    }
    return kExitEquivalent;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace-equivalence checking for hidden Markov models with continuous observations"};
    app.require_subcommand(1);

    std::string file, dist1, dist2, method = "auto";
    bool no_fast_path = false, as_json = false;
    int length = 10, count = 1;
    std::uint64_t seed = default_seed();

    CLI::App* validate = app.add_subcommand("validate", "Check a model file against the definition");
    validate->add_option("file", file, "model file")->required();

    CLI::App* check = app.add_subcommand("check", "Decide whether two initial distributions are trace-equivalent");
    check->add_option("file", file, "model file")->required();
    check->add_option("dist1", dist1, "first initial distribution (name, Dirac(state) or state=weight,...)")->required();
    check->add_option("dist2", dist2, "second initial distribution")->required();
    check->add_flag("--no-fast-path", no_fast_path, "skip the labelling-reduction fast path");
    check->add_flag("--json", as_json, "machine-readable verdict on stdout");

    CLI::App* reduce = app.add_subcommand("reduce", "Print an equivalent finite-observation model");
    reduce->add_option("file", file, "model file")->required();
    reduce->add_option("--method", method, "auto|labelling|nonneg|theta")
        ->check(CLI::IsMember({"auto", "labelling", "nonneg", "theta"}));

    CLI::App* decompose = app.add_subcommand("decompose", "Print the independent functional decomposition");
    decompose->add_option("file", file, "model file")->required();

    CLI::App* sample = app.add_subcommand("sample", "Sample observation traces");
    sample->add_option("file", file, "model file")->required();
    sample->add_option("dist", dist1, "initial distribution")->required();
    sample->add_option("--n", length, "observations per trace")->check(CLI::PositiveNumber);
    sample->add_option("--count", count, "number of traces")->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "RNG seed (default: HMMEQ_SEED or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    if (validate->parsed()) return run_guarded([&] { return cmd_validate(file); });
    if (check->parsed())
        return run_guarded([&] { return cmd_check(file, dist1, dist2, no_fast_path, as_json); });
    if (reduce->parsed()) return run_guarded([&] { return cmd_reduce(file, method); });
    if (decompose->parsed()) return run_guarded([&] { return cmd_decompose(file); });
    if (sample->parsed()) return run_guarded([&] { return cmd_sample(file, dist1, length, count, seed); });
    return kExitInternal;
}
