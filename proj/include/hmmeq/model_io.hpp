#pragma once

#include <hmmeq/hmm.hpp>

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmmeq {

/// Parsed model document: the continuous-observation HMM plus the named
/// initial distributions declared in the file.
///
/// File grammar (line oriented, '#' starts a comment):
///
///   states q1 q2 ...
///   transition <from> <to> <rational> <profile expression>
///   distribution <name> <state>=<rational> ...
///
/// Rationals are exact (int or int/int); float literals are rejected.
struct ModelDocument {
    ContinuousHMM hmm;
    std::map<std::string, InitialDistribution> distributions;
};

class ModelParseError : public std::runtime_error {
public:
    ModelParseError(int line, int column, const std::string& message);

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

ModelDocument parse_model(std::istream& in);
ModelDocument parse_model_text(const std::string& text);
ModelDocument parse_model_file(const std::string& path);  // adds file-open errors

/// Renders a finite-observation HMM in the model format, with one
/// Dirac(letter) transition per positive matrix entry and the letter legend
/// in comments. The output re-parses as a valid model.
std::string format_finite_model(const FiniteHMM& f, const std::vector<ProfileExpr>& letter_profiles,
                                const std::map<std::string, InitialDistribution>& distributions = {});

/// Resolves a distribution argument: a name declared in the document, the
/// inline form "Dirac(state)", or comma-separated assignments
/// "q1=1/2,q2=1/2". Throws std::invalid_argument with a description.
InitialDistribution resolve_distribution(const ModelDocument& doc, const std::string& spec);

}  // namespace hmmeq
