#pragma once

#include <hmmeq/profile.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace hmmeq {

class ProfileParseError : public std::runtime_error {
public:
    ProfileParseError(std::size_t column, const std::string& message)
        : std::runtime_error(message), column_(column) {}

    /// 0-based offset into the parsed expression text.
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

/// Parses the profile expression grammar
///
///   expr     := term (('+'|'-') term)*
///   term     := [rational '*'] atom
///   atom     := 'N(' r ',' r ')' | 'Exp(' r ')' | 'Mono(' nat ',' r ',' r ')'
///             | 'U(' r ',' r ')' | 'Dirac(' ident ')'
///   rational := int | int '/' int
///
/// U(a,b) desugars to (1/(b-a))*Mono(0,a,b). Rationals are exact; float
/// literals are rejected.
ProfileExpr parse_profile(std::string_view text);

}  // namespace hmmeq
