#include <hmmeq/profile_parser.hpp>

#include <cctype>

namespace hmmeq {

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool done() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& message) const { throw ProfileParseError(pos, message); }

    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string_view rational_token() {
        skip_ws();
        const std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '/') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        return text.substr(start, pos - start);
    }

    Rational rational() {
        skip_ws();
        const std::size_t start = pos;
        std::string_view tok = rational_token();
        auto r = Rational::parse(tok);
        if (!r) {
            pos = start;
            fail("expected a rational number (int or int/int)");
        }
        return *r;
    }

    unsigned natural() {
        skip_ws();
        const std::size_t start = pos;
        std::string_view tok = rational_token();
        auto r = Rational::parse(tok);
        if (!r || r->sign() < 0 || r->denominator() != 1) {
            pos = start;
            fail("expected a non-negative integer degree");
        }
        return static_cast<unsigned>(r->numerator().get_ui());
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos;
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_'))
                ++pos;
        }
        if (pos == start) fail("expected an identifier");
        return std::string(text.substr(start, pos - start));
    }
};

/// atom with its intrinsic weight (1 except for the U(a,b) sugar).
Term parse_atom(Cursor& c) {
    const std::size_t start = c.pos;
    std::string name = c.ident();
    if (name == "N") {
        c.expect('(');
        Rational mean = c.rational();
        c.expect(',');
        const std::size_t sigma_pos = c.pos;
        Rational stddev = c.rational();
        c.expect(')');
        if (stddev.sign() <= 0) throw ProfileParseError(sigma_pos, "standard deviation must be positive");
        return {Rational(1), GaussianAtom{std::move(mean), std::move(stddev)}};
    }
    if (name == "Exp") {
        c.expect('(');
        const std::size_t rate_pos = c.pos;
        Rational rate = c.rational();
        c.expect(')');
        if (rate.sign() <= 0) throw ProfileParseError(rate_pos, "rate must be positive");
        return {Rational(1), ExponentialAtom{std::move(rate)}};
    }
    if (name == "Mono") {
        c.expect('(');
        unsigned degree = c.natural();
        c.expect(',');
        Rational lo = c.rational();
        c.expect(',');
        const std::size_t hi_pos = c.pos;
        Rational hi = c.rational();
        c.expect(')');
        if (!(lo < hi)) throw ProfileParseError(hi_pos, "interval must satisfy lo < hi");
        return {Rational(1), MonomialAtom{degree, std::move(lo), std::move(hi)}};
    }
    if (name == "U") {
        c.expect('(');
        Rational lo = c.rational();
        c.expect(',');
        const std::size_t hi_pos = c.pos;
        Rational hi = c.rational();
        c.expect(')');
        if (!(lo < hi)) throw ProfileParseError(hi_pos, "interval must satisfy lo < hi");
        Rational weight = Rational(1) / (hi - lo);
        return {std::move(weight), MonomialAtom{0, std::move(lo), std::move(hi)}};
    }
    if (name == "Dirac") {
        c.expect('(');
        std::string symbol = c.ident();
        c.expect(')');
        return {Rational(1), DiscreteAtom{std::move(symbol)}};
    }
    throw ProfileParseError(start, "unknown atom '" + name + "' (expected N, Exp, Mono, U or Dirac)");
}

Term parse_term(Cursor& c) {
    const char head = c.peek();
    Rational coeff(1);
    if (head == '+' || head == '-' || std::isdigit(static_cast<unsigned char>(head))) {
        coeff = c.rational();
        c.expect('*');
    }
    Term t = parse_atom(c);
    t.coeff *= coeff;
    return t;
}

}  // namespace

ProfileExpr parse_profile(std::string_view text) {
    Cursor c{text};
    std::vector<Term> terms;
    if (c.done()) c.fail("empty profile expression");
    terms.push_back(parse_term(c));
    while (!c.done()) {
        const char op = c.peek();
        if (op != '+' && op != '-') c.fail("expected '+' or '-' between terms");
        ++c.pos;
        Term t = parse_term(c);
        if (op == '-') t.coeff *= Rational(-1);
        terms.push_back(std::move(t));
    }
    return ProfileExpr::from_terms(std::move(terms));
}

}  // namespace hmmeq
