#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hmmeq {

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator. Arithmetic never rounds; every operation that the
/// decision procedure performs on probabilities and matrix entries goes
/// through this type.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(int n) : value_(n) {}
    Rational(long n) : value_(n) {}
    Rational(long long n) : value_(static_cast<long>(n)) {}

    Rational(long num, long den) : value_(num, den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        value_.canonicalize();
    }

    explicit Rational(mpq_class v) : value_(std::move(v)) {
        if (value_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
        value_.canonicalize();
    }

    /// Parses "123", "-4/6" (canonicalised to -2/3), "+7/2". Anything else,
    /// including float literals like "0.5", yields nullopt.
    static std::optional<Rational> parse(std::string_view text);

    const mpq_class& raw() const { return value_; }
    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    bool is_zero() const { return sgn(value_) == 0; }
    int sign() const { return sgn(value_); }

    double to_double() const { return value_.get_d(); }

    /// "p/q" in lowest terms, or just "p" when q == 1.
    std::string to_string() const;

    Rational operator-() const { return Rational(mpq_class(-value_)); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        value_ /= o.value_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline std::optional<Rational> Rational::parse(std::string_view text) {
    auto parse_int = [](std::string_view s) -> std::optional<mpz_class> {
        if (s.empty()) return std::nullopt;
        std::size_t i = 0;
        if (s[0] == '+' || s[0] == '-') i = 1;
        if (i == s.size()) return std::nullopt;
        for (std::size_t k = i; k < s.size(); ++k)
            if (s[k] < '0' || s[k] > '9') return std::nullopt;
        return mpz_class(std::string(s), 10);
    };

    std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        auto num = parse_int(text);
        if (!num) return std::nullopt;
        return Rational(mpq_class(*num));
    }
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den || sgn(*den) == 0) return std::nullopt;
    mpq_class q(*num, *den);
    q.canonicalize();
    return Rational(std::move(q));
}

inline std::string Rational::to_string() const {
    return value_.get_str();
}

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.value_;
}

}  // namespace hmmeq

namespace Eigen {

template <>
struct NumTraits<hmmeq::Rational> : GenericNumTraits<hmmeq::Rational> {
    typedef hmmeq::Rational Real;
    typedef hmmeq::Rational NonInteger;
    typedef hmmeq::Rational Nested;
    typedef hmmeq::Rational Literal;

    static inline Real epsilon() { return hmmeq::Rational(0); }
    static inline Real dummy_precision() { return hmmeq::Rational(0); }
    static inline int digits10() { return 0; }

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 80,
        MulCost = 80,
    };
};

}  // namespace Eigen
