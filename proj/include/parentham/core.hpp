#pragma once

// Shared vocabulary: exact rationals, the error hierarchy and small bit helpers.

#include <gmpxx.h>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parentham {

using Rational = mpq_class;
using Integer = mpz_class;

// Monomial keys and assignments pack one variable per bit.
inline constexpr std::size_t kMaxVariables = 64;

// Brute-force oracles refuse to enumerate more than 2^cap points unless asked.
inline constexpr std::size_t kDefaultEnumerationCap = 20;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class NotDiagonalError : public Error {
public:
    using Error::Error;
};

class DegreeError : public Error {
public:
    using Error::Error;
};

class NetlistError : public Error {
public:
    using Error::Error;
};

class NumericConsistencyError : public Error {
public:
    using Error::Error;
};

class SyntaxError : public FormatError {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what)
        : FormatError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

inline Rational make_rational(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// "p/q" or "p"; always canonical, never a decimal point.
inline std::string to_string(const Rational& q) {
    return q.get_str();
}

inline Rational parse_rational(std::string_view text) {
    if (text.empty()) {
        throw FormatError("empty rational literal");
    }
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        i = 1;
    }
    bool seen_slash = false;
    bool digits_before = false;
    bool digits_after = false;
    for (std::size_t k = i; k < text.size(); ++k) {
        char c = text[k];
        if (c >= '0' && c <= '9') {
            (seen_slash ? digits_after : digits_before) = true;
        } else if (c == '/' && !seen_slash) {
            seen_slash = true;
        } else {
            throw FormatError("malformed rational literal '" + std::string(text) + "'");
        }
    }
    if (!digits_before || (seen_slash && !digits_after)) {
        throw FormatError("malformed rational literal '" + std::string(text) + "'");
    }
    std::string s(text[0] == '+' ? text.substr(1) : text);
    Rational q;
    if (q.set_str(s, 10) != 0) {
        throw FormatError("malformed rational literal '" + std::string(text) + "'");
    }
    if (q.get_den() == 0) {
        throw FormatError("zero denominator in '" + std::string(text) + "'");
    }
    q.canonicalize();
    return q;
}

inline int popcount(std::uint64_t v) noexcept {
    return std::popcount(v);
}

inline std::uint64_t low_mask(std::size_t n) noexcept {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

// Reverse the low n bits. Converts between the monomial convention (bit k is
// variable k+1) and the basis-index convention (variable 1 is the most
// significant bit).
inline std::uint64_t reverse_bits(std::uint64_t v, std::size_t n) noexcept {
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < n; ++k) {
        r = (r << 1) | ((v >> k) & 1U);
    }
    return r;
}

}  // namespace parentham
