#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace oracle_order {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline Int parse_int(std::string_view text) {
    if (text.empty()) throw ParseError("empty integer");
    std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (start == text.size()) throw ParseError("sign without digits");
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw ParseError("bad digit in integer: " + std::string(text));
    }
    if (text[0] == '+') text.remove_prefix(1);  // cpp_int rejects an explicit plus
    return Int(std::string(text));
}
}  // namespace detail

// Accepts "n" or "n/d" with optional sign on either part; d must be nonzero.
inline Rat parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(detail::parse_int(text));
    Int num = detail::parse_int(text.substr(0, slash));
    Int den = detail::parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator: " + std::string(text));
    return Rat(num, den);  // boost canonicalizes sign and gcd
}

// Lowest terms, "n" for integers, "n/d" otherwise. Never emits decimals.
inline std::string format_rational(const Rat& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

// Three-way compare usable where a strict order over Rat is needed.
inline int compare(const Rat& a, const Rat& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

}  // namespace oracle_order
