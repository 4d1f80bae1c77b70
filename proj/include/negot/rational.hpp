#ifndef NEGOT_RATIONAL_HPP
#define NEGOT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <string>
#include <string_view>

namespace negot {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "3", "-3", "1/2", "-2/3". Rejects zero denominators.
std::optional<Rat> parse_rational(std::string_view s);

// "num/den" when den != 1, otherwise "num".
std::string show_rational(const Rat& r);

// Decimal rendering, round-to-nearest, for CLI display only.
std::string show_decimal(const Rat& r, int digits = 9);

} // namespace negot

#endif
