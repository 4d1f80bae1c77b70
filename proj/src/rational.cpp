#include "negot/rational.hpp"

#include <cstdlib>

namespace negot {

std::optional<Rat> parse_rational(std::string_view s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  auto parse_int = [](std::string_view t) -> std::optional<BigInt> {
    if (t.empty()) return std::nullopt;
    size_t i = 0;
    if (t[0] == '-' || t[0] == '+') i = 1;
    if (i == t.size()) return std::nullopt;
    for (size_t j = i; j < t.size(); ++j)
      if (t[j] < '0' || t[j] > '9') return std::nullopt;
    return BigInt(std::string(t));
  };
  if (slash == std::string_view::npos) {
    auto n = parse_int(s);
    if (!n) return std::nullopt;
    return Rat(*n);
  }
  auto n = parse_int(s.substr(0, slash));
  auto d = parse_int(s.substr(slash + 1));
  if (!n || !d || *d == 0) return std::nullopt;
  return Rat(*n, *d);
}

std::string show_rational(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string show_decimal(const Rat& r, int digits) {
  BigInt num = numerator(r), den = denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half away from zero
  BigInt scaled = (num * scale * 2 + den) / (den * 2);
  BigInt ip = scaled / scale, fp = scaled % scale;
  std::string frac = fp.str();
  frac.insert(frac.begin(), digits - static_cast<int>(frac.size()), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  std::string out = (neg ? "-" : "") + ip.str();
  if (!frac.empty()) out += "." + frac;
  return out;
}

} // namespace negot
