#pragma once

// Symbol literal mini-language.
//
//   literal  := name | term (';' term)*
//   name     := "one" | "z" | "zbar" | "zero"
//   term     := mode ':' complex
//   complex  := real | real ('+'|'-') real 'i' | real 'i'
//
// Examples: "0:2;1:1" is 2+z, "-1:1" is zbar, "1:0.5-2i" is (0.5-2i)z.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circleop/error.hpp"
#include "circleop/symbol.hpp"

namespace circleop {

namespace detail {

inline std::pair<std::size_t, std::size_t> trim_range(std::string_view s, std::size_t b, std::size_t e) {
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return {b, e};
}

// Parses s[b, e) completely as a double; accepts a leading '+'.
inline double parse_real(std::string_view s, std::size_t b, std::size_t e, std::size_t base) {
  auto [tb, te] = trim_range(s, b, e);
  if (tb == te) throw ParseError("expected a number", base + tb);
  std::size_t start = tb;
  if (s[start] == '+') ++start;
  double value = 0.0;
  auto res = std::from_chars(s.data() + start, s.data() + te, value);
  if (res.ec != std::errc{} || res.ptr != s.data() + te)
    throw ParseError("malformed number '" + std::string(s.substr(tb, te - tb)) + "'",
                     base + static_cast<std::size_t>(res.ptr - s.data()));
  return value;
}

}  // namespace detail

/// Parses `re`, `re+imi`, `re-imi` or `imi`. `base` offsets reported error positions.
inline cplx parse_complex(std::string_view s, std::size_t base = 0) {
  auto [b, e] = detail::trim_range(s, 0, s.size());
  if (b == e) throw ParseError("expected a complex number", base + b);
  if (s[e - 1] != 'i') return {detail::parse_real(s, b, e, base), 0.0};

  // split at the last sign that is not a leading sign or an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t k = e - 1; k > b; --k) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](std::size_t from, std::size_t to) {
    auto [tb, te] = detail::trim_range(s, from, to);
    std::string_view body = s.substr(tb, te - tb);
    if (body.empty() || body == "+") return 1.0;
    if (body == "-") return -1.0;
    return detail::parse_real(s, tb, te, base);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(b, e - 1)};
  return {detail::parse_real(s, b, split, base), imag_part(split, e - 1)};
}

inline Symbol parse_symbol(std::string_view text) {
  auto [b, e] = detail::trim_range(text, 0, text.size());
  const std::string_view body = text.substr(b, e - b);
  if (body == "one") return Symbol::one();
  if (body == "z") return Symbol::z();
  if (body == "zbar") return Symbol::zbar();
  if (body == "zero") return Symbol{};
  if (body.empty()) throw ParseError("empty symbol literal", b);

  std::vector<std::pair<int, cplx>> terms;
  std::size_t pos = b;
  while (pos <= e) {
    std::size_t next = text.find(';', pos);
    if (next == std::string_view::npos || next > e) next = e;
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos || colon >= next) throw ParseError("expected 'mode:value'", pos);

    auto [mb, me] = detail::trim_range(text, pos, colon);
    int mode = 0;
    const char* mstart = text.data() + mb + (mb < me && text[mb] == '+' ? 1 : 0);
    auto res = std::from_chars(mstart, text.data() + me, mode);
    if (mb == me || res.ec != std::errc{} || res.ptr != text.data() + me)
      throw ParseError("malformed mode", static_cast<std::size_t>(res.ptr - text.data()));

    const cplx value = parse_complex(text.substr(colon + 1, next - colon - 1), colon + 1);
    for (const auto& t : terms)
      if (t.first == mode) throw ParseError("duplicate mode " + std::to_string(mode), mb);
    terms.emplace_back(mode, value);
    pos = next + 1;
  }
  return make_symbol(terms);
}

/// Formats as `re+imi` with round-trip precision.
inline std::string format_complex(cplx c) {
  char buf[80];
  const double im = c.imag() == 0.0 ? 0.0 : c.imag();  // no "-0i"
  std::snprintf(buf, sizeof buf, "%.17g%c%.17gi", c.real(), std::signbit(im) ? '-' : '+', std::abs(im));
  return buf;
}

inline std::string format_symbol(const Symbol& s) {
  if (s.is_zero()) return "zero";
  std::string out;
  for (const auto& [n, c] : s.coeffs()) {
    if (!out.empty()) out += ';';
    out += std::to_string(n) + ":" + format_complex(c);
  }
  return out;
}

}  // namespace circleop
