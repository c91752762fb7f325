#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "perc/error.hpp"

namespace perc {

// Cell / outcome alphabet. Game recoding: W = 0, L = 1, D = ?.
// Underlying values give the order 0 < ? < 1.
enum class Symbol3 : std::uint8_t { kZero = 0, kQuestion = 1, kOne = 2 };

using Word = std::vector<Symbol3>;

constexpr char to_char(Symbol3 s) {
  switch (s) {
    case Symbol3::kZero: return '0';
    case Symbol3::kQuestion: return '?';
    case Symbol3::kOne: return '1';
  }
  return 'x';
}

inline Symbol3 symbol_from_char(char c) {
  switch (c) {
    case '0': return Symbol3::kZero;
    case '?': return Symbol3::kQuestion;
    case '1': return Symbol3::kOne;
    default: throw Error(ErrorCode::kInvalidSymbol, std::string("unknown symbol '") + c + "'");
  }
}

inline Word parse_word(std::string_view text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.push_back(symbol_from_char(c));
  return w;
}

inline std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (Symbol3 c : w) s.push_back(to_char(c));
  return s;
}

constexpr bool is_binary(Symbol3 s) { return s != Symbol3::kQuestion; }

// Order 0 < ? < 1.
constexpr bool leq(Symbol3 a, Symbol3 b) {
  return static_cast<std::uint8_t>(a) <= static_cast<std::uint8_t>(b);
}

// Order 0 ◁ ? ▷ 1: a ⊴ b iff equal or b is ?.
constexpr bool info_leq(Symbol3 a, Symbol3 b) { return a == b || b == Symbol3::kQuestion; }

constexpr Symbol3 flip(Symbol3 s) {
  switch (s) {
    case Symbol3::kZero: return Symbol3::kOne;
    case Symbol3::kOne: return Symbol3::kZero;
    case Symbol3::kQuestion: return Symbol3::kQuestion;
  }
  return s;
}

constexpr int index_of(Symbol3 s) { return static_cast<int>(s); }
constexpr Symbol3 symbol_at(int i) { return static_cast<Symbol3>(i); }

constexpr Symbol3 kAllSymbols[3] = {Symbol3::kZero, Symbol3::kQuestion, Symbol3::kOne};

}  // namespace perc
