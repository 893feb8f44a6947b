#pragma once

// Words with run-length compressed powers of one distinguished generator.
// The exponent type is either long (concrete slope) or Affine (c0 + c1 p + c2 q).

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laminar/error.hpp"
#include "laminar/words.hpp"

namespace laminar {

struct Affine {
  long c0 = 0, c1 = 0, c2 = 0;

  static Affine constant(long c) { return {c, 0, 0}; }
  bool is_zero() const { return c0 == 0 && c1 == 0 && c2 == 0; }
  bool is_constant() const { return c1 == 0 && c2 == 0; }
  long eval(long p, long q) const { return c0 + c1 * p + c2 * q; }

  Affine operator+(const Affine& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
  Affine operator-() const { return {-c0, -c1, -c2}; }
  Affine operator-(const Affine& o) const { return *this + (-o); }
  Affine operator*(long n) const { return {c0 * n, c1 * n, c2 * n}; }
  auto operator<=>(const Affine&) const = default;
};

inline std::string to_string(const Affine& a) {
  std::string s;
  auto term = [&](long c, const char* var) {
    if (c == 0) return;
    if (c < 0)
      s += "-";
    else if (!s.empty())
      s += "+";
    long m = std::labs(c);
    if (m != 1 || !*var) s += std::to_string(m);
    s += var;
  };
  term(a.c1, "p");
  term(a.c2, "q");
  term(a.c0, "");
  return s.empty() ? "0" : s;
}

// Parses "p-18q", "10q-p", "-3", "q".
inline Affine parse_affine(std::string_view t) {
  Affine a;
  std::size_t i = 0;
  if (t.empty()) throw Error("MalformedWord", "empty exponent");
  while (i < t.size()) {
    long sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      sign = t[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
    long c = j > i ? std::stol(std::string(t.substr(i, j - i))) : 1;
    if (j < t.size() && (t[j] == 'p' || t[j] == 'q')) {
      (t[j] == 'p' ? a.c1 : a.c2) += sign * c;
      ++j;
    } else if (j == i) {
      throw Error("MalformedWord", "bad exponent '" + std::string(t) + "'");
    } else {
      a.c0 += sign * c;
    }
    i = j;
  }
  return a;
}

// Exponent operations the engine needs, for long and Affine.
template <class Exp>
struct ExpOps;

template <>
struct ExpOps<long> {
  static long constant(long c) { return c; }
  static bool zero(long e) { return e == 0; }
  static bool unit(long e) { return e == 1 || e == -1; }
  static std::optional<long> as_constant(long e) { return e; }
  static std::string format(long e) { return std::to_string(e); }
  static long parse(std::string_view t) { return std::stol(std::string(t)); }
};

template <>
struct ExpOps<Affine> {
  static Affine constant(long c) { return Affine::constant(c); }
  static bool zero(const Affine& e) { return e.is_zero(); }
  static bool unit(const Affine& e) { return e.is_constant() && (e.c0 == 1 || e.c0 == -1); }
  static std::optional<long> as_constant(const Affine& e) {
    if (e.is_constant()) return e.c0;
    return std::nullopt;
  }
  static std::string format(const Affine& e) { return to_string(e); }
  static Affine parse(std::string_view t) { return parse_affine(t); }
};

template <class Exp>
struct Tok {
  char g = 0;  // lowercase generator
  Exp e{};
  auto operator<=>(const Tok&) const = default;
};

template <class Exp>
using TokWord = std::vector<Tok<Exp>>;

template <class Exp>
struct TokOps {
  using T = Tok<Exp>;
  using W = TokWord<Exp>;
  using E = ExpOps<Exp>;
  char power_gen = 'k';

  bool merges(const T& x, const T& y) const {
    return x.g == y.g && (x.g == power_gen || E::zero(x.e + y.e));
  }

  // Appends t keeping the word reduced.
  void push(W& out, const T& t) const {
    if (!out.empty() && out.back().g == t.g) {
      if (t.g == power_gen) {
        Exp s = out.back().e + t.e;
        out.pop_back();
        if (!E::zero(s)) push(out, T{t.g, s});
        return;
      }
      if (E::zero(out.back().e + t.e)) {
        out.pop_back();
        return;
      }
    }
    out.push_back(t);
  }

  W reduce(const W& w) const {
    W out;
    out.reserve(w.size());
    for (const auto& t : w) push(out, t);
    return out;
  }

  W concat(const W& u, const W& v) const {
    W out = u;
    for (const auto& t : v) push(out, t);
    return out;
  }

  W inverse(const W& w) const {
    W out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(T{it->g, -it->e});
    return out;
  }

  W cyclic_reduce(W w) const {
    w = reduce(w);
    for (;;) {
      if (w.size() < 2) return w;
      const T f = w.front(), l = w.back();
      if (f.g != l.g) return w;
      if (f.g == power_gen) {
        W mid(w.begin() + 1, w.end() - 1);
        Exp s = f.e + l.e;
        if (!E::zero(s)) push(mid, T{f.g, s});
        w = reduce(mid);
        continue;
      }
      if (!E::zero(f.e + l.e)) return w;
      w = W(w.begin() + 1, w.end() - 1);
    }
  }

  static W rotate(const W& w, std::size_t i) {
    W out;
    out.reserve(w.size());
    out.insert(out.end(), w.begin() + i, w.end());
    out.insert(out.end(), w.begin(), w.begin() + i);
    return out;
  }

  // Least rotation of the cyclic reduction.
  W cyclic_canonical(const W& w) const {
    W c = cyclic_reduce(w);
    W best = c;
    for (std::size_t i = 1; i < c.size(); ++i) {
      W r = rotate(c, i);
      if (r < best) best = std::move(r);
    }
    return best;
  }

  // w with u inserted before position pos.
  W insert(const W& w, std::size_t pos, const W& u) const {
    W out(w.begin(), w.begin() + pos);
    for (const auto& t : u) push(out, t);
    for (std::size_t i = pos; i < w.size(); ++i) push(out, w[i]);
    return out;
  }

  W from_word(const Word& w) const {
    W out;
    for (const Letter& l : w.letters()) push(out, T{l.symbol, E::constant(l.sign)});
    return out;
  }
};

template <class Exp>
struct TokWordHash {
  std::size_t operator()(const TokWord<Exp>& w) const {
    std::size_t h = 1469598103934665603ull;
    for (const auto& t : w) {
      h = (h ^ static_cast<unsigned char>(t.g)) * 1099511628211ull;
      if constexpr (std::is_same_v<Exp, long>) {
        h = (h ^ static_cast<std::size_t>(t.e)) * 1099511628211ull;
      } else {
        h = (h ^ static_cast<std::size_t>(t.e.c0)) * 1099511628211ull;
        h = (h ^ static_cast<std::size_t>(t.e.c1)) * 1099511628211ull;
        h = (h ^ static_cast<std::size_t>(t.e.c2)) * 1099511628211ull;
      }
    }
    return h;
  }
};

// "a^2 b K^3 k^(p-18q)"; "1" is the empty word. Non-power generators are
// expanded into unit tokens.
template <class Exp>
std::string format_tokword(const TokWord<Exp>& w, char power_gen = 'k') {
  using E = ExpOps<Exp>;
  if (w.empty()) return "1";
  std::string s;
  auto emit = [&](char g, const std::string& exp) {
    if (!s.empty()) s += ' ';
    s += g;
    if (!exp.empty()) s += "^" + exp;
  };
  for (std::size_t i = 0; i < w.size();) {
    const auto& t = w[i];
    if (t.g == power_gen) {
      auto c = E::as_constant(t.e);
      if (c) {
        char g = *c < 0 ? static_cast<char>(std::toupper(t.g)) : t.g;
        long m = std::labs(*c);
        emit(g, m == 1 ? "" : std::to_string(m));
      } else {
        emit(t.g, "(" + E::format(t.e) + ")");
      }
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < w.size() && w[j] == t) ++j;
    long sign = *E::as_constant(t.e);
    char g = sign < 0 ? static_cast<char>(std::toupper(t.g)) : t.g;
    emit(g, j - i == 1 ? "" : std::to_string(j - i));
    i = j;
  }
  return s;
}

template <class Exp>
TokWord<Exp> parse_tokword(std::string_view text, const Alphabet& alphabet, char power_gen = 'k') {
  using E = ExpOps<Exp>;
  TokOps<Exp> ops{power_gen};
  TokWord<Exp> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (text.substr(i) == "1") return out;
  while (skip(), i < text.size()) {
    char c = text[i++];
    char g = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!std::isalpha(static_cast<unsigned char>(c)) || alphabet.find(g) == std::string::npos)
      throw Error("UnknownSymbol", std::string("symbol '") + c + "' not in alphabet " + alphabet);
    long sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : 1;
    Exp e = E::constant(1);
    if (i < text.size() && text[i] == '^') {
      ++i;
      std::size_t j = i;
      if (j < text.size() && text[j] == '(') {
        j = text.find(')', i);
        if (j == std::string_view::npos) throw Error("MalformedWord", "unclosed exponent");
        e = E::parse(text.substr(i + 1, j - i - 1));
        i = j + 1;
      } else {
        if (j < text.size() && text[j] == '-') ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) throw Error("MalformedWord", "missing exponent");
        e = E::constant(std::stol(std::string(text.substr(i, j - i))));
        i = j;
      }
    }
    if (sign < 0) e = -e;
    if (g == power_gen) {
      ops.push(out, Tok<Exp>{g, e});
      continue;
    }
    auto n = E::as_constant(e);
    if (!n) throw Error("MalformedWord", "symbolic exponent on non-power generator");
    for (long r = 0; r < std::labs(*n); ++r) ops.push(out, Tok<Exp>{g, E::constant(*n < 0 ? -1 : 1)});
  }
  return out;
}

}  // namespace laminar
