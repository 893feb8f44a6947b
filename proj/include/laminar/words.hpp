#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "laminar/error.hpp"
#include "laminar/smith.hpp"

namespace laminar {

// Generators are lowercase letters; an alphabet is the string of them, e.g. "abk".
using Alphabet = std::string;

struct Letter {
  char symbol = 'a';
  std::int8_t sign = 1;

  Letter inverse() const { return {symbol, static_cast<std::int8_t>(-sign)}; }
  bool cancels(Letter o) const { return symbol == o.symbol && sign == -o.sign; }
  friend bool operator==(Letter x, Letter y) { return x.symbol == y.symbol && x.sign == y.sign; }
  friend bool operator!=(Letter x, Letter y) { return !(x == y); }
  // a < A < b < B < ...
  friend bool operator<(Letter x, Letter y) {
    return x.symbol != y.symbol ? x.symbol < y.symbol : x.sign > y.sign;
  }
};

class Word {
 public:
  Word() = default;

  // Freely reduces the input; symbols are not checked against any alphabet here.
  explicit Word(const std::vector<Letter>& raw) {
    letters_.reserve(raw.size());
    for (Letter l : raw) push(l);
  }

  static Word gen(char s, int exponent = 1) {
    Word w;
    Letter l{s, static_cast<std::int8_t>(exponent < 0 ? -1 : 1)};
    for (int i = 0; i < std::abs(exponent); ++i) w.letters_.push_back(l);
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word prefix(std::size_t n) const { return from_reduced({letters_.begin(), letters_.begin() + n}); }
  Word suffix_from(std::size_t n) const { return from_reduced({letters_.begin() + n, letters_.end()}); }

  Word inverse() const {
    Word w;
    w.letters_.reserve(size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
  }

  Word operator*(const Word& o) const {
    Word w = *this;
    for (Letter l : o.letters_) w.push(l);
    return w;
  }

  friend bool operator==(const Word& x, const Word& y) { return x.letters_ == y.letters_; }
  friend bool operator!=(const Word& x, const Word& y) { return !(x == y); }
  // shortlex
  friend bool operator<(const Word& x, const Word& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return std::lexicographical_compare(x.letters_.begin(), x.letters_.end(), y.letters_.begin(),
                                        y.letters_.end());
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : letters_) h = (h ^ (static_cast<unsigned char>(l.symbol) * 2u + (l.sign > 0))) * 1099511628211ull;
    return h;
  }

  static Word from_reduced(std::vector<Letter> v) {
    Word w;
    w.letters_ = std::move(v);
    return w;
  }

 private:
  void push(Letter l) {
    if (!letters_.empty() && letters_.back().cancels(l))
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  std::vector<Letter> letters_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const { return w.hash(); }
};

inline void check_alphabet(const std::vector<Letter>& raw, const Alphabet& alphabet) {
  for (Letter l : raw)
    if (alphabet.find(l.symbol) == std::string::npos)
      throw Error("UnknownSymbol", std::string("symbol '") + l.symbol + "' not in alphabet \"" + alphabet + "\"");
}

inline Word reduce(const std::vector<Letter>& raw, const Alphabet& alphabet) {
  check_alphabet(raw, alphabet);
  return Word(raw);
}

inline Word compose(const Word& u, const Word& v) { return u * v; }
inline Word inverse(const Word& u) { return u.inverse(); }

inline Word power(const Word& u, long n) {
  Word base = n < 0 ? u.inverse() : u;
  Word out;
  for (long i = 0; i < std::abs(n); ++i) out = out * base;
  return out;
}

inline Word substitute(const Word& w, const std::map<char, Word>& assignment) {
  Word out;
  for (Letter l : w.letters()) {
    auto it = assignment.find(l.symbol);
    if (it == assignment.end())
      throw Error("MissingAssignment", std::string("no image for generator '") + l.symbol + "'");
    out = out * (l.sign > 0 ? it->second : it->second.inverse());
  }
  return out;
}

// Text syntax: terms separated by whitespace or juxtaposed; term := letter ['^' int].
inline std::vector<Letter> parse_letters(std::string_view text) {
  std::vector<Letter> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  if (i == text.size() || text.substr(i) == "1") return out;
  while (i < text.size()) {
    char c = text[i];
    if (!std::isalpha(static_cast<unsigned char>(c)))
      throw Error("ParseError", "unexpected character '" + std::string(1, c) + "' in \"" + std::string(text) + "\"");
    ++i;
    long e = 1;
    skip();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip();
      std::size_t j = i;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      std::size_t k = j;
      while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
      if (k == j) throw Error("ParseError", "missing exponent in \"" + std::string(text) + "\"");
      e = std::stol(std::string(text.substr(i, k - i)));
      i = k;
    }
    Letter l{static_cast<char>(std::tolower(static_cast<unsigned char>(c))),
             static_cast<std::int8_t>(std::isupper(static_cast<unsigned char>(c)) ? -1 : 1)};
    if (e < 0) {
      l = l.inverse();
      e = -e;
    }
    for (long r = 0; r < e; ++r) out.push_back(l);
    skip();
  }
  return out;
}

inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
  return reduce(parse_letters(text), alphabet);
}

inline std::string format_word(const Word& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  const auto& L = w.letters();
  for (std::size_t i = 0; i < L.size();) {
    std::size_t j = i;
    while (j < L.size() && L[j] == L[i]) ++j;
    if (i) os << ' ';
    os << static_cast<char>(L[i].sign > 0 ? L[i].symbol : std::toupper(static_cast<unsigned char>(L[i].symbol)));
    if (j - i > 1) os << '^' << (j - i);
    i = j;
  }
  return os.str();
}

// w = h * core * h^-1 with core cyclically reduced; returns |h| and core.
inline std::pair<std::size_t, Word> cyclic_reduce(const Word& w) {
  const auto& L = w.letters();
  std::size_t i = 0, j = L.size();
  while (j - i >= 2 && L[i].cancels(L[j - 1])) {
    ++i;
    --j;
  }
  return {i, Word::from_reduced({L.begin() + i, L.begin() + j})};
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || !w[0].cancels(w[w.size() - 1]);
}

inline Word rotate(const Word& w, std::size_t k) {
  const auto& L = w.letters();
  std::vector<Letter> v(L.begin() + k, L.end());
  v.insert(v.end(), L.begin(), L.begin() + k);
  return Word::from_reduced(std::move(v));
}

// Minimal rotation of the cyclic reduction (conjugacy-class key for cyclically reduced words).
inline Word cyclic_canonical(const Word& w) {
  Word c = cyclic_reduce(w).second;
  Word best = c;
  for (std::size_t k = 1; k < c.size(); ++k) {
    Word r = rotate(c, k);
    if (r < best) best = r;
  }
  return best;
}

inline std::vector<long> abelianize(const Word& w, const Alphabet& alphabet) {
  std::vector<long> v(alphabet.size(), 0);
  for (Letter l : w.letters()) {
    auto p = alphabet.find(l.symbol);
    if (p == std::string::npos) throw Error("UnknownSymbol", std::string("symbol '") + l.symbol + "'");
    v[p] += l.sign;
  }
  return v;
}

struct Presentation {
  Alphabet alphabet;
  std::vector<Word> relators;

  void validate() const {
    for (const Word& r : relators) {
      if (r.empty()) throw Error("InvalidPresentation", "empty relator");
      if (!is_cyclically_reduced(r))
        throw Error("InvalidPresentation", "relator " + format_word(r) + " is not cyclically reduced");
      check_alphabet(r.letters(), alphabet);
    }
  }
};

inline IntMatrix relation_matrix(const Presentation& pres) {
  IntMatrix m;
  m.cols = pres.alphabet.size();
  for (const Word& r : pres.relators) {
    auto v = abelianize(r, pres.alphabet);
    m.rows.emplace_back(v.begin(), v.end());
  }
  return m;
}

// All freely reduced words of length <= radius, in shortlex order.
inline std::vector<Word> ball(const Alphabet& alphabet, std::size_t radius) {
  std::vector<Letter> gens;
  for (char c : alphabet) {
    gens.push_back({c, 1});
    gens.push_back({c, -1});
  }
  std::sort(gens.begin(), gens.end());
  std::vector<Word> out{Word()};
  std::size_t layer_begin = 0;
  for (std::size_t r = 1; r <= radius; ++r) {
    std::size_t layer_end = out.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i)
      for (Letter g : gens) {
        const Word& w = out[i];
        if (!w.empty() && w[w.size() - 1].cancels(g)) continue;
        auto v = w.letters();
        v.push_back(g);
        out.push_back(Word::from_reduced(std::move(v)));
      }
    layer_begin = layer_end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equality modulo relators.

struct EqualityBudget {
  int depth = 2;
  int conjugator_length = 6;
  std::size_t max_length = 256;
};

// Insert conjugator * rho * conjugator^-1 at `position` of the current word, where
// rho is the rotation by `rotation` of relator `relator` (inverted first if asked).
struct Insertion {
  std::size_t position = 0;
  Word conjugator;
  std::size_t relator = 0;
  bool inverted = false;
  std::size_t rotation = 0;
};

struct EqualityVerdict {
  enum class Kind { Equal, NotEqual, Unknown } kind = Kind::Unknown;
  std::vector<Insertion> certificate;  // Equal
  std::vector<BigInt> witness;         // NotEqual: abelianized difference
  EqualityBudget budget;               // Unknown: limits reached
  std::size_t depth() const { return certificate.size(); }
};

inline Word relator_variant(const Presentation& pres, const Insertion& s) {
  Word r = pres.relators.at(s.relator);
  if (s.inverted) r = r.inverse();
  if (s.rotation >= r.size()) throw Error("BadCertificate", "rotation out of range");
  return rotate(r, s.rotation);
}

inline Word apply_insertion(const Word& w, const Presentation& pres, const Insertion& s) {
  if (s.position > w.size()) throw Error("BadCertificate", "insertion position out of range");
  Word x = s.conjugator * relator_variant(pres, s) * s.conjugator.inverse();
  return w.prefix(s.position) * x * w.suffix_from(s.position);
}

inline bool replay_equality(const Word& u, const Word& v, const Presentation& pres,
                            const std::vector<Insertion>& cert) {
  try {
    Word w = u * v.inverse();
    for (const auto& s : cert) w = apply_insertion(w, pres, s);
    return w.empty();
  } catch (const Error&) {
    return false;
  }
}

// Bounded relator-insertion search; the relator table is built once and reused.
class RelatorSearch {
 public:
  explicit RelatorSearch(Presentation pres) : pres_(std::move(pres)) {
    pres_.validate();
    lattice_ = RowLattice(relation_matrix(pres_));
    for (std::size_t i = 0; i < pres_.relators.size(); ++i)
      for (int inv = 0; inv < 2; ++inv) {
        Word r = inv ? pres_.relators[i].inverse() : pres_.relators[i];
        if (len_ok_.size() <= r.size()) len_ok_.resize(r.size() + 1, false);
        len_ok_[r.size()] = true;
        for (std::size_t k = 0; k < r.size(); ++k) {
          Word v = rotate(r, k);
          Insertion s;
          s.relator = i;
          s.inverted = inv;
          s.rotation = k;
          if (table_.emplace(v, s).second) list_.push_back({v, s});
        }
      }
  }

  const Presentation& presentation() const { return pres_; }

  EqualityVerdict decide(const Word& u, const Word& v, const EqualityBudget& budget = {}) const {
    if (budget.depth < 1 || budget.conjugator_length < 0 || budget.max_length < 1)
      throw Error("InvalidBudget", "budget must be positive");
    check_alphabet(u.letters(), pres_.alphabet);
    check_alphabet(v.letters(), pres_.alphabet);
    EqualityVerdict out;
    out.budget = budget;
    Word w = u * v.inverse();
    if (w.empty()) {
      out.kind = EqualityVerdict::Kind::Equal;
      return out;
    }
    auto diff = abelianize(w, pres_.alphabet);
    std::vector<BigInt> d(diff.begin(), diff.end());
    if (!lattice_.contains(d)) {
      out.kind = EqualityVerdict::Kind::NotEqual;
      out.witness = std::move(d);
      return out;
    }
    std::vector<Insertion> cert;
    if (search(w.letters(), budget.depth, budget.max_length, cert)) {
      out.kind = EqualityVerdict::Kind::Equal;
      out.certificate = std::move(cert);
    }
    return out;
  }

 private:
  // One insertion empties w iff w = h rho h^-1 for a relator variant rho.
  bool one_step(const std::vector<Letter>& w, std::vector<Insertion>& cert) const {
    std::size_t i = 0, j = w.size();
    if (j == 0) return false;
    while (j - i >= 2 && w[i].cancels(w[j - 1])) {
      ++i;
      --j;
    }
    if (j - i >= len_ok_.size() || !len_ok_[j - i]) return false;
    std::vector<Letter> inv;
    inv.reserve(j - i);
    for (std::size_t k = j; k > i; --k) inv.push_back(w[k - 1].inverse());
    auto it = table_.find(Word::from_reduced(std::move(inv)));
    if (it == table_.end()) return false;
    Insertion s = it->second;
    s.position = i;
    cert.push_back(s);
    return true;
  }

  static void push_reduced(std::vector<Letter>& buf, Letter l) {
    if (!buf.empty() && buf.back().cancels(l))
      buf.pop_back();
    else
      buf.push_back(l);
  }

  // Cheap necessary condition for w[:pos] rho w[pos:] to be emptied by one more insertion:
  // its cyclic core must have the length of some relator.
  bool may_finish(const std::vector<Letter>& w, std::size_t pos, const std::vector<Letter>& rho) const {
    const std::size_t n = w.size(), r = rho.size();
    std::size_t i = 0;
    while (i < r && i < pos && w[pos - 1 - i].cancels(rho[i])) ++i;
    if (i == r) return true;
    std::size_t j = 0;
    while (j < r - i && pos + j < n && rho[r - 1 - j].cancels(w[pos + j])) ++j;
    if (j == r - i) return true;
    // w1 = w[:pos-i] rho[i:r-j] w[pos+j:], already reduced
    const std::size_t a = pos - i, m = r - i - j, len = a + m + (n - pos - j);
    auto at = [&](std::size_t k) { return k < a ? w[k] : k < a + m ? rho[i + k - a] : w[pos + j + k - a - m]; };
    std::size_t lo = 0, hi = len;
    while (hi - lo >= 2 && at(lo).cancels(at(hi - 1))) {
      ++lo;
      --hi;
    }
    return hi - lo < len_ok_.size() && len_ok_[hi - lo];
  }

  bool search(const std::vector<Letter>& w, int depth, std::size_t max_len, std::vector<Insertion>& cert) const {
    if (w.empty()) return true;
    if (depth <= 0) return false;
    if (one_step(w, cert)) return true;
    if (depth == 1) return false;
    // Insert inside the cyclically reduced core; conjugators are never needed here.
    std::size_t h = 0, e = w.size();
    while (e - h >= 2 && w[h].cancels(w[e - 1])) {
      ++h;
      --e;
    }
    std::vector<Letter> buf;
    buf.reserve(w.size() + 64);
    for (std::size_t pos = h; pos < e; ++pos)
      for (const auto& [rho, ref] : list_) {
        if (depth == 2 && !may_finish(w, pos, rho.letters())) continue;
        buf.assign(w.begin(), w.begin() + pos);
        for (Letter l : rho.letters()) push_reduced(buf, l);
        for (std::size_t k = pos; k < w.size(); ++k) push_reduced(buf, w[k]);
        if (buf.size() > max_len) continue;
        Insertion s = ref;
        s.position = pos;
        cert.push_back(s);
        if (search(buf, depth - 1, max_len, cert)) return true;
        cert.pop_back();
      }
    return false;
  }

  Presentation pres_;
  RowLattice lattice_{IntMatrix{}};
  std::unordered_map<Word, Insertion, WordHash> table_;
  std::vector<std::pair<Word, Insertion>> list_;
  std::vector<bool> len_ok_;
};

inline EqualityVerdict equal_mod_relators(const Word& u, const Word& v, const Presentation& pres,
                                          const EqualityBudget& budget = {}) {
  return RelatorSearch(pres).decide(u, v, budget);
}

inline std::string to_string(EqualityVerdict::Kind k) {
  switch (k) {
    case EqualityVerdict::Kind::Equal: return "Equal";
    case EqualityVerdict::Kind::NotEqual: return "NotEqual";
    default: return "Unknown";
  }
}

}  // namespace laminar
