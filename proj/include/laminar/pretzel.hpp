#pragma once

#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "laminar/words.hpp"

namespace laminar {

struct SurgerySlope {
  long p = 0;
  long q = 1;
};

inline std::string to_string(const SurgerySlope& s) { return std::to_string(s.p) + "/" + std::to_string(s.q); }

struct SurgeryPresentation {
  SurgerySlope slope;
  Presentation pres;  // over "abk": R1, R2, R3
  Word m, l;          // over "ab"
  long bezout_x = 0, bezout_y = 0;  // x q - y p = 1, k = m^x l^y
  long k_exponent() const { return slope.p - 18 * slope.q; }
};

inline const char* kR1Text = "a^2 b a^2 b^2 A b^2";

inline std::pair<Word, Word> peripheral_words() {
  Word m = parse_word("A B^2", "ab");
  Word l = parse_word("a B a^2", "ab") * power(m, -18);
  return {m, l};
}

inline void check_slope(const SurgerySlope& s) {
  if (s.q < 1) throw Error("InvalidSlope", "q must be positive, got q = " + std::to_string(s.q));
  if (std::gcd(s.p, s.q) != 1)
    throw Error("InvalidSlope", "p and q must be coprime, got " + to_string(s));
  if (s.p == 18 * s.q)
    throw Error("DegenerateSlope", "p - 18q = 0: slope 18/1 is the degeneracy slope and the k-relation degenerates");
}

// Smallest x >= 0 with x q - y p = 1.
inline std::pair<long, long> bezout_pair(long p, long q) {
  long ap = std::labs(p);
  if (ap == 0) return {1, 0};
  // extended Euclid for q^-1 mod |p|
  long r0 = ap, r1 = ((q % ap) + ap) % ap, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long t = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - t * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - t * s1);
  }
  long x = ((s0 % ap) + ap) % ap;
  if (ap == 1) x = 0;
  long y = (x * q - 1) / p;
  return {x, y};
}

inline SurgeryPresentation build_presentation(const SurgerySlope& s) {
  check_slope(s);
  SurgeryPresentation out;
  out.slope = s;
  auto [m, l] = peripheral_words();
  out.m = m;
  out.l = l;
  std::tie(out.bezout_x, out.bezout_y) = bezout_pair(s.p, s.q);
  const Alphabet abk = "abk";
  Word k = Word::gen('k');
  out.pres.alphabet = abk;
  out.pres.relators = {parse_word(kR1Text, abk), power(k, s.q) * parse_word("b^2 a", abk),
                       power(k, s.p - 18 * s.q) * parse_word("a B a^2", abk)};
  out.pres.validate();
  return out;
}

// Canonical presentation file; its SHA-256 is the certificate digest.
inline std::string presentation_file(const SurgeryPresentation& sp) {
  std::ostringstream os;
  os << "gens: a b k\n";
  for (const Word& r : sp.pres.relators) os << "rel: " << format_word(r) << "\n";
  os << "meta: p=" << sp.slope.p << " q=" << sp.slope.q << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

enum class CheckVerdict { Pass, Fail, Unknown };

inline std::string to_string(CheckVerdict v) {
  return v == CheckVerdict::Pass ? "Pass" : v == CheckVerdict::Fail ? "Fail" : "Unknown";
}

struct IdentityCheck {
  std::string name;
  CheckVerdict verdict = CheckVerdict::Unknown;
  std::string detail;
  std::vector<std::string> certificate;  // replayed insertions, one line each
  std::size_t depth = 0;                 // relator insertions used
};

struct IdentityReport {
  SurgerySlope slope;
  std::vector<IdentityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (c.verdict != CheckVerdict::Pass) return false;
    return !checks.empty();
  }
};

namespace detail {

inline std::string describe(const Presentation& pres, const Insertion& s) {
  std::ostringstream os;
  os << "insert at " << s.position << ": ";
  if (!s.conjugator.empty()) os << "(" << format_word(s.conjugator) << ") ";
  os << format_word(relator_variant(pres, s)) << "  [rel " << (s.relator + 1) << (s.inverted ? "^-1" : "")
     << ", rotation " << s.rotation << "]";
  if (!s.conjugator.empty()) os << " (" << format_word(s.conjugator.inverse()) << ")";
  return os.str();
}

// Folds an equality verdict into a check; Pass requires a replayed certificate.
inline void record(IdentityCheck& c, const Word& u, const Word& v, const Presentation& pres,
                   const EqualityVerdict& ev) {
  if (ev.kind == EqualityVerdict::Kind::Equal && replay_equality(u, v, pres, ev.certificate)) {
    for (const auto& s : ev.certificate) c.certificate.push_back(describe(pres, s));
    c.depth += ev.depth();
    return;
  }
  std::ostringstream os;
  os << format_word(u) << " = " << format_word(v) << ": " << to_string(ev.kind);
  if (!c.detail.empty()) c.detail += "; ";
  c.detail += os.str();
  c.verdict = ev.kind == EqualityVerdict::Kind::NotEqual ? CheckVerdict::Fail
              : c.verdict == CheckVerdict::Fail          ? CheckVerdict::Fail
                                                         : CheckVerdict::Unknown;
}

inline Presentation only(const SurgeryPresentation& sp, std::size_t i) {
  return Presentation{sp.pres.alphabet, {sp.pres.relators.at(i)}};
}

}  // namespace detail

inline IdentityReport verify_identities(const SurgeryPresentation& sp, const EqualityBudget& budget = {}) {
  IdentityReport rep;
  rep.slope = sp.slope;
  const Alphabet abk = "abk";
  const long p = sp.slope.p, q = sp.slope.q, e = sp.k_exponent();
  Word k = Word::gen('k');

  {
    IdentityCheck c{"(i) knot relator"};
    const Word& r1 = sp.pres.relators.at(0);
    bool ok = is_cyclically_reduced(r1) && r1 == parse_word(kR1Text, abk);
    c.verdict = ok ? CheckVerdict::Pass : CheckVerdict::Fail;
    c.detail = "R1 = " + format_word(r1) + (ok ? "" : ", expected " + std::string(kR1Text));
    rep.checks.push_back(c);
  }
  {
    IdentityCheck c{"(ii) k-relation from the longitude"};
    c.verdict = CheckVerdict::Pass;
    // m = k^q is exactly R2
    detail::record(c, power(k, q), parse_word("A B^2", abk), detail::only(sp, 1),
                   equal_mod_relators(power(k, q), parse_word("A B^2", abk), detail::only(sp, 1), budget));
    // l (a B a^2 m^-18)^-1 with m -> k^q, l -> k^-p
    Word lm = parse_word("l m^18 A^2 b A", "lmab");
    Word w = substitute(lm, {{'l', power(k, -p)}, {'m', power(k, q)}, {'a', Word::gen('a')}, {'b', Word::gen('b')}});
    detail::record(c, w, Word(), detail::only(sp, 2), equal_mod_relators(w, Word(), detail::only(sp, 2), budget));
    if (c.verdict == CheckVerdict::Pass)
      c.detail = format_word(power(k, e)) + " = A^2 b A follows from " + format_word(w) + " = 1";
    rep.checks.push_back(c);
  }
  {
    IdentityCheck c{"(iii) main identity"};
    c.verdict = CheckVerdict::Pass;
    Word lhs = parse_word("a^3", abk) * parse_word("A^2 b A", abk) * parse_word("a^3", abk);
    Word aba2 = parse_word("a b a^2", abk);
    Word rhs = parse_word("A B^2 a B^2", abk);
    Word m = parse_word("A B^2", abk);
    if (lhs != aba2) {
      c.verdict = CheckVerdict::Fail;
      c.detail = "a^3 (A^2 b A) a^3 reduces to " + format_word(lhs);
    }
    detail::record(c, aba2, rhs, detail::only(sp, 0), equal_mod_relators(aba2, rhs, detail::only(sp, 0), budget));
    if (m * parse_word("a^2", abk) * m != rhs) {
      c.verdict = CheckVerdict::Fail;
      c.detail += "; m a^2 m does not reduce to A B^2 a B^2";
    }
    if (c.verdict == CheckVerdict::Pass)
      c.detail = "a^3 (A^2 b A) a^3 = a b a^2 =_G A B^2 a B^2 = m a^2 m, depth " + std::to_string(c.depth);
    rep.checks.push_back(c);
  }
  {
    IdentityCheck c{"(iv) {a, k} generates"};
    c.verdict = CheckVerdict::Pass;
    Word w = parse_word("a^2", abk) * power(k, e) * Word::gen('a');
    Word b = Word::gen('b');
    detail::record(c, w, b, detail::only(sp, 2), equal_mod_relators(w, b, detail::only(sp, 2), budget));
    if (c.verdict == CheckVerdict::Pass) c.detail = "b = " + format_word(w);
    rep.checks.push_back(c);
  }
  return rep;
}

inline IdentityReport verify_identities(const SurgerySlope& s, const EqualityBudget& budget = {}) {
  return verify_identities(build_presentation(s), budget);
}

// (m^x l^y)^q abelianizes to m modulo R1 and the surgery relation.
inline bool bezout_consistent(const SurgeryPresentation& sp) {
  const Alphabet ab = "ab";
  Word k = power(sp.m, sp.bezout_x) * power(sp.l, sp.bezout_y);
  auto v = abelianize(power(k, sp.slope.q), ab);
  auto m = abelianize(sp.m, ab);
  IntMatrix lat{2, {}};
  auto r1 = abelianize(parse_word(kR1Text, ab), ab);
  lat.rows.push_back({r1[0], r1[1]});
  lat.rows.push_back({sp.slope.p * m[0] + sp.slope.q * abelianize(sp.l, ab)[0],
                      sp.slope.p * m[1] + sp.slope.q * abelianize(sp.l, ab)[1]});
  return in_row_lattice(lat, {BigInt(v[0] - m[0]), BigInt(v[1] - m[1])});
}

// ---------------------------------------------------------------------------

struct HomologyVerdict {
  bool orientation_forced = false;
  std::string reason;
  InvariantFactors h1;
  bool excluded_slope = false;  // 37/2
};

inline IntMatrix surgered_matrix(const SurgerySlope& s) {
  const Alphabet ab = "ab";
  auto [m, l] = peripheral_words();
  Presentation pres{ab, {parse_word(kR1Text, ab), power(m, s.p) * power(l, s.q)}};
  return relation_matrix(pres);
}

inline HomologyVerdict homology_check(const SurgerySlope& s) {
  HomologyVerdict out;
  out.h1 = invariant_factors(surgered_matrix(s));
  out.excluded_slope = s.p == 37 && s.q == 2;
  const BigInt ap = std::labs(s.p);
  bool cyclic_p = out.h1.free_rank == 0 && out.h1.factors.size() == 2 && out.h1.factors[0] == 1 &&
                  out.h1.factors[1] == ap;
  std::ostringstream h;
  h << "H1 = ";
  if (out.h1.free_rank) h << "Z^" << out.h1.free_rank << (out.h1.factors.empty() ? "" : " + ");
  bool first = true;
  for (const auto& f : out.h1.factors)
    if (f != 1) {
      h << (first ? "" : " + ") << "Z/" << f;
      first = false;
    }
  if (first && !out.h1.free_rank) h << "0";
  if (!cyclic_p) {
    out.reason = h.str() + " is not Z/|p|";
  } else if (s.p % 2 == 0) {
    out.reason = h.str() + ", p is even: an index 2 subgroup exists, so p is odd fails";
  } else {
    out.orientation_forced = true;
    out.reason = h.str() + ", p odd: no index 2 subgroup, actions preserve orientation";
  }
  if (out.excluded_slope) out.reason += " (37/2 is the excluded slope)";
  return out;
}

struct SlopeMetadata {
  std::vector<SurgerySlope> boundary_slopes{{0, 1}, {16, 1}, {37, 2}, {20, 1}};
  std::vector<SurgerySlope> cyclic_slopes{{18, 1}, {19, 1}};
  std::vector<SurgerySlope> finite_slopes{{17, 1}};
  SurgerySlope degeneracy_slope{18, 1};
  SurgerySlope excluded_slope{37, 2};
};

inline const SlopeMetadata& slope_metadata() {
  static const SlopeMetadata md;
  return md;
}

inline std::vector<std::string> slope_warnings(const SurgerySlope& s) {
  const auto& md = slope_metadata();
  auto in = [&](const std::vector<SurgerySlope>& v) {
    for (const auto& t : v)
      if (t.p == s.p && t.q == s.q) return true;
    return false;
  };
  std::vector<std::string> out;
  if (in(md.boundary_slopes)) out.push_back("boundary slope (toroidal or otherwise special filling)");
  if (in(md.cyclic_slopes)) out.push_back("cyclic surgery slope");
  if (in(md.finite_slopes)) out.push_back("finite fundamental group (Seifert fibered filling)");
  if (s.p == md.excluded_slope.p && s.q == md.excluded_slope.q) out.push_back("excluded slope 37/2");
  if (s.p < 10 * s.q) out.push_back("p/q < 10: outside the range covered by the line argument");
  return out;
}

}  // namespace laminar
