#pragma once

// Saturation over normalized order facts.
//
//   P  Universal 1 < w   positive cone, conjugation invariant, key = cyclic canonical form
//   Q  Pointwise 1 < w   x < xw at the basepoint, key = reduced word
//   S  Pointwise 1 = w   stabilizer of the basepoint, key = min(w, w^-1)
//   N  Universal 1 = w   acts trivially, key = cyclic canonical form of w or w^-1
//
// Universal u < v is stored as P(u^-1 v), Pointwise u < v as Q(v u^-1).

#include <array>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "laminar/orderfact.hpp"
#include "laminar/tokword.hpp"

namespace laminar {

enum class ConeKind : std::uint8_t { P, Q, S, N };

struct ProverBudget {
  std::size_t max_length = 24;  // tokens; a power block counts 1
  std::size_t max_facts = 1'000'000;
  std::size_t max_splits = 64;
};

// Sign information for exponents. A symbolic exponent c0 + c1 p + c2 q is
// judged on the real region q >= 1, p >= (c_num / c_den) q.
struct ExponentDomain {
  long emax = 0;  // concrete cap on |exponent|
  long c_num = 0, c_den = 1;
  Affine cap{1, 1, 24};  // symbolic cap on |c0|, |c1|, |c2|

  bool nonpos(long e) const { return e <= 0; }
  bool at_least_one(long e) const { return e >= 1; }
  bool within(long e) const { return std::labs(e) <= emax; }

  bool nonpos(const Affine& f) const {
    return f.c1 <= 0 && f.c1 * c_num + f.c2 * c_den <= 0 && f.c0 * c_den + f.c1 * c_num + f.c2 * c_den <= 0;
  }
  bool at_least_one(const Affine& f) const { return nonpos(Affine::constant(1) - f); }
  // symbolic blocks carry no constant part; k^(+-1) is the only constant block
  bool within(const Affine& f) const {
    if (f.c0 != 0 && !f.is_constant()) return false;
    return std::labs(f.c0) <= cap.c0 && std::labs(f.c1) <= cap.c1 && std::labs(f.c2) <= cap.c2;
  }
};

template <class Exp>
struct ProverPresentation {
  Alphabet alphabet = "abk";
  char power_gen = 'k';
  std::vector<TokWord<Exp>> relators;
  std::string file;  // canonical presentation file
  ExponentDomain domain;
};

struct Variant {
  std::size_t relator = 0;
  bool inverted = false;
  std::size_t rotation = 0;
};

template <class Exp>
struct Deriv {
  RuleId rule = RuleId::Hypothesis;
  std::int32_t prem[2] = {-1, -1};
  std::int32_t rot[2] = {0, 0};
  std::int32_t pos = -1;
  std::int32_t variant = -1;
  long power = 0;
  std::uint8_t invert = 0;  // bit 0: first operand, bit 1: second operand
  bool strip = false;       // Transitivity through a stabilized power generator
  bool repeat = false;      // ProductCone of k^s with itself, f/s times
  Exp exponent{};           // target exponent f of a repeated product
};

template <class Exp>
struct KeyFact {
  ConeKind kind = ConeKind::P;
  TokWord<Exp> w;
  friend bool operator==(const KeyFact&, const KeyFact&) = default;
};

template <class Exp>
std::string format_keyfact(const KeyFact<Exp>& f, char power_gen = 'k') {
  static const char* head[] = {"Universal: 1 < ", "Pointwise: 1 < ", "Pointwise: 1 = ", "Universal: 1 = "};
  return head[static_cast<int>(f.kind)] + format_tokword(f.w, power_gen);
}

template <class Exp>
KeyFact<Exp> parse_keyfact(const std::string& s, const Alphabet& alphabet, char power_gen = 'k') {
  static const char* head[] = {"Universal: 1 < ", "Pointwise: 1 < ", "Pointwise: 1 = ", "Universal: 1 = "};
  for (int k = 0; k < 4; ++k) {
    std::string h = head[k];
    if (s.rfind(h, 0) == 0)
      return {static_cast<ConeKind>(k), parse_tokword<Exp>(std::string_view(s).substr(h.size()), alphabet, power_gen)};
  }
  throw Error("MalformedCertificate", "cannot parse fact '" + s + "'");
}

// Shared step semantics for the engine and the certificate checker.
template <class Exp>
class ConeCalculus {
 public:
  using W = TokWord<Exp>;
  using F = KeyFact<Exp>;

  explicit ConeCalculus(const ProverPresentation<Exp>& pp) : pp_(pp), ops_{pp.power_gen} {
    for (std::size_t r = 0; r < pp.relators.size(); ++r)
      for (bool inv : {false, true}) {
        W base = inv ? ops_.inverse(pp.relators[r]) : pp.relators[r];
        for (std::size_t i = 0; i < base.size(); ++i) {
          variants_.push_back({r, inv, i});
          variant_words_.push_back(TokOps<Exp>::rotate(base, i));
        }
      }
  }

  const TokOps<Exp>& ops() const { return ops_; }
  const ProverPresentation<Exp>& presentation() const { return pp_; }
  const std::vector<Variant>& variants() const { return variants_; }
  const W& variant_word(std::size_t i) const { return variant_words_.at(i); }

  F normalize(ConeKind k, const W& w) const {
    switch (k) {
      case ConeKind::P: return {k, ops_.cyclic_canonical(w)};
      case ConeKind::Q: return {k, ops_.reduce(w)};
      case ConeKind::S: {
        W r = ops_.reduce(w), ri = ops_.inverse(r);
        return {k, std::min(r, ri)};
      }
      case ConeKind::N: {
        W r = ops_.cyclic_canonical(w), ri = ops_.cyclic_canonical(ops_.inverse(w));
        return {k, std::min(r, ri)};
      }
    }
    return {k, w};
  }

  F dual(const F& f) const {
    if (f.kind == ConeKind::P || f.kind == ConeKind::Q) return normalize(f.kind, ops_.inverse(f.w));
    return f;
  }

  bool unit_power(const W& w) const { return w.size() == 1 && w[0].g == pp_.power_gen && ExpOps<Exp>::unit(w[0].e); }
  bool single_power(const W& w) const { return w.size() == 1 && w[0].g == pp_.power_gen; }

  // The composing word of a step, as it appears in certificates.
  std::optional<W> operand(const Deriv<Exp>& d, const F* a, const F* b) const {
    switch (d.rule) {
      case RuleId::RelatorRewrite: return variant_word(static_cast<std::size_t>(d.variant));
      case RuleId::Instantiate: return TokOps<Exp>::rotate(a->w, static_cast<std::size_t>(d.rot[0]));
      case RuleId::ProductCone:
        if (d.repeat) return W{Tok<Exp>{pp_.power_gen, d.exponent}};
        return TokOps<Exp>::rotate(b->w, static_cast<std::size_t>(d.rot[1]));
      case RuleId::Transitivity:
        if (d.strip) return a->w;
        return (d.invert & 2) ? ops_.inverse(b->w) : b->w;
      default: return W{};
    }
  }

  // Result of a step before normalization, or nullopt with a reason.
  std::optional<F> apply(const Deriv<Exp>& d, const F* a, const F* b, Mode mode, std::string* why = nullptr) const {
    auto fail = [&](const std::string& m) -> std::optional<F> {
      if (why) *why = m;
      return std::nullopt;
    };
    auto rot_ok = [](const F* f, std::int32_t r) {
      return r >= 0 && (static_cast<std::size_t>(r) < f->w.size() || (r == 0 && f->w.empty()));
    };
    switch (d.rule) {
      case RuleId::RelatorRewrite: {
        if (!a) return fail("missing premise");
        if (d.variant < 0 || static_cast<std::size_t>(d.variant) >= variants_.size()) return fail("bad variant");
        const W& v = variant_word(static_cast<std::size_t>(d.variant));
        if (a->kind == ConeKind::P || a->kind == ConeKind::N) {
          if (!rot_ok(a, d.rot[0])) return fail("bad rotation");
          return F{a->kind, ops_.concat(TokOps<Exp>::rotate(a->w, static_cast<std::size_t>(d.rot[0])), v)};
        }
        if (d.pos < 0 || static_cast<std::size_t>(d.pos) > a->w.size()) return fail("bad position");
        return F{a->kind, ops_.insert(a->w, static_cast<std::size_t>(d.pos), v)};
      }
      case RuleId::Instantiate: {
        if (!a || !(a->kind == ConeKind::P || a->kind == ConeKind::N)) return fail("Instantiate needs a Universal fact");
        if (!rot_ok(a, d.rot[0])) return fail("bad rotation");
        ConeKind k = a->kind == ConeKind::P ? ConeKind::Q : ConeKind::S;
        return F{k, TokOps<Exp>::rotate(a->w, static_cast<std::size_t>(d.rot[0]))};
      }
      case RuleId::ProductCone: {
        if (d.repeat) {
          // 1 < k^s with s = +-1 gives 1 < k^f whenever f / s >= 1
          if (!a || a->kind != ConeKind::P || !unit_power(a->w)) return fail("repeated ProductCone needs 1 < k^(+-1)");
          Exp f = *ExpOps<Exp>::as_constant(a->w[0].e) > 0 ? d.exponent : -d.exponent;
          if (!pp_.domain.at_least_one(f)) return fail("exponent not provably a positive multiple");
          return F{ConeKind::P, W{Tok<Exp>{pp_.power_gen, d.exponent}}};
        }
        if (!a || !b || b->kind != ConeKind::P) return fail("ProductCone needs a positive cone premise");
        if (!rot_ok(b, d.rot[1])) return fail("bad rotation");
        W rb = TokOps<Exp>::rotate(b->w, static_cast<std::size_t>(d.rot[1]));
        if (a->kind == ConeKind::P) {
          if (!rot_ok(a, d.rot[0])) return fail("bad rotation");
          return F{ConeKind::P, ops_.concat(TokOps<Exp>::rotate(a->w, static_cast<std::size_t>(d.rot[0])), rb)};
        }
        if (a->kind != ConeKind::Q) return fail("ProductCone inserts into a Pointwise < fact");
        if (d.pos < 0 || static_cast<std::size_t>(d.pos) > a->w.size()) return fail("bad position");
        return F{ConeKind::Q, ops_.insert(a->w, static_cast<std::size_t>(d.pos), rb)};
      }
      case RuleId::Transitivity: {
        if (!a || !b) return fail("missing premise");
        auto pointwise = [](const F* f) { return f->kind == ConeKind::Q || f->kind == ConeKind::S; };
        if (!pointwise(a) || !pointwise(b)) return fail("Transitivity chains Pointwise facts");
        if (d.strip) {
          // x = x k implies x = x k^e for every e
          if (a->kind != ConeKind::S || !unit_power(a->w)) return fail("strip needs Pointwise 1 = k");
          if (b->w.empty()) return fail("nothing to strip");
          const auto& t = d.pos == 0 ? b->w.front() : b->w.back();
          if (t.g != pp_.power_gen) return fail("strip end is not a power block");
          W out = d.pos == 0 ? W(b->w.begin() + 1, b->w.end()) : W(b->w.begin(), b->w.end() - 1);
          return F{b->kind, out};
        }
        if (((d.invert & 1) && a->kind != ConeKind::S) || ((d.invert & 2) && b->kind != ConeKind::S))
          return fail("only stabilizer facts may be inverted");
        W x = (d.invert & 1) ? ops_.inverse(a->w) : a->w;
        W y = (d.invert & 2) ? ops_.inverse(b->w) : b->w;
        ConeKind k = a->kind == ConeKind::S && b->kind == ConeKind::S ? ConeKind::S : ConeKind::Q;
        return F{k, ops_.concat(x, y)};
      }
      case RuleId::RootExtract: {
        if (mode != Mode::Linear) return fail("RootExtract is disabled in Poset mode");
        if (!a || a->kind != ConeKind::P) return fail("RootExtract needs Universal 1 < w");
        if (d.power < 2) return fail("root exponent must be at least 2");
        if (single_power(a->w)) {
          auto c = ExpOps<Exp>::as_constant(a->w[0].e);
          if (!c || std::labs(*c) != d.power) return fail("power block exponent mismatch");
          return F{ConeKind::P, W{Tok<Exp>{pp_.power_gen, ExpOps<Exp>::constant(*c < 0 ? -1 : 1)}}};
        }
        std::size_t n = static_cast<std::size_t>(d.power);
        if (a->w.size() % n != 0) return fail("not an exact power");
        std::size_t m = a->w.size() / n;
        for (std::size_t i = m; i < a->w.size(); ++i)
          if (a->w[i] != a->w[i - m]) return fail("not an exact power");
        return F{ConeKind::P, W(a->w.begin(), a->w.begin() + m)};
      }
      case RuleId::ExponentCompare: {
        if (!a || !b || a->kind != ConeKind::P || b->kind != ConeKind::P) return fail("ExponentCompare needs two cone facts");
        if (!single_power(a->w) || !single_power(b->w)) return fail("ExponentCompare needs power blocks");
        const auto& D = pp_.domain;
        if (!D.at_least_one(a->w[0].e)) return fail("first exponent not provably >= 1");
        if (!D.nonpos(b->w[0].e)) return fail("second exponent not provably <= 0");
        return F{ConeKind::P, W{}};
      }
      default: return fail(to_string(d.rule) + " does not act on cone facts");
    }
  }

  bool contradiction(const F& f) const { return (f.kind == ConeKind::P || f.kind == ConeKind::Q) && f.w.empty(); }

  bool within(const W& w, std::size_t max_length) const {
    if (w.size() > max_length) return false;
    for (const auto& t : w)
      if (t.g == pp_.power_gen && !pp_.domain.within(t.e)) return false;
    return true;
  }

 private:
  ProverPresentation<Exp> pp_;
  TokOps<Exp> ops_;
  std::vector<Variant> variants_;
  std::vector<W> variant_words_;
};

// Given-clause saturation. Facts are processed shortest first, ties by
// creation order, so runs are deterministic.
template <class Exp>
class ConeEngine {
 public:
  using W = TokWord<Exp>;
  using F = KeyFact<Exp>;
  using D = Deriv<Exp>;

  enum class Outcome { Contradiction, Reached, Saturated, Exhausted };

  struct Record {
    F fact;
    D deriv;
  };

  ConeEngine(const ConeCalculus<Exp>& calc, Mode mode, ProverBudget budget)
      : calc_(calc), ops_(calc.ops()), mode_(mode), budget_(budget), index_(16, Hash{this}, Eq{this}) {
    for (std::size_t v = 0; v < calc_.variants().size(); ++v) {
      const W& w = calc_.variant_word(v);
      vfront_[key(w.front())].push_back(static_cast<std::uint32_t>(v));
      vback_[key(w.back())].push_back(static_cast<std::uint32_t>(v));
    }
    for (const auto& r : calc_.presentation().relators)
      for (const auto& t : r)
        if (t.g == calc_.presentation().power_gen)
          for (const Exp& f : {t.e, -t.e})
            if (std::find(relator_exponents_.begin(), relator_exponents_.end(), f) == relator_exponents_.end())
              relator_exponents_.push_back(f);
  }

  // Returns the index of the seed fact.
  std::size_t add_seed(ConeKind k, const W& w) {
    F f = calc_.normalize(k, w);
    if (f.kind == ConeKind::Q || f.kind == ConeKind::S) pointwise_ = true;
    D d;
    d.rule = RuleId::Hypothesis;
    std::size_t i = add(f, d, /*check_budget=*/false);
    if (i != npos) seeds_.push_back(i);
    return i;
  }

  void add_goal(ConeKind k, const W& w) { goals_.push_back(calc_.normalize(k, w)); }

  Outcome run() {
    if (done_) return outcome_;
    while (!queue_.empty() && !done_) {
      auto [len, gi] = queue_.top();
      queue_.pop();
      (void)len;
      process(gi);
      ++given_;
    }
    if (!done_) finish(Outcome::Saturated, npos);
    return outcome_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Outcome outcome() const { return outcome_; }
  std::size_t final_fact() const { return final_; }
  const std::vector<Record>& records() const { return facts_; }
  const std::vector<std::size_t>& seeds() const { return seeds_; }
  std::size_t given_count() const { return given_; }
  const std::vector<std::size_t>& goal_hits() const { return goal_hits_; }
  std::optional<std::size_t> find(const F& f) const {
    auto it = lookup(calc_.normalize(f.kind, f.w));
    if (it == npos) return std::nullopt;
    return it;
  }

  // Indices needed to justify `targets`, in creation order.
  std::vector<std::size_t> ancestry(const std::vector<std::size_t>& targets) const {
    std::vector<char> need(facts_.size(), 0);
    std::vector<std::size_t> stack(targets.begin(), targets.end());
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      if (need[i]) continue;
      need[i] = 1;
      for (auto p : facts_[i].deriv.prem)
        if (p >= 0) stack.push_back(static_cast<std::size_t>(p));
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < facts_.size(); ++i)
      if (need[i]) out.push_back(i);
    return out;
  }

 private:
  struct Hash {
    const ConeEngine* e;
    std::size_t operator()(std::uint32_t i) const {
      const F& f = e->probe(i);
      return TokWordHash<Exp>{}(f.w) * 4 + static_cast<std::size_t>(f.kind);
    }
  };
  struct Eq {
    const ConeEngine* e;
    bool operator()(std::uint32_t i, std::uint32_t j) const { return e->probe(i) == e->probe(j); }
  };
  static constexpr std::uint32_t kProbe = 0xffffffffu;

  const F& probe(std::uint32_t i) const { return i == kProbe ? probe_ : facts_[i].fact; }

  std::size_t lookup(const F& f) const {
    probe_ = f;
    auto it = index_.find(kProbe);
    return it == index_.end() ? npos : *it;
  }

  // Index key of a token; every power block shares one key.
  int key(const Tok<Exp>& t) const {
    int g = static_cast<unsigned char>(t.g);
    if (t.g == calc_.presentation().power_gen) return g * 3;
    return g * 3 + (ExpOps<Exp>::as_constant(t.e).value_or(1) > 0 ? 1 : 2);
  }
  // Key of the tokens that merge with t.
  int want(const Tok<Exp>& t) const {
    int g = static_cast<unsigned char>(t.g);
    if (t.g == calc_.presentation().power_gen) return g * 3;
    return g * 3 + (ExpOps<Exp>::as_constant(t.e).value_or(1) > 0 ? 2 : 1);
  }

  void finish(Outcome o, std::size_t fact) {
    done_ = true;
    outcome_ = o;
    final_ = fact;
  }

  std::size_t add(const F& f, const D& d, bool check_budget = true) {
    if (done_) return npos;
    if ((f.kind == ConeKind::S || f.kind == ConeKind::N) && f.w.empty()) return npos;
    if (check_budget && !calc_.within(f.w, budget_.max_length)) return npos;
    if (auto j = lookup(f); j != npos) return j;
    std::uint32_t i = static_cast<std::uint32_t>(facts_.size());
    facts_.push_back({f, d});
    index_.insert(i);
    if (calc_.contradiction(f)) {
      finish(Outcome::Contradiction, i);
      return i;
    }
    if (!goals_.empty()) {
      for (std::size_t g = 0; g < goals_.size(); ++g)
        if (goals_[g] == f) goal_hits_.push_back(i);
      if (goal_hits_.size() == goals_.size()) {
        finish(Outcome::Reached, i);
        return i;
      }
    }
    queue_.push({f.w.size(), i});
    if (check_budget && facts_.size() >= budget_.max_facts) finish(Outcome::Exhausted, npos);
    return i;
  }

  void emit(const D& d) {
    const F* a = d.prem[0] >= 0 ? &facts_[static_cast<std::size_t>(d.prem[0])].fact : nullptr;
    const F* b = d.prem[1] >= 0 ? &facts_[static_cast<std::size_t>(d.prem[1])].fact : nullptr;
    auto r = calc_.apply(d, a, b, mode_);
    if (!r) return;
    add(calc_.normalize(r->kind, r->w), d);
  }

  bool merges(const Tok<Exp>& x, const Tok<Exp>& y) const { return ops_.merges(x, y); }

  void process(std::uint32_t gi) {
    const ConeKind kind = facts_[gi].fact.kind;
    switch (kind) {
      case ConeKind::P: process_p(gi); break;
      case ConeKind::Q: process_q(gi); break;
      case ConeKind::S: process_s(gi); break;
      case ConeKind::N: process_n(gi); break;
    }
  }

  D make(RuleId r, std::int64_t a, std::int64_t b = -1) {
    D d;
    d.rule = r;
    d.prem[0] = static_cast<std::int32_t>(a);
    d.prem[1] = static_cast<std::int32_t>(b);
    return d;
  }

  void process_p(std::uint32_t gi) {
    const W w = facts_[gi].fact.w;  // copy: facts_ grows below
    const std::size_t n = w.size();
    for (std::size_t r = 0; r < n; ++r) {
      const auto& fr = w[r];
      const auto& bk = w[(r + n - 1) % n];
      pfront_[key(fr)].push_back({gi, static_cast<std::uint32_t>(r)});
      pback_[key(bk)].push_back({gi, static_cast<std::uint32_t>(r)});
    }
    active_p_.push_back(gi);

    if (mode_ == Mode::Linear) {
      if (calc_.single_power(w)) {
        auto c = ExpOps<Exp>::as_constant(w[0].e);
        if (c && std::labs(*c) >= 2) {
          D d = make(RuleId::RootExtract, gi);
          d.power = std::labs(*c);
          emit(d);
        }
      } else {
        for (std::size_t m = 1; m < n; ++m) {
          if (n % m) continue;
          bool periodic = true;
          for (std::size_t i = m; i < n && periodic; ++i) periodic = w[i] == w[i - m];
          if (periodic) {
            D d = make(RuleId::RootExtract, gi);
            d.power = static_cast<long>(n / m);
            emit(d);
          }
        }
      }
    }
    if (calc_.unit_power(w)) {
      for (const auto& f : relator_exponents_) {
        D d = make(RuleId::ProductCone, gi);
        d.repeat = true;
        d.exponent = f;
        emit(d);
      }
    }
    if (calc_.single_power(w)) {
      for (auto j : kappa_p_) {
        emit(make(RuleId::ExponentCompare, gi, j));
        emit(make(RuleId::ExponentCompare, j, gi));
      }
      kappa_p_.push_back(gi);
    }
    for (std::size_t r = 0; r < n && !done_; ++r) {
      const auto& last = w[(r + n - 1) % n];
      const auto& first = w[r];
      for (auto v : vfront_[want(last)]) {
        D d = make(RuleId::RelatorRewrite, gi);
        d.rot[0] = static_cast<std::int32_t>(r);
        d.variant = static_cast<std::int32_t>(v);
        emit(d);
      }
      auto fwd = pfront_[want(last)];
      for (auto [j, rj] : fwd) {
        D d = make(RuleId::ProductCone, gi, j);
        d.rot[0] = static_cast<std::int32_t>(r);
        d.rot[1] = static_cast<std::int32_t>(rj);
        emit(d);
      }
      auto bwd = pback_[want(first)];
      for (auto [j, rj] : bwd) {
        D d = make(RuleId::ProductCone, j, gi);
        d.rot[0] = static_cast<std::int32_t>(rj);
        d.rot[1] = static_cast<std::int32_t>(r);
        emit(d);
      }
    }
    if (!pointwise_) return;
    for (std::size_t r = 0; r < std::max<std::size_t>(n, 1) && !done_; ++r) {
      D d = make(RuleId::Instantiate, gi);
      d.rot[0] = static_cast<std::int32_t>(r);
      emit(d);
    }
    auto qs = active_q_;
    for (auto qi : qs) insert_p_into_q(qi, gi);
  }

  // Inserts rotations of cone fact pi into Pointwise fact qi where a junction merges.
  void insert_p_into_q(std::uint32_t qi, std::uint32_t pi) {
    const W q = facts_[qi].fact.w;
    const W p = facts_[pi].fact.w;
    const std::size_t n = p.size();
    for (std::size_t pos = 0; pos <= q.size() && !done_; ++pos)
      for (std::size_t r = 0; r < n; ++r) {
        bool ok = (pos > 0 && merges(q[pos - 1], p[r])) || (pos < q.size() && merges(p[(r + n - 1) % n], q[pos]));
        if (!ok) continue;
        D d = make(RuleId::ProductCone, qi, pi);
        d.pos = static_cast<std::int32_t>(pos);
        d.rot[1] = static_cast<std::int32_t>(r);
        emit(d);
      }
  }

  void relator_insertions(std::uint32_t gi) {
    const W w = facts_[gi].fact.w;
    for (std::size_t pos = 0; pos <= w.size() && !done_; ++pos) {
      std::vector<std::uint32_t> vs;
      if (pos > 0) vs = vfront_[want(w[pos - 1])];
      if (pos < w.size())
        for (auto v : vback_[want(w[pos])]) vs.push_back(v);
      std::sort(vs.begin(), vs.end());
      vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
      for (auto v : vs) {
        D d = make(RuleId::RelatorRewrite, gi);
        d.pos = static_cast<std::int32_t>(pos);
        d.variant = static_cast<std::int32_t>(v);
        emit(d);
      }
    }
  }

  void strip(std::uint32_t si, std::uint32_t gi) {
    const W& w = facts_[gi].fact.w;
    if (w.empty()) return;
    const char pg = calc_.presentation().power_gen;
    bool front = w.front().g == pg, back = w.back().g == pg;
    if (front) {
      D d = make(RuleId::Transitivity, si, gi);
      d.strip = true;
      d.pos = 0;
      emit(d);
    }
    if (back && !done_) {
      D d = make(RuleId::Transitivity, si, gi);
      d.strip = true;
      d.pos = 1;
      emit(d);
    }
  }

  // Transitivity between pointwise facts i and j, in the order i then j.
  void chain(std::uint32_t i, std::uint32_t j) {
    const bool sa = facts_[i].fact.kind == ConeKind::S, sb = facts_[j].fact.kind == ConeKind::S;
    const Tok<Exp> af = facts_[i].fact.w.front(), ab = facts_[i].fact.w.back();
    const Tok<Exp> bf = facts_[j].fact.w.front(), bb = facts_[j].fact.w.back();
    for (std::uint8_t inv = 0; inv < 4 && !done_; ++inv) {
      if ((inv & 1) && !sa) continue;
      if ((inv & 2) && !sb) continue;
      const Tok<Exp> x = (inv & 1) ? Tok<Exp>{af.g, -af.e} : ab;
      const Tok<Exp> y = (inv & 2) ? Tok<Exp>{bb.g, -bb.e} : bf;
      if (!merges(x, y)) continue;
      D d = make(RuleId::Transitivity, i, j);
      d.invert = inv;
      emit(d);
    }
  }

  void process_q(std::uint32_t gi) {
    const W w = facts_[gi].fact.w;
    relator_insertions(gi);
    // cone rotations inserted at each position
    for (std::size_t pos = 0; pos <= w.size() && !done_; ++pos) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> cands;
      if (pos > 0) cands = pfront_[want(w[pos - 1])];
      if (pos < w.size())
        for (auto c : pback_[want(w[pos])]) cands.push_back(c);
      std::sort(cands.begin(), cands.end());
      cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
      for (auto [pi, r] : cands) {
        D d = make(RuleId::ProductCone, gi, pi);
        d.pos = static_cast<std::int32_t>(pos);
        d.rot[1] = static_cast<std::int32_t>(r);
        emit(d);
      }
    }
    qfront_[key(w.front())].push_back(gi);
    qback_[key(w.back())].push_back(gi);
    active_q_.push_back(gi);
    auto fw = qfront_[want(w.back())];
    for (auto j : fw) chain(gi, j);
    auto bw = qback_[want(w.front())];
    for (auto j : bw) chain(j, gi);
    auto ss = active_s_;
    for (auto s : ss) {
      chain(s, gi);
      chain(gi, s);
    }
    for (auto s : unit_s_) strip(s, gi);
  }

  void process_s(std::uint32_t gi) {
    const W w = facts_[gi].fact.w;
    relator_insertions(gi);
    active_s_.push_back(gi);
    auto ss = active_s_;
    for (auto s : ss) {
      chain(s, gi);
      if (s != gi) chain(gi, s);
    }
    // Q facts whose ends merge with w or w^-1
    for (const auto& t : {w.front(), w.back(), Tok<Exp>{w.front().g, -w.front().e}, Tok<Exp>{w.back().g, -w.back().e}}) {
      auto fw = qfront_[want(t)];
      for (auto j : fw) chain(gi, j);
      auto bw = qback_[want(t)];
      for (auto j : bw) chain(j, gi);
    }
    if (calc_.unit_power(w)) {
      unit_s_.push_back(gi);
      auto qs = active_q_;
      for (auto q : qs) strip(gi, q);
      for (auto s : ss) strip(gi, s);
    }
    for (auto s : unit_s_) strip(s, gi);
  }

  void process_n(std::uint32_t gi) {
    const W w = facts_[gi].fact.w;
    const std::size_t n = w.size();
    for (std::size_t r = 0; r < n && !done_; ++r) {
      D d = make(RuleId::Instantiate, gi);
      d.rot[0] = static_cast<std::int32_t>(r);
      emit(d);
      for (auto v : vfront_[want(w[(r + n - 1) % n])]) {
        D e = make(RuleId::RelatorRewrite, gi);
        e.rot[0] = static_cast<std::int32_t>(r);
        e.variant = static_cast<std::int32_t>(v);
        emit(e);
      }
    }
  }

  const ConeCalculus<Exp>& calc_;
  const TokOps<Exp>& ops_;
  Mode mode_;
  ProverBudget budget_;

  std::vector<Record> facts_;
  mutable F probe_;
  std::unordered_set<std::uint32_t, Hash, Eq> index_;
  using QEntry = std::pair<std::size_t, std::uint32_t>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue_;

  std::array<std::vector<std::uint32_t>, 768> vfront_{}, vback_{};
  std::array<std::vector<std::pair<std::uint32_t, std::uint32_t>>, 768> pfront_{}, pback_{};
  std::array<std::vector<std::uint32_t>, 768> qfront_{}, qback_{};
  std::vector<std::uint32_t> active_p_, active_q_, active_s_, unit_s_, kappa_p_;

  std::vector<Exp> relator_exponents_;
  std::vector<std::size_t> seeds_;
  std::vector<F> goals_;
  std::vector<std::size_t> goal_hits_;
  bool pointwise_ = false;
  bool done_ = false;
  Outcome outcome_ = Outcome::Saturated;
  std::size_t final_ = npos;
  std::size_t given_ = 0;
};

}  // namespace laminar
