#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laminar/error.hpp"
#include "laminar/pretzel.hpp"
#include "laminar/words.hpp"

namespace laminar {

enum class Scope { Pointwise, Universal };
enum class Rel { Less, Equal };
enum class Mode { Poset, Linear };

enum class RuleId {
  Hypothesis,
  RightCompose,
  LeftSubstitute,
  Transitivity,
  RelatorRewrite,
  Instantiate,
  ProductCone,
  RootExtract,
  TrichotomySplit,
  ReverseOrientation,
  ExponentCompare,
};

inline const std::vector<std::pair<RuleId, std::string>>& rule_names() {
  static const std::vector<std::pair<RuleId, std::string>> names{
      {RuleId::Hypothesis, "Hypothesis"},         {RuleId::RightCompose, "RightCompose"},
      {RuleId::LeftSubstitute, "LeftSubstitute"}, {RuleId::Transitivity, "Transitivity"},
      {RuleId::RelatorRewrite, "RelatorRewrite"}, {RuleId::Instantiate, "Instantiate"},
      {RuleId::ProductCone, "ProductCone"},       {RuleId::RootExtract, "RootExtract"},
      {RuleId::TrichotomySplit, "TrichotomySplit"}, {RuleId::ReverseOrientation, "ReverseOrientation"},
      {RuleId::ExponentCompare, "ExponentCompare"}};
  return names;
}

inline std::string to_string(RuleId r) {
  for (const auto& [id, n] : rule_names())
    if (id == r) return n;
  return "?";
}

inline RuleId parse_rule(const std::string& s) {
  for (const auto& [id, n] : rule_names())
    if (n == s) return id;
  throw Error("MalformedCertificate", "unknown rule '" + s + "'");
}

inline std::string to_string(Scope s) { return s == Scope::Universal ? "Universal" : "Pointwise"; }
inline std::string to_string(Mode m) { return m == Mode::Linear ? "Linear" : "Poset"; }

// scope rel: x lhs rel x rhs, at the basepoint or for all x.
struct OrderFact {
  Scope scope = Scope::Universal;
  Rel rel = Rel::Less;
  Word lhs, rhs;

  friend bool operator==(const OrderFact&, const OrderFact&) = default;
};

inline std::string to_string(const OrderFact& f) {
  return to_string(f.scope) + ": " + format_word(f.lhs) + (f.rel == Rel::Less ? " < " : " = ") +
         format_word(f.rhs);
}

inline OrderFact universal_less(Word lhs, Word rhs) { return {Scope::Universal, Rel::Less, std::move(lhs), std::move(rhs)}; }
inline OrderFact pointwise_less(Word lhs, Word rhs) { return {Scope::Pointwise, Rel::Less, std::move(lhs), std::move(rhs)}; }
inline OrderFact pointwise_equal(Word lhs, Word rhs) { return {Scope::Pointwise, Rel::Equal, std::move(lhs), std::move(rhs)}; }

// Reversing the order swaps the sides of every strict inequality.
inline OrderFact dual(const OrderFact& f) {
  if (f.rel == Rel::Equal) return f;
  return {f.scope, f.rel, f.rhs, f.lhs};
}

struct InferenceStep {
  RuleId rule = RuleId::RightCompose;
  std::vector<std::size_t> premises;
  Word word;          // composing word, or the replacement side for RelatorRewrite
  long power = 0;     // RootExtract exponent
  int side = 1;       // RelatorRewrite: 0 lhs, 1 rhs
};

enum class BranchStatus { Open, Contradiction, Saturated, Exhausted };

inline std::string to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::Open: return "Open";
    case BranchStatus::Contradiction: return "Contradiction";
    case BranchStatus::Saturated: return "Saturated";
    case BranchStatus::Exhausted: return "Exhausted";
  }
  return "?";
}

struct Branch {
  std::shared_ptr<const SurgeryPresentation> pres;
  Mode mode = Mode::Linear;
  std::vector<OrderFact> hypotheses;
  std::vector<std::string> labels;  // provenance of each hypothesis
  std::vector<OrderFact> facts;     // hypotheses first, then applied steps
  std::vector<InferenceStep> log;
  BranchStatus status = BranchStatus::Open;
};

inline Branch new_branch(const SurgeryPresentation& pres, Mode mode, const std::vector<OrderFact>& seeds,
                         std::vector<std::string> labels = {}) {
  Branch b;
  b.pres = std::make_shared<const SurgeryPresentation>(pres);
  b.mode = mode;
  for (const auto& s : seeds) {
    check_alphabet(s.lhs.letters(), pres.pres.alphabet);
    check_alphabet(s.rhs.letters(), pres.pres.alphabet);
  }
  b.hypotheses = seeds;
  b.facts = seeds;
  labels.resize(seeds.size(), "hypothesis");
  b.labels = std::move(labels);
  return b;
}

namespace detail {

inline void side_condition(bool ok, const std::string& what) {
  if (!ok) throw Error("SideCondition", what);
}

// w = v^n with v cyclically reduced, as words.
inline std::optional<Word> exact_root(const Word& w, long n) {
  if (n < 1 || w.size() % static_cast<std::size_t>(n) != 0) return std::nullopt;
  Word v = w.prefix(w.size() / static_cast<std::size_t>(n));
  if (power(v, n) != w) return std::nullopt;
  return v;
}

}  // namespace detail

// Literal fact calculus; the saturation engine works on normalized keys instead.
inline OrderFact apply_rule(Branch& br, const InferenceStep& st) {
  auto premise = [&](std::size_t k) -> const OrderFact& {
    detail::side_condition(k < st.premises.size(), to_string(st.rule) + " needs more premises");
    std::size_t i = st.premises[k];
    detail::side_condition(i < br.facts.size(), "premise index " + std::to_string(i) + " out of range");
    return br.facts[i];
  };
  check_alphabet(st.word.letters(), br.pres->pres.alphabet);
  OrderFact out;
  switch (st.rule) {
    case RuleId::RightCompose: {
      const auto& f = premise(0);
      out = {f.scope, f.rel, f.lhs * st.word, f.rhs * st.word};
      break;
    }
    case RuleId::LeftSubstitute: {
      const auto& f = premise(0);
      detail::side_condition(f.scope == Scope::Universal, "LeftSubstitute needs a Universal fact");
      out = {f.scope, f.rel, st.word * f.lhs, st.word * f.rhs};
      break;
    }
    case RuleId::Transitivity: {
      const auto& f = premise(0);
      const auto& g = premise(1);
      detail::side_condition(f.rhs == g.lhs, "Transitivity needs matching middle terms");
      Scope s = f.scope == Scope::Universal && g.scope == Scope::Universal ? Scope::Universal : Scope::Pointwise;
      Rel r = f.rel == Rel::Equal && g.rel == Rel::Equal ? Rel::Equal : Rel::Less;
      out = {s, r, f.lhs, g.rhs};
      break;
    }
    case RuleId::RelatorRewrite: {
      const auto& f = premise(0);
      const Word& old = st.side == 0 ? f.lhs : f.rhs;
      auto v = equal_mod_relators(old, st.word, br.pres->pres);
      detail::side_condition(v.kind == EqualityVerdict::Kind::Equal,
                             format_word(old) + " = " + format_word(st.word) + " is not certified");
      out = f;
      (st.side == 0 ? out.lhs : out.rhs) = st.word;
      break;
    }
    case RuleId::Instantiate: {
      const auto& f = premise(0);
      detail::side_condition(f.scope == Scope::Universal, "Instantiate needs a Universal fact");
      out = f;
      out.scope = Scope::Pointwise;
      break;
    }
    case RuleId::ProductCone: {
      const auto& f = premise(0);
      const auto& g = premise(1);
      detail::side_condition(f.scope == Scope::Universal && g.scope == Scope::Universal && f.rel == Rel::Less &&
                                 g.rel == Rel::Less && f.lhs.empty() && g.lhs.empty(),
                             "ProductCone needs two Universal facts 1 < u, 1 < v");
      out = universal_less(Word(), f.rhs * g.rhs);
      break;
    }
    case RuleId::RootExtract: {
      detail::side_condition(br.mode == Mode::Linear, "RootExtract is disabled in Poset mode");
      const auto& f = premise(0);
      detail::side_condition(f.scope == Scope::Universal && f.rel == Rel::Less, "RootExtract needs Universal <");
      bool left = f.lhs.empty();
      detail::side_condition(left || f.rhs.empty(), "RootExtract needs 1 on one side");
      auto v = detail::exact_root(left ? f.rhs : f.lhs, st.power);
      detail::side_condition(v.has_value(), "not an exact power " + std::to_string(st.power));
      out = left ? universal_less(Word(), *v) : universal_less(*v, Word());
      break;
    }
    case RuleId::Hypothesis:
    case RuleId::TrichotomySplit:
    case RuleId::ReverseOrientation:
    case RuleId::ExponentCompare:
      throw Error("SideCondition", to_string(st.rule) + " is not a fact-producing rule");
  }
  br.facts.push_back(out);
  br.log.push_back(st);
  if (out.rel == Rel::Less && out.lhs == out.rhs) br.status = BranchStatus::Contradiction;
  return out;
}

}  // namespace laminar
