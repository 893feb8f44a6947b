#pragma once

#include <openssl/evp.h>

#include <cstdio>
#include <future>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "laminar/cone.hpp"
#include "laminar/orderfact.hpp"
#include "laminar/pretzel.hpp"

namespace laminar {

using json = nlohmann::json;

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int n = 0;
  EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr);
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

inline std::string presentation_digest(const SurgeryPresentation& sp) { return sha256_hex(presentation_file(sp)); }

// Largest power-block exponent kept during search.
inline long exponent_cap(const SurgerySlope& s) { return 2 * std::max(s.q, std::labs(s.p - 18 * s.q)) + 2 * s.q; }

inline ProverPresentation<long> prover_presentation(const SurgeryPresentation& sp) {
  ProverPresentation<long> pp;
  TokOps<long> ops{'k'};
  for (const Word& r : sp.pres.relators) pp.relators.push_back(ops.from_word(r));
  pp.file = presentation_file(sp);
  pp.domain.emax = exponent_cap(sp.slope);
  return pp;
}

// p/q >= c_num / c_den, over q >= q_min.
struct FamilyConstraint {
  long c_num = 10, c_den = 1;
  long q_min = 1;
};

inline std::string to_string(const FamilyConstraint& c) {
  std::string s = "p/q>=" + std::to_string(c.c_num);
  if (c.c_den != 1) s += "/" + std::to_string(c.c_den);
  return s;
}

// Accepts "p/q>=10", "p/q >= 19/2", optionally followed by ",q>=1".
inline FamilyConstraint parse_family_constraint(const std::string& text) {
  static const std::regex re(R"(\s*p\s*/\s*q\s*>=\s*(-?\d+)(?:\s*/\s*(\d+))?\s*(?:,\s*q\s*>=\s*(-?\d+)\s*)?)");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    throw Error("InvalidConstraint", "expected 'p/q>=c' with c rational, got '" + text + "'");
  FamilyConstraint c;
  c.c_num = std::stol(m[1]);
  c.c_den = m[2].matched ? std::stol(m[2]) : 1;
  c.q_min = m[3].matched ? std::stol(m[3]) : 1;
  if (c.c_den <= 0) throw Error("InvalidConstraint", "denominator must be positive");
  if (c.q_min <= 0) throw Error("InvalidConstraint", "q must be positive, got q >= " + std::to_string(c.q_min));
  long g = std::gcd(c.c_num, c.c_den);
  if (g > 1) {
    c.c_num /= g;
    c.c_den /= g;
  }
  return c;
}

inline ProverPresentation<Affine> family_presentation(const FamilyConstraint& c) {
  if (c.q_min <= 0) throw Error("InvalidConstraint", "q must be positive");
  ProverPresentation<Affine> pp;
  TokOps<Affine> ops{'k'};
  pp.relators.push_back(ops.from_word(parse_word(kR1Text, "abk")));
  TokWord<Affine> r2{{'k', Affine{0, 0, 1}}}, r3{{'k', Affine{0, 1, -18}}};
  for (const auto& t : ops.from_word(parse_word("b^2 a", "abk"))) r2.push_back(t);
  for (const auto& t : ops.from_word(parse_word("a B a^2", "abk"))) r3.push_back(t);
  pp.relators.push_back(r2);
  pp.relators.push_back(r3);
  pp.domain.c_num = c.c_num;
  pp.domain.c_den = c.c_den;
  // q >= q_min > 1 only strengthens the region; the checks use q >= 1.
  std::string file = "gens: a b k\n";
  for (const auto& r : pp.relators) file += "rel: " + format_tokword(r) + "\n";
  file += "meta: family " + to_string(c) + " q>=1\n";
  pp.file = file;
  return pp;
}

// ---------------------------------------------------------------------------
// Certificates

struct Certificate {
  json doc;
  std::string serialize() const { return doc.dump(2) + "\n"; }
  static Certificate parse(const std::string& text) {
    try {
      return {json::parse(text)};
    } catch (const json::exception& e) {
      throw Error("MalformedCertificate", e.what());
    }
  }
};

struct CheckReport {
  bool ok = false;
  std::string reason;  // first failure
  explicit operator bool() const { return ok; }
};

template <class Exp>
KeyFact<Exp> key_of(const ConeCalculus<Exp>& calc, const OrderFact& f) {
  const auto& ops = calc.ops();
  Word w = f.scope == Scope::Universal ? f.lhs.inverse() * f.rhs : f.rhs * f.lhs.inverse();
  ConeKind k = f.scope == Scope::Universal ? (f.rel == Rel::Less ? ConeKind::P : ConeKind::N)
                                           : (f.rel == Rel::Less ? ConeKind::Q : ConeKind::S);
  return calc.normalize(k, ops.from_word(w));
}

namespace detail {

template <class Exp>
json step_json(const ConeCalculus<Exp>& calc, const Deriv<Exp>& d, const KeyFact<Exp>* a, const KeyFact<Exp>* b,
               const KeyFact<Exp>& result, const std::map<std::size_t, std::size_t>& renum) {
  json s;
  s["rule"] = to_string(d.rule);
  json prem = json::array();
  for (auto p : d.prem)
    if (p >= 0) prem.push_back(renum.at(static_cast<std::size_t>(p)));
  s["premises"] = prem;
  s["word"] = format_tokword(*calc.operand(d, a, b));
  s["result"] = format_keyfact(result);
  bool cyclic_a = a && (a->kind == ConeKind::P || a->kind == ConeKind::N);
  switch (d.rule) {
    case RuleId::RelatorRewrite: {
      const auto& v = calc.variants()[static_cast<std::size_t>(d.variant)];
      s["variant"] = {{"relator", v.relator + 1}, {"inverted", v.inverted}, {"rotation", v.rotation}};
      if (cyclic_a)
        s["rotations"] = {d.rot[0]};
      else
        s["position"] = d.pos;
      break;
    }
    case RuleId::Instantiate: s["rotations"] = {d.rot[0]}; break;
    case RuleId::ProductCone:
      if (d.repeat) {
        s["exponent"] = ExpOps<Exp>::format(d.exponent);
      } else if (cyclic_a) {
        s["rotations"] = {d.rot[0], d.rot[1]};
      } else {
        s["rotations"] = {d.rot[1]};
        s["position"] = d.pos;
      }
      break;
    case RuleId::Transitivity:
      if (d.strip)
        s["strip"] = d.pos == 0 ? "front" : "back";
      else
        s["invert"] = {bool(d.invert & 1), bool(d.invert & 2)};
      break;
    case RuleId::RootExtract: s["power"] = d.power; break;
    default: break;
  }
  return s;
}

template <class Exp>
std::optional<Deriv<Exp>> step_deriv(const ConeCalculus<Exp>& calc, const json& s, const KeyFact<Exp>* a,
                                     std::string& why) {
  Deriv<Exp> d;
  d.rule = parse_rule(s.at("rule").get<std::string>());
  const auto& prem = s.at("premises");
  if (prem.size() > 2) {
    why = "too many premises";
    return std::nullopt;
  }
  for (std::size_t i = 0; i < prem.size(); ++i) d.prem[i] = prem[i].get<std::int32_t>();
  bool cyclic_a = a && (a->kind == ConeKind::P || a->kind == ConeKind::N);
  auto rots = s.value("rotations", json::array());
  switch (d.rule) {
    case RuleId::RelatorRewrite: {
      const auto& v = s.at("variant");
      std::size_t rel = v.at("relator").get<std::size_t>() - 1;
      bool inv = v.at("inverted").get<bool>();
      std::size_t rot = v.at("rotation").get<std::size_t>();
      for (std::size_t i = 0; i < calc.variants().size(); ++i) {
        const auto& c = calc.variants()[i];
        if (c.relator == rel && c.inverted == inv && c.rotation == rot) d.variant = static_cast<std::int32_t>(i);
      }
      if (cyclic_a)
        d.rot[0] = rots.at(0).get<std::int32_t>();
      else
        d.pos = s.at("position").get<std::int32_t>();
      break;
    }
    case RuleId::Instantiate: d.rot[0] = rots.at(0).get<std::int32_t>(); break;
    case RuleId::ProductCone:
      if (s.contains("exponent")) {
        d.repeat = true;
        d.exponent = ExpOps<Exp>::parse(s["exponent"].get<std::string>());
      } else if (cyclic_a) {
        d.rot[0] = rots.at(0).get<std::int32_t>();
        d.rot[1] = rots.at(1).get<std::int32_t>();
      } else {
        d.rot[1] = rots.at(0).get<std::int32_t>();
        d.pos = s.at("position").get<std::int32_t>();
      }
      break;
    case RuleId::Transitivity:
      if (s.contains("strip")) {
        d.strip = true;
        d.pos = s["strip"] == "front" ? 0 : 1;
      } else {
        const auto& inv = s.at("invert");
        d.invert = static_cast<std::uint8_t>((inv.at(0).get<bool>() ? 1 : 0) | (inv.at(1).get<bool>() ? 2 : 0));
      }
      break;
    case RuleId::RootExtract: d.power = s.at("power").get<long>(); break;
    case RuleId::ExponentCompare: break;
    default: why = to_string(d.rule) + " cannot appear as a step"; return std::nullopt;
  }
  return d;
}

inline std::string mode_name(Mode m) { return to_string(m); }
inline Mode parse_mode(const std::string& s) {
  if (s == "Linear") return Mode::Linear;
  if (s == "Poset") return Mode::Poset;
  throw Error("MalformedCertificate", "unknown mode '" + s + "'");
}

}  // namespace detail

// One saturated branch as certificate JSON, pruned to what the leaf needs.
template <class Exp>
json branch_json(const ConeCalculus<Exp>& calc, const ConeEngine<Exp>& eng, Mode mode,
                 const std::vector<std::string>& labels, const std::string& leaf,
                 const std::vector<std::size_t>& targets) {
  std::vector<std::size_t> keep = eng.ancestry(targets);
  const auto& recs = eng.records();
  std::vector<std::size_t> order = eng.seeds();
  for (auto i : keep)
    if (recs[i].deriv.rule != RuleId::Hypothesis) order.push_back(i);
  std::map<std::size_t, std::size_t> renum;
  for (std::size_t k = 0; k < order.size(); ++k) renum.emplace(order[k], k);
  json b;
  b["mode"] = detail::mode_name(mode);
  json seeds = json::array();
  for (std::size_t k = 0; k < eng.seeds().size(); ++k)
    seeds.push_back({{"fact", format_keyfact(recs[eng.seeds()[k]].fact)},
                     {"label", k < labels.size() ? labels[k] : std::string("hypothesis")}});
  b["seeds"] = seeds;
  json steps = json::array();
  for (std::size_t k = eng.seeds().size(); k < order.size(); ++k) {
    const auto& r = recs[order[k]];
    const KeyFact<Exp>* a = r.deriv.prem[0] >= 0 ? &recs[static_cast<std::size_t>(r.deriv.prem[0])].fact : nullptr;
    const KeyFact<Exp>* c = r.deriv.prem[1] >= 0 ? &recs[static_cast<std::size_t>(r.deriv.prem[1])].fact : nullptr;
    steps.push_back(detail::step_json(calc, r.deriv, a, c, r.fact, renum));
  }
  b["steps"] = steps;
  b["leaf"] = leaf;
  return b;
}

// Replays one branch. Facts are indexed seeds first, then steps.
template <class Exp>
CheckReport check_branch(const ConeCalculus<Exp>& calc, const json& b, std::vector<KeyFact<Exp>>* facts_out = nullptr) {
  auto fail = [](const std::string& m) { return CheckReport{false, m}; };
  try {
    Mode mode = detail::parse_mode(b.at("mode").get<std::string>());
    const auto& pp = calc.presentation();
    std::vector<KeyFact<Exp>> facts;
    for (const auto& s : b.at("seeds")) {
      auto f = parse_keyfact<Exp>(s.at("fact").get<std::string>(), pp.alphabet, pp.power_gen);
      if (!(calc.normalize(f.kind, f.w) == f)) return fail("seed '" + s.at("fact").get<std::string>() + "' is not normalized");
      facts.push_back(f);
    }
    const auto& steps = b.at("steps");
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const auto& s = steps[k];
      std::string where = "step " + std::to_string(k) + " (fact " + std::to_string(facts.size()) + ")";
      std::string why;
      std::vector<std::size_t> prem;
      for (const auto& p : s.at("premises")) prem.push_back(p.get<std::size_t>());
      for (auto p : prem)
        if (p >= facts.size()) return fail(where + ": premise " + std::to_string(p) + " is not an earlier fact");
      const KeyFact<Exp>* a = prem.size() > 0 ? &facts[prem[0]] : nullptr;
      const KeyFact<Exp>* c = prem.size() > 1 ? &facts[prem[1]] : nullptr;
      auto d = detail::step_deriv(calc, s, a, why);
      if (!d) return fail(where + ": " + why);
      if (d->rule == RuleId::RelatorRewrite && d->variant < 0) return fail(where + ": unknown relator variant");
      auto r = calc.apply(*d, a, c, mode, &why);
      if (!r) return fail(where + ": " + to_string(d->rule) + " does not apply: " + why);
      auto n = calc.normalize(r->kind, r->w);
      if (format_keyfact(n) != s.at("result").get<std::string>())
        return fail(where + ": result is " + format_keyfact(n) + ", certificate says " + s.at("result").get<std::string>());
      if (format_tokword(*calc.operand(*d, a, c)) != s.at("word").get<std::string>())
        return fail(where + ": composing word mismatch");
      facts.push_back(n);
    }
    std::string leaf = b.at("leaf").get<std::string>();
    if (leaf == "Contradiction") {
      if (facts.empty() || !calc.contradiction(facts.back())) return fail("leaf Contradiction without 1 < 1");
    } else if (leaf == "GlobalFixedPoint") {
      for (char g : pp.alphabet) {
        auto key = calc.normalize(ConeKind::S, calc.ops().from_word(Word::gen(g)));
        bool have = false;
        for (const auto& f : facts) have = have || f == key;
        if (!have) return fail(std::string("leaf GlobalFixedPoint: generator ") + g + " not shown to fix the basepoint");
      }
    } else if (leaf == "Derived") {
      for (const auto& g : b.at("goals")) {
        auto key = parse_keyfact<Exp>(g.get<std::string>(), pp.alphabet, pp.power_gen);
        bool have = false;
        for (const auto& f : facts) have = have || f == key;
        if (!have) return fail("goal " + g.get<std::string>() + " not derived");
      }
    } else {
      return fail("unknown leaf '" + leaf + "'");
    }
    if (facts_out) *facts_out = std::move(facts);
    return {true, ""};
  } catch (const std::exception& e) {
    return fail(std::string("malformed branch: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Single branches

struct SaturationResult {
  enum class Outcome { Contradiction, Derived, Saturated, Exhausted } outcome = Outcome::Saturated;
  std::optional<Certificate> certificate;
  std::size_t facts = 0;
  std::size_t given = 0;
};

inline std::string to_string(SaturationResult::Outcome o) {
  switch (o) {
    case SaturationResult::Outcome::Contradiction: return "Contradiction";
    case SaturationResult::Outcome::Derived: return "Derived";
    case SaturationResult::Outcome::Saturated: return "Saturated";
    case SaturationResult::Outcome::Exhausted: return "Exhausted";
  }
  return "?";
}

namespace detail {

inline json concrete_header(const SurgeryPresentation& sp, const std::string& kind) {
  return {{"version", 1},
          {"kind", kind},
          {"presentation_digest", presentation_digest(sp)},
          {"mode", "concrete"},
          {"slope", {{"p", sp.slope.p}, {"q", sp.slope.q}}}};
}

inline SaturationResult run_branch(Branch& br, const ProverBudget& budget, const std::optional<OrderFact>& goal) {
  const auto& sp = *br.pres;
  ConeCalculus<long> calc(prover_presentation(sp));
  ConeEngine<long> eng(calc, br.mode, budget);
  for (const auto& h : br.hypotheses) {
    auto k = key_of(calc, h);
    eng.add_seed(k.kind, k.w);
  }
  if (goal) {
    auto g = key_of(calc, *goal);
    eng.add_goal(g.kind, g.w);
  }
  auto o = eng.run();
  SaturationResult res;
  res.facts = eng.records().size();
  res.given = eng.given_count();
  using O = ConeEngine<long>::Outcome;
  if (o == O::Contradiction || o == O::Reached) {
    bool contra = o == O::Contradiction;
    json doc = concrete_header(sp, "branch");
    json b = branch_json(calc, eng, br.mode, br.labels, contra ? "Contradiction" : "Derived",
                         contra ? std::vector<std::size_t>{eng.final_fact()} : eng.goal_hits());
    b["id"] = "root";
    if (!contra) b["goals"] = {format_keyfact(key_of(calc, *goal))};
    doc["branches"] = {b};
    res.certificate = Certificate{doc};
    res.outcome = contra ? SaturationResult::Outcome::Contradiction : SaturationResult::Outcome::Derived;
    br.status = contra ? BranchStatus::Contradiction : BranchStatus::Open;
  } else if (o == O::Saturated) {
    res.outcome = SaturationResult::Outcome::Saturated;
    br.status = BranchStatus::Saturated;
  } else {
    res.outcome = SaturationResult::Outcome::Exhausted;
    br.status = BranchStatus::Exhausted;
  }
  return res;
}

}  // namespace detail

inline SaturationResult saturate(Branch& br, const ProverBudget& budget = {}) {
  if (budget.max_length == 0 || budget.max_facts == 0) throw Error("InvalidBudget", "budget must be positive");
  return detail::run_branch(br, budget, std::nullopt);
}

// Saturates until `goal` appears; Derived carries a replayable sub-certificate.
inline SaturationResult derive(Branch& br, const OrderFact& goal, const ProverBudget& budget = {}) {
  if (budget.max_length == 0 || budget.max_facts == 0) throw Error("InvalidBudget", "budget must be positive");
  return detail::run_branch(br, budget, goal);
}

// ---------------------------------------------------------------------------
// The case tree for actions on the line

struct CaseSpec {
  std::string id;
  std::string label;
  Mode mode;
  std::vector<std::pair<OrderFact, std::string>> seeds;
  std::string leaf;     // Contradiction or GlobalFixedPoint
  std::string dual_of;  // nonempty: obtained by ReverseOrientation
};

inline const std::vector<CaseSpec>& line_cases() {
  static const std::vector<CaseSpec> cases = [] {
    Word a = Word::gen('a'), k = Word::gen('k');
    std::vector<CaseSpec> c;
    c.push_back({"A<", "x k = x, x < x a", Mode::Poset,
                 {{pointwise_equal(Word(), k), "x k = x"}, {pointwise_less(Word(), a), "x < x a"}}, "Contradiction", ""});
    c.push_back({"A=", "x k = x, x = x a", Mode::Poset,
                 {{pointwise_equal(Word(), k), "x k = x"}, {pointwise_equal(Word(), a), "x = x a"}}, "GlobalFixedPoint", ""});
    c.push_back({"A>", "x k = x, x > x a", Mode::Poset,
                 {{pointwise_equal(Word(), k), "x k = x"}, {pointwise_less(a, Word()), "x a < x"}}, "Contradiction", "A<"});
    c.push_back({"C+", "x < x k for all x", Mode::Linear, {{universal_less(Word(), k), "x < x k for all x"}},
                 "Contradiction", ""});
    c.push_back({"C-", "x k < x for all x", Mode::Linear, {{universal_less(k, Word()), "x k < x for all x"}},
                 "Contradiction", "C+"});
    return c;
  }();
  return cases;
}

inline json line_case_tree() {
  return {{"split", "Fix(k)"},
          {"cases",
           {{{"case", "Fix(k) nonempty: choose x with x k = x"},
             {"split", "TrichotomySplit x vs x a"},
             {"cases", {{{"case", "x < x a"}, {"branch", "A<"}},
                        {{"case", "x = x a"}, {"branch", "A="}},
                        {{"case", "x > x a"}, {"branch", "A>"}}}}},
            {{"case", "Fix(k) empty: k displaces every point in one direction (trusted meta-rule)"},
             {"split", "direction of k"},
             {"cases", {{{"case", "x < x k for all x"}, {"branch", "C+"}},
                        {{"case", "x k < x for all x"}, {"branch", "C-"}}}}}}}};
}

struct BranchSummary {
  std::string id;
  std::string outcome;  // Contradiction, GlobalFixedPoint, Saturated, Exhausted, Dual
  std::size_t facts = 0;
  std::size_t steps = 0;
};

struct ProofResult {
  enum class Verdict { Proved, Unknown } verdict = Verdict::Unknown;
  std::optional<Certificate> certificate;
  std::vector<BranchSummary> branches;
  std::string reason;
  std::string derived_bound;       // symbolic mode
  std::vector<std::string> flags;  // symbolic mode
  bool proved() const { return verdict == Verdict::Proved; }
};

inline std::string to_string(ProofResult::Verdict v) { return v == ProofResult::Verdict::Proved ? "Proved" : "Unknown"; }

namespace detail {

template <class Exp>
struct CaseRun {
  std::unique_ptr<ConeEngine<Exp>> eng;
  typename ConeEngine<Exp>::Outcome outcome;
};

template <class Exp>
ProofResult run_line_cases(const ConeCalculus<Exp>& calc, const ProverBudget& budget, json doc,
                           std::vector<std::unique_ptr<ConeEngine<Exp>>>* engines_out = nullptr) {
  ProofResult res;
  if (budget.max_length == 0 || budget.max_facts == 0) throw Error("InvalidBudget", "budget must be positive");
  const auto& cases = line_cases();
  std::vector<std::future<CaseRun<Exp>>> futs;
  for (const auto& c : cases) {
    if (!c.dual_of.empty()) continue;
    futs.push_back(std::async(std::launch::async, [&calc, &budget, &c] {
      auto eng = std::make_unique<ConeEngine<Exp>>(calc, c.mode, budget);
      for (const auto& [f, label] : c.seeds) {
        auto k = key_of(calc, f);
        eng->add_seed(k.kind, k.w);
      }
      if (c.leaf == "GlobalFixedPoint")
        for (char g : calc.presentation().alphabet) {
          auto key = calc.normalize(ConeKind::S, calc.ops().from_word(Word::gen(g)));
          bool seeded = false;
          for (auto s : eng->seeds()) seeded = seeded || eng->records()[s].fact == key;
          if (!seeded) eng->add_goal(ConeKind::S, key.w);
        }
      auto o = eng->run();
      return CaseRun<Exp>{std::move(eng), o};
    }));
  }
  std::map<std::string, CaseRun<Exp>> runs;
  std::size_t fi = 0;
  for (const auto& c : cases)
    if (c.dual_of.empty()) runs.emplace(c.id, futs[fi++].get());

  using O = typename ConeEngine<Exp>::Outcome;
  json branches = json::array();
  bool all = true;
  std::size_t splits = 3;  // Fix(k), trichotomy, direction
  if (splits > budget.max_splits) {
    all = false;
    res.reason = "split budget too small for the case tree";
  }
  for (const auto& c : cases) {
    std::vector<std::string> labels;
    for (const auto& s : c.seeds) labels.push_back(s.second);
    BranchSummary sum{c.id, "", 0, 0};
    if (!c.dual_of.empty()) {
      const auto& base = runs.at(c.dual_of);
      bool ok = base.outcome == O::Contradiction;
      json b;
      b["id"] = c.id;
      b["case"] = c.label;
      b["mode"] = mode_name(c.mode);
      json seeds = json::array();
      for (std::size_t i = 0; i < c.seeds.size(); ++i)
        seeds.push_back({{"fact", format_keyfact(key_of(calc, c.seeds[i].first))}, {"label", labels[i]}});
      b["seeds"] = seeds;
      b["steps"] = json::array();
      b["rule"] = "ReverseOrientation";
      b["dual_of"] = c.dual_of;
      b["leaf"] = c.leaf;
      sum.outcome = ok ? "Dual" : "Open";
      if (ok) branches.push_back(b);
      all = all && ok;
      res.branches.push_back(sum);
      continue;
    }
    const auto& run = runs.at(c.id);
    sum.facts = run.eng->records().size();
    bool ok = (c.leaf == "Contradiction" && run.outcome == O::Contradiction) ||
              (c.leaf == "GlobalFixedPoint" && (run.outcome == O::Reached));
    if (c.leaf == "GlobalFixedPoint" && run.outcome == O::Contradiction) ok = false;
    if (ok) {
      std::vector<std::size_t> targets =
          c.leaf == "Contradiction" ? std::vector<std::size_t>{run.eng->final_fact()} : run.eng->goal_hits();
      json b = branch_json(calc, *run.eng, c.mode, labels, c.leaf, targets);
      b["id"] = c.id;
      b["case"] = c.label;
      sum.steps = b["steps"].size();
      branches.push_back(b);
      sum.outcome = c.leaf;
    } else {
      sum.outcome = run.outcome == O::Exhausted ? "Exhausted" : run.outcome == O::Saturated ? "Saturated" : "Open";
      if (res.reason.empty()) res.reason = "branch " + c.id + " (" + c.label + ") ended " + sum.outcome;
    }
    all = all && ok;
    res.branches.push_back(sum);
  }
  if (all) {
    doc["tree"] = line_case_tree();
    doc["branches"] = branches;
    res.verdict = ProofResult::Verdict::Proved;
    res.certificate = Certificate{doc};
  }
  if (engines_out)
    for (auto& [id, r] : runs) engines_out->push_back(std::move(r.eng));
  return res;
}

template <class Exp>
CheckReport check_line_tree(const ConeCalculus<Exp>& calc, const json& doc) {
  auto fail = [](const std::string& m) { return CheckReport{false, m}; };
  if (doc.at("tree") != line_case_tree()) return fail("branch tree does not match the case analysis");
  const auto& bs = doc.at("branches");
  const auto& cases = line_cases();
  if (bs.size() != cases.size()) return fail("expected " + std::to_string(cases.size()) + " branches");
  std::map<std::string, const json*> by_id;
  for (const auto& b : bs) by_id[b.at("id").get<std::string>()] = &b;
  for (const auto& c : cases) {
    auto it = by_id.find(c.id);
    if (it == by_id.end()) return fail("missing branch " + c.id);
    const json& b = *it->second;
    if (b.at("leaf") != c.leaf) return fail("branch " + c.id + ": leaf must be " + c.leaf);
    if (b.at("mode") != mode_name(c.mode))
      return fail("branch " + c.id + ": mode mismatch");
    const auto& seeds = b.at("seeds");
    if (seeds.size() != c.seeds.size()) return fail("branch " + c.id + ": wrong number of seeds");
    for (std::size_t i = 0; i < c.seeds.size(); ++i)
      if (seeds[i].at("fact").get<std::string>() != format_keyfact(key_of(calc, c.seeds[i].first)))
        return fail("branch " + c.id + ": seed " + std::to_string(i) + " does not match the case");
    if (!c.dual_of.empty()) {
      if (b.value("rule", "") != "ReverseOrientation" || b.value("dual_of", "") != c.dual_of)
        return fail("branch " + c.id + ": must be ReverseOrientation of " + c.dual_of);
      if (!b.at("steps").empty()) return fail("branch " + c.id + ": dual branch carries steps");
      const json& base = *by_id.at(c.dual_of);
      if (base.at("leaf") != c.leaf) return fail("branch " + c.id + ": dual leaf mismatch");
      const auto& bseeds = base.at("seeds");
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto& pp = calc.presentation();
        auto f = parse_keyfact<Exp>(seeds[i].at("fact").get<std::string>(), pp.alphabet, pp.power_gen);
        if (format_keyfact(calc.dual(f)) != bseeds.at(i).at("fact").get<std::string>())
          return fail("branch " + c.id + ": seeds are not the order dual of " + c.dual_of);
      }
      continue;
    }
    auto r = check_branch(calc, b);
    if (!r.ok) return fail("branch " + c.id + ": " + r.reason);
  }
  return {true, ""};
}

}  // namespace detail

inline ProofResult prove_global_fixed_point_R(const SurgerySlope& slope, const ProverBudget& budget = {}) {
  check_slope(slope);
  auto h = homology_check(slope);
  if (!h.orientation_forced)
    throw Error("PreconditionFailed", "orientation-preserving hypothesis not forced: " + h.reason);
  auto sp = build_presentation(slope);
  ConeCalculus<long> calc(prover_presentation(sp));
  auto res = detail::run_line_cases(calc, budget, detail::concrete_header(sp, "global_fixed_point_R"));
  if (!res.proved() && res.reason.empty()) res.reason = "no certificate within budget";
  return res;
}

namespace detail {

inline json family_header(const FamilyConstraint& c, const ProverPresentation<Affine>& pp) {
  return {{"version", 1},
          {"kind", "global_fixed_point_R"},
          {"presentation_digest", sha256_hex(pp.file)},
          {"mode", "symbolic"},
          {"family", {{"constraint", to_string(c)}, {"c_num", c.c_num}, {"c_den", c.c_den}}}};
}

// f >= 1 in readable form.
inline std::string bound_text(const Affine& f) {
  if (f.c1 == -1) {
    Affine rest{f.c0 - 1, 0, f.c2};
    if (rest.c0 == -1) return "p < " + to_string(Affine{0, 0, f.c2});
    return "p <= " + to_string(rest);
  }
  return to_string(f) + " >= 1";
}

}  // namespace detail

inline const char* kPrintedBoundFlag =
    "printed '18q-p > 10q' does not follow: the displayed chain ends at x k^(8q) and gives 18q-p > 8q, "
    "i.e. p < 10q (suspected typo)";

inline ProofResult prove_symbolic_family(const FamilyConstraint& c, const ProverBudget& budget = {}) {
  auto pp = family_presentation(c);
  ConeCalculus<Affine> calc(pp);
  std::vector<std::unique_ptr<ConeEngine<Affine>>> engines;
  auto res = detail::run_line_cases(calc, budget, detail::family_header(c, pp), &engines);
  // 1 < k^f with f symbolic forces f >= 1; report the strongest bound p < c q
  std::optional<Affine> best;
  for (const auto& e : engines)
    for (const auto& r : e->records()) {
      if (r.fact.kind != ConeKind::P || !calc.single_power(r.fact.w)) continue;
      const Affine& f = r.fact.w[0].e;
      if (f.c1 != -1 || f.c0 != 0) continue;
      if (!best || f.c2 < best->c2) best = f;
    }
  if (best) res.derived_bound = detail::bound_text(*best);
  res.flags.push_back(kPrintedBoundFlag);
  if (res.certificate) {
    res.certificate->doc["derived_bound"] = res.derived_bound;
    res.certificate->doc["flags"] = res.flags;
  }
  if (!res.proved()) {
    std::string why = res.reason.empty() ? "no certificate within budget" : res.reason;
    res.reason = res.derived_bound.empty()
                     ? why
                     : "derived bound " + res.derived_bound + " does not contradict " + to_string(c) + "; " + why;
  }
  return res;
}

inline ProofResult prove_symbolic_family(const std::string& constraint, const ProverBudget& budget = {}) {
  return prove_symbolic_family(parse_family_constraint(constraint), budget);
}

// ---------------------------------------------------------------------------

inline CheckReport check_certificate(const Certificate& cert, const SurgeryPresentation& sp) {
  const json& d = cert.doc;
  try {
    if (d.at("version") != 1) return {false, "unsupported version"};
    if (d.at("mode") != "concrete") return {false, "not a concrete-slope certificate"};
    if (d.at("presentation_digest") != presentation_digest(sp))
      return {false, "presentation digest mismatch: certificate is for another presentation"};
    ConeCalculus<long> calc(prover_presentation(sp));
    std::string kind = d.at("kind");
    if (kind == "branch") {
      if (d.at("branches").size() != 1) return {false, "branch certificate must hold one branch"};
      return check_branch(calc, d.at("branches")[0]);
    }
    if (kind == "global_fixed_point_R") return detail::check_line_tree(calc, d);
    return {false, "unknown certificate kind '" + kind + "'"};
  } catch (const std::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
}

// Symbolic certificates carry their own family constraint.
inline CheckReport check_family_certificate(const Certificate& cert) {
  const json& d = cert.doc;
  try {
    if (d.at("version") != 1) return {false, "unsupported version"};
    if (d.at("mode") != "symbolic") return {false, "not a symbolic certificate"};
    auto c = parse_family_constraint(d.at("family").at("constraint").get<std::string>());
    auto pp = family_presentation(c);
    if (d.at("presentation_digest") != sha256_hex(pp.file)) return {false, "presentation digest mismatch"};
    ConeCalculus<Affine> calc(pp);
    return detail::check_line_tree(calc, d);
  } catch (const std::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
}

}  // namespace laminar
