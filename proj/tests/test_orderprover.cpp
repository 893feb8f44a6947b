#include <catch_amalgamated.hpp>

#include "laminar/orderprover.hpp"

using namespace laminar;
using Catch::Matchers::ContainsSubstring;

namespace {

Word W(const char* s) { return parse_word(s, "abk"); }
const Word kK = Word::gen('k');

const SurgeryPresentation& sp19() {
  static const SurgeryPresentation sp = build_presentation({19, 1});
  return sp;
}

ProverBudget small_budget() {
  ProverBudget b;
  b.max_facts = 200000;
  return b;
}

}  // namespace

TEST_CASE("new_branch validates seed alphabets", "[orderprover]") {
  auto br = new_branch(sp19(), Mode::Linear, {universal_less(Word(), kK)});
  CHECK(br.facts.size() == 1);
  CHECK(br.labels == std::vector<std::string>{"hypothesis"});
  CHECK(br.status == BranchStatus::Open);
  CHECK_THROWS_AS(new_branch(sp19(), Mode::Linear, {universal_less(Word(), parse_word("c", "c"))}), Error);
}

TEST_CASE("apply_rule on literal facts", "[orderprover]") {
  auto br = new_branch(sp19(), Mode::Linear, {universal_less(Word(), kK), pointwise_less(Word(), W("a"))});

  auto f = apply_rule(br, {RuleId::RightCompose, {0}, W("a")});
  CHECK(f == universal_less(W("a"), W("k a")));

  f = apply_rule(br, {RuleId::LeftSubstitute, {0}, W("b")});
  CHECK(f == universal_less(W("b"), W("b k")));
  CHECK_THROWS_WITH(apply_rule(br, {RuleId::LeftSubstitute, {1}, W("b")}), ContainsSubstring("SideCondition"));

  f = apply_rule(br, {RuleId::Instantiate, {0}});
  CHECK(f == pointwise_less(Word(), kK));
  f = apply_rule(br, {RuleId::Transitivity, {1, 2}});
  CHECK(f == pointwise_less(Word(), W("k a")));
  CHECK_THROWS_WITH(apply_rule(br, {RuleId::Transitivity, {2, 2}}), ContainsSubstring("matching middle"));

  f = apply_rule(br, {RuleId::ProductCone, {0, 0}});
  CHECK(f == universal_less(Word(), W("k^2")));
  CHECK_THROWS_AS(apply_rule(br, {RuleId::ProductCone, {0, 1}}), Error);
  CHECK_THROWS_WITH(apply_rule(br, {RuleId::RightCompose, {99}, W("a")}), ContainsSubstring("out of range"));
  CHECK(br.status == BranchStatus::Open);
}

TEST_CASE("relator rewrite needs a certified equality", "[orderprover]") {
  auto br = new_branch(sp19(), Mode::Linear, {universal_less(Word(), W("k"))});
  // k = A B^2 from R2
  auto f = apply_rule(br, {RuleId::RelatorRewrite, {0}, W("A B^2"), 0, 1});
  CHECK(f == universal_less(Word(), W("A B^2")));
  CHECK_THROWS_WITH(apply_rule(br, {RuleId::RelatorRewrite, {0}, W("a"), 0, 1}), ContainsSubstring("not certified"));
}

TEST_CASE("root extraction", "[orderprover]") {
  auto br = new_branch(sp19(), Mode::Linear, {universal_less(Word(), W("b^3"))});
  CHECK(apply_rule(br, {RuleId::RootExtract, {0}, Word(), 3}) == universal_less(Word(), W("b")));
  CHECK_THROWS_WITH(apply_rule(br, {RuleId::RootExtract, {0}, Word(), 2}), ContainsSubstring("exact power"));
  auto poset = new_branch(sp19(), Mode::Poset, {universal_less(Word(), W("b^3"))});
  CHECK_THROWS_WITH(apply_rule(poset, {RuleId::RootExtract, {0}, Word(), 3}), ContainsSubstring("Poset"));
}

TEST_CASE("a strict self comparison closes the branch", "[orderprover]") {
  auto br = new_branch(sp19(), Mode::Linear, {universal_less(Word(), kK), universal_less(kK, Word())});
  apply_rule(br, {RuleId::Transitivity, {0, 1}});
  CHECK(br.status == BranchStatus::Contradiction);
}

TEST_CASE("dual is an involution", "[orderprover]") {
  for (const auto& f : {universal_less(W("a"), W("b k")), pointwise_equal(Word(), kK), pointwise_less(W("B"), Word())}) {
    CHECK(dual(dual(f)) == f);
    if (f.rel == Rel::Less) CHECK(dual(f).lhs == f.rhs);
  }
}

TEST_CASE("saturation outcomes", "[orderprover]") {
  auto bad = new_branch(sp19(), Mode::Linear, {universal_less(Word(), kK), universal_less(kK, Word())});
  CHECK(saturate(bad, small_budget()).outcome == SaturationResult::Outcome::Contradiction);

  auto empty = new_branch(sp19(), Mode::Linear, {});
  CHECK(saturate(empty, small_budget()).outcome == SaturationResult::Outcome::Saturated);

  auto poset = new_branch(sp19(), Mode::Poset, {pointwise_equal(Word(), kK), pointwise_less(Word(), W("a"))});
  auto r = saturate(poset, small_budget());
  CHECK(r.outcome == SaturationResult::Outcome::Contradiction);
  REQUIRE(r.certificate);
  CHECK(check_certificate(*r.certificate, sp19()));
}

TEST_CASE("derive b < 1 from 1 < k", "[orderprover]") {
  auto br = new_branch(sp19(), Mode::Linear, {universal_less(Word(), kK)});
  auto r = derive(br, universal_less(Word::gen('b'), Word()), small_budget());
  REQUIRE(r.outcome == SaturationResult::Outcome::Derived);
  REQUIRE(r.certificate);
  CHECK(check_certificate(*r.certificate, sp19()));
  CHECK_FALSE(check_certificate(*r.certificate, build_presentation({21, 1})));
}

TEST_CASE("global fixed point proof at 19/1", "[orderprover][slow]") {
  auto res = prove_global_fixed_point_R({19, 1});
  REQUIRE(res.proved());
  REQUIRE(res.certificate);
  CHECK_FALSE(res.branches.empty());
  auto rep = check_certificate(*res.certificate, sp19());
  CHECK(rep.ok);

  SECTION("round trip through text") {
    auto again = Certificate::parse(res.certificate->serialize());
    CHECK(check_certificate(again, sp19()));
  }
  SECTION("digest mismatch") {
    auto rep21 = check_certificate(*res.certificate, build_presentation({21, 1}));
    CHECK_FALSE(rep21.ok);
    CHECK_THAT(rep21.reason, ContainsSubstring("digest"));
  }
  SECTION("mutated premise") {
    Certificate c = *res.certificate;
    bool mutated = false;
    for (auto& b : c.doc.at("branches")) {
      auto& steps = b.at("steps");
      if (steps.size() < 2) continue;
      auto& prem = steps[steps.size() - 1].at("premises");
      prem[0] = prem[0].get<std::size_t>() == 0 ? 1 : 0;
      mutated = true;
      break;
    }
    REQUIRE(mutated);
    CHECK_FALSE(check_certificate(c, sp19()).ok);
  }
  SECTION("malformed text") {
    CHECK_THROWS_WITH(Certificate::parse("{\"version\": 1,"), ContainsSubstring("MalformedCertificate"));
    CHECK_FALSE(check_certificate(Certificate{json::object()}, sp19()).ok);
  }
  SECTION("deterministic") {
    auto res2 = prove_global_fixed_point_R({19, 1});
    REQUIRE(res2.certificate);
    CHECK(res2.certificate->serialize() == res.certificate->serialize());
  }
}

TEST_CASE("even p is rejected", "[orderprover]") {
  CHECK_THROWS_WITH(prove_global_fixed_point_R({20, 1}), ContainsSubstring("PreconditionFailed"));
}

TEST_CASE("symbolic family p/q >= 10", "[orderprover][slow]") {
  auto res = prove_symbolic_family("p/q>=10");
  REQUIRE(res.proved());
  CHECK(res.derived_bound == "p < 10q");
  REQUIRE_FALSE(res.flags.empty());
  CHECK(std::find(res.flags.begin(), res.flags.end(), kPrintedBoundFlag) != res.flags.end());
  REQUIRE(res.certificate);
  CHECK(check_family_certificate(*res.certificate));
  CHECK_THROWS_WITH(prove_symbolic_family("p/q>=10,q>=0"), ContainsSubstring("InvalidConstraint"));
  CHECK_THROWS_AS(parse_family_constraint("p>=10"), Error);
}
