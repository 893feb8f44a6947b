// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cctype>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "laminar/laminar.hpp"

using namespace laminar;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double x, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

// ---- 1 ----
Outcome identities() {
  std::ostringstream d;
  bool ok = true;
  for (SurgerySlope s : std::vector<SurgerySlope>{{19, 1}, {17, 1}, {37, 2}, {21, 2}, {11, 1}}) {
    auto t0 = Clock::now();
    auto rep = verify_identities(s);
    double t = seconds_since(t0);
    std::size_t depth = 99;
    for (const auto& c : rep.checks)
      if (c.name.rfind("(iii)", 0) == 0) depth = c.depth;
    bool good = rep.all_pass() && rep.checks.size() == 4 && depth <= 2 && t < 1.0;
    ok = ok && good;
    d << to_string(s) << (good ? " ok" : " FAILED") << " (depth " << depth << ", " << fixed(t, 3) << " s) ";
  }
  return {ok, d.str()};
}

// ---- 2 ----
Outcome homology() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> P(3, 199), Q(1, 9);
  auto t0 = Clock::now();
  int n = 0, good = 0;
  std::string bad;
  while (n < 50) {
    SurgerySlope s{P(rng), Q(rng)};
    if (std::gcd(s.p, s.q) != 1 || s.p == 18 * s.q) continue;
    ++n;
    auto f = invariant_factors(surgered_matrix(s));
    if (f.free_rank == 0 && f.factors == std::vector<BigInt>{1, s.p})
      ++good;
    else if (bad.empty())
      bad = " first mismatch " + to_string(s);
  }
  double t = seconds_since(t0);
  return {good == 50 && t < 1.0, std::to_string(good) + "/50 slopes give (1, p) in " + fixed(t, 3) + " s" + bad};
}

// ---- 3 ----
Outcome beta_from_k() {
  auto sp = build_presentation({19, 1});
  auto br = new_branch(sp, Mode::Linear, {universal_less(Word(), Word::gen('k'))}, {"1 < k"});
  auto t0 = Clock::now();
  auto r = derive(br, universal_less(Word::gen('b'), Word()));
  double t = seconds_since(t0);
  bool derived = r.outcome == SaturationResult::Outcome::Derived && r.certificate.has_value();
  auto rep = derived ? check_certificate(*r.certificate, sp) : CheckReport{false, "no certificate"};
  return {derived && rep.ok, "b < 1 from 1 < k: " + to_string(r.outcome) + ", " + std::to_string(r.facts) +
                                 " facts, " + fixed(t) + " s, replay " + (rep.ok ? "ok" : rep.reason)};
}

// ---- 4 ----
Outcome fixed_point() {
  std::ostringstream d;
  bool ok = true;
  for (SurgerySlope s : std::vector<SurgerySlope>{{19, 1}, {11, 1}, {21, 2}}) {
    auto t0 = Clock::now();
    auto res = prove_global_fixed_point_R(s);
    double t = seconds_since(t0);
    std::size_t facts = 0;
    for (const auto& b : res.branches) facts = std::max(facts, b.facts);
    bool checked = res.certificate && check_certificate(*res.certificate, build_presentation(s)).ok;
    bool good = res.proved() && checked && t < 60.0 && facts <= 1'000'000;
    ok = ok && good;
    d << to_string(s) << " " << to_string(res.verdict) << (checked ? " checked" : " unchecked") << " (" << fixed(t)
      << " s, max " << facts << " facts) ";
  }
  return {ok, d.str()};
}

// ---- 5 ----
Outcome family() {
  auto t0 = Clock::now();
  auto res = prove_symbolic_family("p/q>=10");
  double t = seconds_since(t0);
  bool flagged = std::find(res.flags.begin(), res.flags.end(), kPrintedBoundFlag) != res.flags.end();
  bool checked = res.certificate && check_family_certificate(*res.certificate).ok;
  return {res.proved() && res.derived_bound == "p < 10q" && flagged && checked,
          to_string(res.verdict) + ", bound \"" + res.derived_bound + "\", printed-bound flag " +
              (flagged ? "raised" : "missing") + ", certificate " + (checked ? "checked" : "unchecked") + ", " +
              fixed(t) + " s"};
}

// ---- 6 ----
Outcome negative_control() {
  auto t0 = Clock::now();
  auto res = prove_global_fixed_point_R({7, 1});
  double t = seconds_since(t0);
  std::string lower = res.reason;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  bool refutes = lower.find("refut") != std::string::npos || lower.find("no global fixed") != std::string::npos ||
                 lower.find("counterexample") != std::string::npos;
  return {!res.proved() && !res.certificate && !refutes,
          "7/1 " + to_string(res.verdict) + " after " + fixed(t) + " s: " + res.reason};
}

// ---- 7 ----
Outcome property_suite() {
  auto t0 = Clock::now();
  auto r = leaf::run_random_suite(500, 2024);
  double t = seconds_since(t0);
  std::size_t checked = 0;
  for (const auto& [k, v] : r.report.checked) checked += v;
  std::string first = r.report.ok() ? "" : ", first " + r.report.violations.front().check + " " +
                                               r.report.violations.front().detail;
  return {r.report.ok() && r.models == 500 && r.max_points <= 40 && t < 60.0,
          std::to_string(r.models) + " models (" + std::to_string(r.periodic) + " periodic, max " +
              std::to_string(r.max_points) + " points per period), " + std::to_string(checked) + " instances, " +
              std::to_string(r.report.violations.size()) + " violations, " + fixed(t) + " s" + first};
}

// ---- 8 ----
Outcome scenarios() {
  const std::vector<std::string> required{"fig-Ax", "empty-1", "I-fig1", "fig-case1", "fig-case2", "fig-case3"};
  std::ostringstream d;
  bool ok = true;
  std::size_t claims = 0;
  for (const auto& s : leaf::scenarios()) {
    auto rep = leaf::run_scenario(s);
    claims += rep.claims.size();
    ok = ok && rep.ok();
    d << s.name << (rep.ok() ? " ok " : " FAILED ");
  }
  for (const auto& n : required) {
    try {
      leaf::scenario(n);
    } catch (const Error&) {
      ok = false;
      d << n << " missing ";
    }
  }
  d << "(" << claims << " claims)";
  return {ok, d.str()};
}

// ---- 9 ----
// Every reduced w with |w| <= 16 is u v^-1 for some |u|, |v| <= 8, so the
// pairs reduce to single words. Words outside the abelian relation lattice
// (3t, 5t) cannot be products of relator conjugates.
struct Criterion9 {
  Presentation pres{"ab", {parse_word(kR1Text, "ab")}};
  std::vector<Word> variants;
  std::unordered_set<Word, WordHash> relator_classes;
  std::vector<Word> ball6;

  Criterion9() {
    const Word& r = pres.relators[0];
    for (const Word& base : {r, r.inverse()})
      for (std::size_t k = 0; k < base.size(); ++k) variants.push_back(rotate(base, k));
    for (const Word& v : variants) relator_classes.insert(cyclic_canonical(v));
    ball6 = ball("ab", 6);
  }

  // One insertion reaches 1 iff w = g r g^-1 for a variant r. The conjugator
  // can be taken as a prefix of w, so this is: the cyclic core of w is a
  // variant.
  bool depth1(const Word& w) const {
    auto core = cyclic_reduce(w).second;
    return core.size() == pres.relators[0].size() && relator_classes.count(cyclic_canonical(core));
  }

  // Literal insertion search from w towards the empty word, depth <= 2.
  bool brute(const Word& w) const {
    if (w.empty() || depth1(w)) return true;
    for (std::size_t i = 0; i <= w.size(); ++i) {
      Word pre = w.prefix(i), post = w.suffix_from(i);
      for (const Word& c : ball6) {
        Word pc = pre * c, ci_post = c.inverse() * post;
        for (const Word& v : variants) {
          Word w1 = pc * v * ci_post;
          if (w1.empty() || depth1(w1)) return true;
        }
      }
    }
    return false;
  }

  // Cyclic classes of products of two relator conjugates, conjugator <= 10.
  std::unordered_set<Word, WordHash> two_conjugates(std::size_t max_len) const {
    std::unordered_set<Word, WordHash> out;
    for (const Word& v : variants) out.insert(cyclic_canonical(v));
    for (const Word& h : ball("ab", 10)) {
      Word hi = h.inverse();
      for (const Word& r1 : variants) {
        Word a = r1 * h;
        for (const Word& r2 : variants) {
          Word c = cyclic_reduce(a * r2 * hi).second;
          if (c.size() <= max_len) out.insert(cyclic_canonical(c));
        }
      }
    }
    return out;
  }

  static std::vector<Word> lattice_words(std::size_t L) {
    std::vector<Word> out;
    std::vector<Letter> cur;
    const std::vector<Letter> gens{{'a', 1}, {'a', -1}, {'b', 1}, {'b', -1}};
    auto reachable = [](long x, long y, long rem) {
      for (long t = -2; t <= 2; ++t)
        if (std::labs(3 * t - x) + std::labs(5 * t - y) <= rem) return true;
      return false;
    };
    std::function<void(long, long)> dfs = [&](long x, long y) {
      for (long t = -2; t <= 2; ++t)
        if (x == 3 * t && y == 5 * t) {
          out.push_back(Word::from_reduced(cur));
          break;
        }
      if (cur.size() == L) return;
      for (const Letter& l : gens) {
        if (!cur.empty() && cur.back().cancels(l)) continue;
        long nx = x + (l.symbol == 'a' ? l.sign : 0), ny = y + (l.symbol == 'b' ? l.sign : 0);
        if (!reachable(nx, ny, static_cast<long>(L - cur.size()) - 1)) continue;
        cur.push_back(l);
        dfs(nx, ny);
        cur.pop_back();
      }
    };
    dfs(0, 0);
    return out;
  }
};

Outcome oracle_agreement() {
  auto t0 = Clock::now();
  Criterion9 c9;
  RelatorSearch search(c9.pres);
  auto equal = [&](const Word& w) { return search.decide(w, Word()).kind == EqualityVerdict::Kind::Equal; };
  std::ostringstream d;
  long disagreements = 0, replays_bad = 0;
  auto note = [&](const std::string& what, const Word& w) {
    if (disagreements++ < 3) d << what << " on " << format_word(w) << "; ";
  };

  // Every lattice word of length <= 16 against the two-conjugate classes.
  auto words = Criterion9::lattice_words(16);
  auto classes = c9.two_conjugates(16);
  std::vector<Word> equal_words, other_words;
  for (const Word& w : words) {
    auto v = search.decide(w, Word());
    bool e = v.kind == EqualityVerdict::Kind::Equal;
    bool o = w.empty() || classes.count(cyclic_canonical(w));
    (e ? equal_words : other_words).push_back(w);
    if (e) {
      if (!replay_equality(w, Word(), c9.pres, v.certificate)) ++replays_bad;
    }
    if (e != o) note("class oracle", w);
  }
  double t_lattice = seconds_since(t0);

  // Literal insertion search: every Equal word, every lattice word up to
  // length 8, and a fixed sample of the rest.
  std::vector<Word> literal = equal_words;
  std::vector<Word> rest;
  for (const Word& w : other_words) (w.size() <= 8 ? literal : rest).push_back(w);
  std::mt19937_64 rng(9);
  std::shuffle(rest.begin(), rest.end(), rng);
  rest.resize(std::min<std::size_t>(rest.size(), 300));
  literal.insert(literal.end(), rest.begin(), rest.end());
  std::size_t literal_count = 0;
  for (const Word& w : literal) {
    ++literal_count;
    if (c9.brute(w) != equal(w)) note("insertion search", w);
  }
  double t_literal = seconds_since(t0) - t_lattice;

  // Off-lattice words: all of length <= 10, then a random sample up to 16.
  std::size_t off = 0;
  auto on_lattice = [](const Word& w) {
    auto ab = abelianize(w, "ab");
    return ab[0] * 5 == ab[1] * 3;
  };
  for (const Word& w : ball("ab", 10))
    if (!on_lattice(w)) {
      ++off;
      if (search.decide(w, Word()).kind != EqualityVerdict::Kind::NotEqual) note("off-lattice", w);
    }
  std::uniform_int_distribution<int> len(11, 16), letter(0, 3);
  const std::vector<Letter> gens{{'a', 1}, {'a', -1}, {'b', 1}, {'b', -1}};
  for (int t = 0; t < 100000; ++t) {
    std::vector<Letter> raw;
    int n = len(rng);
    while (static_cast<int>(raw.size()) < n) {
      Letter l = gens[static_cast<std::size_t>(letter(rng))];
      if (!raw.empty() && raw.back().cancels(l)) continue;
      raw.push_back(l);
    }
    Word w = Word::from_reduced(raw);
    if (on_lattice(w)) continue;
    ++off;
    if (search.decide(w, Word()).kind != EqualityVerdict::Kind::NotEqual) note("off-lattice", w);
  }

  // Pairs reduce to u v^-1.
  std::size_t pairs = 0;
  auto b8 = ball("ab", 8);
  std::uniform_int_distribution<std::size_t> pick(0, b8.size() - 1);
  for (int t = 0; t < 20000; ++t) {
    const Word& u = b8[pick(rng)];
    const Word& v = b8[pick(rng)];
    ++pairs;
    if ((equal_mod_relators(u, v, c9.pres).kind == EqualityVerdict::Kind::Equal) != equal(u * v.inverse()))
      note("pair reduction", u * v.inverse());
  }
  for (const Word& w : equal_words) {
    if (w.size() > 16) continue;
    std::size_t h = w.size() / 2;
    Word u = w.prefix(h), v = Word::from_reduced({w.letters().begin() + static_cast<long>(h), w.letters().end()}).inverse();
    ++pairs;
    if (equal_mod_relators(u, v, c9.pres).kind != EqualityVerdict::Kind::Equal) note("pair reduction", w);
  }
  double t = seconds_since(t0);
  d << words.size() << " lattice words (" << equal_words.size() << " Equal, " << classes.size()
    << " two-conjugate classes) in " << fixed(t_lattice, 1) << " s; literal insertion search on " << literal_count
    << " words in " << fixed(t_literal, 1) << " s; " << off << " off-lattice words; " << pairs << " pairs; "
    << disagreements << " disagreements, " << replays_bad << " bad replays, " << fixed(t, 1) << " s";
  return {disagreements == 0 && replays_bad == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"identity suite", identities},
      {"homology", homology},
      {"b < 1 from 1 < k", beta_from_k},
      {"global fixed point", fixed_point},
      {"symbolic family", family},
      {"negative control 7/1", negative_control},
      {"leaf-space property suite", property_suite},
      {"scenario regressions", scenarios},
      {"oracle agreement", oracle_agreement},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int n = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(n)) continue;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << "criterion " << n << " [" << criteria[i].first << "]: " << (o.ok ? "PASS" : "FAIL") << " ("
              << fixed(seconds_since(t0)) << " s) " << o.detail << std::endl;
  }
  return failed ? 1 : 0;
}
