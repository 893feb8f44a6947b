#include <catch_amalgamated.hpp>

#include <random>

#include "laminar/words.hpp"

using namespace laminar;

namespace {

const Alphabet kAB = "ab";

Word W(const char* s, const Alphabet& al = kAB) { return parse_word(s, al); }

// Naive reducer: delete the first cancelling pair until none is left.
std::vector<Letter> naive_reduce(std::vector<Letter> v) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i].symbol == v[i + 1].symbol && v[i].sign == -v[i + 1].sign) {
        v.erase(v.begin() + static_cast<long>(i), v.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
  }
  return v;
}

std::vector<Letter> random_letters(std::mt19937_64& rng, std::size_t n, const Alphabet& al) {
  std::uniform_int_distribution<std::size_t> g(0, al.size() - 1);
  std::bernoulli_distribution s(0.5);
  std::vector<Letter> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({al[g(rng)], static_cast<std::int8_t>(s(rng) ? 1 : -1)});
  return v;
}

BigInt gcd_big(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

BigInt det(std::vector<std::vector<BigInt>> a) {
  // cofactor expansion; inputs are at most 3x3
  if (a.size() == 1) return a[0][0];
  BigInt d = 0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    std::vector<std::vector<BigInt>> minor;
    for (std::size_t i = 1; i < a.size(); ++i) {
      std::vector<BigInt> row;
      for (std::size_t k = 0; k < a.size(); ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    BigInt t = a[0][j] * det(minor);
    d += (j % 2 == 0) ? t : BigInt(-t);
  }
  return d;
}

// gcd of all k x k minors (the k-th determinantal divisor).
BigInt determinantal_divisor(const IntMatrix& m, std::size_t k) {
  BigInt g = 0;
  std::vector<std::size_t> rows(m.row_count()), cols(m.cols);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<bool> rsel(rows.size(), false), csel(cols.size(), false);
  std::fill(rsel.end() - static_cast<long>(k), rsel.end(), true);
  do {
    std::fill(csel.begin(), csel.end(), false);
    std::fill(csel.end() - static_cast<long>(k), csel.end(), true);
    do {
      std::vector<std::vector<BigInt>> sub;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rsel[i]) continue;
        std::vector<BigInt> row;
        for (std::size_t j = 0; j < cols.size(); ++j)
          if (csel[j]) row.push_back(m.rows[i][j]);
        sub.push_back(row);
      }
      g = gcd_big(g, det(sub));
    } while (std::next_permutation(csel.begin(), csel.end()));
  } while (std::next_permutation(rsel.begin(), rsel.end()));
  return g;
}

}  // namespace

TEST_CASE("reduce cancels adjacent inverse pairs", "[words]") {
  CHECK(reduce({{'a', 1}, {'a', -1}, {'b', 1}}, kAB) == W("b"));
  CHECK(reduce({}, kAB).empty());
  CHECK(W("a^3") * W("a^-2 b a^-1") * W("a^3") == W("a b a^2"));
  CHECK_THROWS_AS(reduce({{'c', 1}}, kAB), Error);
  CHECK_THROWS_AS(parse_word("a c", kAB), Error);
}

TEST_CASE("reduce agrees with the naive reducer and is idempotent", "[words]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    auto raw = random_letters(rng, 1 + t % 30, "abk");
    Word w = reduce(raw, "abk");
    CHECK(w.letters() == naive_reduce(raw));
    CHECK(Word(w.letters()) == w);
    CHECK(w.size() <= raw.size());
    CHECK((w * w.inverse()).empty());
  }
}

TEST_CASE("parse and format round trip", "[words]") {
  CHECK(format_word(W("a^2 b a^2 b^2 A b^2")) == "a^2 b a^2 b^2 A b^2");
  CHECK(W("aA") == Word());
  CHECK(W("a^-1") == W("A"));
  CHECK(W("A^2") == W("a^-2"));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Word w = reduce(random_letters(rng, 20, "abk"), "abk");
    CHECK(parse_word(format_word(w), "abk") == w);
  }
}

TEST_CASE("compose, inverse and power", "[words]") {
  CHECK(compose(W("a"), W("A")).empty());
  CHECK(format_word(power(Word::gen('k'), 3)) == "k^3");
  CHECK(power(W("ab"), 0).empty());
  CHECK(power(W("ab"), -3) == power(W("ab"), 3).inverse());
  Word m = W("A B^2");
  Word l = W("a B a^2") * power(m, -18);
  CHECK(l.size() == 58);
  CHECK(abelianize(l, kAB) == std::vector<long>{21, 35});
}

TEST_CASE("substitute is a homomorphism", "[words]") {
  CHECK(substitute(W("m", "m"), {{'m', W("A B^2")}}) == W("A B^2"));
  Word w = W("a b A b^3");
  CHECK(substitute(w, {{'a', W("a")}, {'b', W("b")}}) == w);
  for (long p : {19L, 17L, 37L, 21L, -5L})
    for (long q : {1L, 2L, 3L}) {
      Word mp_lq = power(Word::gen('m'), p) * power(Word::gen('l'), q);
      Word img = substitute(mp_lq, {{'m', power(Word::gen('k'), q)}, {'l', power(Word::gen('k'), -p)}});
      CHECK(img.empty());
    }
  CHECK_THROWS_AS(substitute(W("a b"), {{'a', W("b")}}), Error);
}

TEST_CASE("cyclic operations", "[words]") {
  Word w = W("B a b^2 b");
  auto [k, core] = cyclic_reduce(w);
  CHECK(core == W("a b^2"));
  CHECK(is_cyclically_reduced(core));
  CHECK(rotate(W("a b k", "abk"), 1) == W("b k a", "abk"));
  CHECK(cyclic_canonical(W("b k a", "abk")) == cyclic_canonical(W("k a b", "abk")));
}

TEST_CASE("ball sizes match 1 + 4(3^r - 1)/2", "[words]") {
  CHECK(ball(kAB, 0).size() == 1);
  CHECK(ball(kAB, 1).size() == 5);
  CHECK(ball(kAB, 2).size() == 17);
  for (std::size_t r = 0; r <= 6; ++r) {
    std::size_t want = 1, layer = 4;
    for (std::size_t i = 1; i <= r; ++i, layer *= 3) want += layer;
    auto b = ball(kAB, r);
    CHECK(b.size() == want);
    std::unordered_set<Word, WordHash> uniq(b.begin(), b.end());
    CHECK(uniq.size() == b.size());
  }
}

TEST_CASE("relation matrix rows are exponent sums", "[words]") {
  Presentation r1{kAB, {W("a^2 b a^2 b^2 A b^2")}};
  auto m = relation_matrix(r1);
  REQUIRE(m.row_count() == 1);
  CHECK(m.rows[0] == std::vector<BigInt>{3, 5});
  Word mw = W("A B^2"), lw = W("a B a^2") * power(mw, -18);
  Presentation s{kAB, {r1.relators[0], power(mw, 19) * lw}};
  CHECK(relation_matrix(s).rows[1] == std::vector<BigInt>{2, -3});
  CHECK(relation_matrix(Presentation{kAB, {}}).row_count() == 0);
}

TEST_CASE("invariant factors", "[words][smith]") {
  auto f = invariant_factors(IntMatrix{2, {{3, 5}, {2, -3}}});
  CHECK(f.factors == std::vector<BigInt>{1, 19});
  CHECK(f.free_rank == 0);
  f = invariant_factors(IntMatrix{2, {{3, 5}}});
  CHECK(f.factors == std::vector<BigInt>{1});
  CHECK(f.free_rank == 1);
  f = invariant_factors(IntMatrix{3, {{0, 0, 0}}});
  CHECK(f.factors.empty());
  CHECK(f.free_rank == 3);
}

TEST_CASE("invariant factors match determinantal divisors", "[words][smith]") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(-9, 9), dim(1, 3);
  for (int t = 0; t < 300; ++t) {
    IntMatrix m;
    std::size_t r = static_cast<std::size_t>(dim(rng));
    m.cols = static_cast<std::size_t>(dim(rng));
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<BigInt> row;
      for (std::size_t j = 0; j < m.cols; ++j) row.push_back(e(rng));
      m.rows.push_back(row);
    }
    auto f = invariant_factors(m);
    BigInt prod = 1;
    std::size_t rank = 0;
    for (std::size_t k = 1; k <= std::min(r, m.cols); ++k) {
      BigInt d = determinantal_divisor(m, k);
      if (d == 0) break;
      rank = k;
      REQUIRE(f.factors.size() >= k);
      prod *= f.factors[k - 1];
      CHECK(prod == d);
    }
    CHECK(f.factors.size() == rank);
    CHECK(f.free_rank == m.cols - rank);
    for (std::size_t k = 1; k < f.factors.size(); ++k) CHECK(f.factors[k] % f.factors[k - 1] == 0);
  }
}

TEST_CASE("invariant factors are unchanged by row operations and swaps", "[words][smith]") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> e(-20, 20), pick(0, 2);
  for (int t = 0; t < 100; ++t) {
    IntMatrix m{3, {}};
    for (int i = 0; i < 3; ++i) m.rows.push_back({e(rng), e(rng), e(rng)});
    auto before = invariant_factors(m);
    for (int s = 0; s < 10; ++s) {
      std::size_t i = static_cast<std::size_t>(pick(rng)), j = static_cast<std::size_t>(pick(rng));
      if (i == j) continue;
      BigInt c = e(rng);
      for (std::size_t k = 0; k < 3; ++k) m.rows[i][k] += c * m.rows[j][k];
      std::swap(m.rows[i], m.rows[j]);
      for (auto& row : m.rows) std::swap(row[0], row[2]);
    }
    auto after = invariant_factors(m);
    CHECK(after.factors == before.factors);
    CHECK(after.free_rank == before.free_rank);
  }
}

TEST_CASE("equality modulo the knot relator", "[words][equality]") {
  Presentation r1{kAB, {W("a^2 b a^2 b^2 A b^2")}};
  auto v = equal_mod_relators(W("a b a^2"), W("A B^2 a B^2"), r1);
  CHECK(v.kind == EqualityVerdict::Kind::Equal);
  CHECK(v.depth() == 1);
  CHECK(replay_equality(W("a b a^2"), W("A B^2 a B^2"), r1, v.certificate));
  Word w = W("a b^3 A");
  v = equal_mod_relators(w, w, r1);
  CHECK(v.kind == EqualityVerdict::Kind::Equal);
  CHECK(v.depth() == 0);
  v = equal_mod_relators(W("a"), W("b"), r1);
  CHECK(v.kind == EqualityVerdict::Kind::NotEqual);
  CHECK(v.witness == std::vector<BigInt>{1, -1});
  CHECK_THROWS_AS(equal_mod_relators(W("a"), W("b"), r1, EqualityBudget{0, 6, 256}), Error);
}

TEST_CASE("equality certificates replay and agree with abelianization", "[words][equality]") {
  Presentation r1{kAB, {W("a^2 b a^2 b^2 A b^2")}};
  RelatorSearch rs(r1);
  RowLattice lat(relation_matrix(r1));
  std::size_t equal = 0;
  for (const Word& u : ball(kAB, 4)) {
    auto v = rs.decide(u, W("a b a^2"));
    auto d = abelianize(u * W("a b a^2").inverse(), kAB);
    bool in_lattice = lat.contains({BigInt(d[0]), BigInt(d[1])});
    if (v.kind == EqualityVerdict::Kind::Equal) {
      ++equal;
      CHECK(in_lattice);
      CHECK(replay_equality(u, W("a b a^2"), r1, v.certificate));
    }
    CHECK((v.kind == EqualityVerdict::Kind::NotEqual) == !in_lattice);
  }
  CHECK(equal >= 1);
}

TEST_CASE("a tampered certificate does not replay", "[words][equality]") {
  Presentation r1{kAB, {W("a^2 b a^2 b^2 A b^2")}};
  auto v = equal_mod_relators(W("a b a^2"), W("A B^2 a B^2"), r1);
  REQUIRE(v.kind == EqualityVerdict::Kind::Equal);
  auto cert = v.certificate;
  cert[0].rotation = (cert[0].rotation + 1) % 10;
  CHECK_FALSE(replay_equality(W("a b a^2"), W("A B^2 a B^2"), r1, cert));
}
