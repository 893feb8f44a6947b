#pragma once

// Property suite for leaf-space models and a seeded random model generator.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "laminar/leafspace.hpp"

namespace laminar::leaf {

struct Violation {
  std::string check;  // "(i)" .. "(vii)"
  std::string autom;
  std::string detail;
};

struct SuiteReport {
  std::map<std::string, std::size_t> checked;  // instances examined per check
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void merge(const SuiteReport& o) {
    for (const auto& [k, v] : o.checked) checked[k] += v;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  }
};

inline const std::vector<std::pair<std::string, std::string>>& suite_checks() {
  static const std::vector<std::pair<std::string, std::string>> c{
      {"(i)", "x in C_g iff x and xg are comparable"},
      {"(ii)", "d(x,xg) even and nonzero implies Nonsep(g) empty"},
      {"(iii)", "C_g and C_g with Nonsep(g) are spine-connected"},
      {"(iv)", "Nonsep(g) empty: the axis from any x in C_g equals C_g"},
      {"(v)", "Nonsep(g) nonempty: C_g is Fix(g) plus the points on local axes"},
      {"(vi)", "g preserves compare and non-separation"},
      {"(vii)", "g preserves the extended order on the completion"},
  };
  return c;
}

namespace detail {

// All pairs when they fit in the budget, a seeded sample otherwise.
inline std::vector<std::pair<int, int>> pairs_of(const std::vector<int>& a, const std::vector<int>& b, std::size_t budget,
                                                 std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> out;
  if (a.empty() || b.empty()) return out;
  if (a.size() * b.size() <= budget) {
    for (int x : a)
      for (int y : b) out.emplace_back(x, y);
    return out;
  }
  std::uniform_int_distribution<std::size_t> da(0, a.size() - 1), db(0, b.size() - 1);
  for (std::size_t i = 0; i < budget; ++i) out.emplace_back(a[da(rng)], b[db(rng)]);
  return out;
}

}  // namespace detail

inline SuiteReport check_auto(const Model& m, const TreeAuto& g, std::size_t budget, std::mt19937_64& rng) {
  SuiteReport r;
  auto fail = [&](const std::string& c, const std::string& d) { r.violations.push_back({c, g.name, d}); };
  auto name = [&](int p) { return m.point_name(p); };
  const TreeAuto inv = invert(g);
  const PointSets s = invariant_point_sets(m, g);
  const std::set<int> cg(s.cg.begin(), s.cg.end()), nonsep(s.nonsep.begin(), s.nonsep.end()),
      fix(s.fix.begin(), s.fix.end());

  for (int x : s.domain) {
    ++r.checked["(i)"];
    Cmp c = m.compare(x, g(x));
    bool comparable = c != Cmp::Incomparable;
    if (comparable != cg.count(x))
      fail("(i)", name(x) + ": d(x,xg)=" + std::to_string(m.distance(x, g(x))) + ", compare " + to_string(c));
    int d = m.distance(x, g(x));
    ++r.checked["(ii)"];
    if (d != 0 && d % 2 == 0 && !nonsep.empty())
      fail("(ii)", name(x) + ": d(x,xg)=" + std::to_string(d) + " but Nonsep contains " + name(*nonsep.begin()));
  }

  auto spine_connected = [&](const std::set<int>& S, const std::string& label) {
    std::vector<int> v(S.begin(), S.end());
    for (const auto& [x, y] : detail::pairs_of(v, v, budget, rng)) {
      ++r.checked["(iii)"];
      for (int z : m.spine(x, y).points) {
        if (!m.in_core(z) || S.count(z)) continue;
        // Points outside the evaluated domain carry no verdict.
        if (std::find(s.domain.begin(), s.domain.end(), z) == s.domain.end()) continue;
        fail("(iii)", label + ": [[" + name(x) + ", " + name(y) + "]] contains " + name(z));
        break;
      }
    }
  };
  spine_connected(cg, "C_g");
  std::set<int> cgn = cg;
  cgn.insert(nonsep.begin(), nonsep.end());
  spine_connected(cgn, "C_g with Nonsep(g)");

  if (nonsep.empty()) {
    std::vector<int> starts;
    for (int x : s.cg) starts.push_back(x);
    std::shuffle(starts.begin(), starts.end(), rng);
    if (starts.size() > 3) starts.resize(3);
    for (int x : starts) {
      ++r.checked["(iv)"];
      auto ax = axis(m, g, x);
      std::vector<int> want;
      for (int z : s.cg)
        if (m.in_core(z)) want.push_back(z);
      std::vector<int> got;
      for (int z : ax)
        if (std::binary_search(s.domain.begin(), s.domain.end(), z)) got.push_back(z);
      if (got != want)
        fail("(iv)", "axis from " + name(x) + " has " + std::to_string(got.size()) + " points, C_g has " +
                         std::to_string(want.size()));
    }
  } else {
    // Components of T minus Nonsep(g), indexed by point.
    std::vector<int> comp_of(m.points(), -1);
    auto comps = m.components_minus(s.nonsep);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (int p : comps[i].points) comp_of[static_cast<std::size_t>(p)] = static_cast<int>(i);
    for (int x : s.domain) {
      ++r.checked["(v)"];
      bool expect = fix.count(x) || on_local_axis(m, g, inv, s.nonsep, comp_of, x);
      if (expect != static_cast<bool>(cg.count(x)))
        fail("(v)", name(x) + (cg.count(x) ? " is in C_g but neither fixed nor on a local axis"
                                           : " lies on a local axis but not in C_g"));
    }
  }

  for (const auto& [x, y] : detail::pairs_of(s.domain, s.domain, budget, rng)) {
    ++r.checked["(vi)"];
    Cmp a = m.compare(x, y), b = m.compare(g(x), g(y));
    if (a != b)
      fail("(vi)", name(x) + " vs " + name(y) + ": " + to_string(a) + ", images " + to_string(b));
    else if (m.nonseparated(x, y) != m.nonseparated(g(x), g(y)))
      fail("(vi)", name(x) + " vs " + name(y) + ": non-separation not preserved");
  }

  const Completion c = completion(m);
  auto ext = c.extend(m, g);
  std::vector<int> elems;
  for (int x : s.domain) elems.push_back(x);
  for (std::size_t i = 0; i < c.ideals.size(); ++i) {
    std::size_t e = c.points + i;
    bool core = std::all_of(c.ideals[i].members.begin(), c.ideals[i].members.end(),
                            [&](int y) { return std::binary_search(s.domain.begin(), s.domain.end(), y); });
    if (core && ext[e] >= 0) elems.push_back(static_cast<int>(e));
  }
  auto ename = [&](int e) {
    return e < static_cast<int>(c.points) ? name(e) : "ideal[" + std::to_string(e - static_cast<int>(c.points)) + "]";
  };
  for (const auto& [u, v] : detail::pairs_of(elems, elems, budget, rng)) {
    ++r.checked["(vii)"];
    auto su = static_cast<std::size_t>(u), sv = static_cast<std::size_t>(v);
    Cmp a = c.compare(su, sv), b = c.compare(static_cast<std::size_t>(ext[su]), static_cast<std::size_t>(ext[sv]));
    if (a != b) fail("(vii)", ename(u) + " vs " + ename(v) + ": " + to_string(a) + ", images " + to_string(b));
  }
  return r;
}

// Runs every check on the given autos, their inverses and pairwise products.
inline SuiteReport run_property_suite(const Model& m, const std::vector<TreeAuto>& autos, std::size_t budget,
                                      std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<TreeAuto> all = autos;
  for (const auto& g : autos) all.push_back(invert(g));
  for (std::size_t i = 0; i < autos.size(); ++i)
    for (std::size_t j = 0; j < autos.size(); ++j)
      if (i != j) all.push_back(compose(autos[i], autos[j]));
  SuiteReport r;
  for (const auto& g : all) r.merge(check_auto(m, g, budget, rng));
  return r;
}

inline SuiteReport run_property_suite(const Model& m, std::size_t budget, std::uint64_t seed = 1) {
  std::vector<TreeAuto> autos = m.autos();
  autos.push_back(m.identity());
  return run_property_suite(m, autos, budget, seed);
}

// ---- random models ----

struct RandomModelSpec {
  int max_points = 40;   // per model, or per period for chains
  int max_classes = 4;   // likewise
  int periodic_every = 4;  // every n-th model is a periodic chain (0: never)
};

namespace detail {

struct Piece {
  int slots = 1;
  enum Far { Free, Glue, Class } far = Free;
  std::vector<Piece> kids;  // Glue: one; Class: the other members
  std::vector<Piece> via;   // Class: zero or one
  bool symmetric = false;   // Class members besides the parent are identical
};

class RandomModelWriter {
 public:
  RandomModelWriter(std::mt19937_64& rng, int max_points, int max_classes)
      : rng_(rng), points_left_(max_points), classes_left_(max_classes) {}

  Piece piece(int depth) {
    Piece p;
    p.slots = std::min(points_left_, 1 + static_cast<int>(rng_() % 3));
    points_left_ -= p.slots;
    int roll = static_cast<int>(rng_() % 100);
    if (depth >= 3 || points_left_ < 2) return p;
    if (roll < 35 && classes_left_ > 0 && (p.slots > 1 || points_left_ >= 3)) {
      // A one-slot arc would put its point in two classes.
      if (p.slots == 1) {
        p.slots = 2;
        --points_left_;
      }
      --classes_left_;
      p.far = Piece::Class;
      int extra = 1 + static_cast<int>(rng_() % 2);
      if (extra == 2 && rng_() % 2 == 0 && points_left_ >= 4) {
        p.symmetric = true;
        Piece k = piece(depth + 1);
        points_left_ -= count(k);
        if (points_left_ < 0) {
          points_left_ += count(k);
          k = Piece{};
          points_left_ -= 1;
        }
        p.kids = {k, k};
      } else {
        for (int i = 0; i < extra && points_left_ > 0; ++i) p.kids.push_back(piece(depth + 1));
      }
      if (rng_() % 2 == 0 && points_left_ > 0) p.via.push_back(piece(depth + 1));
      if (p.kids.empty()) p.far = Piece::Free;
    } else if (roll < 60) {
      p.far = Piece::Glue;
      p.kids.push_back(piece(depth + 1));
    }
    return p;
  }

  static int count(const Piece& p) {
    int n = p.slots;
    for (const auto& k : p.kids) n += count(k);
    for (const auto& k : p.via) n += count(k);
    return n;
  }

  // Emits the arcs of a piece attached by end `attach`; returns its arcs in
  // emission order.
  std::vector<std::string> emit(const Piece& p, EndKind attach) {
    std::string id = "a" + std::to_string(next_++);
    std::vector<std::string> arcs{id};
    arcs_ += "arc " + id + " slots=" + std::to_string(p.slots) + "\n";
    EndKind far = opposite(attach);
    auto end = [](const std::string& a, EndKind e) { return a + "." + to_string(e); };
    if (p.far == Piece::Glue) {
      auto sub = emit(p.kids[0], attach);
      arcs.insert(arcs.end(), sub.begin(), sub.end());
      wires_ += far == EndKind::End ? "glue " + end(id, EndKind::End) + " " + end(sub[0], EndKind::Start) + "\n"
                                    : "glue " + end(sub[0], EndKind::End) + " " + end(id, EndKind::Start) + "\n";
    } else if (p.far == Piece::Class) {
      std::string line = "nonsep " + end(id, far);
      std::vector<std::vector<std::string>> subs;
      for (const auto& k : p.kids) {
        subs.push_back(emit(k, far));
        line += " " + end(subs.back()[0], far);
      }
      for (const auto& s : subs) arcs.insert(arcs.end(), s.begin(), s.end());
      if (!p.via.empty()) {
        auto v = emit(p.via[0], attach);
        line += " via " + end(v[0], attach);
        arcs.insert(arcs.end(), v.begin(), v.end());
      }
      wires_ += line + "\n";
      if (p.symmetric) swap(subs[0], subs[1]);
    }
    return arcs;
  }

  void swap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::string line = "auto s" + std::to_string(autos_n_++) + ":";
    for (std::size_t i = 0; i < a.size(); ++i) line += " " + a[i] + "->" + b[i] + " " + b[i] + "->" + a[i];
    autos_ += line + "\n";
  }

  void add_auto(const std::string& line) { autos_ += "auto r" + std::to_string(autos_n_++) + ":" + line + "\n"; }
  void add_arc(const std::string& id, int slots) { arcs_ += "arc " + id + " slots=" + std::to_string(slots) + "\n"; }
  void add_wire(const std::string& line) { wires_ += line + "\n"; }
  void add_extra(const std::string& line) { extra_ += line + "\n"; }
  int points_left() const { return points_left_; }
  void spend(int n) { points_left_ -= n; }
  int classes_left() const { return classes_left_; }
  void spend_class() { --classes_left_; }
  std::mt19937_64& rng() { return rng_; }

  std::string text() const { return arcs_ + wires_ + extra_ + autos_; }

 private:
  std::mt19937_64& rng_;
  int points_left_, classes_left_;
  int next_ = 0, autos_n_ = 0;
  std::string arcs_, wires_, extra_, autos_;
};

// Finite model; the root is a single piece or a class of identical copies.
inline std::string random_finite_model(std::mt19937_64& rng, const RandomModelSpec& spec) {
  RandomModelWriter w(rng, spec.max_points, spec.max_classes);
  int kind = static_cast<int>(rng() % 3);
  if (kind == 0 || spec.max_classes == 0) {
    Piece p = w.piece(0);
    w.emit(p, EndKind::Start);
    return w.text();
  }
  w.spend_class();
  int copies = 2 + static_cast<int>(rng() % 2);
  Piece p = w.piece(1);
  int per = RandomModelWriter::count(p);
  while (per * copies > spec.max_points) {
    p = Piece{};
    per = 1;
  }
  w.spend(per * (copies - 1));
  EndKind member = rng() % 2 ? EndKind::End : EndKind::Start;
  std::vector<std::vector<std::string>> subs;
  std::string line = "nonsep";
  for (int i = 0; i < copies; ++i) {
    subs.push_back(w.emit(p, member));
    line += " " + subs.back()[0] + "." + to_string(member);
  }
  if (w.points_left() > 0 && rng() % 2) {
    Piece stem = w.piece(2);
    auto v = w.emit(stem, opposite(member));
    line += " via " + v[0] + "." + to_string(opposite(member));
  }
  w.add_wire(line);
  std::string rot;
  for (int i = 0; i < copies; ++i)
    for (std::size_t j = 0; j < subs[0].size(); ++j)
      rot += " " + subs[static_cast<std::size_t>(i)][j] + "->" + subs[static_cast<std::size_t>((i + 1) % copies)][j];
  w.add_auto(rot);
  return w.text();
}

// Periodic chain: axis arcs joined by gluings or class junctions, an even
// number of classes per period so that the shift preserves orientation.
inline std::string random_chain_model(std::mt19937_64& rng, const RandomModelSpec& spec) {
  RandomModelWriter w(rng, std::min(spec.max_points, 12), std::min(spec.max_classes, 4));
  int r = 1 + static_cast<int>(rng() % 3);
  std::vector<bool> cls(static_cast<std::size_t>(r));
  int ncls = 0;
  for (auto&& c : cls) {
    c = w.classes_left() - ncls > 0 && rng() % 2;
    ncls += c;
  }
  if (ncls % 2) {
    auto off = std::find(cls.begin(), cls.end(), false);
    if (off != cls.end() && w.classes_left() > ncls)
      *off = true;
    else
      *std::find(cls.begin(), cls.end(), true) = false;
  }
  if (r == 1 && cls[0]) {
    // One arc per period cannot alternate; use two.
    r = 2;
    cls = {true, true};
  }
  std::vector<std::string> ids;
  std::string all;
  for (int i = 0; i < r; ++i) {
    ids.push_back("x" + std::to_string(i));
    bool both = cls[static_cast<std::size_t>(i)] && cls[static_cast<std::size_t>((i + r - 1) % r)];
    int slots = (both ? 2 : 1) + static_cast<int>(rng() % 2);
    w.add_arc(ids.back(), slots);
    w.spend(slots);
  }
  bool fwd = true;
  for (int i = 0; i < r; ++i) {
    std::string a = ids[static_cast<std::size_t>(i)];
    std::string b = i + 1 < r ? ids[static_cast<std::size_t>(i + 1)] : ids[0] + "+1";
    if (!cls[static_cast<std::size_t>(i)]) {
      w.add_wire(fwd ? "glue " + a + ".end " + b + ".start" : "glue " + b + ".end " + a + ".start");
      continue;
    }
    w.spend_class();
    EndKind member = fwd ? EndKind::End : EndKind::Start;
    std::string line = "nonsep " + a + "." + to_string(member) + " " + b + "." + to_string(member);
    if (w.points_left() > 1 && rng() % 2) {
      Piece extra;
      extra.slots = 1 + static_cast<int>(rng() % 2);
      w.spend(extra.slots);
      auto sub = w.emit(extra, member);
      line += " " + sub[0] + "." + to_string(member);
    }
    if (w.points_left() > 1 && rng() % 3 == 0) {
      Piece v;
      v.slots = 1;
      w.spend(1);
      auto sub = w.emit(v, opposite(member));
      line += " via " + sub[0] + "." + to_string(opposite(member));
    }
    w.add_wire(line);
    fwd = !fwd;
  }
  w.add_extra("period shift=1 window=7");
  return w.text();
}

}  // namespace detail

// Model text for the n-th random model of a seeded stream.
inline std::string random_model_text(std::uint64_t seed, std::size_t index, const RandomModelSpec& spec = {}) {
  std::mt19937_64 rng(seed * 1000003ull + index);
  if (spec.periodic_every > 0 && index % static_cast<std::size_t>(spec.periodic_every) ==
                                     static_cast<std::size_t>(spec.periodic_every) - 1)
    return detail::random_chain_model(rng, spec);
  return detail::random_finite_model(rng, spec);
}

struct RandomSuiteResult {
  std::size_t models = 0, periodic = 0, autos = 0, max_points = 0;
  SuiteReport report;
};

inline RandomSuiteResult run_random_suite(std::size_t count, std::uint64_t seed, std::size_t budget = 400,
                                          const RandomModelSpec& spec = {}) {
  RandomSuiteResult out;
  for (std::size_t i = 0; i < count; ++i) {
    Model m = load_model(random_model_text(seed, i, spec));
    ++out.models;
    out.periodic += m.periodic();
    out.autos += m.autos().size();
    out.max_points = std::max(out.max_points, m.periodic() ? m.points() / static_cast<std::size_t>(m.window()) : m.points());
    auto r = run_property_suite(m, budget, seed + i);
    for (auto& v : r.violations) v.autom = "model " + std::to_string(i) + " " + v.autom;
    out.report.merge(r);
  }
  return out;
}

}  // namespace laminar::leaf
