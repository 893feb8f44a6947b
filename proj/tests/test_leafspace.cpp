#include <catch_amalgamated.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <random>
#include <set>

#include "laminar/leafsuite.hpp"
#include "laminar/scenarios.hpp"

using namespace laminar;
using namespace laminar::leaf;
using Catch::Matchers::ContainsSubstring;

namespace {

// Random finite tree model built together with an independent adjacency
// graph: point nodes named "A3:1", one hub node per class.
struct Oracle {
  std::string text;
  std::vector<std::string> names;          // node id -> point name, "" for hubs
  std::vector<std::vector<int>> adj;
  std::vector<int> plus_nb, minus_nb;      // -1 for a free ray
  std::vector<int> hub_of;                 // point -> hub it is a member of, or -1
  std::vector<char> is_hub;

  int add(const std::string& name) {
    names.push_back(name);
    adj.emplace_back();
    plus_nb.push_back(-1);
    minus_nb.push_back(-1);
    hub_of.push_back(-1);
    is_hub.push_back(name.empty());
    return static_cast<int>(names.size()) - 1;
  }
  void link(int u, int v) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }

  std::set<int> component(int start, int removed) const {
    std::set<int> seen;
    if (start < 0) return seen;
    std::vector<int> st{start};
    seen.insert(start);
    while (!st.empty()) {
      int u = st.back();
      st.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)])
        if (v != removed && seen.insert(v).second) st.push_back(v);
    }
    return seen;
  }

  std::vector<int> path(int x, int y) const {
    std::vector<int> par(names.size(), -2);
    par[static_cast<std::size_t>(x)] = -1;
    std::vector<int> q{x};
    for (std::size_t i = 0; i < q.size(); ++i)
      for (int v : adj[static_cast<std::size_t>(q[i])])
        if (par[static_cast<std::size_t>(v)] == -2) {
          par[static_cast<std::size_t>(v)] = q[i];
          q.push_back(v);
        }
    std::vector<int> out;
    for (int u = y; u != -1; u = par[static_cast<std::size_t>(u)]) out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

struct End {
  int arc;
  bool end;  // false: start
};

Oracle random_tree(std::mt19937_64& rng, int arcs, bool allow_via) {
  Oracle o;
  std::vector<std::vector<int>> pts;
  std::vector<std::string> ids;
  std::uniform_int_distribution<int> slots(2, 3);  // one-slot arcs may not sit in two classes
  std::ostringstream text;
  for (int a = 0; a < arcs; ++a) {
    ids.push_back("A" + std::to_string(a));
    int n = slots(rng);
    text << "arc " << ids.back() << " slots=" << n << "\n";
    pts.emplace_back();
    for (int s = 0; s < n; ++s) {
      pts.back().push_back(o.add(ids.back() + ":" + std::to_string(s)));
      if (s) {
        o.link(pts[a][static_cast<std::size_t>(s) - 1], pts[a][static_cast<std::size_t>(s)]);
        o.plus_nb[static_cast<std::size_t>(pts[a][static_cast<std::size_t>(s) - 1])] = pts[a][static_cast<std::size_t>(s)];
        o.minus_nb[static_cast<std::size_t>(pts[a][static_cast<std::size_t>(s)])] = pts[a][static_cast<std::size_t>(s) - 1];
      }
    }
  }
  auto point_at = [&](End e) { return e.end ? pts[static_cast<std::size_t>(e.arc)].back() : pts[static_cast<std::size_t>(e.arc)].front(); };
  auto name = [&](End e) { return ids[static_cast<std::size_t>(e.arc)] + (e.end ? ".end" : ".start"); };
  auto attach = [&](End e, int nb) {
    int p = point_at(e);
    (e.end ? o.plus_nb : o.minus_nb)[static_cast<std::size_t>(p)] = nb;
  };
  struct Cls {
    bool sink;
    std::vector<End> members;
    std::optional<End> via;
    int hub = -1;
  };
  std::vector<Cls> classes;
  std::vector<End> free_ends{{0, false}, {0, true}};
  for (int a = 1; a < arcs; ++a) {
    std::uniform_int_distribution<int> pick(0, 3);
    int choice = pick(rng);
    if ((choice == 2 || choice == 3) && classes.empty()) choice = 0;
    if (choice == 3 && !allow_via) choice = 2;
    if (choice == 3) {
      std::vector<std::size_t> open;
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (!classes[c].via) open.push_back(c);
      if (open.empty()) choice = 2;
      else {
        Cls& c = classes[open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)]];
        End v{a, c.sink ? false : true};
        c.via = v;
        o.link(c.hub, point_at(v));
        attach(v, c.hub);
        free_ends.push_back({a, !v.end});
        continue;
      }
    }
    if (choice == 2) {
      Cls& c = classes[std::uniform_int_distribution<std::size_t>(0, classes.size() - 1)(rng)];
      End e{a, c.sink};
      c.members.push_back(e);
      o.link(c.hub, point_at(e));
      attach(e, c.hub);
      o.hub_of[static_cast<std::size_t>(point_at(e))] = c.hub;
      free_ends.push_back({a, !e.end});
      continue;
    }
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, free_ends.size() - 1)(rng);
    End f = free_ends[k];
    free_ends.erase(free_ends.begin() + static_cast<long>(k));
    if (choice == 0) {
      End e{a, !f.end};
      text << "glue " << name(f.end ? f : e) << " " << name(f.end ? e : f) << "\n";
      o.link(point_at(f), point_at(e));
      attach(f, point_at(e));
      attach(e, point_at(f));
      free_ends.push_back({a, f.end});
    } else {
      Cls c{f.end, {f, {a, f.end}}, std::nullopt, o.add("")};
      for (End e : c.members) {
        o.link(c.hub, point_at(e));
        attach(e, c.hub);
        o.hub_of[static_cast<std::size_t>(point_at(e))] = c.hub;
      }
      free_ends.push_back({a, !f.end});
      classes.push_back(c);
    }
  }
  for (const auto& c : classes) {
    text << "nonsep";
    for (End e : c.members) text << " " << name(e);
    if (c.via) text << " via " << name(*c.via);
    text << "\n";
  }
  o.text = text.str();
  return o;
}

std::vector<int> point_nodes(const Oracle& o) {
  std::vector<int> out;
  for (std::size_t i = 0; i < o.names.size(); ++i)
    if (!o.is_hub[i]) out.push_back(static_cast<int>(i));
  return out;
}

Model arc_model(int slots) { return load_model("arc A slots=" + std::to_string(slots) + "\n"); }

std::string slurp_model(const std::string& name) {
  std::ifstream in(std::string(LAMINAR_MODELS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("loading the sample models", "[leafspace]") {
  Model one = load_model(slurp_model("single-arc.nht"));
  CHECK(one.points() == 5);
  CHECK(one.classes().empty());
  CHECK_THROWS_WITH(load_model(slurp_model("circle.nht")), ContainsSubstring("NotSimplyConnected"));
  Model pair = load_model(slurp_model("basic-pair.nht"));
  CHECK(hausdorff_quotient(pair).edges() == 2);
  CHECK(hausdorff_quotient(pair).size() == 3);
  CHECK_NOTHROW(load_model(slurp_model("tripod.nht")));
  CHECK_NOTHROW(load_model(slurp_model("line.nht")));
  CHECK_NOTHROW(load_model(slurp_model("fig-ax-chain.nht")));
}

TEST_CASE("model text errors", "[leafspace]") {
  CHECK_THROWS_WITH(load_model("arc A slots=2\nfrobnicate A\n"), ContainsSubstring("unknown directive"));
  CHECK_THROWS_WITH(load_model("arc A slots=2\nglue A.end B.start\n"), ContainsSubstring("DanglingReference"));
  CHECK_THROWS_AS(load_model(""), Error);
  CHECK_THROWS_AS(load_model("arc A slots=2\narc B slots=2\narc C slots=2\nnonsep A.end B.end\nnonsep B.end C.end\n"),
                  Error);
  Model m = arc_model(3);
  CHECK_THROWS_WITH(m.point("A:7"), ContainsSubstring("DanglingReference"));
  CHECK_THROWS_WITH(m.point("nope"), ContainsSubstring("DanglingReference"));
}

TEST_CASE("compare examples", "[leafspace]") {
  Model one = arc_model(5);
  CHECK(one.compare(one.point("A:1"), one.point("A:3")) == Cmp::Less);
  CHECK(one.compare(one.point("A:3"), one.point("A:1")) == Cmp::Greater);
  CHECK(one.compare(one.point("A:2"), one.point("A:2")) == Cmp::Equal);
  Model pair = load_model(slurp_model("basic-pair.nht"));
  CHECK(pair.compare(pair.point("a"), pair.point("b")) == Cmp::Incomparable);
  Model tri = load_model(slurp_model("tripod.nht"));
  CHECK(tri.compare(tri.point("A:1"), tri.point("B:1")) == Cmp::Incomparable);
  CHECK(tri.compare(tri.point("c"), tri.point("A:1")) == Cmp::Less);
}

TEST_CASE("spine examples", "[leafspace]") {
  Model one = arc_model(5);
  auto s = one.spine(one.point("A:0"), one.point("A:4"));
  CHECK(s.d() == 0);
  CHECK(s.points.size() == 5);
  Model pair = load_model(slurp_model("basic-pair.nht"));
  s = pair.spine(pair.point("A:0"), pair.point("B:0"));
  CHECK(s.d() == 1);
  REQUIRE(s.intervals.size() == 2);
  CHECK(pair.nonseparated(s.intervals[0].second, s.intervals[1].first));
  // two classes between x and x kappa in each period
  Model ax = load_model(slurp_model("fig-ax-chain.nht"));
  const TreeAuto& k = ax.auto_named("shift");
  int x = ax.point("x");
  CHECK(ax.distance(x, k(x)) == 2);
  CHECK(ax.distance(x, k(k(x))) == 4);
}

TEST_CASE("side sets, spines and compare against a graph oracle", "[leafspace][oracle]") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 60; ++t) {
    Oracle o = random_tree(rng, 2 + t % 9, true);
    INFO(o.text);
    Model m = load_model(o.text);
    auto nodes = point_nodes(o);
    REQUIRE(m.points() == nodes.size());
    std::map<int, int> id;  // oracle node -> model point
    for (int u : nodes) id[u] = m.point(o.names[static_cast<std::size_t>(u)]);
    std::map<int, std::set<int>> plus, minus;
    for (int u : nodes) {
      for (int v : o.component(o.plus_nb[static_cast<std::size_t>(u)], u))
        if (!o.is_hub[static_cast<std::size_t>(v)]) plus[u].insert(v);
      for (int v : o.component(o.minus_nb[static_cast<std::size_t>(u)], u))
        if (!o.is_hub[static_cast<std::size_t>(v)]) minus[u].insert(v);
    }
    for (int u : nodes)
      for (int v : nodes) {
        int x = id[u], y = id[v];
        CHECK(m.in_plus(y, x) == (plus[u].count(v) == 1));
        CHECK(m.in_minus(y, x) == (minus[u].count(v) == 1));
        Cmp want = u == v                                   ? Cmp::Equal
                   : plus[u].count(v) && minus[v].count(u) ? Cmp::Less
                   : plus[v].count(u) && minus[u].count(v) ? Cmp::Greater
                                                           : Cmp::Incomparable;
        CHECK(m.compare(x, y) == want);
        auto p = o.path(u, v);
        std::vector<int> want_pts;
        int gaps = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
          int w = p[i];
          if (!o.is_hub[static_cast<std::size_t>(w)]) {
            want_pts.push_back(id[w]);
          } else if (i > 0 && i + 1 < p.size() && o.hub_of[static_cast<std::size_t>(p[i - 1])] == w &&
                     o.hub_of[static_cast<std::size_t>(p[i + 1])] == w) {
            ++gaps;
          }
        }
        auto s = m.spine(x, y);
        CHECK(s.points == want_pts);
        CHECK(s.d() == gaps);
        CHECK(m.nonseparated(x, y) == (u == v || (o.hub_of[static_cast<std::size_t>(u)] >= 0 &&
                                                  o.hub_of[static_cast<std::size_t>(u)] == o.hub_of[static_cast<std::size_t>(v)])));
      }
  }
}

TEST_CASE("order and spine laws on random models", "[leafspace]") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 40; ++t) {
    Model m = load_model(random_tree(rng, 3 + t % 8, true).text);
    const int P = static_cast<int>(m.points());
    for (int x = 0; x < P; ++x)
      for (int y = 0; y < P; ++y) {
        Cmp c = m.compare(x, y);
        Cmp r = m.compare(y, x);
        CHECK((c == Cmp::Less) == (r == Cmp::Greater));
        CHECK((c == Cmp::Equal) == (x == y));
        auto s = m.spine(x, y);
        CHECK(m.spine(y, x).d() == s.d());
        for (int z : s.points) CHECK(m.distance(x, z) + m.distance(z, y) == s.d());
        for (int z = 0; z < P; ++z)
          if (c == Cmp::Less && m.compare(y, z) == Cmp::Less) CHECK(m.compare(x, z) == Cmp::Less);
      }
  }
}

TEST_CASE("quotient path counts gaps", "[leafspace]") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 40; ++t) {
    Model m = load_model(random_tree(rng, 3 + t % 8, false).text);
    auto q = hausdorff_quotient(m);
    CHECK(q.edges() + 1 == q.size());
    const int P = static_cast<int>(m.points());
    for (int x = 0; x < P; ++x)
      for (int y = 0; y < P; ++y) {
        if (m.class_of(x) >= 0 || m.class_of(y) >= 0) continue;
        int classes = 0;
        for (int v : q.path(q.vertex_of[static_cast<std::size_t>(x)], q.vertex_of[static_cast<std::size_t>(y)]))
          classes += q.vertex_points[static_cast<std::size_t>(v)].size() > 1;
        CHECK(m.distance(x, y) == classes);
      }
  }
  Model one = arc_model(4);
  CHECK(hausdorff_quotient(one).size() == 4);
  CHECK(hausdorff_quotient(one).edges() == 3);
}

TEST_CASE("bridge", "[leafspace]") {
  Model tri = load_model(slurp_model("tripod.nht"));
  auto b = bridge(tri, {tri.point("A:1")}, {tri.point("B:1")});
  CHECK(b.points == tri.spine(tri.point("A:1"), tri.point("B:1")).points);
  CHECK(b.d() == 1);
  Model one = arc_model(5);
  auto pl = [&](const char* s) { return one.point_list(s); };
  b = bridge(one, pl("A:0 A:1"), pl("A:2 A:3"));
  CHECK(b.points == pl("A:1 A:2"));
  b = bridge(one, pl("A:0 A:1 A:2"), pl("A:3"));
  CHECK(b.points == pl("A:2 A:3"));
  CHECK_THROWS_WITH(bridge(one, pl("A:0 A:2"), pl("A:4")), ContainsSubstring("spine-connected"));
  CHECK_THROWS_WITH(bridge(one, pl("A:0 A:2"), pl("A:2")), ContainsSubstring("share"));
}

TEST_CASE("autos", "[leafspace]") {
  Model line = load_model(slurp_model("line.nht"));
  const TreeAuto& g = line.auto_named("shift");
  CHECK(g(line.point("A@3:1")) == line.point("A@4:1"));
  CHECK(g(line.point("A@6:1")) == -1);
  TreeAuto id = line.identity();
  for (int x : line.core_points()) {
    CHECK(id(x) == x);
    CHECK(compose(g, invert(g))(x) == x);
  }
  Model tri = load_model(slurp_model("tripod.nht"));
  const TreeAuto& sw = tri.auto_named("swap");
  const int P = static_cast<int>(tri.points());
  for (int x = 0; x < P; ++x)
    for (int y = 0; y < P; ++y) CHECK(tri.compare(x, y) == tri.compare(sw(x), sw(y)));
  CHECK_THROWS_WITH(tri.auto_named("nope"), ContainsSubstring("DanglingReference"));
  CHECK_THROWS_AS(load_model("arc A slots=2\narc B slots=3\nnonsep A.end B.end\nauto s: A->B B->A\n"), Error);
}

TEST_CASE("invariant point sets", "[leafspace]") {
  Model one = arc_model(4);
  auto s = invariant_point_sets(one, one.identity());
  CHECK(s.fix.size() == 4);
  CHECK(s.cg.size() == 4);

  Model ax = load_model(slurp_model("fig-ax-chain.nht"));
  s = invariant_point_sets(ax, ax.auto_named("shift"));
  CHECK(s.fix.empty());
  CHECK(s.nonsep.empty());
  CHECK(s.cg == s.domain);
  CHECK_FALSE(s.domain.empty());

  Model tri = load_model(slurp_model("tripod.nht"));
  s = invariant_point_sets(tri, tri.auto_named("swap"));
  CHECK(s.fix == std::vector<int>{tri.point("c")});
  CHECK(s.cg == s.fix);
  CHECK(s.nonsep.size() == 3);
}

TEST_CASE("axes", "[leafspace]") {
  Model line = load_model(slurp_model("line.nht"));
  const TreeAuto& g = line.auto_named("shift");
  auto core = line.core_points();
  auto sets = invariant_point_sets(line, g);
  for (int x : sets.cg)
    if (line.in_core(x)) CHECK(axis(line, g, x) == core);

  Model ax = load_model(slurp_model("fig-ax-chain.nht"));
  const TreeAuto& k = ax.auto_named("shift");
  CHECK(axis(ax, k) == ax.core_points());
  CHECK(axis(ax, k, ax.point("y")) == axis(ax, k, ax.point("x")));

  Model tri = load_model(slurp_model("tripod.nht"));
  CHECK_THROWS_WITH(axis(tri, tri.auto_named("swap")), ContainsSubstring("local axes"));
}

TEST_CASE("quotient descends autos", "[leafspace]") {
  Model ax = load_model(slurp_model("fig-ax-chain.nht"));
  auto q = hausdorff_quotient(ax, {ax.auto_named("shift")});
  REQUIRE(q.autos.size() == 1);
  CHECK(q.edges() + 1 == q.size());
  int moved = 0;
  for (std::size_t v = 0; v < q.size(); ++v) moved += q.autos[0][v] >= 0 && q.autos[0][v] != static_cast<int>(v);
  CHECK(moved > 0);
  for (std::size_t v = 0; v < q.size(); ++v) CHECK(q.autos[0][v] != static_cast<int>(v));
}

TEST_CASE("completion", "[leafspace]") {
  CHECK(completion(arc_model(3)).ideals.empty());
  Model pair = load_model(slurp_model("basic-pair.nht"));
  auto c = completion(pair);
  REQUIRE(c.ideals.size() == 1);
  CHECK(c.ideals[0].tag == Tag::Sink);
  auto want = pair.plus(pair.point("a")) & pair.plus(pair.point("b"));
  CHECK(c.ideals[0].plus == want);
  CHECK(c.compare(static_cast<std::size_t>(pair.point("a")), c.points) == Cmp::Less);
  Model tri = load_model(slurp_model("tripod.nht"));
  auto ct = completion(tri);
  REQUIRE(ct.ideals.size() == 1);
  CHECK(ct.ideals[0].tag == Tag::Source);
  auto ext = ct.extend(tri, tri.auto_named("swap"));
  CHECK(ext[ct.points] == static_cast<int>(ct.points));
}

TEST_CASE("components of a complement", "[leafspace]") {
  Model one = arc_model(5);
  auto pts_only = [](const std::vector<Component>& cs) {
    std::size_t n = 0;
    for (const auto& c : cs) n += !c.points.empty();
    return n;
  };
  CHECK(components_minus(one, {}).size() == 1);
  CHECK(components_minus(one, {one.point("A:2")}).size() == 2);
  Model tri = load_model(slurp_model("tripod.nht"));
  CHECK(pts_only(components_minus(tri, tri.point_list("A:0 B:0"))) == 3);
  CHECK(pts_only(components_minus(tri, tri.point_list("c"))) == 1);
}

TEST_CASE("property suite", "[leafspace][suite]") {
  for (const char* f : {"single-arc.nht", "basic-pair.nht", "tripod.nht", "line.nht", "fig-ax-chain.nht"}) {
    INFO(f);
    auto r = run_property_suite(load_model(slurp_model(f)), 400, 1);
    CHECK(r.ok());
  }
  Model one = arc_model(4);
  auto r = run_property_suite(one, {TreeAuto{"bad", {2, 0, 1, 3}}}, 400, 1);
  CHECK_FALSE(r.ok());
  bool vi = false;
  for (const auto& v : r.violations) vi = vi || v.check == "(vi)";
  CHECK(vi);
  auto rs = run_random_suite(40, 7);
  CHECK(rs.models == 40);
  CHECK(rs.report.ok());
}

TEST_CASE("figure scenarios", "[leafspace][scenarios]") {
  for (const auto& s : scenarios()) {
    INFO(s.name);
    auto rep = run_scenario(s);
    CHECK(rep.ok());
    for (const auto& c : rep.claims) {
      INFO(c.text << " " << c.detail);
      CHECK(c.ok);
    }
    CHECK(run_property_suite(load_model(s.model), 200, 1).ok());
  }
  CHECK_THROWS_WITH(scenario("no-such-figure"), ContainsSubstring("DanglingReference"));

  Scenario bad = scenario("fig-case1");
  auto pos = bad.model.find("nonsep");
  REQUIRE(pos != std::string::npos);
  bad.model.insert(pos, "# ");
  bool failed = false;
  try {
    failed = !run_scenario(bad).ok();
  } catch (const Error&) {
    failed = true;
  }
  CHECK(failed);
}
