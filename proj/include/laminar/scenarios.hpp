#pragma once

// Figure scenarios: small models of the pictures in the fixed-point argument
// and the membership/bridge claims made about them.
//
// Drawing convention decoded from the chain pictures: two arrows leaving the
// midpoint of a segment mark a hidden source pair between its ends; two dots
// drawn side by side are a sink pair. Every labelled point is the end of an
// arc that starts in a hidden source class. Exponent blocks such as
// kappa^(p-18q) are single formal letters; the period shift plays kappa (or
// mu, kappa^(p-18q)).

#include <functional>
#include <string>
#include <vector>

#include "laminar/leafspace.hpp"

namespace laminar::leaf {

struct Claim {
  std::string text;
  bool ok = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name, figure, caption;
  std::vector<Claim> claims;
  bool ok() const {
    for (const auto& c : claims)
      if (!c.ok) return false;
    return !claims.empty();
  }
};

class ClaimSet {
 public:
  explicit ClaimSet(const Model& m) : m_(m) {}

  int pt(const std::string& name) const { return m_.point(name); }

  void check(const std::string& text, bool ok, const std::string& detail = {}) { out_.push_back({text, ok, detail}); }

  // a in b^+ (sign '+') or b^- (sign '-').
  void side(const std::string& a, char sign, const std::string& b) {
    bool ok = sign == '+' ? m_.in_plus(pt(a), pt(b)) : m_.in_minus(pt(a), pt(b));
    check(a + " in " + b + "^" + sign, ok);
  }

  void nonsep(const std::string& a, const std::string& b, bool expect) {
    bool ok = m_.nonseparated(pt(a), pt(b)) == expect;
    check(a + (expect ? " ~ " : " not~ ") + b, ok);
  }

  void cmp(const std::string& a, const std::string& b, Cmp want) {
    Cmp got = m_.compare(pt(a), pt(b));
    check("compare(" + a + ", " + b + ") = " + to_string(want), got == want, "got " + to_string(got));
  }

  std::vector<Claim> take() { return std::move(out_); }

 private:
  const Model& m_;
  std::vector<Claim> out_;
};

struct Scenario {
  std::string name;     // CLI name
  std::string figure;   // figure label in the source
  std::string caption;
  std::string notes;    // encoding choices
  std::string model;
  std::function<std::vector<Claim>(const Model&)> check;
};

namespace detail {

inline std::string names(const Model& m, const std::vector<int>& pts) {
  std::string s;
  for (int p : pts) s += (s.empty() ? "" : " ") + m.point_name(p);
  return s;
}

inline std::vector<Claim> check_fig_ax(const Model& m) {
  ClaimSet c(m);
  const TreeAuto& kappa = m.auto_named("shift");
  const TreeAuto& alpha = m.auto_named("alpha");
  int x = c.pt("x"), y = c.pt("y");
  auto sets = invariant_point_sets(m, kappa);
  c.check("Fix(kappa) and Nonsep(kappa) are empty", sets.fix.empty() && sets.nonsep.empty());
  auto A = axis(m, kappa);
  std::vector<int> core = m.core_points();
  c.check("A_kappa = C_kappa is the whole chain (core window)", A == sets.cg && A == core,
          std::to_string(A.size()) + " of " + std::to_string(core.size()) + " points");
  c.check("x and y lie on A_kappa", std::binary_search(A.begin(), A.end(), x) && std::binary_search(A.begin(), A.end(), y));
  std::vector<int> cls;
  for (int z : A)
    if (m.nonseparated(z, x)) cls.push_back(z);
  std::vector<int> want{std::min(x, y), std::max(x, y)};
  c.check("[x] meets A_kappa in {x, y}", cls == want, names(m, cls));
  c.check("x kappa < x", m.compare(kappa(x), x) == Cmp::Less, to_string(m.compare(kappa(x), x)));
  int d = m.distance(x, kappa(x));
  c.check("d(x, x kappa) = 2n > 0 with n = 1", d == 2, "d = " + std::to_string(d));
  c.check("d(y, y kappa) = 2", m.distance(y, kappa(y)) == 2);
  TreeAuto kinv = invert(kappa);
  auto sp = m.spine(kinv(y), kappa(x));
  std::vector<int> order{kinv(y), kinv(x), y, x, kappa(y), kappa(x)};
  std::vector<int> seen;
  for (int z : sp.points)
    if (std::find(order.begin(), order.end(), z) != order.end()) seen.push_back(z);
  c.check("figure order y kappa^-1, x kappa^-1, y, x, y kappa, x kappa along the spine", seen == order, names(m, seen));
  bool alternating = true;
  for (std::size_t i = 0; i + 1 < sp.intervals.size(); ++i)
    alternating = alternating && m.nonseparated(sp.intervals[i].second, sp.intervals[i + 1].first);
  c.check("consecutive spine intervals end and begin at non-separated points (d = 5 from y kappa^-1 to x kappa)",
          alternating && sp.d() == 5, "d = " + std::to_string(sp.d()));
  c.check("x alpha = y, so x is in Nonsep(alpha) and on A_kappa", alpha(x) == y && m.nonseparated(x, alpha(x)));
  return c.take();
}

// Vertices of the quotient spanned by the points of the given arcs.
inline std::vector<int> qset(const Model& m, const QuotientTree& q, const std::string& arcs) {
  return q.image(m.arc_points(arcs));
}

inline std::vector<Claim> check_empty1(const Model& m) {
  ClaimSet c(m);
  const TreeAuto& mu = m.auto_named("shift");
  QuotientTree q = hausdorff_quotient(m, {mu});
  const auto& mu_q = q.autos[0];
  int k = m.center_copy();
  auto at = [&](const std::string& arcs, int copy) {
    std::string s;
    for (const auto& a : detail::split_ws(arcs)) s += a + "@" + std::to_string(copy) + " ";
    return qset(m, q, s);
  };
  std::vector<int> Ak = qset(m, q, "A0a A0b");
  std::vector<int> Aka = at("A1a A1b A1c", k), Aka2 = at("A2a A2b", k), Aka2mu = at("A2a A2b", k + 1);
  auto v = [&](const std::string& p) { return q.vertex_of[static_cast<std::size_t>(m.point(p))]; };
  auto disjoint = [](std::vector<int> a, std::vector<int> b) {
    std::vector<int> i;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(i));
    return i.empty();
  };
  c.check("A_kappa, A_kappa alpha, A_kappa alpha^2 are lines of T_H", q.connected(Ak) && q.connected(Aka) && q.connected(Aka2));
  c.check("A_kappa and A_kappa alpha^2 are disjoint", disjoint(Ak, Aka2));
  auto b1 = q.bridge(Ak, Aka);
  c.check("bridge(A_kappa, A_kappa alpha) = [r, s]", b1.front() == v("r") && b1.back() == v("s"));
  auto b = q.bridge(Ak, Aka2);
  c.check("bridge(A_kappa, A_kappa alpha^2) = [r, s alpha]", b.front() == v("r") && b.back() == v("sa"));
  auto through = std::find(b.begin(), b.end(), v("s")) != b.end() && std::find(b.begin(), b.end(), v("ra")) != b.end();
  std::vector<int> inside;
  for (int w : b)
    if (std::binary_search(Aka.begin(), Aka.end(), w)) inside.push_back(w);
  c.check("it runs along A_kappa alpha from s to r alpha", through && inside == q.path(v("s"), v("ra")));
  std::vector<int> Akmu;
  for (int w : Ak)
    if (mu_q[static_cast<std::size_t>(w)] >= 0) Akmu.push_back(mu_q[static_cast<std::size_t>(w)]);
  std::sort(Akmu.begin(), Akmu.end());
  c.check("A_kappa mu = A_kappa", std::includes(Ak.begin(), Ak.end(), Akmu.begin(), Akmu.end()) && !Akmu.empty());
  auto bm = q.bridge(Ak, Aka2mu);
  std::vector<int> image;
  for (int w : b) image.push_back(mu_q[static_cast<std::size_t>(w)]);
  c.check("bridge(A_kappa, A_kappa alpha^2 mu) = [r mu, s alpha mu], the mu-image of [r, s alpha]", bm == image,
          std::to_string(bm.size()) + " vertices");
  c.check("r mu != r on A_kappa", mu_q[static_cast<std::size_t>(v("r"))] != v("r"));
  return c.take();
}

inline std::vector<Claim> check_ifig1(const Model& m) {
  ClaimSet c(m);
  const TreeAuto& kp = m.auto_named("shift");  // kappa^(p-18q)
  QuotientTree q = hausdorff_quotient(m, {kp});
  const auto& kq = q.autos[0];
  int k = m.center_copy();
  auto at = [&](const std::string& arcs, int copy) {
    std::string s;
    for (const auto& a : detail::split_ws(arcs)) s += a + "@" + std::to_string(copy) + " ";
    return qset(m, q, s);
  };
  auto v = [&](const std::string& p) { return q.vertex_of[static_cast<std::size_t>(m.point(p))]; };
  std::vector<int> Ak = qset(m, q, "L R");
  std::vector<int> Aka3 = at("H1 B1 B2 H2", k), Aka3k = at("H1 B1 B2 H2", k + 1), Aka2 = at("B0 B1 B2 B3", k);
  std::vector<int> meet;
  std::set_intersection(Ak.begin(), Ak.end(), Aka3.begin(), Aka3.end(), std::back_inserter(meet));
  c.check("A_kappa and A_kappa alpha^3 are disjoint", meet.empty());
  auto b = q.bridge(Ak, Aka3);
  c.check("bridge(A_kappa, A_kappa alpha^3) = [s, r alpha^2]", b.front() == v("s") && b.back() == v("ra2"));
  std::vector<int> shared;
  std::set_intersection(Aka2.begin(), Aka2.end(), Aka3.begin(), Aka3.end(), std::back_inserter(shared));
  c.check("A_kappa alpha^2 meets A_kappa alpha^3 in [r alpha^2, s alpha^2]", shared == [&] {
    auto p = q.path(v("ra2"), v("sa2"));
    std::sort(p.begin(), p.end());
    return p;
  }());
  auto bk = q.bridge(Ak, Aka3k);
  std::vector<int> image;
  for (int w : b) image.push_back(kq[static_cast<std::size_t>(w)]);
  c.check("bridge(A_kappa, A_kappa alpha^3 kappa^(p-18q)) = [s kappa^(p-18q), r alpha^2 kappa^(p-18q)]", bk == image);
  c.check("s kappa^(p-18q) != s", kq[static_cast<std::size_t>(v("s"))] != v("s"));
  return c.take();
}

inline std::vector<int> sorted_path(const QuotientTree& q, int a, int b) {
  auto p = q.path(a, b);
  std::sort(p.begin(), p.end());
  return p;
}

inline std::vector<int> meet(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> i;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(i));
  return i;
}

// One panel of the empty-0 picture. `order` places x, r, y along A_kappa;
// alpha carries the same arrangement to A_kappa alpha. A_kappa alpha^2 leaves
// A_kappa by rays at x and y, A_kappa alpha^3 leaves A_kappa alpha at x alpha
// and y alpha, and the rung r - r alpha is the bridge.
inline std::string empty0_model(const std::vector<std::string>& order) {
  std::string s = "# A_kappa = K0..K3, A_kappa alpha = U0..U3\n";
  for (int i = 0; i < 4; ++i) s += "arc K" + std::to_string(i) + " slots=2\narc U" + std::to_string(i) + " slots=2\n";
  s += "arc Dx slots=2\narc Dy slots=2\narc Ex slots=2\narc Ey slots=2\narc Rg slots=2\n";
  std::string labels;
  for (int i = 0; i < 3; ++i) {
    std::string n = order[static_cast<std::size_t>(i)], k = std::to_string(i), k1 = std::to_string(i + 1);
    if (n == "r") {
      s += "nonsep K" + k + ".end Rg.end via K" + k1 + ".start\n";
      s += "nonsep U" + k1 + ".start Rg.start via U" + k + ".end\n";
      labels += "label r K" + k + ":1\nlabel ra U" + k1 + ":0\n";
    } else {
      s += "nonsep K" + k + ".end D" + n + ".end via K" + k1 + ".start\n";
      s += "nonsep U" + k + ".end E" + n + ".end via U" + k1 + ".start\n";
      labels += "label " + n + " K" + k + ":1\nlabel " + n + "a U" + k + ":1\n";
    }
  }
  return s + labels;
}

inline std::vector<Claim> check_empty0_panel(const Model& m, const std::vector<std::string>& order,
                                             const std::string& tag) {
  ClaimSet c(m);
  QuotientTree q = hausdorff_quotient(m, {});
  auto v = [&](const std::string& p) { return q.vertex_of[static_cast<std::size_t>(m.point(p))]; };
  auto idx = [&](const std::string& n) {
    return static_cast<int>(std::find(order.begin(), order.end(), n) - order.begin());
  };
  std::string between_k, between_u;
  for (int i = idx("x") + 1; i <= idx("y"); ++i) {
    between_k += " K" + std::to_string(i);
    between_u += " U" + std::to_string(i);
  }
  auto Ak = qset(m, q, "K0 K1 K2 K3"), Aka = qset(m, q, "U0 U1 U2 U3");
  auto Aka2 = qset(m, q, "Dx Dy" + between_k), Aka3 = qset(m, q, "Ex Ey" + between_u);
  std::string p = "[" + tag + "] ";
  c.check(p + "A_kappa meets A_kappa alpha^2 in [x, y]", meet(Ak, Aka2) == sorted_path(q, v("x"), v("y")));
  c.check(p + "A_kappa alpha meets A_kappa alpha^3 in [x alpha, y alpha]",
          meet(Aka, Aka3) == sorted_path(q, v("xa"), v("ya")));
  c.check(p + "A_kappa and A_kappa alpha^3 are disjoint", meet(Ak, Aka3).empty());
  auto b = q.bridge(Ak, Aka);
  c.check(p + "bridge(A_kappa, A_kappa alpha) = [r, r alpha]", b.front() == v("r") && b.back() == v("ra"));
  std::string end = tag == "x <= r <= y" ? "r" : tag == "r <= x" ? "x" : "y";
  auto b2 = q.bridge(Aka, Aka2);
  c.check(p + "bridge(A_kappa alpha, A_kappa alpha^2) = [r alpha, " + end + "]",
          b2.front() == v("ra") && b2.back() == v(end));
  auto b3 = q.bridge(Ak, Aka3);
  std::string end3 = end == "r" ? "ra" : end + "a";
  c.check(p + "bridge(A_kappa, A_kappa alpha^3) begins at r and ends at " + end3,
          b3.front() == v("r") && b3.back() == v(end3));
  return c.take();
}

inline const std::vector<std::pair<std::string, std::vector<std::string>>>& empty0_panels() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> panels{
      {"x <= r <= y", {"x", "r", "y"}}, {"r <= x", {"r", "x", "y"}}, {"y <= r", {"x", "y", "r"}}};
  return panels;
}

inline std::vector<Claim> check_empty0(const Model& m) {
  auto out = check_empty0_panel(m, empty0_panels()[0].second, empty0_panels()[0].first);
  for (std::size_t i = 1; i < empty0_panels().size(); ++i) {
    Model other = load_model(empty0_model(empty0_panels()[i].second));
    auto more = check_empty0_panel(other, empty0_panels()[i].second, empty0_panels()[i].first);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

inline std::vector<Claim> check_empty2(const Model& m) {
  ClaimSet c(m);
  QuotientTree q = hausdorff_quotient(m, {});
  auto v = [&](const std::string& p) { return q.vertex_of[static_cast<std::size_t>(m.point(p))]; };
  auto Ak = qset(m, q, "L0 L1"), Aka3 = qset(m, q, "M0 M1 M2"), Aka3ka3 = qset(m, q, "N0 N1");
  c.check("A_kappa, A_kappa alpha^3, A_kappa alpha^3 kappa^(p-18q) alpha^3 are pairwise disjoint",
          meet(Ak, Aka3).empty() && meet(Ak, Aka3ka3).empty() && meet(Aka3, Aka3ka3).empty());
  auto b1 = q.bridge(Ak, Aka3);
  c.check("bridge(A_kappa, A_kappa alpha^3) = [r, s alpha^2]", b1.front() == v("r") && b1.back() == v("sa2"));
  auto b2 = q.bridge(Aka3, Aka3ka3);
  c.check("bridge(A_kappa alpha^3, A_kappa alpha^3 kappa^(p-18q) alpha^3) = [r kappa^(p-18q) alpha^3, s alpha^2 kappa^(p-18q) alpha^3]",
          b2.front() == v("rka3") && b2.back() == v("sa2ka3"));
  auto b = q.bridge(Ak, Aka3ka3);
  c.check("bridge(A_kappa, A_kappa alpha^3 kappa^(p-18q) alpha^3) = [r, s alpha^2 kappa^(p-18q) alpha^3]",
          b.front() == v("r") && b.back() == v("sa2ka3"));
  bool through = std::find(b.begin(), b.end(), v("sa2")) != b.end() && std::find(b.begin(), b.end(), v("rka3")) != b.end();
  c.check("it runs along A_kappa alpha^3 from s alpha^2 to r kappa^(p-18q) alpha^3", through);
  return c.take();
}

inline std::vector<Claim> check_case1(const Model& m) {
  ClaimSet c(m);
  c.nonsep("x", "xk", true);
  c.nonsep("x", "xm", true);
  c.check("x != x kappa^(p-18q) and x != x mu", c.pt("x") != c.pt("xk") && c.pt("x") != c.pt("xm"));
  c.side("xa2", '-', "x");
  c.side("xa3", '-', "x");
  c.side("x", '-', "xa2");
  c.side("x", '-', "xa3");
  c.side("xma2m", '+', "x");
  c.side("xa3ka3", '-', "x");
  c.nonsep("xma2m", "x", false);
  c.side("xa3ka3", '+', "xa3");
  c.check("x mu alpha^2 mu and x alpha^3 kappa^(p-18q) alpha^3 are distinct",
          c.pt("xma2m") != c.pt("xa3ka3"));
  return c.take();
}

inline std::vector<Claim> check_case2(const Model& m) {
  ClaimSet c(m);
  c.check("x != x mu", c.pt("x") != c.pt("xm"));
  c.nonsep("x", "xm", true);
  c.nonsep("x", "xM", true);
  c.side("xa3M", '+', "x");
  c.side("xA3ma2", '-', "x");
  c.side("xA3", '-', "x");
  c.nonsep("xma2", "xa2", true);
  c.check("x alpha^3 mu^-1 and x alpha^-3 mu alpha^2 are distinct", c.pt("xa3M") != c.pt("xA3ma2"));
  return c.take();
}

inline std::vector<Claim> check_case3(const Model& m) {
  ClaimSet c(m);
  c.check("x = x mu", c.pt("x") == c.pt("xm"));
  c.nonsep("x", "xa2", false);
  c.side("xa2", '-', "x");
  c.side("x", '-', "xa2");
  c.side("xa3ka3", '+', "xa3");
  c.side("xa2m", '-', "xa3");
  c.check("x mu alpha^2 mu = x alpha^2 mu differs from x alpha^3 kappa^(p-18q) alpha^3",
          c.pt("xa2m") != c.pt("xa3ka3"));
  return c.take();
}

}  // namespace detail

inline const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all{
      {"fig-Ax", "fig:Ax", "Nonsep(alpha) meets A_kappa",
       "One kappa period holds one hidden source gap and one sink pair, so d(x, x kappa) = 2n with n = 1. "
       "A single pair per period would make the shift reverse orientation. alpha is the orientation-preserving "
       "flip of the chain about the pair {x, y}.",
       R"(# chain: ... y ~ x (sink) ... hidden source ... y kappa ~ x kappa ...
arc Y slots=2
arc X slots=2
nonsep Y.end X.end
nonsep X.start Y+1.start
period shift=1 window=7 domain=Y X
label y Y:1
label x X:1
auto alpha: Y@0->X@6 Y@1->X@5 Y@2->X@4 Y@3->X@3 Y@4->X@2 Y@5->X@1 Y@6->X@0 X@0->Y@6 X@1->Y@5 X@2->Y@4 X@3->Y@3 X@4->Y@2 X@5->Y@1 X@6->Y@0
)",
       detail::check_fig_ax},
      {"empty-0", "empty-0", "A_kappa meets A_kappa alpha^3 in the empty set",
       "Read in the Hausdorff quotient; no action is encoded. The three panels (x <= r <= y, r <= x, y <= r) are "
       "three models; the stored model is the first. Rays stand for the unbounded ends of the lines.",
       detail::empty0_model({"x", "r", "y"}), detail::check_empty0},
      {"empty-1", "empty-1", "bridge from A_kappa to A_kappa mu alpha^2 mu",
       "Read in the Hausdorff quotient. Branch vertices of T_H are classes of two members plus a via arc. "
       "A_kappa is periodic under mu (the shift); each period carries one copy of the rungs r-s and r alpha-s alpha "
       "and of the lines A_kappa alpha, A_kappa alpha^2.",
       R"(arc A0a slots=2
arc A0b slots=2
arc R1 slots=2
arc A1a slots=2
arc A1b slots=3
arc A1c slots=2
arc R2 slots=2
arc A2a slots=2
arc A2b slots=2
nonsep A0a.end R1.end via A0b.start
glue A0b.end A0a+1.start
nonsep R1.start A1b.start via A1a.end
nonsep A1b.end R2.end via A1c.start
nonsep R2.start A2b.start via A2a.end
period shift=1 window=5
label r A0a:1
label s A1b:0
label ra A1b:2
label sa A2b:0
)",
       detail::check_empty1},
      {"empty-2", "empty-2", "bridge from A_kappa to A_kappa alpha^3 kappa^(p-18q) alpha^3",
       "Read in the Hausdorff quotient; the right panel only. The left panel is its alpha^-3 preimage.",
       R"(arc L0 slots=2
arc L1 slots=2
arc M0 slots=2
arc M1 slots=3
arc M2 slots=2
arc N0 slots=2
arc N1 slots=2
arc R1 slots=2
arc R2 slots=2
nonsep L0.end R1.end via L1.start
nonsep M1.start R1.start via M0.end
nonsep M1.end R2.end via M2.start
nonsep N1.start R2.start via N0.end
label r L0:1
label sa2 M1:0
label rka3 M1:2
label sa2ka3 N1:0
)",
       detail::check_empty2},
      {"I-fig1", "I-fig1", "A_kappa and A_kappa alpha^3 are disjoint",
       "Read in the Hausdorff quotient. kappa^(p-18q) is the period shift along A_kappa. A_kappa alpha^2 leaves "
       "A_kappa at s; A_kappa alpha^3 shares [r alpha^2, s alpha^2] with it and leaves by two rays; A_kappa alpha "
       "leaves at s alpha. The alpha^3-translate of the bridge is not encoded (no alpha acts on this window).",
       R"(arc L slots=2
arc R slots=2
arc B0 slots=2
arc B1 slots=2
arc B2 slots=2
arc B3 slots=2
arc H1 slots=2
arc H2 slots=2
arc LA slots=2
nonsep L.end B0.end via R.start
glue R.end L+1.start
nonsep B0.start H1.start via B1.end
nonsep B1.start LA.start via B2.end
nonsep B2.start H2.start via B3.end
period shift=1 window=5
label s L:1
label ra2 B0:0
label sa B1:0
label sa2 B2:0
)",
       detail::check_ifig1},
      {"fig-case1", "fig:case1", "Case (1) x != x kappa^(p-18q), x != x mu",
       "Both rows of the picture share x. The hidden source below x joins the arcs to x, x alpha^3 and x alpha^2; "
       "the sink above x holds x, x kappa^(p-18q) and x mu.",
       R"(arc B1 slots=2
arc B2 slots=2
arc A3 slots=2
arc X slots=2
arc A2 slots=2
arc B5 slots=2
arc B6 slots=2
arc C4 slots=2
arc C5 slots=2
arc C1 slots=1
arc C6 slots=1
nonsep B1.start B2.start
nonsep A3.start X.start A2.start
nonsep B5.start B6.start
nonsep C4.start C5.start
nonsep B2.end A3.end
nonsep X.end B5.end C4.end
nonsep C1.end A2.end
nonsep C5.end C6.end
label xa3ka3 B1:1
label xka3 B2:1
label xa3 A3:1
label x X:1
label xk B5:1
label xa3k B6:1
label xma2 C1:0
label xa2 A2:1
label xm C4:1
label xa2m C5:1
label xma2m C6:0
)",
       detail::check_case1},
      {"fig-case2", "fig:case2", "Case (2) x != x mu, x = x kappa^(p-18q)",
       "x, x mu and x mu^-1 form one sink. The dashed paths are single hidden source gaps.",
       R"(arc A3 slots=2
arc X slots=2
arc A2 slots=2
arc Am3 slots=2
arc U1 slots=2
arc U2 slots=2
arc V1 slots=2
arc V2 slots=2
arc D1 slots=2
arc D2 slots=2
nonsep A3.start X.start A2.start Am3.start
nonsep X.end U1.end V1.end
nonsep U1.start U2.start
nonsep V1.start V2.start
nonsep D1.start D2.start
nonsep D2.end A2.end
label xa3 A3:1
label x X:1
label xk X:1
label xa2 A2:1
label xA3 Am3:1
label xM U1:1
label xa3M U2:1
label xm V1:1
label xA3m V2:1
label xA3ma2 D1:1
label xma2 D2:1
)",
       detail::check_case2},
      {"fig-case3", "fig:case3", "Case (3) x != x kappa^(p-18q), x = x mu",
       "The dashed legs to x alpha^3 and x alpha^2 mu leave the hidden source between x alpha^2 and x. The chain "
       "past x alpha^3 repeats the lower row of case (1).",
       R"(arc A2 slots=2
arc X slots=2
arc A3 slots=2
arc M slots=2
arc B2 slots=2
arc B1 slots=2
nonsep A2.start X.start A3.start M.start
nonsep A3.end B2.end
nonsep B1.start B2.start
label xa2 A2:1
label x X:1
label xm X:1
label xa3 A3:1
label xa2m M:1
label xka3 B2:1
label xa3ka3 B1:1
)",
       detail::check_case3},
  };
  return all;
}

inline const Scenario& scenario(const std::string& name) {
  for (const auto& s : scenarios())
    if (s.name == name) return s;
  throw Error("DanglingReference", "unknown scenario '" + name + "'");
}

inline ScenarioReport run_scenario(const Scenario& s) {
  ScenarioReport r{s.name, s.figure, s.caption, {}};
  Model m = load_model(s.model);
  r.claims = s.check(m);
  return r;
}

}  // namespace laminar::leaf
