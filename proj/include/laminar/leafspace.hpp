#pragma once

// Combinatorial models of simply connected non-Hausdorff 1-manifolds.
//
// A model is a tree of point nodes (arc slots) and link nodes (open segments
// between slots, free rays, and germs shared by a non-separation class).
// Every point has exactly one positive and one negative dart. Side sets,
// spines and the order are computed from this graph by component search.
// Periodic models are unrolled into a window of copies; answers that depend
// on unbounded orbits are reported on the core of the window.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "laminar/error.hpp"

namespace laminar::leaf {

using NodeSet = boost::dynamic_bitset<>;

enum class EndKind { Start, End };
enum class Cmp { Less, Greater, Equal, Incomparable };
enum class Tag { Source, Sink };

inline std::string to_string(Cmp c) {
  switch (c) {
    case Cmp::Less: return "Less";
    case Cmp::Greater: return "Greater";
    case Cmp::Equal: return "Equal";
    case Cmp::Incomparable: return "Incomparable";
  }
  return "?";
}

inline std::string to_string(Tag t) { return t == Tag::Sink ? "Sink" : "Source"; }
inline std::string to_string(EndKind e) { return e == EndKind::Start ? "start" : "end"; }
inline EndKind opposite(EndKind e) { return e == EndKind::Start ? EndKind::End : EndKind::Start; }

struct SpineResult {
  std::vector<int> points;                     // along the path from x to y
  std::vector<std::pair<int, int>> intervals;  // closed, possibly degenerate
  int d() const { return static_cast<int>(intervals.size()) - 1; }
};

// Explicit point map; -1 where the image leaves a periodic window.
struct TreeAuto {
  std::string name;
  std::vector<int> map;

  int operator()(int x) const { return x < 0 ? -1 : map[static_cast<std::size_t>(x)]; }
};

struct PointSets {
  std::vector<int> domain;  // points where the sets are evaluated
  std::vector<int> fix, nonsep, cg;
};

struct Component {
  std::vector<int> points;
  std::size_t links = 0;
};

namespace detail {

struct ArcRef {
  std::string base;
  bool absolute = false;  // id@c
  int n = 0;              // copy (absolute) or offset (relative)
};

struct EndSpec {
  ArcRef arc;
  EndKind end = EndKind::Start;
};

struct RawGlue {
  EndSpec a, b;
  int line = 0;
};

struct RawNonsep {
  std::vector<EndSpec> members;
  std::optional<EndSpec> via;
  int line = 0;
};

struct RawAuto {
  std::string name;
  std::vector<std::pair<ArcRef, ArcRef>> pairs;
  int line = 0;
};

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

inline int parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("Malformed", "line " + std::to_string(line) + ": bad integer '" + s + "'");
}

inline ArcRef parse_arc_ref(const std::string& s, int line) {
  ArcRef r;
  auto at = s.find('@');
  if (at != std::string::npos) {
    r.base = s.substr(0, at);
    r.absolute = true;
    r.n = parse_int(s.substr(at + 1), line);
  } else {
    auto pm = s.find_first_of("+-", 1);
    r.base = s.substr(0, pm);
    if (pm != std::string::npos) r.n = parse_int(s.substr(pm), line);
  }
  if (r.base.empty()) throw Error("Malformed", "line " + std::to_string(line) + ": empty arc id");
  return r;
}

inline EndSpec parse_end(const std::string& s, int line) {
  auto dot = s.rfind('.');
  if (dot == std::string::npos) throw Error("Malformed", "line " + std::to_string(line) + ": endpoint '" + s + "' lacks .start/.end");
  std::string e = s.substr(dot + 1);
  if (e != "start" && e != "end") throw Error("Malformed", "line " + std::to_string(line) + ": endpoint '" + s + "'");
  return {parse_arc_ref(s.substr(0, dot), line), e == "start" ? EndKind::Start : EndKind::End};
}

}  // namespace detail

class Model {
 public:
  struct Arc {
    std::string base;
    int copy = 0;
    int slots = 0;
    int first = 0;  // first point id
  };

  struct Class {
    std::vector<int> members;  // point ids
    int via = -1;              // point id or -1
    bool sink = true;          // members are arc ends
    int germ = -1;             // link node
  };

  // Endpoint attachment, used to validate arc maps.
  struct Attach {
    enum Kind { Free, Glue, Member, Via } kind = Free;
    int arc = -1;  // glue partner
    EndKind end = EndKind::Start;
    int cls = -1;
    bool truncated = false;
  };

  static Model parse(const std::string& text);

  std::size_t points() const { return point_arc_.size(); }
  std::size_t nodes() const { return link_pts_.size() + points(); }
  std::size_t links() const { return link_pts_.size(); }
  const std::vector<int>& link_points(std::size_t l) const { return link_pts_[l]; }
  int link_class(std::size_t l) const { return link_class_[l]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Class>& classes() const { return classes_; }
  bool periodic() const { return periodic_; }
  int window() const { return window_; }
  int shift() const { return shift_; }
  int center_copy() const { return window_ / 2; }

  std::string arc_name(int a) const {
    const Arc& r = arcs_[static_cast<std::size_t>(a)];
    return periodic_ ? r.base + "@" + std::to_string(r.copy) : r.base;
  }
  std::string point_name(int p) const {
    auto it = label_of_.find(p);
    if (it != label_of_.end()) return it->second;
    return canonical_name(p);
  }
  std::string canonical_name(int p) const {
    auto a = point_arc_[static_cast<std::size_t>(p)];
    return arc_name(a) + ":" + std::to_string(p - arcs_[static_cast<std::size_t>(a)].first);
  }
  int arc_of(int p) const { return point_arc_[static_cast<std::size_t>(p)]; }
  int slot_of(int p) const { return p - arcs_[static_cast<std::size_t>(arc_of(p))].first; }
  int copy_of(int p) const { return arcs_[static_cast<std::size_t>(arc_of(p))].copy; }
  int class_of(int p) const { return class_of_[static_cast<std::size_t>(p)]; }
  int arc_index(const std::string& base, int copy) const {
    auto it = arc_index_.find({base, copy});
    return it == arc_index_.end() ? -1 : it->second;
  }
  int end_point(int arc, EndKind e) const {
    const Arc& r = arcs_[static_cast<std::size_t>(arc)];
    return e == EndKind::Start ? r.first : r.first + r.slots - 1;
  }
  const Attach& attach(int arc, EndKind e) const {
    return attach_[static_cast<std::size_t>(arc)][e == EndKind::Start ? 0 : 1];
  }
  const std::map<std::string, int>& labels() const { return labels_; }

  // "A:2", "A@3:2", or a label. In periodic models "A:2" names the center copy.
  int point(const std::string& ref) const;
  std::vector<int> point_list(const std::string& refs) const;

  // Points of the given arcs ("A B@2"), every copy when unsuffixed.
  std::vector<int> arc_points(const std::string& arcs) const;

  const NodeSet& plus(int p) const { return plus_[static_cast<std::size_t>(p)]; }
  const NodeSet& minus(int p) const { return minus_[static_cast<std::size_t>(p)]; }
  bool in_plus(int x, int of) const { return plus(of).test(static_cast<std::size_t>(x)); }
  bool in_minus(int x, int of) const { return minus(of).test(static_cast<std::size_t>(x)); }
  bool nonseparated(int x, int y) const { return x == y || (class_of(x) >= 0 && class_of(x) == class_of(y)); }

  // x <= y iff x+ contains y+.
  Cmp compare(int x, int y) const {
    if (x == y) return Cmp::Equal;
    const NodeSet& a = plus(x);
    const NodeSet& b = plus(y);
    if (b.is_subset_of(a)) return Cmp::Less;
    if (a.is_subset_of(b)) return Cmp::Greater;
    return Cmp::Incomparable;
  }

  std::vector<int> node_path(int x, int y) const;
  SpineResult spine(int x, int y) const;
  int distance(int x, int y) const { return spine(x, y).d(); }

  // Points inside the core of a periodic window (all points otherwise).
  bool in_core(int p) const {
    if (!periodic_) return true;
    int c = copy_of(p);
    return c >= core_lo_ && c <= core_hi_;
  }
  std::vector<int> core_points() const {
    std::vector<int> out;
    for (int p = 0; p < static_cast<int>(points()); ++p)
      if (in_core(p)) out.push_back(p);
    return out;
  }

  const std::vector<TreeAuto>& autos() const { return autos_; }
  const TreeAuto& auto_named(const std::string& name) const {
    for (const auto& a : autos_)
      if (a.name == name) return a;
    throw Error("DanglingReference", "no automorphism named '" + name + "'");
  }
  TreeAuto identity() const {
    TreeAuto id{"id", std::vector<int>(points())};
    for (std::size_t i = 0; i < points(); ++i) id.map[i] = static_cast<int>(i);
    return id;
  }

  std::vector<Component> components_minus(const std::vector<int>& removed) const;

 private:
  friend class ModelBuilder;

  void finish();

  std::vector<Arc> arcs_;
  std::map<std::pair<std::string, int>, int> arc_index_;
  std::vector<int> point_arc_;
  std::vector<int> class_of_;
  std::vector<Class> classes_;
  std::vector<std::array<Attach, 2>> attach_;
  std::vector<int> plus_link_, minus_link_;  // per point, link node ids
  std::vector<std::vector<int>> link_pts_;   // per link, adjacent points
  std::vector<int> link_class_;              // germ class or -1
  std::vector<NodeSet> plus_, minus_;
  std::vector<std::vector<int>> parent_;  // BFS parents from each point
  std::map<std::string, int> labels_;
  std::map<int, std::string> label_of_;
  std::vector<TreeAuto> autos_;
  bool periodic_ = false;
  int window_ = 1, shift_ = 0, core_lo_ = 0, core_hi_ = 0;

  int link_node(int l) const { return static_cast<int>(points()) + l; }
  std::vector<int> neighbours(int node) const {
    if (node < static_cast<int>(points())) {
      return {link_node(plus_link_[static_cast<std::size_t>(node)]),
              link_node(minus_link_[static_cast<std::size_t>(node)])};
    }
    return link_pts_[static_cast<std::size_t>(node) - points()];
  }
  NodeSet component_from(int start, int removed) const;
};

// Parses the model format; see docs/model-format.md.
class ModelBuilder {
 public:
  static Model build(const std::string& text);

 private:
  struct Unrolled {
    int arc;
    EndKind end;
  };
};

inline Model load_model(const std::string& text) { return ModelBuilder::build(text); }

inline Model Model::parse(const std::string& text) { return ModelBuilder::build(text); }

inline Model ModelBuilder::build(const std::string& text) {
  using namespace detail;
  Model m;
  struct ArcDecl {
    std::string id;
    int slots;
  };
  std::vector<ArcDecl> decls;
  std::vector<RawGlue> glues;
  std::vector<RawNonsep> nonseps;
  std::vector<RawAuto> raw_autos;
  std::vector<std::tuple<std::string, std::string, int>> raw_labels;
  std::optional<std::vector<std::string>> domain;
  int shift = 0, window = 7;
  bool periodic = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  auto bad = [&](const std::string& what) { throw Error("Malformed", "line " + std::to_string(line) + ": " + what); };
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto tok = split_ws(raw);
    if (tok.empty()) continue;
    const std::string& d = tok[0];
    if (d == "arc") {
      if (tok.size() < 3) bad("arc needs an id and slots=<n>");
      ArcDecl a{tok[1], 0};
      if (a.id.find_first_of("@.:+-") != std::string::npos) bad("arc id '" + a.id + "' has reserved characters");
      for (std::size_t i = 2; i < tok.size(); ++i) {
        if (tok[i].rfind("slots=", 0) == 0) {
          a.slots = parse_int(tok[i].substr(6), line);
        } else if (tok[i] == "orient=+") {
        } else {
          bad("unknown arc attribute '" + tok[i] + "'");
        }
      }
      if (a.slots < 1) bad("arc " + a.id + " needs slots >= 1");
      for (const auto& o : decls)
        if (o.id == a.id) bad("arc " + a.id + " declared twice");
      decls.push_back(a);
    } else if (d == "glue") {
      if (tok.size() != 3) bad("glue takes two endpoints");
      glues.push_back({parse_end(tok[1], line), parse_end(tok[2], line), line});
    } else if (d == "nonsep") {
      RawNonsep n;
      n.line = line;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] == "via") {
          if (i + 2 != tok.size()) bad("via takes one endpoint at the end of the line");
          n.via = parse_end(tok[i + 1], line);
          break;
        }
        n.members.push_back(parse_end(tok[i], line));
      }
      if (n.members.size() < 2) bad("nonsep needs at least two members");
      nonseps.push_back(std::move(n));
    } else if (d == "period") {
      periodic = true;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i].rfind("shift=", 0) == 0) {
          shift = parse_int(tok[i].substr(6), line);
        } else if (tok[i].rfind("window=", 0) == 0) {
          window = parse_int(tok[i].substr(7), line);
        } else if (tok[i].rfind("domain=", 0) == 0) {
          domain = std::vector<std::string>{tok[i].substr(7)};
          for (std::size_t j = i + 1; j < tok.size() && tok[j].find('=') == std::string::npos; ++j, ++i)
            domain->push_back(tok[j]);
        } else {
          bad("unknown period attribute '" + tok[i] + "'");
        }
      }
      if (shift < 1) bad("period needs shift >= 1");
      if (window < 2 * shift + 1) bad("window must be at least 2*shift+1");
    } else if (d == "label") {
      if (tok.size() != 3) bad("label takes a name and a point");
      raw_labels.emplace_back(tok[1], tok[2], line);
    } else if (d == "auto") {
      if (tok.size() < 2 || tok[1].empty() || tok[1].back() != ':') bad("auto needs '<name>:'");
      RawAuto a;
      a.name = tok[1].substr(0, tok[1].size() - 1);
      a.line = line;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        auto arrow = tok[i].find("->");
        if (arrow == std::string::npos) bad("auto pair '" + tok[i] + "' needs ->");
        a.pairs.emplace_back(parse_arc_ref(tok[i].substr(0, arrow), line), parse_arc_ref(tok[i].substr(arrow + 2), line));
      }
      raw_autos.push_back(std::move(a));
    } else {
      bad("unknown directive '" + d + "'");
    }
  }
  if (decls.empty()) throw Error("Malformed", "model has no arcs");

  m.periodic_ = periodic;
  m.window_ = periodic ? window : 1;
  m.shift_ = periodic ? shift : 0;
  m.core_lo_ = periodic ? shift : 0;
  m.core_hi_ = periodic ? window - 1 - shift : 0;
  if (domain) {
    std::set<std::string> dom(domain->begin(), domain->end()), all;
    for (const auto& a : decls) all.insert(a.id);
    for (const auto& id : dom)
      if (!all.count(id)) throw Error("DanglingReference", "period domain names unknown arc '" + id + "'");
    if (dom != all) throw Error("Malformed", "period domain must list every arc");
  }

  const int W = m.window_;
  for (int c = 0; c < W; ++c) {
    for (const auto& a : decls) {
      Model::Arc arc{a.id, c, a.slots, static_cast<int>(m.point_arc_.size())};
      int idx = static_cast<int>(m.arcs_.size());
      m.arc_index_[{a.id, c}] = idx;
      m.arcs_.push_back(arc);
      for (int s = 0; s < a.slots; ++s) m.point_arc_.push_back(idx);
    }
  }
  const std::size_t P = m.point_arc_.size();
  m.class_of_.assign(P, -1);
  m.plus_link_.assign(P, -1);
  m.minus_link_.assign(P, -1);
  m.attach_.assign(m.arcs_.size(), {});

  auto known = [&](const std::string& base, int l) {
    for (const auto& a : decls)
      if (a.id == base) return;
    throw Error("DanglingReference", "line " + std::to_string(l) + ": unknown arc '" + base + "'");
  };
  auto check_ref = [&](const ArcRef& r, int l) {
    known(r.base, l);
    if (!periodic && (r.absolute || r.n != 0))
      throw Error("Malformed", "line " + std::to_string(l) + ": copy offsets need a period directive");
    if (r.absolute && (r.n < 0 || r.n >= W))
      throw Error("DanglingReference", "line " + std::to_string(l) + ": copy " + std::to_string(r.n) + " outside the window");
  };
  // Copies at which a directive is instantiated.
  auto copies_for = [&](const std::vector<const ArcRef*>& refs) {
    bool any_rel = std::any_of(refs.begin(), refs.end(), [](const ArcRef* r) { return !r->absolute; });
    std::vector<int> cs;
    if (!any_rel) {
      cs.push_back(0);
      return cs;
    }
    // Reach outside the window so that directives cut by it mark their ends.
    int reach = 0;
    for (const ArcRef* r : refs)
      if (!r->absolute) reach = std::max(reach, std::abs(r->n));
    for (int c = -reach; c < W + reach; ++c) cs.push_back(c);
    return cs;
  };
  auto resolve = [&](const ArcRef& r, int c) -> int {
    int copy = r.absolute ? r.n : c + r.n;
    if (copy < 0 || copy >= W) return -1;
    return m.arc_index_.at({r.base, copy});
  };

  std::vector<std::array<int, 2>> used(m.arcs_.size(), {-1, -1});  // directive kind: 0 glue, 1 nonsep
  auto use = [&](int arc, EndKind e, int kind, int l) {
    int& u = used[static_cast<std::size_t>(arc)][e == EndKind::Start ? 0 : 1];
    if (u >= 0) {
      std::string where = "line " + std::to_string(l) + ": endpoint " + m.arc_name(arc) + "." + to_string(e);
      if (u == 1 && kind == 1)
        throw Error("NonEquivalenceNonsep", where + " lies in two non-separation classes");
      throw Error("Malformed", where + " is attached twice");
    }
    u = kind;
  };
  auto attach_of = [&](int arc, EndKind e) -> Model::Attach& {
    return m.attach_[static_cast<std::size_t>(arc)][e == EndKind::Start ? 0 : 1];
  };

  int next_link = 0;
  auto new_link = [&]() {
    m.link_pts_.emplace_back();
    m.link_class_.push_back(-1);
    return next_link++;
  };
  // Attaches an arc endpoint to link l; the link lies after an end and before a start.
  auto hook = [&](int arc, EndKind e, int l) {
    int p = m.end_point(arc, e);
    (e == EndKind::End ? m.plus_link_ : m.minus_link_)[static_cast<std::size_t>(p)] = l;
    m.link_pts_[static_cast<std::size_t>(l)].push_back(p);
  };

  for (const auto& g : glues) {
    check_ref(g.a.arc, g.line);
    check_ref(g.b.arc, g.line);
    if (g.a.end == g.b.end)
      throw Error("Malformed", "line " + std::to_string(g.line) + ": glue joins an .end to a .start (orientation)");
    const EndSpec& e = g.a.end == EndKind::End ? g.a : g.b;
    const EndSpec& s = g.a.end == EndKind::End ? g.b : g.a;
    for (int c : copies_for({&e.arc, &s.arc})) {
      int ea = resolve(e.arc, c), sa = resolve(s.arc, c);
      if (ea < 0 && sa < 0) continue;
      if (ea >= 0) use(ea, EndKind::End, 0, g.line);
      if (sa >= 0) use(sa, EndKind::Start, 0, g.line);
      if (ea < 0 || sa < 0) {
        if (ea >= 0) attach_of(ea, EndKind::End).truncated = true;
        if (sa >= 0) attach_of(sa, EndKind::Start).truncated = true;
        continue;
      }
      if (ea == sa && m.arcs_[static_cast<std::size_t>(ea)].slots >= 1)
        throw Error("NotSimplyConnected", "line " + std::to_string(g.line) + ": arc " + m.arc_name(ea) + " glued to itself");
      int l = new_link();
      hook(ea, EndKind::End, l);
      hook(sa, EndKind::Start, l);
      attach_of(ea, EndKind::End) = {Model::Attach::Glue, sa, EndKind::Start, -1, false};
      attach_of(sa, EndKind::Start) = {Model::Attach::Glue, ea, EndKind::End, -1, false};
    }
  }

  for (const auto& n : nonseps) {
    std::vector<const ArcRef*> refs;
    EndKind kind = n.members.front().end;
    for (const auto& e : n.members) {
      check_ref(e.arc, n.line);
      refs.push_back(&e.arc);
      if (e.end != kind)
        throw Error("Malformed", "line " + std::to_string(n.line) + ": class mixes .start and .end members (orientation)");
    }
    if (n.via) {
      check_ref(n.via->arc, n.line);
      refs.push_back(&n.via->arc);
      if (n.via->end == kind)
        throw Error("Malformed", "line " + std::to_string(n.line) + ": via must be the opposite end of the members");
    }
    for (int c : copies_for(refs)) {
      std::vector<int> arcs;
      bool dropped = false;
      for (const auto& e : n.members) {
        int a = resolve(e.arc, c);
        if (a < 0)
          dropped = true;
        else
          arcs.push_back(a);
      }
      int via = -1;
      if (n.via) {
        via = resolve(n.via->arc, c);
        if (via < 0) dropped = true;
      }
      if (arcs.empty() && via < 0) continue;
      std::set<int> distinct(arcs.begin(), arcs.end());
      if (distinct.size() != arcs.size() || distinct.count(via))
        throw Error("Malformed", "line " + std::to_string(n.line) + ": an arc appears twice in one class");
      for (int a : arcs) use(a, kind, 1, n.line);
      if (via >= 0) use(via, opposite(kind), 1, n.line);
      if (arcs.size() >= 2) {
        int cls = static_cast<int>(m.classes_.size());
        int l = new_link();
        Model::Class k;
        k.sink = kind == EndKind::End;
        k.germ = l;
        for (int a : arcs) {
          hook(a, kind, l);
          int p = m.end_point(a, kind);
          if (m.class_of_[static_cast<std::size_t>(p)] >= 0)
            throw Error("NonEquivalenceNonsep", "line " + std::to_string(n.line) + ": point " + m.canonical_name(p) +
                                                    " would be non-separated from two classes (arc with one slot)");
          k.members.push_back(p);
          m.class_of_[static_cast<std::size_t>(p)] = cls;
          attach_of(a, kind) = {Model::Attach::Member, -1, kind, cls, dropped};
        }
        if (via >= 0) {
          hook(via, opposite(kind), l);
          k.via = m.end_point(via, opposite(kind));
          attach_of(via, opposite(kind)) = {Model::Attach::Via, -1, opposite(kind), cls, dropped};
        }
        m.link_class_[static_cast<std::size_t>(l)] = cls;
        m.classes_.push_back(std::move(k));
      } else if (arcs.size() == 1 && via >= 0) {
        // A truncated class degenerates to an ordinary segment.
        int l = new_link();
        hook(arcs[0], kind, l);
        hook(via, opposite(kind), l);
        attach_of(arcs[0], kind).truncated = true;
        attach_of(via, opposite(kind)).truncated = true;
      } else {
        for (int a : arcs) attach_of(a, kind).truncated = true;
        if (via >= 0) attach_of(via, opposite(kind)).truncated = true;
      }
    }
  }

  // Remaining ends are free rays.
  for (std::size_t p = 0; p < P; ++p) {
    if (m.plus_link_[p] < 0) {
      int l = new_link();
      m.plus_link_[p] = l;
      m.link_pts_[static_cast<std::size_t>(l)].push_back(static_cast<int>(p));
    }
    if (m.minus_link_[p] < 0) {
      int l = new_link();
      m.minus_link_[p] = l;
      m.link_pts_[static_cast<std::size_t>(l)].push_back(static_cast<int>(p));
    }
  }
  // Consecutive slots of an arc are joined by interior segments; those links
  // were created above as rays on both sides, so merge them here.
  for (const auto& arc : m.arcs_) {
    for (int s = 0; s + 1 < arc.slots; ++s) {
      int p = arc.first + s, q = p + 1;
      int lp = m.plus_link_[static_cast<std::size_t>(p)], lq = m.minus_link_[static_cast<std::size_t>(q)];
      // lp and lq are fresh rays; keep lp and retire lq.
      m.minus_link_[static_cast<std::size_t>(q)] = lp;
      m.link_pts_[static_cast<std::size_t>(lp)].push_back(q);
      m.link_pts_[static_cast<std::size_t>(lq)].clear();
    }
  }
  // Drop retired links and renumber.
  {
    std::vector<int> renum(m.link_pts_.size(), -1);
    std::vector<std::vector<int>> pts;
    std::vector<int> cls;
    for (std::size_t l = 0; l < m.link_pts_.size(); ++l) {
      if (m.link_pts_[l].empty()) continue;
      renum[l] = static_cast<int>(pts.size());
      pts.push_back(m.link_pts_[l]);
      cls.push_back(m.link_class_[l]);
    }
    for (auto& l : m.plus_link_) l = renum[static_cast<std::size_t>(l)];
    for (auto& l : m.minus_link_) l = renum[static_cast<std::size_t>(l)];
    for (auto& k : m.classes_) k.germ = renum[static_cast<std::size_t>(k.germ)];
    m.link_pts_ = std::move(pts);
    m.link_class_ = std::move(cls);
  }

  // Simple connectivity: the node graph must be a tree.
  {
    std::size_t V = m.nodes(), E = 2 * P;
    std::vector<char> seen(V, 0);
    std::size_t comps = 0;
    for (std::size_t s = 0; s < V; ++s) {
      if (seen[s]) continue;
      ++comps;
      std::vector<int> stack{static_cast<int>(s)};
      seen[s] = 1;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v : m.neighbours(u))
          if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            stack.push_back(v);
          }
      }
    }
    if (E > V - comps) throw Error("NotSimplyConnected", "the model contains a cycle");
    if (comps > 1) throw Error("Disconnected", "the model has " + std::to_string(comps) + " components");
  }

  m.finish();

  for (const auto& [name, ref, l] : raw_labels) {
    if (m.labels_.count(name)) throw Error("Malformed", "line " + std::to_string(l) + ": label '" + name + "' reused");
    int p = m.point(ref);
    m.labels_[name] = p;
    m.label_of_.emplace(p, name);
  }

  // Automorphisms from arc maps.
  auto from_arc_map = [&](const std::string& name, const std::vector<int>& img, int l) {
    std::string where = name + (l ? " (line " + std::to_string(l) + ")" : "");
    std::vector<int> seen(m.arcs_.size(), -1);
    for (std::size_t a = 0; a < img.size(); ++a) {
      int b = img[a];
      if (b < 0) continue;
      if (seen[static_cast<std::size_t>(b)] >= 0)
        throw Error("InvalidAuto", where + ": two arcs map to " + m.arc_name(b));
      seen[static_cast<std::size_t>(b)] = static_cast<int>(a);
      if (m.arcs_[a].slots != m.arcs_[static_cast<std::size_t>(b)].slots)
        throw Error("InvalidAuto", where + ": " + m.arc_name(static_cast<int>(a)) + " and " + m.arc_name(b) + " differ in slots");
    }
    std::map<int, int> cmap;
    for (std::size_t a = 0; a < img.size(); ++a) {
      int b = img[a];
      if (b < 0) continue;
      for (EndKind e : {EndKind::Start, EndKind::End}) {
        const auto& A = m.attach(static_cast<int>(a), e);
        const auto& B = m.attach(b, e);
        if (A.truncated || B.truncated) continue;
        std::string at = where + ": " + m.arc_name(static_cast<int>(a)) + "." + to_string(e);
        if (A.kind != B.kind) throw Error("InvalidAuto", at + " changes attachment type");
        if (A.kind == Model::Attach::Glue) {
          int pb = img[static_cast<std::size_t>(A.arc)];
          if (pb >= 0 && pb != B.arc) throw Error("InvalidAuto", at + " breaks a gluing");
        } else if (A.kind == Model::Attach::Member || A.kind == Model::Attach::Via) {
          auto [it, fresh] = cmap.emplace(A.cls, B.cls);
          if (!fresh && it->second != B.cls) throw Error("InvalidAuto", at + " splits a class");
        }
      }
    }
    TreeAuto g{name, std::vector<int>(P, -1)};
    for (std::size_t a = 0; a < img.size(); ++a) {
      int b = img[a];
      if (b < 0) continue;
      for (int s = 0; s < m.arcs_[a].slots; ++s)
        g.map[static_cast<std::size_t>(m.arcs_[a].first + s)] = m.arcs_[static_cast<std::size_t>(b)].first + s;
    }
    return g;
  };

  if (periodic) {
    std::vector<int> img(m.arcs_.size(), -1);
    for (std::size_t a = 0; a < m.arcs_.size(); ++a) {
      int c = m.arcs_[a].copy + shift;
      img[a] = c < W ? m.arc_index_.at({m.arcs_[a].base, c}) : -1;
    }
    m.autos_.push_back(from_arc_map("shift", img, 0));
  }
  for (const auto& ra : raw_autos) {
    for (const auto& o : m.autos_)
      if (o.name == ra.name) throw Error("Malformed", "line " + std::to_string(ra.line) + ": auto '" + ra.name + "' defined twice");
    std::vector<int> img(m.arcs_.size(), -2);
    for (const auto& [src, dst] : ra.pairs) {
      check_ref(src, ra.line);
      check_ref(dst, ra.line);
      if (src.absolute != dst.absolute)
        throw Error("Malformed", "line " + std::to_string(ra.line) + ": mix of relative and absolute copies in one pair");
      for (int c : copies_for({&src, &dst})) {
        int a = resolve(src, c);
        if (a < 0) continue;
        if (img[static_cast<std::size_t>(a)] != -2)
          throw Error("InvalidAuto", ra.name + ": arc " + m.arc_name(a) + " mapped twice");
        img[static_cast<std::size_t>(a)] = resolve(dst, c);
      }
    }
    for (std::size_t a = 0; a < img.size(); ++a)
      if (img[a] == -2) img[a] = static_cast<int>(a);
    m.autos_.push_back(from_arc_map(ra.name, img, ra.line));
  }
  return m;
}

inline NodeSet Model::component_from(int start, int removed) const {
  NodeSet seen(nodes());
  std::vector<int> stack{start};
  seen.set(static_cast<std::size_t>(start));
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : neighbours(u)) {
      if (v == removed || seen.test(static_cast<std::size_t>(v))) continue;
      seen.set(static_cast<std::size_t>(v));
      stack.push_back(v);
    }
  }
  return seen;
}

inline void Model::finish() {
  const std::size_t P = points(), V = nodes();
  plus_.resize(P);
  minus_.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    plus_[p] = component_from(link_node(plus_link_[p]), static_cast<int>(p));
    minus_[p] = component_from(link_node(minus_link_[p]), static_cast<int>(p));
  }
  parent_.assign(P, std::vector<int>(V, -1));
  for (std::size_t p = 0; p < P; ++p) {
    auto& par = parent_[p];
    par[p] = static_cast<int>(p);
    std::vector<int> queue{static_cast<int>(p)};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int u = queue[i];
      for (int v : neighbours(u))
        if (par[static_cast<std::size_t>(v)] < 0) {
          par[static_cast<std::size_t>(v)] = u;
          queue.push_back(v);
        }
    }
  }
}

inline int Model::point(const std::string& ref) const {
  auto it = labels_.find(ref);
  if (it != labels_.end()) return it->second;
  auto colon = ref.rfind(':');
  if (colon == std::string::npos) throw Error("DanglingReference", "unknown point '" + ref + "'");
  std::string arc = ref.substr(0, colon);
  int copy = center_copy();
  auto at = arc.find('@');
  int slot = 0;
  try {
    slot = std::stoi(ref.substr(colon + 1));
    if (at != std::string::npos) {
      copy = std::stoi(arc.substr(at + 1));
      arc.resize(at);
    }
  } catch (const std::exception&) {
    throw Error("Malformed", "bad point reference '" + ref + "'");
  }
  int a = arc_index(arc, periodic_ ? copy : 0);
  if (a < 0) throw Error("DanglingReference", "unknown point '" + ref + "'");
  const Arc& r = arcs_[static_cast<std::size_t>(a)];
  if (slot < 0 || slot >= r.slots) throw Error("DanglingReference", "slot out of range in '" + ref + "'");
  return r.first + slot;
}

inline std::vector<int> Model::point_list(const std::string& refs) const {
  std::vector<int> out;
  std::string s = refs;
  std::replace(s.begin(), s.end(), ',', ' ');
  for (const auto& t : detail::split_ws(s)) out.push_back(point(t));
  return out;
}

inline std::vector<int> Model::arc_points(const std::string& arcs) const {
  std::vector<int> out;
  for (const auto& t : detail::split_ws(arcs)) {
    auto at = t.find('@');
    std::vector<int> idx;
    if (at != std::string::npos) {
      idx.push_back(arc_index(t.substr(0, at), std::stoi(t.substr(at + 1))));
    } else {
      for (int c = 0; c < window_; ++c) idx.push_back(arc_index(t, c));
    }
    for (int a : idx) {
      if (a < 0) throw Error("DanglingReference", "unknown arc '" + t + "'");
      const Arc& r = arcs_[static_cast<std::size_t>(a)];
      for (int s = 0; s < r.slots; ++s) out.push_back(r.first + s);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<int> Model::node_path(int x, int y) const {
  const auto& par = parent_[static_cast<std::size_t>(x)];
  std::vector<int> path;
  for (int u = y; u != x; u = par[static_cast<std::size_t>(u)]) path.push_back(u);
  path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

// Points on the tree path separate x from y. A gap is a germ entered from one
// class member and left through another.
inline SpineResult Model::spine(int x, int y) const {
  auto path = node_path(x, y);
  SpineResult r;
  int start = x, last = x;
  for (std::size_t i = 0; i < path.size(); ++i) {
    int u = path[i];
    if (u < static_cast<int>(points())) {
      r.points.push_back(u);
      last = u;
      continue;
    }
    int cls = link_class_[static_cast<std::size_t>(u) - points()];
    if (cls < 0 || i + 1 >= path.size()) continue;
    int a = path[i - 1], b = path[i + 1];
    if (class_of(a) == cls && class_of(b) == cls) {
      r.intervals.emplace_back(start, last);
      start = b;
    }
  }
  r.intervals.emplace_back(start, last);
  return r;
}

inline std::vector<Component> Model::components_minus(const std::vector<int>& removed) const {
  std::vector<char> gone(nodes(), 0), seen(nodes(), 0);
  for (int p : removed) gone[static_cast<std::size_t>(p)] = 1;
  std::vector<Component> out;
  for (std::size_t s = 0; s < nodes(); ++s) {
    if (gone[s] || seen[s]) continue;
    Component c;
    std::vector<int> stack{static_cast<int>(s)};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (u < static_cast<int>(points()))
        c.points.push_back(u);
      else
        ++c.links;
      for (int v : neighbours(u))
        if (!gone[static_cast<std::size_t>(v)] && !seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = 1;
          stack.push_back(v);
        }
    }
    std::sort(c.points.begin(), c.points.end());
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<Component> components_minus(const Model& m, const std::vector<int>& removed) {
  return m.components_minus(removed);
}

inline Cmp compare(const Model& m, int x, int y) { return m.compare(x, y); }
inline SpineResult spine(const Model& m, int x, int y) { return m.spine(x, y); }

// ---- automorphisms ----

inline int apply_auto(const TreeAuto& g, int x) { return g(x); }

// x (g h): apply g first.
inline TreeAuto compose(const TreeAuto& g, const TreeAuto& h) {
  TreeAuto out{g.name + "*" + h.name, std::vector<int>(g.map.size(), -1)};
  for (std::size_t x = 0; x < g.map.size(); ++x) out.map[x] = h(g.map[x]);
  return out;
}

inline TreeAuto invert(const TreeAuto& g) {
  TreeAuto out{g.name + "^-1", std::vector<int>(g.map.size(), -1)};
  for (std::size_t x = 0; x < g.map.size(); ++x)
    if (g.map[x] >= 0) out.map[static_cast<std::size_t>(g.map[x])] = static_cast<int>(x);
  return out;
}

inline TreeAuto power(const TreeAuto& g, int n, std::size_t points) {
  TreeAuto out{g.name + "^" + std::to_string(n), std::vector<int>(points)};
  for (std::size_t i = 0; i < points; ++i) out.map[i] = static_cast<int>(i);
  TreeAuto step = n >= 0 ? g : invert(g);
  for (int i = 0; i < std::abs(n); ++i) out = compose(out, step);
  out.name = g.name + "^" + std::to_string(n);
  return out;
}

// Points where g, g^-1 are defined, restricted to the core.
inline std::vector<int> auto_domain(const Model& m, const TreeAuto& g) {
  TreeAuto inv = invert(g);
  std::vector<int> out;
  for (int x = 0; x < static_cast<int>(m.points()); ++x)
    if (m.in_core(x) && g(x) >= 0 && inv(x) >= 0) out.push_back(x);
  return out;
}

inline PointSets invariant_point_sets(const Model& m, const TreeAuto& g) {
  PointSets s;
  s.domain = auto_domain(m, g);
  for (int x : s.domain) {
    int y = g(x);
    if (y == x) s.fix.push_back(x);
    if (m.nonseparated(x, y)) s.nonsep.push_back(x);
    if (m.distance(x, y) % 2 == 0) s.cg.push_back(x);
  }
  return s;
}

inline std::vector<int> axis(const Model& m, const TreeAuto& g, int start = -1) {
  auto sets = invariant_point_sets(m, g);
  if (!sets.nonsep.empty()) {
    throw Error("Precondition", "Nonsep(" + g.name + ") contains " + m.point_name(sets.nonsep.front()) +
                                    "; there is no axis, use local axes (points z with z in [[z g^-1, z g]] inside a " +
                                    "g-invariant component of T minus Nonsep(g))");
  }
  if (sets.cg.empty()) throw Error("Precondition", "C_g is empty on the evaluated window");
  int x = start >= 0 ? start : sets.cg.front();
  if (!std::binary_search(sets.cg.begin(), sets.cg.end(), x))
    throw Error("Precondition", m.point_name(x) + " is not in C_g");
  TreeAuto inv = invert(g);
  std::set<int> out;
  auto add = [&](int a, int b) {
    for (int z : m.spine(a, b).points)
      if (m.in_core(z)) out.insert(z);
  };
  for (int a = x, b = g(x); a >= 0 && b >= 0; a = b, b = g(b)) add(a, b);
  for (int b = x, a = inv(x); a >= 0 && b >= 0; b = a, a = inv(a)) add(a, b);
  return {out.begin(), out.end()};
}

// z lies on a local axis: z moves, its component of T minus Nonsep(g) is
// g-invariant, and z separates z g^-1 from z g.
inline bool on_local_axis(const Model& m, const TreeAuto& g, const TreeAuto& inv, const std::vector<int>& nonsep,
                          const std::vector<int>& comp_of, int z) {
  int a = inv(z), b = g(z);
  if (a < 0 || b < 0 || b == z) return false;
  if (std::binary_search(nonsep.begin(), nonsep.end(), z)) return false;
  if (comp_of[static_cast<std::size_t>(z)] != comp_of[static_cast<std::size_t>(b)]) return false;
  auto pts = m.spine(a, b).points;
  return std::find(pts.begin(), pts.end(), z) != pts.end();
}

// ---- bridge ----

inline void require_spine_connected(const Model& m, const std::vector<int>& X, const std::string& name) {
  std::set<int> in(X.begin(), X.end());
  for (std::size_t i = 0; i < X.size(); ++i)
    for (std::size_t j = i + 1; j < X.size(); ++j)
      for (int z : m.spine(X[i], X[j]).points)
        if (!in.count(z))
          throw Error("Precondition", name + " is not spine-connected: [[" + m.point_name(X[i]) + ", " + m.point_name(X[j]) +
                                          "]] contains " + m.point_name(z));
}

inline SpineResult bridge(const Model& m, const std::vector<int>& X, const std::vector<int>& Y) {
  if (X.empty() || Y.empty()) throw Error("Precondition", "bridge needs nonempty sets");
  for (int x : X)
    if (std::find(Y.begin(), Y.end(), x) != Y.end())
      throw Error("Precondition", "bridge sets share " + m.point_name(x));
  require_spine_connected(m, X, "X");
  require_spine_connected(m, Y, "Y");
  std::map<int, std::size_t> count;
  for (int x : X)
    for (int y : Y)
      for (int z : m.spine(x, y).points) ++count[z];
  std::size_t all = X.size() * Y.size();
  SpineResult base = m.spine(X.front(), Y.front());
  SpineResult out;
  for (const auto& [a, b] : base.intervals) {
    bool open = false;
    int first = -1, last = -1;
    auto begin = std::find(base.points.begin(), base.points.end(), a);
    auto end = std::find(begin, base.points.end(), b) + 1;
    for (auto it = begin; it != end; ++it) {
      bool keep = count[*it] == all;
      if (keep) {
        out.points.push_back(*it);
        if (!open) first = *it;
        last = *it;
        open = true;
      } else if (open) {
        out.intervals.emplace_back(first, last);
        open = false;
      }
    }
    if (open) out.intervals.emplace_back(first, last);
  }
  return out;
}

// ---- Hausdorff quotient ----

struct QuotientTree {
  std::vector<std::vector<int>> vertex_points;
  std::vector<int> vertex_of;  // point -> vertex
  std::vector<std::vector<int>> adj;
  std::vector<std::vector<int>> autos;  // induced vertex maps, -1 where undefined

  std::size_t size() const { return vertex_points.size(); }
  std::size_t edges() const {
    std::size_t e = 0;
    for (const auto& a : adj) e += a.size();
    return e / 2;
  }

  std::vector<int> path(int u, int v) const {
    std::vector<int> par(size(), -1);
    par[static_cast<std::size_t>(u)] = u;
    std::vector<int> queue{u};
    for (std::size_t i = 0; i < queue.size() && par[static_cast<std::size_t>(v)] < 0; ++i)
      for (int w : adj[static_cast<std::size_t>(queue[i])])
        if (par[static_cast<std::size_t>(w)] < 0) {
          par[static_cast<std::size_t>(w)] = queue[i];
          queue.push_back(w);
        }
    std::vector<int> out;
    for (int w = v; w != u; w = par[static_cast<std::size_t>(w)]) out.push_back(w);
    out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
  }

  bool connected(const std::vector<int>& S) const {
    std::set<int> in(S.begin(), S.end());
    for (std::size_t i = 1; i < S.size(); ++i)
      for (int w : path(S[0], S[i]))
        if (!in.count(w)) return false;
    return true;
  }

  std::vector<int> image(const std::vector<int>& points) const {
    std::set<int> out;
    for (int p : points) out.insert(vertex_of[static_cast<std::size_t>(p)]);
    return {out.begin(), out.end()};
  }

  // Bridge between disjoint connected vertex sets: the path from the last
  // vertex of X to the first vertex of Y.
  std::vector<int> bridge(const std::vector<int>& X, const std::vector<int>& Y) const {
    if (X.empty() || Y.empty()) throw Error("Precondition", "bridge needs nonempty sets");
    std::set<int> xs(X.begin(), X.end()), ys(Y.begin(), Y.end());
    for (int v : X)
      if (ys.count(v)) throw Error("Precondition", "bridge sets intersect");
    if (!connected(X) || !connected(Y)) throw Error("Precondition", "bridge sets must be connected");
    auto p = path(X.front(), Y.front());
    std::size_t i = 0, j = p.size() - 1;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (xs.count(p[k])) i = k;
    for (std::size_t k = p.size(); k-- > i;)
      if (ys.count(p[k])) j = k;
    return {p.begin() + static_cast<std::ptrdiff_t>(i), p.begin() + static_cast<std::ptrdiff_t>(j) + 1};
  }
};

inline QuotientTree hausdorff_quotient(const Model& m, const std::vector<TreeAuto>& autos = {}) {
  QuotientTree q;
  const int P = static_cast<int>(m.points());
  q.vertex_of.assign(static_cast<std::size_t>(P), -1);
  std::map<int, int> cls_vertex;
  for (int p = 0; p < P; ++p) {
    int c = m.class_of(p);
    if (c >= 0) {
      auto [it, fresh] = cls_vertex.emplace(c, static_cast<int>(q.vertex_points.size()));
      if (fresh) q.vertex_points.emplace_back();
      q.vertex_of[static_cast<std::size_t>(p)] = it->second;
    } else {
      q.vertex_of[static_cast<std::size_t>(p)] = static_cast<int>(q.vertex_points.size());
      q.vertex_points.emplace_back();
    }
    q.vertex_points[static_cast<std::size_t>(q.vertex_of[static_cast<std::size_t>(p)])].push_back(p);
  }
  q.adj.assign(q.vertex_points.size(), {});
  std::set<std::pair<int, int>> edges;
  for (std::size_t l = 0; l < m.links(); ++l) {
    const auto& pts = m.link_points(l);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        int u = q.vertex_of[static_cast<std::size_t>(pts[i])], v = q.vertex_of[static_cast<std::size_t>(pts[j])];
        if (u != v) edges.emplace(std::min(u, v), std::max(u, v));
      }
  }
  for (const auto& [u, v] : edges) {
    q.adj[static_cast<std::size_t>(u)].push_back(v);
    q.adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (const auto& g : autos) {
    std::vector<int> img(q.size(), -1);
    for (std::size_t v = 0; v < q.size(); ++v) {
      int w = g(q.vertex_points[v].front());
      if (w >= 0) img[v] = q.vertex_of[static_cast<std::size_t>(w)];
    }
    q.autos.push_back(std::move(img));
  }
  return q;
}

// ---- completion ----

struct IdealPoint {
  int cls = -1;
  Tag tag = Tag::Sink;
  std::vector<int> members;
  NodeSet plus;
};

struct Completion {
  std::size_t points = 0;
  std::vector<IdealPoint> ideals;
  std::vector<NodeSet> plus;  // per element: points first, then ideal points

  std::size_t size() const { return plus.size(); }

  Cmp compare(std::size_t u, std::size_t v) const {
    if (u == v) return Cmp::Equal;
    const NodeSet& a = plus[u];
    const NodeSet& b = plus[v];
    bool ab = b.is_subset_of(a), ba = a.is_subset_of(b);
    if (ab && ba) return Cmp::Equal;
    if (ab) return Cmp::Less;
    if (ba) return Cmp::Greater;
    return Cmp::Incomparable;
  }

  // Extends a point map: [x] g = [x g].
  std::vector<int> extend(const Model& m, const TreeAuto& g) const {
    std::vector<int> out(size(), -1);
    for (std::size_t p = 0; p < points; ++p) out[p] = g.map[p];
    for (std::size_t i = 0; i < ideals.size(); ++i) {
      int c = -1;
      bool ok = true;
      for (int y : ideals[i].members) {
        int w = g(y);
        if (w < 0 || m.class_of(w) < 0 || (c >= 0 && m.class_of(w) != c)) {
          ok = false;
          break;
        }
        c = m.class_of(w);
      }
      if (!ok) continue;
      for (std::size_t j = 0; j < ideals.size(); ++j)
        if (ideals[j].cls == c) out[points + i] = static_cast<int>(points + j);
    }
    return out;
  }
};

inline Tag class_tag(const Model& m, const Model::Class& k) {
  bool sink = true, source = true;
  for (int y : k.members)
    for (int z : k.members) {
      if (y == z) continue;
      sink = sink && m.in_plus(y, z);
      source = source && m.in_minus(y, z);
    }
  if (sink == source) throw Error("Malformed", "class is neither a source nor a sink");
  return sink ? Tag::Sink : Tag::Source;
}

inline Completion completion(const Model& m) {
  Completion c;
  c.points = m.points();
  for (std::size_t p = 0; p < m.points(); ++p) c.plus.push_back(m.plus(static_cast<int>(p)));
  for (std::size_t k = 0; k < m.classes().size(); ++k) {
    const auto& cls = m.classes()[k];
    IdealPoint ip;
    ip.cls = static_cast<int>(k);
    ip.members = cls.members;
    ip.tag = class_tag(m, cls);
    if (ip.tag == Tag::Source) {
      ip.plus = NodeSet(m.nodes());
      for (int y : cls.members) {
        ip.plus |= m.plus(y);
        ip.plus.set(static_cast<std::size_t>(y));
      }
    } else {
      ip.plus = m.plus(cls.members.front());
      for (int y : cls.members) ip.plus &= m.plus(y);
    }
    c.plus.push_back(ip.plus);
    c.ideals.push_back(std::move(ip));
  }
  return c;
}

}  // namespace laminar::leaf
