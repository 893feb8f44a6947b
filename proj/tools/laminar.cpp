// laminar: presentations, identity checks, fixed-point certificates and
// leaf-space model queries from the command line.
//
// Exit codes: 0 success / Proved / pass, 1 Unknown / violations / invalid
// certificate, 2 invalid input.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "laminar/laminar.hpp"

namespace {

using namespace laminar;
namespace lf = laminar::leaf;

constexpr int kOk = 0, kNo = 1, kBad = 2;

struct Budgets {
  ProverBudget prover;
  std::size_t samples = 400;
};

// LAMINAR_BUDGET: either a bare fact count or "facts=N,length=N,samples=N".
Budgets env_budgets() {
  Budgets b;
  const char* env = std::getenv("LAMINAR_BUDGET");
  if (!env || !*env) return b;
  std::string s = env;
  auto num = [&](const std::string& v) {
    std::size_t pos = 0;
    unsigned long long n = 0;
    try {
      n = std::stoull(v, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != v.size() || n == 0) throw Error("InvalidBudget", "bad LAMINAR_BUDGET value '" + v + "'");
    return static_cast<std::size_t>(n);
  };
  if (s.find('=') == std::string::npos) {
    b.prover.max_facts = num(s);
    return b;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    std::string k = item.substr(0, eq), v = eq == std::string::npos ? "" : item.substr(eq + 1);
    if (k == "facts") b.prover.max_facts = num(v);
    else if (k == "length") b.prover.max_length = num(v);
    else if (k == "splits") b.prover.max_splits = num(v);
    else if (k == "samples") b.samples = num(v);
    else throw Error("InvalidBudget", "unknown LAMINAR_BUDGET key '" + k + "'");
  }
  return b;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IoError", "cannot write '" + path + "'");
  out << text;
}

std::string names(const lf::Model& m, const std::vector<int>& pts) {
  std::string s;
  for (int p : pts) s += (s.empty() ? "" : " ") + m.point_name(p);
  return s.empty() ? "(none)" : s;
}

void print_warnings(const SurgerySlope& s) {
  for (const auto& w : slope_warnings(s)) std::cout << "warning: " << w << "\n";
}

// ---- algebra commands ----

int cmd_present(long p, long q, const std::string& out) {
  SurgerySlope s{p, q};
  auto sp = build_presentation(s);
  print_warnings(s);
  std::string text = presentation_file(sp);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return kOk;
}

int cmd_verify(long p, long q, const Budgets&) {
  SurgerySlope s{p, q};
  check_slope(s);
  print_warnings(s);
  auto rep = verify_identities(s);
  bool all = rep.all_pass();
  for (const auto& c : rep.checks) {
    std::cout << c.name << ": " << to_string(c.verdict);
    if (c.verdict == CheckVerdict::Pass) std::cout << " (depth " << c.depth << ")";
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << "\n";
  }
  auto h = homology_check(s);
  std::cout << "homology: " << (h.orientation_forced ? "Pass" : "Fail") << "  " << h.reason << "\n";
  all = all && h.orientation_forced;
  return all ? kOk : kNo;
}

void print_proof(const ProofResult& r) {
  std::cout << "verdict: " << to_string(r.verdict) << "\n";
  for (const auto& b : r.branches)
    std::cout << "  branch " << b.id << ": " << b.outcome << " (" << b.facts << " facts, " << b.steps << " steps)\n";
  if (!r.derived_bound.empty()) std::cout << "derived bound: " << r.derived_bound << "\n";
  for (const auto& f : r.flags) std::cout << "flag: " << f << "\n";
  if (!r.proved()) {
    std::cout << "reason: " << r.reason << "\n";
    std::cout << "note: Unknown means no certificate was found within the budget; it is not a refutation\n";
  }
}

int cmd_prove(std::optional<long> p, std::optional<long> q, const std::string& family, const std::string& cert_out,
              const Budgets& b) {
  ProofResult r;
  if (!family.empty()) {
    if (p || q) throw Error("InvalidInput", "give either --family or --p/--q");
    r = prove_symbolic_family(family, b.prover);
  } else {
    if (!p || !q) throw Error("InvalidInput", "--p and --q are required without --family");
    SurgerySlope s{*p, *q};
    check_slope(s);
    print_warnings(s);
    r = prove_global_fixed_point_R(s, b.prover);
  }
  print_proof(r);
  if (r.proved() && r.certificate && !cert_out.empty()) {
    write_file(cert_out, r.certificate->serialize());
    std::cout << "certificate: " << cert_out << "\n";
  }
  return r.proved() ? kOk : kNo;
}

int cmd_check_cert(const std::string& path, std::optional<long> p, std::optional<long> q) {
  Certificate cert = Certificate::parse(read_file(path));
  if (!cert.doc.is_object() || !cert.doc.contains("mode"))
    throw Error("MalformedCertificate", "certificate has no mode field");
  CheckReport rep;
  if (cert.doc["mode"] == "symbolic") {
    rep = check_family_certificate(cert);
  } else {
    if (!p || !q) throw Error("InvalidInput", "--p and --q are required for a concrete certificate");
    SurgerySlope s{*p, *q};
    check_slope(s);
    rep = check_certificate(cert, build_presentation(s));
  }
  std::cout << (rep.ok ? "valid" : "invalid: " + rep.reason) << "\n";
  return rep.ok ? kOk : kNo;
}

// ---- tree commands ----

int tree_validate(const std::string& file) {
  lf::Model m = lf::load_model(read_file(file));
  auto q = lf::hausdorff_quotient(m);
  std::cout << "valid: " << m.points() << " points, " << m.arcs().size() << " arcs, " << m.classes().size()
            << " nonsep classes, " << m.autos().size() << " automorphisms\n";
  if (m.periodic())
    std::cout << "periodic: shift " << m.shift() << ", window " << m.window() << " copies, core "
              << m.core_points().size() << " points\n";
  std::cout << "quotient: " << q.size() << " vertices, " << q.edges() << " edges\n";
  return kOk;
}

int tree_compare(const std::string& file, const std::string& x, const std::string& y) {
  lf::Model m = lf::load_model(read_file(file));
  std::cout << lf::to_string(m.compare(m.point(x), m.point(y))) << "\n";
  return kOk;
}

int tree_spine(const std::string& file, const std::string& x, const std::string& y) {
  lf::Model m = lf::load_model(read_file(file));
  auto sp = m.spine(m.point(x), m.point(y));
  for (const auto& [a, b] : sp.intervals) std::cout << "[" << m.point_name(a) << ", " << m.point_name(b) << "]\n";
  std::cout << "d = " << sp.d() << "\n";
  return kOk;
}

std::vector<int> point_set(const lf::Model& m, const std::string& pts, const std::string& arcs) {
  std::vector<int> out = arcs.empty() ? std::vector<int>{} : m.arc_points(arcs);
  if (!pts.empty())
    for (int p : m.point_list(pts)) out.push_back(p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw Error("InvalidInput", "empty point set");
  return out;
}

int tree_bridge(const std::string& file, const std::string& from, const std::string& from_arcs,
                const std::string& to, const std::string& to_arcs, bool quotient) {
  lf::Model m = lf::load_model(read_file(file));
  auto X = point_set(m, from, from_arcs), Y = point_set(m, to, to_arcs);
  if (quotient) {
    auto q = lf::hausdorff_quotient(m);
    auto path = q.bridge(q.image(X), q.image(Y));
    for (int v : path) std::cout << "[" << names(m, q.vertex_points[static_cast<std::size_t>(v)]) << "]\n";
    std::cout << "length = " << path.size() - 1 << "\n";
    return kOk;
  }
  auto sp = lf::bridge(m, X, Y);
  for (const auto& [a, b] : sp.intervals) std::cout << "[" << m.point_name(a) << ", " << m.point_name(b) << "]\n";
  std::cout << "d = " << sp.d() << "\n";
  return kOk;
}

const lf::TreeAuto& named_auto(const lf::Model& m, const std::string& name, lf::TreeAuto& id) {
  if (name == "id") {
    id = m.identity();
    return id;
  }
  return m.auto_named(name);
}

int tree_sets(const std::string& file, const std::string& g) {
  lf::Model m = lf::load_model(read_file(file));
  lf::TreeAuto id;
  auto s = lf::invariant_point_sets(m, named_auto(m, g, id));
  std::cout << "domain: " << s.domain.size() << " points\n";
  std::cout << "Fix: " << names(m, s.fix) << "\n";
  std::cout << "Nonsep: " << names(m, s.nonsep) << "\n";
  std::cout << "C_g: " << names(m, s.cg) << "\n";
  return kOk;
}

int tree_axis(const std::string& file, const std::string& g, const std::string& start) {
  lf::Model m = lf::load_model(read_file(file));
  lf::TreeAuto id;
  auto A = lf::axis(m, named_auto(m, g, id), start.empty() ? -1 : m.point(start));
  std::cout << "axis: " << names(m, A) << "\n";
  return kOk;
}

int tree_quotient(const std::string& file) {
  lf::Model m = lf::load_model(read_file(file));
  auto q = lf::hausdorff_quotient(m, m.autos());
  std::cout << "vertices: " << q.size() << ", edges: " << q.edges() << "\n";
  for (std::size_t v = 0; v < q.size(); ++v) {
    std::cout << "v" << v << " [" << names(m, q.vertex_points[v]) << "] ->";
    for (int w : q.adj[v])
      if (static_cast<std::size_t>(w) > v) std::cout << " v" << w;
    std::cout << "\n";
  }
  for (std::size_t i = 0; i < m.autos().size(); ++i) {
    std::cout << "auto " << m.autos()[i].name << ":";
    for (std::size_t v = 0; v < q.size(); ++v) {
      int w = q.autos[i][v];
      std::cout << " v" << v << "->" << (w < 0 ? std::string("?") : "v" + std::to_string(w));
    }
    std::cout << "\n";
  }
  return kOk;
}

int tree_complete(const std::string& file) {
  lf::Model m = lf::load_model(read_file(file));
  auto c = lf::completion(m);
  std::cout << "ideal points: " << c.ideals.size() << "\n";
  for (const auto& ip : c.ideals) {
    std::size_t n = 0;
    for (std::size_t p = 0; p < m.points(); ++p) n += ip.plus.test(p);
    std::cout << "[" << names(m, ip.members) << "] " << lf::to_string(ip.tag) << ", positive side " << n
              << " points\n";
  }
  return kOk;
}

void print_suite(const lf::SuiteReport& r) {
  for (const auto& [id, what] : lf::suite_checks()) {
    auto it = r.checked.find(id);
    std::cout << id << " " << what << ": " << (it == r.checked.end() ? 0 : it->second) << " instances\n";
  }
  std::cout << "violations: " << r.violations.size() << "\n";
  std::size_t shown = 0;
  for (const auto& v : r.violations) {
    if (++shown > 20) break;
    std::cout << "  " << v.check << " " << v.autom << ": " << v.detail << "\n";
  }
}

int tree_suite(const std::string& file, const std::string& models, std::size_t count, std::uint64_t seed,
               std::size_t budget) {
  if (!file.empty()) {
    lf::Model m = lf::load_model(read_file(file));
    auto r = lf::run_property_suite(m, budget, seed);
    print_suite(r);
    return r.ok() ? kOk : kNo;
  }
  if (models != "random") throw Error("InvalidInput", "--models must be 'random' when no model file is given");
  auto r = lf::run_random_suite(count, seed, budget);
  std::cout << "models: " << r.models << " (" << r.periodic << " periodic), automorphisms: " << r.autos
            << ", largest: " << r.max_points << " points\n";
  print_suite(r.report);
  return r.report.ok() ? kOk : kNo;
}

int tree_scenario(const std::string& name, bool all, bool show) {
  std::vector<const lf::Scenario*> todo;
  if (all) {
    for (const auto& s : lf::scenarios()) todo.push_back(&s);
  } else {
    if (name.empty()) throw Error("InvalidInput", "give a scenario name or --all");
    todo.push_back(&lf::scenario(name));
  }
  bool ok = true;
  for (const auto* s : todo) {
    auto r = lf::run_scenario(*s);
    ok = ok && r.ok();
    std::cout << s->name << ": " << (r.ok() ? "Pass" : "Fail") << "  (" << s->caption << ")\n";
    for (const auto& c : r.claims)
      std::cout << "  " << (c.ok ? "ok   " : "FAIL ") << c.text << (c.detail.empty() ? "" : "  [" + c.detail + "]")
                << "\n";
    if (show) std::cout << "  encoding: " << s->notes << "\n" << s->model;
  }
  return ok ? kOk : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laminar: surgery presentations, fixed-point certificates and leaf-space models"};
  app.require_subcommand(1);

  long p = 0, q = 0;
  std::string out, family, cert, file, x, y, g, start, from, to, from_arcs, to_arcs, models = "random", scen;
  std::size_t count = 500, budget = 0;
  std::uint64_t seed = 2024;
  bool all = false, show = false, in_quotient = false;

  auto* present = app.add_subcommand("present", "Write the presentation for slope p/q");
  present->add_option("--p", p, "numerator")->required();
  present->add_option("--q", q, "denominator")->required();
  present->add_option("--out", out, "output file (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Check the word identities and the homology gate");
  verify->add_option("--p", p)->required();
  verify->add_option("--q", q)->required();

  auto* prove = app.add_subcommand("prove", "Search for a global fixed point certificate for actions on R");
  auto* op_p = prove->add_option("--p", p);
  auto* op_q = prove->add_option("--q", q);
  prove->add_option("--family", family, "symbolic family, e.g. \"p/q>=10\"");
  prove->add_option("--cert", cert, "write the certificate here on success");
  std::size_t facts = 0, length = 0;
  prove->add_option("--max-facts", facts, "fact budget per branch");
  prove->add_option("--max-length", length, "word length budget (tokens)");

  auto* check = app.add_subcommand("check-cert", "Replay a certificate");
  check->add_option("--cert", cert)->required();
  auto* oc_p = check->add_option("--p", p);
  auto* oc_q = check->add_option("--q", q);

  auto* tree = app.add_subcommand("tree", "Leaf-space model queries");
  tree->require_subcommand(1);
  auto* t_validate = tree->add_subcommand("validate", "Load a model and report its shape");
  t_validate->add_option("model", file)->required();
  auto* t_compare = tree->add_subcommand("compare", "Compare two points");
  t_compare->add_option("model", file)->required();
  t_compare->add_option("x", x)->required();
  t_compare->add_option("y", y)->required();
  auto* t_spine = tree->add_subcommand("spine", "Spine intervals and gap count between two points");
  t_spine->add_option("model", file)->required();
  t_spine->add_option("x", x)->required();
  t_spine->add_option("y", y)->required();
  auto* t_bridge = tree->add_subcommand("bridge", "Bridge between two point sets");
  t_bridge->add_option("model", file)->required();
  t_bridge->add_option("--from", from, "comma separated points");
  t_bridge->add_option("--from-arcs", from_arcs, "space separated arcs");
  t_bridge->add_option("--to", to, "comma separated points");
  t_bridge->add_option("--to-arcs", to_arcs, "space separated arcs");
  t_bridge->add_flag("--quotient", in_quotient, "compute in the Hausdorff quotient");
  auto* t_sets = tree->add_subcommand("sets", "Fix, Nonsep and C_g of an automorphism");
  t_sets->add_option("model", file)->required();
  t_sets->add_option("auto", g)->required();
  auto* t_axis = tree->add_subcommand("axis", "Axis of an automorphism");
  t_axis->add_option("model", file)->required();
  t_axis->add_option("auto", g)->required();
  t_axis->add_option("--start", start, "starting point in C_g");
  auto* t_quot = tree->add_subcommand("quotient", "Hausdorff quotient and induced automorphisms");
  t_quot->add_option("model", file)->required();
  auto* t_comp = tree->add_subcommand("complete", "Ideal points of the completion");
  t_comp->add_option("model", file)->required();
  auto* t_suite = tree->add_subcommand("suite", "Property suite on a model file or on random models");
  t_suite->add_option("model", file);
  t_suite->add_option("--models", models, "model source when no file is given")->check(CLI::IsMember({"random"}));
  t_suite->add_option("--count", count, "number of random models");
  t_suite->add_option("--seed", seed);
  t_suite->add_option("--budget", budget, "sampled pairs per check");
  auto* t_scen = tree->add_subcommand("scenario", "Figure scenario regressions");
  t_scen->add_option("name", scen);
  t_scen->add_flag("--all", all);
  t_scen->add_flag("--show-model", show, "print each encoding");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBad;
  }

  try {
    Budgets b = env_budgets();
    if (facts) b.prover.max_facts = facts;
    if (length) b.prover.max_length = length;
    if (budget) b.samples = budget;
    auto opt = [](CLI::Option* o, long v) { return o->count() ? std::optional<long>(v) : std::nullopt; };
    if (*present) return cmd_present(p, q, out);
    if (*verify) return cmd_verify(p, q, b);
    if (*prove) return cmd_prove(opt(op_p, p), opt(op_q, q), family, cert, b);
    if (*check) return cmd_check_cert(cert, opt(oc_p, p), opt(oc_q, q));
    if (*t_validate) return tree_validate(file);
    if (*t_compare) return tree_compare(file, x, y);
    if (*t_spine) return tree_spine(file, x, y);
    if (*t_bridge) return tree_bridge(file, from, from_arcs, to, to_arcs, in_quotient);
    if (*t_sets) return tree_sets(file, g);
    if (*t_axis) return tree_axis(file, g, start);
    if (*t_quot) return tree_quotient(file);
    if (*t_comp) return tree_complete(file);
    if (*t_suite) return tree_suite(file, models, count, seed, b.samples);
    if (*t_scen) return tree_scenario(scen, all, show);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBad;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBad;
  }
  return kBad;
}
