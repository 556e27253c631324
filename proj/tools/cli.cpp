#include "cli.hpp"

#include "wds/bounds.hpp"
#include "wds/json_io.hpp"
#include "wds/oracle.hpp"
#include "wds/search.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wds::cli {
namespace {

std::string read_input(const std::string& value) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(value, ec)) return value;
  std::ifstream in(value);
  if (!in) throw InputError("cannot read " + value);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Form load_form(const std::string& input, std::optional<unsigned> n) {
  return read_form(read_input(input), n);
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path + ": invalid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw InputError("cannot write " + path);
}

std::string exact_and_approx(const Rational& q) {
  std::string s = to_fraction_string(q);
  if (q.get_den() == 1) return q.get_num().get_str();
  return s + " (~" + approx_string(q) + ")";
}

std::string point_string(const SimplexPoint& p) {
  std::string exact = "(", approx = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) exact += ", ", approx += ", ";
    exact += to_fraction_string(p.coords()[i]);
    approx += approx_string(p.coords()[i]);
  }
  return exact + ") ~ " + approx + ")";
}

std::string path_string(const Path& path) {
  std::string s = "[";
  for (std::size_t i = 0; i < path.size(); ++i) s += (i ? "," : "") + to_string(path[i]);
  return s + "]";
}

std::string factored_string(const FactoredInteger& x) {
  std::string s;
  for (const auto& fp : x) {
    if (fp.base == 1 || fp.exponent == 0) continue;
    if (!s.empty()) s += " * ";
    s += fp.base.get_str();
    if (fp.exponent != 1) s += "^" + fp.exponent.get_str();
  }
  return s.empty() ? "1" : s;
}

std::string reciprocal_string(const ReciprocalBound& r) {
  if (r.exact) return to_fraction_string(*r.exact) + " (~" + r.approx + ")";
  return "1/(" + factored_string(r.denominator) + ") (~" + r.approx + ", " + r.digits.get_str() +
         " digit denominator)";
}

std::string steps_string(const StepBound& s) {
  if (s.certified) return s.steps.get_str();
  return s.steps.get_str() + " (uncertified upper estimate)";
}

std::uint64_t node_budget_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("WDS_NODE_BUDGET");
  if (!v || !*v) return fallback;
  Integer b;
  try {
    b = parse_integer(v);
  } catch (const InputError&) {
    throw InputError(std::string("WDS_NODE_BUDGET is not an integer: ") + v);
  }
  if (b < 1 || !b.fits_ulong_p()) throw InputError(std::string("WDS_NODE_BUDGET out of range: ") + v);
  return b.get_ui();
}

SearchMode parse_mode(const std::string& s) {
  if (s == "psd") return SearchMode::Psd;
  if (s == "pd") return SearchMode::Pd;
  if (s == "auto") return SearchMode::Auto;
  throw InputError("unknown mode '" + s + "'");
}

struct CheckArgs {
  std::string input;
  std::optional<unsigned> n;
  unsigned max_depth = 8;
  std::string mode = "auto";
  std::optional<unsigned> oracle;
  std::string certificate;
  unsigned parallel = 0;
  bool dedupe = false;
  bool json = false;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  Form f = load_form(a.input, a.n);
  SearchConfig cfg;
  cfg.max_depth = a.max_depth;
  cfg.mode = parse_mode(a.mode);
  cfg.parallel_workers = a.parallel;
  cfg.dedupe = a.dedupe;
  cfg.node_budget = node_budget_from_env(cfg.node_budget);

  Verdict v = classify(f, cfg);
  const Certificate& cert = certificate_of(v);
  if (!a.certificate.empty()) write_json_file(a.certificate, certificate_to_json(cert));

  Json doc = {{"verdict", to_string(kind_of(v))},
              {"n", f.variables()},
              {"d", f.degree()},
              {"form", emit(f)},
              {"nodes_visited", cert.nodes_visited},
              {"max_depth_reached", cert.max_depth_reached},
              {"budget_exhausted", cert.budget_exhausted}};
  std::ostringstream human;
  human << "verdict: " << to_string(kind_of(v)) << '\n';

  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, NotPsd>) {
          doc["witness"] = witness_to_json(r.witness);
          human << "witness: " << point_string(r.witness.point) << '\n'
                << "value: " << exact_and_approx(r.witness.value) << '\n'
                << "cell: " << path_string(r.witness.path) << '\n';
        } else if constexpr (std::is_same_v<T, PositiveSemidefinite>) {
          Json zeros = Json::array();
          for (const auto& z : r.zeros) zeros.push_back(rationals_to_json(z.coords()));
          doc["zeros"] = std::move(zeros);
          doc["definitely_not_pd"] = r.definitely_not_pd;
          human << "definitely not PD: " << (r.definitely_not_pd ? "yes" : "no") << '\n';
          for (const auto& z : r.zeros) human << "zero: " << point_string(z) << '\n';
        } else if constexpr (std::is_same_v<T, Undetermined>) {
          doc["frontier_count"] = r.frontier_count;
          human << "open cells: " << r.frontier_count
                << (r.budget_exhausted ? " (node budget exhausted)" : "") << '\n';
        }
      },
      v);
  human << "nodes visited: " << cert.nodes_visited << ", deepest level: " << cert.max_depth_reached
        << '\n';

  if (f.variables() >= 2) {
    BoundReport b = bound_report(coefficient_bound(f), f.variables(), f.degree());
    doc["bounds"] = {{"M", b.M.get_str()},
                     {"cp", b.cp.steps.get_str()},
                     {"cnps", b.cnps.steps.get_str()},
                     {"certified", b.cp.certified && b.cnps.certified}};
    human << "step bounds: C_p = " << steps_string(b.cp) << ", C_nps = " << steps_string(b.cnps) << '\n';
  }

  int code = kind_of(v) == VerdictKind::Undetermined ? kUndetermined : kDeterminate;
  if (a.oracle) {
    GridMinimum g = grid_min(f, *a.oracle, a.parallel);
    bool consistent = true;
    if (kind_of(v) == VerdictKind::PositiveDefinite) consistent = g.value > 0;
    if (kind_of(v) == VerdictKind::PositiveSemidefinite) consistent = g.value >= 0;
    doc["oracle"] = {{"N", *a.oracle},
                     {"min", to_fraction_string(g.value)},
                     {"argmin", rationals_to_json(g.argmin.coords())},
                     {"consistent", consistent}};
    human << "grid minimum (N = " << *a.oracle << "): " << exact_and_approx(g.value) << " at "
          << point_string(g.argmin) << '\n';
    if (!consistent) {
      err << "error: grid oracle contradicts the verdict\n";
      code = kInternalError;
    }
  }

  if (a.json)
    out << doc.dump(2) << '\n';
  else
    out << human.str();
  return code;
}

int cmd_bounds(const std::string& m_text, unsigned long n, unsigned long d, bool json,
               std::ostream& out) {
  Integer M = parse_integer(m_text);
  if (M < 1) throw InputError("-M must be at least 1");
  if (n < 2) throw InputError("-n must be at least 2");
  if (d < 1) throw InputError("-d must be at least 1");
  BoundReport r = bound_report(M, n, d);
  if (json) {
    out << bound_report_to_json(r).dump(2) << '\n';
    return kDeterminate;
  }
  out << "M = " << r.M.get_str() << ", n = " << r.n << ", d = " << r.d << '\n'
      << "C_1 = " << reciprocal_string(r.c1) << '\n'
      << "simplex minimum bound = " << reciprocal_string(r.jp_bound) << '\n'
      << "C_p = " << steps_string(r.cp) << '\n'
      << "C_nps = " << steps_string(r.cnps) << '\n';
  return kDeterminate;
}

int cmd_expand(const std::string& input, std::optional<unsigned> n, unsigned depth, bool json,
               std::ostream& out) {
  Form f = load_form(input, n);
  auto set = expand_to_depth(f, depth, node_budget_from_env(1'000'000));
  if (json) {
    Json arr = Json::array();
    for (const auto& e : set)
      arr.push_back({{"path", path_to_json(e.path)},
                     {"scale", to_fraction_string(e.scale)},
                     {"form", form_to_json(e.form)},
                     {"text", emit(e.form, 'y')}});
    out << arr.dump(2) << '\n';
    return kDeterminate;
  }
  for (const auto& e : set)
    out << path_string(e.path) << "  scale " << to_fraction_string(e.scale) << "  "
        << emit(e.form, 'y') << '\n';
  return kDeterminate;
}

int cmd_eval(const std::string& input, std::optional<unsigned> n, const std::string& point_text,
             bool json, std::ostream& out) {
  Form f = load_form(input, n);
  std::vector<Rational> point;
  std::stringstream ss(point_text);
  for (std::string item; std::getline(ss, item, ',');) point.push_back(parse_rational(item));
  if (point.size() != f.variables())
    throw InputError("point has " + std::to_string(point.size()) + " coordinates, form has " +
                     std::to_string(f.variables()) + " variables");
  Rational value = evaluate(f, point);
  if (json)
    out << Json{{"value", to_fraction_string(value)}}.dump(2) << '\n';
  else
    out << exact_and_approx(value) << '\n';
  return kDeterminate;
}

int cmd_verify(const std::string& input, std::optional<unsigned> n, const std::string& cert_path,
               std::ostream& out, std::ostream& err) {
  Form f = load_form(input, n);
  Certificate cert = certificate_from_json(load_json_file(cert_path));
  CertificateCheck check = verify_certificate(f, cert);
  if (!check) {
    err << "error: invalid certificate: " << check.reason << '\n';
    return kInputError;
  }
  out << "certificate valid: " << to_string(cert.claim) << ", " << cert.nodes.size() << " nodes\n";
  return kDeterminate;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact positivity checks for integral forms on the simplex"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Decide PD / PSD / not PSD on the simplex");
  c->add_option("--input", check.input, "Form text, JSON document, or a file holding either")->required();
  c->add_option("-n", check.n, "Number of variables");
  c->add_option("--max-depth", check.max_depth, "Deepest subdivision level");
  c->add_option("--mode", check.mode, "psd, pd or auto")->check(CLI::IsMember({"psd", "pd", "auto"}));
  c->add_option("--oracle", check.oracle, "Cross-check with the exact grid minimum at this N");
  c->add_option("--certificate", check.certificate, "Write the certificate JSON here");
  c->add_option("--parallel", check.parallel, "Worker threads");
  c->add_flag("--dedupe", check.dedupe, "Reuse subtrees of identical cell forms");
  c->add_flag("--json", check.json, "Print one JSON document");

  std::string m_text;
  unsigned long bn = 0, bd = 0;
  bool bjson = false;
  auto* b = app.add_subcommand("bounds", "Print the quantitative bounds for (M, n, d)");
  b->add_option("-M", m_text, "Coefficient bound")->required();
  b->add_option("-n", bn, "Number of variables")->required();
  b->add_option("-d", bd, "Degree")->required();
  b->add_flag("--json", bjson, "Print one JSON document");

  std::string input, point, cert_path;
  std::optional<unsigned> n;
  unsigned depth = 0;
  bool json = false;
  auto* e = app.add_subcommand("expand", "List the forms of every cell at a depth");
  e->add_option("--input", input, "Form text, JSON document, or a file")->required();
  e->add_option("-n", n, "Number of variables");
  e->add_option("--depth", depth, "Subdivision depth")->required();
  e->add_flag("--json", json, "Print one JSON document");

  auto* ev = app.add_subcommand("eval", "Evaluate a form exactly");
  ev->add_option("--input", input, "Form text, JSON document, or a file")->required();
  ev->add_option("-n", n, "Number of variables");
  ev->add_option("--point", point, "Comma separated rationals p/q")->required();
  ev->add_flag("--json", json, "Print one JSON document");

  auto* vf = app.add_subcommand("verify", "Replay a certificate against a form");
  vf->add_option("--input", input, "Form text, JSON document, or a file")->required();
  vf->add_option("-n", n, "Number of variables");
  vf->add_option("--certificate", cert_path, "Certificate JSON file")->required();

  std::vector<const char*> argv{"wdsprove"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kDeterminate;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n';
    return kInputError;
  }

  try {
    if (*c) return cmd_check(check, out, err);
    if (*b) return cmd_bounds(m_text, bn, bd, bjson, out);
    if (*e) return cmd_expand(input, n, depth, json, out);
    if (*ev) return cmd_eval(input, n, point, json, out);
    if (*vf) return cmd_verify(input, n, cert_path, out, err);
  } catch (const BudgetExceeded& ex) {
    err << "error: " << ex.what() << '\n';
    return kInternalError;
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << '\n';
    return kInputError;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kInternalError;
  }
  return kInputError;
}

}  // namespace wds::cli
