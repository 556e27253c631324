#include "wds/dense_form.hpp"
#include "wds/json_io.hpp"
#include "wds/search.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <functional>
#include <map>

namespace wds {

std::string form_digest(const Form& f) {
  std::string canon = "n=" + std::to_string(f.variables()) + ";d=" + std::to_string(f.degree()) +
                      ";" + emit(f);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canon.data(), canon.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

// ---------------------------------------------------------------- JSON

Json form_to_json(const Form& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back({{"exp", e}, {"coef", c.get_str()}});
  return {{"n", f.variables()}, {"terms", std::move(terms)}};
}

Form form_from_json(const Json& j) {
  try {
    unsigned n = j.at("n").get<unsigned>();
    Form::Terms terms;
    for (const auto& t : j.at("terms")) {
      Exponents e = t.at("exp").get<Exponents>();
      const Json& c = t.at("coef");
      Integer coef = c.is_string() ? parse_integer(c.get<std::string>())
                                   : Integer(std::to_string(c.get<long long>()), 10);
      terms[e] += coef;
    }
    return Form(n, std::move(terms));
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed form document: ") + e.what());
  }
}

Form read_form(std::string_view text, std::optional<unsigned> n_override) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("invalid JSON: ") + e.what());
    }
    Form f = form_from_json(j);
    if (n_override && *n_override != f.variables())
      throw InputError("-n " + std::to_string(*n_override) + " conflicts with the document's n = " +
                       std::to_string(f.variables()));
    return f;
  }
  return parse_form(text, n_override);
}

Json rationals_to_json(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_fraction_string(q));
  return out;
}

namespace {

std::vector<Rational> rationals_from_json(const Json& j) {
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(parse_rational(x.get<std::string>()));
  return out;
}

std::string_view traversal_name(Traversal t) {
  return t == Traversal::DepthFirst ? "depth-first" : "breadth-first";
}

std::string_view mode_name(SearchMode m) {
  switch (m) {
    case SearchMode::Psd: return "psd";
    case SearchMode::Pd: return "pd";
    case SearchMode::Auto: return "auto";
  }
  return "?";
}

template <class Enum, std::size_t N>
Enum enum_from(const std::string& s, const std::array<Enum, N>& values,
               std::string_view (*name)(Enum)) {
  for (Enum v : values)
    if (name(v) == s) return v;
  throw CertificateError("unknown value '" + s + "'");
}

std::string_view node_status_name(NodeStatus s) { return to_string(s); }
std::string_view verdict_name(VerdictKind k) { return to_string(k); }
std::string_view witness_name(WitnessKind k) { return to_string(k); }

constexpr std::array kStatuses{NodeStatus::Expanded,     NodeStatus::PosComplete,
                               NodeStatus::Nonneg,       NodeStatus::NegativeAxis,
                               NodeStatus::NegativeCenter, NodeStatus::Frontier,
                               NodeStatus::Unvisited,    NodeStatus::Duplicate};
constexpr std::array kVerdicts{VerdictKind::PositiveDefinite, VerdictKind::PositiveSemidefinite,
                               VerdictKind::NotPsd, VerdictKind::Undetermined};
constexpr std::array kWitnessKinds{WitnessKind::NegativeVertex, WitnessKind::NegativeCenter,
                                   WitnessKind::Zero};
constexpr std::array kTraversals{Traversal::DepthFirst, Traversal::BreadthFirst};
constexpr std::array kModes{SearchMode::Psd, SearchMode::Pd, SearchMode::Auto};

Json axes_to_json(const std::vector<unsigned>& axes) {
  Json out = Json::array();
  for (unsigned i : axes) out.push_back(i + 1);
  return out;
}

std::vector<unsigned> axes_from_json(const Json& j, unsigned n) {
  std::vector<unsigned> out;
  for (const auto& x : j) {
    unsigned i = x.get<unsigned>();
    if (i == 0 || i > n) throw CertificateError("axis index out of range");
    out.push_back(i - 1);
  }
  return out;
}

}  // namespace

Json path_to_json(const Path& p) {
  Json out = Json::array();
  for (const auto& theta : p) out.push_back(theta.images());
  return out;
}

Path path_from_json(const Json& j, unsigned n) {
  if (!j.is_array()) throw CertificateError("malformed path: not an array");
  Path out;
  for (const auto& step : j) {
    std::vector<unsigned> images;
    try {
      images = step.get<std::vector<unsigned>>();
    } catch (const Json::exception&) {
      throw CertificateError("malformed path: permutation is not an integer array");
    }
    if (images.size() != n) throw CertificateError("malformed path: permutation of wrong size");
    try {
      out.emplace_back(std::move(images));
    } catch (const InputError& e) {
      throw CertificateError(std::string("malformed path: ") + e.what());
    }
  }
  return out;
}

Json config_to_json(const SearchConfig& c) {
  return {{"max_depth", c.max_depth},
          {"dedupe", c.dedupe},
          {"parallel_workers", c.parallel_workers},
          {"traversal", traversal_name(c.traversal)},
          {"collect_zeros", c.collect_zeros},
          {"mode", mode_name(c.mode)},
          {"probe_barycenters", c.probe_barycenters},
          {"node_budget", c.node_budget}};
}

SearchConfig config_from_json(const Json& j) {
  SearchConfig c;
  c.max_depth = j.at("max_depth").get<unsigned>();
  c.dedupe = j.at("dedupe").get<bool>();
  c.parallel_workers = j.at("parallel_workers").get<unsigned>();
  c.traversal = enum_from(j.at("traversal").get<std::string>(), kTraversals, traversal_name);
  c.collect_zeros = j.at("collect_zeros").get<bool>();
  c.mode = enum_from(j.at("mode").get<std::string>(), kModes, mode_name);
  c.probe_barycenters = j.value("probe_barycenters", false);
  c.node_budget = j.at("node_budget").get<std::uint64_t>();
  return c;
}

Json witness_to_json(const Witness& w) {
  return {{"kind", to_string(w.kind)},
          {"point", rationals_to_json(w.point.coords())},
          {"value", to_fraction_string(w.value)},
          {"path", path_to_json(w.path)}};
}

Witness witness_from_json(const Json& j, unsigned n) {
  try {
    return Witness{SimplexPoint(rationals_from_json(j.at("point"))),
                   parse_rational(j.at("value").get<std::string>()), path_from_json(j.at("path"), n),
                   enum_from(j.at("kind").get<std::string>(), kWitnessKinds, witness_name)};
  } catch (const Json::exception& e) {
    throw CertificateError(std::string("malformed witness: ") + e.what());
  }
}

Json certificate_to_json(const Certificate& c) {
  Json nodes = Json::array();
  for (const auto& node : c.nodes) {
    Json j = {{"path", path_to_json(node.path)},
              {"status", to_string(node.status)},
              {"scale", to_fraction_string(node.scale)}};
    if (node.status == NodeStatus::NegativeAxis) j["axis"] = node.axis + 1;
    if (node.status == NodeStatus::Nonneg) j["zero_axes"] = axes_to_json(node.zero_axes);
    if (node.status == NodeStatus::Duplicate) j["ref"] = path_to_json(node.ref);
    nodes.push_back(std::move(j));
  }
  Json zeros = Json::array();
  for (const auto& z : c.zeros) zeros.push_back(rationals_to_json(z.coords()));
  Json out = {{"format", "wds-certificate/1"},
              {"digest", c.digest},
              {"n", c.n},
              {"d", c.d},
              {"config", config_to_json(c.config)},
              {"verdict", to_string(c.claim)},
              {"definitely_not_pd", c.definitely_not_pd},
              {"budget_exhausted", c.budget_exhausted},
              {"nodes_visited", c.nodes_visited},
              {"max_depth_reached", c.max_depth_reached},
              {"nodes", std::move(nodes)},
              {"zeros", std::move(zeros)}};
  out["witness"] = c.witness ? witness_to_json(*c.witness) : Json(nullptr);
  return out;
}

Certificate certificate_from_json(const Json& j) {
  try {
    if (j.value("format", "") != "wds-certificate/1") throw CertificateError("not a WDS certificate");
    Certificate c;
    c.digest = j.at("digest").get<std::string>();
    c.n = j.at("n").get<unsigned>();
    c.d = j.at("d").get<unsigned>();
    if (c.n == 0) throw CertificateError("certificate with n = 0");
    c.config = config_from_json(j.at("config"));
    c.claim = enum_from(j.at("verdict").get<std::string>(), kVerdicts, verdict_name);
    c.definitely_not_pd = j.at("definitely_not_pd").get<bool>();
    c.budget_exhausted = j.at("budget_exhausted").get<bool>();
    c.nodes_visited = j.value("nodes_visited", std::uint64_t{0});
    c.max_depth_reached = j.value("max_depth_reached", 0u);
    for (const auto& jn : j.at("nodes")) {
      CertificateNode node;
      node.path = path_from_json(jn.at("path"), c.n);
      node.status = enum_from(jn.at("status").get<std::string>(), kStatuses, node_status_name);
      node.scale = parse_rational(jn.at("scale").get<std::string>());
      if (node.status == NodeStatus::NegativeAxis) {
        unsigned axis = jn.at("axis").get<unsigned>();
        if (axis == 0 || axis > c.n) throw CertificateError("axis index out of range");
        node.axis = axis - 1;
      }
      if (node.status == NodeStatus::Nonneg) node.zero_axes = axes_from_json(jn.at("zero_axes"), c.n);
      if (node.status == NodeStatus::Duplicate) node.ref = path_from_json(jn.at("ref"), c.n);
      c.nodes.push_back(std::move(node));
    }
    for (const auto& z : j.at("zeros")) c.zeros.emplace_back(rationals_from_json(z));
    if (j.contains("witness") && !j.at("witness").is_null())
      c.witness = witness_from_json(j.at("witness"), c.n);
    return c;
  } catch (const Json::exception& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  } catch (const CertificateError&) {
    throw;
  } catch (const InputError& e) {
    throw CertificateError(std::string("malformed certificate: ") + e.what());
  }
}

namespace {

Json factored_to_json(const FactoredInteger& x) {
  Json out = Json::array();
  for (const auto& fp : x) out.push_back({fp.base.get_str(), fp.exponent.get_str()});
  return out;
}

Json reciprocal_to_json(const ReciprocalBound& r) {
  return {{"exact", r.exact ? Json(to_fraction_string(*r.exact)) : Json(nullptr)},
          {"denominator_factored", factored_to_json(r.denominator)},
          {"denominator_digits", r.digits.get_str()},
          {"approx", r.approx}};
}

Json steps_to_json(const StepBound& s) {
  return {{"steps", s.steps.get_str()},
          {"certified", s.certified},
          {"method", s.method},
          {"factored", factored_to_json(s.log_argument)}};
}

}  // namespace

Json bound_report_to_json(const BoundReport& r) {
  return {{"M", r.M.get_str()},
          {"n", std::to_string(r.n)},
          {"d", std::to_string(r.d)},
          {"c1", reciprocal_to_json(r.c1)},
          {"jp_bound", reciprocal_to_json(r.jp_bound)},
          {"cp", steps_to_json(r.cp)},
          {"cnps", steps_to_json(r.cnps)},
          {"bracket", r.bracket}};
}

// ---------------------------------------------------------------- verification

namespace {

struct NodeClass {
  DenseSign sign;
  std::optional<unsigned> negative_axis;
  std::vector<unsigned> zero_axes;
  bool center_negative;
};

NodeClass classify_node(const DenseForm& g) {
  NodeClass c{g.sign(), std::nullopt, {}, false};
  for (unsigned i = 0; i < g.variables(); ++i) {
    if (!c.negative_axis && g.axis_coefficient(i) < 0) c.negative_axis = i;
    if (g.axis_coefficient(i) == 0) c.zero_axes.push_back(i);
  }
  Integer total = 0;
  for (const auto& x : g.coef) total += x;
  c.center_negative = total < 0;
  return c;
}

bool is_prefix(const Path& a, const Path& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

class Verifier {
public:
  Verifier(const Form& f, const Certificate& cert) : f_(f), cert_(cert) {}

  CertificateCheck run() {
    const unsigned n = f_.variables();
    if (cert_.n != n || cert_.d != f_.degree()) return fail("dimension or degree mismatch");
    for (std::size_t i = 0; i < cert_.nodes.size(); ++i) {
      const auto& node = cert_.nodes[i];
      if (!index_.emplace(node.path, i).second) return fail("duplicate node path");
    }
    auto root = index_.find(Path{});
    if (root == index_.end()) return fail("missing root node");

    perms_ = all_permutations(n);
    for (const auto& node : cert_.nodes) {
      if (node.path.empty()) continue;
      Path parent(node.path.begin(), node.path.end() - 1);
      auto it = index_.find(parent);
      if (it == index_.end() || cert_.nodes[it->second].status != NodeStatus::Expanded)
        return fail("node without an expanded parent");
    }
    for (const auto& node : cert_.nodes) {
      if (node.status != NodeStatus::Expanded) continue;
      Path child = node.path;
      child.push_back(perms_.front());
      for (const auto& theta : perms_) {
        child.back() = theta;
        if (!index_.contains(child)) return fail("expanded node without a complete cover");
      }
    }

    DenseForm g = DenseForm::from_form(f_);
    Integer content = g.make_primitive();
    if (auto r = check_subtree(Path{}, g, Rational(1) / Rational(content)); !r.empty()) return fail(r);
    if (auto r = check_acyclic(); !r.empty()) return fail(r);
    return check_claim();
  }

private:
  CertificateCheck fail(std::string why) { return {false, std::move(why)}; }

  bool would_expand(const NodeClass& c, std::size_t depth) const {
    const SearchConfig& cfg = cert_.config;
    if (depth >= cfg.max_depth) return false;
    return expandable(c);
  }

  bool expandable(const NodeClass& c) const {
    const SearchConfig& cfg = cert_.config;
    if (c.negative_axis) return false;
    if (c.sign == DenseSign::Mixed) return !(cfg.probe_barycenters && c.center_negative);
    if (c.sign == DenseSign::Nonneg) return cfg.mode != SearchMode::Psd && c.zero_axes.empty();
    return false;
  }

  DenseForm form_at(const Path& path) {
    DenseForm g = DenseForm::from_form(f_);
    g.make_primitive();
    for (const auto& theta : path) g = wds_step(g, theta).form;
    return g;
  }

  // Depth-first replay; returns an empty string when the subtree checks out.
  std::string check_subtree(const Path& path, const DenseForm& g, const Rational& scale) {
    const CertificateNode& node = cert_.nodes[index_.at(path)];
    const std::size_t depth = path.size();
    const SearchConfig& cfg = cert_.config;
    if (node.scale != scale) return "scale mismatch";
    if (node.status == NodeStatus::Unvisited) {
      if (cert_.claim != VerdictKind::NotPsd && !cert_.budget_exhausted)
        return "unvisited node in a finished search";
      ++open_;
      return {};
    }
    NodeClass c = classify_node(g);
    switch (node.status) {
      case NodeStatus::PosComplete:
        if (c.sign != DenseSign::PosComplete) return "PosComplete status not reproduced";
        break;
      case NodeStatus::NegativeAxis:
        if (c.sign == DenseSign::PosComplete || c.negative_axis != node.axis)
          return "NegativeAxis status not reproduced";
        break;
      case NodeStatus::NegativeCenter:
        if (!cfg.probe_barycenters || c.negative_axis || c.sign != DenseSign::Mixed || !c.center_negative)
          return "NegativeCenter status not reproduced";
        break;
      case NodeStatus::Nonneg:
        if (c.sign != DenseSign::Nonneg || c.zero_axes != node.zero_axes)
          return "Nonneg status not reproduced";
        if (cfg.mode != SearchMode::Psd && c.zero_axes.empty() &&
            !(cfg.mode == SearchMode::Auto && depth >= cfg.max_depth))
          return "zero-free Nonneg leaf above the depth cap";
        break;
      case NodeStatus::Frontier:
        if (depth < cfg.max_depth || !expandable(c)) return "Frontier status not reproduced";
        if (c.sign == DenseSign::Nonneg && cfg.mode != SearchMode::Pd)
          return "Frontier status not reproduced";
        break;
      case NodeStatus::Duplicate: {
        if (!cfg.dedupe || !would_expand(c, depth)) return "Duplicate status not reproduced";
        auto it = index_.find(node.ref);
        if (it == index_.end() || cert_.nodes[it->second].status != NodeStatus::Expanded)
          return "Duplicate refers to a node that was not expanded";
        if (is_prefix(node.ref, path)) return "Duplicate refers to an ancestor";
        if (!(form_at(node.ref) == g)) return "Duplicate form differs from its target";
        break;
      }
      case NodeStatus::Expanded: {
        if (!would_expand(c, depth)) return "Expanded status not reproduced";
        Path child = path;
        child.push_back(perms_.front());
        for (const auto& theta : perms_) {
          child.back() = theta;
          DenseStep step = wds_step(g, theta);
          if (auto r = check_subtree(child, step.form, scale * step.scale); !r.empty()) return r;
        }
        break;
      }
      case NodeStatus::Unvisited: break;
    }
    if (node.status != NodeStatus::Expanded) count_leaf(node);
    return {};
  }

  void count_leaf(const CertificateNode& node) {
    switch (node.status) {
      case NodeStatus::Frontier:
      case NodeStatus::Unvisited: ++open_; break;
      case NodeStatus::NegativeAxis:
      case NodeStatus::NegativeCenter: ++negative_; break;
      case NodeStatus::Nonneg:
        ++nonneg_;
        if (!node.zero_axes.empty()) zero_leaf_ = true;
        break;
      default: break;
    }
  }

  // Expanded nodes depend on their children and duplicates on their target;
  // a cycle would make the cover argument circular.
  std::string check_acyclic() {
    const std::size_t k = cert_.nodes.size();
    std::vector<std::vector<std::size_t>> deps(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& node = cert_.nodes[i];
      if (node.status == NodeStatus::Duplicate) deps[i].push_back(index_.at(node.ref));
      if (!node.path.empty()) {
        Path parent(node.path.begin(), node.path.end() - 1);
        deps[index_.at(parent)].push_back(i);
      }
    }
    std::vector<int> color(k, 0);
    for (std::size_t s = 0; s < k; ++s) {
      if (color[s]) continue;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
      color[s] = 1;
      while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < deps[v].size()) {
          std::size_t w = deps[v][next++];
          if (color[w] == 1) return "cyclic Duplicate references";
          if (color[w] == 0) {
            color[w] = 1;
            stack.push_back({w, 0});
          }
        } else {
          color[v] = 2;
          stack.pop_back();
        }
      }
    }
    return {};
  }

  CertificateCheck check_claim() {
    for (const auto& z : cert_.zeros)
      if (z.size() != f_.variables() || evaluate(f_, z) != 0) return fail("recorded zero is not a zero");
    switch (cert_.claim) {
      case VerdictKind::NotPsd: {
        if (!cert_.witness) return fail("NotPSD claim without a witness");
        const Witness& w = *cert_.witness;
        if (!verify_witness(f_, w) || w.kind == WitnessKind::Zero) return fail("witness does not verify");
        auto it = index_.find(w.path);
        if (it == index_.end()) return fail("witness path not in the tree");
        const CertificateNode& node = cert_.nodes[it->second];
        ComposedSubstitution cell = ComposedSubstitution::from_path(f_.variables(), w.path);
        if (w.kind == WitnessKind::NegativeVertex) {
          if (node.status != NodeStatus::NegativeAxis || cell.matrix.column(node.axis) != w.point.coords())
            return fail("witness is not the negative cell vertex");
        } else {
          const unsigned n = f_.variables();
          std::vector<Rational> center(n, Rational(1, n));
          for (auto& v : center) v.canonicalize();
          if (node.status != NodeStatus::NegativeCenter || cell.matrix.apply(center) != w.point.coords())
            return fail("witness is not the negative cell barycenter");
        }
        return {true, {}};
      }
      case VerdictKind::Undetermined:
        if (negative_ > 0) return fail("negative leaf in an undetermined certificate");
        if (open_ == 0) return fail("undetermined claim with a closed cover");
        return {true, {}};
      case VerdictKind::PositiveDefinite:
        if (negative_ > 0 || open_ > 0 || nonneg_ > 0) return fail("leaves do not entail positive definiteness");
        if (cert_.definitely_not_pd || !cert_.zeros.empty()) return fail("zeros in a positive definite claim");
        return {true, {}};
      case VerdictKind::PositiveSemidefinite:
        if (negative_ > 0 || open_ > 0) return fail("leaves do not entail positive semidefiniteness");
        if (nonneg_ == 0) return fail("semidefinite claim with only positive complete leaves");
        if (cert_.definitely_not_pd != zero_leaf_) return fail("definitely_not_pd disagrees with the leaves");
        if (zero_leaf_ && cert_.zeros.empty()) return fail("zero leaf without a recorded zero");
        return {true, {}};
    }
    return fail("unknown claim");
  }

  const Form& f_;
  const Certificate& cert_;
  std::map<Path, std::size_t> index_;
  std::vector<Permutation> perms_;
  std::size_t open_ = 0, negative_ = 0, nonneg_ = 0;
  bool zero_leaf_ = false;
};

}  // namespace

CertificateCheck verify_certificate(const Form& f, const Certificate& cert) {
  if (form_digest(f) != cert.digest) throw CertificateError("certificate digest does not match the form");
  auto check_path = [&](const Path& p) {
    for (const auto& theta : p)
      if (theta.size() != f.variables()) throw CertificateError("malformed path");
  };
  for (const auto& node : cert.nodes) {
    check_path(node.path);
    check_path(node.ref);
  }
  if (cert.witness) check_path(cert.witness->path);
  return Verifier(f, cert).run();
}

}  // namespace wds
