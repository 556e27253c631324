// Acceptance run: prints one PASS/FAIL line per criterion. With an argument
// k only criterion k runs. Exit status is nonzero when any selected criterion
// fails. All comparisons are exact; the only tolerances are wall-clock limits.

#include "support.hpp"
#include "wds/bounds.hpp"
#include "wds/json_io.hpp"
#include "wds/oracle.hpp"
#include "wds/search.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace wds;
using namespace wds::testing;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

Rational q(const Integer& p, const Integer& r = 1) {
  Rational x(p, r);
  x.canonicalize();
  return x;
}

Rational contraction(unsigned n, unsigned m) { return pow(q(n - 1, n), m); }

// ---------------------------------------------------------------- 1

Outcome bound_formulas() {
  std::ostringstream why;
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      why << what << " wrong; ";
    }
  };
  expect(cp_steps(1, 2, 2) == 36, "cp_steps(1,2,2)");
  expect(cnps_steps(1, 2, 2) == 37, "cnps_steps(1,2,2)");
  expect(c1_lower_bound(1, 2, 2) == q(1, pow(Integer(2), 22)), "c1_lower_bound(1,2,2)");
  expect(jp_simplex_bound(1, 2, 2) == q(1, pow(Integer(2), 32)), "jp_simplex_bound(1,2,2)");

  // Independent check of the two step counts: the product written out and
  // the floor found by stepping through powers of 2.
  Integer xp = pow(Integer(2), 4) * pow(Integer(2), 10) * pow(Integer(2), 14) * pow(Integer(3), 4);
  auto steps = [](const Integer& x) -> Integer {
    Integer m = 0, p = 2;
    while (p <= x) p *= 2, ++m;
    return m + 2;
  };
  expect(steps(xp) == 36 && steps(2 * xp) == 37, "independent step count");

  Rng rng(101);
  int agree = 0, boundary = 0;
  for (int i = 0; i < 50; ++i) {
    Integer M = uniform(rng, 1, 10);
    unsigned long n = static_cast<unsigned long>(uniform(rng, 2, 4));
    unsigned long d = static_cast<unsigned long>(uniform(rng, 1, 4));
    bool same = true;
    for (const FactoredInteger& x : {cp_argument(M, n, d), cnps_argument(M, n, d)}) {
      LogFloor adaptive = floor_log_ratio(x, n);
      Integer exact = floor_log_ratio_exact(Rational(materialize(x)), n);
      same = same && adaptive.certified && adaptive.value == exact;
      boundary += adaptive.method == "exact";
    }
    agree += same;
  }
  expect(agree == 50, "adaptive vs exact log");
  why << "fixed values " << (ok ? "exact" : "mismatch") << ", adaptive==exact on " << agree
      << "/50 (" << boundary << " arguments on a power of the ratio settled by the exact fallback)";
  return {ok, why.str()};
}

// ---------------------------------------------------------------- 2, 3

struct Product {
  unsigned n;
  unsigned depth;
  Matrix matrix;
};

std::vector<Product> product_corpus() {
  Rng rng(202);
  std::vector<Product> out;
  for (int i = 0; i < 1000; ++i) {
    unsigned n = static_cast<unsigned>(uniform(rng, 1, 5));
    unsigned depth = static_cast<unsigned>(uniform(rng, 0, 8));
    Path path = random_path(rng, n, depth);
    auto c = ComposedSubstitution::from_path(n, path);
    Matrix m(n);
    for (unsigned r = 0; r < n; ++r)
      for (unsigned k = 0; k < n; ++k) m[r].push_back(c.matrix(r, k));
    out.push_back({n, depth, std::move(m)});
  }
  return out;
}

Outcome closure() {
  Rng rng(203);
  int good = 0;
  auto corpus = product_corpus();
  for (const auto& p : corpus) {
    bool ok = true;
    for (unsigned j = 0; j < p.n; ++j) {
      Rational sum = 0;
      for (unsigned i = 0; i < p.n; ++i) {
        ok = ok && p.matrix[i][j] >= 0;
        sum += p.matrix[i][j];
      }
      ok = ok && sum == 1;
    }
    auto y = random_vector(rng, p.n);
    auto x = ref_apply(p.matrix, y);
    Rational sx = 0, sy = 0;
    for (const auto& v : x) sx += v;
    for (const auto& v : y) sy += v;
    good += ok && sx == sy;
  }
  return {good == 1000, std::to_string(good) + "/1000 products nonnegative, normal and sum preserving"};
}

Outcome contraction_bounds() {
  int beta_ok = 0, dist_ok = 0, maxnorm_ok = 0;
  for (const auto& p : product_corpus()) {
    Rational r = contraction(p.n, p.depth);
    bool b = true, dist = true, maxnorm = true;
    for (unsigned i = 0; i < p.n; ++i)
      for (unsigned j = 1; j < p.n; ++j) b = b && abs(p.matrix[i][j] - p.matrix[i][0]) <= r;
    for (unsigned j = 0; j < p.n; ++j)
      for (unsigned k = j + 1; k < p.n; ++k) {
        Rational sq = 0, mx = 0;
        for (unsigned i = 0; i < p.n; ++i) {
          Rational diff = p.matrix[i][j] - p.matrix[i][k];
          sq += diff * diff;
          if (abs(diff) > mx) mx = abs(diff);
        }
        dist = dist && sq <= r * r;
        maxnorm = maxnorm && mx <= r;
      }
    beta_ok += b;
    dist_ok += dist;
    maxnorm_ok += maxnorm;
  }
  std::ostringstream why;
  why << "max|beta| bound " << beta_ok << "/1000, Euclidean column distance bound " << dist_ok
      << "/1000 (max-norm distance bound " << maxnorm_ok << "/1000)";
  return {beta_ok == 1000 && dist_ok == 1000, why.str()};
}

// ---------------------------------------------------------------- 4

Outcome substitution_identity() {
  Rng rng(404);
  int good = 0;
  for (int i = 0; i < 200; ++i) {
    unsigned n = static_cast<unsigned>(uniform(rng, 1, 4));
    unsigned d = static_cast<unsigned>(uniform(rng, 1, 5));
    Form f = random_form(rng, n, d, 9);
    Path path = random_path(rng, n, static_cast<unsigned>(uniform(rng, 0, 3)));
    Substituted s = substitute(f, ComposedSubstitution::from_path(n, path));
    Matrix m = ref_path_matrix(n, path);
    bool ok = true;
    for (int k = 0; k < 5; ++k) {
      auto y = random_vector(rng, n);
      ok = ok && evaluate(s.form, y) == s.scale * ref_evaluate(f, ref_apply(m, y));
    }
    good += ok;
  }
  return {good == 200, std::to_string(good) + "/200 forms satisfy g(y) = s f(My) at 5 points"};
}

// ---------------------------------------------------------------- 5

Outcome positivity_propagation() {
  Rng rng(505);
  int pos = 0, neg = 0;
  for (int i = 0; i < 500; ++i) {
    unsigned n = static_cast<unsigned>(uniform(rng, 1, 4));
    unsigned d = static_cast<unsigned>(uniform(rng, 1, 5));
    Form f = random_positive_complete(rng, n, d, 9);
    bool p = true, q2 = true;
    for (const auto& c : wds_children(f))
      p = p && sign_summary(c.form).category == SignCategory::AllPositiveComplete;
    for (const auto& c : wds_children(negate(f)))
      q2 = q2 && sign_summary(c.form).category == SignCategory::AllNegativeComplete;
    pos += p;
    neg += q2;
  }
  return {pos == 500 && neg == 500, "positive " + std::to_string(pos) + "/500, negative " +
                                        std::to_string(neg) + "/500"};
}

// ---------------------------------------------------------------- 6, 7

struct Run {
  Form form;
  SearchConfig config;
  Verdict verdict;
};

SearchConfig soundness_config() {
  SearchConfig c;
  c.max_depth = 8;
  c.mode = SearchMode::Auto;
  return c;
}

std::vector<Form> soundness_corpus() {
  Rng rng(606);
  std::vector<Form> out;
  for (int i = 0; i < 300; ++i) {
    unsigned n = static_cast<unsigned>(uniform(rng, 2, 3));
    unsigned d = static_cast<unsigned>(uniform(rng, 1, 4));
    out.push_back(random_form(rng, n, d, 9));
  }
  return out;
}

std::vector<Run>& soundness_runs() {
  static std::vector<Run> runs = [] {
    std::vector<Run> r;
    for (const auto& f : soundness_corpus()) r.push_back({f, soundness_config(), classify(f, soundness_config())});
    return r;
  }();
  return runs;
}

Outcome decision_soundness() {
  int counts[4] = {0, 0, 0, 0}, bad = 0;
  std::ostringstream why;
  for (const auto& r : soundness_runs()) {
    VerdictKind k = kind_of(r.verdict);
    ++counts[static_cast<int>(k)];
    bool ok = true;
    if (k == VerdictKind::PositiveDefinite) ok = grid_min(r.form, 60).value > 0;
    if (k == VerdictKind::PositiveSemidefinite) ok = grid_min(r.form, 60).value >= 0;
    if (k == VerdictKind::NotPsd) {
      bool negative = false;
      for (unsigned N = 1; N <= 60 && !negative; ++N) negative = grid_min(r.form, N).value < 0;
      ok = verify_witness(r.form, std::get<NotPsd>(r.verdict).witness) && negative;
    }
    if (!ok) {
      if (bad < 3) why << "disagreement on " << emit(r.form) << "; ";
      ++bad;
    }
  }
  why << "PD " << counts[0] << ", PSD " << counts[1] << ", NotPSD " << counts[2] << ", Undetermined "
      << counts[3] << ", disagreements " << bad;
  return {bad == 0, why.str()};
}

std::vector<Run>& named_runs() {
  static std::vector<Run> runs = [] {
    std::vector<Run> r;
    auto add = [&](const char* text, SearchMode mode, unsigned depth) {
      SearchConfig c;
      c.mode = mode;
      c.max_depth = depth;
      Form f = parse_form(text);
      r.push_back({f, c, classify(f, c)});
    };
    add("x1^3+x2^3+x3^3+3*x1^2*x2+3*x1^2*x3+3*x1*x2^2+3*x2^2*x3+3*x1*x3^2+3*x2*x3^2+6*x1*x2*x3",
        SearchMode::Auto, 8);
    add("x1^2-3*x1*x2+x2^2", SearchMode::Auto, 8);
    add("x1^2-2*x1*x2+x2^2", SearchMode::Auto, 8);
    add("x1^4*x2^2+x1^2*x2^4+x3^6-3*x1^2*x2^2*x3^2", SearchMode::Psd, 6);
    return r;
  }();
  return runs;
}

Outcome named_instances() {
  auto& runs = named_runs();
  std::ostringstream why;
  bool ok = true;

  const Verdict& cube = runs[0].verdict;
  bool c0 = kind_of(cube) == VerdictKind::PositiveDefinite && certificate_of(cube).max_depth_reached == 0;
  why << "cube PD@0 " << (c0 ? "ok" : "no") << "; ";

  const Verdict& neg = runs[1].verdict;
  bool c1 = kind_of(neg) == VerdictKind::NotPsd;
  if (c1) {
    const Witness& w = std::get<NotPsd>(neg).witness;
    c1 = w.value == q(-1, 4) && w.point == SimplexPoint({q(1, 2), q(1, 2)});
  }
  why << "indefinite quadratic witness " << (c1 ? "ok" : "no") << "; ";

  const Verdict& sq = runs[2].verdict;
  bool c2 = kind_of(sq) == VerdictKind::PositiveSemidefinite;
  if (c2) {
    const auto& r = std::get<PositiveSemidefinite>(sq);
    c2 = r.definitely_not_pd &&
         std::find(r.zeros.begin(), r.zeros.end(), SimplexPoint({q(1, 2), q(1, 2)})) != r.zeros.end();
  }
  why << "square PSD with zero " << (c2 ? "ok" : "no") << "; ";

  const Verdict& mot = runs[3].verdict;
  bool c3 = kind_of(mot) == VerdictKind::PositiveSemidefinite;
  why << "Motzkin " << to_string(kind_of(mot)) << " at depth " << certificate_of(mot).max_depth_reached
      << " (" << certificate_of(mot).nodes.size() << " nodes)";
  ok = c0 && c1 && c2 && c3;
  return {ok, why.str()};
}

// ---------------------------------------------------------------- 8

bool rejected(const Form& f, const Certificate& c) {
  try {
    return !verify_certificate(f, c);
  } catch (const CertificateError&) {
    return true;
  }
}

Outcome certificate_integrity() {
  std::vector<const Run*> all;
  for (const auto& r : soundness_runs()) all.push_back(&r);
  for (const auto& r : named_runs()) all.push_back(&r);
  int valid = 0;
  for (const Run* r : all) {
    Certificate back = certificate_from_json(Json::parse(certificate_to_json(certificate_of(r->verdict)).dump()));
    valid += verify_certificate(r->form, back).valid;
  }

  // Mutations, cycling through kinds, applied to certificates with children.
  std::vector<const Run*> pool;
  for (const Run* r : all)
    if (certificate_of(r->verdict).nodes.size() >= 3) pool.push_back(r);
  Rng rng(808);
  int caught = 0, made = 0;
  for (int i = 0; made < 20 && i < 400; ++i) {
    const Run* r = pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(pool.size()) - 1))];
    Certificate c = certificate_of(r->verdict);
    const std::size_t last = c.nodes.size() - 1;
    std::size_t pick = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(last)));
    CertificateNode& node = c.nodes[pick];
    switch (made % 4) {
      case 0: {
        NodeStatus from = node.status;
        if (from == NodeStatus::PosComplete) node.status = NodeStatus::Nonneg;
        else if (from == NodeStatus::Nonneg) node.status = NodeStatus::PosComplete;
        else if (from == NodeStatus::Expanded) node.status = NodeStatus::Frontier;
        else if (from == NodeStatus::NegativeAxis) node.status = NodeStatus::Nonneg;
        else if (from == NodeStatus::Frontier) node.status = NodeStatus::PosComplete;
        else continue;
        break;
      }
      case 1:
        c.nodes.erase(c.nodes.begin() + static_cast<std::ptrdiff_t>(pick));
        break;
      case 2: {
        Permutation other = random_permutation(rng, c.n);
        if (other == node.path.back()) continue;
        node.path.back() = other;
        break;
      }
      case 3:
        node.scale *= uniform(rng, 2, 5);
        break;
    }
    ++made;
    caught += rejected(r->form, c);
  }
  std::ostringstream why;
  why << valid << "/" << all.size() << " certificates verify after a JSON round trip, " << caught << "/"
      << made << " mutations rejected";
  return {valid == static_cast<int>(all.size()) && made == 20 && caught == 20, why.str()};
}

// ---------------------------------------------------------------- 9

Outcome determinism() {
  std::vector<Form> forms;
  auto corpus = soundness_corpus();
  for (std::size_t i = 0; i < corpus.size(); i += 5) forms.push_back(corpus[i]);
  for (const auto& r : named_runs()) forms.push_back(r.form);
  int identical = 0, agree = 0;
  for (const auto& f : forms) {
    SearchConfig c = soundness_config();
    std::string first = certificate_to_json(certificate_of(classify(f, c))).dump();
    bool same = true;
    for (int k = 0; k < 2; ++k) same = same && certificate_to_json(certificate_of(classify(f, c))).dump() == first;
    identical += same;

    SearchConfig p = c;
    p.parallel_workers = 4;
    Verdict vp = classify(f, p);
    bool ok = kind_of(vp) == kind_of(classify(f, c));
    if (ok && kind_of(vp) == VerdictKind::NotPsd) ok = verify_witness(f, std::get<NotPsd>(vp).witness);
    agree += ok;
  }
  int total = static_cast<int>(forms.size());
  std::ostringstream why;
  why << identical << "/" << total << " byte-identical over 3 runs, " << agree << "/" << total
      << " parallel verdicts agree";
  return {identical == total && agree == total, why.str()};
}

// ---------------------------------------------------------------- 10

Outcome lipschitz() {
  Rng rng(1010);
  int good = 0;
  for (int i = 0; i < 200; ++i) {
    unsigned n = static_cast<unsigned>(uniform(rng, 2, 4));
    unsigned d = static_cast<unsigned>(uniform(rng, 1, 4));
    unsigned m = static_cast<unsigned>(uniform(rng, 0, 6));
    Form f = random_form(rng, n, d, 9);
    Matrix cell = ref_path_matrix(n, random_path(rng, n, m));
    auto p = ref_apply(cell, random_simplex_coords(rng, n));
    auto r = ref_apply(cell, random_simplex_coords(rng, n));
    Rational bound = Rational(n * coefficient_bound(f) * pow(Integer(2), d - 1) * pow(Integer(d + 1), n - 1)) *
                     contraction(n, m);
    good += abs(evaluate(f, p) - evaluate(f, r)) <= bound;
  }
  return {good == 200, std::to_string(good) + "/200 triples within the cell Lipschitz bound"};
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"bound formulas exact", 60, bound_formulas},
      {"normal-matrix closure", 60, closure},
      {"contraction", 60, contraction_bounds},
      {"substitution correctness", 120, substitution_identity},
      {"positivity propagation", 120, positivity_propagation},
      {"decision soundness vs grid oracle", 600, decision_soundness},
      {"named instances", 60, named_instances},
      {"certificate integrity", 120, certificate_integrity},
      {"determinism and parallel agreement", 300, determinism},
      {"cell Lipschitz bound", 120, lipschitz},
  };
  std::size_t only = 0;
  if (argc > 1) {
    only = std::strtoul(argv[1], nullptr, 10);
    if (only < 1 || only > criteria.size()) {
      std::cerr << "usage: acceptance [criterion 1.." << criteria.size() << "]\n";
      return 2;
    }
  }
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && i + 1 != only) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o = criteria[i].run();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.pass && secs <= criteria[i].limit_seconds;
    all = all && pass;
    std::printf("criterion %zu [%s]: %s  %s  (%.1fs, limit %.0fs)\n", i + 1, criteria[i].name,
                pass ? "PASS" : "FAIL", o.detail.c_str(), secs, criteria[i].limit_seconds);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
