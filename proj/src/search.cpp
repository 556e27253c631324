#include "wds/search.hpp"

#include "wds/dense_form.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace wds {

std::string_view to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Expanded: return "Expanded";
    case NodeStatus::PosComplete: return "PosComplete";
    case NodeStatus::Nonneg: return "Nonneg";
    case NodeStatus::NegativeAxis: return "NegativeAxis";
    case NodeStatus::NegativeCenter: return "NegativeCenter";
    case NodeStatus::Frontier: return "Frontier";
    case NodeStatus::Unvisited: return "Unvisited";
    case NodeStatus::Duplicate: return "Duplicate";
  }
  return "?";
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::PositiveDefinite: return "PositiveDefinite";
    case VerdictKind::PositiveSemidefinite: return "PositiveSemidefinite";
    case VerdictKind::NotPsd: return "NotPSD";
    case VerdictKind::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string_view to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::NegativeVertex: return "NegativeVertex";
    case WitnessKind::NegativeCenter: return "NegativeCenter";
    case WitnessKind::Zero: return "Zero";
  }
  return "?";
}

VerdictKind kind_of(const Verdict& v) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PositiveDefinite>) return VerdictKind::PositiveDefinite;
        else if constexpr (std::is_same_v<T, PositiveSemidefinite>) return VerdictKind::PositiveSemidefinite;
        else if constexpr (std::is_same_v<T, NotPsd>) return VerdictKind::NotPsd;
        else return VerdictKind::Undetermined;
      },
      v);
}

const Certificate& certificate_of(const Verdict& v) {
  return std::visit([](const auto& x) -> const Certificate& { return x.certificate; }, v);
}

namespace {

constexpr std::int32_t kNone = -1;

struct ArenaNode {
  std::int32_t parent = kNone;
  std::uint32_t perm = 0;  // index into the lexicographic permutation list
  unsigned depth = 0;
  NodeStatus status = NodeStatus::Unvisited;
  unsigned axis = 0;
  std::vector<unsigned> zero_axes;
  Rational scale;
  std::vector<std::int32_t> children;
  std::int32_t ref = kNone;
  std::uint32_t pending = 0;
  std::vector<Integer> key;  // kept for expanded nodes when deduplicating
};

struct WorkItem {
  std::int32_t node;
  DenseForm form;
};

// State shared by every worker of one classify() call.
struct Shared {
  Shared(const Form& f, const SearchConfig& c, std::vector<Permutation> p)
      : input(f), cfg(c), perms(std::move(p)) {}

  const Form& input;
  const SearchConfig& cfg;
  std::vector<Permutation> perms;
  std::atomic<bool> stop{false};
  std::atomic<std::uint64_t> visited{0};
  std::atomic<bool> budget_exhausted{false};
  std::mutex mu;
  std::optional<Witness> witness;
  std::set<SimplexPoint> zeros;
  bool any_zero = false;
};

class Engine {
public:
  Engine(Shared& sh, std::vector<std::uint32_t> prefix) : sh_(sh), prefix_(std::move(prefix)) {}

  std::int32_t add_root(unsigned depth, Rational scale, DenseForm form) {
    ArenaNode node;
    node.depth = depth;
    node.scale = std::move(scale);
    arena_.push_back(std::move(node));
    work_.push_back({0, std::move(form)});
    return 0;
  }

  /// Processes work items. Items deeper than `defer_depth` are set aside
  /// unprocessed (used to hand subtrees to parallel workers).
  void run(unsigned defer_depth = ~0u) {
    const bool bfs = sh_.cfg.traversal == Traversal::BreadthFirst || defer_depth != ~0u;
    while (!work_.empty()) {
      if (sh_.stop.load(std::memory_order_relaxed)) return;
      WorkItem item = bfs ? std::move(work_.front()) : std::move(work_.back());
      bfs ? work_.pop_front() : work_.pop_back();
      if (arena_[item.node].depth >= defer_depth) {
        deferred_.push_back(std::move(item));
        continue;
      }
      if (sh_.visited.fetch_add(1) >= sh_.cfg.node_budget) {
        sh_.budget_exhausted = true;
        sh_.stop = true;
        return;
      }
      process(std::move(item));
    }
  }

  std::vector<ArenaNode>& arena() { return arena_; }
  std::vector<WorkItem>& deferred() { return deferred_; }
  unsigned max_depth_reached() const { return max_depth_reached_; }

  std::vector<std::uint32_t> path_of(std::int32_t id) const {
    std::vector<std::uint32_t> rev;
    for (std::int32_t at = id; at != kNone && arena_[at].parent != kNone; at = arena_[at].parent)
      rev.push_back(arena_[at].perm);
    std::vector<std::uint32_t> out = prefix_;
    out.insert(out.end(), rev.rbegin(), rev.rend());
    return out;
  }

private:
  void process(WorkItem item) {
    const std::int32_t id = item.node;
    ArenaNode& node = arena_[id];
    max_depth_reached_ = std::max(max_depth_reached_, node.depth);
    const DenseForm& g = item.form;
    const unsigned n = g.variables();
    const SearchConfig& cfg = sh_.cfg;

    DenseSign sign = g.sign();
    if (sign == DenseSign::PosComplete) {
      node.status = NodeStatus::PosComplete;
      complete(id);
      return;
    }
    for (unsigned i = 0; i < n; ++i) {
      if (g.axis_coefficient(i) < 0) {
        node.status = NodeStatus::NegativeAxis;
        node.axis = i;
        report_negative(id, i, WitnessKind::NegativeVertex);
        return;
      }
    }
    bool expand = false;
    if (sign == DenseSign::Nonneg) {
      for (unsigned i = 0; i < n; ++i)
        if (g.axis_coefficient(i) == 0) node.zero_axes.push_back(i);
      if (!node.zero_axes.empty() || cfg.mode == SearchMode::Psd) {
        node.status = NodeStatus::Nonneg;
        record_zeros(id);
        complete(id);
        return;
      }
      if (node.depth >= cfg.max_depth) {
        node.status = cfg.mode == SearchMode::Auto ? NodeStatus::Nonneg : NodeStatus::Frontier;
        complete(id);
        return;
      }
      expand = true;
    } else {
      if (cfg.probe_barycenters) {
        Integer total = 0;
        for (const auto& c : g.coef) total += c;
        if (total < 0) {
          node.status = NodeStatus::NegativeCenter;
          report_negative(id, 0, WitnessKind::NegativeCenter);
          return;
        }
      }
      if (node.depth >= cfg.max_depth) {
        node.status = NodeStatus::Frontier;
        complete(id);
        return;
      }
      expand = true;
    }
    if (expand) {
      if (cfg.dedupe) {
        auto hit = memo_.find(g.coef);
        if (hit != memo_.end()) {
          node.status = NodeStatus::Duplicate;
          node.ref = hit->second;
          complete(id);
          return;
        }
        node.key = g.coef;
      }
      node.status = NodeStatus::Expanded;
      const std::size_t k = sh_.perms.size();
      std::vector<WorkItem> kids;
      kids.reserve(k);
      for (std::uint32_t p = 0; p < k; ++p) {
        DenseStep step = wds_step(g, sh_.perms[p]);
        ArenaNode child;
        child.parent = id;
        child.perm = p;
        child.depth = arena_[id].depth + 1;
        child.scale = arena_[id].scale * step.scale;
        auto cid = static_cast<std::int32_t>(arena_.size());
        arena_.push_back(std::move(child));
        arena_[id].children.push_back(cid);
        kids.push_back({cid, std::move(step.form)});
      }
      arena_[id].pending = static_cast<std::uint32_t>(k);
      const bool bfs = cfg.traversal == Traversal::BreadthFirst;
      if (bfs || deferring_)
        for (auto& w : kids) work_.push_back(std::move(w));
      else
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) work_.push_back(std::move(*it));
    }
  }

  // Marks a node finished and releases ancestors whose children are all done.
  void complete(std::int32_t id) {
    while (id != kNone) {
      ArenaNode& node = arena_[id];
      if (node.status == NodeStatus::Expanded && sh_.cfg.dedupe)
        memo_.emplace(std::move(node.key), id);
      std::int32_t parent = node.parent;
      if (parent == kNone || --arena_[parent].pending != 0) return;
      id = parent;
    }
  }

  ComposedSubstitution cell(std::int32_t id) const {
    Path path;
    for (auto p : path_of(id)) path.push_back(sh_.perms[p]);
    return ComposedSubstitution::from_path(sh_.input.variables(), path);
  }

  void report_negative(std::int32_t id, unsigned axis, WitnessKind kind) {
    ComposedSubstitution c = cell(id);
    std::vector<Rational> pt;
    if (kind == WitnessKind::NegativeCenter) {
      const unsigned n = c.matrix.size();
      std::vector<Rational> center(n, Rational(1, n));
      for (auto& v : center) v.canonicalize();
      pt = c.matrix.apply(center);
    } else {
      pt = c.matrix.column(axis);
    }
    SimplexPoint point(std::move(pt));
    Rational value = evaluate(sh_.input, point);
    std::lock_guard lock(sh_.mu);
    if (!sh_.witness) sh_.witness = Witness{std::move(point), std::move(value), c.path, kind};
    sh_.stop = true;
  }

  void record_zeros(std::int32_t id) {
    const ArenaNode& node = arena_[id];
    if (node.zero_axes.empty()) return;
    {
      std::lock_guard lock(sh_.mu);
      if (sh_.any_zero && !sh_.cfg.collect_zeros) return;
    }
    ComposedSubstitution c = cell(id);
    std::lock_guard lock(sh_.mu);
    sh_.any_zero = true;
    for (unsigned i : node.zero_axes) {
      sh_.zeros.insert(SimplexPoint(c.matrix.column(i)));
      if (!sh_.cfg.collect_zeros) break;
    }
  }

public:
  bool deferring_ = false;

private:
  Shared& sh_;
  std::vector<std::uint32_t> prefix_;
  std::vector<ArenaNode> arena_;
  std::deque<WorkItem> work_;
  std::vector<WorkItem> deferred_;
  std::map<std::vector<Integer>, std::int32_t> memo_;
  unsigned max_depth_reached_ = 0;
};

// Copies a finished subtree arena into `main`, replacing the placeholder node.
void graft(std::vector<ArenaNode>& main, std::int32_t at, std::vector<ArenaNode>& sub) {
  const auto offset = static_cast<std::int32_t>(main.size()) - 1;
  auto remap = [&](std::int32_t id) { return id == 0 ? at : id + offset; };
  for (std::size_t i = 0; i < sub.size(); ++i) {
    ArenaNode& s = sub[i];
    for (auto& c : s.children) c = remap(c);
    if (s.ref != kNone) s.ref = remap(s.ref);
    if (i == 0) {
      ArenaNode& dst = main[at];
      dst.status = s.status;
      dst.axis = s.axis;
      dst.zero_axes = std::move(s.zero_axes);
      dst.children = std::move(s.children);
      dst.ref = s.ref;
    } else {
      s.parent = remap(s.parent);
      main.push_back(std::move(s));
    }
  }
}

Certificate build_certificate(const Form& f, const SearchConfig& cfg, Shared& sh,
                              const std::vector<ArenaNode>& arena) {
  Certificate cert;
  cert.digest = form_digest(f);
  cert.n = f.variables();
  cert.d = f.degree();
  cert.config = cfg;
  cert.budget_exhausted = sh.budget_exhausted;
  cert.nodes_visited = std::min<std::uint64_t>(sh.visited.load(), cfg.node_budget);

  // Preorder walk, children pushed in reverse so they come out lexicographic.
  std::vector<Path> paths(arena.size());
  std::vector<std::int32_t> order;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    std::int32_t id = stack.back();
    stack.pop_back();
    order.push_back(id);
    const ArenaNode& a = arena[id];
    if (a.parent != kNone) {
      paths[id] = paths[a.parent];
      paths[id].push_back(sh.perms[a.perm]);
    }
    for (auto it = a.children.rbegin(); it != a.children.rend(); ++it) stack.push_back(*it);
  }
  // Duplicate targets can sit anywhere in the tree, so refs need every path.
  for (std::int32_t id : order) {
    const ArenaNode& a = arena[id];
    CertificateNode node;
    node.path = paths[id];
    node.status = a.status;
    node.axis = a.axis;
    node.zero_axes = a.zero_axes;
    node.scale = a.scale;
    if (a.status == NodeStatus::Duplicate) node.ref = paths[a.ref];
    cert.nodes.push_back(std::move(node));
  }
  cert.zeros.assign(sh.zeros.begin(), sh.zeros.end());
  cert.witness = sh.witness;
  return cert;
}

}  // namespace

Verdict classify(const Form& f, const SearchConfig& cfg) {
  Shared sh(f, cfg, all_permutations(f.variables()));
  DenseForm root = DenseForm::from_form(f);
  Integer content = root.make_primitive();

  Engine main(sh, {});
  main.add_root(0, Rational(1) / Rational(content), std::move(root));
  unsigned max_depth_reached = 0;

  if (cfg.parallel_workers > 0 && cfg.max_depth > 0 && sh.perms.size() > 1) {
    // Expand breadth-first until there are enough open subtrees to share out.
    unsigned split = 1;
    std::size_t open = sh.perms.size();
    while (open < 4 * std::size_t(cfg.parallel_workers) && split < cfg.max_depth) {
      open *= sh.perms.size();
      ++split;
    }
    main.deferring_ = true;
    main.run(split);
    max_depth_reached = main.max_depth_reached();
    auto& tasks = main.deferred();
    std::vector<std::unique_ptr<Engine>> engines;
    for (auto& t : tasks) {
      auto e = std::make_unique<Engine>(sh, main.path_of(t.node));
      const ArenaNode& a = main.arena()[t.node];
      e->add_root(a.depth, a.scale, std::move(t.form));
      engines.push_back(std::move(e));
    }
    std::atomic<std::size_t> next{0};
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < cfg.parallel_workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < engines.size();) engines[i]->run();
        });
    }
    for (std::size_t i = 0; i < engines.size(); ++i) {
      graft(main.arena(), tasks[i].node, engines[i]->arena());
      max_depth_reached = std::max(max_depth_reached, engines[i]->max_depth_reached());
    }
  } else {
    main.run();
    max_depth_reached = main.max_depth_reached();
  }

  const auto& arena = main.arena();
  Certificate cert = build_certificate(f, cfg, sh, arena);
  cert.max_depth_reached = max_depth_reached;

  if (sh.witness) {
    cert.claim = VerdictKind::NotPsd;
    return NotPsd{*sh.witness, std::move(cert)};
  }
  std::size_t frontier = 0;
  bool any_nonneg = false;
  for (const auto& a : arena) {
    if (a.status == NodeStatus::Frontier || a.status == NodeStatus::Unvisited) ++frontier;
    if (a.status == NodeStatus::Nonneg) any_nonneg = true;
  }
  if (frontier > 0) {
    cert.claim = VerdictKind::Undetermined;
    bool budget = cert.budget_exhausted;
    return Undetermined{frontier, max_depth_reached, budget, std::move(cert)};
  }
  if (!any_nonneg) {
    cert.claim = VerdictKind::PositiveDefinite;
    return PositiveDefinite{std::move(cert)};
  }
  cert.claim = VerdictKind::PositiveSemidefinite;
  cert.definitely_not_pd = sh.any_zero;
  std::vector<SimplexPoint> zeros = cert.zeros;
  bool not_pd = sh.any_zero;
  return PositiveSemidefinite{std::move(cert), std::move(zeros), not_pd};
}

bool verify_witness(const Form& f, const Witness& w) {
  if (w.point.size() != f.variables()) return false;
  Rational v = evaluate(f, w.point);
  if (v != w.value) return false;
  switch (w.kind) {
    case WitnessKind::NegativeVertex:
    case WitnessKind::NegativeCenter: return v < 0;
    case WitnessKind::Zero: return v == 0;
  }
  return false;
}

std::vector<ExpandedForm> expand_to_depth(const Form& f, unsigned m, std::uint64_t node_budget) {
  const auto perms = all_permutations(f.variables());
  Integer total = pow(Integer(static_cast<unsigned long>(perms.size())), m);
  if (total > node_budget)
    throw BudgetExceeded("the depth-" + std::to_string(m) + " WDS set has " + total.get_str() +
                             " forms (budget " + std::to_string(node_budget) + ")",
                         total);
  std::vector<ExpandedForm> out;
  DenseForm root = DenseForm::from_form(f);
  Path path;
  auto rec = [&](auto&& self, const DenseForm& g, const Rational& scale) -> void {
    if (path.size() == m) {
      out.push_back({path, g.to_form(), scale});
      return;
    }
    for (const auto& theta : perms) {
      DenseStep step = wds_step(g, theta);
      path.push_back(theta);
      self(self, step.form, scale * step.scale);
      path.pop_back();
    }
  };
  if (m == 0) {
    out.push_back({{}, f, Rational(1)});
    return out;
  }
  rec(rec, root, Rational(1));
  return out;
}

}  // namespace wds
