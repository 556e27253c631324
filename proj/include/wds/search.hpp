#pragma once

// Pruned search over the WDS substitution tree. Each node is one cell of the
// iterated barycentric subdivision of the simplex; its form is the input
// restricted to that cell. Nodes whose coefficient signs settle the cell are
// pruned, and the tree of decisions is returned as a replayable certificate.

#include "wds/form.hpp"
#include "wds/substitution.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wds {

enum class Traversal { DepthFirst, BreadthFirst };

/// How all-nonnegative cells are treated.
///  Psd:  every all-nonnegative cell is a leaf.
///  Pd:   zero-free nonnegative cells are refined further looking for
///        all-positive-complete leaves; at the depth cap they stay open.
///  Auto: like Pd, but at the depth cap they are accepted as PSD leaves.
enum class SearchMode { Psd, Pd, Auto };

struct SearchConfig {
  unsigned max_depth = 8;
  bool dedupe = false;
  unsigned parallel_workers = 0;  // 0: sequential and deterministic
  Traversal traversal = Traversal::DepthFirst;
  bool collect_zeros = true;
  SearchMode mode = SearchMode::Psd;
  bool probe_barycenters = false;
  std::uint64_t node_budget = 1'000'000;
};

enum class NodeStatus {
  Expanded,
  PosComplete,
  Nonneg,
  NegativeAxis,
  NegativeCenter,
  Frontier,
  Unvisited,
  Duplicate,
};

std::string_view to_string(NodeStatus s);

using Path = std::vector<Permutation>;

struct CertificateNode {
  Path path;
  NodeStatus status = NodeStatus::Unvisited;
  unsigned axis = 0;                 // NegativeAxis: 0-based variable
  std::vector<unsigned> zero_axes;   // Nonneg: 0-based variables with zero y_i^d coefficient
  Path ref;                          // Duplicate: node with the identical form
  Rational scale;                    // node form = scale * f(matrix * y)
};

enum class VerdictKind { PositiveDefinite, PositiveSemidefinite, NotPsd, Undetermined };
std::string_view to_string(VerdictKind k);

enum class WitnessKind { NegativeVertex, NegativeCenter, Zero };
std::string_view to_string(WitnessKind k);

struct Witness {
  SimplexPoint point;
  Rational value;
  Path path;
  WitnessKind kind;
};

struct Certificate {
  std::string digest;
  unsigned n = 0;
  unsigned d = 0;
  SearchConfig config;
  VerdictKind claim = VerdictKind::Undetermined;
  bool definitely_not_pd = false;
  bool budget_exhausted = false;
  std::uint64_t nodes_visited = 0;
  unsigned max_depth_reached = 0;
  std::vector<CertificateNode> nodes;  // preorder, children in lexicographic order
  std::vector<SimplexPoint> zeros;
  std::optional<Witness> witness;
};

struct PositiveDefinite {
  Certificate certificate;
};
struct PositiveSemidefinite {
  Certificate certificate;
  std::vector<SimplexPoint> zeros;
  bool definitely_not_pd = false;
};
struct NotPsd {
  Witness witness;
  Certificate certificate;
};
struct Undetermined {
  std::size_t frontier_count = 0;
  unsigned max_depth_reached = 0;
  bool budget_exhausted = false;
  Certificate certificate;
};

using Verdict = std::variant<PositiveDefinite, PositiveSemidefinite, NotPsd, Undetermined>;

VerdictKind kind_of(const Verdict& v);
const Certificate& certificate_of(const Verdict& v);

/// Positivity of f on the simplex (equivalently the nonnegative orthant).
Verdict classify(const Form& f, const SearchConfig& cfg = {});

/// Thrown by verify_certificate for certificates that do not belong to the
/// form or cannot be interpreted at all.
class CertificateError : public InputError {
public:
  using InputError::InputError;
};

struct CertificateCheck {
  bool valid = false;
  std::string reason;
  explicit operator bool() const noexcept { return valid; }
};

/// Recomputes every node form along its path and checks recorded statuses,
/// scales, complete covers, the witness/zeros and the claimed verdict.
/// Throws CertificateError on digest mismatch or a malformed path.
CertificateCheck verify_certificate(const Form& f, const Certificate& cert);

bool verify_witness(const Form& f, const Witness& w);

struct ExpandedForm {
  Path path;
  Form form;
  Rational scale;
};

/// The m-th WDS set with paths, in lexicographic path order.
std::vector<ExpandedForm> expand_to_depth(const Form& f, unsigned m,
                                          std::uint64_t node_budget = 1'000'000);

/// SHA-256 (hex) of "n=<n>;d=<d>;" followed by the emitted form.
std::string form_digest(const Form& f);

}  // namespace wds
