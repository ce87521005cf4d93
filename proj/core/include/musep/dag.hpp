#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "musep/formula.hpp"

namespace musep {

/// Hash-consed formula table. Structurally identical subterms share one entry,
/// children always have smaller indices than their parents.
class FormulaDag {
 public:
  using Id = std::uint32_t;

  struct Node {
    Kind kind;
    std::string name;
    std::vector<Id> children;
    bool operator==(const Node&) const = default;
  };

  FormulaDag();

  // Interning constructors. conj/disj drop units, absorb zeros, flatten
  // nested nodes of the same kind and remove duplicate children.
  Id top() const { return top_; }
  Id bottom() const { return bottom_; }
  Id prop(const std::string& p);
  Id neg_prop(const std::string& p);
  Id literal(const std::string& p, bool positive) { return positive ? prop(p) : neg_prop(p); }
  Id conj(std::vector<Id> cs);
  Id disj(std::vector<Id> cs);
  Id conj(Id a, Id b) { return conj(std::vector<Id>{a, b}); }
  Id disj(Id a, Id b) { return disj(std::vector<Id>{a, b}); }
  Id diamond(const std::string& a, Id c);
  Id box(const std::string& a, Id c);
  /// k nested diamonds / boxes.
  Id diamonds(const std::string& a, std::uint64_t k, Id c);
  Id boxes(const std::string& a, std::uint64_t k, Id c);
  Id var(const std::string& x);
  Id fixpoint(Kind kind, const std::string& x, Id body);
  /// Raw interning without simplification.
  Id intern(Node n);

  /// Adds f (and its subterms) to the table. Sugar nodes are rejected.
  Id add(const Formula& f);

  static FormulaDag from_formula(const Formula& f);

  const Node& node(Id i) const { return nodes_[i]; }
  std::size_t size() const { return nodes_.size(); }
  Id root() const { return root_; }
  void set_root(Id r) { root_ = r; }

  /// Formula sharing one in-memory node per table entry.
  Formula to_formula() const { return to_formula(root_); }
  Formula to_formula(Id i) const;

  /// Copy containing only the entries reachable from the root, renumbered.
  FormulaDag compacted() const;

  std::size_t reachable_count() const;
  std::uint64_t modal_depth() const;
  /// Node count of the tree expansion; saturates at UINT64_MAX.
  std::uint64_t tree_size() const;
  /// Tree-expansion size as a floating estimate (does not saturate).
  long double tree_size_estimate() const;
  std::vector<std::string> props() const;

  /// `{"nodes":[{"id","kind","children"[,"name"]}],"root"}` over reachable entries.
  std::string to_json() const;
  static FormulaDag from_json(std::string_view text);

  /// Core-grammar text of the tree expansion (may be huge).
  std::string to_text() const { return to_formula().to_string(); }

 private:
  struct NodeHash {
    std::size_t operator()(const Node& n) const;
  };

  std::vector<Node> nodes_;
  std::unordered_map<Node, Id, NodeHash> index_;
  std::unordered_map<const void*, Id> added_;
  Id top_ = 0;
  Id bottom_ = 0;
  Id root_ = 0;
  mutable std::vector<Formula> formula_cache_;
};

}  // namespace musep
