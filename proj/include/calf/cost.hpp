#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace calf {

// Element of a cost monoid. The shape mirrors the model that produced it:
// a bare counter for the nat-based models, two sub-elements for a product.
struct CostElem {
  std::uint64_t n = 0;
  std::vector<CostElem> parts; // empty: leaf; size 2: product

  bool is_leaf() const { return parts.empty(); }
  friend bool operator==(const CostElem&, const CostElem&) = default;
};

// A preordered monoid (identity, associative combine, reflexive/transitive
// preorder) together with the literal syntax for its elements. Instances are
// immutable after construction and cheap to copy.
class CostModel {
public:
  static CostModel nat_add();
  static CostModel nat_max();
  static CostModel product(CostModel left, CostModel right);

  // Names accepted on the command line: "nat", "nat-max", "pair:nat,nat"
  // (pair components may be any non-pair name).
  static std::optional<CostModel> by_name(std::string_view name);

  CostElem zero() const;
  CostElem plus(const CostElem& a, const CostElem& b) const;
  bool leq(const CostElem& a, const CostElem& b) const;
  bool valid(const CostElem& e) const;
  bool is_zero(const CostElem& e) const { return e == zero(); }

  std::string show(const CostElem& e) const;
  std::optional<CostElem> parse_elem(std::string_view text) const;

  const std::string& name() const;

private:
  struct Node;
  explicit CostModel(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Shape-directed rendering that needs no model: decimal for leaves, (a,b)
// for products. Agrees with CostModel::show on elements valid for the model.
std::string show_structural(const CostElem& e);

} // namespace calf
