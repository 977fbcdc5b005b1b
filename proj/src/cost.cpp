#include "calf/cost.hpp"

#include <cctype>
#include <stdexcept>

namespace calf {

namespace {

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? UINT64_MAX : r;
}

// Literals written by hand often contain "(1, 2)", so element parsing is
// whitespace tolerant.
void skip_ws(std::string_view& s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
}

} // namespace

// Leaf models combine a single counter; product models pair two factors.
struct CostModel::Node {
  enum class LeafOp { Add, Max };

  bool leaf = true;
  LeafOp op = LeafOp::Add;
  std::shared_ptr<const Node> left, right;
  std::string name;

  CostElem zero() const {
    CostElem e;
    if (leaf) return e;
    e.parts = {left->zero(), right->zero()};
    return e;
  }

  CostElem plus(const CostElem& a, const CostElem& b) const {
    CostElem e;
    if (leaf) {
      e.n = op == LeafOp::Add ? saturating_add(a.n, b.n) : std::max(a.n, b.n);
      return e;
    }
    e.parts = {left->plus(a.parts[0], b.parts[0]), right->plus(a.parts[1], b.parts[1])};
    return e;
  }

  bool leq(const CostElem& a, const CostElem& b) const {
    if (leaf) return a.n <= b.n;
    return left->leq(a.parts[0], b.parts[0]) && right->leq(a.parts[1], b.parts[1]);
  }

  bool valid(const CostElem& e) const {
    if (leaf) return e.is_leaf();
    return e.parts.size() == 2 && e.n == 0 && left->valid(e.parts[0]) && right->valid(e.parts[1]);
  }

  std::string show(const CostElem& e) const {
    if (leaf) return std::to_string(e.n);
    return "(" + left->show(e.parts[0]) + "," + right->show(e.parts[1]) + ")";
  }

  std::optional<CostElem> parse(std::string_view& s) const {
    skip_ws(s);
    if (leaf) {
      if (s.empty() || !std::isdigit(static_cast<unsigned char>(s.front()))) return std::nullopt;
      std::uint64_t v = 0;
      while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.front()))) {
        std::uint64_t d = static_cast<std::uint64_t>(s.front() - '0');
        if (v > (UINT64_MAX - d) / 10) return std::nullopt;
        v = v * 10 + d;
        s.remove_prefix(1);
      }
      CostElem e;
      e.n = v;
      return e;
    }
    if (s.empty() || s.front() != '(') return std::nullopt;
    s.remove_prefix(1);
    auto l = left->parse(s);
    if (!l) return std::nullopt;
    skip_ws(s);
    if (s.empty() || s.front() != ',') return std::nullopt;
    s.remove_prefix(1);
    auto r = right->parse(s);
    if (!r) return std::nullopt;
    skip_ws(s);
    if (s.empty() || s.front() != ')') return std::nullopt;
    s.remove_prefix(1);
    CostElem e;
    e.parts = {std::move(*l), std::move(*r)};
    return e;
  }
};

CostModel CostModel::nat_add() {
  auto n = std::make_shared<Node>();
  n->leaf = true;
  n->op = Node::LeafOp::Add;
  n->name = "nat";
  return CostModel(std::move(n));
}

CostModel CostModel::nat_max() {
  auto n = std::make_shared<Node>();
  n->leaf = true;
  n->op = Node::LeafOp::Max;
  n->name = "nat-max";
  return CostModel(std::move(n));
}

CostModel CostModel::product(CostModel left, CostModel right) {
  auto n = std::make_shared<Node>();
  n->leaf = false;
  n->left = left.node_;
  n->right = right.node_;
  n->name = "pair:" + left.node_->name + "," + right.node_->name;
  return CostModel(std::move(n));
}

std::optional<CostModel> CostModel::by_name(std::string_view name) {
  if (name == "nat") return nat_add();
  if (name == "nat-max") return nat_max();
  constexpr std::string_view prefix = "pair:";
  if (name.substr(0, prefix.size()) == prefix) {
    std::string_view rest = name.substr(prefix.size());
    auto comma = rest.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    auto l = by_name(rest.substr(0, comma));
    auto r = by_name(rest.substr(comma + 1));
    if (!l || !r) return std::nullopt;
    return product(*l, *r);
  }
  return std::nullopt;
}

const std::string& CostModel::name() const { return node_->name; }

CostElem CostModel::zero() const { return node_->zero(); }

CostElem CostModel::plus(const CostElem& a, const CostElem& b) const {
  if (!valid(a) || !valid(b)) throw std::invalid_argument("cost element does not fit model " + name());
  return node_->plus(a, b);
}

bool CostModel::leq(const CostElem& a, const CostElem& b) const {
  if (!valid(a) || !valid(b)) throw std::invalid_argument("cost element does not fit model " + name());
  return node_->leq(a, b);
}

bool CostModel::valid(const CostElem& e) const { return node_->valid(e); }

std::string CostModel::show(const CostElem& e) const {
  if (!valid(e)) throw std::invalid_argument("cost element does not fit model " + name());
  return node_->show(e);
}

std::optional<CostElem> CostModel::parse_elem(std::string_view text) const {
  skip_ws(text);
  auto e = node_->parse(text);
  if (!e) return std::nullopt;
  skip_ws(text);
  if (!text.empty()) return std::nullopt;
  return e;
}

std::string show_structural(const CostElem& e) {
  if (e.is_leaf()) return std::to_string(e.n);
  std::string out = "(";
  for (std::size_t i = 0; i < e.parts.size(); ++i) {
    if (i) out += ",";
    out += show_structural(e.parts[i]);
  }
  out += ")";
  return out;
}

} // namespace calf
