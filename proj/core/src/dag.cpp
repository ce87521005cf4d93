#include "musep/dag.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "json.hpp"

namespace musep {

std::size_t FormulaDag::NodeHash::operator()(const Node& n) const {
  std::size_t h = std::hash<std::string>{}(n.name) ^ (static_cast<std::size_t>(n.kind) * 0x9e3779b97f4a7c15ULL);
  for (auto c : n.children) h = h * 1000003u ^ c;
  return h;
}

FormulaDag::FormulaDag() {
  top_ = intern({Kind::True, "", {}});
  bottom_ = intern({Kind::False, "", {}});
  root_ = top_;
}

FormulaDag::Id FormulaDag::intern(Node n) {
  auto it = index_.find(n);
  if (it != index_.end()) return it->second;
  Id id = static_cast<Id>(nodes_.size());
  nodes_.push_back(n);
  index_.emplace(std::move(n), id);
  return id;
}

FormulaDag::Id FormulaDag::prop(const std::string& p) { return intern({Kind::Prop, p, {}}); }
FormulaDag::Id FormulaDag::neg_prop(const std::string& p) { return intern({Kind::NegProp, p, {}}); }
FormulaDag::Id FormulaDag::var(const std::string& x) { return intern({Kind::Var, x, {}}); }

namespace {

std::vector<FormulaDag::Id> flatten(const FormulaDag& d, Kind kind, const std::vector<FormulaDag::Id>& cs,
                                    FormulaDag::Id unit, FormulaDag::Id zero, bool& absorbed) {
  std::vector<FormulaDag::Id> out;
  std::set<FormulaDag::Id> seen;
  absorbed = false;
  for (auto c : cs) {
    if (c == unit) continue;
    if (c == zero) {
      absorbed = true;
      return {};
    }
    if (d.node(c).kind == kind) {
      for (auto g : d.node(c).children)
        if (seen.insert(g).second) out.push_back(g);
    } else if (seen.insert(c).second) {
      out.push_back(c);
    }
  }
  return out;
}

}  // namespace

FormulaDag::Id FormulaDag::conj(std::vector<Id> cs) {
  bool absorbed = false;
  auto flat = flatten(*this, Kind::And, cs, top_, bottom_, absorbed);
  if (absorbed) return bottom_;
  if (flat.empty()) return top_;
  if (flat.size() == 1) return flat.front();
  return intern({Kind::And, "", std::move(flat)});
}

FormulaDag::Id FormulaDag::disj(std::vector<Id> cs) {
  bool absorbed = false;
  auto flat = flatten(*this, Kind::Or, cs, bottom_, top_, absorbed);
  if (absorbed) return top_;
  if (flat.empty()) return bottom_;
  if (flat.size() == 1) return flat.front();
  return intern({Kind::Or, "", std::move(flat)});
}

FormulaDag::Id FormulaDag::diamond(const std::string& a, Id c) {
  if (c == bottom_) return bottom_;
  return intern({Kind::Diamond, a, {c}});
}

FormulaDag::Id FormulaDag::box(const std::string& a, Id c) {
  if (c == top_) return top_;
  return intern({Kind::Box, a, {c}});
}

FormulaDag::Id FormulaDag::diamonds(const std::string& a, std::uint64_t k, Id c) {
  for (std::uint64_t i = 0; i < k; ++i) c = diamond(a, c);
  return c;
}

FormulaDag::Id FormulaDag::boxes(const std::string& a, std::uint64_t k, Id c) {
  for (std::uint64_t i = 0; i < k; ++i) c = box(a, c);
  return c;
}

FormulaDag::Id FormulaDag::fixpoint(Kind kind, const std::string& x, Id body) {
  return intern({kind, x, {body}});
}

FormulaDag::Id FormulaDag::add(const Formula& f) {
  auto it = added_.find(f.id());
  if (it != added_.end()) return it->second;
  switch (f.kind()) {
    case Kind::Nabla:
    case Kind::Color:
    case Kind::ProgDiamond:
    case Kind::ProgBox:
      throw FormulaError("formula table cannot hold sugar node '" + std::string(kind_name(f.kind())) + "'");
    default: break;
  }
  Node n{f.kind(), f.name(), {}};
  for (const auto& c : f.children()) n.children.push_back(add(c));
  Id id = intern(std::move(n));
  added_.emplace(f.id(), id);
  return id;
}

FormulaDag FormulaDag::from_formula(const Formula& f) {
  FormulaDag d;
  d.root_ = d.add(f);
  return d;
}

Formula FormulaDag::to_formula(Id i) const {
  if (formula_cache_.size() < nodes_.size()) formula_cache_.resize(nodes_.size());
  // children precede parents, so a forward pass up to i suffices
  for (Id j = 0; j <= i; ++j) {
    if (formula_cache_[j].valid()) continue;
    const auto& n = nodes_[j];
    std::vector<Formula> cs;
    cs.reserve(n.children.size());
    for (auto c : n.children) cs.push_back(formula_cache_[c]);
    formula_cache_[j] = Formula::make(n.kind, n.name, std::move(cs));
  }
  return formula_cache_[i];
}

namespace {

std::vector<bool> reachable_mask(const FormulaDag& d) {
  std::vector<bool> seen(d.size(), false);
  seen[d.root()] = true;
  for (std::size_t j = d.size(); j-- > 0;) {
    if (!seen[j]) continue;
    for (auto c : d.node(static_cast<FormulaDag::Id>(j)).children) seen[c] = true;
  }
  return seen;
}

}  // namespace

FormulaDag FormulaDag::compacted() const {
  auto seen = reachable_mask(*this);
  FormulaDag out;
  std::vector<Id> remap(nodes_.size(), 0);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (!seen[j]) continue;
    Node n = nodes_[j];
    for (auto& c : n.children) c = remap[c];
    remap[j] = out.intern(std::move(n));
  }
  out.root_ = remap[root_];
  return out;
}

std::size_t FormulaDag::reachable_count() const {
  auto seen = reachable_mask(*this);
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

std::uint64_t FormulaDag::modal_depth() const {
  std::vector<std::uint64_t> md(nodes_.size(), 0);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    std::uint64_t m = 0;
    for (auto c : nodes_[j].children) m = std::max(m, md[c]);
    if (nodes_[j].kind == Kind::Diamond || nodes_[j].kind == Kind::Box) ++m;
    md[j] = m;
  }
  return md[root_];
}

std::uint64_t FormulaDag::tree_size() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> sz(nodes_.size(), 0);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    std::uint64_t s = 1;
    for (auto c : nodes_[j].children) s = (s > kMax - sz[c]) ? kMax : s + sz[c];
    sz[j] = s;
  }
  return sz[root_];
}

long double FormulaDag::tree_size_estimate() const {
  std::vector<long double> sz(nodes_.size(), 0);
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    long double s = 1;
    for (auto c : nodes_[j].children) s += sz[c];
    sz[j] = s;
  }
  return sz[root_];
}

std::vector<std::string> FormulaDag::props() const {
  auto seen = reachable_mask(*this);
  std::set<std::string> ps;
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    if (seen[j] && (nodes_[j].kind == Kind::Prop || nodes_[j].kind == Kind::NegProp)) ps.insert(nodes_[j].name);
  return {ps.begin(), ps.end()};
}

std::string FormulaDag::to_json() const {
  auto c = compacted();
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t j = 0; j < c.nodes_.size(); ++j) {
    const auto& n = c.nodes_[j];
    nlohmann::json jn;
    jn["id"] = j;
    jn["kind"] = std::string(kind_name(n.kind));
    if (!n.name.empty()) jn["name"] = n.name;
    jn["children"] = n.children;
    nodes.push_back(std::move(jn));
  }
  nlohmann::json out;
  out["nodes"] = std::move(nodes);
  out["root"] = c.root_;
  return out.dump();
}

FormulaDag FormulaDag::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormulaError(std::string("malformed formula table: ") + e.what());
  }
  FormulaDag d;
  std::unordered_map<std::int64_t, Id> remap;
  if (!j.contains("nodes") || !j["nodes"].is_array() || !j.contains("root"))
    throw FormulaError("formula table needs 'nodes' and 'root'");
  for (const auto& jn : j["nodes"]) {
    auto kind = kind_from_name(jn.at("kind").get<std::string>());
    if (!kind) throw FormulaError("unknown node kind '" + jn.at("kind").get<std::string>() + "'");
    Node n{*kind, jn.value("name", std::string()), {}};
    for (const auto& c : jn.at("children")) {
      auto it = remap.find(c.get<std::int64_t>());
      if (it == remap.end()) throw FormulaError("formula table child refers to a later or unknown node");
      n.children.push_back(it->second);
    }
    remap[jn.at("id").get<std::int64_t>()] = d.intern(std::move(n));
  }
  auto it = remap.find(j["root"].get<std::int64_t>());
  if (it == remap.end()) throw FormulaError("formula table root is unknown");
  d.root_ = it->second;
  return d;
}

}  // namespace musep
