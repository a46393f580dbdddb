// Copyright 2026 The Superhedge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superhedge/market_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "superhedge/cones.hpp"

namespace superhedge::tree {

namespace {

constexpr double kProbSumTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ScenarioTree::ScenarioTree(std::vector<double> times, std::vector<Node> nodes,
                           std::vector<bool> production_enabled,
                           std::optional<ContingentClaim> claim)
    : times_(std::move(times)),
      nodes_(std::move(nodes)),
      production_enabled_(std::move(production_enabled)),
      claim_(std::move(claim)),
      parent_(nodes_.size()),
      children_(nodes_.size()) {
  std::map<std::string, std::size_t, std::less<>> by_id;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!by_id.emplace(nodes_[i].id, i).second) {
      structural_errors_.push_back("duplicate node id '" + nodes_[i].id + "'");
    }
  }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (!n.parent) {
      if (roots++ == 0) root_ = i;
      continue;
    }
    auto it = by_id.find(*n.parent);
    if (it == by_id.end()) {
      structural_errors_.push_back("node '" + n.id + "' has unknown parent '" + *n.parent + "'");
      continue;
    }
    parent_[i] = it->second;
    children_[it->second].push_back(i);
  }
  if (roots != 1) {
    structural_errors_.push_back("expected exactly one root, found " + std::to_string(roots));
  }
}

std::size_t ScenarioTree::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  throw UnknownNode("unknown node '" + std::string(id) + "'");
}

std::optional<std::size_t> ScenarioTree::parent(std::size_t index) const {
  return parent_.at(index);
}

std::vector<std::size_t> ScenarioTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (children_[i].empty()) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ScenarioTree::nodes_at(int time_index) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].time_index == time_index) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> ScenarioTree::path_from_root(std::size_t index) const {
  std::vector<std::size_t> path;
  std::optional<std::size_t> cur = index;
  while (cur) {
    path.push_back(*cur);
    if (path.size() > nodes_.size()) throw TreeError("cycle in parent links");
    cur = parent_.at(*cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool ScenarioTree::is_production_step(int time_index) const {
  if (time_index < 1 || time_index > num_periods()) return false;
  if (!production_enabled_.empty() &&
      (static_cast<std::size_t>(time_index) > production_enabled_.size() ||
       !production_enabled_[static_cast<std::size_t>(time_index) - 1])) {
    return false;
  }
  const auto at = nodes_at(time_index);
  return !at.empty() && std::all_of(at.begin(), at.end(), [this](std::size_t i) {
    return nodes_[i].plant.has_value() && nodes_[i].spot_power.has_value();
  });
}

production::ThermalStep ScenarioTree::thermal_step(std::size_t index) const {
  const Node& n = nodes_.at(index);
  if (!n.plant || !n.spot_power) {
    throw SchemaError("node '" + n.id + "' lacks plant data or spot power");
  }
  return {*n.spot_power, *n.plant};
}

ScenarioTree ScenarioTree::with_cond_probs(const std::vector<double>& cond_probs) const {
  std::vector<Node> nodes = nodes_;
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].cond_prob = cond_probs.at(i);
  return ScenarioTree(times_, std::move(nodes), production_enabled_, claim_);
}

double node_probability(const ScenarioTree& tree, std::size_t index) {
  if (index >= tree.size()) throw UnknownNode("node index out of range");
  double p = 1.0;
  std::optional<std::size_t> cur = index;
  while (cur && tree.parent(*cur)) {
    p *= tree.node(*cur).cond_prob;
    cur = tree.parent(*cur);
  }
  return p;
}

double node_probability(const ScenarioTree& tree, std::string_view id) {
  return node_probability(tree, tree.index_of(id));
}

ValidationReport validate(const ScenarioTree& tree) {
  ValidationReport report;
  auto add = [&](std::string id, std::string invariant, std::string message) {
    report.violations.push_back({std::move(id), std::move(invariant), std::move(message)});
  };
  for (const auto& e : tree.structural_errors()) add("", "tree structure", e);

  const auto& times = tree.times();
  if (times.empty()) add("", "time grid", "times must not be empty");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      add("", "time grid", "times not strictly increasing at index " + std::to_string(i));
    }
  }
  const int horizon = tree.num_periods();
  if (!tree.production_enabled().empty() &&
      static_cast<int>(tree.production_enabled().size()) != horizon) {
    add("", "production grid",
        "production_enabled has " + std::to_string(tree.production_enabled().size()) +
            " entries, expected " + std::to_string(horizon));
  }

  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Node& n = tree.node(i);
    if (n.time_index < 0 || n.time_index > horizon) {
      add(n.id, "time index", "time_index " + std::to_string(n.time_index) +
                                  " outside [0, " + std::to_string(horizon) + "]");
    }
    if (auto p = tree.parent(i)) {
      if (tree.node(*p).time_index != n.time_index - 1) {
        add(n.id, "parent time", "parent '" + tree.node(*p).id + "' is not at time index " +
                                     std::to_string(n.time_index - 1));
      }
      if (!(n.cond_prob > 0.0) || n.cond_prob > 1.0) {
        add(n.id, "conditional probability",
            "cond_prob " + fmt(n.cond_prob) + " outside (0, 1]");
      }
    } else if (!n.parent) {
      if (n.time_index != 0) add(n.id, "root time", "root must be at time index 0");
      if (n.cond_prob != 1.0) add(n.id, "conditional probability", "root cond_prob must be 1");
    }
    if (!(n.pi12 > 0.0) || !(n.pi21 > 0.0) || !std::isfinite(n.pi12) ||
        !std::isfinite(n.pi21)) {
      add(n.id, "bid-ask quotes", "pi12 and pi21 must be positive and finite");
    } else if (!(n.pi12 * n.pi21 > 1.0)) {
      add(n.id, "efficient frictions",
          "efficient frictions violated: pi12 * pi21 = " + fmt(n.pi12 * n.pi21) + " <= 1");
    }
    if (n.spot_power && !std::isfinite(*n.spot_power)) {
      add(n.id, "spot price", "spot_power must be finite");
    }
    if (n.plant) {
      if (n.time_index == 0) add(n.id, "plant data", "plant data at the root is meaningless");
      if (!n.spot_power) add(n.id, "plant data", "plant data requires spot_power");
      for (auto& msg : production::plant_violations(*n.plant)) {
        add(n.id, "plant data", std::move(msg));
      }
    }
    const auto& kids = tree.children(i);
    if (kids.empty() && n.time_index < horizon) {
      add(n.id, "leaf time", "node before the horizon has no children");
    }
    if (!kids.empty()) {
      double sum = 0.0;
      for (std::size_t c : kids) sum += tree.node(c).cond_prob;
      if (std::abs(sum - 1.0) > kProbSumTol) {
        add(n.id, "probability normalization",
            "children probabilities of '" + n.id + "' sum to " + fmt(sum));
      }
    }
  }

  for (int t = 1; t <= horizon; ++t) {
    const auto at = tree.nodes_at(t);
    const auto with_plant = std::count_if(at.begin(), at.end(), [&](std::size_t i) {
      return tree.node(i).plant.has_value();
    });
    if (with_plant != 0 && static_cast<std::size_t>(with_plant) != at.size()) {
      add("", "plant data", "plant data present on some but not all nodes at time index " +
                                std::to_string(t));
    }
  }

  if (const auto& claim = tree.claim()) {
    if (claim->payoffs.size() != tree.size()) {
      add("", "claim", "claim payoffs do not cover the tree");
    } else if (claim->kappa.cash < 0.0 || claim->kappa.fuel < 0.0) {
      add("", "claim", "credit line kappa must be nonnegative");
    } else {
      for (std::size_t leaf : tree.leaves()) {
        const Node& n = tree.node(leaf);
        if (!(n.pi12 > 0.0 && n.pi21 > 0.0 && n.pi12 * n.pi21 > 1.0)) continue;
        const auto cone = cones::make_solvency_cone(n.pi12, n.pi21);
        if (!cones::contains(cone, claim->payoffs[leaf] + claim->kappa)) {
          add(n.id, "claim lower bound", "payoff + kappa is not solvent at leaf '" + n.id + "'");
        }
      }
    }
  }
  return report;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

double get_number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_fail(where, std::string("missing field '") + key + "'");
  if (!it->is_number()) schema_fail(where, std::string("field '") + key + "' must be a number");
  return it->get<double>();
}

std::string get_id(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  schema_fail(where, "node ids must be strings or integers");
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) schema_fail(where, "unknown field '" + it.key() + "'");
  }
}

Vec2 get_pair(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    schema_fail(where, "expected a [cash, fuel] pair of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

production::PlantStepData parse_plant(const json& p, const std::string& where) {
  if (!p.is_object()) schema_fail(where, "'plant' must be an object");
  check_keys(p, {"heat_rate", "capacity", "fixed_cost", "maintenance"}, where + ".plant");
  production::PlantStepData plant;
  plant.heat_rate = get_number(p, "heat_rate", where + ".plant");
  plant.capacity = get_number(p, "capacity", where + ".plant");
  plant.fixed_cost = get_number(p, "fixed_cost", where + ".plant");
  auto it = p.find("maintenance");
  if (it == p.end() || !it->is_array()) schema_fail(where, "plant needs a 'maintenance' array");
  std::vector<production::Breakpoint> pts;
  for (const auto& bp : *it) {
    const Vec2 zc = get_pair(bp, where + ".plant.maintenance");
    pts.push_back({zc.cash, zc.fuel});
  }
  plant.maintenance = production::PiecewiseConcave(std::move(pts));
  return plant;
}

}  // namespace

ScenarioTree parse_tree_unchecked(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("document must be a JSON object");
  check_keys(doc, {"times", "nodes", "claim", "production_enabled"}, "document");

  auto times_it = doc.find("times");
  if (times_it == doc.end() || !times_it->is_array()) {
    throw SchemaError("document: missing 'times' array");
  }
  std::vector<double> times;
  for (const auto& t : *times_it) {
    if (!t.is_number()) throw SchemaError("times: entries must be numbers");
    times.push_back(t.get<double>());
  }

  auto nodes_it = doc.find("nodes");
  if (nodes_it == doc.end() || !nodes_it->is_array()) {
    throw SchemaError("document: missing 'nodes' array");
  }
  std::vector<Node> nodes;
  for (std::size_t k = 0; k < nodes_it->size(); ++k) {
    const json& obj = (*nodes_it)[k];
    std::string where = "nodes[" + std::to_string(k) + "]";
    if (!obj.is_object()) schema_fail(where, "node must be an object");
    check_keys(obj, {"id", "time_index", "parent", "cond_prob", "pi12", "pi21", "spot_power",
                     "plant"},
               where);
    Node n;
    auto id_it = obj.find("id");
    if (id_it == obj.end()) schema_fail(where, "missing field 'id'");
    n.id = get_id(*id_it, where);
    where = "node '" + n.id + "'";
    auto ti = obj.find("time_index");
    if (ti == obj.end() || !ti->is_number_integer()) {
      schema_fail(where, "'time_index' must be an integer");
    }
    n.time_index = ti->get<int>();
    auto parent_it = obj.find("parent");
    if (parent_it == obj.end()) schema_fail(where, "missing field 'parent'");
    if (!parent_it->is_null()) n.parent = get_id(*parent_it, where);
    if (obj.contains("cond_prob") || n.parent) n.cond_prob = get_number(obj, "cond_prob", where);
    n.pi12 = get_number(obj, "pi12", where);
    n.pi21 = get_number(obj, "pi21", where);
    if (obj.contains("spot_power")) n.spot_power = get_number(obj, "spot_power", where);
    if (auto p = obj.find("plant"); p != obj.end() && !p->is_null()) {
      n.plant = parse_plant(*p, where);
    }
    nodes.push_back(std::move(n));
  }

  std::vector<bool> enabled;
  if (auto it = doc.find("production_enabled"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("production_enabled must be an array of booleans");
    for (const auto& b : *it) {
      if (!b.is_boolean()) throw SchemaError("production_enabled must be an array of booleans");
      enabled.push_back(b.get<bool>());
    }
  }

  std::optional<ContingentClaim> claim;
  if (auto it = doc.find("claim"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) throw SchemaError("claim must be an object");
    check_keys(*it, {"payoffs", "kappa"}, "claim");
    auto pay = it->find("payoffs");
    if (pay == it->end() || !pay->is_object()) throw SchemaError("claim: missing 'payoffs' map");
    auto kap = it->find("kappa");
    if (kap == it->end()) throw SchemaError("claim: missing 'kappa'");
    ContingentClaim c;
    c.kappa = get_pair(*kap, "claim.kappa");
    c.payoffs.assign(nodes.size(), Vec2{});
    std::vector<bool> seen(nodes.size(), false);
    for (auto p = pay->begin(); p != pay->end(); ++p) {
      auto pos = std::find_if(nodes.begin(), nodes.end(),
                              [&](const Node& n) { return n.id == p.key(); });
      if (pos == nodes.end()) throw SchemaError("claim: unknown leaf '" + p.key() + "'");
      const auto idx = static_cast<std::size_t>(pos - nodes.begin());
      c.payoffs[idx] = get_pair(p.value(), "claim.payoffs." + p.key());
      seen[idx] = true;
    }
    ScenarioTree shape(times, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (shape.is_leaf(i) && !seen[i]) {
        throw SchemaError("claim: no payoff for leaf '" + nodes[i].id + "'");
      }
      if (!shape.is_leaf(i) && seen[i]) {
        throw SchemaError("claim: payoff given for non-leaf '" + nodes[i].id + "'");
      }
    }
    claim = std::move(c);
  }
  return ScenarioTree(std::move(times), std::move(nodes), std::move(enabled), std::move(claim));
}

ScenarioTree parse_tree(std::string_view document) {
  ScenarioTree tree = parse_tree_unchecked(document);
  ValidationReport report = validate(tree);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    throw InvariantError(v.node_id, v.invariant,
                         (v.node_id.empty() ? "" : "node '" + v.node_id + "': ") + v.message);
  }
  return tree;
}

std::string serialize(const ScenarioTree& tree) {
  nlohmann::ordered_json doc;
  doc["times"] = tree.times();
  auto& nodes = doc["nodes"] = nlohmann::ordered_json::array();
  for (const Node& n : tree.nodes()) {
    nlohmann::ordered_json obj;
    obj["id"] = n.id;
    obj["time_index"] = n.time_index;
    obj["parent"] = n.parent ? nlohmann::ordered_json(*n.parent) : nlohmann::ordered_json();
    obj["cond_prob"] = n.cond_prob;
    obj["pi12"] = n.pi12;
    obj["pi21"] = n.pi21;
    if (n.spot_power) obj["spot_power"] = *n.spot_power;
    if (n.plant) {
      nlohmann::ordered_json p;
      p["heat_rate"] = n.plant->heat_rate;
      p["capacity"] = n.plant->capacity;
      p["fixed_cost"] = n.plant->fixed_cost;
      auto& m = p["maintenance"] = nlohmann::ordered_json::array();
      for (const auto& b : n.plant->maintenance.breakpoints()) m.push_back({b.z, b.value});
      obj["plant"] = std::move(p);
    }
    nodes.push_back(std::move(obj));
  }
  if (!tree.production_enabled().empty()) {
    auto& e = doc["production_enabled"] = nlohmann::ordered_json::array();
    for (bool b : tree.production_enabled()) e.push_back(b);
  }
  if (const auto& claim = tree.claim()) {
    nlohmann::ordered_json c;
    auto& pay = c["payoffs"] = nlohmann::ordered_json::object();
    for (std::size_t leaf : tree.leaves()) {
      pay[tree.node(leaf).id] = {claim->payoffs[leaf].cash, claim->payoffs[leaf].fuel};
    }
    c["kappa"] = {claim->kappa.cash, claim->kappa.fuel};
    doc["claim"] = std::move(c);
  }
  return doc.dump(2);
}

ContingentClaim make_claim(const ScenarioTree& tree, std::vector<Vec2> payoffs) {
  if (payoffs.size() != tree.size()) throw SchemaError("payoffs must be indexed by node");
  double credit = 0.0;
  for (std::size_t leaf : tree.leaves()) {
    const Node& n = tree.node(leaf);
    const Vec2& h = payoffs[leaf];
    credit = std::max(credit, -(h.cash + cones::liquidation_value(n.pi12, n.pi21, h.fuel)));
  }
  return {std::move(payoffs), {credit, 0.0}};
}

}  // namespace superhedge::tree
