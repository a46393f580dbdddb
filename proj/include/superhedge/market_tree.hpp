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

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "superhedge/production.hpp"
#include "superhedge/vec2.hpp"

// Finite scenario trees: the filtration is node ancestry, every node carries
// bid-ask quotes, and nodes after the root may carry the spot power price and
// the plant data of the production step that ends there.
namespace superhedge::tree {

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SyntaxError : public TreeError {
 public:
  using TreeError::TreeError;
};
class SchemaError : public TreeError {
 public:
  using TreeError::TreeError;
};
class InvariantError : public TreeError {
 public:
  InvariantError(std::string node_id, std::string invariant, const std::string& message)
      : TreeError(message), node_id_(std::move(node_id)), invariant_(std::move(invariant)) {}
  const std::string& node_id() const { return node_id_; }
  const std::string& invariant() const { return invariant_; }

 private:
  std::string node_id_;
  std::string invariant_;
};
class UnknownNode : public TreeError {
 public:
  using TreeError::TreeError;
};

struct Node {
  std::string id;
  int time_index = 0;
  std::optional<std::string> parent;
  double cond_prob = 1.0;
  double pi12 = 0.0;
  double pi21 = 0.0;
  std::optional<double> spot_power;
  std::optional<production::PlantStepData> plant;
};

// Leaf-indexed payoff H with credit line kappa (H + kappa solvent at every
// leaf). `payoffs` is indexed by node index; entries of non-leaves are unused.
struct ContingentClaim {
  std::vector<Vec2> payoffs;
  Vec2 kappa;
};

class ScenarioTree {
 public:
  // Links nodes by parent id. Structural defects (unknown parents, several
  // roots, ...) are recorded, not thrown; validate() reports them.
  // `production_enabled[i - 1]` gates the production step ending at time i;
  // empty means every step is enabled.
  ScenarioTree(std::vector<double> times, std::vector<Node> nodes,
               std::vector<bool> production_enabled = {},
               std::optional<ContingentClaim> claim = std::nullopt);

  const std::vector<double>& times() const { return times_; }
  // Number of periods N; times() has N + 1 entries.
  int num_periods() const { return static_cast<int>(times_.size()) - 1; }

  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(std::size_t index) const { return nodes_.at(index); }
  std::size_t index_of(std::string_view id) const;

  std::size_t root() const { return root_; }
  std::optional<std::size_t> parent(std::size_t index) const;
  const std::vector<std::size_t>& children(std::size_t index) const {
    return children_.at(index);
  }
  bool is_leaf(std::size_t index) const { return children_.at(index).empty(); }
  std::vector<std::size_t> leaves() const;
  std::vector<std::size_t> nodes_at(int time_index) const;
  // Root first.
  std::vector<std::size_t> path_from_root(std::size_t index) const;

  const std::vector<bool>& production_enabled() const { return production_enabled_; }
  // True when step `time_index` (1..N) is enabled and its nodes carry plant data.
  bool is_production_step(int time_index) const;
  // The production function realised at `index` (requires plant and spot).
  production::ThermalStep thermal_step(std::size_t index) const;

  const std::optional<ContingentClaim>& claim() const { return claim_; }

  const std::vector<std::string>& structural_errors() const { return structural_errors_; }

  // Copy with replaced conditional probabilities (indexed by node).
  ScenarioTree with_cond_probs(const std::vector<double>& cond_probs) const;

 private:
  std::vector<double> times_;
  std::vector<Node> nodes_;
  std::vector<bool> production_enabled_;
  std::optional<ContingentClaim> claim_;
  std::vector<std::optional<std::size_t>> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::size_t root_ = 0;
  std::vector<std::string> structural_errors_;
};

// Unconditional probability: product of cond_prob from the root.
double node_probability(const ScenarioTree& tree, std::size_t index);
double node_probability(const ScenarioTree& tree, std::string_view id);

struct Violation {
  std::string node_id;  // empty for tree-level defects
  std::string invariant;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const ScenarioTree& tree);

// Parses the JSON document without running validate(). Throws SyntaxError or
// SchemaError.
ScenarioTree parse_tree_unchecked(std::string_view document);

// Parses and validates; throws InvariantError for the first violation.
ScenarioTree parse_tree(std::string_view document);

std::string serialize(const ScenarioTree& tree);

// Claim with the smallest cash credit line making every payoff solvent.
ContingentClaim make_claim(const ScenarioTree& tree, std::vector<Vec2> payoffs);

}  // namespace superhedge::tree
