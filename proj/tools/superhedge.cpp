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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "superhedge/cli.hpp"

namespace sc = superhedge::cli;

int main(int argc, char** argv) {
  CLI::App app{"Super-replication pricing with transaction costs and a production plant"};
  app.require_subcommand(1);

  sc::RunConfig config;
  std::string production;
  std::string contract = "claim";
  std::string format = "text";
  double eps = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("tree", config.tree_path, "Scenario tree JSON document")->required();
    sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--production", production, "Enable the plant (default: on iff plant data present)")
        ->check(CLI::IsMember({"on", "off"}));
  };

  CLI::App* validate = app.add_subcommand("validate", "Check tree invariants");
  CLI::App* assumptions = app.add_subcommand("check-assumptions", "Sample the production functions");
  CLI::App* csp = app.add_subcommand("check-csp", "Conditional sure profit audit");
  CLI::App* price = app.add_subcommand("price", "Primal and dual super-replication prices");
  CLI::App* hedge = app.add_subcommand("hedge", "Super-replication price and hedge strategy");
  for (CLI::App* sub : {validate, assumptions, csp, price, hedge}) add_common(sub);

  assumptions->add_option("--samples", config.samples, "Samples per node");
  for (CLI::App* sub : {price, hedge}) {
    sub->add_option("--contract", contract, "Claim from the tree file or power futures")
        ->check(CLI::IsMember({"claim", "power-futures"}));
    sub->add_option("--power", config.power, "Delivered power x (MW)");
    sub->add_option("--emit-strategy", config.emit_strategy, "Write the hedge strategy as JSON");
    sub->add_option("--dump-lp", config.dump_lp, "Write the primal LP as plain text");
  }
  price->add_option("--eps", eps, "Dual cone margin, in (0, 1e-3]");
  price->add_option("--emit-cps", config.emit_cps, "Write the optimal price system as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sc::kExitInput;
  }

  CLI::App* chosen = app.get_subcommands().front();
  config.command = *sc::parse_command(chosen->get_name());
  if (!production.empty()) config.production = production == "on";
  config.contract = contract == "claim" ? sc::Contract::kClaim : sc::Contract::kPowerFutures;
  config.format = format == "json" ? sc::Format::kJson : sc::Format::kText;
  if (price->count("--eps") > 0) config.eps = eps;

  std::ifstream in(config.tree_path);
  if (!in) {
    std::cerr << "superhedge: cannot read " << config.tree_path << '\n';
    return sc::kExitInput;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  const sc::RunResult result = sc::run(config, buf.str());
  std::cout << result.report;
  if (!result.diagnostic.empty()) std::cerr << "superhedge: " << result.diagnostic << '\n';
  return result.exit_code;
}
