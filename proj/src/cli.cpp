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

#include "superhedge/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "superhedge/csp_check.hpp"
#include "superhedge/dual_price.hpp"
#include "superhedge/market_tree.hpp"
#include "superhedge/primal_hedge.hpp"
#include "superhedge/production.hpp"

namespace superhedge::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr double kDefaultEps = 1e-6;

// Input problems: exit 1 with a one-line diagnostic.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rounded through the report format so that dump() is reproducible.
Json num(double x) {
  if (!std::isfinite(x)) return Json(format_number(x));
  return Json(std::strtod(format_number(x).c_str(), nullptr));
}

Json vec(const Vec2& v) { return Json::array({num(v.cash), num(v.fuel)}); }

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw InputError("cannot write " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("cannot write " + path);
}

void render_text(const Json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    if (j.empty()) os << prefix << ": {}\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
      render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    }
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      render_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    }
  } else if (j.is_string()) {
    os << prefix << ": " << j.get<std::string>() << '\n';
  } else if (j.is_number_float()) {
    os << prefix << ": " << format_number(j.get<double>()) << '\n';
  } else {
    os << prefix << ": " << j.dump() << '\n';
  }
}

std::string render(const Json& j, Format format) {
  if (format == Format::kJson) return j.dump(2) + "\n";
  std::ostringstream os;
  render_text(j, "", os);
  return os.str();
}

Json violations_json(const tree::ValidationReport& report) {
  Json arr = Json::array();
  for (const tree::Violation& v : report.violations) {
    arr.push_back({{"node", v.node_id}, {"invariant", v.invariant}, {"message", v.message}});
  }
  return arr;
}

Json verdict_json(const production::Verdict& v) {
  Json j{{"passed", v.passed}, {"checks", v.checks}, {"violations", v.violations}};
  if (v.witness) {
    j["witness"] = {{"beta_a", num(v.witness->beta_a)},
                    {"beta_b", num(v.witness->beta_b)},
                    {"lambda", num(v.witness->lambda)},
                    {"defect", vec(v.witness->defect)}};
  }
  return j;
}

bool has_plant_data(const tree::ScenarioTree& tree) {
  for (const tree::Node& n : tree.nodes()) {
    if (n.plant) return true;
  }
  return false;
}

Json strategy_json(const tree::ScenarioTree& tree, const hedge::HedgeStrategy& s) {
  Json nodes = Json::object();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (i >= s.weights.size()) break;
    Json n{{"weights", Json::array()}, {"trade", vec(s.trades[i])}};
    for (double w : s.weights[i]) n["weights"].push_back(num(w));
    if (i < s.beta.size() && s.beta[i]) n["beta"] = num(*s.beta[i]);
    nodes[tree.node(i).id] = std::move(n);
  }
  return Json{{"endowment", num(s.endowment)}, {"nodes", std::move(nodes)}};
}

Json cps_json(const tree::ScenarioTree& tree, const dual::PriceSystem& z) {
  Json j = Json::object();
  for (std::size_t i = 0; i < tree.size(); ++i) j[tree.node(i).id] = vec(z.z[i]);
  return j;
}

struct Loaded {
  std::optional<tree::ScenarioTree> tree;
  Json rejection;  // set when validation failed
};

Loaded load(std::string_view document, Json header) {
  tree::ScenarioTree t = tree::parse_tree_unchecked(document);
  const tree::ValidationReport report = tree::validate(t);
  Loaded out;
  if (!report.ok()) {
    header["valid"] = false;
    header["violations"] = violations_json(report);
    out.rejection = std::move(header);
    return out;
  }
  out.tree = std::move(t);
  return out;
}

RunResult finish(Json report, Format format, int code) {
  return {code, render(report, format), {}};
}

RunResult run_validate(const RunConfig& config, std::string_view document, Json header) {
  const tree::ScenarioTree t = tree::parse_tree_unchecked(document);
  const tree::ValidationReport report = tree::validate(t);
  header["valid"] = report.ok();
  header["violations"] = violations_json(report);
  return finish(std::move(header), config.format, report.ok() ? kExitOk : kExitViolation);
}

RunResult run_assumptions(const RunConfig& config, const tree::ScenarioTree& t, Json header) {
  Json nodes = Json::array();
  bool passed = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const tree::Node& n = t.node(i);
    if (!n.plant || !n.spot_power) continue;
    const production::ThermalStep step = t.thermal_step(i);
    const production::AssumptionReport r = production::check_assumptions(step, config.samples);
    passed = passed && r.passed();
    Json j{{"node", n.id},
           {"passed", r.passed()},
           {"concavity", verdict_json(r.concavity)},
           {"boundedness", verdict_json(r.boundedness)},
           {"continuity", verdict_json(r.continuity)}};
    if (r.symbolic) j["symbolic"] = *r.symbolic;
    j["bound"] = vec(production::production_bound(step));
    nodes.push_back(std::move(j));
  }
  header["passed"] = passed;
  header["nodes"] = std::move(nodes);
  return finish(std::move(header), config.format, passed ? kExitOk : kExitViolation);
}

const char* status_name(csp::Status s) {
  return s == csp::Status::kBounded ? "bounded" : "unbounded";
}

RunResult run_csp(const RunConfig& config, const tree::ScenarioTree& t, Json header) {
  const csp::CspVerdict v = csp::check_csp(t);
  header["status"] = status_name(v.status);
  if (v.status == csp::Status::kBounded) {
    header["bound"] = num(v.bound);
  } else {
    Json w = Json::array();
    for (const auto& [id, growth] : v.witness) w.push_back({{"node", id}, {"growth", num(growth)}});
    header["witness"] = std::move(w);
  }
  Json nodes = Json::array();
  for (const csp::NodeDetail& d : v.nodes) {
    Json j{{"node", d.node_id}, {"status", status_name(d.verdict.status)}};
    if (d.verdict.status == csp::Status::kBounded) {
      j["sup_injection"] = num(d.verdict.sup_injection);
    }
    j["tail_lhs"] = num(d.verdict.tail_lhs);
    j["tail_rhs"] = num(d.verdict.tail_rhs);
    nodes.push_back(std::move(j));
  }
  header["nodes"] = std::move(nodes);
  header["lp_iterations"] = v.lp_iterations;
  return finish(std::move(header), config.format,
                v.status == csp::Status::kBounded ? kExitOk : kExitCspUnbounded);
}

tree::ContingentClaim contract_claim(const RunConfig& config, const tree::ScenarioTree& t) {
  if (config.contract == Contract::kPowerFutures) return dual::power_futures_claim(t, config.power);
  if (!t.claim()) throw InputError("tree document has no claim");
  return *t.claim();
}

RunResult run_pricing(const RunConfig& config, const tree::ScenarioTree& t, Json header) {
  const bool production = config.production.value_or(has_plant_data(t));
  const tree::ContingentClaim claim = contract_claim(config, t);
  header["contract"] = config.contract == Contract::kClaim ? "claim" : "power-futures";
  if (config.contract == Contract::kPowerFutures) header["power"] = num(config.power);
  header["production"] = production;

  if (!config.dump_lp.empty()) {
    std::ostringstream os;
    hedge::build_hedge_lp(t, claim, production).dump(os);
    write_text(config.dump_lp, os.str());
  }
  const hedge::PriceResult primal = hedge::superreplication_price(t, claim, production);
  if (!config.emit_strategy.empty()) write_file(config.emit_strategy, strategy_json(t, primal.strategy));

  if (config.command == Command::kHedge) {
    header["price"] = num(primal.price);
    header["replay_margin"] = num(primal.replay_margin);
    header["lp_iterations"] = primal.lp_stats.iterations;
    header["strategy"] = strategy_json(t, primal.strategy);
    return finish(std::move(header), config.format, kExitOk);
  }

  dual::DualOptions options;
  options.production_enabled = production;
  options.ratio_margin = config.eps.value_or(kDefaultEps);
  const dual::DualResult d = dual::dual_price(t, claim, options);
  if (!config.emit_cps.empty()) write_file(config.emit_cps, cps_json(t, d.price_system));

  header["eps"] = num(options.ratio_margin);
  header["primal"] = num(primal.price);
  header["dual"] = num(d.value);
  header["gap"] = num(std::abs(primal.price - d.value));
  header["support_excess"] = num(d.support_excess);
  header["replay_margin"] = num(primal.replay_margin);
  return finish(std::move(header), config.format, kExitOk);
}

RunResult failure(const RunConfig& config, int code, const std::string& kind,
                  const std::string& what) {
  Json j{{"command", to_string(config.command)}, {"tree", config.tree_path},
         {"error", kind}, {"message", what}};
  RunResult r{code, render(j, config.format), {}};
  if (code == kExitInput) r.diagnostic = kind + ": " + what;
  return r;
}

}  // namespace

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::optional<Command> parse_command(std::string_view name) {
  if (name == "validate") return Command::kValidate;
  if (name == "check-assumptions") return Command::kCheckAssumptions;
  if (name == "check-csp") return Command::kCheckCsp;
  if (name == "price") return Command::kPrice;
  if (name == "hedge") return Command::kHedge;
  return std::nullopt;
}

const char* to_string(Command command) {
  switch (command) {
    case Command::kValidate: return "validate";
    case Command::kCheckAssumptions: return "check-assumptions";
    case Command::kCheckCsp: return "check-csp";
    case Command::kPrice: return "price";
    case Command::kHedge: return "hedge";
  }
  return "?";
}

std::optional<std::string> config_violation(const RunConfig& config) {
  if (config.contract == Contract::kPowerFutures && !(config.power >= 0.0 && std::isfinite(config.power))) {
    return "--power must be a finite number >= 0";
  }
  if (config.eps && !(*config.eps > 0.0 && *config.eps <= 1e-3)) {
    return "--eps must lie in (0, 1e-3]";
  }
  if (config.command == Command::kCheckAssumptions && config.samples == 0) {
    return "--samples must be positive";
  }
  return std::nullopt;
}

RunResult run(const RunConfig& config, std::string_view document) {
  if (auto why = config_violation(config)) return failure(config, kExitInput, "usage", *why);
  Json header{{"command", to_string(config.command)}, {"tree", config.tree_path}};
  try {
    if (config.command == Command::kValidate) return run_validate(config, document, header);
    Loaded loaded = load(document, header);
    if (!loaded.tree) return finish(std::move(loaded.rejection), config.format, kExitViolation);
    switch (config.command) {
      case Command::kCheckAssumptions: return run_assumptions(config, *loaded.tree, header);
      case Command::kCheckCsp: return run_csp(config, *loaded.tree, header);
      default: return run_pricing(config, *loaded.tree, header);
    }
  } catch (const tree::SyntaxError& e) {
    return failure(config, kExitInput, "syntax", e.what());
  } catch (const tree::TreeError& e) {
    return failure(config, kExitInput, "schema", e.what());
  } catch (const InputError& e) {
    return failure(config, kExitInput, "input", e.what());
  } catch (const production::NonConcaveProduction& e) {
    return failure(config, kExitViolation, "non-concave production", e.what());
  } catch (const csp::MissingPlantData& e) {
    return failure(config, kExitViolation, "missing plant data", e.what());
  } catch (const dual::MissingSpot& e) {
    return failure(config, kExitViolation, "missing spot", e.what());
  } catch (const dual::LPInfeasible& e) {
    return failure(config, kExitViolation, "no price system", e.what());
  } catch (const hedge::LPInfeasible& e) {
    return failure(config, kExitViolation, "primal infeasible", e.what());
  } catch (const hedge::LPUnbounded& e) {
    return failure(config, kExitViolation, "primal unbounded", e.what());
  } catch (const std::exception& e) {
    return failure(config, kExitInput, "error", e.what());
  }
}

}  // namespace superhedge::cli
