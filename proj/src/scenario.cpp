#include "tsgag/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tsgag {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::ParseError, path + ": " + what);
}

void domain_check(bool ok, const std::string& param, const std::string& detail) {
  if (!ok) fail(ErrorCode::DomainError, param + ": " + detail);
}

Payload parse_payload(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind")) {
    parse_fail(path, "function payload needs a 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") {
    return ConstantFn{j.value("value", 0.0)};
  }
  if (kind == "linear") {
    return LinearFn{j.value("slope", 0.0), j.value("intercept", 0.0)};
  }
  if (kind == "power") {
    if (!j.contains("center") || !j.contains("exponent")) {
      parse_fail(path, "power payload needs 'center' and 'exponent'");
    }
    return PowerFn{j.at("center").get<double>(), j.at("exponent").get<double>(),
                   j.value("scale", 1.0), j.value("offset", 0.0)};
  }
  if (kind == "indicator") {
    if (!j.contains("lo") || !j.contains("hi")) {
      parse_fail(path, "indicator payload needs 'lo' and 'hi'");
    }
    return IndicatorFn{j.at("lo").get<double>(), j.at("hi").get<double>(),
                       j.value("inside", 1.0), j.value("outside", 0.0)};
  }
  if (kind == "samples") {
    if (!j.contains("grid") || !j.contains("values")) {
      parse_fail(path, "samples payload needs 'grid' and 'values'");
    }
    SamplesFn s;
    s.grid = j.at("grid").get<std::vector<double>>();
    s.values = j.at("values").get<std::vector<double>>();
    return s;
  }
  parse_fail(path, "unknown payload kind '" + kind + "'");
}

TSFunction parse_function(const json& j, const TimeScale& ts, const std::string& path) {
  std::vector<Payload> payloads;
  if (j.is_object()) {
    payloads.assign(ts.component_count(), parse_payload(j, path));
  } else if (j.is_array()) {
    // Either one payload per component in order, or entries tagged with
    // an explicit 'component' index.
    bool tagged = false;
    for (const auto& e : j) {
      if (e.is_object() && e.contains("component")) tagged = true;
    }
    if (tagged) {
      payloads.assign(ts.component_count(), ConstantFn{0.0});
      for (const auto& e : j) {
        if (!e.contains("component")) {
          parse_fail(path, "mixed tagged/untagged function payload list");
        }
        const auto c = e.at("component").get<std::size_t>();
        if (c >= ts.component_count()) {
          parse_fail(path, "payload component index out of range");
        }
        payloads[c] = parse_payload(e, path);
      }
    } else {
      for (const auto& e : j) payloads.push_back(parse_payload(e, path));
    }
  } else {
    parse_fail(path, "function spec must be an object or an array");
  }
  return TSFunction::from_payloads(ts, std::move(payloads));
}

}  // namespace

const TSFunction& Scenario::function(const std::string& name) const {
  auto it = functions.find(name);
  if (it == functions.end()) {
    fail(ErrorCode::ParseError,
         "scenario '" + id + "' does not define function '" + name + "'");
  }
  return it->second;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, path + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(path, e.what());
  }
  if (!doc.is_object()) parse_fail(path, "top level must be an object");

  Scenario sc;
  try {
    sc.id = doc.value("id", std::filesystem::path(path).stem().string());

    if (!doc.contains("timescale")) parse_fail(path, "missing 'timescale'");
    const json& jt = doc.at("timescale");
    TimeScaleSpec spec;
    for (const auto& iv : jt.value("intervals", json::array())) {
      if (!iv.is_array() || iv.size() != 2) {
        parse_fail(path, "each interval must be [a, b]");
      }
      spec.intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    for (const auto& at : jt.value("atoms", json::array())) {
      if (!at.is_array() || at.size() != 2) {
        parse_fail(path, "each atom must be [position, weight]");
      }
      spec.atoms.push_back({at[0].get<double>(), at[1].get<double>()});
    }
    sc.timescale = TimeScale::build(spec);

    const json jfuncs = doc.value("functions", json::object());
    for (const auto& [name, jf] : jfuncs.items()) {
      sc.functions.emplace(name, parse_function(jf, sc.timescale, path));
    }

    const json jp = doc.value("params", json::object());
    sc.alpha = jp.value("alpha", 0.5);
    sc.p = jp.value("p", 2.0);
    domain_check(sc.alpha > 0 && sc.alpha < 1, "alpha", "must lie in (0,1)");
    domain_check(sc.p >= 1, "p", "must be >= 1");
    if (jp.contains("beta")) sc.beta = jp.at("beta").get<double>();
    if (jp.contains("theta")) sc.theta = jp.at("theta").get<double>();
    if (jp.contains("q")) sc.q = jp.at("q").get<double>();
    if (jp.contains("x0")) sc.x0 = jp.at("x0").get<double>();
    if (jp.contains("constant")) sc.constant = jp.at("constant").get<double>();
    if (jp.contains("cells_per_interval")) {
      sc.cells_per_interval = jp.at("cells_per_interval").get<std::vector<int>>();
    }
    if (jp.contains("weights")) {
      sc.weights = jp.at("weights").get<std::vector<double>>();
    }
    sc.samples = jp.value("samples", 100);
    sc.seed = jp.value("seed", static_cast<std::uint64_t>(0));
    sc.method = jp.value("method", std::string("eigensolve"));
    sc.function_name = jp.value("function", std::string("u"));
    sc.rhs_name = jp.value("rhs", std::string("f"));
    if (jp.contains("rl_a")) sc.rl_a = jp.at("rl_a").get<double>();
    if (jp.contains("rl_b")) sc.rl_b = jp.at("rl_b").get<double>();
    if (sc.theta) domain_check(*sc.theta >= 0 && *sc.theta <= 1, "theta", "must lie in [0,1]");
    if (sc.q) domain_check(*sc.q >= 1, "q", "must be >= 1");

    const json jq = doc.value("quad", json::object());
    sc.quad.rel_tol = jq.value("rel_tol", sc.quad.rel_tol);
    sc.quad.abs_tol = jq.value("abs_tol", sc.quad.abs_tol);
    sc.quad.panel_order = jq.value("panel_order", sc.quad.panel_order);
    sc.quad.max_refinement_depth =
        jq.value("max_refinement_depth", sc.quad.max_refinement_depth);
    sc.quad.diagonal_cutoff_eta =
        jq.value("diagonal_cutoff_eta", sc.quad.diagonal_cutoff_eta);
    sc.quad.reproducible = jq.value("reproducible", sc.quad.reproducible);
    sc.quad.validate();

    sc.commands = doc.value("commands", std::vector<std::string>{});
    for (const auto& c : sc.commands) {
      if (!is_known_command(c)) parse_fail(path, "unknown command '" + c + "'");
    }
  } catch (const json::exception& e) {
    parse_fail(path, e.what());
  }
  return sc;
}

}  // namespace tsgag
