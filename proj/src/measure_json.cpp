// Licensed under the Apache License 2.0 (see LICENSE file).

// Measure description schema:
//   {"kind": "beta", "alpha": 2, "beta": 3}
//   {"kind": "atomic", "atoms": [[0.5, 1.0]]}            (location, mass)
//   {"kind": "power_spike", "gamma": 0.5}
//   {"kind": "tabulated", "table": [[x, p, dp], ...],
//    "envelope": {"proposal_alpha": 1, "proposal_beta": 1, "bound": 2}}
//   {"kind": "composite", "atoms": [[0, 0.25]],
//    "continuous": {"kind": "beta", "alpha": 2, "beta": 2}}

#include <sstream>

#include "definetti/error.hpp"
#include "definetti/measures.hpp"
#include "json.hpp"

namespace definetti {

namespace {

using nlohmann::json;

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("measure JSON: missing field '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ParseError(std::string("measure JSON: field '") + key + "' must be a number");
  return v.get<double>();
}

std::vector<Atom> parse_atoms(const json& j) {
  if (!j.is_array()) throw ParseError("measure JSON: 'atoms' must be an array");
  std::vector<Atom> atoms;
  for (const json& a : j) {
    if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
      atoms.push_back({a[0].get<double>(), a[1].get<double>()});
    } else if (a.is_object()) {
      atoms.push_back({number(a, "location"), number(a, "mass")});
    } else {
      throw ParseError("measure JSON: each atom is [location, mass] or {location, mass}");
    }
  }
  return atoms;
}

std::optional<RejectionEnvelope> parse_envelope(const json& j) {
  if (!j.contains("envelope")) return std::nullopt;
  const json& e = j.at("envelope");
  RejectionEnvelope env;
  env.proposal_alpha = e.value("proposal_alpha", 1.0);
  env.proposal_beta = e.value("proposal_beta", 1.0);
  env.bound = number(e, "bound");
  if (!(env.bound > 0.0) || !(env.proposal_alpha > 0.0) || !(env.proposal_beta > 0.0)) {
    throw InvalidArgument("measure JSON: envelope parameters must be positive");
  }
  return env;
}

std::vector<HermiteTable::Node> parse_table(const json& j) {
  if (!j.contains("table") || !j.at("table").is_array()) {
    throw ParseError("measure JSON: tabulated density needs a 'table' array of [x, p, dp]");
  }
  std::vector<HermiteTable::Node> nodes;
  for (const json& row : j.at("table")) {
    if (!row.is_array() || row.size() != 3) throw ParseError("measure JSON: table rows are [x, p, dp]");
    nodes.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  return nodes;
}

ContinuousPart parse_continuous(const json& j) {
  const std::string kind = j.value("kind", "");
  if (kind == "beta") return BetaDensity{number(j, "alpha"), number(j, "beta")};
  if (kind == "power_spike") return PowerSpikeDensity{number(j, "gamma")};
  if (kind == "tabulated" || kind == "smooth") {
    auto table = std::make_shared<const HermiteTable>(parse_table(j));
    SmoothDensity s;
    s.p = [table](double x) { return table->density(x); };
    s.p_prime = [table](double x) { return table->derivative(x); };
    s.envelope = parse_envelope(j);
    s.table = table;
    return s;
  }
  throw ParseError("measure JSON: unsupported continuous kind '" + kind + "'");
}

json continuous_to_json(const ContinuousPart& c) {
  if (const auto* b = std::get_if<BetaDensity>(&c)) return json{{"kind", "beta"}, {"alpha", b->alpha}, {"beta", b->beta}};
  if (const auto* s = std::get_if<PowerSpikeDensity>(&c)) return json{{"kind", "power_spike"}, {"gamma", s->gamma}};
  const auto& sm = std::get<SmoothDensity>(c);
  json out;
  if (sm.table) {
    out["kind"] = "tabulated";
    json rows = json::array();
    for (const auto& n : sm.table->nodes()) rows.push_back({n.x, n.p, n.dp});
    out["table"] = rows;
  } else {
    out["kind"] = "smooth";
    out["callable"] = true;
    out["exponents"] = {sm.exponent_lo, sm.exponent_hi};
  }
  if (sm.envelope) {
    out["envelope"] = {{"proposal_alpha", sm.envelope->proposal_alpha},
                       {"proposal_beta", sm.envelope->proposal_beta},
                       {"bound", sm.envelope->bound}};
  }
  return out;
}

}  // namespace

MixingMeasure MixingMeasure::from_json(const std::string& text, const QuadratureConfig& cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("measure JSON: top level must be an object");
  const std::string kind = j.value("kind", "");
  try {
    if (kind == "atomic") return atomic(parse_atoms(j.at("atoms")));
    if (kind == "composite") {
      if (!j.contains("continuous")) throw ParseError("measure JSON: composite needs 'continuous'");
      std::vector<Atom> atoms = j.contains("atoms") ? parse_atoms(j.at("atoms")) : std::vector<Atom>{};
      return composite(std::move(atoms), parse_continuous(j.at("continuous")), cfg);
    }
    if (kind == "beta") return beta(number(j, "alpha"), number(j, "beta"));
    if (kind == "power_spike") return power_spike(number(j, "gamma"));
    if (kind == "tabulated" || kind == "smooth") return composite({}, parse_continuous(j), cfg);
  } catch (const json::exception& e) {
    throw ParseError(std::string("measure JSON: ") + e.what());
  }
  throw ParseError("measure JSON: unknown kind '" + kind + "'");
}

std::string MixingMeasure::to_json() const {
  json out;
  auto atoms_json = [&] {
    json a = json::array();
    for (const Atom& atom : atoms_) a.push_back({atom.location, atom.mass});
    return a;
  };
  switch (kind()) {
    case MeasureKind::atomic:
      out = {{"kind", "atomic"}, {"atoms", atoms_json()}};
      break;
    case MeasureKind::composite:
      out = {{"kind", "composite"}, {"atoms", atoms_json()}, {"continuous", continuous_to_json(*continuous_)}};
      break;
    default:
      out = continuous_to_json(*continuous_);
      break;
  }
  return out.dump();
}

}  // namespace definetti
