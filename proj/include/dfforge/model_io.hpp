#pragma once

// JSON model documents. Schema (see docs/model-format.md):
//
//   {
//     "name": "plummer-like",                        (optional)
//     "convention": "relative_bounded" | "unbounded_rising",
//     "phi0": 0.0,                                   (optional)
//     "G": 1.0,                                      (optional, default 1)
//     "R_a": 2.0,                                    (required with scaled_radial terms)
//     "terms": [
//       {"family": "pure_radial" | "scaled_radial", "n": 0, "beta": 1.0,
//        "coeff": [{"c": 1.0, "p": 2.0, "k": 0.0}, ...]}
//     ]
//   }
//
// "coeff" may instead be {"tabulated": {"x_max": X, "values": [...]}} with
// values sampled at x_j = X (1 - cos(pi j / N)) / 2.

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

#include "dfforge/error.hpp"
#include "dfforge/model.hpp"

namespace dfforge {

namespace detail {

using json = nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing required field");
  return *it;
}

inline double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

inline CoefficientFunction parse_coefficient(const json& v, const std::string& path) {
  if (v.is_array()) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string ap = path + "[" + std::to_string(i) + "]";
      const json& a = v[i];
      if (!a.is_object()) throw ParseError(ap + ": expected an object {c, p, k}");
      for (const auto& [key, _] : a.items()) {
        if (key != "c" && key != "p" && key != "k") throw ParseError(ap + "." + key + ": unknown field");
      }
      Atom atom;
      atom.c = number_at(require(a, "c", ap), ap + ".c");
      atom.p = a.contains("p") ? number_at(a["p"], ap + ".p") : 0.0;
      atom.k = a.contains("k") ? number_at(a["k"], ap + ".k") : 0.0;
      if (!(atom.p >= 0.0)) throw ParseError(ap + ".p: power must be >= 0");
      if (!(atom.k >= 0.0)) throw ParseError(ap + ".k: decay rate must be >= 0");
      atoms.push_back(atom);
    }
    return CoefficientFunction(std::move(atoms));
  }
  if (v.is_object() && v.contains("tabulated")) {
    const json& t = v["tabulated"];
    const std::string tp = path + ".tabulated";
    const double x_max = number_at(require(t, "x_max", tp), tp + ".x_max");
    const json& vals = require(t, "values", tp);
    if (!vals.is_array()) throw ParseError(tp + ".values: expected an array");
    std::vector<double> values;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      values.push_back(number_at(vals[i], tp + ".values[" + std::to_string(i) + "]"));
    }
    const double tol = t.contains("derivative_tol") ? number_at(t["derivative_tol"], tp + ".derivative_tol") : 1e-6;
    try {
      return CoefficientFunction(ChebyshevSeries::from_lobatto_samples(x_max, values, tol));
    } catch (const DomainError& e) {
      throw ParseError(tp + ": " + e.what());
    }
  }
  throw ParseError(path + ": expected an array of atoms or {\"tabulated\": ...}");
}

inline json coefficient_to_json(const CoefficientFunction& f) {
  if (f.is_atomic()) {
    json arr = json::array();
    for (const Atom& a : f.atoms()) arr.push_back({{"c", a.c}, {"p", a.p}, {"k", a.k}});
    return arr;
  }
  throw ConfigurationError("serialising tabulated coefficients is not supported");
}

}  // namespace detail

inline ModelDefinition parse_model_json(const nlohmann::json& doc) {
  using detail::json;
  if (!doc.is_object()) throw ParseError("model: expected a JSON object");
  static const char* const kKnown[] = {"name", "convention", "phi0", "G", "R_a", "terms", "schema"};
  for (const auto& [key, _] : doc.items()) {
    bool ok = false;
    for (const char* k : kKnown) ok = ok || key == k;
    if (!ok) throw ParseError("model." + key + ": unknown field");
  }
  ModelDefinition model;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("model.name: expected a string");
    model.name = doc["name"].get<std::string>();
  }
  const json& conv = detail::require(doc, "convention", "model");
  if (!conv.is_string()) throw ParseError("model.convention: expected a string");
  const std::string c = conv.get<std::string>();
  if (c == "relative_bounded") {
    model.convention.kind = ConventionKind::RelativeBounded;
  } else if (c == "unbounded_rising") {
    model.convention.kind = ConventionKind::UnboundedRising;
  } else {
    throw ParseError("model.convention: expected \"relative_bounded\" or \"unbounded_rising\", got \"" + c + "\"");
  }
  if (doc.contains("phi0")) model.convention.phi0 = detail::number_at(doc["phi0"], "model.phi0");
  if (doc.contains("G")) {
    model.G = detail::number_at(doc["G"], "model.G");
    if (!(model.G > 0.0)) throw ParseError("model.G: must be positive");
  }
  std::optional<double> ra;
  if (doc.contains("R_a")) ra = detail::number_at(doc["R_a"], "model.R_a");

  const json& terms = detail::require(doc, "terms", "model");
  if (!terms.is_array()) throw ParseError("model.terms: expected an array");
  std::vector<DensityTerm> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = "model.terms[" + std::to_string(i) + "]";
    const json& t = terms[i];
    if (!t.is_object()) throw ParseError(tp + ": expected an object");
    for (const auto& [key, _] : t.items()) {
      if (key != "family" && key != "n" && key != "beta" && key != "coeff") {
        throw ParseError(tp + "." + key + ": unknown field");
      }
    }
    DensityTerm term;
    const json& fam = detail::require(t, "family", tp);
    if (!fam.is_string()) throw ParseError(tp + ".family: expected a string");
    const std::string f = fam.get<std::string>();
    if (f == "pure_radial") {
      term.family = DensityFamily::PureRadial;
    } else if (f == "scaled_radial") {
      term.family = DensityFamily::ScaledRadial;
    } else {
      throw ParseError(tp + ".family: expected \"pure_radial\" or \"scaled_radial\"");
    }
    const json& n = detail::require(t, "n", tp);
    if (!n.is_number_integer()) throw ParseError(tp + ".n: expected a non-negative integer");
    term.n = n.get<int>();
    if (term.n < 0) throw ParseError(tp + ".n: expected a non-negative integer");
    term.beta = t.contains("beta") ? detail::number_at(t["beta"], tp + ".beta") : 1.0;
    term.coeff = detail::parse_coefficient(detail::require(t, "coeff", tp), tp + ".coeff");
    out.push_back(std::move(term));
  }
  // Admissibility and R_a checks raise their own error types.
  model.expansion = DensityExpansion(std::move(out), ra);
  return model;
}

/// Parse a model document from text.
inline ModelDefinition parse_model_spec(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model: invalid JSON: ") + e.what());
  }
  return parse_model_json(doc);
}

inline ModelDefinition load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open model file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model_spec(ss.str());
}

inline nlohmann::json model_to_json(const ModelDefinition& model) {
  nlohmann::json doc;
  if (!model.name.empty()) doc["name"] = model.name;
  doc["convention"] = model.convention.bounded() ? "relative_bounded" : "unbounded_rising";
  doc["phi0"] = model.convention.phi0;
  doc["G"] = model.G;
  if (model.scale_radius()) doc["R_a"] = *model.scale_radius();
  nlohmann::json terms = nlohmann::json::array();
  for (const DensityTerm& t : model.expansion.terms()) {
    terms.push_back({{"family", t.family == DensityFamily::PureRadial ? "pure_radial" : "scaled_radial"},
                     {"n", t.n},
                     {"beta", t.beta},
                     {"coeff", detail::coefficient_to_json(t.coeff)}});
  }
  doc["terms"] = std::move(terms);
  return doc;
}

inline std::string serialize_model_spec(const ModelDefinition& model) {
  return model_to_json(model).dump(2);
}

}  // namespace dfforge
