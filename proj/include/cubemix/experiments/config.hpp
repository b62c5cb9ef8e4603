#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubemix/errors.hpp"
#include "cubemix/numerics/scalar.hpp"
#include "cubemix/process/law.hpp"

namespace cubemix {

using Json = nlohmann::json;

inline Rational json_rational(const Json& j, const std::string& field) {
  try {
    if (j.is_string()) return rational_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_float()) {
      // decimal text keeps 0.6 meaning 3/5, not its binary approximation
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12f", j.get<double>());
      return rational_from_string(buf);
    }
  } catch (const std::exception&) {
    throw ConfigError(field + ": not a valid rational");
  }
  throw ConfigError(field + ": expected a rational (string like \"3/5\" or number)");
}

inline std::int64_t json_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field + ": expected an integer");
  return j.get<std::int64_t>();
}

inline double json_double(const Json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field + ": expected a number");
  return j.get<double>();
}

inline UpdateLaw parse_law(const Json& j, std::int64_t n) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("law: expected an object with a \"type\" field");
  const std::string type = j.at("type").get<std::string>();
  if (type == "subset-uniform") return SubsetUniform{json_int(j.at("z"), "law.z")};
  if (type == "iid-bernoulli") return IidBernoulli{json_rational(j.at("alpha"), "law.alpha")};
  if (type == "definetti-discrete") {
    DeFinettiDiscrete law;
    if (!j.contains("atoms") || !j.at("atoms").is_array())
      throw ConfigError("law.atoms: expected an array");
    for (const auto& a : j.at("atoms"))
      law.atoms.push_back({json_rational(a.at("alpha"), "law.atoms[].alpha"),
                           json_rational(a.at("weight"), "law.atoms[].weight")});
    return law;
  }
  if (type == "definetti-lebesgue") return DeFinettiLebesgue{};
  if (type == "block-update") return BlockUpdate{json_int(j.at("beta"), "law.beta")};
  if (type == "explicit") {
    ExplicitLaw law;
    if (!j.contains("pmf") || !j.at("pmf").is_array())
      throw ConfigError("law.pmf: expected an array of 2^N rationals");
    for (const auto& v : j.at("pmf")) law.pmf.push_back(json_rational(v, "law.pmf[]"));
    if (n > 0 && law.pmf.size() != (std::size_t{1} << n))
      throw ConfigError("law.pmf: must have exactly 2^N entries");
    return law;
  }
  throw ConfigError("law.type: unknown law '" + type + "'");
}

inline ProcessSpec parse_spec(const Json& params) {
  ProcessSpec spec;
  if (!params.contains("n")) throw ConfigError("n: required");
  spec.n = json_int(params.at("n"), "n");
  if (!params.contains("p")) throw ConfigError("p: required");
  spec.p = json_rational(params.at("p"), "p");
  if (!params.contains("law")) throw ConfigError("law: required");
  spec.law = parse_law(params.at("law"), spec.n);
  validate(spec);
  return spec;
}

// The z-rule menu for N-grids: a named rule instead of free-form code.
//   {"rule": "const", "k": 1}
//   {"rule": "round-alpha-n", "alpha": 0.3}
//   {"rule": "round-pn-plus-v-sqrt", "v": 1}
struct ZRule {
  enum Kind { Const, RoundAlphaN, RoundPnPlusVSqrt } kind = Const;
  std::int64_t k = 1;
  double alpha = 0;
  double v = 0;

  std::int64_t resolve(std::int64_t n, const Rational& p) const {
    double z = 0;
    switch (kind) {
      case Const: return k;
      case RoundAlphaN: z = alpha * static_cast<double>(n); break;
      case RoundPnPlusVSqrt: {
        const double pd = to_double(p);
        const double np = pd * static_cast<double>(n);
        z = np + v * std::sqrt(np * (1.0 - pd));
        break;
      }
    }
    const auto r = static_cast<std::int64_t>(std::floor(z + 0.5));
    return std::min<std::int64_t>(n, std::max<std::int64_t>(1, r));
  }
};

inline ZRule parse_z_rule(const Json& j) {
  if (!j.is_object() || !j.contains("rule"))
    throw ConfigError("z_rule: expected an object with a \"rule\" field");
  const std::string rule = j.at("rule").get<std::string>();
  ZRule out;
  if (rule == "const") {
    out.kind = ZRule::Const;
    out.k = json_int(j.at("k"), "z_rule.k");
  } else if (rule == "round-alpha-n") {
    out.kind = ZRule::RoundAlphaN;
    out.alpha = json_double(j.at("alpha"), "z_rule.alpha");
  } else if (rule == "round-pn-plus-v-sqrt") {
    out.kind = ZRule::RoundPnPlusVSqrt;
    out.v = json_double(j.at("v"), "z_rule.v");
  } else {
    throw ConfigError("z_rule.rule: unknown rule '" + rule + "'");
  }
  return out;
}

inline std::vector<std::int64_t> parse_n_grid(const Json& params) {
  std::vector<std::int64_t> grid;
  if (params.contains("n_grid")) {
    for (const auto& v : params.at("n_grid")) grid.push_back(json_int(v, "n_grid[]"));
  } else if (params.contains("n")) {
    grid.push_back(json_int(params.at("n"), "n"));
  } else {
    throw ConfigError("n_grid: required (or a single n)");
  }
  if (grid.empty()) throw ConfigError("n_grid: must be nonempty");
  return grid;
}

inline ScalarMode parse_mode(const std::string& s) {
  if (s == "exact") return ScalarMode::exact();
  if (s == "logfloat") return ScalarMode::log_float();
  throw ConfigError("mode: expected \"exact\" or \"logfloat\"");
}

}  // namespace cubemix
