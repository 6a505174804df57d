#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "padyn/dynamics.hpp"
#include "padyn/padic.hpp"

namespace padyn {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parsed map description. Optional fields are empty when absent.
struct MapDocument {
  int n = 0;
  std::vector<std::string> variables;
  int r = 0;
  AnalyticMap map;
  std::optional<long> prime;
  std::optional<int> precision;
  std::optional<RationalMatrix> symplectic_form;
};

/// Reads a rational from a JSON number or an "a/b" string; errors name `where`.
BigRational rational_from_json(const Json& j, const std::string& where);

/// Terms [{"exponents": [...], "coefficient": "a/b"}, ...] as a series in n variables.
RationalSeries series_from_json(const Json& j, int n, int trunc_degree, const std::string& where);

/// Truncation degree defaults to the largest degree present (at least 1).
MapDocument map_document_from_json(const Json& j, std::optional<int> trunc_degree = std::nullopt);

Json parse_json_text(const std::string& text, const std::string& source);

/// [{"exponents", "numerator", "denominator"}] by ascending degree, x_1-heavy first within a degree.
Json series_to_json(const RationalSeries& s);
Json tuple_to_json(const RationalTuple& t);
Json rational_to_json(const BigRational& q);
Json padic_to_json(const PAdicNumber& x);
Json integers_to_json(const std::vector<BigInt>& v);

}  // namespace padyn
