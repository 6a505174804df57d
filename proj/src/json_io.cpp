#include "padyn/json_io.hpp"

#include <algorithm>

#include "padyn/errors.hpp"

namespace padyn {

namespace {

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw InputError(where + ": expected an integer");
  return j.get<int>();
}

}  // namespace

BigRational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return BigRational(std::to_string(j.get<long long>()));
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": expected an integer or a rational string such as \"-3/4\"");
}

RationalSeries series_from_json(const Json& j, int n, int trunc_degree, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of terms");
  RationalSeries s(n, trunc_degree);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string at = where + "[" + std::to_string(k) + "]";
    const Json& e = require(j[k], "exponents", at);
    if (!e.is_array() || static_cast<int>(e.size()) != n) {
      throw InputError(at + ".exponents: expected " + std::to_string(n) + " exponents");
    }
    std::vector<int> exps;
    int deg = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      int v = int_from_json(e[i], at + ".exponents[" + std::to_string(i) + "]");
      if (v < 0 || v > 255) throw InputError(at + ".exponents: exponent out of range");
      exps.push_back(v);
      deg += v;
    }
    if (deg > trunc_degree) continue;
    s.add_term(exps, rational_from_json(require(j[k], "coefficient", at), at + ".coefficient"));
  }
  return s;
}

MapDocument map_document_from_json(const Json& j, std::optional<int> trunc_degree) {
  MapDocument doc;
  doc.n = int_from_json(require(j, "dimension", "document"), "document.dimension");
  if (doc.n < 1 || doc.n > kMaxVariables) throw InputError("document.dimension: must be between 1 and 8");
  if (j.contains("variables")) {
    const Json& v = j["variables"];
    if (!v.is_array() || static_cast<int>(v.size()) != doc.n) throw InputError("document.variables: expected one name per dimension");
    for (const auto& name : v) {
      if (!name.is_string()) throw InputError("document.variables: names must be strings");
      doc.variables.push_back(name.get<std::string>());
    }
  } else {
    for (int i = 1; i <= doc.n; ++i) doc.variables.push_back("x" + std::to_string(i));
  }
  if (j.contains("fixed_locus_dim")) doc.r = int_from_json(j["fixed_locus_dim"], "document.fixed_locus_dim");
  if (j.contains("prime")) doc.prime = int_from_json(j["prime"], "document.prime");
  if (j.contains("precision")) doc.precision = int_from_json(j["precision"], "document.precision");

  const Json& comps = require(j, "components", "document");
  if (!comps.is_array() || static_cast<int>(comps.size()) != doc.n) {
    throw InputError("document.components: expected " + std::to_string(doc.n) + " components");
  }
  int N = 1;
  if (trunc_degree) {
    N = *trunc_degree;
  } else {
    for (const auto& c : comps) {
      if (!c.is_array()) continue;
      for (const auto& t : c) {
        if (!t.is_object() || !t.contains("exponents") || !t["exponents"].is_array()) continue;
        int d = 0;
        for (const auto& e : t["exponents"]) d += e.is_number_integer() ? e.get<int>() : 0;
        N = std::max(N, d);
      }
    }
  }
  if (N < 1 || N > kMaxTruncation) throw InputError("truncation degree out of range");
  RationalTuple components;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    components.push_back(series_from_json(comps[i], doc.n, N, "document.components[" + std::to_string(i) + "]"));
  }
  try {
    doc.map = make_map(std::move(components), doc.r);
  } catch (const InputError& e) {
    throw InputError(std::string("document.components: ") + e.what());
  }

  if (j.contains("symplectic_form")) {
    const Json& s = j["symplectic_form"];
    if (!s.is_array() || static_cast<int>(s.size()) != doc.n) throw InputError("document.symplectic_form: expected an n x n matrix");
    RationalMatrix m;
    for (std::size_t r = 0; r < s.size(); ++r) {
      const std::string at = "document.symplectic_form[" + std::to_string(r) + "]";
      if (!s[r].is_array() || static_cast<int>(s[r].size()) != doc.n) throw InputError(at + ": expected " + std::to_string(doc.n) + " entries");
      std::vector<BigRational> row;
      for (std::size_t c = 0; c < s[r].size(); ++c) row.push_back(rational_from_json(s[r][c], at + "[" + std::to_string(c) + "]"));
      m.push_back(std::move(row));
    }
    doc.symplectic_form = std::move(m);
  }
  return doc;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json rational_to_json(const BigRational& q) { return to_string(q); }

Json series_to_json(const RationalSeries& s) {
  Json out = Json::array();
  const int n = s.num_vars();
  for (int d = 0; d <= s.trunc_degree(); ++d) {
    const auto& L = s.layer(d);
    for (auto it = L.rbegin(); it != L.rend(); ++it) {
      out.push_back({{"exponents", exponents_of(it->first, n)},
                     {"numerator", to_string(BigInt(it->second.get_num()))},
                     {"denominator", to_string(BigInt(it->second.get_den()))}});
    }
  }
  return out;
}

Json tuple_to_json(const RationalTuple& t) {
  Json out = Json::array();
  for (const auto& s : t) out.push_back(series_to_json(s));
  return out;
}

Json padic_to_json(const PAdicNumber& x) { return x.to_digit_string(); }

Json integers_to_json(const std::vector<BigInt>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

}  // namespace padyn
