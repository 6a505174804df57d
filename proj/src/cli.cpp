#include "padyn/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "padyn/eisenstein.hpp"
#include "padyn/errors.hpp"
#include "padyn/json_io.hpp"
#include "padyn/linearize.hpp"
#include "padyn/orbit.hpp"

namespace padyn::cli {

namespace {

struct Options {
  std::string command;
  std::string input = "-";
  std::optional<long> prime;
  std::optional<int> precision;
  int degree = 8;
  int smax = 200;
  std::string out_path;
  std::string format = "json";
};

Json read_document(const std::string& path) {
  std::stringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    buf << in.rdbuf();
  }
  return parse_json_text(buf.str(), path == "-" ? "<stdin>" : path);
}

Json rationals_to_json(const std::vector<BigRational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

std::vector<BigRational> rationals_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<BigRational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<RationalPoint> points_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array of points");
  std::vector<RationalPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rationals_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

int int_field(const Json& doc, const char* key, int fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer()) throw InputError(std::string("document.") + key + ": expected an integer");
  return doc[key].get<int>();
}

Json gauss_norm_to_json(const GaussNorm& g) {
  if (g.zero) return {{"zero", true}};
  return {{"zero", false}, {"value", to_string(g.value)}, {"valuation", g.valuation}, {"degree", g.degree}};
}

Json conjugacy_to_json(const ConjugacyResult& c) {
  return {{"eigenvalues", rationals_to_json(c.eigenvalues)},
          {"h", tuple_to_json(c.h)},
          {"h_inverse", tuple_to_json(c.h_inverse)},
          {"verified_degree", c.verified_degree},
          {"residual_zero", tuple_empty(c.residual)},
          {"denominator_primes", integers_to_json(c.denominator_primes)}};
}

long choose_prime(const Options& opt, const std::optional<long>& doc_prime, const AnalyticMap& f) {
  if (opt.prime) return *opt.prime;
  if (doc_prime) return *doc_prime;
  return default_prime(f, rational_eigenvalues(jacobian_at_origin(f)).eigenvalues);
}

Json cmd_analyze(const Options& opt, const Json& doc) {
  MapDocument md = map_document_from_json(doc);
  EigenData eig = rational_eigenvalues(jacobian_at_origin(md.map));
  Json out;
  out["eigenvalues"] = rationals_to_json(eig.eigenvalues);
  out["semisimple"] = eig.semisimple;
  Json res = Json::array();
  for (const auto& r : enumerate_resonances(eig.eigenvalues, md.r, opt.degree)) {
    res.push_back({{"exponents", r.exponents}, {"component", r.component + 1}});
  }
  out["resonances"] = res;
  RelationLattice lat = relation_lattice(eig.eigenvalues);
  Json basis = Json::array();
  for (const auto& row : lat.basis) basis.push_back(integers_to_json(row));
  out["relation_lattice"] = {{"rank", lat.rank}, {"basis", basis}, {"torsion_free", lat.torsion_free},
                             {"within_bound", lat.within_bound}, {"primes", integers_to_json(lat.primes)}};
  out["fixed_locus_dim"] = md.r;
  out["prime"] = choose_prime(opt, md.prime, md.map);
  if (md.symplectic_form) {
    const RationalMatrix& sigma = *md.symplectic_form;
    const RationalMatrix M = jacobian_at_origin(md.map);
    const RationalMatrix lhs = matmul(matmul(transpose(M), sigma), M);
    std::optional<BigRational> mu;
    for (std::size_t i = 0; i < sigma.size() && !mu; ++i) {
      for (std::size_t j = 0; j < sigma.size() && !mu; ++j) {
        if (sgn(sigma[i][j]) != 0) mu = lhs[i][j] / sigma[i][j];
      }
    }
    if (!mu) throw InputError("document.symplectic_form: the form is zero");
    SymplecticReport rep = symplectic_scaling_check(M, sigma, *mu);
    Json pairs = Json::array(), values = Json::array();
    for (const auto& [a, b] : rep.pairs) pairs.push_back({a + 1, b + 1});
    for (const auto& [a, b] : rep.eigenvalue_pairs) values.push_back({to_string(a), to_string(b)});
    out["symplectic"] = {{"scaling", to_string(*mu)}, {"scaling_holds", rep.scaling_holds}, {"pairs", pairs},
                         {"eigenvalue_pairs", values}, {"pairing_consistent", rep.pairing_consistent}};
  }
  return out;
}

Json cmd_linearize(const Options& opt, const Json& doc) {
  MapDocument md = map_document_from_json(doc, opt.degree);
  return conjugacy_to_json(linearize_order_by_order(md.map, opt.degree));
}

Json cmd_newton(const Options& opt, const Json& doc) {
  MapDocument md = map_document_from_json(doc, opt.degree);
  DiophantineParams params;
  if (doc.contains("diophantine")) {
    const Json& d = doc["diophantine"];
    if (d.contains("C")) params.C = rational_from_json(d["C"], "document.diophantine.C");
    if (d.contains("beta")) params.beta = rational_from_json(d["beta"], "document.diophantine.beta");
  }
  long prime = opt.prime ? *opt.prime : md.prime.value_or(0);
  auto [conj, trace] = linearize_newton(md.map, opt.degree, params, prime);
  Json out = conjugacy_to_json(conj);
  Json its = Json::array();
  for (const auto& it : trace.iterations) {
    its.push_back({{"index", it.index},
                   {"radius", to_string(it.radius)},
                   {"residual_order", it.residual_order},
                   {"delta_order", it.delta_order},
                   {"vanishing_through", it.vanishing_through},
                   {"residual_norm", gauss_norm_to_json(it.residual_norm)},
                   {"delta_norm", gauss_norm_to_json(it.delta_norm)},
                   {"bound_passes", it.bound.passes},
                   {"minimal_C1", it.bound.minimal_C1.to_string()}});
  }
  out["newton"] = {{"iterations", its},
                   {"C1", to_string(trace.C1)},
                   {"prime", trace.prime},
                   {"rescale_exponent", trace.rescale_exponent},
                   {"bound_violations", trace.bound_violations}};
  return out;
}

Json cmd_eisenstein(const Options& opt, const Json& doc) {
  const int n = doc.contains("dimension") ? int_field(doc, "dimension", 1) : 1;
  const int t = int_field(doc, "seed_degree", 0);
  if (t < 0 || t > opt.degree) throw InputError("document.seed_degree: must lie in 0..degree");
  if (!doc.contains("F") || !doc["F"].is_array()) throw InputError("document: missing array field 'F'");
  XPolynomial F;
  int maxdeg = opt.degree;
  for (std::size_t k = 0; k < doc["F"].size(); ++k) {
    F.push_back(series_from_json(doc["F"][k], n, kMaxTruncation, "document.F[" + std::to_string(k) + "]"));
    maxdeg = std::max(maxdeg, F.back().max_degree());
  }
  for (auto& c : F) c = c.truncated(maxdeg);
  if (!doc.contains("seed")) throw InputError("document: missing field 'seed'");
  RationalSeries seed = series_from_json(doc["seed"], n, t, "document.seed");
  AlgebraicSeriesSpec spec = make_algebraic_spec(std::move(F), std::move(seed));
  RationalSeries phi = coefficients_up_to(spec, opt.degree);
  DenominatorSupport sup = denominator_support(phi);
  return {{"vanishing_order", spec.s},
          {"pivot", to_string(spec.pivot)},
          {"pivot_exponents", exponents_of(spec.pivot_monomial, n)},
          {"coefficients", series_to_json(phi)},
          {"prime_support", integers_to_json(sup.primes)},
          {"N", to_string(sup.radical)}};
}

Json cmd_orbit(const Options& opt, const Json& doc) {
  MapDocument md = map_document_from_json(doc);
  const long p = choose_prime(opt, md.prime, md.map);
  const int prec = opt.precision.value_or(md.precision.value_or(32));
  Neighbourhood U{p, int_field(doc, "level", 1), md.n};
  const int steps = int_field(doc, "steps", 10);
  if (!doc.contains("point")) throw InputError("document: missing field 'point'");
  PAdicPoint x;
  for (const auto& c : rationals_from_json(doc["point"], "document.point")) x.push_back(PAdicNumber::from_rational(c, p, prec));
  if (static_cast<int>(x.size()) != md.n) throw InputError("document.point: expected " + std::to_string(md.n) + " coordinates");
  OrbitResult res = iterate_in_neighbourhood(md.map, U, x, steps, prec);
  Json pts = Json::array();
  for (const auto& pt : res.points) {
    Json row = Json::array();
    for (const auto& c : pt) row.push_back(padic_to_json(c));
    pts.push_back(row);
  }
  return {{"prime", p},          {"level", U.s},
          {"precision", prec},   {"orbit", pts},
          {"unit_jacobian", res.unit_jacobian}, {"injective_on_samples", res.injective_on_samples},
          {"sampled_pairs", res.sampled_pairs}};
}

Json probe_to_json(const RelationProbe& p) {
  Json rel = Json::array();
  for (const auto& s : p.relations()) rel.push_back(series_to_json(s));
  return {{"kernel_dimension", p.kernel.size()}, {"relations", rel}, {"underdetermined", p.underdetermined}};
}

Json cmd_probe(const Options& opt, const Json& doc) {
  if (doc.contains("points")) return probe_to_json(relation_probe(points_from_json(doc["points"], "document.points"), opt.degree));
  if (!doc.contains("eigenvalues") || !doc.contains("start")) {
    throw InputError("document: expected 'points' or both 'eigenvalues' and 'start'");
  }
  auto lambda = rationals_from_json(doc["eigenvalues"], "document.eigenvalues");
  auto start = rationals_from_json(doc["start"], "document.start");
  ClosureEstimate est = closure_dimension_estimate(lambda, start, int_field(doc, "samples", 60), opt.degree);
  Json ex = Json::array();
  for (const auto& e : est.exponents) ex.push_back(integers_to_json(e));
  return {{"lower_bound", est.lower_bound},
          {"estimate", est.estimate},
          {"squared", est.squared},
          {"monomial_change", ex},
          {"multipliers", rationals_to_json(est.multipliers)},
          {"orbit_probe", probe_to_json(est.orbit_probe)}};
}

Json cmd_vanishing(const Options& opt, const Json& doc) {
  VanishingSumInstance inst;
  if (!doc.contains("a") || !doc.contains("b")) throw InputError("document: expected fields 'a' and 'b'");
  inst.a = rationals_from_json(doc["a"], "document.a");
  inst.b = rationals_from_json(doc["b"], "document.b");
  inst.p = opt.prime.value_or(int_field(doc, "prime", 5));
  inst.precision = opt.precision.value_or(int_field(doc, "precision", 32));
  VanishingResult res = vanishing_exponents(inst, opt.smax);
  Json logs = Json::array();
  for (const auto& c : res.certificate.c) logs.push_back(padic_to_json(c));
  return {{"solutions", res.solutions},
          {"horizon", opt.smax},
          {"certificate",
           {{"M", res.certificate.M},
            {"logs", logs},
            {"torsion_free", res.certificate.torsion_free},
            {"leading_block", res.certificate.leading_block},
            {"separation_level", res.certificate.separation.level},
            {"separation_holds", res.certificate.separation.properties_hold}}}};
}

void write_text(const Json& j, std::ostream& os, const std::string& indent) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object()) {
      os << indent << it.key() << ":\n";
      write_text(*it, os, indent + "  ");
    } else {
      os << indent << it.key() << ": " << it->dump() << "\n";
    }
  }
}

void emit(const Options& opt, const Json& report, std::ostream& out) {
  std::ostringstream body;
  if (opt.format == "text") {
    write_text(report, body, "");
  } else {
    body << report.dump(2) << "\n";
  }
  if (opt.out_path.empty()) {
    out << body.str();
  } else {
    std::ofstream f(opt.out_path);
    if (!f) throw InputError("cannot write " + opt.out_path);
    f << body.str();
  }
}

const char* obstruction_kind(const ObstructionError& e) {
  if (dynamic_cast<const IrrationalEigenvalue*>(&e)) return "IrrationalEigenvalue";
  if (dynamic_cast<const NotSemisimple*>(&e)) return "NotSemisimple";
  if (dynamic_cast<const EigenvaluesVary*>(&e)) return "EigenvaluesVary";
  if (dynamic_cast<const TorsionError*>(&e)) return "TorsionError";
  if (dynamic_cast<const ResonantMonomial*>(&e)) return "ResonantMonomial";
  return "Obstruction";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"p-adic linearization and orbit analysis of self-maps fixing a point"};
  app.require_subcommand(1, 1);
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"analyze", "eigenvalues, resonances, multiplier lattice and symplectic scaling"},
      {"linearize", "order-by-order linearizing conjugacy"},
      {"newton", "Newton iteration for the conjugacy with norm bookkeeping"},
      {"eisenstein", "coefficients of an algebraic power series and their prime support"},
      {"orbit", "orbit of a point in an invariant p-adic neighbourhood"},
      {"probe", "polynomial relations on points or on a diagonal orbit"},
      {"vanishing", "exponents where a finite exponential sum vanishes"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("document", opt.input, "input JSON document, - for stdin");
    sub->add_option("--prime", opt.prime, "odd prime");
    sub->add_option("--precision", opt.precision, "p-adic digits (default 32)");
    sub->add_option("--degree", opt.degree, "truncation degree (default 8)")->check(CLI::Range(0, kMaxTruncation));
    sub->add_option("--smax", opt.smax, "exponent horizon for vanishing (default 200)")->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out_path, "write the report here instead of stdout");
    sub->add_option("--format", opt.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->callback([&opt, name = std::string(name)] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = opt.command;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  };
  try {
    if (opt.precision && *opt.precision < 1) throw InputError("--precision must be positive");
    const Json doc = read_document(opt.input);
    if (!doc.is_object()) throw InputError("document: expected a JSON object");
    Json result;
    if (opt.command == "analyze") result = cmd_analyze(opt, doc);
    else if (opt.command == "linearize") result = cmd_linearize(opt, doc);
    else if (opt.command == "newton") result = cmd_newton(opt, doc);
    else if (opt.command == "eisenstein") result = cmd_eisenstein(opt, doc);
    else if (opt.command == "orbit") result = cmd_orbit(opt, doc);
    else if (opt.command == "probe") result = cmd_probe(opt, doc);
    else result = cmd_vanishing(opt, doc);
    report["result"] = result;
    report["timing_ms"] = elapsed();
    emit(opt, report, out);
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ObstructionError& e) {
    const char* kind = obstruction_kind(e);
    err << e.what() << "\n";
    Json info = {{"kind", kind}, {"message", e.what()}};
    if (auto* r = dynamic_cast<const ResonantMonomial*>(&e)) {
      info["exponents"] = r->exponents();
      info["component"] = r->component() + 1;
    }
    report["obstruction"] = info;
    report["timing_ms"] = elapsed();
    try {
      emit(opt, report, out);
    } catch (const InputError& w) {
      err << "error: " << w.what() << "\n";
      return 1;
    }
    return 2;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace padyn::cli
