#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "padyn/cli.hpp"
#include "padyn/eisenstein.hpp"
#include "padyn/linearize.hpp"
#include "padyn/orbit.hpp"
#include "support.hpp"

using namespace padyn;
using testing_support::Gen;
using testing_support::poly;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] AC%d %s (%.2fs)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
  if (!o.ok) ++failures;
}

BigInt residue_mod(const BigRational& c, const BigInt& q) {
  BigInt inv = *inverse_mod(BigInt(c.get_den()), q);
  BigInt r = BigInt(c.get_num()) * inv % q;
  if (r < 0) r += q;
  return r;
}

// Largest 2^-t / |lambda^I - lambda_j|_3 over tail degrees 2..N for lambda = (1, -2, -2).
BigRational homological_oracle(int N) {
  BigRational best = 0;
  const std::vector<BigInt> lam{1, -2, -2};
  for (int t = 2; t <= N; ++t) {
    BigInt power = ipow(BigInt(-2), static_cast<unsigned long>(t));
    for (const auto& l : lam) {
      BigInt diff = power - l;
      BigRational v = BigRational(ipow(3, static_cast<unsigned long>(valuation(diff, BigInt(3))))) /
                      BigRational(ipow(2, static_cast<unsigned long>(t)));
      best = std::max(best, v);
    }
  }
  return best;
}

RationalTuple random_tail_tuple(Gen& g, int N) {
  RationalTuple out;
  for (int j = 0; j < 3; ++j) {
    RationalSeries s(3, N);
    const int terms = static_cast<int>(g.integer(1, 5));
    for (int t = 0; t < terms; ++t) {
      const int tail = static_cast<int>(g.integer(2, N));
      const int a = static_cast<int>(g.integer(0, tail));
      const int head = static_cast<int>(g.integer(0, N - tail));
      s.add_term(std::vector<int>{head, a, tail - a}, g.nonzero_rational(30, 9));
    }
    out.push_back(s);
  }
  return out;
}

BigRational max_minimal_C1(Gen& g, int count, int N) {
  const std::vector<BigRational> lambda{1, -2, -2};
  BigRational worst = 0;
  for (int i = 0; i < count; ++i) {
    RationalTuple gt = random_tail_tuple(g, N);
    RationalTuple w = solve_homological(gt, lambda, 1);
    auto cert = check_norm_bound(gt, w, lambda, 1, BigRational(1, 2), {}, 3);
    auto exact = cert.minimal_C1.exact();
    if (!exact) return -1;
    worst = std::max(worst, *exact);
  }
  return worst;
}

BigRational coeff(const RationalSeries& s, int k) {
  const BigRational* c = s.find(std::vector<int>{k});
  return c ? *c : BigRational(0);
}

std::vector<RationalPoint> diagonal_orbit(const std::vector<long>& lambda, int count) {
  std::vector<RationalPoint> out;
  RationalPoint x(lambda.size(), BigRational(1));
  for (int i = 0; i < count; ++i) {
    out.push_back(x);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] *= lambda[j];
  }
  return out;
}

}  // namespace

int main() {
  report(1, "conjugacy residual vanishes through degree 12 on the fixture suite", [](Outcome& o) {
    auto suite = testing_support::fixture_suite(12);
    o.require(suite.size() >= 6, "suite too small");
    for (const auto& fx : suite) {
      const auto t0 = Clock::now();
      auto c = linearize_order_by_order(fx.map, 12);
      const double dt = seconds_since(t0);
      o.require(tuple_empty(c.residual), fx.name + ": nonzero residual");
      o.require(c.verified_degree == 12, fx.name + ": verified degree " + std::to_string(c.verified_degree));
      o.require(tuple_empty(conjugacy_residual(fx.map.components, c.h, c.eigenvalues)),
                fx.name + ": independent residual is nonzero");
      o.require(dt < 5.0, fx.name + ": took " + std::to_string(dt) + "s");
    }
  });

  report(2, "2x + x^2 is conjugated by exp(x) - 1", [](Outcome& o) {
    auto f = make_map({poly(1, 12, {{"2", {1}}, {"1", {2}}})});
    auto c = linearize_order_by_order(f, 12);
    for (int k = 1; k <= 12; ++k) {
      o.require(coeff(c.h[0], k) == testing_support::factorial_inverse(k),
                "coefficient " + std::to_string(k));
    }
    o.require(coeff(c.h[0], 0) == 0, "constant term");
  });

  report(3, "Newton agrees with order-by-order through degree 16, orders 2,4,8,16", [](Outcome& o) {
    int exact_doubling = 0;
    std::string summary;
    for (const auto& fx : testing_support::fixture_suite(16)) {
      auto reference = linearize_order_by_order(fx.map, 16);
      auto [c, trace] = linearize_newton(fx.map, 16, {});
      o.require(c.h == reference.h, fx.name + ": conjugacies differ");
      std::vector<int> orders;
      for (const auto& it : trace.iterations) orders.push_back(it.vanishing_through);
      o.require(!orders.empty() && orders.back() == 16, fx.name + ": residual does not vanish through 16");
      if (!orders.empty()) o.require(orders.front() >= 2, fx.name + ": first step leaves a quadratic residual");
      for (std::size_t i = 1; i < orders.size(); ++i) {
        o.require(orders[i] >= std::min(2 * orders[i - 1], 16), fx.name + ": vanishing order failed to double");
      }
      if (orders == std::vector<int>{2, 4, 8, 16}) ++exact_doubling;
      summary += " " + std::to_string(orders.size());
    }
    o.require(exact_doubling >= 6, "only " + std::to_string(exact_doubling) + " maps show the sequence 2,4,8,16");
    if (o.ok) o.detail = std::to_string(exact_doubling) + " maps with 2,4,8,16; steps per map" + summary;
  });

  report(4, "homological bound for lambda=(1,-2,-2), p=3 is uniform over random batches", [](Outcome& o) {
    const int N = 8;
    const BigRational oracle = homological_oracle(N);
    Gen g(404);
    BigRational m50 = max_minimal_C1(g, 50, N);
    Gen g2(404);
    BigRational m100 = max_minimal_C1(g2, 100, N);
    o.require(m50 >= 0 && m100 >= 0, "minimal C1 is not an exact rational");
    o.require(m50 <= oracle, "batch of 50 exceeds " + to_string(oracle) + ": " + to_string(m50));
    o.require(m100 <= oracle, "batch of 100 exceeds " + to_string(oracle) + ": " + to_string(m100));
    o.require(m50 <= m100, "doubling the batch lowered the maximum");
    if (o.ok) o.detail = "max C1 " + to_string(m50) + " / " + to_string(m100) + ", bound " + to_string(oracle);
  });

  report(5, "random integral maps keep 1000 orbits in the neighbourhood", [](Outcome& o) {
    Gen g(505);
    const int precision = 20;
    int failures_seen = 0;
    int min_known = precision;
    for (int trial = 0; trial < 1000; ++trial) {
      const long p = g.pick(std::vector<long>{3, 5, 7});
      const int n = static_cast<int>(g.integer(1, 3));
      const int s = static_cast<int>(g.integer(1, 2));
      RationalTuple comps;
      for (int j = 0; j < n; ++j) {
        RationalSeries c(n, 3);
        const int terms = static_cast<int>(g.integer(1, 4));
        for (int t = 0; t < terms; ++t) c.add_term(g.exponents(n, static_cast<int>(g.integer(1, 3))), g.integral_rational(p, 12));
        comps.push_back(c);
      }
      auto f = make_map(comps);
      const BigInt q = ipow(p, static_cast<unsigned long>(s));
      const BigInt big = ipow(p, static_cast<unsigned long>(precision));
      std::vector<BigInt> x;
      PAdicPoint start;
      for (int j = 0; j < n; ++j) {
        x.push_back(q * g.integer(0, 200));
        start.push_back(PAdicNumber::from_integer(x.back(), p, precision));
      }
      auto res = iterate_in_neighbourhood(f, Neighbourhood{p, s, n}, start, 50, precision);
      const std::vector<BigInt> start_mod = [&] {
        std::vector<BigInt> r;
        for (const auto& v : x) r.push_back(v % q);
        return r;
      }();
      for (std::size_t step = 0; step < res.points.size(); ++step) {
        for (int j = 0; j < n; ++j) {
          const auto& c = res.points[step][static_cast<std::size_t>(j)];
          // compare with the integer orbit modulo the digits the iterate claims to know
          const int known = std::min(c.absolute_precision(), precision);
          const BigInt mod = ipow(p, static_cast<unsigned long>(known));
          const BigInt want = x[static_cast<std::size_t>(j)] % mod;
          const BigInt got = c.is_zero() ? BigInt(0) : BigInt(c.residue() % mod);
          min_known = std::min(min_known, known);
          if (known < s || got != want || want % q != start_mod[static_cast<std::size_t>(j)]) ++failures_seen;
        }
        std::vector<BigInt> next;
        for (const auto& comp : comps) {
          BigInt acc = 0;
          comp.for_each([&](Monomial m, const BigRational& coeff) {
            BigInt term = residue_mod(coeff, big);
            for (int k = 0; k < n; ++k) {
              const int e = exponent(m, k);
              for (int r = 0; r < e; ++r) term = term * x[static_cast<std::size_t>(k)] % big;
            }
            acc = (acc + term) % big;
          });
          next.push_back(acc);
        }
        x = std::move(next);
      }
    }
    o.require(failures_seen == 0, std::to_string(failures_seen) + " coordinate mismatches");
    if (o.ok) o.detail = "fewest known digits " + std::to_string(min_known);
  });

  report(6, "sqrt(1+x) through degree 200 with denominator support {2}", [](Outcome& o) {
    const auto t0 = Clock::now();
    XPolynomial F{poly(1, 2, {{"-1", {0}}, {"-1", {1}}}), RationalSeries(1, 2), poly(1, 2, {{"1", {0}}})};
    auto spec = make_algebraic_spec(F, poly(1, 0, {{"1", {0}}}));
    auto phi = coefficients_up_to(spec, 200);
    auto oracle = testing_support::binomial_half(200);
    for (int k = 0; k <= 200; ++k) {
      o.require(coeff(phi, k) == oracle[static_cast<std::size_t>(k)], "coefficient " + std::to_string(k));
    }
    o.require(denominator_support(phi).primes == std::vector<BigInt>{2}, "support differs from {2}");
    o.require(seconds_since(t0) < 2.0, "too slow");
  });

  report(7, "vanishing exponents on 20 planted instances match brute force", [](Outcome& o) {
    Gen g(707);
    const std::vector<long> units{-3, -2, 2, 3, 4, 6, 7, 8, 9, 11, 12, 13};
    for (int trial = 0; trial < 20; ++trial) {
      long b1 = g.pick(units), b2 = g.pick(units);
      while (b2 == b1 || !relation_lattice({b1, b2}).torsion_free) b2 = g.pick(units);
      const int planted = static_cast<int>(g.integer(1, 8));
      VanishingSumInstance inst{{rpow(BigRational(b2), planted), -rpow(BigRational(b1), planted)}, {b1, b2}};
      if (g.coin()) {
        long b3 = g.pick(units);
        while (b3 == b1 || b3 == b2 || b3 == -b1 || b3 == -b2) b3 = g.pick(units);
        std::vector<BigRational> extended = inst.b;
        extended.push_back(b3);
        if (relation_lattice(extended).torsion_free) {
          inst.a.push_back(g.nonzero_rational(5, 1));
          inst.b.push_back(b3);
        }
      }
      auto res = vanishing_exponents(inst, 200);
      std::vector<int> brute;
      for (int s = 1; s <= 200; ++s) {
        BigRational acc = 0;
        for (std::size_t i = 0; i < inst.a.size(); ++i) acc += inst.a[i] * rpow(inst.b[i], s);
        if (sgn(acc) == 0) brute.push_back(s);
      }
      o.require(res.solutions == brute, "instance " + std::to_string(trial) + " disagrees with brute force");
      o.require(res.certificate.separation.properties_hold, "certificate separation fails on instance " + std::to_string(trial));
      for (std::size_t t = 0; t < inst.b.size(); ++t) {
        o.require(separating_polynomial(inst.b, inst.p, t).properties_hold,
                  "separating polynomial fails on instance " + std::to_string(trial));
      }
    }
  });

  report(8, "relation probes on the (2,4) and (2,3) diagonal orbits", [](Outcome& o) {
    const auto t0 = Clock::now();
    auto p24 = relation_probe(diagonal_orbit({2, 4}, 50), 2);
    RationalSeries want(2, 2);
    want.add_term(std::vector<int>{0, 1}, 1);
    want.add_term(std::vector<int>{2, 0}, -1);
    bool found = false;
    for (const auto& rel : p24.relations()) found = found || rel == want || rel == -want;
    o.require(found, "y2 - y1^2 missing from the (2,4) kernel");
    auto p23 = relation_probe(diagonal_orbit({2, 3}, 60), 4);
    o.require(p23.kernel.empty(), "(2,3) kernel is not empty");
    o.require(closure_dimension_estimate({2, 4}, {1, 1}, 60, 2).lower_bound == 1, "(2,4) bound is not 1");
    o.require(closure_dimension_estimate({2, 3}, {1, 1}, 60, 4).lower_bound == 2, "(2,3) bound is not 2");
    o.require(seconds_since(t0) < 5.0, "too slow");
  });

  report(9, "even and odd iterates of (2,3) have the same degree-3 relations", [](Outcome& o) {
    auto f = make_map({poly(2, 2, {{"2", {1, 0}}}), poly(2, 2, {{"3", {0, 1}}})});
    std::vector<int> evens, odds;
    for (int i = 0; i <= 40; ++i) (i % 2 == 0 ? evens : odds).push_back(i);
    auto cmp = union_closure_compare(f, {{1, 1}, {1, 2}}, evens, odds, 3);
    o.require(cmp.equal, "kernels differ");
  });

  report(10, "symplectic fixture scales by -2 with pairs (1,-2)", [](Outcome& o) {
    const std::string doc = R"({"dimension": 4, "fixed_locus_dim": 2, "components": [
      [{"exponents": [1,0,0,0], "coefficient": 1}, {"exponents": [0,0,1,1], "coefficient": 1}],
      [{"exponents": [0,1,0,0], "coefficient": 1}, {"exponents": [0,0,2,0], "coefficient": 1}],
      [{"exponents": [0,0,1,0], "coefficient": -2}, {"exponents": [0,0,1,1], "coefficient": 1}],
      [{"exponents": [0,0,0,1], "coefficient": -2}, {"exponents": [0,0,0,2], "coefficient": 1}]],
      "symplectic_form": [[0,0,1,0],[0,0,0,1],[-1,0,0,0],[0,-1,0,0]]})";
    const std::string path = "acceptance_symplectic.json";
    {
      FILE* fh = std::fopen(path.c_str(), "w");
      std::fputs(doc.c_str(), fh);
      std::fclose(fh);
    }
    const char* argv[] = {"padyn", "analyze", path.c_str()};
    std::ostringstream out, err;
    const int code = cli::run(3, argv, out, err);
    std::remove(path.c_str());
    o.require(code == 0, "analyze failed: " + err.str());
    if (code != 0) return;
    auto s = nlohmann::json::parse(out.str())["result"]["symplectic"];
    o.require(s["scaling"] == "-2", "scaling is not -2");
    o.require(s["scaling_holds"] == true, "scaling identity fails");
    o.require(s["pairing_consistent"] == true, "pairing inconsistent");
    o.require(s["pairs"] == nlohmann::json::parse("[[1,3],[2,4]]"), "unexpected pairs");
    for (const auto& pr : s["eigenvalue_pairs"]) {
      o.require(pr == nlohmann::json::parse(R"(["1","-2"])"), "eigenvalue pair is not (1,-2)");
    }
  });

  report(11, "Gauss norm is multiplicative over Q2 and Q5", [](Outcome& o) {
    const auto t0 = Clock::now();
    Gen g(1111);
    for (int i = 0; i < 500; ++i) {
      const long p = i % 2 == 0 ? 2 : 5;
      const int n = static_cast<int>(g.integer(1, 3));
      auto a = g.series(n, 8, 0, 4, static_cast<int>(g.integer(1, 5)));
      auto b = g.series(n, 8, 0, 4, static_cast<int>(g.integer(1, 5)));
      const BigRational rho = g.pick(std::vector<BigRational>{BigRational(1), BigRational(1, 2), BigRational(5, 4), BigRational(2, 3)});
      auto na = gauss_norm(a, rho, p), nb = gauss_norm(b, rho, p), nab = gauss_norm(a * b, rho, p);
      if (na.zero || nb.zero) {
        o.require(nab.zero, "product of a zero series is nonzero");
        continue;
      }
      o.require(nab.value == na.value * nb.value, "pair " + std::to_string(i) + " is not multiplicative");
    }
    o.require(seconds_since(t0) < 5.0, "too slow");
  });

  return failures == 0 ? 0 : 1;
}
