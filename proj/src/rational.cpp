#include "padyn/rational.hpp"

#include <algorithm>
#include <cctype>

#include "padyn/errors.hpp"

namespace padyn {

BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InputError("zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) throw InputError("malformed rational '" + std::string(whole) + "'");
  std::size_t start = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (start == text.size()) throw InputError("malformed rational '" + std::string(whole) + "'");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw InputError("malformed rational '" + std::string(whole) + "'");
    }
  }
  std::string digits(text[0] == '+' ? text.substr(1) : text);
  return BigInt(digits, 10);
}

}  // namespace

BigRational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  std::string_view t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string_view::npos) return BigRational(parse_integer(t, text));
  BigInt num = parse_integer(trim(t.substr(0, slash)), text);
  BigInt den = parse_integer(trim(t.substr(slash + 1)), text);
  return make_rational(num, den);
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRational& x) { return x.get_str(); }

int valuation(const BigInt& x, const BigInt& p) {
  if (x == 0) throw InputError("valuation of zero");
  BigInt y = x;
  int v = 0;
  while (mpz_divisible_p(y.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(y.get_mpz_t(), y.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

int valuation(const BigRational& x, const BigInt& p) {
  if (sgn(x) == 0) throw InputError("valuation of zero");
  return valuation(BigInt(x.get_num()), p) - valuation(BigInt(x.get_den()), p);
}

BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

BigRational rpow(const BigRational& base, long exp) {
  if (exp < 0) {
    if (sgn(base) == 0) throw InputError("zero to a negative power");
    BigRational inv = 1 / base;
    return rpow(inv, -exp);
  }
  BigInt num = ipow(base.get_num(), static_cast<unsigned long>(exp));
  BigInt den = ipow(base.get_den(), static_cast<unsigned long>(exp));
  BigRational r(num, den);
  return r;  // already reduced: powers of coprime integers stay coprime
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0;
}

BigInt next_prime(const BigInt& n) {
  BigInt r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace {

BigInt pollard_brent(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto step = [&](const BigInt& v) {
      BigInt t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = step(y);
          BigInt d = x - y;
          q = q * abs(d) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = step(ys);
        BigInt d = x - ys;
        d = abs(d);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_brent(n);
  factor_into(d, out);
  factor_into(BigInt(n / d), out);
}

}  // namespace

std::vector<std::pair<BigInt, int>> factor(const BigInt& n) {
  if (n == 0) throw InputError("factor of zero");
  BigInt m = abs(n);
  std::vector<BigInt> primes;
  for (unsigned long p = 2; p < 1000 && m > 1; p += (p == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      primes.emplace_back(p);
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
  }
  factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<BigInt, int>> result;
  for (const auto& p : primes) {
    if (!result.empty() && result.back().first == p) {
      ++result.back().second;
    } else {
      result.emplace_back(p, 1);
    }
  }
  return result;
}

std::optional<BigInt> inverse_mod(const BigInt& a, const BigInt& m) {
  BigInt r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) return std::nullopt;
  return r;
}

std::optional<BigRational> rational_reconstruct(const BigInt& u, const BigInt& m) {
  BigInt bound;
  BigInt half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  BigInt r0 = m, r1 = u % m;
  if (r1 < 0) r1 += m;
  BigInt t0 = 0, t1 = 1;
  while (r1 > bound) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    BigInt t2 = t0 - q * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  return make_rational(r1, t1);
}

}  // namespace padyn
