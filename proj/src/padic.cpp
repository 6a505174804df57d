#include "padyn/padic.hpp"

#include <algorithm>

#include "padyn/errors.hpp"

namespace padyn {

namespace {

BigInt pow_p(long p, int e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::max(e, 0)));
  return r;
}

BigInt mod_nonneg(const BigInt& x, const BigInt& m) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

void check_same_prime(const PAdicNumber& a, const PAdicNumber& b) {
  if (a.prime() != b.prime()) throw InputError("p-adic operands over different primes");
}

}  // namespace

void require_odd_prime(long p) {
  if (p < 3 || p % 2 == 0 || !is_prime(BigInt(p))) {
    throw InputError("prime must be an odd prime, got " + std::to_string(p));
  }
}

PAdicNumber PAdicNumber::zero(long prime, int precision) {
  return PAdicNumber(prime, kInfiniteValuation, 0, precision);
}

PAdicNumber PAdicNumber::one(long prime, int precision) {
  return PAdicNumber(prime, 0, 1, precision);
}

PAdicNumber PAdicNumber::normalized(long prime, int valuation, BigInt value, int absolute_precision,
                                    int relative_cap) {
  if (absolute_precision <= valuation) return zero(prime, absolute_precision);
  BigInt value_mod = mod_nonneg(value, pow_p(prime, absolute_precision - valuation));
  if (value_mod == 0) return zero(prime, absolute_precision);
  BigInt p(prime);
  int w = 0;
  while (mpz_divisible_ui_p(value_mod.get_mpz_t(), static_cast<unsigned long>(prime))) {
    mpz_divexact_ui(value_mod.get_mpz_t(), value_mod.get_mpz_t(), static_cast<unsigned long>(prime));
    ++w;
  }
  int v = valuation + w;
  int rel = std::min(absolute_precision - v, relative_cap);
  return PAdicNumber(prime, v, mod_nonneg(value_mod, pow_p(prime, rel)), rel);
}

PAdicNumber PAdicNumber::from_rational(const BigRational& r, long prime, int precision) {
  require_odd_prime(prime);
  if (precision <= 0) throw InputError("p-adic precision must be positive");
  if (sgn(r) == 0) return zero(prime, precision);
  BigInt p(prime);
  BigInt num = r.get_num(), den = r.get_den();
  int v = 0;
  while (mpz_divisible_p(num.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  while (mpz_divisible_p(den.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    --v;
  }
  BigInt m = pow_p(prime, precision);
  BigInt unit = mod_nonneg(num * *inverse_mod(den, m), m);
  return PAdicNumber(prime, v, unit, precision);
}

PAdicNumber PAdicNumber::from_residue(const BigInt& x, long prime, int absolute_precision) {
  require_odd_prime(prime);
  if (absolute_precision <= 0) throw InputError("p-adic precision must be positive");
  return normalized(prime, 0, x, absolute_precision, absolute_precision);
}

int PAdicNumber::absolute_precision() const {
  return is_zero() ? precision_ : valuation_ + precision_;
}

BigInt PAdicNumber::modulus() const { return pow_p(prime_, precision_); }

BigRational PAdicNumber::norm() const {
  if (is_zero()) return 0;
  return rpow(BigRational(prime_), -valuation_);
}

std::optional<BigRational> PAdicNumber::to_rational() const {
  if (is_zero()) return BigRational(0);
  auto r = rational_reconstruct(unit_, modulus());
  if (!r) return std::nullopt;
  return *r * rpow(BigRational(prime_), valuation_);
}

BigInt PAdicNumber::residue() const {
  if (is_zero()) return 0;
  if (valuation_ < 0) throw InputError("residue of a non-integral p-adic number");
  return unit_ * pow_p(prime_, valuation_);
}

std::string PAdicNumber::to_digit_string() const {
  if (is_zero()) return "0";
  std::vector<unsigned long> digits;  // least significant first
  BigInt u = unit_;
  for (int i = 0; i < precision_; ++i) {
    digits.push_back(mpz_fdiv_q_ui(u.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(prime_)));
  }
  for (int i = 0; i < valuation_; ++i) digits.insert(digits.begin(), 0);
  int point = valuation_ < 0 ? -valuation_ : 0;  // digits right of the point
  auto digit_text = [this](unsigned long d) {
    if (prime_ <= 36) {
      return std::string(1, static_cast<char>(d < 10 ? '0' + d : 'a' + (d - 10)));
    }
    return "[" + std::to_string(d) + "]";
  };
  std::string out;
  for (std::size_t i = digits.size(); i-- > 0;) {
    out += digit_text(digits[i]);
    if (point > 0 && static_cast<int>(i) == point) out += '.';
  }
  if (point > 0 && static_cast<int>(digits.size()) <= point) out = "0." + out;
  return out;
}

PAdicNumber PAdicNumber::reduced(int precision) const {
  if (precision <= 0) throw InputError("p-adic precision must be positive");
  if (is_zero() || precision >= precision_) return *this;
  return PAdicNumber(prime_, valuation_, mod_nonneg(unit_, pow_p(prime_, precision)), precision);
}

PAdicNumber PAdicNumber::operator-() const {
  if (is_zero()) return *this;
  BigInt m = modulus();
  return PAdicNumber(prime_, valuation_, mod_nonneg(-unit_, m), precision_);
}

PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b) {
  check_same_prime(a, b);
  const long p = a.prime_;
  if (a.is_zero() && b.is_zero()) return PAdicNumber::zero(p, std::min(a.precision_, b.precision_));
  if (a.is_zero() || b.is_zero()) {
    const PAdicNumber& z = a.is_zero() ? a : b;
    const PAdicNumber& x = a.is_zero() ? b : a;
    int abs_prec = std::min(z.precision_, x.absolute_precision());
    return PAdicNumber::normalized(p, x.valuation_, x.unit_, abs_prec, x.precision_);
  }
  int v = std::min(a.valuation_, b.valuation_);
  int abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
  BigInt value = a.unit_ * pow_p(p, a.valuation_ - v) + b.unit_ * pow_p(p, b.valuation_ - v);
  return PAdicNumber::normalized(p, v, std::move(value), abs_prec, std::max(a.precision_, b.precision_));
}

PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b) { return a + (-b); }

PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b) {
  check_same_prime(a, b);
  const long p = a.prime_;
  if (a.is_zero() && b.is_zero()) return PAdicNumber::zero(p, a.precision_ + b.precision_);
  if (a.is_zero()) return PAdicNumber::zero(p, a.precision_ + b.valuation_);
  if (b.is_zero()) return PAdicNumber::zero(p, b.precision_ + a.valuation_);
  int rel = std::min(a.precision_, b.precision_);
  return PAdicNumber(p, a.valuation_ + b.valuation_, mod_nonneg(a.unit_ * b.unit_, pow_p(p, rel)), rel);
}

PAdicNumber operator/(const PAdicNumber& a, const PAdicNumber& b) {
  check_same_prime(a, b);
  if (b.is_zero()) throw InputError("p-adic division by zero");
  const long p = a.prime_;
  if (a.is_zero()) return PAdicNumber::zero(p, a.precision_ - b.valuation_);
  int rel = std::min(a.precision_, b.precision_);
  BigInt m = pow_p(p, rel);
  BigInt inv = *inverse_mod(b.unit_, m);
  return PAdicNumber(p, a.valuation_ - b.valuation_, mod_nonneg(a.unit_ * inv, m), rel);
}

bool operator==(const PAdicNumber& a, const PAdicNumber& b) {
  if (a.prime_ != b.prime_) return false;
  return (a - b).is_zero();
}

PAdicNumber PAdicNumber::pow(unsigned long e) const {
  PAdicNumber result = one(prime_, precision_);
  PAdicNumber base = *this;
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

PAdicNumber padic_log(const PAdicNumber& u) {
  if (!u.is_unit()) throw InputError("padic_log requires a unit argument");
  const long p = u.prime();
  const int abs_prec = u.absolute_precision();
  PAdicNumber x = u - PAdicNumber::one(p, u.precision());
  if (x.is_zero()) return PAdicNumber::zero(p, abs_prec);
  const int vx = x.valuation();
  if (vx < 1) throw InputError("padic_log diverges: u - 1 is a unit");

  const BigInt m = pow_p(p, abs_prec);
  const BigInt xr = x.residue();
  BigInt power = 1;
  BigInt sum = 0;
  for (long k = 1;; ++k) {
    power *= xr;
    int e = 0;
    long k_unit = k;
    while (k_unit % p == 0) {
      k_unit /= p;
      ++e;
    }
    // Terms of valuation >= abs_prec vanish; the bound k*vx - log_p(k) is increasing.
    int floor_log = 0;
    for (long t = k; t >= p; t /= p) ++floor_log;
    if (static_cast<long>(vx) * k - floor_log >= abs_prec) break;
    if (static_cast<long>(vx) * k - e >= abs_prec) continue;
    BigInt term;
    mpz_divexact(term.get_mpz_t(), power.get_mpz_t(), pow_p(p, e).get_mpz_t());
    term = mod_nonneg(term * *inverse_mod(BigInt(k_unit), m), m);
    if (k % 2 == 0) term = -term;
    sum += term;
  }
  return PAdicNumber::from_residue(mod_nonneg(sum, m), p, abs_prec);
}

PAdicNumber padic_exp(const PAdicNumber& x) {
  const long p = x.prime();
  const int abs_prec = x.absolute_precision();
  if (abs_prec <= 0) throw PrecisionError("padic_exp argument carries no precision");
  if (x.is_zero()) return PAdicNumber::one(p, abs_prec);
  const int vx = x.valuation();
  if (vx < 1) throw InputError("padic_exp diverges: valuation below 1");

  const BigInt m = pow_p(p, abs_prec);
  const BigInt xr = x.residue();
  BigInt power = 1;
  BigInt factorial_unit = 1;
  int factorial_val = 0;
  BigInt sum = 1;
  for (long k = 1;; ++k) {
    power *= xr;
    long k_unit = k;
    while (k_unit % p == 0) {
      k_unit /= p;
      ++factorial_val;
    }
    factorial_unit = mod_nonneg(factorial_unit * k_unit, m);
    // v(k!) <= (k-1)/(p-1), so k*vx - (k-1)/(p-1) bounds every later term from below.
    if (static_cast<long>(vx) * k - (k - 1) / (p - 1) >= abs_prec) break;
    if (static_cast<long>(vx) * k - factorial_val >= abs_prec) continue;
    BigInt term;
    mpz_divexact(term.get_mpz_t(), power.get_mpz_t(), pow_p(p, factorial_val).get_mpz_t());
    sum += mod_nonneg(term * *inverse_mod(factorial_unit, m), m);
  }
  return PAdicNumber::from_residue(mod_nonneg(sum, m), p, abs_prec);
}

int stabilizing_exponent(const PAdicNumber& b) {
  if (!b.is_unit()) throw InputError("stabilizing_exponent requires a unit");
  const long p = b.prime();
  BigInt r = mod_nonneg(b.unit(), BigInt(p));
  const unsigned long base = r.get_ui();
  unsigned long acc = base;
  for (int m = 1; m < p; ++m) {
    if (acc == 1) return m;
    acc = (acc * base) % static_cast<unsigned long>(p);
  }
  throw InputError("stabilizing_exponent: residue is not invertible");
}

}  // namespace padyn
