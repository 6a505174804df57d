#pragma once

#include <limits>
#include <optional>
#include <string>

#include "padyn/rational.hpp"

namespace padyn {

/// Element of Q_p with capped relative precision, stored as p^valuation * unit.
///
/// For a nonzero value, `precision()` is the number of significant p-adic
/// digits: the unit is known modulo p^precision. Zero has infinite valuation
/// and `precision()` then records the absolute precision to which it is known
/// to vanish. Only odd primes are accepted.
///
/// Arithmetic follows the absolute-precision model: a result is never
/// reported more precisely than its operands justify. Sums keep the smaller
/// absolute precision; products and quotients keep the smaller relative one.
class PAdicNumber {
 public:
  static constexpr int kInfiniteValuation = std::numeric_limits<int>::max();

  static PAdicNumber zero(long prime, int precision);
  static PAdicNumber one(long prime, int precision);
  static PAdicNumber from_rational(const BigRational& r, long prime, int precision);
  static PAdicNumber from_integer(const BigInt& x, long prime, int precision) {
    return from_rational(BigRational(x), prime, precision);
  }
  /// Value known exactly modulo p^absolute_precision (x is any integer representative).
  static PAdicNumber from_residue(const BigInt& x, long prime, int absolute_precision);

  long prime() const { return prime_; }
  int valuation() const { return valuation_; }
  const BigInt& unit() const { return unit_; }
  int precision() const { return precision_; }
  /// Valuation + precision for nonzero values, the known vanishing order for zero.
  int absolute_precision() const;

  bool is_zero() const { return valuation_ == kInfiniteValuation; }
  bool is_unit() const { return valuation_ == 0; }
  /// |x|_p = p^-valuation, and 0 for zero.
  BigRational norm() const;

  /// Smallest-height rational congruent to the value, when one exists within the
  /// precision bound.
  std::optional<BigRational> to_rational() const;
  /// The value as an integer modulo p^absolute_precision (requires valuation >= 0).
  BigInt residue() const;
  /// Base-p digits of the residue, most significant first ('0'-'9', 'a'-'z';
  /// bracketed decimal digits for p > 36). Negative valuations print a point.
  std::string to_digit_string() const;

  /// Same value with relative precision reduced to at most `precision`.
  PAdicNumber reduced(int precision) const;

  PAdicNumber operator-() const;
  friend PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b);
  friend PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b);
  friend PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b);
  friend PAdicNumber operator/(const PAdicNumber& a, const PAdicNumber& b);
  PAdicNumber& operator+=(const PAdicNumber& b) { return *this = *this + b; }
  PAdicNumber& operator-=(const PAdicNumber& b) { return *this = *this - b; }
  PAdicNumber& operator*=(const PAdicNumber& b) { return *this = *this * b; }
  PAdicNumber& operator/=(const PAdicNumber& b) { return *this = *this / b; }

  /// Equal when the difference vanishes at the shared precision.
  friend bool operator==(const PAdicNumber& a, const PAdicNumber& b);

  PAdicNumber pow(unsigned long e) const;

 private:
  PAdicNumber(long prime, int valuation, BigInt unit, int precision)
      : prime_(prime), valuation_(valuation), unit_(std::move(unit)), precision_(precision) {}

  static PAdicNumber normalized(long prime, int valuation, BigInt value, int absolute_precision,
                                int relative_cap);
  BigInt modulus() const;

  long prime_ = 3;
  int valuation_ = kInfiniteValuation;
  BigInt unit_ = 0;
  int precision_ = 1;
};

inline bool is_zero(const PAdicNumber& x) { return x.is_zero(); }

/// Throws InputError unless p is an odd prime.
void require_odd_prime(long p);

/// p-adic logarithm sum_{k>=1} (-1)^{k+1} (u-1)^k / k for units u == 1 (mod p).
PAdicNumber padic_log(const PAdicNumber& u);
/// p-adic exponential sum_k x^k / k! for valuation(x) >= 1.
PAdicNumber padic_exp(const PAdicNumber& x);
/// Smallest M >= 1 with b^M == 1 (mod p); b must be a unit.
int stabilizing_exponent(const PAdicNumber& b);

}  // namespace padyn
