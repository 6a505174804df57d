#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace padyn {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// num/den in lowest terms with a positive denominator. Throws InputError on den == 0.
BigRational make_rational(const BigInt& num, const BigInt& den = 1);

/// Parses "a", "-a" or "a/b" (decimal). Throws InputError on malformed text.
BigRational parse_rational(std::string_view text);

std::string to_string(const BigInt& x);
std::string to_string(const BigRational& x);

inline bool is_zero(const BigRational& x) { return sgn(x) == 0; }

/// Exponent of p in a nonzero integer.
int valuation(const BigInt& x, const BigInt& p);
/// Exponent of p in a nonzero rational (negative when p divides the denominator).
int valuation(const BigRational& x, const BigInt& p);

BigInt ipow(const BigInt& base, unsigned long exp);
/// Integer power of a rational; negative exponents invert (base must be nonzero).
BigRational rpow(const BigRational& base, long exp);

bool is_prime(const BigInt& n);
/// Smallest prime strictly greater than n.
BigInt next_prime(const BigInt& n);

/// Prime factorization of |n| (n != 0) as sorted (prime, exponent) pairs.
/// Trial division by small primes, Pollard-Brent rho for what remains.
std::vector<std::pair<BigInt, int>> factor(const BigInt& n);

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<BigInt> inverse_mod(const BigInt& a, const BigInt& m);

/// Wang's rational reconstruction: a/b with a == u*b (mod m), |a|, b <= sqrt(m/2).
std::optional<BigRational> rational_reconstruct(const BigInt& u, const BigInt& m);

}  // namespace padyn
