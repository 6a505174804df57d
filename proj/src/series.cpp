#include "padyn/series.hpp"

namespace padyn {

Monomial monomial_from(const std::vector<int>& exponents) {
  if (exponents.size() > static_cast<std::size_t>(kMaxVariables)) throw InputError("too many variables");
  Monomial m = 0;
  int total = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    int e = exponents[i];
    if (e < 0) throw InputError("negative exponent");
    total += e;
    if (total > kMaxTruncation) throw InputError("monomial degree exceeds " + std::to_string(kMaxTruncation));
    m += static_cast<Monomial>(e) << (8 * (7 - static_cast<int>(i)));
  }
  return m;
}

std::vector<int> exponents_of(Monomial m, int n) {
  std::vector<int> e(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) e[i] = exponent(m, i);
  return e;
}

int tail_degree(Monomial m, int r, int n) {
  int d = 0;
  for (int i = r; i < n; ++i) d += exponent(m, i);
  return d;
}

bool divides(Monomial a, Monomial b) {
  for (int i = 0; i < kMaxVariables; ++i) {
    if (exponent(a, i) > exponent(b, i)) return false;
  }
  return true;
}

std::string monomial_to_string(Monomial m, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    int e = exponent(m, i);
    if (e == 0) continue;
    if (!out.empty()) out += '*';
    out += "x" + std::to_string(i + 1);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

}  // namespace padyn
