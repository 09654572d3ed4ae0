#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace proxinorm {

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;
using Integer = mpz_class;

/// 2^e for any integer exponent e.
Rational pow2(std::int64_t e);

/// p/q in lowest terms. mpq_class(p, q) skips canonicalization, and GMP
/// arithmetic on non-canonical operands is unreliable.
Rational ratio(std::int64_t p, std::int64_t q);

/// Parses "p/q" or "p" (optional leading sign). Throws InputError.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

/// +1 for t >= 0 and -1 for t < 0.
inline int sigma(const Rational& t) { return sgn(t) < 0 ? -1 : 1; }

/// The unique e with 2^e <= q < 2^(e+1). Requires q > 0.
std::int64_t floor_log2(const Rational& q);

/// The least integer >= q.
Integer ceil(const Rational& q);

/// q rounded to the nearest multiple of 2^-bits (ties away from zero).
Rational round_to_dyadic(const Rational& q, std::int64_t bits);

/// True when q = m * 2^e for integers m, e.
bool is_dyadic(const Rational& q);

/// Accumulates sum_k r_k * 2^(-e_k) and canonicalises once at the end.
/// Adding many huge dyadic terms one by one through mpq would redo a gcd
/// per term; this keeps everything over a common denominator.
class DyadicSum {
public:
  void add(const Rational& r, std::int64_t exponent);
  Rational value() const;
  bool empty() const { return terms_.empty(); }

private:
  struct Term {
    Rational coefficient;
    std::int64_t exponent;
  };
  std::vector<Term> terms_;
};

} // namespace proxinorm
