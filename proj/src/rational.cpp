#include "proxinorm/rational.hpp"

#include "proxinorm/errors.hpp"

#include <algorithm>
#include <cctype>

namespace proxinorm {

namespace {

Integer shifted(const Integer& value, std::int64_t bits) {
  Integer out;
  mpz_mul_2exp(out.get_mpz_t(), value.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  return out;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

} // namespace

Rational pow2(std::int64_t e) {
  Rational out(1);
  if (e >= 0) {
    out.get_num() = shifted(Integer(1), e);
  } else {
    out.get_den() = shifted(Integer(1), -e);
  }
  return out;
}

Rational ratio(std::int64_t p, std::int64_t q) {
  if (q == 0) {
    throw PreconditionError("zero denominator");
  }
  Rational out(Integer(std::to_string(p)), Integer(std::to_string(q)));
  out.canonicalize();
  return out;
}

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num_text = body.substr(0, slash);
  const std::string_view den_text = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) {
    throw InputError("not a rational: \"" + std::string(text) + "\"");
  }
  Rational out;
  out.get_num() = Integer(std::string(num_text));
  out.get_den() = Integer(std::string(den_text));
  if (out.get_den() == 0) {
    throw InputError("zero denominator: \"" + std::string(text) + "\"");
  }
  out.canonicalize();
  return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::int64_t floor_log2(const Rational& q) {
  if (sgn(q) <= 0) {
    throw PreconditionError("floor_log2 requires a positive rational");
  }
  const auto nb = static_cast<std::int64_t>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
  const auto db = static_cast<std::int64_t>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  const std::int64_t e = nb - db;
  const bool at_least = e >= 0 ? q.get_num() >= shifted(q.get_den(), e) : shifted(q.get_num(), -e) >= q.get_den();
  return at_least ? e : e - 1;
}

Integer ceil(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Rational round_to_dyadic(const Rational& q, std::int64_t bits) {
  const Rational scaled = abs(q) * pow2(bits) + Rational(1, 2);
  Integer floored;
  mpz_fdiv_q(floored.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational out = Rational(floored) * pow2(-bits);
  out.canonicalize();
  return sgn(q) < 0 ? Rational(-out) : out;
}

bool is_dyadic(const Rational& q) {
  const Integer& den = q.get_den();
  return mpz_popcount(den.get_mpz_t()) == 1;
}

void DyadicSum::add(const Rational& r, std::int64_t exponent) {
  if (sgn(r) != 0) {
    terms_.push_back({r, exponent});
  }
}

Rational DyadicSum::value() const {
  if (terms_.empty()) {
    return Rational(0);
  }
  std::int64_t top = terms_.front().exponent;
  Integer common_den = 1;
  for (const auto& t : terms_) {
    top = std::max(top, t.exponent);
    mpz_lcm(common_den.get_mpz_t(), common_den.get_mpz_t(), t.coefficient.get_den_mpz_t());
  }
  Integer numerator = 0;
  for (const auto& t : terms_) {
    const Integer scale = common_den / t.coefficient.get_den();
    numerator += shifted(t.coefficient.get_num() * scale, top - t.exponent);
  }
  Rational out(numerator, common_den);
  out.canonicalize();
  return out * pow2(-top);
}

} // namespace proxinorm
