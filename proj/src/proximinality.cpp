#include "proxinorm/proximinality.hpp"

#include "proxinorm/errors.hpp"
#include "proxinorm/linear_algebra.hpp"
#include "proxinorm/parallel.hpp"
#include "proxinorm/theorem_demo.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace proxinorm {

Subspace::Subspace(std::vector<SparseVec> functionals) : functionals_(std::move(functionals)) {
  if (functionals_.empty()) {
    throw PreconditionError("a subspace needs at least one defining functional");
  }
  if (rank(functionals_) != functionals_.size()) {
    throw PreconditionError("defining functionals are linearly dependent");
  }
}

bool Subspace::contains(const SparseVec& v) const {
  return std::all_of(functionals_.begin(), functionals_.end(),
                     [&](const SparseVec& phi) { return sgn(pair(v, phi)) == 0; });
}

std::vector<Rational> Subspace::coset_values(const SparseVec& x) const {
  std::vector<Rational> out;
  for (const auto& phi : functionals_) {
    out.push_back(pair(x, phi));
  }
  return out;
}

std::vector<std::vector<Index>> candidate_supports(const std::vector<Index>& a0_prefix, std::size_t size,
                                                   std::size_t limit) {
  std::vector<Index> pool = a0_prefix;
  std::sort(pool.begin(), pool.end());
  std::vector<std::vector<Index>> out;
  if (pool.empty() || size == 0) {
    return out;
  }
  if (pool.size() <= size) {
    out.push_back(pool);
    return out;
  }
  // For each choice of maximal element, the remaining size-1 elements are
  // drawn below it in lexicographic order.
  for (std::size_t top = size - 1; top < pool.size() && out.size() < limit; ++top) {
    std::vector<std::size_t> pick(size - 1);
    for (std::size_t p = 0; p + 1 < size; ++p) {
      pick[p] = p;
    }
    while (out.size() < limit) {
      std::vector<Index> support;
      for (const std::size_t p : pick) {
        support.push_back(pool[p]);
      }
      support.push_back(pool[top]);
      out.push_back(std::move(support));

      std::size_t pos = pick.size();
      while (pos > 0 && pick[pos - 1] == top - (pick.size() - pos) - 1) {
        --pos;
      }
      if (pos == 0) {
        break;
      }
      ++pick[pos - 1];
      for (std::size_t p = pos; p < pick.size(); ++p) {
        pick[p] = pick[p - 1] + 1;
      }
    }
  }
  return out;
}

std::vector<SparseVec> choose_z_list(const ConstructionTable& table, const Subspace& h, const SparseVec& x,
                                     const SearchParams& params) {
  std::vector<PsiFunctional> psi;
  if (h.codimension() >= 2) {
    psi = build_psi(static_cast<int>(h.codimension()), h.functionals()[0], h.functionals()[1]);
  }
  for (std::int64_t bits = params.rounding_denominator_bits; bits >= 0; --bits) {
    std::vector<SparseVec> roundings;
    if (psi.empty()) {
      SparseVec z;
      for (const auto& [i, value] : h.functionals()[0]) {
        z.set(i, round_to_dyadic(value, bits));
      }
      roundings.push_back(std::move(z));
    } else {
      for (const auto& f : psi) {
        roundings.push_back(f.round(bits));
      }
    }
    std::vector<SparseVec> z_list;
    for (auto& z : roundings) {
      if (z.is_zero() || sgn(pair(x, z)) == 0 || std::find(z_list.begin(), z_list.end(), z) != z_list.end()) {
        continue;
      }
      if (!table.positions(z, params.prefix_depth).empty()) {
        z_list.push_back(std::move(z));
      }
    }
    if (!z_list.empty()) {
      return z_list;
    }
  }
  return {};
}

std::optional<DescentDirection> find_descent_direction(const ConstructionTable& table, const Subspace& h,
                                                       const SparseVec& x, const SearchParams& params) {
  if (h.contains(x)) {
    throw PreconditionError("x lies in H; its coset is H itself");
  }
  const std::vector<SparseVec> z_list = choose_z_list(table, h, x, params);
  if (z_list.empty()) {
    return std::nullopt;
  }
  const ApproxLinearityReport report = build_report(table, x, z_list, params.prefix_depth);
  const auto supports = candidate_supports(report.a0_prefix, h.codimension() + 1, params.max_candidates);
  std::vector<Candidate> candidates =
      params.parallel ? score_candidates(report, h, supports) : score_candidates_serial(report, h, supports);

  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.margin != b.margin) {
      return a.margin > b.margin;
    }
    if (a.v.nnz() != b.v.nnz()) {
      return a.v.nnz() < b.v.nnz();
    }
    return a.v.max_support() < b.v.max_support();
  });

  for (const Candidate& c : candidates) {
    if (sgn(c.margin) <= 0) {
      break;
    }
    const std::int64_t bits = std::max(params.precision_bits, 4 - floor_log2(c.margin));
    if (bits > params.precision_cap) {
      continue;
    }
    SignEvidence evidence{d_plus_read_norm(table, x, c.v, bits, params.precision_cap),
                          d_minus_read_norm(table, x, c.v, bits, params.precision_cap)};
    if (evidence.d_plus.sign != SignStatus::StraddlesZero && evidence.d_plus.sign == evidence.d_minus.sign) {
      return DescentDirection{c.v, c.margin, z_list, std::move(evidence)};
    }
  }
  return std::nullopt;
}

DescentCertificate certify_descent(const ConstructionTable& table, const Subspace& h, const SparseVec& x,
                                   const SparseVec& v, const SignEvidence& evidence, const SearchParams& params) {
  if (!h.contains(v)) {
    throw PreconditionError("direction is not in H");
  }
  if (evidence.d_plus.sign == SignStatus::StraddlesZero || evidence.d_plus.sign != evidence.d_minus.sign) {
    throw PreconditionError("one-sided derivatives do not share a definite sign");
  }
  const int direction = evidence.d_plus.sign == SignStatus::Positive ? -1 : 1;
  const Enclosure start = read_norm(table, x, params.precision_bits, params.precision_cap);
  const Rational scale = Rational(1, 16) * start.lo / std::max(Rational(1), sup_norm(v));
  const Rational slope = std::min(abs(evidence.d_plus.midpoint()), abs(evidence.d_minus.midpoint()));
  Rational step = pow2(floor_log2(scale));

  for (int j = 0; j <= params.max_halvings; ++j, step /= 2) {
    const Rational hval = direction * step;
    const SparseVec y = x + hval * v;
    // Predicted decrease ~ |h| |d|; ask for a few bits beyond it.
    const std::int64_t bits = std::max(params.precision_bits, 8 - floor_log2(step * slope));
    if (bits > params.precision_cap) {
      break;
    }
    const NormComparison cmp = norm_difference_sign(table, y, x, bits, std::min(params.precision_cap, 4 * bits));
    if (cmp.order != Order::Less) {
      continue;
    }
    DescentCertificate cert;
    cert.functionals = h.functionals();
    cert.coset = h.coset_values(x);
    cert.x = x;
    cert.v = v;
    cert.h = hval;
    cert.x_next = y;
    cert.norm_before = cmp.second;
    cert.norm_after = cmp.first;
    cert.d_plus = evidence.d_plus;
    cert.d_minus = evidence.d_minus;
    return cert;
  }
  throw BudgetError("line search could not certify a strict decrease");
}

std::vector<DescentCertificate> minimizing_sequence(const ConstructionTable& table, const Subspace& h,
                                                    const SparseVec& x0, int steps, const SearchParams& params) {
  if (steps < 1) {
    throw PreconditionError("minimizing_sequence needs steps >= 1");
  }
  if (h.contains(x0)) {
    throw PreconditionError("x0 lies in H");
  }
  const std::vector<Rational> coset = h.coset_values(x0);
  std::vector<DescentCertificate> chain;
  SparseVec x = x0;
  for (int t = 0; t < steps; ++t) {
    try {
      const auto direction = find_descent_direction(table, h, x, params);
      if (!direction) {
        break;
      }
      chain.push_back(certify_descent(table, h, x, direction->v, direction->evidence, params));
    } catch (const BudgetError&) {
      break;
    }
    x = chain.back().x_next;
    if (h.coset_values(x) != coset) {
      throw std::logic_error("iterate left the coset");
    }
  }
  return chain;
}

VerificationResult verify_certificate(const ConstructionTable& table, const DescentCertificate& cert) {
  VerificationResult result;
  auto fail = [&](std::string message) {
    result.ok = false;
    result.failures.push_back(std::move(message));
  };
  try {
    const Subspace h(cert.functionals);
    if (h.coset_values(cert.x) != cert.coset) {
      fail("coset coordinates do not match <x, phi_i>");
    }
    if (h.contains(cert.x)) {
      fail("x lies in H");
    }
    if (!h.contains(cert.v)) {
      fail("v is not in H");
    }
    if (cert.v.is_zero()) {
      fail("v is zero");
    }
    if (sgn(cert.h) == 0 || !is_dyadic(cert.h)) {
      fail("step h is not a nonzero dyadic rational");
    }
    if (cert.x_next != cert.x + cert.h * cert.v) {
      fail("x_next differs from x + h v");
    }
    if (read_norm_at_depth(table, cert.x, cert.norm_before.depth) != cert.norm_before) {
      fail("norm_before does not match its recomputation");
    }
    if (read_norm_at_depth(table, cert.x_next, cert.norm_after.depth) != cert.norm_after) {
      fail("norm_after does not match its recomputation");
    }
    if (d_plus_read_norm_at_depth(table, cert.x, cert.v, cert.d_plus.depth) != cert.d_plus) {
      fail("d_plus does not match its recomputation");
    }
    if (d_minus_read_norm_at_depth(table, cert.x, cert.v, cert.d_minus.depth) != cert.d_minus) {
      fail("d_minus does not match its recomputation");
    }
    if (cert.d_plus.sign == SignStatus::StraddlesZero || cert.d_plus.sign != cert.d_minus.sign) {
      fail("one-sided derivatives do not share a definite sign");
    } else if ((cert.d_plus.sign == SignStatus::Positive) != (sgn(cert.h) < 0)) {
      fail("step sign does not oppose the derivative sign");
    }
    if (!(cert.norm_after.hi < cert.norm_before.lo)) {
      fail("no certified strict decrease: hi(after) >= lo(before)");
    }
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return result;
}

VerificationResult verify_chain(const ConstructionTable& table, const std::vector<DescentCertificate>& chain) {
  VerificationResult result;
  for (std::size_t t = 0; t < chain.size(); ++t) {
    VerificationResult step = verify_certificate(table, chain[t]);
    for (auto& message : step.failures) {
      result.failures.push_back("certificate " + std::to_string(t) + ": " + message);
    }
    result.ok = result.ok && step.ok;
    if (t > 0) {
      if (chain[t].x != chain[t - 1].x_next) {
        result.ok = false;
        result.failures.push_back("certificate " + std::to_string(t) + ": x is not the previous x_next");
      }
      if (chain[t].coset != chain[t - 1].coset || chain[t].functionals != chain[t - 1].functionals) {
        result.ok = false;
        result.failures.push_back("certificate " + std::to_string(t) + ": subspace or coset changed");
      }
    }
  }
  return result;
}

} // namespace proxinorm
