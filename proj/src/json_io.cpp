#include "proxinorm/json_io.hpp"

#include "proxinorm/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace proxinorm {

namespace {

std::string join(std::string_view parent, std::string_view child) {
  return parent.empty() ? std::string(child) : std::string(parent) + "." + std::string(child);
}

[[noreturn]] void bad(std::string_view field, const std::string& what) {
  throw InputError("field '" + std::string(field) + "': " + what);
}

// SHA-256 of the compact dump; nlohmann orders object keys, so the dump is canonical.
std::string content_digest(const json& body) {
  const std::string text = body.dump();
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), md.data(), &length, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int n = 0; n < length; ++n) {
    std::snprintf(buf, sizeof buf, "%02x", md[n]);
    hex += buf;
  }
  return hex;
}

const json& need(const json& j, std::string_view key, std::string_view parent) {
  if (!j.is_object()) {
    bad(parent, "expected an object");
  }
  const auto it = j.find(std::string(key));
  if (it == j.end()) {
    bad(join(parent, key), "missing");
  }
  return *it;
}

std::int64_t integer_from_json(const json& j, std::string_view field) {
  if (!j.is_number_integer()) {
    bad(field, "expected an integer");
  }
  return j.get<std::int64_t>();
}

Index index_from_key(const std::string& key, std::string_view field) {
  if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos) {
    bad(field, "index \"" + key + "\" is not a positive integer");
  }
  try {
    const Index i = std::stoll(key);
    if (i < 1) {
      bad(field, "indices are 1-based");
    }
    return i;
  } catch (const std::out_of_range&) {
    bad(field, "index \"" + key + "\" out of range");
  }
}

json rational_map(const std::map<Index, Rational>& values) {
  json out = json::object();
  for (const auto& [i, q] : values) {
    out[std::to_string(i)] = to_string(q);
  }
  return out;
}

std::map<Index, Rational> rational_map_from_json(const json& j, std::string_view field) {
  if (!j.is_object()) {
    bad(field, "expected an object");
  }
  std::map<Index, Rational> out;
  for (const auto& [key, value] : j.items()) {
    const std::string sub = join(field, key);
    out[index_from_key(key, field)] = rational_from_json(value, sub);
  }
  return out;
}

std::vector<Index> index_list(const json& j, std::string_view field) {
  if (!j.is_array()) {
    bad(field, "expected an array");
  }
  std::vector<Index> out;
  for (const auto& entry : j) {
    out.push_back(integer_from_json(entry, field));
  }
  return out;
}

std::vector<SparseVec> vector_list(const json& j, std::string_view field) {
  if (!j.is_array()) {
    bad(field, "expected an array");
  }
  std::vector<SparseVec> out;
  for (std::size_t n = 0; n < j.size(); ++n) {
    out.push_back(sparse_from_json(j[n], std::string(field) + "[" + std::to_string(n) + "]"));
  }
  return out;
}

} // namespace

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j, std::string_view field) {
  if (j.is_number_integer()) {
    return Rational(Integer(std::to_string(j.get<std::int64_t>())));
  }
  if (!j.is_string()) {
    bad(field, "expected a rational string \"p/q\"");
  }
  try {
    return parse_rational(j.get<std::string>());
  } catch (const InputError& e) {
    bad(field, e.what());
  }
}

json to_json(const SparseVec& x) {
  json out = json::object();
  for (const auto& [i, value] : x) {
    out[std::to_string(i)] = to_string(value);
  }
  return out;
}

SparseVec sparse_from_json(const json& j, std::string_view field) {
  if (!j.is_object()) {
    bad(field, "expected a sparse vector object {\"index\": \"p/q\"}");
  }
  SparseVec out;
  for (const auto& [key, value] : j.items()) {
    out.set(index_from_key(key, field), rational_from_json(value, join(field, key)));
  }
  return out;
}

json to_json(const Enclosure& e) { return {{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}, {"depth", e.depth}}; }

Enclosure enclosure_from_json(const json& j, std::string_view field) {
  Enclosure e;
  e.lo = rational_from_json(need(j, "lo", field), join(field, "lo"));
  e.hi = rational_from_json(need(j, "hi", field), join(field, "hi"));
  e.depth = integer_from_json(need(j, "depth", field), join(field, "depth"));
  if (e.depth < 1) {
    bad(join(field, "depth"), "must be positive");
  }
  return e;
}

json to_json(const DerivativeEnclosure& e) {
  return {{"lo", to_string(e.lo)}, {"hi", to_string(e.hi)}, {"depth", e.depth}, {"sign", to_string(e.sign)}};
}

DerivativeEnclosure derivative_from_json(const json& j, std::string_view field) {
  const Enclosure base = enclosure_from_json(j, field);
  DerivativeEnclosure e{base.lo, base.hi, base.depth, SignStatus::StraddlesZero};
  const json& sign = need(j, "sign", field);
  if (!sign.is_string()) {
    bad(join(field, "sign"), "expected a string");
  }
  try {
    e.sign = parse_sign_status(sign.get<std::string>());
  } catch (const InputError& err) {
    bad(join(field, "sign"), err.what());
  }
  return e;
}

json to_json(const TableEntry& entry) { return {{"k", entry.k}, {"u", to_json(entry.u)}, {"a", entry.a}}; }

json to_json(const ApproxLinearityReport& report) {
  json out;
  out["x"] = to_json(report.x);
  json zs = json::array();
  for (const auto& z : report.z_list) {
    zs.push_back(to_json(z));
  }
  out["z_list"] = std::move(zs);
  out["prefix_depth"] = report.prefix_depth;
  out["a_prefix"] = report.a_prefix;
  json owners = json::object();
  for (const auto& [i, owner] : report.owners) {
    owners[std::to_string(i)] = {{"k", owner.k}, {"j", owner.j + 1}};
  }
  out["owners"] = std::move(owners);
  json excluded = json::object();
  for (const auto& [i, reasons] : report.excluded) {
    json list = json::array();
    for (const auto reason : reasons) {
      list.push_back(std::string(to_string(reason)));
    }
    excluded[std::to_string(i)] = std::move(list);
  }
  out["excluded"] = std::move(excluded);
  out["a0_prefix"] = report.a0_prefix;
  out["cofinite_beyond_prefix"] = report.cofinite_beyond_prefix;
  out["gamma"] = rational_map(report.gamma);
  out["eps_lower"] = rational_map(report.eps_lower);
  out["eps_upper"] = rational_map(report.eps_upper);
  json trials = json::array();
  for (const auto& t : report.trials) {
    trials.push_back({{"v", to_json(t.v)}, {"lhs", to_json(t.lhs)}, {"rhs", to_string(t.rhs)}, {"pass", t.pass}});
  }
  out["trials"] = std::move(trials);
  return out;
}

ApproxLinearityReport report_from_json(const json& j) {
  ApproxLinearityReport r;
  r.x = sparse_from_json(need(j, "x", ""), "x");
  r.z_list = vector_list(need(j, "z_list", ""), "z_list");
  r.prefix_depth = integer_from_json(need(j, "prefix_depth", ""), "prefix_depth");
  r.a_prefix = index_list(need(j, "a_prefix", ""), "a_prefix");
  const json& owners = need(j, "owners", "");
  if (!owners.is_object()) {
    bad("owners", "expected an object");
  }
  for (const auto& [key, value] : owners.items()) {
    const std::string field = "owners." + key;
    const std::int64_t jj = integer_from_json(need(value, "j", field), field + ".j");
    if (jj < 1 || static_cast<std::size_t>(jj) > r.z_list.size()) {
      bad(field + ".j", "does not name an entry of z_list");
    }
    r.owners[index_from_key(key, "owners")] = {integer_from_json(need(value, "k", field), field + ".k"),
                                               static_cast<std::size_t>(jj - 1)};
  }
  const json& excluded = need(j, "excluded", "");
  if (!excluded.is_object()) {
    bad("excluded", "expected an object");
  }
  for (const auto& [key, value] : excluded.items()) {
    if (!value.is_array()) {
      bad("excluded." + key, "expected an array of reasons");
    }
    std::vector<Exclusion> reasons;
    for (const auto& reason : value) {
      if (!reason.is_string()) {
        bad("excluded." + key, "reasons are strings");
      }
      try {
        reasons.push_back(parse_exclusion(reason.get<std::string>()));
      } catch (const InputError& e) {
        bad("excluded." + key, e.what());
      }
    }
    r.excluded[index_from_key(key, "excluded")] = std::move(reasons);
  }
  r.a0_prefix = index_list(need(j, "a0_prefix", ""), "a0_prefix");
  const json& cofinite = need(j, "cofinite_beyond_prefix", "");
  if (!cofinite.is_boolean()) {
    bad("cofinite_beyond_prefix", "expected a boolean");
  }
  r.cofinite_beyond_prefix = cofinite.get<bool>();
  r.gamma = rational_map_from_json(need(j, "gamma", ""), "gamma");
  r.eps_lower = rational_map_from_json(need(j, "eps_lower", ""), "eps_lower");
  r.eps_upper = rational_map_from_json(need(j, "eps_upper", ""), "eps_upper");
  for (const Index i : r.a0_prefix) {
    if (!r.gamma.count(i) || !r.eps_lower.count(i) || !r.eps_upper.count(i)) {
      bad("a0_prefix", "index " + std::to_string(i) + " lacks gamma or eps entries");
    }
  }
  if (j.contains("trials")) {
    const json& trials = j.at("trials");
    if (!trials.is_array()) {
      bad("trials", "expected an array");
    }
    for (std::size_t n = 0; n < trials.size(); ++n) {
      const std::string field = "trials[" + std::to_string(n) + "]";
      LinearityTrial t;
      t.v = sparse_from_json(need(trials[n], "v", field), field + ".v");
      t.lhs = enclosure_from_json(need(trials[n], "lhs", field), field + ".lhs");
      t.rhs = rational_from_json(need(trials[n], "rhs", field), field + ".rhs");
      const json& pass = need(trials[n], "pass", field);
      if (!pass.is_boolean()) {
        bad(field + ".pass", "expected a boolean");
      }
      t.pass = pass.get<bool>();
      r.trials.push_back(std::move(t));
    }
  }
  return r;
}

json to_json(const DescentCertificate& cert) {
  json functionals = json::array();
  for (const auto& phi : cert.functionals) {
    functionals.push_back(to_json(phi));
  }
  json coset = json::array();
  for (const auto& q : cert.coset) {
    coset.push_back(to_string(q));
  }
  json body = {{"functionals", std::move(functionals)},
          {"coset", std::move(coset)},
          {"x", to_json(cert.x)},
          {"v", to_json(cert.v)},
          {"h", to_string(cert.h)},
          {"x_next", to_json(cert.x_next)},
          {"norm_before", to_json(cert.norm_before)},
          {"norm_after", to_json(cert.norm_after)},
          {"d_plus", to_json(cert.d_plus)},
          {"d_minus", to_json(cert.d_minus)}};
  body["digest"] = content_digest(body);
  return body;
}

DescentCertificate certificate_from_json(const json& j, std::string_view field) {
  DescentCertificate cert;
  cert.functionals = vector_list(need(j, "functionals", field), join(field, "functionals"));
  const json& coset = need(j, "coset", field);
  if (!coset.is_array()) {
    bad(join(field, "coset"), "expected an array");
  }
  for (std::size_t n = 0; n < coset.size(); ++n) {
    cert.coset.push_back(rational_from_json(coset[n], join(field, "coset[" + std::to_string(n) + "]")));
  }
  cert.x = sparse_from_json(need(j, "x", field), join(field, "x"));
  cert.v = sparse_from_json(need(j, "v", field), join(field, "v"));
  cert.h = rational_from_json(need(j, "h", field), join(field, "h"));
  cert.x_next = sparse_from_json(need(j, "x_next", field), join(field, "x_next"));
  cert.norm_before = enclosure_from_json(need(j, "norm_before", field), join(field, "norm_before"));
  cert.norm_after = enclosure_from_json(need(j, "norm_after", field), join(field, "norm_after"));
  cert.d_plus = derivative_from_json(need(j, "d_plus", field), join(field, "d_plus"));
  cert.d_minus = derivative_from_json(need(j, "d_minus", field), join(field, "d_minus"));
  if (!need(j, "digest", field).is_string()) {
    bad(join(field, "digest"), "expected a hex string");
  }
  return cert;
}

bool digest_matches(const json& cert) {
  if (!cert.is_object() || !cert.contains("digest") || !cert.at("digest").is_string()) {
    return false;
  }
  json body = cert;
  body.erase("digest");
  return cert.at("digest").get<std::string>() == content_digest(body);
}

std::vector<json> certificate_objects(const json& j) {
  if (j.is_object() && j.contains("certificates") && j.at("certificates").is_array()) {
    return j.at("certificates").get<std::vector<json>>();
  }
  if (j.is_array()) {
    return j.get<std::vector<json>>();
  }
  return {j};
}

json chain_to_json(const std::vector<DescentCertificate>& chain) {
  json list = json::array();
  for (const auto& cert : chain) {
    list.push_back(to_json(cert));
  }
  return {{"certificates", std::move(list)}};
}

std::vector<DescentCertificate> chain_from_json(const json& j) {
  const json* list = &j;
  if (j.is_object() && j.contains("certificates")) {
    list = &j.at("certificates");
  } else if (j.is_object()) {
    return {certificate_from_json(j)};
  }
  if (!list->is_array()) {
    bad("certificates", "expected an array");
  }
  std::vector<DescentCertificate> out;
  for (std::size_t n = 0; n < list->size(); ++n) {
    out.push_back(certificate_from_json((*list)[n], "certificates[" + std::to_string(n) + "]"));
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

} // namespace proxinorm
