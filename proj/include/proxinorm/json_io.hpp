#pragma once

#include "proxinorm/approx_linearity.hpp"
#include "proxinorm/construction.hpp"
#include "proxinorm/gateaux.hpp"
#include "proxinorm/norm.hpp"
#include "proxinorm/proximinality.hpp"
#include "proxinorm/sparse_vec.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace proxinorm {

using nlohmann::json;

// Rationals travel as strings ("p/q" or "p"); sparse vectors as objects
// mapping the decimal index to such a string, e.g. {"1": "1/2", "7": "-3"}.
// Readers throw InputError naming the offending field.

json to_json(const Rational& q);
Rational rational_from_json(const json& j, std::string_view field);

json to_json(const SparseVec& x);
SparseVec sparse_from_json(const json& j, std::string_view field);

json to_json(const Enclosure& e);
Enclosure enclosure_from_json(const json& j, std::string_view field);

json to_json(const DerivativeEnclosure& e);
DerivativeEnclosure derivative_from_json(const json& j, std::string_view field);

json to_json(const TableEntry& entry);

json to_json(const ApproxLinearityReport& report);
ApproxLinearityReport report_from_json(const json& j);

json to_json(const DescentCertificate& cert);
DescentCertificate certificate_from_json(const json& j, std::string_view field = "certificate");

/// True when the "digest" field is the SHA-256 of the remaining fields.
bool digest_matches(const json& cert);
/// The certificate objects of any shape chain_from_json accepts.
std::vector<json> certificate_objects(const json& j);
json chain_to_json(const std::vector<DescentCertificate>& chain);
/// Accepts a single certificate object, an array, or {"certificates": [...]}.
std::vector<DescentCertificate> chain_from_json(const json& j);

/// Parses a whole file; throws InputError on unreadable or malformed JSON.
json read_json_file(const std::string& path);

} // namespace proxinorm
