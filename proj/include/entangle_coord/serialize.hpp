#pragma once

// JSON and CSV forms of every report type. Field names match the struct
// members; objects keep insertion order so output is stable byte for byte.

#include <string>
#include <vector>

#include <json.hpp>

#include "entangle_coord/adversary.hpp"
#include "entangle_coord/analysis/entropy.hpp"
#include "entangle_coord/analysis/nicd.hpp"
#include "entangle_coord/analysis/reconcile.hpp"
#include "entangle_coord/protocol.hpp"

namespace entangle {

using Json = nlohmann::ordered_json;

namespace protocol {
void to_json(Json& j, const RunRecord& r);
void to_json(Json& j, const MultiRunRecord& r);
}  // namespace protocol

namespace adversary {
/// Per-trial bit strings are included only when `include_trials` is set.
Json attack_report_json(const AttackReport& r, bool include_trials);
void to_json(Json& j, const AttackReport& r);
}  // namespace adversary

namespace analysis {
void to_json(Json& j, const BoundRow& r);
void to_json(Json& j, const NicdResult& r);
void to_json(Json& j, const NicdCertificate& c);
void to_json(Json& j, const ReconcileReport& r);
}  // namespace analysis

/// Shortest round-trip rendering, identical to the JSON number text.
std::string format_number(double value);

/// RFC 4180-style table: header row then data rows, "\n" line endings.
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace entangle
