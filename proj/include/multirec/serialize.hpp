#pragma once

// JSON forms of every persisted or streamed object. Rationals are "p/q"
// strings; key order is fixed so output is byte-stable.

#include "multirec/hausdorff.hpp"
#include "multirec/metrics.hpp"
#include "multirec/recurrence.hpp"

#include <json.hpp>

#include <variant>

namespace multirec {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);
/// Integers as JSON numbers when they fit in 64 bits, strings otherwise.
Json to_json(const BigInt& n);
BigInt bigint_from_json(const Json& j);

Json to_json(const APSet& set);
APSet apset_from_json(const Json& j);

Json to_json(const APVerdict& v);

Json to_json(const PartitionResult& r);
PartitionResult partition_from_json(const Json& j);

Json to_json(const GaugePsi& psi);
GaugePsi psi_from_json(const Json& j);

Json to_json(const RadixSchedule& s);
RadixSchedule schedule_from_json(const Json& j);

Json to_json(const DensityTable& t);
DensityTable density_from_json(const Json& j);

Json to_json(const MetricSystemAP& sys);
Json to_json(const MetricSystemRes& sys);

using MetricSystem = std::variant<MetricSystemAP, MetricSystemRes>;
/// Dispatches on "kind" ("ap" | "res"). Stored data is taken as is.
MetricSystem system_from_json(const Json& j);
Json to_json(const MetricSystem& sys);

Json to_json(const std::vector<InvariantCheck>& checks);

/// {n, distances, value, flags}
Json to_json(const RecurrenceRecord& rec);

Json to_json(const ScanResult& r);

/// {level, parts, sum, chain, alpha}
Json to_json(const CoveringReport& report);

Json to_json(const MonteCarloSummary& summary);

}  // namespace multirec
