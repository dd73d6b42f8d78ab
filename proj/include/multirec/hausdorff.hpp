#pragma once

// Explicit coverings and their exact diameter sums.
//
// AP system, level m: X splits into U_i(a) (prefix a of length m-1, digit m
// in A_i^(m)) and B(a) (digit m in B^(m)); the sum of diameters is compared
// against every link of the chain ending in alpha_m.
// Residue system: an elementary cylinder of rank m has diameter 1/P_m,
// equal to its measure, so cylinder partitions always sum to 1.

#include "multirec/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multirec {

enum class PartKind { piece, remainder, cylinder };

std::string to_string(PartKind kind);

struct CoveringPart {
    PartKind kind;
    std::vector<std::int64_t> prefix;  // a_1..a_{m-1}
    std::optional<int> piece;          // index i of U_i, 0-based
    Rational diameter;
    Rational measure;
    bool diameter_bounded = false;  // singleton at depth D: sigma_D used as a bound
};

struct ChainStep {
    std::string label;
    Surd lhs;
    Surd rhs;
    bool ok;
};

struct CoveringReport {
    int level = 0;
    std::vector<CoveringPart> parts;
    Rational sum;
    std::vector<ChainStep> chain;
    std::optional<Rational> alpha;  // strict schedules only
    bool ok() const;
};

/// Throws RangeError when m is outside [1, D].
CoveringReport proof_covering_sum(const MetricSystemAP& sys, int m);

/// Enumerates every truncated point (P_D <= limit) and checks each lies in
/// exactly one reported part. Throws CapacityError above the limit.
bool covering_is_partition(const MetricSystemAP& sys, const CoveringReport& report,
                           const BigInt& limit = BigInt(100000));

struct CylinderDiameter {
    Rational diameter;  // max pair distance, enumerated
    Rational measure;   // 1/P_m
    bool equal() const { return diameter == measure; }
};

/// Rank = prefix length, must be <= D-1 (CapacityError otherwise).
CylinderDiameter cylinder_diam(const MetricSystemRes& sys, const std::vector<std::int64_t>& prefix);

struct PartitionSum {
    Rational sum;
    std::size_t parts = 0;
    int max_rank = 0;
};

/// Random refinement of X into elementary cylinders of rank <= D-1
/// (each node splits with probability 1/2); sums exact diameters.
PartitionSum partition_diam_sum(const MetricSystemRes& sys, std::uint64_t seed, std::size_t max_parts = 200000);

struct DeltaCovering {
    int level = 0;
    BigInt part_count;
    Rational sum;
    Rational max_diameter;
    bool all_below_delta = false;
    std::optional<CoveringReport> report;  // AP system only
};

/// Strategy "proof": smallest level whose scale is below delta. Throws
/// CapacityError when no level within the depth fits.
DeltaCovering h1_delta_estimate(const MetricSystemAP& sys, const Rational& delta);
DeltaCovering h1_delta_estimate(const MetricSystemRes& sys, const Rational& delta);

}  // namespace multirec
