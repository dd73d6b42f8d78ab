#pragma once

// Greedy covering of Z_N by pieces of translates of a set A plus a small
// remainder B:
//   A_i subset of A + a_i,  |A_i| >= |A|/phi,  |B| <= N/phi.
// phi enters only as phi^2 (a rational), so every test is exact.

#include "multirec/apfree.hpp"
#include "multirec/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace multirec {

struct PartitionResult {
    std::int64_t n = 1;
    Rational phi_squared{1};
    std::vector<std::int64_t> base;  // the set A being translated
    std::vector<std::int64_t> shifts;
    std::vector<std::vector<std::int64_t>> parts;
    std::vector<std::int64_t> remainder;

    bool operator==(const PartitionResult&) const = default;
};

PartitionResult partition(const APSet& a, const Rational& phi_squared);

enum class PartitionCondition {
    disjoint_cover,  // {A_1..A_l, B} partitions Z_N
    subset_of_translate,  // condition 1
    piece_size,           // condition 2
    remainder_size,       // condition 3
    step_bound,           // l <= floor(N phi/|A|) + 1
};

std::string to_string(PartitionCondition c);

struct PartitionVerdict {
    std::vector<PartitionCondition> violations;
    bool ok() const { return violations.empty(); }
    bool violates(PartitionCondition c) const;
};

/// Recomputes every condition from the raw sets.
PartitionVerdict verify_partition(const PartitionResult& result);

}  // namespace multirec
