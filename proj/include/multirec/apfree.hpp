#pragma once

// Progression-free subsets of [0, N) and Z_N.
//
// In cyclic mode a k-term progression is x, x+d, ..., x+(k-1)d (mod N) with
// d in [1, N-1]; terms may repeat. That strong form is what the odometer
// wraparound argument consumes. Integer mode is ordinary progressions in Z
// with every term in [0, N).

#include "multirec/numeric.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace multirec {

enum class APMode { integer, cyclic };

std::string to_string(APMode mode);
APMode parse_ap_mode(std::string_view text);

struct APSet {
    std::vector<std::int64_t> elements;  // sorted, unique, in [0, n)
    std::int64_t n = 1;
    int k = 3;
    APMode mode = APMode::cyclic;

    std::size_t size() const { return elements.size(); }
    bool operator==(const APSet&) const = default;
};

struct APWitness {
    std::int64_t start;
    std::int64_t diff;
    bool operator==(const APWitness&) const = default;
};

struct APVerdict {
    std::optional<APWitness> witness;
    bool ok() const { return !witness.has_value(); }
};

/// Full check. Returns the lexicographically smallest (start, diff) of a
/// k-term progression inside the set, if any. Throws InputError when an
/// element lies outside [0, n) or n < 1, k < 3.
APVerdict check_ap_free(std::span<const std::int64_t> elements, std::int64_t n, int k, APMode mode);
inline APVerdict check_ap_free(const APSet& set) { return check_ap_free(set.elements, set.n, set.k, set.mode); }

/// Membership bitmap with the incremental "can r be added" test shared by
/// the greedy scan and the exhaustive search.
class ProgressionGuard {
public:
    ProgressionGuard(std::int64_t n, int k, APMode mode);

    /// True iff adding r keeps the set free of k-term progressions.
    bool can_add(std::int64_t r) const;
    void add(std::int64_t r);
    void remove(std::int64_t r);
    bool contains(std::int64_t r) const { return member_[static_cast<std::size_t>(r)] != 0; }
    const std::vector<std::int64_t>& members() const { return members_; }

private:
    bool all_terms_in(std::int64_t first, std::int64_t diff, std::int64_t extra) const;

    std::int64_t n_;
    int k_;
    APMode mode_;
    std::vector<char> member_;
    std::vector<std::int64_t> members_;  // insertion order
};

/// Scans 0..n-1 in increasing order, keeping every residue that leaves the set progression-free.
APSet greedy_ap_free(std::int64_t n, int k, APMode mode);

/// 40 for k = 3, 25 for k >= 4.
std::int64_t default_exhaustive_cap(int k);

struct ExactMax {
    std::int64_t size;
    APSet witness;  // lexicographically least among maximum sets
};

/// Branch-and-bound over inclusion decisions in increasing residue order.
/// Incumbent: the greedy set. Bound: exact integer-mode maxima of shorter
/// intervals (a cyclic-free or integer-free tail [r, n) is integer-free).
/// Throws CapacityError when n exceeds the cap.
ExactMax exact_max_ap_free(std::int64_t n, int k, APMode mode, std::optional<std::int64_t> cap = std::nullopt);

/// Sphere construction for 3-term progressions in [0, n): base-q digits
/// below ceil(q/2), fixed squared digit norm. Sweeps q in [2, ceil(n^{1/4})+2]
/// and digit counts up to ceil(log_q n); returns the largest shell.
APSet behrend_set(std::int64_t n);

/// Cuts [0, n) into k intervals [floor(jn/k), floor((j+1)n/k)) and returns
/// the largest piece of a0 (ties: smallest j) as a cyclic-mode set.
APSet split_to_cyclic(const APSet& a0, int k);

enum class DensityStrategy { greedy, behrend_split, exact_when_small, best_of };

std::string to_string(DensityStrategy s);
DensityStrategy parse_density_strategy(std::string_view text);

struct DensityPoint {
    std::int64_t n;
    APSet set;  // cyclic mode
    Rational rho;
};

/// rho(N) = |A^(N)|/N at the constructed points; non-increasing.
struct DensityTable {
    int k = 3;
    std::vector<DensityPoint> points;

    const DensityPoint* find(std::int64_t n) const;
    /// Value at a constructed point; throws RangeError if n is not one.
    const Rational& rho(std::int64_t n) const;
    /// Piecewise-constant, right-continuous extension over the points.
    const Rational& at(const BigInt& n) const;
};

struct DensityOptions {
    std::optional<std::int64_t> exhaustive_cap;
};

/// Builds a cyclic k-free set for every requested N, then trims sets so
/// rho never increases. `ns` must be strictly increasing and start at 1.
DensityTable build_density_table(std::span<const std::int64_t> ns, int k, DensityStrategy strategy,
                                 const DensityOptions& options = {});

/// Produces one cyclic set with the given strategy (no monotone trim).
APSet cyclic_set_for(std::int64_t n, int k, DensityStrategy strategy, const DensityOptions& options = {});

}  // namespace multirec
