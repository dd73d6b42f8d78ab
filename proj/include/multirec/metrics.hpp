#pragma once

// The two constructed metrics on the digit space.
//
// AP metric: with t the first differing digit, the distance is
//   sigma_t      if x_t, y_t fall in the same Tijdeman piece of level t,
//   sigma_{t-1}  otherwise,
// where sigma_m = rho(P_m) / psi(P_m). B^(t) counts as one piece.
//
// Residue metric (N_m = p_m^2): digits of level m split into p_m classes
// x = j (mod p_m) with index phi(x) = (x - j)/p_m. Same class at t gives
// |phi(x_t) - phi(y_t)| / (f p_t P_{t-1}); otherwise 1/P_{t-1}.

#include "multirec/apfree.hpp"
#include "multirec/gauge.hpp"
#include "multirec/odometer.hpp"
#include "multirec/tijdeman.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multirec {

struct InvariantCheck {
    std::string name;
    bool ok;
    std::string detail;
};

bool all_ok(const std::vector<InvariantCheck>& checks);

struct APLevel {
    APSet set;                  // A^(s), cyclic mode in Z_{N_s}
    PartitionResult partition;  // at phi^2 = psi(N_s)
    std::vector<std::int32_t> piece_of;  // digit -> part index; parts.size() means B

    std::int32_t remainder_piece() const { return static_cast<std::int32_t>(partition.parts.size()); }
    /// Piece index of a digit, or -1 if the stored partition misses it.
    std::int32_t piece(std::int64_t digit) const { return piece_of[static_cast<std::size_t>(digit)]; }
    bool in_remainder(std::int64_t digit) const { return piece(digit) == remainder_piece(); }
};

struct APSystemConfig {
    int k = 3;
    GaugePsi psi{};
    Rational alpha_ratio{1, 2};
    int depth = 1;  // strict mode; relaxed depth is radices.size()
    ScheduleMode mode = ScheduleMode::strict;
    std::vector<std::int64_t> radices;  // relaxed mode
    DensityStrategy strategy = DensityStrategy::best_of;
    RadixBudget budget{};
    std::optional<std::int64_t> exhaustive_cap;
};

class MetricSystemAP {
public:
    /// Recomputes piece lookups from stored parts; no invariant is enforced
    /// here (see verify_ap_system).
    MetricSystemAP(RadixSchedule schedule, int k, GaugePsi psi, DensityTable density, std::vector<APSet> level_sets,
                   std::vector<PartitionResult> partitions, std::vector<Rational> scales);

    const RadixSchedule& schedule() const { return schedule_; }
    int k() const { return k_; }
    const GaugePsi& psi() const { return psi_; }
    const DensityTable& density() const { return density_; }
    /// Level s in [1, D].
    const APLevel& level(int s) const { return levels_.at(static_cast<std::size_t>(s - 1)); }
    /// sigma_0 > sigma_1 > ... > sigma_D.
    const std::vector<Rational>& scales() const { return scales_; }
    const Rational& scale(int m) const { return scales_.at(static_cast<std::size_t>(m)); }

private:
    RadixSchedule schedule_;
    int k_;
    GaugePsi psi_;
    DensityTable density_;
    std::vector<APLevel> levels_;
    std::vector<Rational> scales_;
};

/// Throws CapacityError (feasible depth in the message) or BuildError.
MetricSystemAP build_ap_system(const APSystemConfig& config);

/// Every build invariant, recomputed from the stored data.
std::vector<InvariantCheck> verify_ap_system(const MetricSystemAP& sys);

Rational d_ap(const MetricSystemAP& sys, const DigitPoint& x, const DigitPoint& y);

/// First index where digits differ (1-based), or 0 when x == y.
int first_difference(const DigitPoint& x, const DigitPoint& y);

const std::vector<Rational>& scale_table(const MetricSystemAP& sys);

class MetricSystemRes {
public:
    explicit MetricSystemRes(RadixSchedule schedule);

    const RadixSchedule& schedule() const { return schedule_; }
    const Rational& f() const { return *schedule_.f(); }
    std::int64_t classes(int m) const { return schedule_.class_count(m); }
    /// a_m(j) = max of the class j at level m.
    std::int64_t class_max(int m, std::int64_t j) const;
    /// x_m in B_m, i.e. x is the top of its class.
    bool is_class_max(int m, std::int64_t digit) const;

private:
    RadixSchedule schedule_;
};

MetricSystemRes build_res_system(const Rational& f, int depth);

std::vector<InvariantCheck> verify_res_system(const MetricSystemRes& sys);

struct ResidueIndex {
    std::int64_t cls;    // j = x mod p_m
    std::int64_t index;  // phi = (x - j)/p_m
    bool operator==(const ResidueIndex&) const = default;
};

ResidueIndex residue_phi(const MetricSystemRes& sys, int level, std::int64_t digit);

/// r_m(x_m, y_m): 1/N_m when equal, |phi(x)-phi(y)|/(f p_m) for distinct digits of one class.
Rational residue_kernel(const MetricSystemRes& sys, int level, std::int64_t a, std::int64_t b);

Rational d_res(const MetricSystemRes& sys, const DigitPoint& x, const DigitPoint& y);

struct TriangleVerdict {
    bool triangle = true;
    std::optional<bool> ultrametric;  // AP metric only
    Rational lhs;                     // d(x, y)
    Rational sum;                     // d(x, z) + d(z, y)
    Rational max;                     // max(d(x, z), d(z, y))
    bool ok() const { return triangle && ultrametric.value_or(true); }
};

TriangleVerdict check_triangle(const MetricSystemAP& sys, const DigitPoint& x, const DigitPoint& y, const DigitPoint& z);
TriangleVerdict check_triangle(const MetricSystemRes& sys, const DigitPoint& x, const DigitPoint& y,
                               const DigitPoint& z);

}  // namespace multirec
