#pragma once

// Adding machine on depth-D mixed-radix digit vectors (x_1, ..., x_D),
// 0 <= x_i < N_i, identified with the integer sum x_i * P_{i-1}.
// Digits past D are implicitly zero.

#include "multirec/gauge.hpp"
#include "multirec/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multirec {

enum class ScheduleMode { strict, relaxed, section3 };

std::string to_string(ScheduleMode mode);
ScheduleMode parse_schedule_mode(std::string_view text);

struct RadixBudget {
    std::int64_t max_radix = 4096;
    std::int64_t max_product = 131072;
};

class RadixSchedule {
public:
    /// User radices, each >= 2.
    static RadixSchedule relaxed(std::vector<std::int64_t> radices, std::optional<GaugePsi> psi = std::nullopt);

    /// N_m = least integer with psi(N_m) >= 4 alpha_m^-2 max(1, psi(2)) P_{m-1}^2,
    /// alpha_m = ratio^m. Throws CapacityError (naming the feasible depth)
    /// once a radix or P_D leaves the budget.
    static RadixSchedule strict(const GaugePsi& psi, const Rational& alpha_ratio, int depth,
                                const RadixBudget& budget = {});

    /// p_m = ceil(f 2^m), N_m = p_m^2.
    static RadixSchedule section3(const Rational& f, int depth);

    ScheduleMode mode() const { return mode_; }
    int depth() const { return static_cast<int>(radices_.size()); }
    /// N_m for 0 <= m <= D (N_0 = 1).
    std::int64_t radix(int m) const { return m == 0 ? 1 : radices_.at(static_cast<std::size_t>(m - 1)); }
    const std::vector<std::int64_t>& radices() const { return radices_; }
    /// P_m = N_0 ... N_m for 0 <= m <= D.
    const BigInt& product(int m) const { return products_.at(static_cast<std::size_t>(m)); }
    const BigInt& total() const { return products_.back(); }

    const std::optional<GaugePsi>& psi() const { return psi_; }
    const std::optional<Rational>& alpha_ratio() const { return alpha_ratio_; }
    /// alpha_m = ratio^m (strict mode only).
    Rational alpha(int m) const;
    const std::optional<Rational>& f() const { return f_; }
    /// p_m (section3 mode only), 1 <= m <= D.
    std::int64_t class_count(int m) const;

    /// Rebuilds from stored fields without recomputing radices.
    static RadixSchedule from_parts(ScheduleMode mode, std::vector<std::int64_t> radices, std::optional<GaugePsi> psi,
                                    std::optional<Rational> alpha_ratio, std::optional<Rational> f);

    bool operator==(const RadixSchedule&) const = default;

private:
    RadixSchedule() = default;
    void finish();

    ScheduleMode mode_ = ScheduleMode::relaxed;
    std::vector<std::int64_t> radices_;
    std::vector<BigInt> products_;
    std::optional<GaugePsi> psi_;
    std::optional<Rational> alpha_ratio_;
    std::optional<Rational> f_;
};

/// Lists every violated schedule invariant (empty when consistent).
std::vector<std::string> verify_schedule(const RadixSchedule& s);

struct DigitPoint {
    std::vector<std::int64_t> digits;  // x_1..x_D
    bool operator==(const DigitPoint&) const = default;
};

/// Throws InputError when the point does not belong to the schedule.
void require_on_schedule(const RadixSchedule& s, const DigitPoint& x);

DigitPoint from_integer(const RadixSchedule& s, const BigInt& n);
BigInt to_integer(const RadixSchedule& s, const DigitPoint& x);

struct Advanced {
    DigitPoint point;
    bool overflowed;  // a carry left digit D; digits hold the sum mod P_D
};

/// T^n x: add n with carries.
Advanced advance(const RadixSchedule& s, const DigitPoint& x, const BigInt& n);

/// Independent uniform digits, deterministic in the seed.
DigitPoint sample_point(const RadixSchedule& s, std::uint64_t seed);

/// Measure of a rank-l elementary cylinder: 1/P_l.
Rational cylinder_measure(const RadixSchedule& s, int rank);

/// Unbiased draw in [0, bound) from a 64-bit engine; identical across platforms.
class DigitRng {
public:
    explicit DigitRng(std::uint64_t seed);
    std::int64_t below(std::int64_t bound);
    std::uint64_t next();

private:
    std::uint64_t state_;
};

}  // namespace multirec
