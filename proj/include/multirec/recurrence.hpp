#pragma once

// Orbit statistics, evaluated exactly:
//   multiple recurrence  psi(n)/rho(n) * max_j d(T^{jn} x, x),  j = 1..k-1
//   one-dimensional      n * f * d(T^n x, x)
//   generic constant     n * h(d(T^n x, x))
// plus bad-set thresholds and window scans.

#include "multirec/gauge.hpp"
#include "multirec/metrics.hpp"
#include "multirec/odometer.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace multirec {

struct RecurrenceRecord {
    BigInt n;
    std::vector<Rational> distances;  // d(T^{jn} x, x), j = 1..
    std::optional<Rational> value;    // absent when a flag is set
    bool overflow = false;            // (k-1) n >= P_D: orbit leaves the truncated window
    bool below_resolution = false;    // all D digits returned; true distance unknown
};

using RecordSink = std::function<void(const RecurrenceRecord&)>;

/// rho(n) = rho(P_m) for P_m <= n < P_{m+1}; rho(P_D) beyond. n >= 1.
Rational rho_at(const MetricSystemAP& sys, const BigInt& n);

/// k defaults to the system's progression length.
RecurrenceRecord multi_rec_stat(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n,
                                std::optional<int> k = std::nullopt);

/// floor((P_D - 1)/(k - 1)): largest n whose k-1 orbit steps stay below P_D.
BigInt multi_rec_window_cap(const MetricSystemAP& sys, std::optional<int> k = std::nullopt);

struct Threshold {
    std::optional<int> m0;  // empty: rejected
    bool rejected() const { return !m0.has_value(); }
};

/// Smallest m0 >= 1 with x_s outside B^(s) for every m0 < s <= D; rejected when x_D is in B^(D).
Threshold bad_threshold_ap(const MetricSystemAP& sys, const DigitPoint& x);

/// Same rule with B_m = class maxima.
Threshold bad_threshold_res(const MetricSystemRes& sys, const DigitPoint& x);

struct ScanResult {
    Rational min;
    BigInt argmin;     // first n attaining min
    BigInt evaluated;  // number of n covered
};

/// Every n in [n_lo, n_hi]; records streamed in increasing n. Throws
/// InputError on an empty range and RangeError past the overflow cap.
ScanResult scan_min(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n_lo, const BigInt& n_hi,
                    std::optional<int> k = std::nullopt, const RecordSink& sink = {});

/// One-dimensional statistic as a record (one distance). n < P_D.
RecurrenceRecord cf_record(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n);
/// n f d(T^n x, x); throws RangeError when n >= P_D.
Rational cf_stat(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n);

ScanResult scan_min(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n_lo, const BigInt& n_hi,
                    const RecordSink& sink = {});

/// Exact minimum of n f d(T^n x, x) over [n_lo, n_hi] without visiting each n:
/// n = u P_{t-1} with u != 0 mod N_t has first differing digit t and a
/// distance fixed by u mod N_t, so each (t, u mod N_t) class is minimised
/// at its smallest member.
ScanResult cf_window_min(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n_lo, const BigInt& n_hi);

/// n_m = p_{m+1} P_m for m in [m_lo, m_hi]; requires m_hi + 1 <= D.
std::vector<BigInt> special_times(const MetricSystemRes& sys, int m_lo, int m_hi);

/// n h(d(T^n x, x)); n < P_D.
Rational generic_constant_stat(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n, const GaugeH& h);
Rational generic_constant_stat(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n, const GaugeH& h);

enum class StatisticKind { multi_rec, cf, generic };

std::string to_string(StatisticKind kind);
StatisticKind parse_statistic_kind(std::string_view text);

struct MonteCarloOptions {
    std::size_t samples = 100;  // accepted samples wanted
    std::uint64_t seed = 0;
    std::optional<BigInt> n_lo;  // default: P_{m0(x)}
    std::optional<BigInt> n_hi;  // default: the overflow cap
    StatisticKind kind = StatisticKind::multi_rec;
    GaugeH h{};
    std::size_t max_draws_per_sample = 100;
    /// Receives (accepted sample index, record) for every n scanned. Residue
    /// cf scans then visit each n instead of using cf_window_min.
    std::function<void(std::size_t, const RecurrenceRecord&)> sink;
};

struct SampleOutcome {
    std::size_t draw;  // index of the draw that produced it
    DigitPoint x;
    int m0;
    BigInt n_lo;
    BigInt n_hi;
    ScanResult scan;
};

struct MonteCarloSummary {
    std::size_t draws = 0;
    std::size_t rejected = 0;
    std::vector<SampleOutcome> samples;
    Rational min;
    Rational mean;
    std::vector<Rational> quantiles;  // nearest-rank 0, 1/4, 1/2, 3/4, 1
};

MonteCarloSummary monte_carlo_constant(const MetricSystemAP& sys, const MonteCarloOptions& options);
MonteCarloSummary monte_carlo_constant(const MetricSystemRes& sys, const MonteCarloOptions& options);

/// Seed of the i-th draw derived from a master seed.
std::uint64_t draw_seed(std::uint64_t master, std::size_t draw);

}  // namespace multirec
