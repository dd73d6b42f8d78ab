#include "multirec/recurrence.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace multirec;
using multirec::test::R;

namespace {

MetricSystemAP relaxed(std::vector<std::int64_t> radices, DensityStrategy strategy = DensityStrategy::greedy) {
    APSystemConfig c;
    c.mode = ScheduleMode::relaxed;
    c.radices = std::move(radices);
    c.strategy = strategy;
    return build_ap_system(c);
}

std::vector<DigitPoint> all_points(const RadixSchedule& s) {
    std::vector<DigitPoint> pts;
    for (BigInt v = 0; v < s.total(); ++v) pts.push_back(from_integer(s, v));
    return pts;
}

// Integer arithmetic instead of carries, piece lookup by search, rho by the
// literal "P_m <= n < P_{m+1}" rule.
Rational multi_rec_oracle(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n) {
    const RadixSchedule& s = sys.schedule();
    const BigInt v = to_integer(s, x);
    Rational worst(0);
    for (int j = 1; j < sys.k(); ++j) {
        DigitPoint y = from_integer(s, (v + n * j) % s.total());
        int t = first_difference(x, y);
        const auto& part = sys.level(t).partition;
        auto group = [&](std::int64_t d) {
            for (std::size_t i = 0; i < part.parts.size(); ++i)
                if (std::binary_search(part.parts[i].begin(), part.parts[i].end(), d)) return static_cast<int>(i);
            return -1;
        };
        const int m = group(x.digits[static_cast<std::size_t>(t - 1)]) == group(y.digits[static_cast<std::size_t>(t - 1)])
                          ? t
                          : t - 1;
        worst = std::max(worst, sys.density().rho(static_cast<std::int64_t>(s.product(m))) / sys.psi()(s.product(m)));
    }
    int m = 0;
    for (int i = 1; i <= s.depth(); ++i)
        if (s.product(i) <= n) m = i;
    return sys.psi()(n) / sys.density().rho(static_cast<std::int64_t>(s.product(m))) * worst;
}

}  // namespace

TEST_CASE("rho_at") {
    MetricSystemAP sys = relaxed({8, 8});
    CHECK(rho_at(sys, 1) == 1);
    CHECK(rho_at(sys, 7) == 1);
    CHECK(rho_at(sys, 8) == sys.density().rho(8));
    CHECK(rho_at(sys, 63) == sys.density().rho(8));
    CHECK(rho_at(sys, 64) == sys.density().rho(64));
    CHECK(rho_at(sys, 10000) == sys.density().rho(64));
    CHECK_THROWS_AS(rho_at(sys, 0), InputError);
    Rational prev = 2;
    Rational prev_ratio = 0;
    for (std::int64_t n = 1; n <= 64; ++n) {
        Rational r = rho_at(sys, n);
        CHECK(r <= prev);
        Rational ratio = sys.psi()(BigInt(n)) / r;
        CHECK(ratio >= prev_ratio);
        prev = r;
        prev_ratio = ratio;
    }
}

TEST_CASE("multi_rec_stat overflow and resolution") {
    MetricSystemAP sys = relaxed({8, 8});
    DigitPoint x{{1, 2}};
    CHECK(multi_rec_window_cap(sys) == 31);
    RecurrenceRecord over = multi_rec_stat(sys, x, 32);
    CHECK(over.overflow);
    CHECK_FALSE(over.value.has_value());
    RecurrenceRecord ok = multi_rec_stat(sys, x, 31);
    CHECK_FALSE(ok.overflow);
    CHECK(ok.value.has_value());
    CHECK(ok.distances.size() == 2);
    CHECK(multi_rec_stat(sys, x, 16, 5).overflow);
    CHECK_THROWS_AS(multi_rec_stat(sys, x, 0), InputError);
}

TEST_CASE("orbit steps of P_1 keep digit 1 and stay within sigma_1") {
    MetricSystemAP sys = relaxed({8, 8, 8});
    for (const auto& x : all_points(sys.schedule())) {
        if (sys.level(1).in_remainder(x.digits[0])) continue;
        RecurrenceRecord r = multi_rec_stat(sys, x, 8);
        for (const auto& d : r.distances) CHECK(d <= sys.scale(1));
    }
}

TEST_CASE("multi_rec_stat matches a straight-line oracle") {
    for (const auto& sys : {relaxed({8, 8}), relaxed({4, 6, 5}), relaxed({8, 8}, DensityStrategy::best_of)}) {
        const BigInt cap = multi_rec_window_cap(sys);
        for (const auto& x : all_points(sys.schedule()))
            for (BigInt n = 1; n <= cap; ++n) {
                RecurrenceRecord r = multi_rec_stat(sys, x, n);
                REQUIRE(r.value.has_value());
                CHECK(*r.value == multi_rec_oracle(sys, x, n));
                Rational worst = *std::max_element(r.distances.begin(), r.distances.end());
                CHECK(*r.value == sys.psi()(n) / rho_at(sys, n) * worst);
            }
    }
}

TEST_CASE("bad_threshold_ap") {
    MetricSystemAP sys = relaxed({8, 8, 8});
    // every level: pieces of {0,1,3}, B = {6}
    for (int s = 1; s <= 3; ++s) REQUIRE(sys.level(s).partition.remainder == std::vector<std::int64_t>{6});
    CHECK(*bad_threshold_ap(sys, DigitPoint{{0, 0, 0}}).m0 == 1);
    CHECK(*bad_threshold_ap(sys, DigitPoint{{6, 0, 0}}).m0 == 1);
    CHECK(*bad_threshold_ap(sys, DigitPoint{{0, 6, 0}}).m0 == 2);
    CHECK(*bad_threshold_ap(sys, DigitPoint{{6, 6, 1}}).m0 == 2);
    CHECK(bad_threshold_ap(sys, DigitPoint{{0, 0, 6}}).rejected());
    CHECK_THROWS_AS(bad_threshold_ap(sys, DigitPoint{{0, 0}}), InputError);
}

TEST_CASE("scan_min windows") {
    MetricSystemAP sys = relaxed({8, 8, 8});
    DigitPoint x{{2, 5, 1}};
    std::vector<RecurrenceRecord> seen;
    ScanResult one = scan_min(sys, x, 20, 20, std::nullopt, [&](const RecurrenceRecord& r) { seen.push_back(r); });
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].n == 20);
    CHECK(one.min == *seen[0].value);
    CHECK(one.argmin == 20);
    CHECK(one.evaluated == 1);
    CHECK_THROWS_AS(scan_min(sys, x, 5, 4), InputError);
    CHECK_THROWS_AS(scan_min(sys, x, 0, 4), InputError);
    CHECK_THROWS_AS(scan_min(sys, x, 1, 256), RangeError);

    // brute force over a 100-point window
    ScanResult w = scan_min(sys, x, 100, 199);
    Rational best = *multi_rec_stat(sys, x, 100).value;
    BigInt arg = 100;
    for (BigInt n = 101; n <= 199; ++n) {
        Rational v = *multi_rec_stat(sys, x, n).value;
        if (v < best) {
            best = v;
            arg = n;
        }
    }
    CHECK(w.min == best);
    CHECK(w.argmin == arg);
    CHECK(w.evaluated == 100);
}

TEST_CASE("multiple recurrence statistic is at least 1 past the threshold") {
    for (const auto& sys : {relaxed({8, 8, 8}), relaxed({10, 10, 10}, DensityStrategy::best_of)}) {
        const BigInt cap = multi_rec_window_cap(sys);
        std::size_t checked = 0;
        for (const auto& x : all_points(sys.schedule())) {
            Threshold th = bad_threshold_ap(sys, x);
            if (th.rejected()) continue;
            const BigInt lo = sys.schedule().product(*th.m0);
            if (lo > cap) continue;
            ScanResult r = scan_min(sys, x, lo, cap);
            CHECK(r.min >= 1);
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("special times") {
    MetricSystemRes one = build_res_system(1, 3);
    CHECK(special_times(one, 1, 1) == std::vector<BigInt>{16});
    CHECK(special_times(one, 0, 0) == std::vector<BigInt>{2});
    CHECK(special_times(one, 0, 2) == std::vector<BigInt>{2, 16, 512});
    CHECK_THROWS_AS(special_times(one, 0, 3), RangeError);
    CHECK_THROWS_AS(special_times(one, -1, 1), RangeError);
    for (const auto& f : {R("1"), R("3/2"), R("5")}) {
        MetricSystemRes sys = build_res_system(f, 3);
        auto times = special_times(sys, 0, 2);
        for (int m = 0; m <= 2; ++m) {
            CHECK(times[static_cast<std::size_t>(m)] >= sys.schedule().product(m));
            CHECK(times[static_cast<std::size_t>(m)] < sys.schedule().product(m + 1));
        }
    }
}

TEST_CASE("bad_threshold_res") {
    MetricSystemRes sys = build_res_system(1, 3);  // radices 4, 16, 64; class tops are the last p digits
    CHECK(*bad_threshold_res(sys, DigitPoint{{0, 0, 0}}).m0 == 1);
    CHECK(*bad_threshold_res(sys, DigitPoint{{3, 0, 0}}).m0 == 1);
    CHECK(*bad_threshold_res(sys, DigitPoint{{2, 0, 0}}).m0 == 1);
    CHECK(*bad_threshold_res(sys, DigitPoint{{0, 13, 5}}).m0 == 2);
    CHECK(bad_threshold_res(sys, DigitPoint{{0, 0, 63}}).rejected());
    CHECK(bad_threshold_res(sys, DigitPoint{{0, 0, 56}}).rejected());
    CHECK(*bad_threshold_res(sys, DigitPoint{{0, 0, 55}}).m0 == 1);
}

TEST_CASE("cf statistic cases") {
    for (const auto& f : {R("1"), R("3/2"), R("5/4")}) {
        MetricSystemRes sys = build_res_system(f, 3);
        const RadixSchedule& s = sys.schedule();
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            DigitPoint x = sample_point(s, seed);
            Threshold th = bad_threshold_res(sys, x);
            if (th.rejected()) continue;
            // special times at or above the threshold are exactly 1
            for (int m = *th.m0; m + 1 <= s.depth(); ++m) {
                BigInt n = special_times(sys, m, m)[0];
                CHECK(cf_stat(sys, x, n) == 1);
            }
            // multiples of P_m whose digit m+1 changes class
            for (int m = *th.m0; m + 1 <= s.depth(); ++m) {
                BigInt n = s.product(m);
                if (sys.classes(m + 1) == 1) continue;
                CHECK(cf_stat(sys, x, n) >= f);
            }
        }
        CHECK_THROWS_AS(cf_stat(sys, sample_point(s, 1), s.total()), RangeError);
        CHECK(cf_record(sys, sample_point(s, 1), s.total()).overflow);
    }
}

TEST_CASE("grouped window minimum equals the brute-force scan") {
    for (const auto& f : {R("1"), R("3/2"), R("5/4")}) {
        MetricSystemRes sys = build_res_system(f, 3);
        const RadixSchedule& s = sys.schedule();
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            DigitPoint x = sample_point(s, seed * 31 + 7);
            const BigInt lo = test::uniform(1, 300);
            const BigInt hi = std::min<BigInt>(s.total() - 1, lo + test::uniform(0, 6000));
            ScanResult brute = scan_min(sys, x, lo, hi);
            ScanResult grouped = cf_window_min(sys, x, lo, hi);
            CHECK(grouped.min == brute.min);
            CHECK(grouped.argmin == brute.argmin);
            CHECK(grouped.evaluated == brute.evaluated);
        }
    }
}

TEST_CASE("cf statistic is at least 1 past the threshold") {
    MetricSystemRes sys = build_res_system(1, 3);
    const RadixSchedule& s = sys.schedule();
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        DigitPoint x = sample_point(s, seed);
        Threshold th = bad_threshold_res(sys, x);
        if (th.rejected()) continue;
        ScanResult r = scan_min(sys, x, s.product(*th.m0), s.total() - 1);
        CHECK(r.min == 1);
    }
}

TEST_CASE("generic constant statistic") {
    MetricSystemRes sys = build_res_system(1, 2);
    DigitPoint x{{1, 5}};
    for (BigInt n = 1; n < 64; ++n) {
        Rational d = d_res(sys, advance(sys.schedule(), x, n).point, x);
        CHECK(generic_constant_stat(sys, x, n, GaugeH{1, 1}) == Rational(n) * d);
        CHECK(generic_constant_stat(sys, x, n, GaugeH{1, 2}) == Rational(n) * d * d);
        CHECK(generic_constant_stat(sys, x, n, GaugeH{1, 1}) == Rational(n) * d);
    }
    CHECK_THROWS_AS(generic_constant_stat(sys, x, 64, GaugeH{}), RangeError);
    // monotone in d for fixed n
    GaugeH h{R("3/2"), 3};
    CHECK(h(R("1/4")) < h(R("1/3")));
    MetricSystemAP ap = relaxed({8, 8});
    DigitPoint y{{1, 1}};
    Rational d = d_ap(ap, advance(ap.schedule(), y, 9).point, y);
    CHECK(generic_constant_stat(ap, y, 9, GaugeH{1, 1}) == 9 * d);
}

TEST_CASE("Monte Carlo over the residue system") {
    MetricSystemRes sys = build_res_system(1, 3);
    MonteCarloOptions opt;
    opt.samples = 100;
    opt.seed = 11;
    opt.kind = StatisticKind::cf;
    MonteCarloSummary a = monte_carlo_constant(sys, opt);
    CHECK(a.samples.size() == 100);
    CHECK(a.draws == a.samples.size() + a.rejected);
    CHECK(a.min == 1);
    CHECK(a.mean == 1);
    for (const auto& o : a.samples) CHECK(o.scan.min == 1);
    MonteCarloSummary b = monte_carlo_constant(sys, opt);
    CHECK(b.draws == a.draws);
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i].x == b.samples[i].x);

    std::vector<std::size_t> order;
    MonteCarloOptions streamed = opt;
    streamed.samples = 3;
    streamed.sink = [&](std::size_t i, const RecurrenceRecord&) { order.push_back(i); };
    MonteCarloSummary c = monte_carlo_constant(sys, streamed);
    CHECK(std::is_sorted(order.begin(), order.end()));
    CHECK(order.back() == 2);
    for (std::size_t i = 0; i < 3; ++i) CHECK(c.samples[i].scan.min == a.samples[i].scan.min);

    MonteCarloOptions empty = opt;
    empty.n_lo = 10;
    empty.n_hi = 9;
    CHECK_THROWS_AS(monte_carlo_constant(sys, empty), InputError);
    MonteCarloOptions wrong = opt;
    wrong.kind = StatisticKind::multi_rec;
    CHECK_THROWS_AS(monte_carlo_constant(sys, wrong), InputError);
    MonteCarloOptions none = opt;
    none.samples = 0;
    CHECK_THROWS_AS(monte_carlo_constant(sys, none), InputError);
}

TEST_CASE("Monte Carlo over an AP system") {
    MetricSystemAP sys = relaxed({10, 10, 10});
    MonteCarloOptions opt;
    opt.samples = 20;
    opt.seed = 5;
    MonteCarloSummary s = monte_carlo_constant(sys, opt);
    CHECK(s.samples.size() == 20);
    CHECK(s.min >= 1);
    CHECK(s.quantiles.size() == 5);
    CHECK(s.quantiles.front() == s.min);
    CHECK(std::is_sorted(s.quantiles.begin(), s.quantiles.end()));
    opt.kind = StatisticKind::cf;
    CHECK_THROWS_AS(monte_carlo_constant(sys, opt), InputError);
}

TEST_CASE("statistic names") {
    for (auto k : {StatisticKind::multi_rec, StatisticKind::cf, StatisticKind::generic})
        CHECK(parse_statistic_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_statistic_kind("liminf"), InputError);
    CHECK(draw_seed(1, 0) == draw_seed(1, 0));
    CHECK(draw_seed(1, 0) != draw_seed(1, 1));
}
