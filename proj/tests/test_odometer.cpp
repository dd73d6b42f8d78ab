#include "multirec/odometer.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace multirec;
using multirec::test::R;

namespace {

RadixSchedule small() { return RadixSchedule::relaxed({3, 2}); }

}  // namespace

TEST_CASE("mixed radix conversion") {
    RadixSchedule s = small();
    CHECK(from_integer(s, 0).digits == std::vector<std::int64_t>{0, 0});
    CHECK(from_integer(s, 5).digits == std::vector<std::int64_t>{2, 1});
    CHECK_THROWS_AS(from_integer(s, 6), RangeError);
    CHECK_THROWS_AS(from_integer(s, -1), RangeError);
    CHECK(to_integer(s, DigitPoint{{0, 0}}) == 0);
    CHECK(to_integer(s, DigitPoint{{2, 1}}) == 5);
    CHECK_THROWS_AS(to_integer(s, DigitPoint{{3, 0}}), InputError);
    CHECK_THROWS_AS(to_integer(s, DigitPoint{{0}}), InputError);
}

TEST_CASE("products") {
    RadixSchedule s = RadixSchedule::relaxed({3, 2, 7});
    CHECK(s.depth() == 3);
    CHECK(s.radix(0) == 1);
    CHECK(s.product(0) == 1);
    CHECK(s.product(1) == 3);
    CHECK(s.product(2) == 6);
    CHECK(s.total() == 42);
    CHECK_THROWS_AS(RadixSchedule::relaxed({3, 1}), InputError);
    CHECK_THROWS_AS(RadixSchedule::relaxed({}), InputError);
}

TEST_CASE("advance examples") {
    RadixSchedule s = small();
    Advanced a = advance(s, DigitPoint{{2, 1}}, 1);
    CHECK(a.point.digits == std::vector<std::int64_t>{0, 0});
    CHECK(a.overflowed);
    Advanced b = advance(s, DigitPoint{{1, 0}}, 1);
    CHECK(b.point.digits == std::vector<std::int64_t>{2, 0});
    CHECK_FALSE(b.overflowed);
    Advanced c = advance(s, DigitPoint{{2, 0}}, 1);
    CHECK(c.point.digits == std::vector<std::int64_t>{0, 1});
    CHECK_FALSE(c.overflowed);
    CHECK(advance(s, DigitPoint{{1, 1}}, 0).point.digits == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("advance equals integer addition mod P_D") {
    std::vector<RadixSchedule> schedules{RadixSchedule::relaxed({3, 2}), RadixSchedule::relaxed({10, 10, 10, 10}),
                                         RadixSchedule::section3(1, 3), RadixSchedule::section3(5, 3),
                                         RadixSchedule::relaxed({4096, 4096, 4096, 4096, 4096})};
    for (const auto& s : schedules) {
        for (int trial = 0; trial < 1000; ++trial) {
            DigitPoint x = sample_point(s, static_cast<std::uint64_t>(trial) * 7919u + 3u);
            BigInt v = to_integer(s, x);
            CHECK(from_integer(s, v) == x);
            BigInt n = BigInt(test::uniform(0, INT64_MAX)) * test::uniform(0, 1000) % (s.total() * 3);
            if (trial % 5 == 0) n = test::uniform(0, 50);
            Advanced a = advance(s, x, n);
            CHECK(a.point == from_integer(s, (v + n) % s.total()));
            CHECK(a.overflowed == (v + n >= s.total()));
        }
    }
}

TEST_CASE("advance composes") {
    RadixSchedule s = RadixSchedule::relaxed({5, 3, 4});
    for (std::int64_t v = 0; v < 60; ++v)
        for (std::int64_t a = 0; a < 70; a += 3)
            for (std::int64_t b = 0; b < 70; b += 7) {
                DigitPoint x = from_integer(s, v);
                Advanced ab = advance(s, x, a + b);
                Advanced first = advance(s, x, a);
                Advanced second = advance(s, first.point, b);
                CHECK(second.point == ab.point);
                // a full wrap of P_D = 60 can happen at most once for a + b < 140 + 60
                CHECK((first.overflowed || second.overflowed) == ab.overflowed);
            }
}

TEST_CASE("one step permutes the truncated space") {
    for (const auto& s : {RadixSchedule::relaxed({3, 2}), RadixSchedule::section3(1, 3), RadixSchedule::relaxed({7, 11, 13})}) {
        std::set<BigInt> images;
        std::size_t wraps = 0;
        for (BigInt v = 0; v < s.total(); ++v) {
            Advanced a = advance(s, from_integer(s, v), 1);
            images.insert(to_integer(s, a.point));
            if (a.overflowed) ++wraps;
        }
        CHECK(BigInt(static_cast<std::int64_t>(images.size())) == s.total());
        CHECK(wraps == 1);
    }
}

TEST_CASE("sampling") {
    RadixSchedule s = RadixSchedule::relaxed({2, 3, 10, 17});
    CHECK(sample_point(s, 42) == sample_point(s, 42));
    CHECK_FALSE(sample_point(s, 42) == sample_point(s, 43));
    const int draws = 10000;
    std::vector<std::vector<int>> hist;
    for (auto r : s.radices()) hist.emplace_back(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < draws; ++i) {
        DigitPoint x = sample_point(s, static_cast<std::uint64_t>(i));
        for (std::size_t d = 0; d < x.digits.size(); ++d) ++hist[d][static_cast<std::size_t>(x.digits[d])];
    }
    for (std::size_t d = 0; d < hist.size(); ++d) {
        const double p = 1.0 / static_cast<double>(hist[d].size());
        const double mean = draws * p;
        const double sigma = std::sqrt(draws * p * (1 - p));
        for (int c : hist[d]) CHECK(std::abs(c - mean) <= 5 * sigma);
    }
}

TEST_CASE("bounded draws are in range and deterministic") {
    DigitRng a(9), b(9);
    for (int i = 0; i < 1000; ++i) {
        auto v = a.below(7);
        CHECK(v == b.below(7));
        CHECK(v >= 0);
        CHECK(v < 7);
    }
    CHECK_THROWS_AS(a.below(0), InputError);
}

TEST_CASE("cylinder measure") {
    RadixSchedule s = small();
    CHECK(cylinder_measure(s, 0) == 1);
    CHECK(cylinder_measure(s, 1) == R("1/3"));
    CHECK(cylinder_measure(s, 2) == R("1/6"));
    CHECK_THROWS_AS(cylinder_measure(s, 3), RangeError);
    CHECK_THROWS_AS(cylinder_measure(s, -1), RangeError);
}

TEST_CASE("strict schedule") {
    GaugePsi psi{1, 2};
    RadixSchedule s1 = RadixSchedule::strict(psi, R("1/2"), 1);
    // psi(N_1) >= 4 * 4 * max(1, psi(2)) * 1 = 64
    CHECK(s1.radix(1) == 8);
    RadixSchedule s2 = RadixSchedule::strict(psi, R("1/2"), 2);
    CHECK(s2.radices() == std::vector<std::int64_t>{8, 128});
    CHECK(s2.alpha(1) == R("1/2"));
    CHECK(s2.alpha(2) == R("1/4"));
    CHECK(verify_schedule(s2).empty());
    for (int m = 1; m <= 2; ++m) {
        const Rational need = Rational(4) / (s2.alpha(m) * s2.alpha(m)) * psi.phi_star_squared(2) *
                              Rational(s2.product(m - 1) * s2.product(m - 1));
        CHECK(psi(BigInt(s2.radix(m))) >= need);
        CHECK(psi(BigInt(s2.radix(m) - 1)) < need);
    }
    CHECK_THROWS_AS(RadixSchedule::strict(psi, R("1/2"), 3), CapacityError);
    CHECK_THROWS_AS(RadixSchedule::strict(psi, R("1/2"), 4), CapacityError);
    try {
        RadixSchedule::strict(psi, R("1/2"), 4);
    } catch (const CapacityError& e) {
        CHECK(std::string(e.what()).find("feasible depth is 2") != std::string::npos);
    }
    RadixBudget roomy{1 << 20, std::int64_t(1) << 40};
    CHECK(RadixSchedule::strict(psi, R("1/2"), 3, roomy).radix(3) == 32768);
    CHECK_THROWS_AS(RadixSchedule::strict(psi, R("3/2"), 1), InputError);
    CHECK_THROWS_AS(RadixSchedule::strict(psi, R("0"), 1), InputError);

    // a tampered radix is reported
    RadixSchedule bad = RadixSchedule::from_parts(ScheduleMode::strict, {8, 127}, psi, R("1/2"), std::nullopt);
    CHECK_FALSE(verify_schedule(bad).empty());
    RadixSchedule loose = RadixSchedule::from_parts(ScheduleMode::strict, {9, 128}, psi, R("1/2"), std::nullopt);
    CHECK_FALSE(verify_schedule(loose).empty());
}

TEST_CASE("section3 schedule") {
    RadixSchedule s = RadixSchedule::section3(1, 2);
    CHECK(s.radices() == std::vector<std::int64_t>{4, 16});
    CHECK(s.class_count(1) == 2);
    CHECK(s.class_count(2) == 4);
    RadixSchedule h = RadixSchedule::section3(R("3/2"), 2);
    CHECK(h.radices() == std::vector<std::int64_t>{9, 36});
    CHECK(h.class_count(1) == 3);
    RadixSchedule five = RadixSchedule::section3(5, 3);
    CHECK(five.radices() == std::vector<std::int64_t>{100, 400, 1600});
    CHECK(five.total() == 64000000);
    CHECK(verify_schedule(five).empty());
    CHECK_THROWS_AS(RadixSchedule::section3(R("1/2"), 2), InputError);
    RadixSchedule bad = RadixSchedule::from_parts(ScheduleMode::section3, {4, 15}, std::nullopt, std::nullopt, Rational(1));
    CHECK_FALSE(verify_schedule(bad).empty());
}

TEST_CASE("schedule mode names") {
    for (auto m : {ScheduleMode::strict, ScheduleMode::relaxed, ScheduleMode::section3})
        CHECK(parse_schedule_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_schedule_mode("loose"), InputError);
}
