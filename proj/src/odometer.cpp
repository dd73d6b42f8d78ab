#include "multirec/odometer.hpp"


namespace multirec {

std::string to_string(ScheduleMode mode) {
    switch (mode) {
        case ScheduleMode::strict: return "strict";
        case ScheduleMode::relaxed: return "relaxed";
        case ScheduleMode::section3: return "section3";
    }
    return "?";
}

ScheduleMode parse_schedule_mode(std::string_view text) {
    if (text == "strict") return ScheduleMode::strict;
    if (text == "relaxed") return ScheduleMode::relaxed;
    if (text == "section3") return ScheduleMode::section3;
    throw InputError("unknown schedule mode '" + std::string(text) + "'");
}

void RadixSchedule::finish() {
    products_.assign(1, BigInt(1));
    for (auto r : radices_) products_.push_back(products_.back() * r);
}

RadixSchedule RadixSchedule::relaxed(std::vector<std::int64_t> radices, std::optional<GaugePsi> psi) {
    if (radices.empty()) throw InputError("schedule needs depth >= 1");
    for (auto r : radices)
        if (r < 2) throw InputError("radices must be >= 2, got " + std::to_string(r));
    if (psi) psi->validate();
    RadixSchedule s;
    s.mode_ = ScheduleMode::relaxed;
    s.radices_ = std::move(radices);
    s.psi_ = psi;
    s.finish();
    return s;
}

namespace {

// 4 alpha_m^-2 max(1, psi(2)) P_{m-1}^2: the squared target for phi(N_m).
Rational strict_target(const GaugePsi& psi, const Rational& alpha_m, const BigInt& prev_product) {
    Rational inv_alpha = Rational(1) / alpha_m;
    return Rational(4) * inv_alpha * inv_alpha * psi.phi_star_squared(BigInt(2)) * Rational(prev_product * prev_product);
}

BigInt strict_radix(const GaugePsi& psi, const Rational& alpha_m, const BigInt& prev_product) {
    BigInt n = psi.ceil_inverse(strict_target(psi, alpha_m, prev_product));
    return n < 2 ? BigInt(2) : n;
}

}  // namespace

RadixSchedule RadixSchedule::strict(const GaugePsi& psi, const Rational& alpha_ratio, int depth,
                                    const RadixBudget& budget) {
    psi.validate();
    if (depth < 1) throw InputError("schedule needs depth >= 1");
    if (alpha_ratio <= 0 || alpha_ratio >= 1) throw InputError("alpha ratio must lie in (0, 1)");
    RadixSchedule s;
    s.mode_ = ScheduleMode::strict;
    s.psi_ = psi;
    s.alpha_ratio_ = alpha_ratio;
    BigInt product = 1;
    for (int m = 1; m <= depth; ++m) {
        BigInt n = strict_radix(psi, rpow(alpha_ratio, static_cast<unsigned>(m)), product);
        BigInt next = product * n;
        if (n > budget.max_radix || next > budget.max_product) {
            throw CapacityError("strict schedule: N_" + std::to_string(m) + " = " + n.str() + " (P_" +
                                std::to_string(m) + " = " + next.str() + ") exceeds the budget (max radix " +
                                std::to_string(budget.max_radix) + ", max product " +
                                std::to_string(budget.max_product) + "); feasible depth is " +
                                std::to_string(m - 1));
        }
        s.radices_.push_back(static_cast<std::int64_t>(n));
        product = next;
    }
    s.finish();
    return s;
}

RadixSchedule RadixSchedule::section3(const Rational& f, int depth) {
    if (f < 1) throw InputError("f must be >= 1, got " + to_string(f));
    if (depth < 1) throw InputError("schedule needs depth >= 1");
    RadixSchedule s;
    s.mode_ = ScheduleMode::section3;
    s.f_ = f;
    for (int m = 1; m <= depth; ++m) {
        BigInt p = ceil(f * Rational(BigInt(1) << m));
        s.radices_.push_back(to_int64(p * p, "section3 radix"));
    }
    s.finish();
    return s;
}

RadixSchedule RadixSchedule::from_parts(ScheduleMode mode, std::vector<std::int64_t> radices,
                                        std::optional<GaugePsi> psi, std::optional<Rational> alpha_ratio,
                                        std::optional<Rational> f) {
    if (radices.empty()) throw InputError("schedule needs depth >= 1");
    RadixSchedule s;
    s.mode_ = mode;
    s.radices_ = std::move(radices);
    s.psi_ = std::move(psi);
    s.alpha_ratio_ = std::move(alpha_ratio);
    s.f_ = std::move(f);
    s.finish();
    return s;
}

Rational RadixSchedule::alpha(int m) const {
    if (!alpha_ratio_) throw InputError("schedule has no alpha sequence");
    return rpow(*alpha_ratio_, static_cast<unsigned>(m));
}

std::int64_t RadixSchedule::class_count(int m) const {
    if (!f_) throw InputError("schedule has no residue classes (not section3)");
    if (m < 1 || m > depth()) throw RangeError("level " + std::to_string(m) + " outside [1, D]");
    return static_cast<std::int64_t>(iroot_floor(BigInt(radix(m)), 2));
}

std::vector<std::string> verify_schedule(const RadixSchedule& s) {
    std::vector<std::string> bad;
    BigInt product = 1;
    for (int m = 1; m <= s.depth(); ++m) {
        const std::int64_t n = s.radix(m);
        if (n < 2) bad.push_back("N_" + std::to_string(m) + " < 2");
        if (s.mode() == ScheduleMode::strict) {
            if (!s.psi() || !s.alpha_ratio()) {
                bad.push_back("strict schedule without psi/alpha");
                break;
            }
            Rational target = strict_target(*s.psi(), s.alpha(m), product);
            if ((*s.psi())(BigInt(n)) < target)
                bad.push_back("psi(N_" + std::to_string(m) + ") below 4 alpha^-2 phi*(2)^2 P_{m-1}^2");
            if (n > 2 && (*s.psi())(BigInt(n - 1)) >= target)
                bad.push_back("N_" + std::to_string(m) + " is not the least admissible radix");
        }
        if (s.mode() == ScheduleMode::section3) {
            if (!s.f()) {
                bad.push_back("section3 schedule without f");
                break;
            }
            BigInt p = ceil(*s.f() * Rational(BigInt(1) << m));
            if (p * p != n) bad.push_back("N_" + std::to_string(m) + " != ceil(f 2^m)^2");
        }
        product *= n;
        if (product != s.product(m)) bad.push_back("P_" + std::to_string(m) + " inconsistent");
    }
    return bad;
}

void require_on_schedule(const RadixSchedule& s, const DigitPoint& x) {
    if (static_cast<int>(x.digits.size()) != s.depth())
        throw InputError("point depth " + std::to_string(x.digits.size()) + " does not match schedule depth " +
                         std::to_string(s.depth()));
    for (int i = 1; i <= s.depth(); ++i) {
        auto d = x.digits[static_cast<std::size_t>(i - 1)];
        if (d < 0 || d >= s.radix(i))
            throw InputError("digit x_" + std::to_string(i) + " = " + std::to_string(d) + " outside [0, " +
                             std::to_string(s.radix(i)) + ")");
    }
}

DigitPoint from_integer(const RadixSchedule& s, const BigInt& n) {
    if (n < 0 || n >= s.total()) throw RangeError("integer " + n.str() + " outside [0, " + s.total().str() + ")");
    DigitPoint x;
    BigInt rest = n;
    for (auto r : s.radices()) {
        BigInt q, digit;
        boost::multiprecision::divide_qr(rest, BigInt(r), q, digit);
        x.digits.push_back(static_cast<std::int64_t>(digit));
        rest = std::move(q);
    }
    return x;
}

BigInt to_integer(const RadixSchedule& s, const DigitPoint& x) {
    require_on_schedule(s, x);
    BigInt n = 0;
    for (int i = s.depth(); i >= 1; --i) n = n * s.radix(i) + x.digits[static_cast<std::size_t>(i - 1)];
    return n;
}

Advanced advance(const RadixSchedule& s, const DigitPoint& x, const BigInt& n) {
    require_on_schedule(s, x);
    if (n < 0) throw InputError("advance by a negative amount");
    Advanced out{x, false};
    auto& digits = out.point.digits;
    if (n <= BigInt(INT64_MAX / 2)) {
        std::int64_t carry = static_cast<std::int64_t>(n);
        for (std::size_t i = 0; i < digits.size() && carry != 0; ++i) {
            const std::int64_t radix = s.radices()[i];
            std::int64_t total = digits[i] + carry;  // both < 2^62
            digits[i] = total % radix;
            carry = total / radix;
        }
        out.overflowed = carry != 0;
        return out;
    }
    BigInt carry = n;
    for (std::size_t i = 0; i < digits.size() && carry != 0; ++i) {
        BigInt q, digit;
        boost::multiprecision::divide_qr(BigInt(carry + digits[i]), BigInt(s.radices()[i]), q, digit);
        digits[i] = static_cast<std::int64_t>(digit);
        carry = std::move(q);
    }
    out.overflowed = carry != 0;
    return out;
}

DigitRng::DigitRng(std::uint64_t seed) : state_(seed) {}

std::uint64_t DigitRng::next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::int64_t DigitRng::below(std::int64_t bound) {
    if (bound < 1) throw InputError("draw bound must be positive");
    const auto b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % b);
    std::uint64_t v;
    do {
        v = next();
    } while (v >= limit);
    return static_cast<std::int64_t>(v % b);
}

DigitPoint sample_point(const RadixSchedule& s, std::uint64_t seed) {
    DigitRng rng(seed);
    DigitPoint x;
    for (auto r : s.radices()) x.digits.push_back(rng.below(r));
    return x;
}

Rational cylinder_measure(const RadixSchedule& s, int rank) {
    if (rank < 0 || rank > s.depth()) throw RangeError("cylinder rank " + std::to_string(rank) + " outside [0, D]");
    return Rational(BigInt(1), s.product(rank));
}

}  // namespace multirec
