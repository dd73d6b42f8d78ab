#include "multirec/hausdorff.hpp"

#include <algorithm>
#include <map>

namespace multirec {

std::string to_string(PartKind kind) {
    switch (kind) {
        case PartKind::piece: return "U";
        case PartKind::remainder: return "B";
        case PartKind::cylinder: return "C";
    }
    return "?";
}

bool CoveringReport::ok() const {
    return std::all_of(chain.begin(), chain.end(), [](const ChainStep& s) { return s.ok; });
}

namespace {

// Diameter of {x : prefix fixed through m, x_m = one digit}: the first
// difference sits at some t > m.
std::pair<Rational, bool> singleton_diameter(const MetricSystemAP& sys, int m) {
    const int depth = sys.schedule().depth();
    for (int t = m + 1; t <= depth; ++t) {
        const APLevel& lvl = sys.level(t);
        std::size_t nonempty = lvl.partition.remainder.empty() ? 0 : 1;
        bool wide_piece = lvl.partition.remainder.size() >= 2;
        for (const auto& part : lvl.partition.parts) {
            if (!part.empty()) ++nonempty;
            if (part.size() >= 2) wide_piece = true;
        }
        if (nonempty >= 2) return {sys.scale(t - 1), false};
        if (wide_piece) return {sys.scale(t), false};
    }
    return {sys.scale(depth), true};
}

std::vector<std::int64_t> prefix_digits(const RadixSchedule& s, const BigInt& index, int length) {
    std::vector<std::int64_t> digits;
    BigInt rest = index;
    for (int i = 1; i <= length; ++i) {
        digits.push_back(static_cast<std::int64_t>(rest % s.radix(i)));
        rest /= s.radix(i);
    }
    return digits;
}

ChainStep step(std::string label, Surd lhs, Surd rhs) {
    bool ok = surd_leq(lhs, rhs);
    return {std::move(label), std::move(lhs), std::move(rhs), ok};
}

}  // namespace

CoveringReport proof_covering_sum(const MetricSystemAP& sys, int m) {
    const RadixSchedule& s = sys.schedule();
    if (m < 1 || m > s.depth()) throw RangeError("covering level " + std::to_string(m) + " outside [1, D]");
    const APLevel& level = sys.level(m);
    const auto& pieces = level.partition.parts;
    const auto& remainder = level.partition.remainder;
    const Rational& sigma = sys.scale(m);
    const Rational cell(BigInt(1), s.product(m));

    auto diameter_of = [&](std::size_t size) -> std::pair<Rational, bool> {
        if (size >= 2) return {sigma, false};
        return singleton_diameter(sys, m);
    };

    CoveringReport report;
    report.level = m;
    report.sum = 0;
    const BigInt prefixes = s.product(m - 1);
    for (BigInt a = 0; a < prefixes; ++a) {
        auto prefix = prefix_digits(s, a, m - 1);
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].empty()) continue;
            auto [diam, bounded] = diameter_of(pieces[i].size());
            report.sum += diam;
            report.parts.push_back(CoveringPart{PartKind::piece, prefix, static_cast<int>(i), std::move(diam),
                                                cell * static_cast<std::int64_t>(pieces[i].size()), bounded});
        }
        if (!remainder.empty()) {
            auto [diam, bounded] = diameter_of(remainder.size());
            report.sum += diam;
            report.parts.push_back(CoveringPart{PartKind::remainder, prefix, std::nullopt, std::move(diam),
                                                cell * static_cast<std::int64_t>(remainder.size()), bounded});
        }
    }

    // Chain links, all exact; phi(N_m) = sqrt(psi(N_m)) carried as a surd.
    const BigInt nm(s.radix(m));
    const Rational psi_n = sys.psi()(nm);
    const Rational rho_n = sys.density().rho(s.radix(m));
    const Rational rho_p = sys.density().rho(static_cast<std::int64_t>(s.product(m)));
    const Rational psi_p = sys.psi()(s.product(m));
    const Rational f_count(prefixes);
    const Rational l(static_cast<std::int64_t>(pieces.size()));

    Surd total = Surd::rational(report.sum);
    Surd counted = Surd::rational(f_count * (l + 1) * sigma);
    Surd c1{f_count * sigma, f_count * sigma / rho_n, psi_n};
    Surd c2{Rational(0), Rational(2) * f_count * rho_p / (rho_n * psi_p), psi_n};
    Surd c3{Rational(0), Rational(2) * f_count / psi_n, psi_n};

    report.chain.push_back(step("sum diam <= |F_{m-1}| (l(m)+1) sigma_m", total, counted));
    report.chain.push_back(step("|F_{m-1}| (l(m)+1) sigma_m <= |F_{m-1}| (phi(N_m)/rho(N_m) + 1) sigma_m", counted, c1));
    report.chain.push_back(step("... <= 2 P_{m-1} phi(N_m) rho(P_m) / (rho(N_m) psi(P_m))", c1, c2));
    report.chain.push_back(step("... <= 2 P_{m-1} phi(N_m) / psi(N_m)", c2, c3));
    if (s.mode() == ScheduleMode::strict && s.alpha_ratio()) {
        Rational alpha = s.alpha(m);
        report.alpha = alpha;
        // alpha_m phi(N_m)^2 / psi(N_m) = alpha_m
        report.chain.push_back(step("... <= alpha_m", c3, Surd::rational(alpha)));
        report.chain.push_back(step("sum diam <= alpha_m", total, Surd::rational(alpha)));
    }
    return report;
}

bool covering_is_partition(const MetricSystemAP& sys, const CoveringReport& report, const BigInt& limit) {
    const RadixSchedule& s = sys.schedule();
    if (s.total() > limit)
        throw CapacityError("partition check enumerates P_D = " + s.total().str() + " points (limit " + limit.str() + ")");
    const int m = report.level;
    const PartitionResult& part = sys.level(m).partition;

    // (prefix, piece) -> hit count; piece = parts.size() stands for B
    std::map<std::pair<std::vector<std::int64_t>, std::size_t>, std::int64_t> hits;
    for (const auto& p : report.parts) {
        std::size_t piece = p.kind == PartKind::remainder ? part.parts.size() : static_cast<std::size_t>(*p.piece);
        if (!hits.emplace(std::make_pair(p.prefix, piece), 0).second) return false;  // listed twice
    }
    for (BigInt v = 0; v < s.total(); ++v) {
        DigitPoint x = from_integer(s, v);
        std::vector<std::int64_t> prefix(x.digits.begin(), x.digits.begin() + (m - 1));
        const std::int64_t digit = x.digits[static_cast<std::size_t>(m - 1)];
        std::size_t found = 0;
        std::size_t owner = part.parts.size();
        for (std::size_t i = 0; i < part.parts.size(); ++i) {
            if (std::binary_search(part.parts[i].begin(), part.parts[i].end(), digit)) {
                ++found;
                owner = i;
            }
        }
        if (std::binary_search(part.remainder.begin(), part.remainder.end(), digit)) ++found;
        if (found != 1) return false;
        auto it = hits.find({prefix, owner});
        if (it == hits.end()) return false;
        ++it->second;
    }
    for (const auto& p : report.parts) {
        std::size_t piece = p.kind == PartKind::remainder ? part.parts.size() : static_cast<std::size_t>(*p.piece);
        // every listed part is hit by exactly measure * P_D points
        Rational expected = p.measure * Rational(s.total());
        if (Rational(hits[{p.prefix, piece}]) != expected) return false;
    }
    return true;
}

CylinderDiameter cylinder_diam(const MetricSystemRes& sys, const std::vector<std::int64_t>& prefix) {
    const RadixSchedule& s = sys.schedule();
    const int rank = static_cast<int>(prefix.size());
    if (rank > s.depth() - 1)
        throw CapacityError("rank-" + std::to_string(rank) + " cylinder has no free digit at depth " +
                            std::to_string(s.depth()));
    DigitPoint x{std::vector<std::int64_t>(static_cast<std::size_t>(s.depth()), 0)};
    std::copy(prefix.begin(), prefix.end(), x.digits.begin());
    require_on_schedule(s, x);
    DigitPoint y = x;

    Rational best(0);
    for (int t = rank + 1; t <= s.depth(); ++t) {
        // pairs first differing at t are at most 1/P_{t-1} apart
        const Rational cap(BigInt(1), s.product(t - 1));
        if (best >= cap) break;
        const std::size_t idx = static_cast<std::size_t>(t - 1);
        for (std::int64_t a = 0; a < s.radix(t) && best < cap; ++a) {
            x.digits[idx] = a;
            for (std::int64_t b = a + 1; b < s.radix(t) && best < cap; ++b) {
                y.digits[idx] = b;
                Rational d = d_res(sys, x, y);
                if (d > best) best = std::move(d);
            }
        }
        x.digits[idx] = 0;
        y.digits[idx] = 0;
    }
    return {best, cylinder_measure(s, rank)};
}

PartitionSum partition_diam_sum(const MetricSystemRes& sys, std::uint64_t seed, std::size_t max_parts) {
    const RadixSchedule& s = sys.schedule();
    DigitRng rng(seed);
    // d_res inside a cylinder ignores the shared prefix; one enumeration per rank.
    std::map<int, Rational> diameter;
    auto diam = [&](const std::vector<std::int64_t>& prefix) -> const Rational& {
        const int rank = static_cast<int>(prefix.size());
        auto it = diameter.find(rank);
        if (it == diameter.end()) it = diameter.emplace(rank, cylinder_diam(sys, prefix).diameter).first;
        return it->second;
    };

    PartitionSum out;
    out.sum = 0;
    std::size_t pending = 1;  // leaves if every open node stopped now
    std::vector<std::vector<std::int64_t>> stack{{}};
    while (!stack.empty()) {
        auto prefix = std::move(stack.back());
        stack.pop_back();
        const int rank = static_cast<int>(prefix.size());
        const bool can_split = rank < s.depth() - 1 &&
                               pending + static_cast<std::size_t>(s.radix(rank + 1)) - 1 <= max_parts;
        if (can_split && rng.below(2) == 1) {
            pending += static_cast<std::size_t>(s.radix(rank + 1)) - 1;
            for (std::int64_t a = s.radix(rank + 1) - 1; a >= 0; --a) {
                auto child = prefix;
                child.push_back(a);
                stack.push_back(std::move(child));
            }
            continue;
        }
        out.sum += diam(prefix);
        ++out.parts;
        out.max_rank = std::max(out.max_rank, rank);
    }
    return out;
}

DeltaCovering h1_delta_estimate(const MetricSystemAP& sys, const Rational& delta) {
    if (delta <= 0) throw InputError("delta must be positive");
    for (int m = 1; m <= sys.schedule().depth(); ++m) {
        if (!(sys.scale(m) < delta)) continue;
        DeltaCovering out;
        out.level = m;
        CoveringReport report = proof_covering_sum(sys, m);
        out.part_count = BigInt(static_cast<std::int64_t>(report.parts.size()));
        out.sum = report.sum;
        out.max_diameter = 0;
        for (const auto& p : report.parts)
            if (p.diameter > out.max_diameter) out.max_diameter = p.diameter;
        out.all_below_delta = out.max_diameter < delta;
        out.report = std::move(report);
        return out;
    }
    throw CapacityError("no level within depth " + std::to_string(sys.schedule().depth()) +
                        " has scale below delta = " + to_string(delta));
}

DeltaCovering h1_delta_estimate(const MetricSystemRes& sys, const Rational& delta) {
    if (delta <= 0) throw InputError("delta must be positive");
    const RadixSchedule& s = sys.schedule();
    for (int m = 0; m <= s.depth() - 1; ++m) {
        if (!(Rational(BigInt(1), s.product(m)) < delta)) continue;
        CylinderDiameter d = cylinder_diam(sys, std::vector<std::int64_t>(static_cast<std::size_t>(m), 0));
        DeltaCovering out;
        out.level = m;
        out.part_count = s.product(m);
        out.sum = d.diameter * Rational(s.product(m));
        out.max_diameter = d.diameter;
        out.all_below_delta = d.diameter < delta;
        return out;
    }
    throw CapacityError("no cylinder rank below depth " + std::to_string(s.depth()) +
                        " has diameter below delta = " + to_string(delta));
}

}  // namespace multirec
