#include "multirec/metrics.hpp"

#include <algorithm>
#include <functional>

namespace multirec {

bool all_ok(const std::vector<InvariantCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.ok; });
}

MetricSystemAP::MetricSystemAP(RadixSchedule schedule, int k, GaugePsi psi, DensityTable density,
                               std::vector<APSet> level_sets, std::vector<PartitionResult> partitions,
                               std::vector<Rational> scales)
    : schedule_(std::move(schedule)), k_(k), psi_(std::move(psi)), density_(std::move(density)),
      scales_(std::move(scales)) {
    if (static_cast<int>(level_sets.size()) != schedule_.depth() || partitions.size() != level_sets.size())
        throw InputError("AP system needs one set and one partition per level");
    if (static_cast<int>(scales_.size()) != schedule_.depth() + 1)
        throw InputError("AP system needs D+1 scale values");
    for (int s = 1; s <= schedule_.depth(); ++s) {
        APLevel level{std::move(level_sets[static_cast<std::size_t>(s - 1)]),
                      std::move(partitions[static_cast<std::size_t>(s - 1)]),
                      std::vector<std::int32_t>(static_cast<std::size_t>(schedule_.radix(s)), -1)};
        auto assign = [&](const std::vector<std::int64_t>& members, std::int32_t idx) {
            for (auto v : members)
                if (v >= 0 && v < schedule_.radix(s)) level.piece_of[static_cast<std::size_t>(v)] = idx;
        };
        for (std::size_t i = 0; i < level.partition.parts.size(); ++i)
            assign(level.partition.parts[i], static_cast<std::int32_t>(i));
        assign(level.partition.remainder, level.remainder_piece());
        levels_.push_back(std::move(level));
    }
}

MetricSystemAP build_ap_system(const APSystemConfig& config) {
    if (config.k < 3) throw InputError("k must be >= 3");
    if (config.depth < 1) throw InputError("depth must be >= 1");
    config.psi.validate();

    RadixSchedule schedule = [&] {
        if (config.mode == ScheduleMode::strict)
            return RadixSchedule::strict(config.psi, config.alpha_ratio, config.depth, config.budget);
        if (config.mode == ScheduleMode::relaxed) {
            return RadixSchedule::relaxed(config.radices, config.psi);
        }
        throw InputError("AP systems use strict or relaxed schedules");
    }();
    for (int m = 1; m <= schedule.depth(); ++m) {
        if (schedule.radix(m) > config.budget.max_radix || schedule.product(m) > config.budget.max_product)
            throw CapacityError("level " + std::to_string(m) + " exceeds the budget (max radix " +
                                std::to_string(config.budget.max_radix) + ", max product " +
                                std::to_string(config.budget.max_product) + "); feasible depth is " +
                                std::to_string(m - 1));
    }

    std::vector<std::int64_t> ns{1};
    for (int m = 1; m <= schedule.depth(); ++m) {
        ns.push_back(schedule.radix(m));
        ns.push_back(static_cast<std::int64_t>(schedule.product(m)));
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    DensityTable density = build_density_table(ns, config.k, config.strategy, {config.exhaustive_cap});

    std::vector<APSet> sets;
    std::vector<PartitionResult> partitions;
    for (int s = 1; s <= schedule.depth(); ++s) {
        const std::int64_t n = schedule.radix(s);
        APSet set = density.find(n)->set;
        partitions.push_back(partition(set, config.psi(BigInt(n))));
        sets.push_back(std::move(set));
    }

    std::vector<Rational> scales;
    for (int m = 0; m <= schedule.depth(); ++m) {
        const BigInt& p = schedule.product(m);
        scales.push_back(density.rho(static_cast<std::int64_t>(p)) / config.psi(p));
    }
    // rho non-increasing and psi strictly increasing make this hold; it is
    // what lets d < sigma_m imply d <= sigma_{m+1}.
    for (std::size_t m = 1; m < scales.size(); ++m)
        if (!(scales[m] < scales[m - 1]))
            throw BuildError("scale table not strictly decreasing at m=" + std::to_string(m));

    return MetricSystemAP(std::move(schedule), config.k, config.psi, std::move(density), std::move(sets),
                          std::move(partitions), std::move(scales));
}

namespace {

InvariantCheck run_check(std::string name, const std::function<std::string()>& body) {
    try {
        std::string problem = body();
        return {std::move(name), problem.empty(), problem};
    } catch (const std::exception& e) {
        return {std::move(name), false, e.what()};
    }
}

}  // namespace

std::vector<InvariantCheck> verify_ap_system(const MetricSystemAP& sys) {
    std::vector<InvariantCheck> out;
    const RadixSchedule& s = sys.schedule();
    const DensityTable& table = sys.density();

    out.push_back(run_check("schedule", [&]() -> std::string {
        auto bad = verify_schedule(s);
        return bad.empty() ? "" : bad.front();
    }));
    out.push_back(run_check("psi gauge", [&]() -> std::string {
        sys.psi().validate();
        return "";
    }));
    out.push_back(run_check("density: sorted points, rho(1) = 1", [&]() -> std::string {
        if (table.points.empty() || table.points.front().n != 1) return "first point is not N=1";
        if (table.points.front().rho != 1) return "rho(1) != 1";
        for (std::size_t i = 1; i < table.points.size(); ++i)
            if (table.points[i].n <= table.points[i - 1].n) return "points not strictly increasing";
        return "";
    }));
    out.push_back(run_check("density: covers every N_s and P_m", [&]() -> std::string {
        for (int m = 1; m <= s.depth(); ++m) {
            if (!table.find(s.radix(m))) return "missing N_" + std::to_string(m);
            if (!table.find(static_cast<std::int64_t>(s.product(m)))) return "missing P_" + std::to_string(m);
        }
        return "";
    }));
    out.push_back(run_check("density: rho = |A|/N exactly", [&]() -> std::string {
        for (const auto& p : table.points)
            if (p.rho != Rational(BigInt(static_cast<std::int64_t>(p.set.size())), BigInt(p.n)))
                return "rho mismatch at N=" + std::to_string(p.n);
        return "";
    }));
    out.push_back(run_check("density: non-increasing", [&]() -> std::string {
        for (std::size_t i = 1; i < table.points.size(); ++i)
            if (table.points[i].rho > table.points[i - 1].rho)
                return "rho increases at N=" + std::to_string(table.points[i].n);
        return "";
    }));
    out.push_back(run_check("density: every set cyclic " + std::to_string(sys.k()) + "-AP-free", [&]() -> std::string {
        for (const auto& p : table.points) {
            if (p.set.n != p.n) return "set modulus differs from N=" + std::to_string(p.n);
            for (std::size_t i = 1; i < p.set.elements.size(); ++i)
                if (p.set.elements[i] <= p.set.elements[i - 1]) return "set at N=" + std::to_string(p.n) + " not sorted/unique";
            auto v = check_ap_free(p.set.elements, p.n, sys.k(), APMode::cyclic);
            if (!v.ok())
                return "progression at N=" + std::to_string(p.n) + " start " + std::to_string(v.witness->start) +
                       " diff " + std::to_string(v.witness->diff);
        }
        return "";
    }));
    for (int lvl = 1; lvl <= s.depth(); ++lvl) {
        const APLevel& level = sys.level(lvl);
        const std::int64_t n = s.radix(lvl);
        const std::string tag = "level " + std::to_string(lvl) + ": ";
        out.push_back(run_check(tag + "A^(s) is the density set at N_s and AP-free", [&]() -> std::string {
            const DensityPoint* p = table.find(n);
            if (!p) return "no density point";
            if (level.set.elements != p->set.elements) return "level set differs from density set";
            auto v = check_ap_free(level.set.elements, n, sys.k(), APMode::cyclic);
            return v.ok() ? "" : "level set contains a progression";
        }));
        out.push_back(run_check(tag + "Tijdeman partition at phi^2 = psi(N_s)", [&]() -> std::string {
            const PartitionResult& r = level.partition;
            if (r.n != n) return "partition modulus differs";
            if (r.base != level.set.elements) return "partition base differs from A^(s)";
            if (r.phi_squared != sys.psi()(BigInt(n))) return "phi^2 != psi(N_s)";
            auto verdict = verify_partition(r);
            if (!verdict.ok()) return "violates " + to_string(verdict.violations.front());
            return "";
        }));
    }
    out.push_back(run_check("scales: sigma_m = rho(P_m)/psi(P_m)", [&]() -> std::string {
        if (static_cast<int>(sys.scales().size()) != s.depth() + 1) return "wrong length";
        for (int m = 0; m <= s.depth(); ++m) {
            const BigInt& p = s.product(m);
            if (sys.scale(m) != table.rho(static_cast<std::int64_t>(p)) / sys.psi()(p))
                return "sigma_" + std::to_string(m) + " mismatch";
        }
        return "";
    }));
    out.push_back(run_check("scales: strictly decreasing", [&]() -> std::string {
        for (std::size_t m = 1; m < sys.scales().size(); ++m)
            if (!(sys.scales()[m] < sys.scales()[m - 1])) return "not decreasing at m=" + std::to_string(m);
        return "";
    }));
    return out;
}

int first_difference(const DigitPoint& x, const DigitPoint& y) {
    const std::size_t n = std::min(x.digits.size(), y.digits.size());
    for (std::size_t i = 0; i < n; ++i)
        if (x.digits[i] != y.digits[i]) return static_cast<int>(i) + 1;
    return 0;
}

Rational d_ap(const MetricSystemAP& sys, const DigitPoint& x, const DigitPoint& y) {
    require_on_schedule(sys.schedule(), x);
    require_on_schedule(sys.schedule(), y);
    const int t = first_difference(x, y);
    if (t == 0) return Rational(0);
    const APLevel& level = sys.level(t);
    const auto a = level.piece(x.digits[static_cast<std::size_t>(t - 1)]);
    const auto b = level.piece(y.digits[static_cast<std::size_t>(t - 1)]);
    return a == b && a >= 0 ? sys.scale(t) : sys.scale(t - 1);
}

const std::vector<Rational>& scale_table(const MetricSystemAP& sys) { return sys.scales(); }

MetricSystemRes::MetricSystemRes(RadixSchedule schedule) : schedule_(std::move(schedule)) {
    if (schedule_.mode() != ScheduleMode::section3 || !schedule_.f())
        throw InputError("residue metric needs a section3 schedule");
}

std::int64_t MetricSystemRes::class_max(int m, std::int64_t j) const {
    const std::int64_t p = classes(m);
    if (j < 0 || j >= p) throw RangeError("class index outside [0, p_m)");
    return j + (p - 1) * p;
}

bool MetricSystemRes::is_class_max(int m, std::int64_t digit) const {
    return residue_phi(*this, m, digit).index == classes(m) - 1;
}

MetricSystemRes build_res_system(const Rational& f, int depth) {
    if (depth < 2) throw InputError("residue system needs depth >= 2");
    return MetricSystemRes(RadixSchedule::section3(f, depth));
}

std::vector<InvariantCheck> verify_res_system(const MetricSystemRes& sys) {
    std::vector<InvariantCheck> out;
    const RadixSchedule& s = sys.schedule();
    out.push_back(run_check("schedule", [&]() -> std::string {
        auto bad = verify_schedule(s);
        return bad.empty() ? "" : bad.front();
    }));
    out.push_back(run_check("f >= 1", [&]() -> std::string { return sys.f() >= 1 ? "" : "f < 1"; }));
    out.push_back(run_check("classes: p_m classes of size p_m partition [0, N_m)", [&]() -> std::string {
        for (int m = 1; m <= s.depth(); ++m) {
            const std::int64_t p = sys.classes(m);
            if (p * p != s.radix(m)) return "p_m^2 != N_m at m=" + std::to_string(m);
            std::vector<std::int64_t> size(static_cast<std::size_t>(p), 0);
            for (std::int64_t x = 0; x < s.radix(m); ++x) {
                auto idx = residue_phi(sys, m, x);
                if (idx.index < 0 || idx.index >= p) return "phi out of range";
                if (idx.cls + idx.index * p != x) return "index map not inverse";
                ++size[static_cast<std::size_t>(idx.cls)];
            }
            for (auto c : size)
                if (c != p) return "unequal class sizes at m=" + std::to_string(m);
        }
        return "";
    }));
    out.push_back(run_check("kernel: 1/N_m <= r_m <= 1", [&]() -> std::string {
        for (int m = 1; m <= s.depth(); ++m) {
            const std::int64_t p = sys.classes(m);
            // extremes: equal digits and the two ends of a class
            Rational lo = residue_kernel(sys, m, 0, 0);
            Rational hi = residue_kernel(sys, m, 0, (p - 1) * p);
            Rational near = p > 1 ? residue_kernel(sys, m, 0, p) : lo;
            Rational low_bound(BigInt(1), BigInt(s.radix(m)));
            if (lo < low_bound || hi > 1 || near < low_bound) return "kernel bound fails at m=" + std::to_string(m);
        }
        return "";
    }));
    return out;
}

ResidueIndex residue_phi(const MetricSystemRes& sys, int level, std::int64_t digit) {
    const std::int64_t n = sys.schedule().radix(level);
    if (digit < 0 || digit >= n) throw RangeError("digit outside [0, N_m)");
    const std::int64_t p = sys.classes(level);
    return {digit % p, digit / p};
}

Rational residue_kernel(const MetricSystemRes& sys, int level, std::int64_t a, std::int64_t b) {
    if (a == b) return Rational(BigInt(1), BigInt(sys.schedule().radix(level)));
    auto ia = residue_phi(sys, level, a);
    auto ib = residue_phi(sys, level, b);
    if (ia.cls != ib.cls) throw InputError("kernel is defined within one residue class");
    const std::int64_t gap = ia.index > ib.index ? ia.index - ib.index : ib.index - ia.index;
    return Rational(gap) / (sys.f() * sys.classes(level));
}

Rational d_res(const MetricSystemRes& sys, const DigitPoint& x, const DigitPoint& y) {
    require_on_schedule(sys.schedule(), x);
    require_on_schedule(sys.schedule(), y);
    const int t = first_difference(x, y);
    if (t == 0) return Rational(0);
    const std::int64_t a = x.digits[static_cast<std::size_t>(t - 1)];
    const std::int64_t b = y.digits[static_cast<std::size_t>(t - 1)];
    const std::int64_t p = sys.classes(t);
    const BigInt& prefix = sys.schedule().product(t - 1);
    if (a % p == b % p) return residue_kernel(sys, t, a, b) / Rational(prefix);
    // Level t-1 identifies: r_{t-1}(x,x)/P_{t-2} = 1/P_{t-1}; empty prefix gives 1.
    return Rational(BigInt(1), prefix);
}

namespace {

template <class Dist>
TriangleVerdict triangle(Dist&& d, const DigitPoint& x, const DigitPoint& y, const DigitPoint& z, bool ultra) {
    TriangleVerdict v;
    v.lhs = d(x, y);
    Rational xz = d(x, z);
    Rational zy = d(z, y);
    v.sum = xz + zy;
    v.max = xz > zy ? xz : zy;
    v.triangle = v.lhs <= v.sum;
    if (ultra) v.ultrametric = v.lhs <= v.max;
    return v;
}

}  // namespace

TriangleVerdict check_triangle(const MetricSystemAP& sys, const DigitPoint& x, const DigitPoint& y,
                               const DigitPoint& z) {
    return triangle([&](const DigitPoint& a, const DigitPoint& b) { return d_ap(sys, a, b); }, x, y, z, true);
}

TriangleVerdict check_triangle(const MetricSystemRes& sys, const DigitPoint& x, const DigitPoint& y,
                               const DigitPoint& z) {
    return triangle([&](const DigitPoint& a, const DigitPoint& b) { return d_res(sys, a, b); }, x, y, z, false);
}

}  // namespace multirec
