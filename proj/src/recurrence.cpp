#include "multirec/recurrence.hpp"

#include <algorithm>

namespace multirec {

Rational rho_at(const MetricSystemAP& sys, const BigInt& n) {
    if (n < 1) throw InputError("rho_at needs n >= 1");
    const RadixSchedule& s = sys.schedule();
    int m = 0;
    while (m < s.depth() && s.product(m + 1) <= n) ++m;
    return sys.density().rho(static_cast<std::int64_t>(s.product(m)));
}

BigInt multi_rec_window_cap(const MetricSystemAP& sys, std::optional<int> k) {
    const int kk = k.value_or(sys.k());
    return (sys.schedule().total() - 1) / (kk - 1);
}

RecurrenceRecord multi_rec_stat(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n,
                                std::optional<int> k) {
    const int kk = k.value_or(sys.k());
    if (kk < 2) throw InputError("k must be >= 2");
    if (n < 1) throw InputError("multi_rec_stat needs n >= 1");
    RecurrenceRecord rec;
    rec.n = n;
    if (BigInt(kk - 1) * n >= sys.schedule().total()) {
        rec.overflow = true;
        return rec;
    }
    Rational worst(0);
    for (int j = 1; j < kk; ++j) {
        Advanced y = advance(sys.schedule(), x, n * j);
        if (y.point == x) {
            rec.below_resolution = true;
            rec.distances.clear();
            return rec;
        }
        Rational d = d_ap(sys, y.point, x);
        if (d > worst) worst = d;
        rec.distances.push_back(std::move(d));
    }
    rec.value = sys.psi()(n) / rho_at(sys, n) * worst;
    return rec;
}

Threshold bad_threshold_ap(const MetricSystemAP& sys, const DigitPoint& x) {
    require_on_schedule(sys.schedule(), x);
    const int depth = sys.schedule().depth();
    int last_bad = 0;
    for (int s = 1; s <= depth; ++s)
        if (sys.level(s).in_remainder(x.digits[static_cast<std::size_t>(s - 1)])) last_bad = s;
    if (last_bad == depth) return {};
    return {std::max(1, last_bad)};
}

Threshold bad_threshold_res(const MetricSystemRes& sys, const DigitPoint& x) {
    require_on_schedule(sys.schedule(), x);
    const int depth = sys.schedule().depth();
    int last_bad = 0;
    for (int s = 1; s <= depth; ++s)
        if (sys.is_class_max(s, x.digits[static_cast<std::size_t>(s - 1)])) last_bad = s;
    if (last_bad == depth) return {};
    return {std::max(1, last_bad)};
}

namespace {

void require_window(const BigInt& n_lo, const BigInt& n_hi, const BigInt& cap) {
    if (n_lo < 1 || n_lo > n_hi)
        throw InputError("empty scan window [" + n_lo.str() + ", " + n_hi.str() + "]");
    if (n_hi > cap) throw RangeError("scan window end " + n_hi.str() + " exceeds the no-overflow cap " + cap.str());
}

template <class Eval>
ScanResult scan_values(const BigInt& n_lo, const BigInt& n_hi, Eval&& eval, const RecordSink& sink) {
    ScanResult out{Rational(0), BigInt(0), BigInt(0)};
    bool first = true;
    for (BigInt n = n_lo; n <= n_hi; ++n) {
        RecurrenceRecord rec = eval(n);
        if (sink) sink(rec);
        ++out.evaluated;
        if (!rec.value) continue;
        if (first || *rec.value < out.min) {
            out.min = *rec.value;
            out.argmin = n;
            first = false;
        }
    }
    if (first) throw InputError("scan window produced no values");
    return out;
}

}  // namespace

ScanResult scan_min(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n_lo, const BigInt& n_hi,
                    std::optional<int> k, const RecordSink& sink) {
    require_on_schedule(sys.schedule(), x);
    require_window(n_lo, n_hi, multi_rec_window_cap(sys, k));
    return scan_values(n_lo, n_hi, [&](const BigInt& n) { return multi_rec_stat(sys, x, n, k); }, sink);
}

RecurrenceRecord cf_record(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n) {
    if (n < 1) throw InputError("cf statistic needs n >= 1");
    RecurrenceRecord rec;
    rec.n = n;
    if (n >= sys.schedule().total()) {
        rec.overflow = true;
        return rec;
    }
    Advanced y = advance(sys.schedule(), x, n);
    Rational d = d_res(sys, y.point, x);
    rec.value = Rational(n) * sys.f() * d;
    rec.distances.push_back(std::move(d));
    return rec;
}

Rational cf_stat(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n) {
    RecurrenceRecord rec = cf_record(sys, x, n);
    if (!rec.value) throw RangeError("n = " + n.str() + " is not below P_D = " + sys.schedule().total().str());
    return *rec.value;
}

ScanResult scan_min(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n_lo, const BigInt& n_hi,
                    const RecordSink& sink) {
    require_on_schedule(sys.schedule(), x);
    require_window(n_lo, n_hi, sys.schedule().total() - 1);
    return scan_values(n_lo, n_hi, [&](const BigInt& n) { return cf_record(sys, x, n); }, sink);
}

ScanResult cf_window_min(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n_lo, const BigInt& n_hi) {
    const RadixSchedule& s = sys.schedule();
    require_on_schedule(s, x);
    require_window(n_lo, n_hi, s.total() - 1);

    ScanResult out{Rational(0), BigInt(0), BigInt(0)};
    bool first = true;
    for (int t = 1; t <= s.depth(); ++t) {
        const BigInt& step = s.product(t - 1);
        const std::int64_t radix = s.radix(t);
        const std::int64_t p = sys.classes(t);
        const std::int64_t digit = x.digits[static_cast<std::size_t>(t - 1)];
        const BigInt u_lo = (n_lo + step - 1) / step;
        const BigInt u_hi = n_hi / step;
        if (u_lo > u_hi) continue;
        // number of u in [u_lo, u_hi] with u != 0 mod N_t
        const BigInt multiples = u_hi / radix - (u_lo - 1) / radix;
        out.evaluated += (u_hi - u_lo + 1) - multiples;
        const std::int64_t base = static_cast<std::int64_t>(u_lo % radix);
        for (std::int64_t v = 1; v < radix; ++v) {
            const BigInt u = u_lo + ((v - base) % radix + radix) % radix;
            if (u > u_hi) continue;
            const std::int64_t moved = (digit + v) % radix;
            // d(T^n x, x) with first difference at t
            Rational d = (moved % p == digit % p) ? residue_kernel(sys, t, moved, digit) / Rational(step)
                                                  : Rational(BigInt(1), step);
            const BigInt n = u * step;
            Rational value = Rational(n) * sys.f() * d;
            if (first || value < out.min || (value == out.min && n < out.argmin)) {
                out.min = std::move(value);
                out.argmin = n;
                first = false;
            }
        }
    }
    if (first) throw InputError("scan window produced no values");
    return out;
}

std::vector<BigInt> special_times(const MetricSystemRes& sys, int m_lo, int m_hi) {
    const int depth = sys.schedule().depth();
    if (m_lo < 0 || m_hi + 1 > depth || m_lo > m_hi)
        throw RangeError("special times need 0 <= m_lo <= m_hi <= D-1");
    std::vector<BigInt> out;
    for (int m = m_lo; m <= m_hi; ++m) out.push_back(BigInt(sys.classes(m + 1)) * sys.schedule().product(m));
    return out;
}

Rational generic_constant_stat(const MetricSystemAP& sys, const DigitPoint& x, const BigInt& n, const GaugeH& h) {
    if (n < 1 || n >= sys.schedule().total()) throw RangeError("generic statistic needs 1 <= n < P_D");
    Advanced y = advance(sys.schedule(), x, n);
    return Rational(n) * h(d_ap(sys, y.point, x));
}

Rational generic_constant_stat(const MetricSystemRes& sys, const DigitPoint& x, const BigInt& n, const GaugeH& h) {
    if (n < 1 || n >= sys.schedule().total()) throw RangeError("generic statistic needs 1 <= n < P_D");
    Advanced y = advance(sys.schedule(), x, n);
    return Rational(n) * h(d_res(sys, y.point, x));
}

std::string to_string(StatisticKind kind) {
    switch (kind) {
        case StatisticKind::multi_rec: return "multi_rec";
        case StatisticKind::cf: return "cf";
        case StatisticKind::generic: return "generic";
    }
    return "?";
}

StatisticKind parse_statistic_kind(std::string_view text) {
    if (text == "multi_rec") return StatisticKind::multi_rec;
    if (text == "cf") return StatisticKind::cf;
    if (text == "generic") return StatisticKind::generic;
    throw InputError("unknown statistic kind '" + std::string(text) + "'");
}

std::uint64_t draw_seed(std::uint64_t master, std::size_t draw) {
    DigitRng rng(master ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(draw) + 1)));
    return rng.next();
}

namespace {

template <class Sys, class Threshold, class Cap, class Scan>
MonteCarloSummary run_monte_carlo(const Sys& sys, const MonteCarloOptions& options, Threshold&& threshold, Cap&& cap,
                                  Scan&& scan) {
    if (options.samples == 0) throw InputError("Monte Carlo needs at least one sample");
    if (options.n_lo && options.n_hi && *options.n_lo > *options.n_hi)
        throw InputError("empty Monte Carlo window");
    options.h.validate();
    const RadixSchedule& s = sys.schedule();
    MonteCarloSummary summary;
    const std::size_t max_draws = options.samples * options.max_draws_per_sample;
    while (summary.samples.size() < options.samples && summary.draws < max_draws) {
        const std::size_t draw = summary.draws++;
        DigitPoint x = sample_point(s, draw_seed(options.seed, draw));
        auto th = threshold(x);
        if (th.rejected()) {
            ++summary.rejected;
            continue;
        }
        BigInt lo = options.n_lo.value_or(s.product(*th.m0));
        BigInt hi = options.n_hi.value_or(cap());
        if (lo > hi) {
            ++summary.rejected;
            continue;
        }
        RecordSink sink;
        if (options.sink) {
            const std::size_t index = summary.samples.size();
            sink = [&options, index](const RecurrenceRecord& rec) { options.sink(index, rec); };
        }
        ScanResult r = scan(x, lo, hi, sink);
        summary.samples.push_back(SampleOutcome{draw, std::move(x), *th.m0, std::move(lo), std::move(hi), std::move(r)});
    }
    if (summary.samples.empty()) throw InputError("Monte Carlo: every draw was rejected");

    std::vector<Rational> minima;
    Rational total(0);
    for (const auto& o : summary.samples) {
        minima.push_back(o.scan.min);
        total += o.scan.min;
    }
    std::sort(minima.begin(), minima.end());
    summary.min = minima.front();
    summary.mean = total / Rational(static_cast<std::int64_t>(minima.size()));
    for (int quarter = 0; quarter <= 4; ++quarter) {
        // nearest rank: ceil(q * count) - 1, clamped to 0
        std::size_t rank = (quarter * minima.size() + 3) / 4;
        summary.quantiles.push_back(minima[rank == 0 ? 0 : rank - 1]);
    }
    return summary;
}

template <class Sys>
ScanResult generic_scan(const Sys& sys, const DigitPoint& x, const BigInt& lo, const BigInt& hi, const GaugeH& h,
                        const RecordSink& sink) {
    return scan_values(
        lo, hi,
        [&](const BigInt& n) {
            RecurrenceRecord rec;
            rec.n = n;
            rec.value = generic_constant_stat(sys, x, n, h);
            return rec;
        },
        sink);
}

}  // namespace

MonteCarloSummary monte_carlo_constant(const MetricSystemAP& sys, const MonteCarloOptions& options) {
    if (options.kind == StatisticKind::cf) throw InputError("cf statistic needs a residue system");
    return run_monte_carlo(
        sys, options, [&](const DigitPoint& x) { return bad_threshold_ap(sys, x); },
        [&] {
            return options.kind == StatisticKind::multi_rec ? multi_rec_window_cap(sys)
                                                            : BigInt(sys.schedule().total() - 1);
        },
        [&](const DigitPoint& x, const BigInt& lo, const BigInt& hi, const RecordSink& sink) {
            if (options.kind == StatisticKind::generic) return generic_scan(sys, x, lo, hi, options.h, sink);
            return scan_min(sys, x, lo, hi, std::nullopt, sink);
        });
}

MonteCarloSummary monte_carlo_constant(const MetricSystemRes& sys, const MonteCarloOptions& options) {
    if (options.kind == StatisticKind::multi_rec) throw InputError("multiple recurrence statistic needs an AP system");
    return run_monte_carlo(
        sys, options, [&](const DigitPoint& x) { return bad_threshold_res(sys, x); },
        [&] { return BigInt(sys.schedule().total() - 1); },
        [&](const DigitPoint& x, const BigInt& lo, const BigInt& hi, const RecordSink& sink) {
            if (options.kind == StatisticKind::generic) return generic_scan(sys, x, lo, hi, options.h, sink);
            if (sink) return scan_min(sys, x, lo, hi, sink);
            return cf_window_min(sys, x, lo, hi);
        });
}

}  // namespace multirec
