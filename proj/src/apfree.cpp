#include "multirec/apfree.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace multirec {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

void require_params(std::int64_t n, int k) {
    if (n < 1) throw InputError("modulus must be >= 1, got " + std::to_string(n));
    if (k < 3) throw InputError("progression length must be >= 3, got " + std::to_string(k));
}

}  // namespace

std::string to_string(APMode mode) { return mode == APMode::cyclic ? "cyclic" : "integer"; }

APMode parse_ap_mode(std::string_view text) {
    if (text == "cyclic") return APMode::cyclic;
    if (text == "integer") return APMode::integer;
    throw InputError("unknown mode '" + std::string(text) + "' (expected integer|cyclic)");
}

APVerdict check_ap_free(std::span<const std::int64_t> elements, std::int64_t n, int k, APMode mode) {
    require_params(n, k);
    std::vector<char> member(static_cast<std::size_t>(n), 0);
    for (auto e : elements) {
        if (e < 0 || e >= n)
            throw InputError("element " + std::to_string(e) + " outside [0, " + std::to_string(n) + ")");
        member[static_cast<std::size_t>(e)] = 1;
    }
    std::vector<std::int64_t> sorted;
    for (std::int64_t v = 0; v < n; ++v)
        if (member[static_cast<std::size_t>(v)]) sorted.push_back(v);

    // Any progression has its first two terms x, x+d in the set with x+d != x.
    std::vector<std::int64_t> diffs;
    for (auto x : sorted) {
        diffs.clear();
        for (auto y : sorted) {
            if (y == x) continue;
            if (mode == APMode::integer) {
                if (y > x) diffs.push_back(y - x);
            } else {
                diffs.push_back(mod(y - x, n));
            }
        }
        std::sort(diffs.begin(), diffs.end());
        for (auto d : diffs) {
            bool all = true;
            for (int j = 2; j < k && all; ++j) {
                std::int64_t t = x + j * d;
                if (mode == APMode::integer) {
                    all = t < n && member[static_cast<std::size_t>(t)];
                } else {
                    all = member[static_cast<std::size_t>(mod(t, n))];
                }
            }
            if (all) return {APWitness{x, d}};
        }
    }
    return {};
}

ProgressionGuard::ProgressionGuard(std::int64_t n, int k, APMode mode)
    : n_(n), k_(k), mode_(mode), member_(static_cast<std::size_t>(n), 0) {
    require_params(n, k);
}

bool ProgressionGuard::all_terms_in(std::int64_t first, std::int64_t diff, std::int64_t extra) const {
    for (int j = 0; j < k_; ++j) {
        std::int64_t t = first + j * diff;
        if (mode_ == APMode::cyclic) {
            t = mod(t, n_);
        } else if (t < 0 || t >= n_) {
            return false;
        }
        if (t != extra && !member_[static_cast<std::size_t>(t)]) return false;
    }
    return true;
}

bool ProgressionGuard::can_add(std::int64_t r) const {
    if (contains(r)) return true;
    // A progression through r has a neighbour term in the set: the next one
    // (r not last, d = s - r) or the previous one (r last, d = r - s).
    for (auto s : members_) {
        if (mode_ == APMode::cyclic) {
            std::int64_t up = mod(s - r, n_);
            for (int p = 0; p <= k_ - 2; ++p)
                if (all_terms_in(mod(r - p * up, n_), up, r)) return false;
            std::int64_t down = mod(r - s, n_);
            if (all_terms_in(mod(r - (k_ - 1) * down, n_), down, r)) return false;
        } else if (s > r) {
            std::int64_t d = s - r;
            for (int p = 0; p <= k_ - 2; ++p)
                if (all_terms_in(r - p * d, d, r)) return false;
        } else {
            std::int64_t d = r - s;
            if (all_terms_in(r - (k_ - 1) * d, d, r)) return false;
        }
    }
    return true;
}

void ProgressionGuard::add(std::int64_t r) {
    if (contains(r)) return;
    member_[static_cast<std::size_t>(r)] = 1;
    members_.push_back(r);
}

void ProgressionGuard::remove(std::int64_t r) {
    if (!contains(r)) return;
    member_[static_cast<std::size_t>(r)] = 0;
    auto it = std::find(members_.rbegin(), members_.rend(), r);
    members_.erase(std::next(it).base());
}

APSet greedy_ap_free(std::int64_t n, int k, APMode mode) {
    ProgressionGuard guard(n, k, mode);
    for (std::int64_t r = 0; r < n; ++r)
        if (guard.can_add(r)) guard.add(r);
    return APSet{guard.members(), n, k, mode};
}

std::int64_t default_exhaustive_cap(int k) { return k == 3 ? 40 : 25; }

namespace {

// tail_bound[L] bounds how many of L consecutive residues a free set can hold.
ExactMax branch_and_bound(std::int64_t n, int k, APMode mode, const std::vector<std::int64_t>& tail_bound) {
    APSet incumbent = greedy_ap_free(n, k, mode);
    std::int64_t best = static_cast<std::int64_t>(incumbent.size());
    std::vector<std::int64_t> best_set = incumbent.elements;

    auto bound = [&](std::int64_t len) -> std::int64_t {
        if (len < n) return tail_bound[static_cast<std::size_t>(len)];
        return n >= 2 ? tail_bound[static_cast<std::size_t>(n - 1)] + 1 : n;
    };

    ProgressionGuard guard(n, k, mode);
    std::function<void(std::int64_t, std::int64_t)> dfs = [&](std::int64_t r, std::int64_t count) {
        if (count + bound(n - r) <= best) return;
        if (r == n) {
            best = count;
            best_set = guard.members();
            return;
        }
        if (guard.can_add(r)) {
            guard.add(r);
            dfs(r + 1, count + 1);
            guard.remove(r);
        }
        dfs(r + 1, count);
    };
    dfs(0, 0);
    std::sort(best_set.begin(), best_set.end());
    return {best, APSet{best_set, n, k, mode}};
}

}  // namespace

ExactMax exact_max_ap_free(std::int64_t n, int k, APMode mode, std::optional<std::int64_t> cap) {
    require_params(n, k);
    std::int64_t limit = cap.value_or(default_exhaustive_cap(k));
    if (n > limit)
        throw CapacityError("exhaustive search cap is N <= " + std::to_string(limit) + " for k=" + std::to_string(k) +
                            ", requested N=" + std::to_string(n));
    // Integer maxima of every shorter interval, computed bottom-up.
    std::vector<std::int64_t> tail_bound(static_cast<std::size_t>(n), 0);
    for (std::int64_t len = 1; len < n; ++len)
        tail_bound[static_cast<std::size_t>(len)] = branch_and_bound(len, k, APMode::integer, tail_bound).size;
    return branch_and_bound(n, k, mode, tail_bound);
}

APSet behrend_set(std::int64_t n) {
    if (n < 2) throw InputError("behrend_set needs N >= 2, got " + std::to_string(n));
    // ceil(n^{1/4})
    BigInt r4 = iroot_floor(BigInt(n), 4);
    if (ipow(r4, 4) < n) r4 += 1;
    const std::int64_t q_max = static_cast<std::int64_t>(r4) + 2;

    std::vector<std::int64_t> best;
    for (std::int64_t q = 2; q <= q_max; ++q) {
        const std::int64_t digit_bound = (q + 1) / 2;  // 2*(digit_bound-1) <= q-1: no carries in x+z
        int max_digits = 1;
        for (std::int64_t p = q; p < n; p *= q) ++max_digits;
        for (int digits = 1; digits <= max_digits; ++digits) {
            std::map<std::int64_t, std::vector<std::int64_t>> shells;
            std::function<void(int, std::int64_t, std::int64_t, std::int64_t)> walk =
                [&](int pos, std::int64_t value, std::int64_t place, std::int64_t norm) {
                    if (value >= n) return;
                    if (pos == digits) {
                        shells[norm].push_back(value);
                        return;
                    }
                    for (std::int64_t a = 0; a < digit_bound; ++a) walk(pos + 1, value + a * place, place * q, norm + a * a);
                };
            walk(0, 0, 1, 0);
            for (auto& [norm, members] : shells) {
                if (members.size() > best.size()) best = members;
            }
        }
    }
    std::sort(best.begin(), best.end());
    return APSet{best, n, 3, APMode::integer};
}

APSet split_to_cyclic(const APSet& a0, int k) {
    if (!check_ap_free(a0.elements, a0.n, k, APMode::integer).ok())
        throw InputError("split_to_cyclic: input set contains a " + std::to_string(k) + "-term progression");
    const std::int64_t n = a0.n;
    std::vector<std::int64_t> best;
    for (int j = 0; j < k; ++j) {
        std::int64_t lo = j * n / k;
        std::int64_t hi = (j + 1) * n / k;
        std::vector<std::int64_t> piece;
        for (auto e : a0.elements)
            if (e >= lo && e < hi) piece.push_back(e);
        if (piece.size() > best.size()) best = std::move(piece);
    }
    return APSet{best, n, k, APMode::cyclic};
}

std::string to_string(DensityStrategy s) {
    switch (s) {
        case DensityStrategy::greedy: return "greedy";
        case DensityStrategy::behrend_split: return "behrend-split";
        case DensityStrategy::exact_when_small: return "exact-when-small";
        case DensityStrategy::best_of: return "best-of";
    }
    return "?";
}

DensityStrategy parse_density_strategy(std::string_view text) {
    if (text == "greedy") return DensityStrategy::greedy;
    if (text == "behrend-split") return DensityStrategy::behrend_split;
    if (text == "exact-when-small") return DensityStrategy::exact_when_small;
    if (text == "best-of") return DensityStrategy::best_of;
    throw InputError("unknown strategy '" + std::string(text) + "'");
}

const DensityPoint* DensityTable::find(std::int64_t n) const {
    auto it = std::lower_bound(points.begin(), points.end(), n,
                               [](const DensityPoint& p, std::int64_t v) { return p.n < v; });
    return (it != points.end() && it->n == n) ? &*it : nullptr;
}

const Rational& DensityTable::rho(std::int64_t n) const {
    const DensityPoint* p = find(n);
    if (!p) throw RangeError("density table has no point N=" + std::to_string(n));
    return p->rho;
}

const Rational& DensityTable::at(const BigInt& n) const {
    if (points.empty() || n < points.front().n) throw RangeError("density table queried below its first point");
    auto it = std::upper_bound(points.begin(), points.end(), n,
                               [](const BigInt& v, const DensityPoint& p) { return v < p.n; });
    return std::prev(it)->rho;
}

APSet cyclic_set_for(std::int64_t n, int k, DensityStrategy strategy, const DensityOptions& options) {
    if (n == 1) return APSet{{0}, 1, k, APMode::cyclic};
    const std::int64_t cap = options.exhaustive_cap.value_or(default_exhaustive_cap(k));
    auto behrend_split = [&] { return split_to_cyclic(behrend_set(n), k); };
    auto exact = [&] { return exact_max_ap_free(n, k, APMode::cyclic, cap).witness; };
    switch (strategy) {
        case DensityStrategy::greedy: return greedy_ap_free(n, k, APMode::cyclic);
        case DensityStrategy::behrend_split: return behrend_split();
        case DensityStrategy::exact_when_small:
            return n <= cap ? exact() : greedy_ap_free(n, k, APMode::cyclic);
        case DensityStrategy::best_of: {
            if (n <= cap) return exact();
            APSet g = greedy_ap_free(n, k, APMode::cyclic);
            APSet b = behrend_split();
            return b.size() > g.size() ? b : g;
        }
    }
    throw InputError("unknown strategy");
}

DensityTable build_density_table(std::span<const std::int64_t> ns, int k, DensityStrategy strategy,
                                 const DensityOptions& options) {
    if (ns.empty() || ns.front() != 1) throw InputError("density table arguments must start with N=1");
    for (std::size_t i = 1; i < ns.size(); ++i)
        if (ns[i] <= ns[i - 1])
            throw InputError("density table arguments must be strictly increasing (N=" + std::to_string(ns[i]) + ")");

    DensityTable table;
    table.k = k;
    Rational running(1);
    for (auto n : ns) {
        APSet set = cyclic_set_for(n, k, strategy, options);
        Rational rho(BigInt(static_cast<std::int64_t>(set.size())), BigInt(n));
        if (rho > running) {
            // Any subset of a free set is free; keep the smallest residues.
            std::int64_t keep = static_cast<std::int64_t>(floor(running * n));
            if (keep < 1)
                throw BuildError("density table infeasible at N=" + std::to_string(n) +
                                 ": running minimum density is below 1/N");
            set.elements.resize(static_cast<std::size_t>(keep));
            rho = Rational(BigInt(keep), BigInt(n));
        }
        running = rho;
        table.points.push_back(DensityPoint{n, std::move(set), std::move(rho)});
    }
    return table;
}

}  // namespace multirec
