#include "multirec/tijdeman.hpp"

#include <algorithm>

namespace multirec {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

BigInt square(std::int64_t v) { return BigInt(v) * v; }

}  // namespace

PartitionResult partition(const APSet& a, const Rational& phi_squared) {
    if (a.elements.empty()) throw InputError("partition: A must be nonempty");
    if (phi_squared < 1) throw InputError("partition: phi^2 must be >= 1, got " + to_string(phi_squared));
    const std::int64_t n = a.n;
    const std::size_t un = static_cast<std::size_t>(n);
    const BigInt n_squared = square(n);

    PartitionResult out;
    out.n = n;
    out.phi_squared = phi_squared;
    out.base = a.elements;
    out.shifts.push_back(0);
    out.parts.push_back(a.elements);

    std::vector<char> in_remainder(un, 1);
    for (auto e : a.elements) in_remainder[static_cast<std::size_t>(e)] = 0;
    std::int64_t remaining = n - static_cast<std::int64_t>(a.elements.size());

    // overlap[t] = |B ∩ (A + t)|, kept current as elements leave B.
    std::vector<std::int64_t> overlap(un, 0);
    for (std::int64_t b = 0; b < n; ++b) {
        if (!in_remainder[static_cast<std::size_t>(b)]) continue;
        for (auto e : a.elements) ++overlap[static_cast<std::size_t>(mod(b - e, n))];
    }

    while (Rational(square(remaining)) * phi_squared > n_squared) {
        std::size_t t = static_cast<std::size_t>(std::max_element(overlap.begin(), overlap.end()) - overlap.begin());
        std::vector<std::int64_t> piece;
        for (auto e : a.elements) {
            std::int64_t v = mod(e + static_cast<std::int64_t>(t), n);
            if (in_remainder[static_cast<std::size_t>(v)]) piece.push_back(v);
        }
        std::sort(piece.begin(), piece.end());
        for (auto v : piece) {
            in_remainder[static_cast<std::size_t>(v)] = 0;
            for (auto e : a.elements) --overlap[static_cast<std::size_t>(mod(v - e, n))];
        }
        remaining -= static_cast<std::int64_t>(piece.size());
        out.shifts.push_back(static_cast<std::int64_t>(t));
        out.parts.push_back(std::move(piece));
    }

    for (std::int64_t v = 0; v < n; ++v)
        if (in_remainder[static_cast<std::size_t>(v)]) out.remainder.push_back(v);
    return out;
}

std::string to_string(PartitionCondition c) {
    switch (c) {
        case PartitionCondition::disjoint_cover: return "partition";
        case PartitionCondition::subset_of_translate: return "condition 1 (A_i in A+a_i)";
        case PartitionCondition::piece_size: return "condition 2 (|A_i| >= |A|/phi)";
        case PartitionCondition::remainder_size: return "condition 3 (|B| <= N/phi)";
        case PartitionCondition::step_bound: return "step bound (l <= floor(N phi/|A|)+1)";
    }
    return "?";
}

bool PartitionVerdict::violates(PartitionCondition c) const {
    return std::find(violations.begin(), violations.end(), c) != violations.end();
}

PartitionVerdict verify_partition(const PartitionResult& r) {
    PartitionVerdict verdict;
    auto flag = [&](PartitionCondition c) {
        if (!verdict.violates(c)) verdict.violations.push_back(c);
    };
    if (r.n < 1 || r.base.empty() || r.shifts.size() != r.parts.size()) {
        flag(PartitionCondition::disjoint_cover);
        return verdict;
    }
    const std::int64_t n = r.n;
    const BigInt a_size(static_cast<std::int64_t>(r.base.size()));

    std::vector<int> hits(static_cast<std::size_t>(n), 0);
    auto mark = [&](std::int64_t v) {
        if (v < 0 || v >= n)
            flag(PartitionCondition::disjoint_cover);
        else
            ++hits[static_cast<std::size_t>(v)];
    };
    for (const auto& part : r.parts)
        for (auto v : part) mark(v);
    for (auto v : r.remainder) mark(v);
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) flag(PartitionCondition::disjoint_cover);

    std::vector<char> in_base(static_cast<std::size_t>(n), 0);
    for (auto e : r.base)
        if (e >= 0 && e < n) in_base[static_cast<std::size_t>(e)] = 1;

    for (std::size_t i = 0; i < r.parts.size(); ++i) {
        for (auto v : r.parts[i]) {
            if (v < 0 || v >= n) continue;
            if (!in_base[static_cast<std::size_t>(mod(v - r.shifts[i], n))])
                flag(PartitionCondition::subset_of_translate);
        }
        // |A_i|^2 phi^2 >= |A|^2
        if (Rational(square(static_cast<std::int64_t>(r.parts[i].size()))) * r.phi_squared < Rational(a_size * a_size))
            flag(PartitionCondition::piece_size);
    }
    // |B|^2 phi^2 <= N^2
    if (Rational(square(static_cast<std::int64_t>(r.remainder.size()))) * r.phi_squared > Rational(square(n)))
        flag(PartitionCondition::remainder_size);
    // l - 1 <= N phi/|A|  <=>  ((l-1)|A|)^2 <= N^2 phi^2
    BigInt lhs = BigInt(static_cast<std::int64_t>(r.parts.size()) - 1) * a_size;
    if (Rational(lhs * lhs) > Rational(square(n)) * r.phi_squared) flag(PartitionCondition::step_bound);
    return verdict;
}

}  // namespace multirec
