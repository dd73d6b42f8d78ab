#include "multirec/serialize.hpp"

namespace multirec {

Json to_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(BigInt(j.get<std::int64_t>()));
    throw InputError("expected a \"p/q\" rational, got " + j.dump());
}

Json to_json(const BigInt& n) {
    if (n <= BigInt(INT64_MAX) && n >= BigInt(INT64_MIN)) return static_cast<std::int64_t>(n);
    return n.str();
}

BigInt bigint_from_json(const Json& j) {
    if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw InputError("expected an integer, got " + j.dump());
}

Json to_json(const APSet& set) {
    Json j;
    j["n"] = set.n;
    j["k"] = set.k;
    j["mode"] = to_string(set.mode);
    j["elements"] = set.elements;
    return j;
}

APSet apset_from_json(const Json& j) {
    APSet set;
    set.n = j.at("n").get<std::int64_t>();
    set.k = j.at("k").get<int>();
    set.mode = parse_ap_mode(j.at("mode").get<std::string>());
    set.elements = j.at("elements").get<std::vector<std::int64_t>>();
    return set;
}

Json to_json(const APVerdict& v) {
    Json j;
    j["ok"] = v.ok();
    if (v.witness) j["witness"] = Json{{"start", v.witness->start}, {"diff", v.witness->diff}};
    return j;
}

Json to_json(const PartitionResult& r) {
    Json j;
    j["n"] = r.n;
    j["phi_squared"] = to_string(r.phi_squared);
    j["base"] = r.base;
    j["shifts"] = r.shifts;
    j["parts"] = r.parts;
    j["remainder"] = r.remainder;
    return j;
}

PartitionResult partition_from_json(const Json& j) {
    PartitionResult r;
    r.n = j.at("n").get<std::int64_t>();
    r.phi_squared = rational_from_json(j.at("phi_squared"));
    r.base = j.at("base").get<std::vector<std::int64_t>>();
    r.shifts = j.at("shifts").get<std::vector<std::int64_t>>();
    r.parts = j.at("parts").get<std::vector<std::vector<std::int64_t>>>();
    r.remainder = j.at("remainder").get<std::vector<std::int64_t>>();
    return r;
}

Json to_json(const GaugePsi& psi) { return Json{{"c", to_string(psi.c)}, {"q", psi.q}}; }

GaugePsi psi_from_json(const Json& j) {
    GaugePsi psi;
    psi.c = rational_from_json(j.at("c"));
    psi.q = j.at("q").get<unsigned>();
    return psi;
}

Json to_json(const RadixSchedule& s) {
    Json j;
    j["mode"] = to_string(s.mode());
    j["radices"] = s.radices();
    if (s.psi()) j["psi"] = to_json(*s.psi());
    if (s.f()) j["f"] = to_string(*s.f());
    if (s.alpha_ratio()) j["alpha"] = Json{{"ratio", to_string(*s.alpha_ratio())}};
    return j;
}

RadixSchedule schedule_from_json(const Json& j) {
    std::optional<GaugePsi> psi;
    std::optional<Rational> alpha;
    std::optional<Rational> f;
    if (j.contains("psi")) psi = psi_from_json(j.at("psi"));
    if (j.contains("alpha")) alpha = rational_from_json(j.at("alpha").at("ratio"));
    if (j.contains("f")) f = rational_from_json(j.at("f"));
    return RadixSchedule::from_parts(parse_schedule_mode(j.at("mode").get<std::string>()),
                                     j.at("radices").get<std::vector<std::int64_t>>(), psi, alpha, f);
}

Json to_json(const DensityTable& t) {
    Json points = Json::array();
    for (const auto& p : t.points) points.push_back(Json{{"n", p.n}, {"rho", to_string(p.rho)}, {"set", to_json(p.set)}});
    return Json{{"k", t.k}, {"points", points}};
}

DensityTable density_from_json(const Json& j) {
    DensityTable t;
    t.k = j.at("k").get<int>();
    for (const auto& p : j.at("points"))
        t.points.push_back(DensityPoint{p.at("n").get<std::int64_t>(), apset_from_json(p.at("set")),
                                        rational_from_json(p.at("rho"))});
    return t;
}

Json to_json(const MetricSystemAP& sys) {
    Json j;
    j["kind"] = "ap";
    j["k"] = sys.k();
    j["schedule"] = to_json(sys.schedule());
    j["density"] = to_json(sys.density());
    Json levels = Json::array();
    for (int s = 1; s <= sys.schedule().depth(); ++s) {
        const APLevel& lvl = sys.level(s);
        levels.push_back(Json{{"n", sys.schedule().radix(s)}, {"set", to_json(lvl.set)}, {"partition", to_json(lvl.partition)}});
    }
    j["levels"] = levels;
    Json scales = Json::array();
    for (const auto& s : sys.scales()) scales.push_back(to_string(s));
    j["scales"] = scales;
    return j;
}

Json to_json(const MetricSystemRes& sys) {
    Json j;
    j["kind"] = "res";
    j["schedule"] = to_json(sys.schedule());
    return j;
}

MetricSystem system_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "res") return MetricSystemRes(schedule_from_json(j.at("schedule")));
    if (kind != "ap") throw InputError("unknown system kind '" + kind + "'");
    RadixSchedule schedule = schedule_from_json(j.at("schedule"));
    if (!schedule.psi()) throw InputError("AP system schedule lacks psi");
    std::vector<APSet> sets;
    std::vector<PartitionResult> partitions;
    for (const auto& lvl : j.at("levels")) {
        sets.push_back(apset_from_json(lvl.at("set")));
        partitions.push_back(partition_from_json(lvl.at("partition")));
    }
    std::vector<Rational> scales;
    for (const auto& s : j.at("scales")) scales.push_back(rational_from_json(s));
    GaugePsi psi = *schedule.psi();
    return MetricSystemAP(std::move(schedule), j.at("k").get<int>(), psi, density_from_json(j.at("density")),
                          std::move(sets), std::move(partitions), std::move(scales));
}

Json to_json(const MetricSystem& sys) {
    return std::visit([](const auto& s) { return to_json(s); }, sys);
}

Json to_json(const std::vector<InvariantCheck>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j{{"invariant", c.name}, {"ok", c.ok}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(j);
    }
    return arr;
}

Json to_json(const RecurrenceRecord& rec) {
    Json j;
    j["n"] = to_json(rec.n);
    Json d = Json::array();
    for (const auto& v : rec.distances) d.push_back(to_string(v));
    j["distances"] = d;
    j["value"] = rec.value ? Json(to_string(*rec.value)) : Json(nullptr);
    Json flags = Json::array();
    if (rec.overflow) flags.push_back("overflow");
    if (rec.below_resolution) flags.push_back("below-resolution");
    j["flags"] = flags;
    return j;
}

Json to_json(const ScanResult& r) {
    return Json{{"min", to_string(r.min)}, {"argmin", to_json(r.argmin)}, {"evaluated", to_json(r.evaluated)}};
}

Json to_json(const CoveringReport& report) {
    Json j;
    j["level"] = report.level;
    j["parts"] = report.parts.size();
    j["sum"] = to_string(report.sum);
    Json chain = Json::array();
    for (const auto& s : report.chain)
        chain.push_back(Json{{"step", s.label}, {"lhs", s.lhs.str()}, {"rhs", s.rhs.str()}, {"ok", s.ok}});
    j["chain"] = chain;
    j["alpha"] = report.alpha ? Json(to_string(*report.alpha)) : Json(nullptr);
    return j;
}

Json to_json(const MonteCarloSummary& summary) {
    Json j;
    j["draws"] = summary.draws;
    j["accepted"] = summary.samples.size();
    j["rejected"] = summary.rejected;
    j["rejection_rate"] =
        to_string(Rational(BigInt(summary.rejected), BigInt(summary.draws == 0 ? 1 : summary.draws)));
    j["min"] = to_string(summary.min);
    j["mean"] = to_string(summary.mean);
    Json q = Json::array();
    for (const auto& v : summary.quantiles) q.push_back(to_string(v));
    j["quantiles"] = q;
    Json samples = Json::array();
    for (const auto& s : summary.samples) {
        samples.push_back(Json{{"draw", s.draw},
                               {"x", s.x.digits},
                               {"m0", s.m0},
                               {"window", Json::array({to_json(s.n_lo), to_json(s.n_hi)})},
                               {"min", to_string(s.scan.min)},
                               {"argmin", to_json(s.scan.argmin)}});
    }
    j["samples"] = samples;
    return j;
}

}  // namespace multirec
