#include "multirec/cli.hpp"

#include "multirec/hausdorff.hpp"
#include "multirec/recurrence.hpp"
#include "multirec/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace multirec {
namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("write to '" + path + "' failed");
}

std::string pretty(const Json& j) { return j.dump(2) + "\n"; }

// Sends text to --out when given, else to the command's stdout.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty())
        out << text;
    else
        write_text_file(path, text);
}

template <class T>
T config_get(const Json& cfg, const char* key, T fallback) {
    return cfg.contains(key) ? cfg.at(key).get<T>() : fallback;
}

std::optional<std::int64_t> config_opt_int(const Json& cfg, const char* key) {
    if (!cfg.contains(key) || cfg.at(key).is_null()) return std::nullopt;
    return cfg.at(key).get<std::int64_t>();
}

MetricSystem load_system(const std::string& path) { return system_from_json(read_json_file(path)); }

std::vector<InvariantCheck> verify_system(const MetricSystem& sys) {
    return std::visit(
        [](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, MetricSystemAP>)
                return verify_ap_system(s);
            else
                return verify_res_system(s);
        },
        sys);
}

Json report_json(const MetricSystem& sys, const std::vector<InvariantCheck>& checks) {
    const RadixSchedule& s = std::visit([](const auto& v) -> const RadixSchedule& { return v.schedule(); }, sys);
    Json r;
    r["kind"] = std::holds_alternative<MetricSystemAP>(sys) ? "ap" : "res";
    r["mode"] = to_string(s.mode());
    r["depth"] = s.depth();
    r["total"] = to_json(s.total());
    r["ok"] = all_ok(checks);
    r["checks"] = to_json(checks);
    return r;
}

// ---- build ----------------------------------------------------------------

MetricSystem build_from_config(const Json& cfg) {
    const std::string kind = config_get<std::string>(cfg, "system", "ap");
    if (kind == "res") {
        return build_res_system(rational_from_json(cfg.at("f")), cfg.at("depth").get<int>());
    }
    if (kind != "ap") throw InputError("config 'system' must be \"ap\" or \"res\"");
    APSystemConfig c;
    c.k = config_get(cfg, "k", c.k);
    if (cfg.contains("psi")) c.psi = psi_from_json(cfg.at("psi"));
    if (cfg.contains("alpha_ratio")) c.alpha_ratio = rational_from_json(cfg.at("alpha_ratio"));
    c.mode = parse_schedule_mode(config_get<std::string>(cfg, "mode", "strict"));
    if (c.mode == ScheduleMode::section3) throw InputError("section3 schedules build residue systems (system: \"res\")");
    if (c.mode == ScheduleMode::relaxed) {
        c.radices = cfg.at("radices").get<std::vector<std::int64_t>>();
        c.depth = static_cast<int>(c.radices.size());
    } else {
        c.depth = cfg.at("depth").get<int>();
    }
    if (cfg.contains("strategy")) c.strategy = parse_density_strategy(cfg.at("strategy").get<std::string>());
    if (cfg.contains("budget")) {
        const Json& b = cfg.at("budget");
        c.budget.max_radix = config_get(b, "max_radix", c.budget.max_radix);
        c.budget.max_product = config_get(b, "max_product", c.budget.max_product);
    }
    c.exhaustive_cap = config_opt_int(cfg, "exhaustive_cap");
    return build_ap_system(c);
}

int cmd_build(const std::string& config_path, std::string out_path, std::ostream& out) {
    const Json cfg = read_json_file(config_path);
    if (out_path.empty()) out_path = config_get<std::string>(cfg, "out", "");
    if (out_path.empty()) throw InputError("build needs an output path (--out or config 'out')");
    MetricSystem sys = build_from_config(cfg);
    const auto checks = verify_system(sys);
    write_text_file(out_path, pretty(to_json(sys)));
    out << pretty(report_json(sys, checks));
    return all_ok(checks) ? exit_ok : exit_failed;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const std::string& system_path, std::ostream& out) {
    const Json j = read_json_file(system_path);
    std::optional<MetricSystem> sys;
    try {
        sys = system_from_json(j);
    } catch (const std::exception& e) {
        Json r;
        r["ok"] = false;
        r["checks"] = to_json(std::vector<InvariantCheck>{{"well-formed", false, e.what()}});
        out << pretty(r);
        return exit_failed;
    }
    const auto checks = verify_system(*sys);
    out << pretty(report_json(*sys, checks));
    return all_ok(checks) ? exit_ok : exit_failed;
}

// ---- scan -----------------------------------------------------------------

int cmd_scan(const std::string& config_path, const std::string& system_path, std::optional<std::uint64_t> seed,
             std::string out_path, std::ostream& out) {
    const Json cfg = config_path.empty() ? Json::object() : read_json_file(config_path);
    if (!seed && cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
    if (!seed) throw InputError("scan samples random points and needs a seed (--seed or config 'seed')");
    std::string sys_path = system_path.empty() ? config_get<std::string>(cfg, "system_file", "") : system_path;
    if (sys_path.empty()) throw InputError("scan needs a system file (--system or config 'system_file')");
    if (out_path.empty()) out_path = config_get<std::string>(cfg, "out", "");

    MetricSystem sys = load_system(sys_path);
    const bool is_ap = std::holds_alternative<MetricSystemAP>(sys);

    MonteCarloOptions opt;
    opt.seed = *seed;
    opt.samples = config_get<std::size_t>(cfg, "samples", 10);
    opt.max_draws_per_sample = config_get<std::size_t>(cfg, "max_draws_per_sample", opt.max_draws_per_sample);
    opt.kind = parse_statistic_kind(config_get<std::string>(cfg, "statistic", is_ap ? "multi_rec" : "cf"));
    if (cfg.contains("n_lo")) opt.n_lo = bigint_from_json(cfg.at("n_lo"));
    if (cfg.contains("n_hi")) opt.n_hi = bigint_from_json(cfg.at("n_hi"));
    if (cfg.contains("h")) {
        opt.h.c = rational_from_json(cfg.at("h").at("c"));
        opt.h.q = cfg.at("h").at("q").get<unsigned>();
    }

    std::ofstream records;
    if (!out_path.empty()) {
        records.open(out_path, std::ios::binary | std::ios::trunc);
        if (!records) throw InputError("cannot write '" + out_path + "'");
        opt.sink = [&records](std::size_t sample, const RecurrenceRecord& rec) {
            Json line;
            line["sample"] = sample;
            const Json body = to_json(rec);
            for (const auto& [key, value] : body.items()) line[key] = value;
            records << line.dump() << '\n';
        };
    }

    MonteCarloSummary summary =
        std::visit([&](const auto& s) { return monte_carlo_constant(s, opt); }, sys);

    Json r;
    r["kind"] = is_ap ? "ap" : "res";
    r["statistic"] = to_string(opt.kind);
    r["seed"] = *seed;
    const Json body = to_json(summary);
    for (const auto& [key, value] : body.items()) r[key] = value;
    out << pretty(r);
    return exit_ok;
}

// ---- table ----------------------------------------------------------------

struct TableOptions {
    int k = 3;
    std::int64_t n_min = 1;
    std::int64_t n_max = 20;
    std::optional<std::int64_t> cap;
};

std::string table_csv(const TableOptions& t) {
    if (t.n_min < 1 || t.n_min > t.n_max) throw InputError("table needs 1 <= n_min <= n_max");
    std::ostringstream csv;
    csv << "N,exact,greedy,behrend,exact_density,greedy_density,behrend_density\n";
    auto density = [](std::optional<std::int64_t> size, std::int64_t n) {
        return size ? to_string(make_rational(*size, n)) : std::string("-");
    };
    auto cell = [](std::optional<std::int64_t> size) { return size ? std::to_string(*size) : std::string("-"); };
    for (std::int64_t n = t.n_min; n <= t.n_max; ++n) {
        std::optional<std::int64_t> exact;
        try {
            exact = exact_max_ap_free(n, t.k, APMode::integer, t.cap).size;
        } catch (const CapacityError&) {
        }
        std::optional<std::int64_t> greedy = static_cast<std::int64_t>(greedy_ap_free(n, t.k, APMode::integer).size());
        std::optional<std::int64_t> behrend;
        if (t.k == 3) behrend = n == 1 ? 1 : static_cast<std::int64_t>(behrend_set(n).size());
        csv << n << ',' << cell(exact) << ',' << cell(greedy) << ',' << cell(behrend) << ',' << density(exact, n) << ','
            << density(greedy, n) << ',' << density(behrend, n) << '\n';
    }
    return csv.str();
}

// ---- apfree / tijdeman / hausdorff ----------------------------------------

APSet read_set(const std::string& path) { return apset_from_json(read_json_file(path)); }

APSet generate_set(std::int64_t n, int k, APMode mode, const std::string& strategy, std::optional<std::int64_t> cap) {
    if (strategy == "greedy") return greedy_ap_free(n, k, mode);
    if (strategy == "exact") return exact_max_ap_free(n, k, mode, cap).witness;
    if (strategy == "behrend") {
        if (k != 3) throw InputError("the sphere construction only avoids 3-term progressions");
        APSet a = behrend_set(n);
        if (mode == APMode::integer) return a;
        return split_to_cyclic(a, 3);
    }
    if (mode != APMode::cyclic) throw InputError("strategy '" + strategy + "' produces cyclic sets only");
    DensityOptions opts{cap};
    return cyclic_set_for(n, k, parse_density_strategy(strategy), opts);
}

template <class Sys>
const Sys& require_kind(const MetricSystem& sys, const char* what) {
    if (const Sys* s = std::get_if<Sys>(&sys)) return *s;
    throw InputError(std::string(what) + " needs a" +
                     (std::is_same_v<Sys, MetricSystemAP> ? "n AP system" : " residue system"));
}

std::vector<std::int64_t> parse_prefix(const std::string& text) {
    std::vector<std::int64_t> digits;
    if (text.empty()) return digits;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            digits.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("prefix digit '" + item + "' is not an integer");
        }
    }
    return digits;
}

int run(CLI::App& app, std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return -1;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Progression-free sets, odometer metrics and recurrence statistics", "multirec"};
    app.require_subcommand(1);

    std::string config, system, out_path;
    std::optional<std::uint64_t> seed;

    auto* build = app.add_subcommand("build", "Build and verify a metric system from a JSON config");
    build->add_option("-c,--config", config, "config file")->required();
    build->add_option("-o,--out", out_path, "system file to write");

    auto* scan = app.add_subcommand("scan", "Monte Carlo scan of a recurrence statistic");
    scan->add_option("-c,--config", config, "config file");
    scan->add_option("-s,--system", system, "system file");
    scan->add_option("--seed", seed, "master seed");
    scan->add_option("-o,--out", out_path, "JSON-lines record file");

    auto* verify = app.add_subcommand("verify", "Re-check every invariant of a stored system");
    verify->add_option("system", system, "system file")->required();

    TableOptions table_opts;
    auto* table = app.add_subcommand("table", "CSV of exact, greedy and sphere-construction sizes");
    table->add_option("-c,--config", config, "config file");
    table->add_option("-k", table_opts.k, "progression length");
    table->add_option("--n-min", table_opts.n_min);
    table->add_option("--n-max", table_opts.n_max);
    table->add_option("--cap", table_opts.cap, "exhaustive search cap");
    table->add_option("-o,--out", out_path);

    std::int64_t n = 0;
    int k = 3;
    std::string mode_text = "cyclic";
    std::string strategy = "greedy";
    std::optional<std::int64_t> cap;
    std::string set_path;

    auto* apfree = app.add_subcommand("apfree", "Progression-free sets");
    apfree->require_subcommand(1);
    auto* ap_gen = apfree->add_subcommand("gen", "Generate a set");
    auto* ap_check = apfree->add_subcommand("check", "Check a set; exit 1 when it holds a progression");
    auto* ap_max = apfree->add_subcommand("max", "Exact maximum by exhaustive search");
    for (auto* sub : {ap_gen, ap_max}) {
        sub->add_option("-n", n)->required();
        sub->add_option("-k", k);
        sub->add_option("--mode", mode_text)->check(CLI::IsMember({"integer", "cyclic"}));
        sub->add_option("--cap", cap);
        sub->add_option("-o,--out", out_path);
    }
    ap_gen->add_option("--strategy", strategy)
        ->check(CLI::IsMember({"greedy", "exact", "behrend", "behrend-split", "exact-when-small", "best-of"}));
    ap_check->add_option("set", set_path, "set file")->required();

    std::string phi2_text;
    bool tij_verify = false;
    auto* tijdeman = app.add_subcommand("tijdeman", "Greedy translate partition of Z_N");
    tijdeman->add_option("set", set_path, "cyclic set file")->required();
    tijdeman->add_option("--phi2", phi2_text, "phi squared as p/q")->required();
    tijdeman->add_flag("--verify", tij_verify, "exit 1 unless every condition holds");
    tijdeman->add_option("-o,--out", out_path);

    int level = 1;
    std::string prefix_text;
    std::size_t max_parts = 200000;
    auto* hausdorff = app.add_subcommand("hausdorff", "Explicit coverings");
    hausdorff->require_subcommand(1);
    auto* h_cover = hausdorff->add_subcommand("cover", "Level-m covering of an AP system and its chain");
    h_cover->add_option("system", system)->required();
    h_cover->add_option("-m,--level", level)->required();
    auto* h_cyl = hausdorff->add_subcommand("cyl", "Diameter and measure of a residue cylinder");
    h_cyl->add_option("system", system)->required();
    h_cyl->add_option("--prefix", prefix_text, "comma-separated digits");
    auto* h_sum = hausdorff->add_subcommand("sum", "Random cylinder partition diameter sum");
    h_sum->add_option("system", system)->required();
    h_sum->add_option("--seed", seed)->required();
    h_sum->add_option("--max-parts", max_parts);

    if (int code = run(app, std::move(args), out, err); code >= 0) return code;

    try {
        if (*build) return cmd_build(config, out_path, out);
        if (*scan) return cmd_scan(config, system, seed, out_path, out);
        if (*verify) return cmd_verify(system, out);
        if (*table) {
            if (!config.empty()) {
                const Json cfg = read_json_file(config);
                table_opts.k = config_get(cfg, "k", table_opts.k);
                table_opts.n_min = config_get(cfg, "n_min", table_opts.n_min);
                table_opts.n_max = config_get(cfg, "n_max", table_opts.n_max);
                if (auto c = config_opt_int(cfg, "exhaustive_cap")) table_opts.cap = c;
                if (out_path.empty()) out_path = config_get<std::string>(cfg, "out", "");
            }
            emit(table_csv(table_opts), out_path, out);
            return exit_ok;
        }
        if (*ap_gen) {
            emit(pretty(to_json(generate_set(n, k, parse_ap_mode(mode_text), strategy, cap))), out_path, out);
            return exit_ok;
        }
        if (*ap_max) {
            ExactMax m = exact_max_ap_free(n, k, parse_ap_mode(mode_text), cap);
            Json j;
            j["n"] = n;
            j["k"] = k;
            j["mode"] = mode_text;
            j["size"] = m.size;
            j["density"] = to_string(make_rational(m.size, n));
            j["witness"] = to_json(m.witness);
            emit(pretty(j), out_path, out);
            return exit_ok;
        }
        if (*ap_check) {
            APVerdict v = check_ap_free(read_set(set_path));
            out << pretty(to_json(v));
            return v.ok() ? exit_ok : exit_failed;
        }
        if (*tijdeman) {
            PartitionResult r = partition(read_set(set_path), parse_rational(phi2_text));
            PartitionVerdict v = verify_partition(r);
            Json j = to_json(r);
            Json violations = Json::array();
            for (auto c : v.violations) violations.push_back(to_string(c));
            j["violations"] = violations;
            emit(pretty(j), out_path, out);
            return tij_verify && !v.ok() ? exit_failed : exit_ok;
        }
        if (*h_cover) {
            MetricSystem sys = load_system(system);
            CoveringReport r = proof_covering_sum(require_kind<MetricSystemAP>(sys, "hausdorff cover"), level);
            out << pretty(to_json(r));
            return r.ok() ? exit_ok : exit_failed;
        }
        if (*h_cyl) {
            MetricSystem sys = load_system(system);
            auto prefix = parse_prefix(prefix_text);
            CylinderDiameter d = cylinder_diam(require_kind<MetricSystemRes>(sys, "hausdorff cyl"), prefix);
            Json j;
            j["prefix"] = prefix;
            j["rank"] = prefix.size();
            j["diameter"] = to_string(d.diameter);
            j["measure"] = to_string(d.measure);
            j["equal"] = d.equal();
            out << pretty(j);
            return d.equal() ? exit_ok : exit_failed;
        }
        if (*h_sum) {
            MetricSystem sys = load_system(system);
            PartitionSum s = partition_diam_sum(require_kind<MetricSystemRes>(sys, "hausdorff sum"), *seed, max_parts);
            Json j;
            j["seed"] = *seed;
            j["parts"] = s.parts;
            j["max_rank"] = s.max_rank;
            j["sum"] = to_string(s.sum);
            out << pretty(j);
            return s.sum == 1 ? exit_ok : exit_failed;
        }
    } catch (const Json::exception& e) {
        err << "error: malformed input: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

}  // namespace multirec
