// Copyright 2026 seqscreen contributors
//
// Licensed under the Apache License, Version 2.0 <LICENSE-APACHE or
// https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
// copied, modified, or distributed except according to those terms.

#include "seqscreen/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "seqscreen/error.hpp"

namespace seqscreen {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// ---- strict validation helpers ----

enum class Kind { number, positive, integer, count, boolean, string, array, object, number_or_null, count_or_null };

struct Field {
    const char* name;
    Kind kind;
};

bool is_count(const json& v) { return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0); }

bool matches(const json& v, Kind k) {
    switch (k) {
    case Kind::number: return v.is_number();
    case Kind::positive: return v.is_number() && v.get<double>() > 0.0;
    case Kind::integer: return v.is_number_integer();
    case Kind::count: return is_count(v);
    case Kind::boolean: return v.is_boolean();
    case Kind::string: return v.is_string();
    case Kind::array: return v.is_array();
    case Kind::object: return v.is_object();
    case Kind::number_or_null: return v.is_null() || v.is_number();
    case Kind::count_or_null: return v.is_null() || is_count(v);
    }
    return false;
}

bool check_object(const json& obj, const std::vector<Field>& fields, const std::string& where,
                  std::vector<std::string>& errors) {
    if (!obj.is_object()) {
        errors.push_back(where + ": expected an object");
        return false;
    }
    bool ok = true;
    for (const auto& f : fields) {
        if (!obj.contains(f.name)) {
            errors.push_back(where + ": missing key '" + f.name + "'");
            ok = false;
        } else if (!matches(obj[f.name], f.kind)) {
            errors.push_back(where + ": key '" + std::string(f.name) + "' has the wrong type or range");
            ok = false;
        }
    }
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(fields.begin(), fields.end(), [&](const Field& f) { return item.key() == f.name; });
        if (!known) {
            errors.push_back(where + ": unknown key '" + item.key() + "'");
            ok = false;
        }
    }
    return ok;
}

void check_enum(const json& v, std::initializer_list<const char*> allowed, const std::string& where,
                std::vector<std::string>& errors) {
    if (!v.is_string()) return;
    const auto s = v.get<std::string>();
    for (const char* a : allowed) {
        if (s == a) return;
    }
    errors.push_back(where + ": unexpected value '" + s + "'");
}

// ---- config parsing helpers ----

void require_known_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) throw InvalidArgument(where + ": expected an object");
    for (const auto& item : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
            throw InvalidArgument(where + ": unknown key '" + item.key() + "'");
        }
    }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key) || obj[key].is_null()) return fallback;
    try {
        return obj[key].get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(std::string("config key '") + key + "' has the wrong type");
    }
}

TargetMode parse_target(const std::string& s) {
    if (s == "in-range" || s == "in_range") return TargetMode::in_range;
    if (s == "random") return TargetMode::random;
    throw InvalidArgument("unknown target mode '" + s + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

json mean_se_json(const MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

MeanSe mean_se_from(const json& j) {
    return {j.at("mean").get<double>(), j.at("se").get<double>(), j.at("n").get<std::size_t>()};
}

} // namespace

json trace_to_json(const SequenceTrace& trace) {
    json strategy = {
        {"kind", to_string(trace.strategy.kind)},
        {"label", trace.strategy.label()},
        {"R", trace.strategy.kind == StrategyKind::geometric ? json(nullptr) : json(trace.strategy.R)},
        {"N", trace.strategy.kind == StrategyKind::geometric ? json(trace.strategy.N) : json(nullptr)},
        {"lambda_1_factor", trace.strategy.lambda_1_factor},
        {"rule", to_string(trace.strategy.effective_rule())},
    };
    json steps = json::array();
    for (std::size_t k = 0; k < trace.steps.size(); ++k) {
        const auto& s = trace.steps[k];
        steps.push_back({
            {"k", k + 1},
            {"lambda", s.lambda},
            {"kept_count", s.kept_count},
            {"rejection", rejection_percentage(s.kept_count, trace.p)},
            {"region_kind", s.region_kind},
            {"region_diameter", optional_number(s.region_diameter)},
            {"gap", s.gap},
            {"converged", s.converged},
            {"iterations", s.iterations},
            {"screen_seconds", s.screen_seconds},
            {"solve_seconds", s.solve_seconds},
            {"theta_norm", s.theta_norm},
            {"false_rejections", s.false_rejections},
            {"degenerate", s.degenerate},
            {"dual_error", s.dual_error},
        });
    }
    json support = json::array();
    for (std::size_t i = 0; i < trace.w.size(); ++i) {
        if (trace.w[i] != 0.0) support.push_back(i + 1);
    }
    return {
        {"trace_version", kTraceVersion},
        {"strategy", strategy},
        {"lambda_max", trace.lambda_max},
        {"lambda_max_index", trace.lambda_max_index + 1},
        {"lambda_t", trace.lambda_t},
        {"lambda_ratio", trace.lambda_t / trace.lambda_max},
        {"x_norm", trace.x_norm},
        {"p", trace.p},
        {"N", trace.N},
        {"lambdas", trace.lambdas},
        {"steps", steps},
        {"degenerate_steps", trace.degenerate_steps},
        {"support", support},
        {"w", trace.w},
        {"all_converged", trace.all_converged()},
        {"noise_injected", trace.noise_injected},
        {"total_seconds", trace.total_seconds},
    };
}

std::vector<std::string> validate_trace_json(const json& doc) {
    std::vector<std::string> errors;
    const std::vector<Field> top = {
        {"trace_version", Kind::integer}, {"strategy", Kind::object},     {"lambda_max", Kind::positive},
        {"lambda_max_index", Kind::count}, {"lambda_t", Kind::positive},   {"lambda_ratio", Kind::positive},
        {"x_norm", Kind::positive},       {"p", Kind::count},             {"N", Kind::count},
        {"lambdas", Kind::array},         {"steps", Kind::array},         {"degenerate_steps", Kind::array},
        {"support", Kind::array},         {"w", Kind::array},             {"all_converged", Kind::boolean},
        {"noise_injected", Kind::boolean}, {"total_seconds", Kind::number},
    };
    if (!check_object(doc, top, "trace", errors)) return errors;
    if (doc["trace_version"].get<long long>() != kTraceVersion) {
        errors.push_back("trace: unsupported trace_version " + doc["trace_version"].dump());
    }

    const auto& strategy = doc["strategy"];
    if (check_object(strategy,
                     {{"kind", Kind::string},
                      {"label", Kind::string},
                      {"R", Kind::number_or_null},
                      {"N", Kind::count_or_null},
                      {"lambda_1_factor", Kind::positive},
                      {"rule", Kind::string}},
                     "trace.strategy", errors)) {
        check_enum(strategy["kind"], {"dass", "geometric", "dpp-feedback"}, "trace.strategy.kind", errors);
        check_enum(strategy["rule"], {"dome", "dpp", "strong"}, "trace.strategy.rule", errors);
    }

    const std::size_t p = doc["p"].get<std::size_t>();
    const std::size_t n = doc["N"].get<std::size_t>();
    if (p == 0) errors.push_back("trace: p must be >= 1");
    if (doc["lambda_max_index"].get<std::size_t>() < 1 || doc["lambda_max_index"].get<std::size_t>() > p) {
        errors.push_back("trace: lambda_max_index out of range");
    }

    const auto& lambdas = doc["lambdas"];
    if (lambdas.size() != n || n == 0) errors.push_back("trace: lambdas must hold N >= 1 entries");
    bool numeric = std::all_of(lambdas.begin(), lambdas.end(), [](const json& v) { return v.is_number(); });
    if (!numeric) {
        errors.push_back("trace: lambdas must be numbers");
    } else if (!lambdas.empty()) {
        for (std::size_t k = 1; k < lambdas.size(); ++k) {
            if (!(lambdas[k].get<double>() < lambdas[k - 1].get<double>())) {
                errors.push_back("trace: lambdas not strictly decreasing at position " + std::to_string(k + 1));
            }
        }
        if (lambdas.back().get<double>() != doc["lambda_t"].get<double>()) {
            errors.push_back("trace: last lambda differs from lambda_t");
        }
    }

    const auto& steps = doc["steps"];
    if (steps.size() != n) errors.push_back("trace: steps must hold N entries");
    const std::vector<Field> step_fields = {
        {"k", Kind::count},           {"lambda", Kind::positive},        {"kept_count", Kind::count},
        {"rejection", Kind::number},  {"region_kind", Kind::string},     {"region_diameter", Kind::number_or_null},
        {"gap", Kind::number},        {"converged", Kind::boolean},      {"iterations", Kind::count},
        {"screen_seconds", Kind::number}, {"solve_seconds", Kind::number}, {"theta_norm", Kind::number},
        {"false_rejections", Kind::count}, {"degenerate", Kind::boolean}, {"dual_error", Kind::number},
    };
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const std::string where = "trace.steps[" + std::to_string(k) + "]";
        if (!check_object(steps[k], step_fields, where, errors)) continue;
        const auto& s = steps[k];
        check_enum(s["region_kind"], {"dome", "sphere", "dpp", "strong", "none"}, where + ".region_kind", errors);
        if (s["k"].get<std::size_t>() != k + 1) errors.push_back(where + ": k out of sequence");
        if (s["kept_count"].get<std::size_t>() > p) errors.push_back(where + ": kept_count exceeds p");
        const double rej = s["rejection"].get<double>();
        if (!(rej >= 0.0 && rej <= 1.0)) errors.push_back(where + ": rejection outside [0, 1]");
        if (k < lambdas.size() && numeric && s["lambda"].get<double>() != lambdas[k].get<double>()) {
            errors.push_back(where + ": lambda differs from lambdas[" + std::to_string(k) + "]");
        }
    }

    for (const auto& v : doc["degenerate_steps"]) {
        if (!is_count(v) || v.get<std::size_t>() < 1 || v.get<std::size_t>() > n) {
            errors.push_back("trace: degenerate_steps entries must be step numbers in [1, N]");
            break;
        }
    }
    for (const auto& v : doc["support"]) {
        if (!is_count(v) || v.get<std::size_t>() < 1 || v.get<std::size_t>() > p) {
            errors.push_back("trace: support entries must be feature numbers in [1, p]");
            break;
        }
    }
    const auto& w = doc["w"];
    if (w.size() != p) errors.push_back("trace: w must hold p entries");
    if (!std::all_of(w.begin(), w.end(), [](const json& v) { return v.is_number(); })) {
        errors.push_back("trace: w must be numbers");
    }
    return errors;
}

BenchConfig bench_config_from_json(const json& doc, const std::filesystem::path& base_dir) {
    require_known_keys(doc,
                       {"instances", "lambda_ratios", "strategies", "repetitions", "memory_cap_bytes", "chunk_size",
                        "out_of_core", "normalize", "parallel", "solver", "noise"},
                       "config");
    BenchConfig cfg;
    if (!doc.contains("instances") || !doc["instances"].is_array()) {
        throw InvalidArgument("config: 'instances' must be an array");
    }
    for (const auto& inst : doc["instances"]) {
        require_known_keys(inst, {"name", "generator", "dict", "x", "format"}, "config.instances[]");
        if (inst.contains("generator")) {
            const auto& g = inst["generator"];
            require_known_keys(g, {"d", "p", "seed", "seeds", "target"}, "config.instances[].generator");
            GeneratorSpec spec;
            spec.d = get_or<std::size_t>(g, "d", 0);
            spec.p = get_or<std::size_t>(g, "p", 0);
            if (spec.d == 0 || spec.p == 0) throw InvalidArgument("config: generator needs d >= 1 and p >= 1");
            spec.mode = parse_target(get_or<std::string>(g, "target", "in-range"));
            std::vector<std::uint64_t> seeds;
            if (g.contains("seeds")) seeds = g["seeds"].get<std::vector<std::uint64_t>>();
            if (g.contains("seed")) seeds.push_back(g["seed"].get<std::uint64_t>());
            if (seeds.empty()) throw InvalidArgument("config: generator needs 'seed' or 'seeds'");
            const std::string prefix = get_or<std::string>(inst, "name", "synthetic");
            for (auto seed : seeds) {
                InstanceSpec s;
                s.generator = spec;
                s.generator->seed = seed;
                s.name = prefix + "-" + std::to_string(spec.d) + "x" + std::to_string(spec.p) + "-seed" +
                         std::to_string(seed);
                cfg.instances.push_back(std::move(s));
            }
        } else {
            if (!inst.contains("dict") || !inst.contains("x")) {
                throw InvalidArgument("config: file instances need 'dict' and 'x'");
            }
            InstanceSpec s;
            s.dict_path = resolve(base_dir, inst["dict"].get<std::string>());
            s.x_path = resolve(base_dir, inst["x"].get<std::string>());
            const auto format = get_or<std::string>(inst, "format", "dmat");
            if (format != "dmat" && format != "csv") throw InvalidArgument("config: format must be dmat or csv");
            s.csv = format == "csv";
            s.name = get_or<std::string>(inst, "name", s.dict_path.stem().string());
            cfg.instances.push_back(std::move(s));
        }
    }
    if (!doc.contains("lambda_ratios")) throw InvalidArgument("config: missing 'lambda_ratios'");
    cfg.lambda_ratios = doc["lambda_ratios"].get<std::vector<double>>();
    if (!doc.contains("strategies") || !doc["strategies"].is_array()) {
        throw InvalidArgument("config: 'strategies' must be an array");
    }
    for (const auto& st : doc["strategies"]) {
        require_known_keys(st, {"name", "kind", "R", "N", "rule", "lambda_1_factor", "match_n"}, "config.strategies[]");
        StrategySpec spec;
        const auto kind = strategy_kind_from_string(get_or<std::string>(st, "kind", "dass"));
        const double R = get_or<double>(st, "R", 0.4);
        switch (kind) {
        case StrategyKind::dass: spec.strategy = SequenceStrategy::dass(R); break;
        case StrategyKind::dpp_feedback: spec.strategy = SequenceStrategy::dpp_feedback(R); break;
        case StrategyKind::geometric:
            spec.strategy = SequenceStrategy::geometric(get_or<std::size_t>(st, "N", 0),
                                                        screening_rule_from_string(get_or<std::string>(st, "rule", "dome")));
            break;
        }
        spec.strategy.lambda_1_factor = get_or<double>(st, "lambda_1_factor", 0.95);
        spec.match_n = get_or<std::string>(st, "match_n", "");
        spec.name = get_or<std::string>(st, "name", spec.match_n.empty() ? spec.strategy.label() : "matched");
        cfg.strategies.push_back(std::move(spec));
    }
    cfg.repetitions = get_or<std::size_t>(doc, "repetitions", cfg.repetitions);
    cfg.memory_cap_bytes = get_or<std::size_t>(doc, "memory_cap_bytes", cfg.memory_cap_bytes);
    cfg.chunk_size = get_or<std::size_t>(doc, "chunk_size", cfg.chunk_size);
    cfg.out_of_core = get_or<bool>(doc, "out_of_core", cfg.out_of_core);
    cfg.normalize = get_or<bool>(doc, "normalize", cfg.normalize);
    cfg.parallel = get_or<bool>(doc, "parallel", cfg.parallel);
    if (doc.contains("solver")) {
        const auto& s = doc["solver"];
        require_known_keys(s, {"gap_tol", "max_iters", "algorithm"}, "config.solver");
        cfg.solver.gap_tol = get_or<double>(s, "gap_tol", cfg.solver.gap_tol);
        cfg.solver.max_iters = get_or<std::size_t>(s, "max_iters", cfg.solver.max_iters);
        cfg.solver.algorithm = solver_algorithm_from_string(get_or<std::string>(s, "algorithm", "cd"));
    }
    if (doc.contains("noise") && !doc["noise"].is_null()) {
        const auto& n = doc["noise"];
        require_known_keys(n, {"nsr", "threshold", "seed"}, "config.noise");
        NoiseConfig noise;
        noise.nsr = get_or<double>(n, "nsr", 0.0);
        if (n.contains("threshold") && !n["threshold"].is_null()) noise.threshold = n["threshold"].get<double>();
        noise.seed = get_or<std::uint64_t>(n, "seed", 0);
        cfg.noise = noise;
    }
    cfg.validate();
    return cfg;
}

json report_to_json(const BenchReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({
            {"instance", r.instance},
            {"strategy", r.strategy},
            {"label", r.label},
            {"lambda_ratio", r.lambda_ratio},
            {"N", r.N},
            {"final_kept", r.final_kept},
            {"p", r.p},
            {"rejection_percentage", r.rejection_percentage},
            {"speedup", optional_number(r.speedup)},
            {"baseline_seconds", optional_number(r.baseline_seconds)},
            {"sequence_seconds", r.sequence_seconds},
            {"false_rejections", r.false_rejections},
            {"completed", r.completed},
            {"failure", r.failure.empty() ? json(nullptr) : json(r.failure)},
        });
    }
    json aggs = json::array();
    for (const auto& a : report.aggregates) {
        aggs.push_back({
            {"strategy", a.strategy},
            {"lambda_ratio", a.lambda_ratio},
            {"rows", a.rows},
            {"completed", a.completed},
            {"completion_rate", a.completion_rate},
            {"rejection", mean_se_json(a.rejection)},
            {"speedup", mean_se_json(a.speedup)},
            {"N", mean_se_json(a.N)},
            {"false_rejections", mean_se_json(a.false_rejections)},
        });
    }
    return {{"report_version", 1},
            {"speedup_suppressed", report.speedup_suppressed},
            {"rows", rows},
            {"aggregates", aggs}};
}

BenchReport report_from_json(const json& doc) {
    try {
        if (doc.at("report_version").get<int>() != 1) throw InvalidArgument("report: unsupported report_version");
        BenchReport report;
        report.speedup_suppressed = doc.at("speedup_suppressed").get<bool>();
        for (const auto& j : doc.at("rows")) {
            BenchRow r;
            r.instance = j.at("instance").get<std::string>();
            r.strategy = j.at("strategy").get<std::string>();
            r.label = j.at("label").get<std::string>();
            r.lambda_ratio = j.at("lambda_ratio").get<double>();
            r.N = j.at("N").get<std::size_t>();
            r.final_kept = j.at("final_kept").get<std::size_t>();
            r.p = j.at("p").get<std::size_t>();
            r.rejection_percentage = j.at("rejection_percentage").get<double>();
            if (!j.at("speedup").is_null()) r.speedup = j["speedup"].get<double>();
            if (!j.at("baseline_seconds").is_null()) r.baseline_seconds = j["baseline_seconds"].get<double>();
            r.sequence_seconds = j.at("sequence_seconds").get<double>();
            r.false_rejections = j.at("false_rejections").get<std::size_t>();
            r.completed = j.at("completed").get<bool>();
            if (!j.at("failure").is_null()) r.failure = j["failure"].get<std::string>();
            report.rows.push_back(std::move(r));
        }
        for (const auto& j : doc.at("aggregates")) {
            BenchAggregate a;
            a.strategy = j.at("strategy").get<std::string>();
            a.lambda_ratio = j.at("lambda_ratio").get<double>();
            a.rows = j.at("rows").get<std::size_t>();
            a.completed = j.at("completed").get<std::size_t>();
            a.completion_rate = j.at("completion_rate").get<double>();
            a.rejection = mean_se_from(j.at("rejection"));
            a.speedup = mean_se_from(j.at("speedup"));
            a.N = mean_se_from(j.at("N"));
            a.false_rejections = mean_se_from(j.at("false_rejections"));
            report.aggregates.push_back(std::move(a));
        }
        return report;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed report: ") + e.what());
    }
}

std::string report_to_csv(const BenchReport& report) {
    std::ostringstream os;
    os << "instance,strategy,label,lambda_ratio,N,final_kept,p,rejection_percentage,speedup,baseline_seconds,"
          "sequence_seconds,false_rejections,completed,failure\n";
    for (const auto& r : report.rows) {
        os << csv_field(r.instance) << ',' << csv_field(r.strategy) << ',' << csv_field(r.label) << ','
           << fmt(r.lambda_ratio) << ',' << r.N << ',' << r.final_kept << ',' << r.p << ','
           << fmt(r.rejection_percentage) << ',' << (r.speedup ? fmt(*r.speedup) : "") << ','
           << (r.baseline_seconds ? fmt(*r.baseline_seconds) : "") << ',' << fmt(r.sequence_seconds) << ','
           << r.false_rejections << ',' << (r.completed ? "true" : "false") << ',' << csv_field(r.failure) << '\n';
    }
    return os.str();
}

std::vector<std::filesystem::path> write_plot_series(const BenchReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

    std::vector<std::string> strategies;
    std::set<double> ratios;
    for (const auto& a : report.aggregates) {
        if (std::find(strategies.begin(), strategies.end(), a.strategy) == strategies.end()) {
            strategies.push_back(a.strategy);
        }
        ratios.insert(a.lambda_ratio);
    }
    auto series = [&](const std::function<const MeanSe&(const BenchAggregate&)>& pick, bool skip_empty) {
        std::ostringstream os;
        os << "lambda_ratio";
        for (const auto& s : strategies) os << ',' << csv_field(s + "_mean") << ',' << csv_field(s + "_se");
        os << '\n';
        for (double ratio : ratios) {
            os << fmt(ratio);
            for (const auto& s : strategies) {
                const auto it = std::find_if(report.aggregates.begin(), report.aggregates.end(),
                                             [&](const BenchAggregate& a) {
                                                 return a.strategy == s && a.lambda_ratio == ratio;
                                             });
                if (it == report.aggregates.end() || (skip_empty && pick(*it).n == 0)) {
                    os << ",,";
                } else {
                    os << ',' << fmt(pick(*it).mean) << ',' << fmt(pick(*it).se);
                }
            }
            os << '\n';
        }
        return os.str();
    };

    std::vector<std::filesystem::path> written;
    const auto rejection_path = dir / "rejection_vs_ratio.csv";
    write_text_file(rejection_path, series([](const BenchAggregate& a) -> const MeanSe& { return a.rejection; }, true));
    written.push_back(rejection_path);
    const auto speedup_path = dir / "speedup_vs_ratio.csv";
    write_text_file(speedup_path, series([](const BenchAggregate& a) -> const MeanSe& { return a.speedup; }, true));
    written.push_back(speedup_path);

    std::ostringstream scatter;
    scatter << "instance,strategy,lambda_ratio,N,rejection_percentage,speedup,completed\n";
    for (const auto& r : report.rows) {
        scatter << csv_field(r.instance) << ',' << csv_field(r.strategy) << ',' << fmt(r.lambda_ratio) << ',' << r.N
                << ',' << fmt(r.rejection_percentage) << ',' << (r.speedup ? fmt(*r.speedup) : "") << ','
                << (r.completed ? "true" : "false") << '\n';
    }
    const auto scatter_path = dir / "scatter.csv";
    write_text_file(scatter_path, scatter.str());
    written.push_back(scatter_path);
    return written;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

} // namespace seqscreen
