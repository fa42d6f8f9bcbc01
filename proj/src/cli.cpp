#include "copulacpd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "copulacpd/harness.hpp"
#include "copulacpd/inference.hpp"
#include "copulacpd/io.hpp"
#include "copulacpd/preprocess.hpp"
#include "copulacpd/scan.hpp"
#include "copulacpd/synth.hpp"

namespace copulacpd {

namespace {

using nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse:
            return kExitParse;
        case ErrorCode::EtaOutOfRange:
        case ErrorCode::BadConfig:
        case ErrorCode::WindowTooLarge:
        case ErrorCode::UnknownScenario:
        case ErrorCode::BadParams:
            return kExitConfig;
        default:
            return kExitNumeric;
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Parse, "cannot write '" + path + "'");
    return f;
}

void emit(const ordered_json& doc, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << doc.dump(2) << '\n';
        return;
    }
    auto f = open_output(path);
    f << doc.dump(2) << '\n';
}

ordered_json document(const std::string& command, ordered_json config, ordered_json result) {
    ordered_json doc;
    doc["command"] = command;
    doc["config"] = std::move(config);
    doc["result"] = std::move(result);
    return doc;
}

// Parses "key=value" overrides.
std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, double> params;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::BadParams, "parameter '" + item + "' is not of the form key=value");
        }
        const std::string key = item.substr(0, eq);
        try {
            params[key] = parse_double(item.substr(eq + 1), "parameter " + key);
        } catch (const Error& e) {
            throw Error(ErrorCode::BadParams, e.what());
        }
    }
    return params;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(' ');
        if (first == std::string::npos) continue;
        items.push_back(item.substr(first, item.find_last_not_of(' ') - first + 1));
    }
    return items;
}

std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    if (p.extension() == ".csv") return p.replace_extension(".json").string();
    return csv_path + ".json";
}

struct DetectArgs {
    std::string input;
    std::size_t eta = 0;
    std::size_t k = kDefaultNeighbors;
    std::size_t perms = kDefaultPermutations;
    std::uint64_t seed = 0;
    double gamma = 0.0;
    CLI::Option* gamma_opt = nullptr;
    std::string out;
};

struct ScanArgs {
    std::string input;
    std::size_t window = 0;
    std::size_t step = 1;
    double pbar = 0.05;
    std::string correction = "none";
    std::size_t perms = kDefaultPermutations;
    std::size_t k = kDefaultNeighbors;
    std::uint64_t seed = 0;
    double gamma = 0.0;
    CLI::Option* gamma_opt = nullptr;
    std::string out;
};

struct SimulateArgs {
    std::string scenario;
    std::size_t n = 800;
    std::size_t tau = 0;
    CLI::Option* tau_opt = nullptr;
    std::uint64_t seed = 0;
    std::string out;
    std::vector<std::string> params;
    bool twin = false;
};

struct BenchArgs {
    std::string scenarios;
    std::size_t replicates = 50;
    std::size_t perms = kDefaultPermutations;
    std::size_t n = 800;
    std::size_t k = kDefaultNeighbors;
    std::uint64_t seed = 0;
    double alpha = 0.05;
    std::vector<std::string> params;
    std::string out;
};

struct PreprocessArgs {
    std::string input;
    std::string spec;
    std::string out;
    std::string ewma_mean;
    std::string report;
};

int cmd_detect(const DetectArgs& a, unsigned threads, std::ostream& out) {
    const InputTable table = read_input_file(a.input);
    const SplitView view = split(table.data, a.eta);
    EstimatorConfig est;
    est.k = a.k;
    if (a.gamma_opt->count() > 0) est.gamma = a.gamma;
    est.threads = threads;
    PermutationPlan plan;
    plan.b = a.perms;
    plan.seed = a.seed;
    plan.threads = threads;
    const TestOutcome test = permutation_test(view, est, plan);

    ordered_json config;
    config["input"] = a.input;
    config["eta"] = a.eta;
    config["k"] = a.k;
    config["perms"] = a.perms;
    config["seed"] = a.seed;
    config["gamma"] = test.gamma;
    config["gamma_source"] = est.gamma ? "fixed" : "median_heuristic";
    config["n"] = table.data.n();
    config["d"] = table.data.d();

    ordered_json result;
    result["q_hat"] = test.observed.q_hat;
    result["t1"] = test.observed.t1;
    result["t2"] = test.observed.t2;
    result["t3"] = test.observed.t3;
    result["gamma"] = test.gamma;
    result["k"] = test.observed.k;
    result["p_value"] = test.p_value;
    if (table.t) result["t_first_post"] = (*table.t)[a.eta];
    emit(document("detect", std::move(config), std::move(result)), a.out, out);
    return kExitOk;
}

int cmd_scan(const ScanArgs& a, unsigned threads, std::ostream& out) {
    const InputTable table = read_input_file(a.input);
    ScanConfig cfg;
    cfg.window = a.window;
    cfg.step = a.step;
    cfg.p_bar = a.pbar;
    cfg.correction = parse_correction(a.correction);
    cfg.b = a.perms;
    cfg.estimator.k = a.k;
    if (a.gamma_opt->count() > 0) cfg.estimator.gamma = a.gamma;
    cfg.seed = a.seed;
    cfg.threads = threads;
    const ScanResult r = scan(table.data, cfg);

    ordered_json config;
    config["input"] = a.input;
    config["window"] = a.window;
    config["step"] = a.step;
    config["pbar"] = a.pbar;
    config["correction"] = to_string(cfg.correction);
    config["perms"] = a.perms;
    config["k"] = a.k;
    config["seed"] = a.seed;
    config["gamma"] = cfg.estimator.gamma ? ordered_json(*cfg.estimator.gamma) : ordered_json(nullptr);
    config["gamma_source"] = cfg.estimator.gamma ? "fixed" : "median_heuristic_per_window";
    config["n"] = table.data.n();
    config["d"] = table.data.d();

    auto label = [&](ordered_json& j, std::size_t index) {
        if (table.t) j["t"] = (*table.t)[index];
    };
    ordered_json trace = ordered_json::array();
    for (const auto& p : r.trace) {
        ordered_json j;
        j["index"] = p.index;
        j["q_hat"] = p.q_hat;
        label(j, p.index);
        trace.push_back(std::move(j));
    }
    ordered_json candidates = ordered_json::array();
    for (std::size_t c = 0; c < r.candidates.size(); ++c) {
        ordered_json j;
        j["index"] = r.candidates[c];
        j["p_value"] = r.p_values[c];
        j["accepted"] = std::find(r.accepted.begin(), r.accepted.end(), r.candidates[c]) != r.accepted.end();
        label(j, r.candidates[c]);
        candidates.push_back(std::move(j));
    }
    ordered_json result;
    result["accepted"] = r.accepted;
    result["candidates"] = std::move(candidates);
    result["trace"] = std::move(trace);
    emit(document("scan", std::move(config), std::move(result)), a.out, out);
    return kExitOk;
}

int cmd_simulate(const SimulateArgs& a) {
    ScenarioSpec spec;
    spec.id = a.scenario;
    spec.n = a.n;
    spec.tau = a.tau_opt->count() > 0 ? a.tau : a.n / 2;
    spec.seed = a.seed;
    spec.params = parse_params(a.params);
    spec.twin = a.twin;
    const ScenarioOutput sim = generate(spec);

    std::vector<ExtraColumn> extra;
    std::vector<std::string> aux_names;
    for (std::size_t c = 0; c < sim.other_x.cols(); ++c) {
        ExtraColumn col;
        col.name = "x_aux_" + std::to_string(c + 1);
        col.values.resize(sim.other_x.rows());
        for (std::size_t r = 0; r < sim.other_x.rows(); ++r) col.values[r] = sim.other_x(r, c);
        aux_names.push_back(col.name);
        extra.push_back(std::move(col));
    }
    {
        auto f = open_output(a.out);
        write_csv(f, sim.data, std::nullopt, extra);
    }

    ordered_json meta;
    meta["scenario"] = spec.id;
    meta["is_null"] = sim.is_null;
    meta["true_tau"] = sim.true_tau;
    meta["n"] = spec.n;
    meta["seed"] = spec.seed;
    meta["twin"] = spec.twin;
    meta["driver_column"] = sim.driver_column;
    meta["d"] = sim.data.d();
    meta["aux_x_columns"] = aux_names;
    ordered_json params;
    for (const auto& [key, value] : sim.params) params[key] = value;
    meta["params"] = std::move(params);
    meta["assumed_params"] = sim.assumed_params;
    auto f = open_output(sidecar_path(a.out));
    f << meta.dump(2) << '\n';
    return kExitOk;
}

int cmd_scenarios(std::ostream& out) {
    ordered_json list = ordered_json::array();
    for (const auto& info : list_scenarios()) {
        ordered_json j;
        j["id"] = info.id;
        j["is_null"] = info.is_null;
        j["summary"] = info.summary;
        ordered_json defaults;
        for (const auto& [key, value] : info.defaults) defaults[key] = value;
        j["defaults"] = std::move(defaults);
        j["assumed_params"] = info.assumed_params;
        list.push_back(std::move(j));
    }
    out << list.dump(2) << '\n';
    return kExitOk;
}

int cmd_bench(const BenchArgs& a, unsigned threads, std::ostream& out, std::ostream& err) {
    BenchConfig cfg;
    cfg.scenarios = split_list(a.scenarios);
    if (cfg.scenarios.size() == 1 && cfg.scenarios[0] == "all") {
        cfg.scenarios.clear();
        for (const auto& info : list_scenarios()) cfg.scenarios.push_back(info.id);
    }
    cfg.replicates = a.replicates;
    cfg.b = a.perms;
    cfg.n = a.n;
    cfg.k = a.k;
    cfg.seed = a.seed;
    cfg.alpha = a.alpha;
    cfg.params = parse_params(a.params);
    cfg.threads = threads;
    const auto rows = run_bench(cfg, [&err](const std::string& line) { err << line << std::endl; });

    ordered_json config;
    config["scenarios"] = cfg.scenarios;
    config["replicates"] = cfg.replicates;
    config["perms"] = cfg.b;
    config["n"] = cfg.n;
    config["tau"] = cfg.split();
    config["k"] = cfg.k;
    config["seed"] = cfg.seed;
    config["alpha"] = cfg.alpha;
    ordered_json params = ordered_json::object();
    for (const auto& [key, value] : cfg.params) params[key] = value;
    config["params"] = std::move(params);

    ordered_json result = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json j;
        j["scenario"] = r.scenario;
        j["is_null"] = r.is_null;
        j["null_class"] = r.null_class;
        j["auc"] = r.auc;
        j["auc_se"] = r.auc_se;
        j["median_p"] = r.median_p;
        j["rejections"] = r.rejections;
        j["replicates"] = r.replicates;
        j["q_scenario"] = r.q_scenario;
        j["q_null"] = r.q_null;
        j["p_values"] = r.p_values;
        result.push_back(std::move(j));
    }
    const auto doc = document("bench", std::move(config), std::move(result));
    if (a.out.empty()) {
        out << doc.dump(2) << '\n';
        return kExitOk;
    }
    {
        auto f = open_output(a.out + ".json");
        f << doc.dump(2) << '\n';
    }
    auto f = open_output(a.out + ".csv");
    f << "scenario,is_null,null_class,auc,auc_se,median_p,rejections,replicates\n";
    for (const auto& r : rows) {
        f << r.scenario << ',' << (r.is_null ? "true" : "false") << ',' << r.null_class << ','
          << format_double(r.auc) << ',' << format_double(r.auc_se) << ',' << format_double(r.median_p) << ','
          << r.rejections << ',' << r.replicates << '\n';
    }
    return kExitOk;
}

int cmd_preprocess(const PreprocessArgs& a, std::ostream& out) {
    ordered_json spec;
    {
        std::ifstream f(a.spec);
        if (!f) throw Error(ErrorCode::Parse, "cannot open '" + a.spec + "'");
        try {
            spec = ordered_json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorCode::Parse, std::string("spec file: ") + e.what());
        }
    }
    if (!spec.is_object() || !spec.contains("columns") || !spec["columns"].is_object()) {
        throw Error(ErrorCode::BadConfig, "spec needs a \"columns\" object");
    }
    EwmaMean mean_mode = EwmaMean::Ewma;
    if (spec.contains("ewma_mean")) mean_mode = parse_ewma_mean(spec["ewma_mean"].get<std::string>());
    if (!a.ewma_mean.empty()) mean_mode = parse_ewma_mean(a.ewma_mean);
    double epsilon = 1e-6;
    if (spec.contains("epsilon")) epsilon = spec["epsilon"].get<double>();

    const CsvTable table = read_csv_file(a.input);
    const auto& columns = spec["columns"];
    for (const auto& name : table.header) {
        if (name != "t" && !columns.contains(name)) {
            throw Error(ErrorCode::BadConfig, "column '" + name + "' has no entry in the spec");
        }
    }

    ordered_json col_config;
    std::vector<std::vector<double>> outputs;
    std::vector<std::string> names;
    for (const auto& [name, entry] : columns.items()) {
        if (!table.find(name)) throw Error(ErrorCode::BadConfig, "spec column '" + name + "' not in input");
        if (!entry.is_object() || !entry.contains("kind") || !entry.contains("span")) {
            throw Error(ErrorCode::BadConfig, "spec column '" + name + "' needs kind and span");
        }
        const SeriesKind kind = parse_series_kind(entry["kind"].get<std::string>());
        const long long span = entry["span"].get<long long>();
        if (span < 2) throw Error(ErrorCode::BadConfig, "span of '" + name + "' must be >= 2");
        EwmaConfig ewma;
        ewma.span = static_cast<std::size_t>(span);
        ewma.epsilon = epsilon;
        ewma.mean = mean_mode;

        const auto returns = to_returns(table.numeric(name), kind);
        outputs.push_back(ewma_normalize(returns, ewma));
        names.push_back(name);
        ordered_json c;
        c["kind"] = to_string(kind);
        c["span"] = ewma.span;
        c["alpha"] = ewma.alpha();
        col_config[name] = std::move(c);
    }

    {
        auto f = open_output(a.out);
        const auto tc = table.find("t");
        if (tc) f << "t,";
        for (std::size_t c = 0; c < names.size(); ++c) f << (c ? "," : "") << names[c];
        f << '\n';
        for (std::size_t r = 1; r < table.rows.size(); ++r) {
            if (tc) f << table.rows[r][*tc] << ',';
            for (std::size_t c = 0; c < names.size(); ++c) f << (c ? "," : "") << format_double(outputs[c][r - 1]);
            f << '\n';
        }
    }

    ordered_json config;
    config["input"] = a.input;
    config["spec"] = a.spec;
    config["ewma_mean"] = to_string(mean_mode);
    config["epsilon"] = epsilon;
    config["columns"] = std::move(col_config);
    ordered_json result;
    result["output"] = a.out;
    result["rows_in"] = table.rows.size();
    result["rows_out"] = table.rows.empty() ? 0 : table.rows.size() - 1;
    emit(document("preprocess", std::move(config), std::move(result)), a.report, out);
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conditional-copula causal change point detection"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = one per core)")->capture_default_str();

    DetectArgs detect;
    auto* d = app.add_subcommand("detect", "test for a change at a given split");
    d->add_option("--input", detect.input, "input CSV")->required();
    d->add_option("--eta", detect.eta, "number of pre-change rows")->required();
    d->add_option("--k", detect.k, "neighbours per segment")->capture_default_str();
    d->add_option("--perms", detect.perms, "permutations")->capture_default_str();
    d->add_option("--seed", detect.seed, "random seed")->capture_default_str();
    detect.gamma_opt = d->add_option("--gamma", detect.gamma, "fixed kernel bandwidth");
    d->add_option("--out", detect.out, "write the result document here instead of stdout");

    ScanArgs scan_args;
    auto* s = app.add_subcommand("scan", "sliding-window change point scan");
    s->add_option("--input", scan_args.input, "input CSV")->required();
    s->add_option("--window", scan_args.window, "half-window W")->required();
    s->add_option("--step", scan_args.step, "trace stride")->capture_default_str();
    s->add_option("--pbar", scan_args.pbar, "significance level")->capture_default_str();
    s->add_option("--correction", scan_args.correction, "none or benjamini_yekutieli")->capture_default_str();
    s->add_option("--perms", scan_args.perms, "permutations per candidate")->capture_default_str();
    s->add_option("--k", scan_args.k, "neighbours per segment")->capture_default_str();
    s->add_option("--seed", scan_args.seed, "random seed")->capture_default_str();
    scan_args.gamma_opt = s->add_option("--gamma", scan_args.gamma, "fixed kernel bandwidth");
    s->add_option("--out", scan_args.out, "write the result document here instead of stdout");

    SimulateArgs sim;
    auto* g = app.add_subcommand("simulate", "generate a synthetic scenario");
    g->add_option("--scenario", sim.scenario, "scenario id")->required();
    g->add_option("--n", sim.n, "total length")->capture_default_str();
    sim.tau_opt = g->add_option("--tau", sim.tau, "number of pre-change rows (default n/2)");
    g->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    g->add_option("--out", sim.out, "output CSV; metadata goes next to it as .json")->required();
    g->add_option("--params", sim.params, "parameter overrides key=value");
    g->add_flag("--twin", sim.twin, "apply the pre-change mechanism throughout");

    auto* list = app.add_subcommand("scenarios", "list registered scenarios");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Monte Carlo evaluation over scenarios");
    b->add_option("--scenarios", bench.scenarios, "comma-separated ids, or all")->required();
    b->add_option("--replicates", bench.replicates, "replicates per scenario")->capture_default_str();
    b->add_option("--perms", bench.perms, "permutations per test")->capture_default_str();
    b->add_option("--n", bench.n, "series length")->capture_default_str();
    b->add_option("--k", bench.k, "neighbours per segment")->capture_default_str();
    b->add_option("--seed", bench.seed, "base seed")->capture_default_str();
    b->add_option("--alpha", bench.alpha, "rejection level")->capture_default_str();
    b->add_option("--params", bench.params, "parameter overrides key=value");
    b->add_option("--out", bench.out, "output prefix; writes <prefix>.csv and <prefix>.json");

    PreprocessArgs pre;
    auto* p = app.add_subcommand("preprocess", "returns and EWMA volatility normalisation");
    p->add_option("--input", pre.input, "input CSV")->required();
    p->add_option("--spec", pre.spec, "JSON column spec")->required();
    p->add_option("--out", pre.out, "output CSV")->required();
    p->add_option("--ewma-mean", pre.ewma_mean, "ewma or zero (overrides the spec)");
    p->add_option("--report", pre.report, "write the result document here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    }

    try {
        if (*d) return cmd_detect(detect, threads, out);
        if (*s) return cmd_scan(scan_args, threads, out);
        if (*g) return cmd_simulate(sim);
        if (*list) return cmd_scenarios(out);
        if (*b) return cmd_bench(bench, threads, out, err);
        if (*p) return cmd_preprocess(pre, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace copulacpd
