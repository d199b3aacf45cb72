#include "arc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "arc/covering.hpp"
#include "arc/serialize.hpp"

namespace arc::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_override;
    bool trace = false;
    int threads = 1;
};

double parse_exponent(const Json& v, const std::string& context) {
    if (v.is_string()) {
        require(v.get<std::string>() == "inf", context + ": exponent must be a number or 'inf'");
        return kInf;
    }
    double p = v.get<double>();
    require(p >= 1.0, context + ": exponent must be >= 1");
    return p;
}

std::string out_path(const CommonFlags& flags, const Json& cfg, const std::string& key,
                     const std::string& fallback) {
    if (flags.out_override) {
        std::filesystem::create_directories(*flags.out_override);
        return (std::filesystem::path(*flags.out_override) / fallback).string();
    }
    return cfg.value(key, fallback);
}

Json runtime_metadata(std::chrono::steady_clock::time_point start) {
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
    return Json{{"elapsed_seconds", elapsed.count()}, {"version", kVersion}};
}

LossKind parse_loss(const std::string& name) {
    if (name == "logistic") return LossKind::Logistic;
    if (name == "cross_entropy") return LossKind::CrossEntropy;
    if (name == "ramp") return LossKind::Ramp;
    throw InvalidInput("loss must be 'logistic', 'cross_entropy' or 'ramp'");
}

SupBudget parse_budget(const Json& doc) {
    reject_unknown_keys(doc, {"restarts", "ascent_steps", "random_samples", "pool_samples"},
                        "budget");
    SupBudget b;
    b.restarts = doc.value("restarts", 10);
    b.ascent_steps = doc.value("ascent_steps", 200);
    b.random_samples = doc.value("random_samples", 500);
    b.pool_samples = doc.value("pool_samples", 0);
    require(b.restarts >= 0 && b.ascent_steps >= 0 && b.random_samples >= 0 &&
                b.pool_samples >= 0,
            "budget: counts must be >= 0");
    return b;
}

// ---------------------------------------------------------------- gen-data

int cmd_gen_data(const CommonFlags& flags) {
    Json cfg = read_json_file(flags.config_path);
    reject_unknown_keys(cfg,
                        {"kind", "n", "d", "classes", "b", "p", "separation", "offset", "sigma",
                         "class_sigmas", "centers", "label_noise", "seed", "out"},
                        "gen-data");
    std::string kind = cfg.value("kind", std::string("blobs"));
    std::string out = out_path(flags, cfg, "out", "data.csv");

    Dataset data;
    if (kind == "blobs") {
        BlobConfig bc;
        bc.n = cfg.at("n").get<std::size_t>();
        bc.d = cfg.at("d").get<std::size_t>();
        bc.classes = cfg.value("classes", std::size_t{2});
        bc.b = cfg.value("b", 1.0);
        bc.p = cfg.contains("p") ? parse_exponent(cfg["p"], "gen-data") : kInf;
        bc.separation = cfg.value("separation", 0.8);
        bc.offset = cfg.value("offset", 0.0);
        bc.sigma = cfg.value("sigma", 0.3);
        bc.label_noise = cfg.value("label_noise", 0.0);
        if (cfg.contains("class_sigmas"))
            bc.class_sigmas = cfg["class_sigmas"].get<std::vector<double>>();
        if (cfg.contains("centers")) {
            for (const Json& c : cfg["centers"]) {
                reject_unknown_keys(c, {"position", "label"}, "gen-data centre");
                bc.centers.push_back(
                    {c.at("position").get<Vector>(), c.at("label").get<int>()});
            }
        }
        bc.seed = flags.seed_override.value_or(cfg.value("seed", std::uint64_t{0}));
        data = make_gaussian_blobs(bc);
    } else if (kind == "thm3") {
        data = make_equal_entries_dataset(
            cfg.at("n").get<std::size_t>(), cfg.at("d").get<std::size_t>(), cfg.value("b", 1.0),
            cfg.contains("p") ? parse_exponent(cfg["p"], "gen-data") : 2.0);
    } else {
        throw InvalidInput("gen-data: kind must be 'blobs' or 'thm3'");
    }
    write_dataset_csv(data, out);
    std::cout << "wrote " << data.size() << " samples (d=" << data.dim() << ") to " << out
              << "\n";
    return 0;
}

// ---------------------------------------------------------------- bounds

BoundReport compute_bound_report(const FunctionClassSpec& cls, double b, double eps, double p,
                                 std::size_t n, std::optional<double> gamma, const MLP* weights) {
    BoundReport report;
    report.n = n;

    FunctionClassSpec fro = cls;
    fro.norm_kind = NormKind::Frobenius;
    FunctionClassSpec oneinf = cls;
    oneinf.norm_kind = NormKind::GroupOneInf;
    report.thm1_frobenius = thm1_bound(fro, b, eps, p, n);
    report.thm2_one_inf = thm2_bound(oneinf, b, eps, p, n);
    LowerBoundConfig lower;
    lower.r = cls.norm_kind == NormKind::Frobenius ? 2.0 : 1.0;
    report.thm3_lower = thm3_lower_bound(cls, b, eps, p, n, lower);
    if (cls.output_dim() >= 2) {
        require(gamma.has_value(), "bounds: multiclass head needs gamma");
        report.thm4_multiclass =
            thm4_multiclass_bound(fro, b, eps, p, n, *gamma, cls.output_dim());
    }
    report.comparisons = comparison_bounds(cls, weights, b, eps, n);

    double wnorm = cls.budget_product();
    if (weights != nullptr) {
        wnorm = 1.0;
        for (const Matrix& w : weights->weights) wnorm *= matrix_norm(w, cls.norm_kind);
    }
    double g = gamma.value_or(1.0);
    auto dstd = factor_decomposition(b, eps, cls.depth(), cls.width(), g, wnorm,
                                     FactorMode::Standard);
    auto dadv = factor_decomposition(b, eps, cls.depth(), cls.width(), g, wnorm,
                                     FactorMode::Adversarial);
    report.c_std = dstd.c_factor;
    report.c_adv = dadv.c_factor;
    report.w_factor = dadv.w_factor;
    report.c_adv_degenerate = dadv.degenerate_depth;
    return report;
}

int cmd_bounds(const CommonFlags& flags) {
    auto start = std::chrono::steady_clock::now();
    Json cfg = read_json_file(flags.config_path);
    reject_unknown_keys(cfg, {"class", "data", "b", "n", "eps", "p", "gamma", "weights", "out"},
                        "bounds");
    FunctionClassSpec cls = class_spec_from_json(cfg.at("class"));
    double p = cfg.contains("p") ? parse_exponent(cfg["p"], "bounds") : kInf;
    double eps = cfg.value("eps", 0.0);

    double b;
    std::size_t n;
    if (cfg.contains("data")) {
        Dataset data = read_dataset_csv(cfg["data"].get<std::string>());
        require(data.dim() == cls.input_dim(), "bounds: data/class dimension mismatch");
        b = data.group_norm(p);
        n = data.size();
    } else {
        require(cfg.contains("b") && cfg.contains("n"),
                "bounds: need either 'data' or both 'b' and 'n'");
        b = cfg["b"].get<double>();
        n = cfg["n"].get<std::size_t>();
    }

    std::optional<double> gamma;
    if (cfg.contains("gamma")) gamma = cfg["gamma"].get<double>();
    MLP weights;
    const MLP* weights_ptr = nullptr;
    if (cfg.contains("weights")) {
        weights = read_mlp_json(cfg["weights"].get<std::string>());
        weights_ptr = &weights;
    }

    BoundReport report = compute_bound_report(cls, b, eps, p, n, gamma, weights_ptr);
    Json doc = bound_report_to_json(report);
    if (cls.depth() != 2)
        doc["note_awasthi"] = "awasthi_two_layer applies to l = 2 only; omitted";
    doc["config"] = cfg;
    doc["runtime"] = runtime_metadata(start);

    std::string out = flags.out_override || cfg.contains("out")
                          ? out_path(flags, cfg, "out", "bounds.json")
                          : "";
    if (out.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        write_json_file(doc, out);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateRun {
    Json config_echo;
    RadEstimate estimate;
    FunctionClassSpec cls;
    Dataset data;
    AttackSpec attack;
    std::string kind;
    std::optional<double> gamma;
    std::uint64_t seed = 0;
};

EstimateRun run_estimate_config(const Json& cfg, const CommonFlags& flags) {
    reject_unknown_keys(
        cfg, {"class", "data", "kind", "attack", "gamma", "draws", "budget", "seed", "out",
              "trace_out", "theorems", "thm3_check", "debug_scale_bounds"},
        "estimate");
    EstimateRun run;
    run.cls = class_spec_from_json(cfg.at("class"));
    require(run.cls.param_count() <= 60,
            "estimate: class has more than 60 parameters; the weight-space supremum search "
            "is only trustworthy for tiny classes — shrink dims");
    run.data = read_dataset_csv(cfg.at("data").get<std::string>());
    run.kind = cfg.value("kind", std::string("arc"));
    run.attack = cfg.contains("attack") ? attack_spec_from_json(cfg["attack"]) : AttackSpec{};
    if (cfg.contains("gamma")) run.gamma = cfg["gamma"].get<double>();
    auto draws = cfg.value("draws", std::size_t{200});
    SupBudget budget = cfg.contains("budget") ? parse_budget(cfg["budget"]) : SupBudget{};
    run.seed = flags.seed_override.value_or(cfg.value("seed", std::uint64_t{0}));

    if (run.kind == "rc") {
        run.estimate = estimate_rc(run.cls, run.data, draws, budget, run.seed, flags.threads);
    } else if (run.kind == "arc") {
        run.estimate = estimate_arc(run.cls, run.data, run.attack, draws, budget, run.seed,
                                    flags.threads);
    } else if (run.kind == "arc_multiclass") {
        require(run.gamma.has_value(), "estimate: arc_multiclass needs gamma");
        run.estimate = estimate_arc_multiclass(run.cls, run.data, run.attack, *run.gamma, draws,
                                               budget, run.seed, flags.threads);
    } else {
        throw InvalidInput("estimate: kind must be 'rc', 'arc' or 'arc_multiclass'");
    }

    run.config_echo = cfg;
    run.config_echo["seed"] = run.seed;
    run.config_echo["draws"] = draws;
    Json bj;
    bj["restarts"] = budget.restarts;
    bj["ascent_steps"] = budget.ascent_steps;
    bj["random_samples"] = budget.random_samples;
    bj["pool_samples"] = budget.pool_samples;
    run.config_echo["budget"] = bj;
    return run;
}

int cmd_estimate(const CommonFlags& flags) {
    auto start = std::chrono::steady_clock::now();
    Json cfg = read_json_file(flags.config_path);
    EstimateRun run = run_estimate_config(cfg, flags);

    Json doc = rad_estimate_to_json(run.estimate);
    doc["config"] = run.config_echo;
    doc["runtime"] = runtime_metadata(start);

    std::string out = out_path(flags, cfg, "out", "estimate.json");
    write_json_file(doc, out);
    if (flags.trace || cfg.contains("trace_out")) {
        std::string trace = out_path(flags, cfg, "trace_out", "estimate_trace.csv");
        write_estimate_trace_csv(run.estimate, trace);
    }
    std::cout << "mean " << run.estimate.mean << " stderr " << run.estimate.stderr_ << " ("
              << run.estimate.draws << " draws) -> " << out << "\n";
    return 0;
}

// ---------------------------------------------------------------- audit

int cmd_audit(const CommonFlags& flags) {
    auto start = std::chrono::steady_clock::now();
    Json cfg = read_json_file(flags.config_path);
    EstimateRun run = run_estimate_config(cfg, flags);

    double p = run.attack.p;
    double eps = run.attack.epsilon;
    double b = run.data.group_norm(p);
    std::size_t n = run.data.size();
    double scale = cfg.value("debug_scale_bounds", 1.0);

    BoundReport report = compute_bound_report(run.cls, b, eps, p, n, run.gamma, nullptr);

    std::vector<std::string> theorems =
        cfg.contains("theorems") ? cfg["theorems"].get<std::vector<std::string>>()
                                 : std::vector<std::string>{run.cls.norm_kind == NormKind::Frobenius
                                                                ? "thm1"
                                                                : "thm2"};
    double upper = run.estimate.mean + 3.0 * run.estimate.stderr_;

    Json verdicts;
    bool all_pass = true;
    for (const std::string& t : theorems) {
        double bound;
        if (t == "thm1") {
            bound = report.thm1_frobenius;
        } else if (t == "thm2") {
            bound = report.thm2_one_inf;
        } else if (t == "thm4") {
            require(report.thm4_multiclass.has_value(), "audit: thm4 needs a multiclass class");
            bound = *report.thm4_multiclass;
        } else {
            throw InvalidInput("audit: theorems must be thm1, thm2 or thm4");
        }
        bound *= scale;
        bool pass = upper <= bound;
        all_pass = all_pass && pass;
        verdicts[t] = Json{{"bound", bound}, {"estimate_plus_3se", upper},
                           {"verdict", pass ? "PASS" : "FAIL"}};
    }
    if (cfg.value("thm3_check", false)) {
        double lower = report.thm3_lower * scale;
        bool pass = upper >= lower;
        all_pass = all_pass && pass;
        verdicts["thm3_lower"] =
            Json{{"bound", lower}, {"estimate_plus_3se", upper},
                 {"verdict", pass ? "PASS" : "FAIL"}};
    }

    Json doc;
    doc["estimate"] = rad_estimate_to_json(run.estimate);
    doc["bounds"] = bound_report_to_json(report);
    doc["verdicts"] = verdicts;
    doc["config"] = run.config_echo;
    doc["runtime"] = runtime_metadata(start);

    std::string out = out_path(flags, cfg, "out", "audit.json");
    write_json_file(doc, out);
    std::cout << doc["verdicts"].dump(2) << "\n";
    if (flags.trace || cfg.contains("trace_out")) {
        std::string trace = out_path(flags, cfg, "trace_out", "estimate_trace.csv");
        write_estimate_trace_csv(run.estimate, trace);
    }
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- covering

int cmd_covering(const CommonFlags& flags) {
    auto start = std::chrono::steady_clock::now();
    Json cfg = read_json_file(flags.config_path);
    reject_unknown_keys(cfg, {"class", "b", "n", "eps", "p", "cover_eps", "out"}, "covering");
    FunctionClassSpec cls = class_spec_from_json(cfg.at("class"));
    double b = cfg.at("b").get<double>();
    double eps = cfg.value("eps", 0.0);
    double p = cfg.contains("p") ? parse_exponent(cfg["p"], "covering") : kInf;
    auto n = cfg.value("n", std::size_t{100});

    ChainResult chain = assemble_chain(cls, b, eps, p, n);
    Json doc;
    doc["diameter"] = chain.diameter;
    doc["sum_hh"] = chain.sum_hh;
    doc["dudley_delta_zero"] = chain.dudley_value;
    double dn = chain.diameter / std::sqrt(static_cast<double>(n));
    if (chain.diameter > 0.0 && dn < chain.diameter / 2.0)
        doc["dudley_delta_d_over_sqrt_n"] = dudley_integral(chain, dn);
    if (cfg.contains("cover_eps")) {
        double ce = cfg["cover_eps"].get<double>();
        doc["log_cover"] = robustified_class_cover_log(cls, b, eps, p, ce);
        doc["cover_eps"] = ce;
    }
    if (cls.norm_kind == NormKind::Frobenius)
        doc["thm1_closed_form"] = thm1_bound(cls, b, eps, p, n);
    else
        doc["thm2_closed_form"] = thm2_bound(cls, b, eps, p, n);
    doc["config"] = cfg;
    doc["runtime"] = runtime_metadata(start);

    if (flags.out_override || cfg.contains("out")) {
        std::string out = out_path(flags, cfg, "out", "covering.json");
        write_json_file(doc, out);
        std::cout << "wrote " << out << "\n";
    } else {
        std::cout << doc.dump(2) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- experiment

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_experiment(const CommonFlags& flags) {
    auto start = std::chrono::steady_clock::now();
    Json cfg = read_json_file(flags.config_path);
    reject_unknown_keys(cfg,
                        {"train_data", "test_data", "dims", "activation", "loss", "epochs",
                         "batch_size", "lr_schedule", "weight_decay", "weight_decays", "attack",
                         "eval_steps", "seeds", "gamma", "percentile", "out_dir"},
                        "experiment");
    Dataset train_data = read_dataset_csv(cfg.at("train_data").get<std::string>());
    Dataset test_data = read_dataset_csv(cfg.at("test_data").get<std::string>());

    TrainConfig tc;
    tc.epochs = cfg.value("epochs", std::size_t{200});
    tc.batch_size = cfg.value("batch_size", std::size_t{32});
    tc.weight_decay = cfg.value("weight_decay", 0.0);
    tc.loss = parse_loss(cfg.value("loss", std::string("logistic")));
    tc.gamma = cfg.value("gamma", 1.0);
    tc.margin_percentile_q = cfg.value("percentile", 5.0);
    tc.eval_steps = cfg.value("eval_steps", 40);
    if (cfg.contains("lr_schedule")) {
        tc.lr_schedule.clear();
        for (const Json& pt : cfg["lr_schedule"])
            tc.lr_schedule.push_back({pt.at(0).get<std::size_t>(), pt.at(1).get<double>()});
    }
    tc.attack = cfg.contains("attack") ? attack_spec_from_json(cfg["attack"]) : AttackSpec{};

    std::vector<std::size_t> dims = cfg.at("dims").get<std::vector<std::size_t>>();
    require(dims.front() == train_data.dim(), "experiment: dims[0] must match the data");
    ActivationSpec act = cfg.contains("activation") ? activation_from_json(cfg["activation"])
                                                    : ActivationSpec::relu();

    std::vector<std::uint64_t> seeds =
        cfg.contains("seeds") ? cfg["seeds"].get<std::vector<std::uint64_t>>()
                              : std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    if (flags.seed_override) seeds = {*flags.seed_override};

    std::string dir = flags.out_override.value_or(cfg.value("out_dir", std::string("results")));
    std::filesystem::create_directories(dir);
    auto path_in_dir = [&](const std::string& name) {
        return (std::filesystem::path(dir) / name).string();
    };

    AttackSpec eval = tc.eval_attack();
    Json per_seed = Json::array();
    std::vector<double> w_std, w_adv, gap_std_std, gap_adv_std, gap_adv_rob;
    std::vector<std::vector<EpochRow>> std_traces, adv_traces;

    for (std::uint64_t seed : seeds) {
        MLP net0 = init_mlp(dims, act, seed);
        TrainConfig tstd = tc;
        tstd.seed = seed;
        tstd.adversarial = false;
        TrainConfig tadv = tc;
        tadv.seed = seed;
        tadv.adversarial = true;

        TrainResult rstd = train_traced(net0, train_data, &test_data, tstd);
        TrainResult radv = train_traced(net0, train_data, &test_data, tadv);
        std_traces.push_back(rstd.trace);
        adv_traces.push_back(radv.trace);

        GapTable gaps = gap_table(rstd.net, radv.net, train_data, test_data, eval);
        gap_std_std.push_back(gaps.e_std_std);
        gap_adv_std.push_back(gaps.e_adv_std);
        gap_adv_rob.push_back(gaps.e_adv_rob);

        MarginStats ms_std{tc.margin_percentile_q, false};
        MarginStats ms_adv{tc.margin_percentile_q, true};
        double margin_std = margin_percentile(rstd.net, train_data, ms_std, eval);
        double margin_adv = margin_percentile(radv.net, train_data, ms_adv, eval);
        double fro_std = 1.0, fro_adv = 1.0;
        for (const Matrix& w : rstd.net.weights) fro_std *= matrix_norm(w, NormKind::Frobenius);
        for (const Matrix& w : radv.net.weights) fro_adv *= matrix_norm(w, NormKind::Frobenius);
        w_std.push_back(fro_std / std::max(margin_std, 1e-12));
        w_adv.push_back(fro_adv / std::max(margin_adv, 1e-12));

        Json row;
        row["seed"] = seed;
        row["gaps"] = gap_table_to_json(gaps);
        row["fro_product_std"] = fro_std;
        row["fro_product_adv"] = fro_adv;
        row["margin_p_std"] = margin_std;
        row["margin_p_adv"] = margin_adv;
        row["w_std"] = w_std.back();
        row["w_adv"] = w_adv.back();
        per_seed.push_back(row);

        if (flags.trace) {
            write_trace_csv(rstd.trace, path_in_dir("std_trace_" + std::to_string(seed) + ".csv"));
            write_trace_csv(radv.trace, path_in_dir("adv_trace_" + std::to_string(seed) + ".csv"));
        }
        write_mlp_json(rstd.net, path_in_dir("model_std_" + std::to_string(seed) + ".json"),
                       "train seed " + std::to_string(seed));
        write_mlp_json(radv.net, path_in_dir("model_adv_" + std::to_string(seed) + ".json"),
                       "train seed " + std::to_string(seed));
    }

    // weight-decay ablation: adversarial runs on the first seed per value
    Json ablation = Json::array();
    if (cfg.contains("weight_decays")) {
        for (double wd : cfg["weight_decays"].get<std::vector<double>>()) {
            TrainConfig t = tc;
            t.seed = seeds.front();
            t.adversarial = true;
            t.weight_decay = wd;
            MLP net = train(init_mlp(dims, act, seeds.front()), train_data, t);
            double fro = 1.0;
            for (const Matrix& w : net.weights) fro *= matrix_norm(w, NormKind::Frobenius);
            ablation.push_back(Json{{"weight_decay", wd}, {"fro_product", fro}});
        }
    }

    // gnuplot columns: epoch then per-series medians across seeds
    {
        std::ofstream plot(path_in_dir("plot.dat"));
        plot << "# epoch std_fro_med adv_fro_med std_margin_med adv_margin_med "
                "std_gap_med adv_gap_med adv_robust_gap_med\n";
        for (std::size_t e = 0; e < tc.epochs; ++e) {
            auto col = [&](const std::vector<std::vector<EpochRow>>& traces, auto getter) {
                std::vector<double> v;
                for (const auto& t : traces) v.push_back(getter(t[e]));
                return median(v);
            };
            plot << e << " "
                 << col(std_traces, [](const EpochRow& r) { return r.fro_product; }) << " "
                 << col(adv_traces, [](const EpochRow& r) { return r.fro_product; }) << " "
                 << col(std_traces, [](const EpochRow& r) { return r.margin_p5; }) << " "
                 << col(adv_traces, [](const EpochRow& r) { return r.margin_p5; }) << " "
                 << col(std_traces,
                        [](const EpochRow& r) { return r.test_err - r.train_err; })
                 << " "
                 << col(adv_traces,
                        [](const EpochRow& r) { return r.test_err - r.train_err; })
                 << " "
                 << col(adv_traces,
                        [](const EpochRow& r) { return r.robust_test_err - r.robust_train_err; })
                 << "\n";
        }
    }

    Json doc;
    doc["per_seed"] = per_seed;
    doc["median_w_std"] = median(w_std);
    doc["median_w_adv"] = median(w_adv);
    doc["median_gap_std_std"] = median(gap_std_std);
    doc["median_gap_adv_std"] = median(gap_adv_std);
    doc["median_gap_adv_rob"] = median(gap_adv_rob);
    if (!ablation.empty()) doc["weight_decay_ablation"] = ablation;
    doc["config"] = cfg;
    doc["runtime"] = runtime_metadata(start);
    write_json_file(doc, path_in_dir("experiment.json"));
    std::cout << "median gaps: std " << doc["median_gap_std_std"] << ", adv-clean "
              << doc["median_gap_adv_std"] << ", adv-robust " << doc["median_gap_adv_rob"]
              << "\nwrote " << path_in_dir("experiment.json") << "\n";
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"adversarial Rademacher complexity bounds, estimators and experiments"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", flags.config_path, "JSON config file");
        if (needs_config) opt->required();
        sub->add_option("--seed", "override the config seed")
            ->each([&](std::string s) { flags.seed_override = std::stoull(s); });
        sub->add_option("--out", "override the output directory")
            ->each([&](std::string s) { flags.out_override = s; });
        sub->add_flag("--trace", flags.trace, "emit per-draw / per-epoch traces");
        sub->add_option("--threads", flags.threads, "worker threads for independent draws");
    };

    int (*handler)(const CommonFlags&) = nullptr;
    auto bind = [&](CLI::App* sub, int (*fn)(const CommonFlags&)) {
        sub->callback([&handler, fn]() { handler = fn; });
    };

    bind(app.add_subcommand("gen-data", "generate a dataset CSV"), cmd_gen_data);
    bind(app.add_subcommand("bounds", "closed-form bound report"), cmd_bounds);
    bind(app.add_subcommand("estimate", "Monte-Carlo RC/ARC estimate"), cmd_estimate);
    bind(app.add_subcommand("audit", "estimate vs bound dominance check"), cmd_audit);
    bind(app.add_subcommand("experiment", "standard-vs-adversarial training study"),
         cmd_experiment);
    bind(app.add_subcommand("covering", "diameter, cover counts and Dudley integral"),
         cmd_covering);
    for (CLI::App* sub : app.get_subcommands({})) add_common(sub, true);

    auto* version = app.add_subcommand("version", "print the version");
    version->callback([&handler]() { handler = nullptr; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (handler == nullptr) {
        std::cout << "arc-audit " << kVersion << "\n";
        return 0;
    }
    try {
        return handler(flags);
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace arc::cli
