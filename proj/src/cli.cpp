#include "auxmean/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "auxmean/adversary.hpp"
#include "auxmean/estimator.hpp"
#include "auxmean/experiments.hpp"
#include "auxmean/moments_io.hpp"
#include "auxmean/verify.hpp"

namespace auxmean {

namespace {

struct CommonOptions {
    long n = 1;
    long N = 1;
    int d = 1;
    double eps = 1.0;
    double delta_sq = 1.0;
    std::string mode = "frobenius";
    std::string config_path;
    std::string output_path;
};

void add_spec_flags(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--n", opts.n, "target sample count");
    cmd->add_option("--N", opts.N, "auxiliary sample count");
    cmd->add_option("--d", opts.d, "dimension");
    cmd->add_option("--eps", opts.eps, "Wasserstein-2 radius");
    cmd->add_option("--delta-sq", opts.delta_sq, "lower bound on the covariance norm (delta^2)");
    cmd->add_option("--mode", opts.mode, "frobenius|trace|operator");
    cmd->add_option("--config", opts.config_path, "JSON config file; explicit flags override it");
    cmd->add_option("--output", opts.output_path, "write output to this file instead of stdout");
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot read file: " + path);
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

std::optional<nlohmann::json> maybe_config(const CommonOptions& opts) {
    if (opts.config_path.empty()) return std::nullopt;
    return load_json_file(opts.config_path);
}

ProblemSpec build_spec(const CLI::App* cmd, const CommonOptions& opts,
                       const std::optional<nlohmann::json>& config) {
    ProblemSpec spec;
    if (config) {
        const nlohmann::json& j = *config;
        if (j.contains("n")) spec.n = j["n"].get<long>();
        if (j.contains("N")) spec.N = j["N"].get<long>();
        if (j.contains("d")) spec.d = j["d"].get<int>();
        if (j.contains("eps")) spec.eps = j["eps"].get<double>();
        if (j.contains("delta_sq")) spec.delta_sq = j["delta_sq"].get<double>();
        if (j.contains("mode")) spec.mode = parse_norm_mode(j["mode"].get<std::string>());
    }
    if (cmd->count("--n")) spec.n = opts.n;
    if (cmd->count("--N")) spec.N = opts.N;
    if (cmd->count("--d")) spec.d = opts.d;
    if (cmd->count("--eps")) spec.eps = opts.eps;
    if (cmd->count("--delta-sq")) spec.delta_sq = opts.delta_sq;
    if (cmd->count("--mode")) spec.mode = parse_norm_mode(opts.mode);
    spec.validate();
    return spec;
}

void emit(const std::string& payload, const CommonOptions& opts, std::ostream& out) {
    if (opts.output_path.empty()) {
        out << payload;
        return;
    }
    std::ofstream file(opts.output_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file: " + opts.output_path);
    file << payload;
}

std::string spec_json_fields(const ProblemSpec& spec) {
    std::ostringstream out;
    out << "\"mode\":\"" << to_string(spec.mode) << "\",\"n\":" << spec.n << ",\"N\":" << spec.N
        << ",\"d\":" << spec.d << ",\"eps\":" << format_double17(spec.eps)
        << ",\"delta_sq\":" << format_double17(spec.delta_sq);
    return out.str();
}

std::string results_to_json(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    out << '[';
    bool first = true;
    for (const ExperimentResult& result : results) {
        for (const EstimatorStats& stats : result.stats) {
            if (!first) out << ',';
            first = false;
            out << "{\"epsilon\":" << format_double17(result.epsilon) << ",\"estimator\":\""
                << to_string(stats.estimator)
                << "\",\"empirical_mse\":" << format_double17(stats.empirical_mse)
                << ",\"std_error\":" << format_double17(stats.std_error) << ",\"analytic_mse\":";
            if (stats.analytic_mse) {
                out << format_double17(*stats.analytic_mse);
            } else {
                out << "null";
            }
            out << ",\"trials\":" << stats.trials << ",\"seed\":" << result.base_seed << '}';
        }
    }
    out << "]\n";
    return out.str();
}

ExperimentConfig build_experiment_config(const CLI::App* cmd, const CommonOptions& opts,
                                         const std::optional<nlohmann::json>& config,
                                         long trials_flag, std::uint64_t seed_flag,
                                         const std::vector<double>& sweep_flag) {
    ExperimentConfig experiment;
    experiment.spec = build_spec(cmd, opts, config);
    if (config) {
        const nlohmann::json& j = *config;
        if (j.contains("trials")) experiment.trials = j["trials"].get<long>();
        if (j.contains("base_seed")) experiment.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("sweep")) experiment.sweep = j["sweep"].get<std::vector<double>>();
        if (j.contains("estimators")) {
            experiment.estimators.clear();
            for (const auto& name : j["estimators"]) {
                experiment.estimators.push_back(parse_estimator_kind(name.get<std::string>()));
            }
        }
    }
    if (cmd->count("--trials")) experiment.trials = trials_flag;
    if (cmd->count("--seed")) experiment.base_seed = seed_flag;
    if (!sweep_flag.empty()) experiment.sweep = sweep_flag;
    experiment.validate();
    return experiment;
}

GaussianMoments load_moments_file(const std::string& path) {
    return moments_from_json(load_json_file(path));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Worst-case optimal mean estimation with auxiliary samples"};
    app.require_subcommand(1);

    // weight
    CommonOptions weight_opts;
    CLI::App* weight_cmd = app.add_subcommand("weight", "optimal weight and min-max risk");
    add_spec_flags(weight_cmd, weight_opts);

    // risk
    CommonOptions risk_opts;
    std::string risk_pair_path;
    double risk_s = -1.0;
    CLI::App* risk_cmd =
        app.add_subcommand("risk", "closed-form risk report, or exact MSE at given moments");
    add_spec_flags(risk_cmd, risk_opts);
    risk_cmd->add_option("--pair", risk_pair_path, "moment-pair JSON file (as written by adversary)");
    risk_cmd->add_option("--s", risk_s, "scalar weight (default: the optimal weight)");

    // w2
    CommonOptions w2_opts;
    std::string w2_p_path;
    std::string w2_q_path;
    std::string w2_pair_path;
    CLI::App* w2_cmd = app.add_subcommand("w2", "squared Wasserstein-2 distance between moment files");
    w2_cmd->add_option("--p", w2_p_path, "moments JSON file {mean, cov}");
    w2_cmd->add_option("--q", w2_q_path, "moments JSON file {mean, cov}");
    w2_cmd->add_option("--pair", w2_pair_path, "moment-pair JSON file (as written by adversary)");
    w2_cmd->add_option("--output", w2_opts.output_path, "write output to this file instead of stdout");

    // adversary
    CommonOptions adv_opts;
    std::string adv_construction = "large-n";
    double adv_s = -1.0;
    CLI::App* adv_cmd = app.add_subcommand("adversary", "worst-case moment pair for a spec");
    add_spec_flags(adv_cmd, adv_opts);
    adv_cmd->add_option("--construction", adv_construction, "large-n|kkt")
        ->check(CLI::IsMember({"large-n", "kkt"}));
    adv_cmd->add_option("--s", adv_s, "scalar weight (default: the optimal weight)");

    // simulate
    CommonOptions sim_opts;
    long sim_trials = 1000;
    std::uint64_t sim_seed = 0;
    std::string sim_format = "csv";
    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte Carlo estimator comparison");
    add_spec_flags(sim_cmd, sim_opts);
    sim_cmd->add_option("--trials", sim_trials, "Monte Carlo trials");
    sim_cmd->add_option("--seed", sim_seed, "base seed");
    sim_cmd->add_option("--format", sim_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    // sweep
    CommonOptions sweep_opts;
    long sweep_trials = 1000;
    std::uint64_t sweep_seed = 0;
    std::string sweep_format = "csv";
    std::vector<double> sweep_values;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "coupled experiments over epsilon values");
    add_spec_flags(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--trials", sweep_trials, "Monte Carlo trials per point");
    sweep_cmd->add_option("--seed", sweep_seed, "base seed, shared across points");
    sweep_cmd->add_option("--format", sweep_format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--sweep", sweep_values, "epsilon values")->delimiter(',');

    // verify
    CommonOptions verify_opts;
    std::string verify_suite = "all";
    std::uint64_t verify_seed = 0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "closed-form vs oracle reports");
    verify_cmd->add_option("--suite", verify_suite, "scalar|matrix|adversary|unbounded|all")
        ->check(CLI::IsMember({"scalar", "matrix", "adversary", "unbounded", "all"}));
    verify_cmd->add_option("--seed", verify_seed, "oracle seed");
    verify_cmd->add_option("--output", verify_opts.output_path,
                           "write output to this file instead of stdout");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("auxmean");
    for (const std::string& arg : args) argv.push_back(arg.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(weight_cmd)) {
            const ProblemSpec spec = build_spec(weight_cmd, weight_opts, maybe_config(weight_opts));
            const RiskReport report = minmax_risk(spec);
            std::ostringstream payload;
            payload << "{\"s\":" << format_double17(report.s_star)
                    << ",\"risk\":" << format_double17(report.risk_star) << "}\n";
            emit(payload.str(), weight_opts, out);
        } else if (app.got_subcommand(risk_cmd)) {
            const ProblemSpec spec = build_spec(risk_cmd, risk_opts, maybe_config(risk_opts));
            std::ostringstream payload;
            if (risk_pair_path.empty()) {
                const RiskReport report = minmax_risk(spec);
                payload << "{\"s\":" << format_double17(report.s_star)
                        << ",\"risk\":" << format_double17(report.risk_star) << ','
                        << spec_json_fields(spec) << "}\n";
            } else {
                const auto [p, q] = moment_pair_from_json(load_json_file(risk_pair_path));
                const double s = risk_cmd->count("--s") ? risk_s : optimal_weight(spec);
                const double value = risk_from_moments(ScalarWeight{s}, p, q, spec.n, spec.N);
                payload << "{\"s\":" << format_double17(s)
                        << ",\"risk_from_moments\":" << format_double17(value)
                        << ",\"n\":" << spec.n << ",\"N\":" << spec.N << "}\n";
            }
            emit(payload.str(), risk_opts, out);
        } else if (app.got_subcommand(w2_cmd)) {
            GaussianMoments p;
            GaussianMoments q;
            if (!w2_pair_path.empty()) {
                std::tie(p, q) = moment_pair_from_json(load_json_file(w2_pair_path));
            } else if (!w2_p_path.empty() && !w2_q_path.empty()) {
                p = load_moments_file(w2_p_path);
                q = load_moments_file(w2_q_path);
            } else {
                throw std::invalid_argument("w2: provide --pair FILE or both --p FILE and --q FILE");
            }
            const double value = gelbrich_w2_squared(p, q);
            emit("{\"w2_squared\":" + format_double17(value) + "}\n", w2_opts, out);
        } else if (app.got_subcommand(adv_cmd)) {
            const ProblemSpec spec = build_spec(adv_cmd, adv_opts, maybe_config(adv_opts));
            const double s = adv_cmd->count("--s") ? adv_s : optimal_weight(spec);
            const AdversaryPair pair = adv_construction == "kkt" ? worst_case_kkt(spec, s)
                                                                 : worst_case_large_n(spec, s);
            emit(adversary_to_json(pair, s, adv_construction) + "\n", adv_opts, out);
        } else if (app.got_subcommand(sim_cmd)) {
            const ExperimentConfig config = build_experiment_config(
                sim_cmd, sim_opts, maybe_config(sim_opts), sim_trials, sim_seed, {});
            const std::vector<ExperimentResult> results{run_experiment(config)};
            emit(sim_format == "json" ? results_to_json(results) : to_csv(results), sim_opts, out);
        } else if (app.got_subcommand(sweep_cmd)) {
            ExperimentConfig config =
                build_experiment_config(sweep_cmd, sweep_opts, maybe_config(sweep_opts),
                                        sweep_trials, sweep_seed, sweep_values);
            if (!config.sweep || config.sweep->empty()) {
                throw std::invalid_argument("sweep: provide --sweep values or a config with a sweep list");
            }
            const std::vector<ExperimentResult> results = sweep(config);
            emit(sweep_format == "json" ? results_to_json(results) : to_csv(results), sweep_opts,
                 out);
        } else if (app.got_subcommand(verify_cmd)) {
            const std::vector<OracleReport> reports = run_suite(verify_suite, verify_seed);
            std::ostringstream payload;
            bool all_passed = true;
            for (const OracleReport& report : reports) {
                payload << report_to_json_line(report) << '\n';
                all_passed = all_passed && report.passed;
            }
            emit(payload.str(), verify_opts, out);
            if (!all_passed) {
                err << "verify: " << verify_suite << " suite has failing checks\n";
                return 1;
            }
        }
    } catch (const BudgetExhaustedError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace auxmean
