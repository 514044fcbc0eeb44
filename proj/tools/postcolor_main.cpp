// postcolor: tail-postcoloring long-run variance estimation toolkit.
//
// Subcommands: estimate, spectrum, analyze, simulate, hac-test, mcmc-monitor.
// Tables are emitted as CSV; single estimates as JSON.  POSTCOLOR_THREADS
// sets the default parallelism degree.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "postcolor/applications.hpp"
#include "postcolor/autocov.hpp"
#include "postcolor/bandwidth.hpp"
#include "postcolor/emit.hpp"
#include "postcolor/estimators.hpp"
#include "postcolor/generators.hpp"
#include "postcolor/model.hpp"
#include "postcolor/montecarlo.hpp"
#include "postcolor/multivariate.hpp"
#include "postcolor/spectral.hpp"

using namespace postcolor;
using nlohmann::json;

namespace {

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

Series read_series(const std::string& path, int column) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        const std::string text = ss.str();
        if (text.find(',') != std::string::npos) {
            return parse_multiseries_csv_text(text).component(column);
        }
        std::istringstream in(text);
        std::vector<double> values;
        double v;
        while (in >> v) values.push_back(v);
        return Series(std::move(values));
    }
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        return load_series_csv(path, column);
    }
    return load_series_text(path);
}

ColoringModel resolve_model(const std::string& spec, const Series& s) {
    if (!spec.empty() && spec[0] == '{') return ColoringModel::from_json(spec);
    if (spec == "auto-ar1") return fit_ar1(s);
    if (spec == "auto-arma11") return fit_arma11(s);
    if (spec.rfind("auto-ma:", 0) == 0) return fit_maq(s, std::stoi(spec.substr(8)));
    if (spec.rfind("auto-ar:", 0) == 0) return fit_arp(s, std::stoi(spec.substr(8)));
    throw std::invalid_argument("unknown model spec: " + spec);
}

int resolve_ell(const std::string& ell_spec, const std::string& method,
                const std::string& bw_method, const Series& s) {
    if (ell_spec != "auto") return std::stoi(ell_spec);
    const int n = s.size();
    if (method == "un" || method == "lug") return ell_andrews_ar1(s);
    if (method == "pw") {
        AutocovTable acf = sample_autocov(s, 1);
        const double phi = std::clamp(acf[1] / acf[0], -0.97, 0.97);
        std::vector<double> z(static_cast<std::size_t>(n - 1));
        for (int i = 1; i < n; ++i) z[static_cast<std::size_t>(i - 1)] = s[i] - phi * s[i - 1];
        Series zs(std::move(z));
        AutocovTable zacf = sample_autocov(zs, 1);
        const double phi_z = (zacf[0] > 0.0) ? zacf[1] / zacf[0] : 0.0;
        return std::min(ell_andrews_ar1(phi_z, n), n - 2);
    }
    // tail-family methods
    XiEstimate xi = (bw_method == "parametric") ? xi1_parametric(s) : xi1_nonparametric(s);
    return ell_tail(xi, bartlett_kernel(), n);
}

// "lo:hi:step" or comma-separated values.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double lo, hi, step;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0) {
            throw std::invalid_argument("grid spec must be lo:hi:step");
        }
        for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
        return out;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("empty grid spec");
    return out;
}

json lrv_to_json(const LrvEstimate& est) {
    return json{{"value", est.value}, {"ell", est.ell}, {"eta", est.eta},
                {"method", est.method}};
}

json cov_to_json(const CovEstimate& est) {
    std::vector<double> row_major;
    for (int i = 0; i < est.matrix.rows(); ++i) {
        for (int j = 0; j < est.matrix.cols(); ++j) row_major.push_back(est.matrix(i, j));
    }
    return json{{"matrix", row_major},
                {"d", est.matrix.rows()},
                {"ell", est.ell},
                {"method", est.method},
                {"floored", est.floored}};
}

// Asymptotic improvement grid shared by `analyze improvement` and
// `simulate heatmap`: ARMA(1,1) truth, AR(1) coloring at phi*.
std::string improvement_grid_csv(const std::vector<double>& a_grid,
                                 const std::vector<double>& b_grid) {
    const KernelSpec bart = bartlett_kernel();
    std::vector<std::vector<std::string>> rows;
    for (double a : a_grid) {
        for (double b : b_grid) {
            if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0) continue;
            const double kappa_x = arma11_kappa1(a, b);
            const double xi = arma11_xi1(a, b);
            const double phis = arma11_phi_star(a, b);
            const double v0x = arma11_lrv(a, b);
            const double v1x = kappa_x * v0x;
            const double g0x = arma11_gamma(a, b, 0);
            const double v0z = (1.0 - phis) * (1.0 - phis) * v0x;
            const double v1z = (1.0 - phis) * (1.0 - phis) * v1x - 2.0 * phis * g0x;
            AsymptoticProfile un = asymptotic_profile(kappa_x, 0.0, bart);
            AsymptoticProfile pw = asymptotic_profile(v1z / v0z, 0.0, bart);
            AsymptoticProfile tail = asymptotic_profile(xi, 0.0, bart);
            rows.push_back({format_double(a), format_double(b),
                            format_double(un.mse_n23), format_double(pw.mse_n23),
                            format_double(tail.mse_n23),
                            format_double(pw.mse_n23 - un.mse_n23),
                            format_double(tail.mse_n23 - un.mse_n23),
                            format_double(tail.mse_n23 - pw.mse_n23),
                            format_double(un.bias_n13), format_double(pw.bias_n13),
                            format_double(tail.bias_n13), format_double(un.var_n23),
                            format_double(pw.var_n23), format_double(tail.var_n23)});
        }
    }
    return render_csv({"a", "b", "mse_un", "mse_pw", "mse_tail", "dmse_pw_un",
                       "dmse_tail_un", "dmse_tail_pw", "bias_un", "bias_pw", "bias_tail",
                       "var_un", "var_pw", "var_tail"},
                      rows);
}

// Optional JSON config for `simulate`; explicitly passed flags win.
json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json cfg;
    in >> cfg;
    return cfg;
}

template <typename T>
void config_default(const json& cfg, const char* key, const CLI::Option* opt, T& value) {
    if (opt->count() == 0 && cfg.contains(key)) value = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail-postcoloring long-run variance estimation toolkit"};
    app.require_subcommand(1);

    // ---- estimate -----------------------------------------------------
    auto* est_cmd = app.add_subcommand("estimate", "estimate the LRV of a series");
    std::string est_input, est_method = "tail", est_kernel = "bartlett";
    std::string est_kernel_h, est_ell = "auto", est_bw = "nonparametric", est_out;
    std::vector<std::string> est_models;
    std::string est_weights = "adaptive";
    double est_clamp = 0.97;
    int est_column = 0;
    bool est_multivariate = false;
    est_cmd->add_option("input", est_input, "series file (csv/text, '-' for stdin)")
        ->required();
    est_cmd->add_option("--method", est_method,
                        "un | para | pw | tail | tail-general | multi | tail-fs");
    est_cmd->add_option("--kernel", est_kernel, "bartlett | truncated | lugsail");
    est_cmd->add_option("--kernel-h", est_kernel_h, "second kernel H for tail-general");
    est_cmd->add_option("--ell", est_ell, "bandwidth (integer or 'auto')");
    est_cmd->add_option("--model", est_models,
                        "coloring model: auto-ar1 | auto-arma11 | auto-ma:q | auto-ar:p | "
                        "inline JSON (repeat for multi)");
    est_cmd->add_option("--clamp", est_clamp, "AR parameter bound for pw");
    est_cmd->add_option("--bw", est_bw, "plug-in xi: parametric | nonparametric");
    est_cmd->add_option("--weights", est_weights, "multi-model weights: adaptive | simple");
    est_cmd->add_option("--column", est_column, "column of a CSV input");
    est_cmd->add_flag("--multivariate", est_multivariate, "matrix estimation on CSV input");
    est_cmd->add_option("-o,--out", est_out, "output path (default stdout)");

    // ---- spectrum -------------------------------------------------------
    auto* spec_cmd = app.add_subcommand("spectrum", "spectral density over an omega grid");
    std::string sp_input, sp_method = "tail", sp_kernel = "bartlett", sp_ell = "auto";
    std::string sp_model = "auto-ar1", sp_out, sp_bw = "nonparametric";
    int sp_grid = 129, sp_column = 0;
    spec_cmd->add_option("input", sp_input, "series file")->required();
    spec_cmd->add_option("--method", sp_method, "un | tail");
    spec_cmd->add_option("--kernel", sp_kernel, "bartlett | truncated | lugsail");
    spec_cmd->add_option("--ell", sp_ell, "bandwidth (integer or 'auto')");
    spec_cmd->add_option("--model", sp_model, "coloring model spec");
    spec_cmd->add_option("--omega-grid", sp_grid, "number of grid points on [0, pi]");
    spec_cmd->add_option("--column", sp_column, "column of a CSV input");
    spec_cmd->add_option("--bw", sp_bw, "plug-in xi: parametric | nonparametric");
    spec_cmd->add_option("-o,--out", sp_out, "output path");

    // ---- analyze --------------------------------------------------------
    auto* analyze_cmd = app.add_subcommand("analyze", "asymptotic MSE analysis");
    auto* improve_cmd =
        analyze_cmd->add_subcommand("improvement", "improvement-region heatmap grid");
    std::string imp_model = "ar1", imp_truth = "arma11";
    std::string imp_a = "-0.95:0.95:0.05", imp_b = "-0.95:0.95:0.05", imp_out;
    improve_cmd->add_option("--model", imp_model, "coloring model (ar1)");
    improve_cmd->add_option("--truth", imp_truth, "data-generating truth (arma11)");
    improve_cmd->add_option("--a", imp_a, "grid for a: lo:hi:step or list");
    improve_cmd->add_option("--b", imp_b, "grid for b: lo:hi:step or list");
    improve_cmd->add_option("-o,--out", imp_out, "output path");

    // ---- simulate -------------------------------------------------------
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo experiments");
    sim_cmd->require_subcommand(1);
    std::string sim_config, sim_out, sim_format = "csv";
    int sim_n = 0, sim_reps = 0, sim_threads = 0;
    std::uint64_t sim_seed = 20240915;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", sim_config, "JSON config file (flags win)");
        cmd->add_option("--n", sim_n, "sample size");
        cmd->add_option("--reps", sim_reps, "replications");
        cmd->add_option("--seed", sim_seed, "master seed");
        cmd->add_option("--threads", sim_threads, "worker threads (0 = auto)");
        cmd->add_option("--format", sim_format, "csv | json (tables only)");
        cmd->add_option("-o,--out", sim_out, "output path");
    };
    auto* tab1_cmd = sim_cmd->add_subcommand("table1", "MSE/bias, true optimal bandwidths");
    auto* tab2_cmd = sim_cmd->add_subcommand("table2", "MSE/bias, estimated bandwidths");
    std::string tab_a = "-0.8,-0.4,-0.2,0.2,0.4,0.8", tab_b = "0,-0.6";
    for (auto* cmd : {tab1_cmd, tab2_cmd}) {
        add_common(cmd);
        cmd->add_option("--a", tab_a, "AR parameter grid");
        cmd->add_option("--b", tab_b, "MA parameter grid");
    }
    auto* heat_cmd = sim_cmd->add_subcommand("heatmap", "asymptotic improvement grid");
    std::string heat_a = "-0.95:0.95:0.05", heat_b = "-0.95:0.95:0.05";
    add_common(heat_cmd);
    heat_cmd->add_option("--a", heat_a, "grid for a");
    heat_cmd->add_option("--b", heat_b, "grid for b");
    auto* mt_cmd = sim_cmd->add_subcommand("mean-test", "size/power of the mean tests");
    std::string mt_phi = "0,0.7,0.8,0.9,0.95,0.97,0.99", mt_mu = "0,0.2";
    int mt_calib = 20000;
    double mt_alpha = 0.05;
    add_common(mt_cmd);
    mt_cmd->add_option("--phi", mt_phi, "AR parameter grid");
    mt_cmd->add_option("--mu", mt_mu, "true mean grid");
    mt_cmd->add_option("--calibration-reps", mt_calib, "critical-value replications");
    mt_cmd->add_option("--alpha", mt_alpha, "nominal size");
    auto* hac_cmd = sim_cmd->add_subcommand("hac-power", "regression Wald size/power");
    std::string hac_ab = "0.2,0.4,0.8", hac_delta = "0";
    double hac_alpha = 0.05;
    add_common(hac_cmd);
    hac_cmd->add_option("--ab", hac_ab, "noise parameter grid (a = b)");
    hac_cmd->add_option("--delta", hac_delta, "alternative coefficient grid");
    hac_cmd->add_option("--alpha", hac_alpha, "nominal size");
    auto* mcmc_cmd = sim_cmd->add_subcommand("mcmc", "fixed-width stopping coverage");
    double mcmc_phi = 0.95, mcmc_eps = 2.0, mcmc_alpha = 0.05;
    long mcmc_check = 500, mcmc_min_n = 100;
    std::string mcmc_methods = "tail,pw,un";
    add_common(mcmc_cmd);
    mcmc_cmd->add_option("--phi", mcmc_phi, "AR(1) target chain parameter");
    mcmc_cmd->add_option("--eps", mcmc_eps, "target half-width");
    mcmc_cmd->add_option("--alpha", mcmc_alpha, "nominal size");
    mcmc_cmd->add_option("--check-every", mcmc_check, "evaluation period");
    mcmc_cmd->add_option("--min-n", mcmc_min_n, "minimum sample size n-dagger");
    mcmc_cmd->add_option("--methods", mcmc_methods, "comma list: tail,pw,un,lug,para");

    // ---- hac-test ---------------------------------------------------------
    auto* hact_cmd = app.add_subcommand("hac-test", "HAC Wald test on a regression CSV");
    std::string ht_input, ht_method = "tail", ht_out;
    double ht_alpha = 0.05;
    bool ht_intercept = false;
    hact_cmd->add_option("input", ht_input,
                         "CSV: regressor columns then the response as last column")
        ->required();
    hact_cmd->add_option("--method", ht_method, "un | pw | lug | tail");
    hact_cmd->add_option("--alpha", ht_alpha, "test size");
    hact_cmd->add_flag("--intercept", ht_intercept, "prepend a constant column");
    hact_cmd->add_option("-o,--out", ht_out, "output path");

    // ---- mcmc-monitor -------------------------------------------------------
    auto* mon_cmd = app.add_subcommand("mcmc-monitor", "fixed-width stopping monitor");
    std::string mon_input = "-", mon_method = "tail", mon_out;
    double mon_eps = 0.1, mon_alpha = 0.05, mon_gen_phi = std::nan("");
    long mon_check = 500, mon_min_n = 100, mon_max_n = 1L << 22;
    std::uint64_t mon_seed = 20240915;
    mon_cmd->add_option("--input", mon_input, "chain file or '-' for stdin");
    mon_cmd->add_option("--generate-phi", mon_gen_phi,
                        "generate a synthetic AR(1) chain instead of reading one");
    mon_cmd->add_option("--seed", mon_seed, "seed for the synthetic chain");
    mon_cmd->add_option("--eps", mon_eps, "target half-width");
    mon_cmd->add_option("--alpha", mon_alpha, "nominal size");
    mon_cmd->add_option("--check-every", mon_check, "evaluation period");
    mon_cmd->add_option("--min-n", mon_min_n, "minimum sample size n-dagger");
    mon_cmd->add_option("--max-n", mon_max_n, "hard cap on the chain length");
    mon_cmd->add_option("--method", mon_method, "tail | pw | un | lug | para");
    mon_cmd->add_option("-o,--out", mon_out, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (est_cmd->parsed()) {
            if (est_multivariate) {
                MultiSeries ms = (est_input == "-")
                                     ? [] {
                                           std::ostringstream ss;
                                           ss << std::cin.rdbuf();
                                           return parse_multiseries_csv_text(ss.str());
                                       }()
                                     : load_multiseries_csv(est_input);
                const KernelSpec K = kernel_by_name(est_kernel);
                CovEstimate cov;
                if (est_method == "un" || est_method == "lug") {
                    const int ell = (est_ell == "auto") ? ell_andrews_components(ms)
                                                        : std::stoi(est_ell);
                    cov = cov_unadjusted(
                        ms, est_method == "lug" ? lugsail_kernel() : K, ell);
                } else if (est_method == "pw") {
                    const int ell = (est_ell == "auto")
                                        ? ell_andrews_components_prewhitened(ms)
                                        : std::stoi(est_ell);
                    cov = cov_prewhitened_var1(ms, K, std::min(ell, ms.size() - 2));
                } else if (est_method == "tail") {
                    ColoringModel model = fit_var1(ms);
                    const int ell = (est_ell == "auto")
                                        ? ell_tail_multivariate(ms, model, K)
                                        : std::stoi(est_ell);
                    cov = cov_tail_postcolored(ms, K, ell, model);
                } else {
                    throw std::invalid_argument("multivariate methods: un, pw, lug, tail");
                }
                write_output(cov_to_json(cov).dump(2) + "\n", est_out);
                return 0;
            }
            Series s = read_series(est_input, est_column);
            const KernelSpec K = kernel_by_name(est_kernel);
            LrvEstimate est;
            if (est_method == "para") {
                est = lrv_parametric_ar1(s);
            } else {
                const int ell = resolve_ell(est_ell, est_method, est_bw, s);
                if (est_method == "un") {
                    est = lrv_unadjusted(s, K, ell);
                } else if (est_method == "lug") {
                    est = lrv_unadjusted(s, lugsail_kernel(), ell);
                    est.method = "lug";
                } else if (est_method == "pw") {
                    est = lrv_prewhitened_ar1(s, K, std::min(ell, s.size() - 2), est_clamp);
                } else if (est_method == "tail" || est_method == "tail-fs" ||
                           est_method == "tail-general") {
                    const std::string spec =
                        est_models.empty() ? "auto-ar1" : est_models.front();
                    ColoringModel model = resolve_model(spec, s);
                    if (est_method == "tail") {
                        est = lrv_tail_postcolored(s, K, ell, model);
                    } else if (est_method == "tail-fs") {
                        est = lrv_tail_finite_sample(s, K, ell, model);
                    } else {
                        const KernelSpec H = kernel_by_name(
                            est_kernel_h.empty() ? "truncated" : est_kernel_h);
                        est = lrv_tail_postcolored_general(s, K, H, ell, model);
                    }
                } else if (est_method == "multi") {
                    std::vector<std::string> specs = est_models;
                    if (specs.empty()) specs = {"auto-ar1", "auto-ma:5"};
                    std::vector<ColoringModel> models;
                    std::vector<int> bandwidths;
                    const double kappa_hat = nonparametric_kappa1(s, bartlett_kernel());
                    for (const auto& ms : specs) {
                        ColoringModel model = resolve_model(ms, s);
                        const double xi = kappa_hat - model.kappa(1);
                        bandwidths.push_back(est_ell == "auto"
                                                 ? ell_tail(xi, bartlett_kernel(), s.size())
                                                 : std::stoi(est_ell));
                        models.push_back(std::move(model));
                    }
                    WeightScheme scheme;
                    scheme.kind = (est_weights == "simple")
                                      ? WeightScheme::Kind::simple_average
                                      : WeightScheme::Kind::adaptive;
                    est = lrv_multi_model(s, K, models, bandwidths, scheme);
                    json j = lrv_to_json(est);
                    j["weights"] = scheme.weights;
                    write_output(j.dump(2) + "\n", est_out);
                    return 0;
                } else {
                    throw std::invalid_argument("unknown method: " + est_method);
                }
            }
            write_output(lrv_to_json(est).dump(2) + "\n", est_out);
            return 0;
        }

        if (spec_cmd->parsed()) {
            Series s = read_series(sp_input, sp_column);
            const KernelSpec K = kernel_by_name(sp_kernel);
            const int ell = resolve_ell(sp_ell, sp_method == "un" ? "un" : "tail", sp_bw, s);
            std::optional<ColoringModel> model;
            if (sp_method == "tail") model = resolve_model(sp_model, s);
            std::vector<std::vector<std::string>> rows;
            for (int i = 0; i < sp_grid; ++i) {
                const double omega =
                    std::numbers::pi * static_cast<double>(i) / std::max(1, sp_grid - 1);
                const SpectralEstimate se =
                    model ? spectral_tail_postcolored(s, K, ell, omega, *model)
                          : spectral_unadjusted(s, K, ell, omega);
                rows.push_back({format_double(omega), format_double(se.value)});
            }
            write_output(render_csv({"omega", "value"}, rows), sp_out);
            return 0;
        }

        if (improve_cmd->parsed()) {
            if (imp_model != "ar1" || imp_truth != "arma11") {
                throw std::invalid_argument(
                    "analyze improvement supports --model ar1 --truth arma11");
            }
            write_output(improvement_grid_csv(parse_grid(imp_a), parse_grid(imp_b)), imp_out);
            return 0;
        }

        if (sim_cmd->parsed()) {
            const json cfg = load_config(sim_config);
            if (tab1_cmd->parsed() || tab2_cmd->parsed()) {
                auto* cmd = tab1_cmd->parsed() ? tab1_cmd : tab2_cmd;
                config_default(cfg, "n", cmd->get_option("--n"), sim_n);
                config_default(cfg, "reps", cmd->get_option("--reps"), sim_reps);
                config_default(cfg, "seed", cmd->get_option("--seed"), sim_seed);
                config_default(cfg, "a", cmd->get_option("--a"), tab_a);
                config_default(cfg, "b", cmd->get_option("--b"), tab_b);
                std::vector<McRow> all;
                for (double b : parse_grid(tab_b)) {
                    for (double a : parse_grid(tab_a)) {
                        McRunConfig mc;
                        mc.generator = Generator::arma11(a, b);
                        mc.n = sim_n > 0 ? sim_n : 400;
                        mc.replications = sim_reps > 0 ? sim_reps : 5000;
                        mc.policy = tab1_cmd->parsed() ? BandwidthPolicy::true_optimal
                                                       : BandwidthPolicy::plugin_parametric;
                        mc.seed = sim_seed;
                        mc.threads = sim_threads;
                        McResult res = run_table_experiment(mc);
                        all.insert(all.end(), res.rows.begin(), res.rows.end());
                    }
                }
                write_output(sim_format == "json" ? mc_rows_to_json(all)
                                                  : mc_rows_to_csv(all),
                             sim_out);
                return 0;
            }
            if (heat_cmd->parsed()) {
                write_output(improvement_grid_csv(parse_grid(heat_a), parse_grid(heat_b)),
                             sim_out);
                return 0;
            }
            if (mt_cmd->parsed()) {
                config_default(cfg, "n", mt_cmd->get_option("--n"), sim_n);
                config_default(cfg, "reps", mt_cmd->get_option("--reps"), sim_reps);
                config_default(cfg, "seed", mt_cmd->get_option("--seed"), sim_seed);
                config_default(cfg, "phi", mt_cmd->get_option("--phi"), mt_phi);
                config_default(cfg, "mu", mt_cmd->get_option("--mu"), mt_mu);
                config_default(cfg, "calibration_reps",
                               mt_cmd->get_option("--calibration-reps"), mt_calib);
                config_default(cfg, "alpha", mt_cmd->get_option("--alpha"), mt_alpha);
                MeanTestConfig mt;
                mt.phis = parse_grid(mt_phi);
                mt.mus = parse_grid(mt_mu);
                if (sim_n > 0) mt.n = sim_n;
                if (sim_reps > 0) mt.replications = sim_reps;
                mt.calibration_replications = mt_calib;
                mt.alpha = mt_alpha;
                mt.seed = sim_seed;
                mt.threads = sim_threads;
                write_output(mean_test_rows_to_csv(run_mean_test_experiment(mt)), sim_out);
                return 0;
            }
            if (hac_cmd->parsed()) {
                config_default(cfg, "n", hac_cmd->get_option("--n"), sim_n);
                config_default(cfg, "reps", hac_cmd->get_option("--reps"), sim_reps);
                config_default(cfg, "seed", hac_cmd->get_option("--seed"), sim_seed);
                config_default(cfg, "ab", hac_cmd->get_option("--ab"), hac_ab);
                config_default(cfg, "delta", hac_cmd->get_option("--delta"), hac_delta);
                config_default(cfg, "alpha", hac_cmd->get_option("--alpha"), hac_alpha);
                std::vector<HacRow> all;
                for (double ab : parse_grid(hac_ab)) {
                    for (double delta : parse_grid(hac_delta)) {
                        HacConfig hc;
                        hc.a = hc.b = ab;
                        hc.delta = delta;
                        if (sim_n > 0) hc.n = sim_n;
                        if (sim_reps > 0) hc.replications = sim_reps;
                        hc.alpha = hac_alpha;
                        hc.seed = sim_seed;
                        hc.threads = sim_threads;
                        auto rows = run_hac_experiment(hc);
                        all.insert(all.end(), rows.begin(), rows.end());
                    }
                }
                write_output(hac_rows_to_csv(all), sim_out);
                return 0;
            }
            if (mcmc_cmd->parsed()) {
                config_default(cfg, "reps", mcmc_cmd->get_option("--reps"), sim_reps);
                config_default(cfg, "seed", mcmc_cmd->get_option("--seed"), sim_seed);
                config_default(cfg, "phi", mcmc_cmd->get_option("--phi"), mcmc_phi);
                config_default(cfg, "eps", mcmc_cmd->get_option("--eps"), mcmc_eps);
                config_default(cfg, "alpha", mcmc_cmd->get_option("--alpha"), mcmc_alpha);
                config_default(cfg, "check_every", mcmc_cmd->get_option("--check-every"),
                               mcmc_check);
                config_default(cfg, "min_n", mcmc_cmd->get_option("--min-n"), mcmc_min_n);
                config_default(cfg, "methods", mcmc_cmd->get_option("--methods"),
                               mcmc_methods);
                McmcCoverageConfig mc;
                mc.phi = mcmc_phi;
                mc.epsilon = mcmc_eps;
                mc.alpha = mcmc_alpha;
                mc.check_every = mcmc_check;
                mc.n_dagger = mcmc_min_n;
                if (sim_reps > 0) mc.replications = sim_reps;
                mc.methods.clear();
                std::istringstream in(mcmc_methods);
                std::string tok;
                while (std::getline(in, tok, ',')) mc.methods.push_back(tok);
                mc.seed = sim_seed;
                mc.threads = sim_threads;
                write_output(mcmc_rows_to_csv(run_mcmc_coverage_experiment(mc)), sim_out);
                return 0;
            }
        }

        if (hact_cmd->parsed()) {
            MultiSeries table = load_multiseries_csv(ht_input);
            const int n = table.size();
            const int cols = table.dim();
            if (cols < 2) throw std::invalid_argument("hac-test needs >= 2 CSV columns");
            const int d = cols - 1 + (ht_intercept ? 1 : 0);
            RegressionProblem p;
            p.X.resize(n, d);
            p.y.resize(n);
            for (int i = 0; i < n; ++i) {
                int j0 = 0;
                if (ht_intercept) p.X(i, j0++) = 1.0;
                for (int j = 0; j < cols - 1; ++j) p.X(i, j0 + j) = table.values()(i, j);
                p.y(i) = table.values()(i, cols - 1);
            }
            WaldResult r = hac_wald_test(p, cov_method_from_string(ht_method), ht_alpha);
            json j{{"statistic", r.statistic},
                   {"critical_value", r.critical_value},
                   {"p_value", r.p_value},
                   {"reject", r.reject},
                   {"cov_method", r.cov_method},
                   {"ell", r.ell}};
            write_output(j.dump(2) + "\n", ht_out);
            return 0;
        }

        if (mon_cmd->parsed()) {
            McmcEstimatorConfig cfg;
            if (mon_method == "para") {
                cfg.parametric = true;
            } else {
                cfg.method = cov_method_from_string(mon_method);
            }
            StoppingState st;
            st.epsilon = mon_eps;
            st.alpha = mon_alpha;
            st.n_dagger = mon_min_n;
            McmcMonitorResult res;
            if (!std::isnan(mon_gen_phi)) {
                Rng rng(mon_seed);
                double state = 0.0;
                for (int i = 0; i < 1000; ++i) state = mon_gen_phi * state + rng.normal();
                auto source = [&](double& x) {
                    state = mon_gen_phi * state + rng.normal();
                    x = state;
                    return true;
                };
                res = mcmc_monitor(source, cfg, mon_check, st, mon_max_n);
            } else {
                std::ifstream file;
                std::istream* in = &std::cin;
                if (mon_input != "-") {
                    file.open(mon_input);
                    if (!file) throw std::runtime_error("cannot open chain: " + mon_input);
                    in = &file;
                }
                auto source = [in](double& x) { return static_cast<bool>(*in >> x); };
                res = mcmc_monitor(source, cfg, mon_check, st, mon_max_n);
            }
            json j{{"n", res.n},
                   {"mean", res.mean},
                   {"half_width", res.half_width},
                   {"stopped", res.stopped},
                   {"method", mon_method}};
            write_output(j.dump(2) + "\n", mon_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
