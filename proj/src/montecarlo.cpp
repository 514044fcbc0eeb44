#include "postcolor/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "postcolor/applications.hpp"
#include "postcolor/autocov.hpp"
#include "postcolor/bandwidth.hpp"
#include "postcolor/estimators.hpp"
#include "postcolor/model.hpp"
#include "postcolor/multivariate.hpp"

namespace postcolor {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("POSTCOLOR_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        const int lo = static_cast<int>(static_cast<long>(count) * t / threads);
        const int hi = static_cast<int>(static_cast<long>(count) * (t + 1) / threads);
        pool.emplace_back([lo, hi, t, &fn, &errors]() {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::string to_string(BandwidthPolicy p) {
    switch (p) {
        case BandwidthPolicy::true_optimal: return "true-optimal";
        case BandwidthPolicy::plugin_parametric: return "plugin-parametric";
        case BandwidthPolicy::plugin_nonparametric: return "plugin-nonparametric";
    }
    return "?";
}

BandwidthPolicy bandwidth_policy_from_string(const std::string& s) {
    if (s == "true-optimal" || s == "true_optimal") return BandwidthPolicy::true_optimal;
    if (s == "plugin-parametric" || s == "parametric") return BandwidthPolicy::plugin_parametric;
    if (s == "plugin-nonparametric" || s == "nonparametric") {
        return BandwidthPolicy::plugin_nonparametric;
    }
    throw std::invalid_argument("unknown bandwidth policy: " + s);
}

namespace {

struct TruthQuantities {
    double v = 0.0;
    double phi_star = 0.0;
    double phi_star_z = 0.0;
    double xi1 = 0.0;
};

ColoringModel truth_model(const Generator& g) {
    const double s2 = g.innov_sd * g.innov_sd;
    switch (g.kind) {
        case Generator::Kind::ARMA11:
            return ColoringModel::arma11(g.params[0], g.params[1], s2);
        case Generator::Kind::AR2:
            return ColoringModel::arp({g.params[0], g.params[1]}, s2);
        case Generator::Kind::MA2:
            return ColoringModel::maq({g.params[0], g.params[1]}, s2);
        case Generator::Kind::MeanShift:
            return truth_model(*g.inner);
        default:
            throw std::invalid_argument(
                "true-optimal bandwidth policy requires a linear generator");
    }
}

TruthQuantities compute_truth(const Generator& g) {
    ColoringModel m = truth_model(g);
    TruthQuantities t;
    t.v = m.lrv();
    const double g0 = m.autocov(0);
    const double g1 = m.autocov(1);
    const double g2 = m.autocov(2);
    t.phi_star = g1 / g0;
    t.xi1 = m.kappa(1) - 2.0 * t.phi_star / (1.0 - t.phi_star * t.phi_star);
    // Prewhitened-series lag-one ratio from
    // gamma^Z_k = (1+phi*^2) gamma_k - phi* (gamma_{k+1} + gamma_{k-1}).
    const double ps = t.phi_star;
    const double z0 = (1.0 + ps * ps) * g0 - 2.0 * ps * g1;
    const double z1 = (1.0 + ps * ps) * g1 - ps * (g0 + g2);
    t.phi_star_z = (z0 != 0.0) ? z1 / z0 : 0.0;
    return t;
}

struct TableBandwidths {
    int un = 1;
    int pw = 1;
    int tail = 1;
};

TableBandwidths replication_bandwidths(const Series& s, BandwidthPolicy policy,
                                       const TruthQuantities* truth) {
    const int n = s.size();
    const KernelSpec bart = bartlett_kernel();
    TableBandwidths bw;
    switch (policy) {
        case BandwidthPolicy::true_optimal: {
            bw.un = ell_andrews_ar1(truth->phi_star, n);
            bw.pw = ell_andrews_ar1(truth->phi_star_z, n);
            bw.tail = ell_tail(truth->xi1, bart, n);
            break;
        }
        case BandwidthPolicy::plugin_parametric: {
            AutocovTable acf = sample_autocov(s, 1);
            const double phi = std::clamp(acf[1] / acf[0], -(1.0 - 1e-6), 1.0 - 1e-6);
            bw.un = ell_andrews_ar1(phi, n);
            bw.tail = ell_tail(xi1_parametric(s), bart, n);
            // pw bandwidth from the lag-one ratio of the prewhitened series.
            const double phi_c = std::clamp(phi, -0.97, 0.97);
            std::vector<double> z(static_cast<std::size_t>(n - 1));
            for (int i = 1; i < n; ++i) {
                z[static_cast<std::size_t>(i - 1)] = s[i] - phi_c * s[i - 1];
            }
            Series zs(std::move(z));
            AutocovTable zacf = sample_autocov(zs, 1);
            const double phi_z = (zacf[0] > 0.0) ? zacf[1] / zacf[0] : 0.0;
            bw.pw = ell_andrews_ar1(phi_z, n);
            break;
        }
        case BandwidthPolicy::plugin_nonparametric: {
            const double kappa = nonparametric_kappa1(s, bart);
            bw.un = ell_tail(kappa, bart, n);
            bw.tail = ell_tail(xi1_nonparametric(s), bart, n);
            AutocovTable acf = sample_autocov(s, 1);
            const double phi = std::clamp(acf[1] / acf[0], -(1.0 - 1e-6), 1.0 - 1e-6);
            const double phi_c = std::clamp(phi, -0.97, 0.97);
            std::vector<double> z(static_cast<std::size_t>(n - 1));
            for (int i = 1; i < n; ++i) {
                z[static_cast<std::size_t>(i - 1)] = s[i] - phi_c * s[i - 1];
            }
            Series zs(std::move(z));
            AutocovTable zacf = sample_autocov(zs, 1);
            const double phi_z = (zacf[0] > 0.0) ? zacf[1] / zacf[0] : 0.0;
            bw.pw = ell_andrews_ar1(phi_z, n);
            break;
        }
    }
    // The prewhitened estimator works on a series of length n-1.
    bw.pw = std::min(bw.pw, n - 2);
    return bw;
}

double table_estimate(const std::string& name, const Series& s, const TableBandwidths& bw) {
    const KernelSpec bart = bartlett_kernel();
    if (name == "para") return lrv_parametric_ar1(s).value;
    if (name == "un") return lrv_unadjusted(s, bart, bw.un).value;
    if (name == "lug") return lrv_unadjusted(s, lugsail_kernel(), bw.un).value;
    if (name == "pw") return lrv_prewhitened_ar1(s, bart, bw.pw, 0.97).value;
    if (name == "tail") {
        return lrv_tail_postcolored(s, bart, bw.tail, fit_ar1(s)).value;
    }
    throw std::invalid_argument("unknown table estimator: " + name);
}

void generator_param_labels(const Generator& g, double* a, double* b) {
    const Generator& base = (g.kind == Generator::Kind::MeanShift) ? *g.inner : g;
    *a = base.params.empty() ? 0.0 : base.params[0];
    *b = base.params.size() > 1 ? base.params[1] : 0.0;
}

}  // namespace

McResult run_table_experiment(const McRunConfig& cfg) {
    if (cfg.replications < 1) throw std::invalid_argument("replications >= 1 required");
    const int reps = cfg.replications;
    const int threads = resolve_threads(cfg.threads);
    TruthQuantities truth;
    const bool need_truth = (cfg.policy == BandwidthPolicy::true_optimal);
    if (need_truth) {
        truth = compute_truth(cfg.generator);
    }
    const double v = true_lrv(cfg.generator);

    const std::size_t m = cfg.estimators.size();
    std::vector<std::vector<double>> values(m, std::vector<double>(static_cast<std::size_t>(reps)));
    parallel_for(reps, threads, [&](int rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep), 0x7461626cULL);
        Series s = generate(cfg.generator, cfg.n, rng);
        TableBandwidths bw =
            replication_bandwidths(s, cfg.policy, need_truth ? &truth : nullptr);
        for (std::size_t j = 0; j < m; ++j) {
            values[j][static_cast<std::size_t>(rep)] = table_estimate(cfg.estimators[j], s, bw);
        }
    });

    McResult out;
    out.true_v = v;
    double a = 0.0, b = 0.0;
    generator_param_labels(cfg.generator, &a, &b);
    for (std::size_t j = 0; j < m; ++j) {
        double sum = 0.0, sq = 0.0;
        for (double x : values[j]) {
            sum += x;
            sq += (x - v) * (x - v);
        }
        const double r = static_cast<double>(reps);
        const double mse = sq / r;
        double sd_sq = 0.0;
        for (double x : values[j]) {
            const double e2 = (x - v) * (x - v);
            sd_sq += (e2 - mse) * (e2 - mse);
        }
        McRow row;
        row.estimator = cfg.estimators[j];
        row.a = a;
        row.b = b;
        row.n = cfg.n;
        row.mse100 = 100.0 * mse / (v * v);
        row.bias10 = 10.0 * (sum / r / v - 1.0);
        row.mc_se = 100.0 * std::sqrt(sd_sq / (r - 1.0) / r) / (v * v);
        out.rows.push_back(std::move(row));
    }
    return out;
}

namespace {

struct MeanTestStats {
    double para = 0.0, un = 0.0, lug = 0.0, pw = 0.0, tail = 0.0, sn = 0.0;
};

constexpr const char* kMeanTestMethods[] = {"para", "un", "lug", "pw", "tail", "sn"};

MeanTestStats compute_mean_stats(const Series& s) {
    const int n = s.size();
    const double nn = static_cast<double>(n);
    const double xbar = s.mean();
    const double numer = nn * xbar * xbar;
    const KernelSpec bart = bartlett_kernel();

    MeanTestStats t;
    t.para = numer / lrv_parametric_ar1(s).value;

    AutocovTable acf = sample_autocov(s, 1);
    const double phi = std::clamp(acf[1] / acf[0], -(1.0 - 1e-6), 1.0 - 1e-6);
    const int ell_un = ell_andrews_ar1(phi, n);
    t.un = numer / lrv_unadjusted(s, bart, ell_un).value;
    t.lug = numer / lrv_unadjusted(s, lugsail_kernel(), ell_un).value;

    const double phi_c = std::clamp(phi, -0.97, 0.97);
    std::vector<double> z(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) z[static_cast<std::size_t>(i - 1)] = s[i] - phi_c * s[i - 1];
    Series zs(std::move(z));
    AutocovTable zacf = sample_autocov(zs, 1);
    const double phi_z = (zacf[0] > 0.0) ? zacf[1] / zacf[0] : 0.0;
    const int ell_pw = std::min(ell_andrews_ar1(phi_z, n), n - 2);
    t.pw = numer / lrv_prewhitened_ar1(s, bart, ell_pw, 0.97).value;

    const int ell_tl = ell_tail(xi1_parametric(s), bart, n);
    t.tail = numer / lrv_tail_postcolored(s, bart, ell_tl, fit_ar1(s)).value;

    double cum = 0.0, wsum = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += s[i] - xbar;
        wsum += cum * cum;
    }
    t.sn = numer / (wsum / (nn * nn));
    return t;
}

double stat_by_index(const MeanTestStats& t, std::size_t j) {
    switch (j) {
        case 0: return t.para;
        case 1: return t.un;
        case 2: return t.lug;
        case 3: return t.pw;
        case 4: return t.tail;
        default: return t.sn;
    }
}

}  // namespace

std::vector<MeanTestRow> run_mean_test_experiment(const MeanTestConfig& cfg) {
    const int threads = resolve_threads(cfg.threads);
    constexpr std::size_t kNumStats = 6;

    // Finite-sample critical values from i.i.d. N(0,1) calibration draws.
    const int calib = cfg.calibration_replications;
    std::vector<std::vector<double>> calib_stats(kNumStats,
                                                 std::vector<double>(static_cast<std::size_t>(calib)));
    parallel_for(calib, threads, [&](int rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep), 0x63616c69ULL);
        std::vector<double> x(static_cast<std::size_t>(cfg.n));
        for (auto& xi : x) xi = rng.normal();
        MeanTestStats t = compute_mean_stats(Series(std::move(x)));
        for (std::size_t j = 0; j < kNumStats; ++j) {
            calib_stats[j][static_cast<std::size_t>(rep)] = stat_by_index(t, j);
        }
    });
    std::vector<double> critical(kNumStats);
    for (std::size_t j = 0; j < kNumStats; ++j) {
        std::sort(calib_stats[j].begin(), calib_stats[j].end());
        const auto k = static_cast<std::size_t>(
            std::ceil((1.0 - cfg.alpha) * static_cast<double>(calib)));
        critical[j] = calib_stats[j][std::min(k, static_cast<std::size_t>(calib)) - 1];
    }

    std::vector<MeanTestRow> rows;
    std::uint64_t purpose = 1;
    for (double mu : cfg.mus) {
        for (double phi : cfg.phis) {
            ++purpose;
            const int reps = cfg.replications;
            std::vector<std::array<bool, kNumStats>> reject(static_cast<std::size_t>(reps));
            Generator inner = Generator::arma11(phi, 0.0, 0, 1.0 - phi);
            Generator g = (mu == 0.0) ? inner : Generator::mean_shift(mu, inner);
            parallel_for(reps, threads, [&](int rep) {
                Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep),
                                          0x6d65616eULL + purpose);
                Series s = generate(g, cfg.n, rng);
                MeanTestStats t = compute_mean_stats(s);
                for (std::size_t j = 0; j < kNumStats; ++j) {
                    reject[static_cast<std::size_t>(rep)][j] = stat_by_index(t, j) > critical[j];
                }
            });
            for (std::size_t j = 0; j < kNumStats; ++j) {
                int count = 0;
                for (const auto& r : reject) count += r[j] ? 1 : 0;
                MeanTestRow row;
                row.method = kMeanTestMethods[j];
                row.phi = phi;
                row.mu = mu;
                row.reject_rate = static_cast<double>(count) / static_cast<double>(reps);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::vector<HacRow> run_hac_experiment(const HacConfig& cfg) {
    const int threads = resolve_threads(cfg.threads);
    const int n = cfg.n;
    const int reps = cfg.replications;

    Eigen::MatrixXd Phi(2, 2), Ups(2, 2), Sig(2, 2);
    Phi << 0.7, 0.0, 0.0, 0.7;
    Ups << 0.3, 0.1, 0.1, 0.3;
    Sig << 1.0, 0.5, 0.5, 1.0;
    Generator covariates = Generator::varma11(Phi, Ups, Sig);
    Generator noise = Generator::arma11(cfg.a, cfg.b);
    const double c = std::sqrt(1.0 + (cfg.a + cfg.b) * (cfg.a + cfg.b) /
                                          (1.0 - cfg.a * cfg.a));

    const std::array<CovMethod, 4> methods = {CovMethod::unadjusted, CovMethod::prewhitened,
                                              CovMethod::lugsail, CovMethod::tail};
    std::vector<std::array<bool, 4>> reject(static_cast<std::size_t>(reps));
    parallel_for(reps, threads, [&](int rep) {
        Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep), 0x68616321ULL);
        MultiSeries xprime = generate_multi(covariates, n, rng);
        Series eps_arma = generate(noise, n, rng);
        RegressionProblem problem;
        problem.X.resize(n, 3);
        problem.y.resize(n);
        for (int i = 0; i < n; ++i) {
            problem.X(i, 0) = 1.0;
            problem.X(i, 1) = xprime.values()(i, 0);
            problem.X(i, 2) = xprime.values()(i, 1);
            const double scale = 5.0 * std::pow(static_cast<double>(i + 1) / n, 2.0);
            const double err = scale * eps_arma[i] / c;
            problem.y(i) = cfg.delta * problem.X(i, 1) + err;
        }
        for (std::size_t j = 0; j < methods.size(); ++j) {
            reject[static_cast<std::size_t>(rep)][j] =
                hac_wald_test(problem, methods[j], cfg.alpha).reject;
        }
    });

    std::vector<HacRow> rows;
    for (std::size_t j = 0; j < methods.size(); ++j) {
        int count = 0;
        for (const auto& r : reject) count += r[j] ? 1 : 0;
        HacRow row;
        row.method = to_string(methods[j]);
        row.a = cfg.a;
        row.b = cfg.b;
        row.delta = cfg.delta;
        row.reject_rate = static_cast<double>(count) / static_cast<double>(reps);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<TwoModelRow> run_two_model_experiment(const TwoModelConfig& cfg) {
    const int threads = resolve_threads(cfg.threads);
    const int n = cfg.n;
    const int reps = cfg.replications;
    const KernelSpec bart = bartlett_kernel();

    // AR(1) component with a = 0.6 and MA(5) component with
    // b = (0.6, 0, 0, 0.3, -0.3); innovation variances give both LRV 1.
    const double ar_a = 0.6;
    const double ar_sd = 1.0 - ar_a;  // v = sd^2/(1-a)^2 = 1
    const std::array<double, 5> ma_b = {0.6, 0.0, 0.0, 0.3, -0.3};
    double ma_sum = 1.0;
    for (double bb : ma_b) ma_sum += bb;
    const double ma_sd = 1.0 / ma_sum;  // v = sd^2 (1 + sum b)^2 = 1

    std::vector<TwoModelRow> rows;
    std::uint64_t purpose = 0;
    for (double cmix : cfg.cs) {
        ++purpose;
        const double w1 = std::sqrt(1.0 - cmix * cmix);
        std::vector<std::array<double, 3>> values(static_cast<std::size_t>(reps));
        parallel_for(reps, threads, [&](int rep) {
            Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep),
                                      0x326d6f64ULL + purpose);
            // AR(1) path.
            std::vector<double> x(static_cast<std::size_t>(n));
            double xr = 0.0;
            for (int i = -1000; i < n; ++i) {
                xr = ar_a * xr + ar_sd * rng.normal();
                if (i >= 0) x[static_cast<std::size_t>(i)] = w1 * xr;
            }
            // MA(5) path added on top.
            std::array<double, 5> elag = {0.0, 0.0, 0.0, 0.0, 0.0};
            for (int i = -1000; i < n; ++i) {
                const double e = ma_sd * rng.normal();
                double v = e;
                for (std::size_t j = 0; j < 5; ++j) v += ma_b[j] * elag[j];
                for (std::size_t j = 4; j > 0; --j) elag[j] = elag[j - 1];
                elag[0] = e;
                if (i >= 0) x[static_cast<std::size_t>(i)] += cmix * v;
            }
            Series s(std::move(x));

            ColoringModel ar_model = fit_ar1(s);
            ColoringModel ma_model = fit_maq(s, 5);
            const double kappa_hat = nonparametric_kappa1(s, bart);
            const double xi_ar = kappa_hat - ar_model.kappa(1);
            const double xi_ma = kappa_hat - ma_model.kappa(1);
            const int ell_ar = ell_tail(xi_ar, bart, n);
            const int ell_ma = ell_tail(xi_ma, bart, n);

            const double v_ar = lrv_tail_postcolored(s, bart, ell_ar, ar_model).value;
            const double v_ma = lrv_tail_postcolored(s, bart, ell_ma, ma_model).value;
            WeightScheme scheme;
            scheme.kind = WeightScheme::Kind::adaptive;
            const double v_multi =
                lrv_multi_model(s, bart, {ar_model, ma_model}, {ell_ar, ell_ma}, scheme).value;
            values[static_cast<std::size_t>(rep)] = {v_ar, v_ma, v_multi};
        });
        const char* names[3] = {"ar1", "ma5", "multi"};
        for (std::size_t j = 0; j < 3; ++j) {
            double se = 0.0, sum = 0.0;
            for (const auto& v : values) {
                se += (v[j] - 1.0) * (v[j] - 1.0);
                sum += v[j];
            }
            TwoModelRow row;
            row.estimator = names[j];
            row.c = cmix;
            row.rmse = std::sqrt(se / static_cast<double>(reps));
            row.bias = sum / static_cast<double>(reps) - 1.0;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<McmcCoverageRow> run_mcmc_coverage_experiment(const McmcCoverageConfig& cfg) {
    const int threads = resolve_threads(cfg.threads);
    const int reps = cfg.replications;

    std::vector<McmcCoverageRow> rows;
    for (const std::string& method_name : cfg.methods) {
        McmcEstimatorConfig est;
        if (method_name == "para") {
            est.parametric = true;
        } else {
            est.method = cov_method_from_string(method_name);
        }
        std::vector<std::array<double, 3>> results(static_cast<std::size_t>(reps));
        parallel_for(reps, threads, [&](int rep) {
            Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(rep), 0x6d636d63ULL);
            double state = 0.0;
            for (int i = 0; i < 1000; ++i) state = cfg.phi * state + rng.normal();  // burn-in
            auto source = [&](double& x) {
                state = cfg.phi * state + rng.normal();
                x = state;
                return true;
            };
            StoppingState stop;
            stop.epsilon = cfg.epsilon;
            stop.alpha = cfg.alpha;
            stop.n_dagger = cfg.n_dagger;
            McmcMonitorResult res = mcmc_monitor(source, est, cfg.check_every, stop);
            const double covered = (std::abs(res.mean) <= res.half_width) ? 1.0 : 0.0;
            results[static_cast<std::size_t>(rep)] = {covered, static_cast<double>(res.n),
                                                      res.mean * res.mean};
        });
        McmcCoverageRow row;
        row.method = method_name;
        for (const auto& r : results) {
            row.coverage += r[0];
            row.avg_iterations += r[1];
            row.mse_mean += r[2];
        }
        row.coverage /= static_cast<double>(reps);
        row.avg_iterations /= static_cast<double>(reps);
        row.mse_mean /= static_cast<double>(reps);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace postcolor
