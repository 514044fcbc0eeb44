#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "postcolor/generators.hpp"

namespace postcolor {

/// Resolve the worker count: explicit request > POSTCOLOR_THREADS > hardware.
int resolve_threads(int requested);

/// Run fn(rep) for rep = 0..count-1 on `threads` workers with a static
/// partition.  Results must be written to replication-indexed slots so the
/// output is independent of the parallelism degree.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

enum class BandwidthPolicy { true_optimal, plugin_parametric, plugin_nonparametric };

std::string to_string(BandwidthPolicy p);
BandwidthPolicy bandwidth_policy_from_string(const std::string& s);

struct McRunConfig {
    Generator generator;
    int n = 400;
    int replications = 5000;
    BandwidthPolicy policy = BandwidthPolicy::true_optimal;
    std::vector<std::string> estimators = {"para", "un", "pw", "tail"};
    std::uint64_t seed = 20240915;
    int threads = 0;
};

struct McRow {
    std::string estimator;
    double a = 0.0, b = 0.0;
    int n = 0;
    double mse100 = 0.0;   // 100 * MSE / v^2
    double bias10 = 0.0;   // 10 * (E/v - 1)
    double mc_se = 0.0;    // Monte Carlo SE of mse100
};

struct McResult {
    std::vector<McRow> rows;
    double true_v = 0.0;
};

/// One cell of the scalar MSE/bias tables: ARMA(1,1)/AR(2)/MA(2)/TAR/GeomAR1
/// data, estimators {para, un, pw, tail} at the configured bandwidth policy.
McResult run_table_experiment(const McRunConfig& cfg);

struct MeanTestConfig {
    std::vector<double> phis = {0.0, 0.7, 0.8, 0.9, 0.95, 0.97, 0.99};
    std::vector<double> mus = {0.0, 0.2};
    int n = 200;
    int replications = 5000;
    int calibration_replications = 20000;
    double alpha = 0.05;
    std::uint64_t seed = 20240915;
    int threads = 0;
};

struct MeanTestRow {
    std::string method;  // para, un, lug, pw, tail, sn
    double phi = 0.0;
    double mu = 0.0;
    double reject_rate = 0.0;
};

/// Mean test T_n = n Xbar^2 / v^ (plus the self-normalized T_sn) with
/// finite-sample critical values calibrated on i.i.d. N(0,1) data.
std::vector<MeanTestRow> run_mean_test_experiment(const MeanTestConfig& cfg);

struct HacConfig {
    double a = 0.2, b = 0.2;  // ARMA(1,1) noise parameters
    double delta = 0.0;       // coefficient under the alternative
    int n = 400;
    int replications = 2000;
    double alpha = 0.05;
    std::uint64_t seed = 20240915;
    int threads = 0;
};

struct HacRow {
    std::string method;  // un, pw, lug, tail
    double a = 0.0, b = 0.0, delta = 0.0;
    double reject_rate = 0.0;
};

/// Regression Wald-test size/power with heteroskedastic ARMA noise and
/// VARMA(1,1) covariates.
std::vector<HacRow> run_hac_experiment(const HacConfig& cfg);

struct TwoModelConfig {
    std::vector<double> cs = {0.0, 0.25, 0.5, 0.75, 1.0};
    int n = 200;
    int replications = 1000;
    std::uint64_t seed = 20240915;
    int threads = 0;
};

struct TwoModelRow {
    std::string estimator;  // ar1, ma5, multi
    double c = 0.0;
    double rmse = 0.0;
    double bias = 0.0;
};

/// AR(1)-vs-MA(5) coloring mixture experiment for the adaptive multi-model
/// estimator (true LRV is 1 for every mixing weight c).
std::vector<TwoModelRow> run_two_model_experiment(const TwoModelConfig& cfg);

struct McmcCoverageConfig {
    double phi = 0.95;  // AR(1) target chain
    double epsilon = 2.0;
    double alpha = 0.05;
    long check_every = 500;
    long n_dagger = 100;
    int replications = 500;
    std::vector<std::string> methods = {"tail", "pw", "un"};
    std::uint64_t seed = 20240915;
    int threads = 0;
};

struct McmcCoverageRow {
    std::string method;
    double coverage = 0.0;
    double avg_iterations = 0.0;
    double mse_mean = 0.0;
};

/// Fixed-width stopping on a synthetic AR(1)-target chain: coverage of the
/// chain mean, average termination time, MSE of the terminal estimate.
std::vector<McmcCoverageRow> run_mcmc_coverage_experiment(const McmcCoverageConfig& cfg);

}  // namespace postcolor
