#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "postcolor/series.hpp"

namespace postcolor {

struct RegressionProblem {
    Eigen::MatrixXd X;  // n x d design
    Eigen::VectorXd y;  // n responses
};

struct OlsFit {
    Eigen::VectorXd beta;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd S_n;  // X^T X / n
};

OlsFit ols_fit(const RegressionProblem& p);

/// Long-run covariance estimator choices for the HAC test and monitors.
enum class CovMethod { unadjusted, prewhitened, lugsail, tail };

std::string to_string(CovMethod m);
CovMethod cov_method_from_string(const std::string& s);

struct WaldResult {
    double statistic = 0.0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::string cov_method;
    int ell = 1;
};

/// Wald test of H0: beta = 0 with sandwich covariance S^{-1} V^ S^{-1},
/// V^ a long-run covariance estimate of the score series
/// W_i = (Y_i - X_i^T beta^) X_i; rejection rule
/// n beta^T Sigma^{-1} beta > d(n-1) F_{1-a,d,n-d} / (n-d).
WaldResult hac_wald_test(const RegressionProblem& p, CovMethod method, double alpha);

struct StoppingState {
    long n = 0;
    double v_hat = 0.0;     // current LRV estimate of the chain
    double epsilon = 0.0;   // target half-width
    double alpha = 0.05;    // nominal size
    long n_dagger = 100;    // minimum sample size
};

/// Fixed-width termination rule:
/// z_{1-a/2} (v^/n)^{1/2} + eps 1(n <= n_dagger) < eps.
/// Negative v^ is treated as 0.
bool fixed_width_should_stop(const StoppingState& state);

struct McmcEstimatorConfig {
    CovMethod method = CovMethod::tail;
    // Bandwidths follow the per-method plug-ins (nonparametric for tail,
    // Andrews AR(1) for the others); the parametric estimator needs none.
    bool parametric = false;
};

struct McmcMonitorResult {
    long n = 0;
    double mean = 0.0;
    double half_width = 0.0;
    bool stopped = false;  // false when the chain source ran dry first
};

/// Extends the chain from `source` (returns false when exhausted),
/// re-estimating the LRV every `check_every` draws and stopping per
/// fixed_width_should_stop.
McmcMonitorResult mcmc_monitor(const std::function<bool(double&)>& source,
                               const McmcEstimatorConfig& config, long check_every,
                               StoppingState state, long max_n = 1L << 24);

}  // namespace postcolor
