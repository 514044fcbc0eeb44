#include "postcolor/applications.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "postcolor/autocov.hpp"
#include "postcolor/bandwidth.hpp"
#include "postcolor/estimators.hpp"
#include "postcolor/multivariate.hpp"
#include "postcolor/quantiles.hpp"

namespace postcolor {

std::string to_string(CovMethod m) {
    switch (m) {
        case CovMethod::unadjusted: return "un";
        case CovMethod::prewhitened: return "pw";
        case CovMethod::lugsail: return "lug";
        case CovMethod::tail: return "tail";
    }
    return "?";
}

CovMethod cov_method_from_string(const std::string& s) {
    if (s == "un" || s == "unadjusted") return CovMethod::unadjusted;
    if (s == "pw" || s == "prewhitened") return CovMethod::prewhitened;
    if (s == "lug" || s == "lugsail") return CovMethod::lugsail;
    if (s == "tail") return CovMethod::tail;
    throw std::invalid_argument("unknown covariance method: " + s);
}

OlsFit ols_fit(const RegressionProblem& p) {
    const int n = static_cast<int>(p.X.rows());
    const int d = static_cast<int>(p.X.cols());
    if (p.y.size() != n || n <= d) {
        throw std::invalid_argument("ols_fit: design/response size mismatch");
    }
    const Eigen::MatrixXd xtx = p.X.transpose() * p.X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xtx);
    if (!lu.isInvertible()) {
        throw std::runtime_error("ols_fit: singular design matrix");
    }
    OlsFit fit;
    fit.beta = lu.solve(p.X.transpose() * p.y);
    fit.residuals = p.y - p.X * fit.beta;
    fit.S_n = xtx / static_cast<double>(n);
    return fit;
}

namespace {

CovEstimate score_lrcov(const MultiSeries& w, CovMethod method) {
    CovOptions raw{.auto_floor = false};
    switch (method) {
        case CovMethod::unadjusted: {
            const int ell = ell_andrews_components(w);
            return cov_unadjusted(w, bartlett_kernel(), ell, raw);
        }
        case CovMethod::prewhitened: {
            const int ell = ell_andrews_components_prewhitened(w);
            return cov_prewhitened_var1(w, bartlett_kernel(), ell, raw);
        }
        case CovMethod::lugsail: {
            const int ell = ell_andrews_components(w);
            return cov_unadjusted(w, lugsail_kernel(), ell, raw);
        }
        case CovMethod::tail: {
            ColoringModel model = fit_var1(w);
            const int ell = ell_tail_multivariate(w, model, bartlett_kernel());
            return cov_tail_postcolored(w, bartlett_kernel(), ell, model, raw);
        }
    }
    throw std::logic_error("score_lrcov: unreachable");
}

}  // namespace

WaldResult hac_wald_test(const RegressionProblem& p, CovMethod method, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("hac_wald_test requires alpha in (0,1)");
    }
    const int n = static_cast<int>(p.X.rows());
    const int d = static_cast<int>(p.X.cols());
    OlsFit fit = ols_fit(p);
    if (fit.residuals.cwiseAbs().maxCoeff() <
        1e-10 * std::max(1.0, p.y.cwiseAbs().maxCoeff())) {
        throw std::runtime_error(
            "hac_wald_test: singular sandwich covariance (numerically perfect fit)");
    }

    Eigen::MatrixXd w(n, d);
    for (int i = 0; i < n; ++i) w.row(i) = fit.residuals(i) * p.X.row(i);
    MultiSeries scores(std::move(w));

    CovEstimate v = score_lrcov(scores, method);
    // Reject degenerate sandwiches (e.g. a perfect fit) before flooring.
    {
        const Eigen::MatrixXd sigma_raw =
            fit.S_n.partialPivLu().solve(fit.S_n.partialPivLu().solve(v.matrix).transpose());
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma_raw);
        if (!lu.isInvertible()) {
            throw std::runtime_error("hac_wald_test: singular sandwich covariance");
        }
    }
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (v.matrix + v.matrix.transpose()))
            .eigenvalues()
            .minCoeff();
    if (min_eig < 1.0 / static_cast<double>(n)) {
        v = eigenvalue_floor(v, n);
    }

    const Eigen::MatrixXd s_inv_v = fit.S_n.partialPivLu().solve(v.matrix);
    const Eigen::MatrixXd sigma = fit.S_n.partialPivLu().solve(s_inv_v.transpose()).transpose();
    const Eigen::MatrixXd sigma_sym = 0.5 * (sigma + sigma.transpose());
    const double statistic =
        static_cast<double>(n) * fit.beta.dot(sigma_sym.partialPivLu().solve(fit.beta));

    const double scale = static_cast<double>(d) * static_cast<double>(n - 1) /
                         static_cast<double>(n - d);
    const double f_quant = f_quantile(1.0 - alpha, d, n - d);
    WaldResult out;
    out.statistic = statistic;
    out.critical_value = scale * f_quant;
    out.p_value = 1.0 - f_cdf(statistic / scale, d, n - d);
    out.reject = statistic > out.critical_value;
    out.cov_method = to_string(method);
    out.ell = v.ell;
    return out;
}

bool fixed_width_should_stop(const StoppingState& state) {
    if (state.n_dagger < 1 || !(state.epsilon > 0.0)) {
        throw std::invalid_argument("fixed_width_should_stop: invalid stopping state");
    }
    if (state.n < 1) return false;
    const double v = std::max(state.v_hat, 0.0);
    const double z = normal_quantile(1.0 - state.alpha / 2.0);
    const double lhs = z * std::sqrt(v / static_cast<double>(state.n)) +
                       (state.n <= state.n_dagger ? state.epsilon : 0.0);
    return lhs < state.epsilon;
}

namespace {

double chain_lrv(const Series& chain, const McmcEstimatorConfig& config) {
    const int n = chain.size();
    try {
        if (config.parametric) return lrv_parametric_ar1(chain).value;
        switch (config.method) {
            case CovMethod::tail: {
                XiEstimate xi = xi1_nonparametric(chain);
                const int ell = ell_tail(xi, bartlett_kernel(), n);
                ColoringModel model = fit_ar1(chain);
                return lrv_tail_postcolored(chain, bartlett_kernel(), ell, model).value;
            }
            case CovMethod::prewhitened: {
                AutocovTable acf = sample_autocov(chain, 1);
                const double phi = std::clamp(acf[1] / acf[0], -0.97, 0.97);
                std::vector<double> z(static_cast<std::size_t>(n - 1));
                for (int i = 1; i < n; ++i) {
                    z[static_cast<std::size_t>(i - 1)] = chain[i] - phi * chain[i - 1];
                }
                Series zs(std::move(z));
                AutocovTable zacf = sample_autocov(zs, 1);
                const double phi_z = (zacf[0] > 0.0) ? zacf[1] / zacf[0] : 0.0;
                const int ell = ell_andrews_ar1(phi_z, n);
                return lrv_prewhitened_ar1(chain, bartlett_kernel(),
                                           std::min(ell, n - 2), 0.97)
                    .value;
            }
            case CovMethod::lugsail: {
                const int ell = ell_andrews_ar1(chain);
                return lrv_unadjusted(chain, lugsail_kernel(), ell).value;
            }
            case CovMethod::unadjusted: {
                const int ell = ell_andrews_ar1(chain);
                return lrv_unadjusted(chain, bartlett_kernel(), ell).value;
            }
        }
    } catch (const std::exception&) {
        return 0.0;  // degenerate early chain; treated as zero variance
    }
    return 0.0;
}

}  // namespace

McmcMonitorResult mcmc_monitor(const std::function<bool(double&)>& source,
                               const McmcEstimatorConfig& config, long check_every,
                               StoppingState state, long max_n) {
    if (check_every < 1) throw std::invalid_argument("mcmc_monitor: check_every >= 1");
    std::vector<double> chain;
    chain.reserve(1024);
    McmcMonitorResult out;
    bool exhausted = false;
    while (!exhausted && static_cast<long>(chain.size()) < max_n) {
        for (long i = 0; i < check_every; ++i) {
            double x;
            if (!source(x)) {
                exhausted = true;
                break;
            }
            chain.push_back(x);
        }
        const long n = static_cast<long>(chain.size());
        if (n < 10) continue;
        Series s(chain);
        state.n = n;
        state.v_hat = chain_lrv(s, config);
        if (fixed_width_should_stop(state)) {
            out.stopped = true;
            break;
        }
    }
    const long n = static_cast<long>(chain.size());
    out.n = n;
    if (n > 0) {
        double sum = 0.0;
        for (double x : chain) sum += x;
        out.mean = sum / static_cast<double>(n);
        if (!out.stopped && n >= 10) {
            Series s(chain);
            state.v_hat = chain_lrv(s, config);
        }
        const double z = normal_quantile(1.0 - state.alpha / 2.0);
        out.half_width = z * std::sqrt(std::max(state.v_hat, 0.0) / static_cast<double>(n));
    }
    return out;
}

}  // namespace postcolor
