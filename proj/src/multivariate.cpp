#include "postcolor/multivariate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "postcolor/autocov.hpp"
#include "postcolor/bandwidth.hpp"

namespace postcolor {

namespace {

int kernel_lag_cutoff(const KernelSpec& K, int ell, int n) {
    if (!std::isfinite(K.support)) return n - 1;
    const int kmax = static_cast<int>(std::floor(static_cast<double>(ell) * K.support + 1e-9));
    return std::min(n - 1, kmax);
}

Eigen::MatrixXd weighted_gamma_sum(const MultiSeries& s, const KernelSpec& K, int ell) {
    const int n = s.size();
    const int kmax = kernel_lag_cutoff(K, ell, n);
    Eigen::MatrixXd acc = K(0.0) * sample_cross_autocov(s, 0);
    for (int k = 1; k <= kmax; ++k) {
        const double w = K(static_cast<double>(k) / static_cast<double>(ell));
        if (w == 0.0) continue;
        Eigen::MatrixXd g = sample_cross_autocov(s, k);
        acc += w * (g + g.transpose());
    }
    return acc;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    return es.eigenvalues().minCoeff();
}

CovEstimate maybe_floor(CovEstimate est, int n, const CovOptions& opts) {
    if (opts.auto_floor && min_eigenvalue(est.matrix) < 1.0 / static_cast<double>(n)) {
        CovEstimate floored = eigenvalue_floor(est, n);
        floored.method = est.method;
        return floored;
    }
    return est;
}

// Per-component AR(1) plug-in aggregate l = ceil([3n/2 R]^{1/3}) with
// R = sum_j v1_j^2 / sum_j v0_j^2.
int andrews_aggregate(const std::vector<double>& v0, const std::vector<double>& v1, int n) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < v0.size(); ++j) {
        num += v1[j] * v1[j];
        den += v0[j] * v0[j];
    }
    if (!(den > 0.0)) return 1;
    const double raw = std::cbrt(1.5 * static_cast<double>(n) * num / den);
    if (!std::isfinite(raw)) return n - 1;
    return std::max(1, std::min(static_cast<int>(std::ceil(raw)), n - 1));
}

struct Ar1Plugin {
    double phi = 0.0;
    double sigma2 = 0.0;
};

// phi from the lag-1 autocovariance ratio, sigma2 from the demeaned AR(1)
// residuals with divisor (length-2).
Ar1Plugin component_ar1(const Series& x) {
    const int n = x.size();
    AutocovTable acf = sample_autocov(x, 1);
    if (!(acf[0] > 0.0)) throw std::runtime_error("degenerate component series");
    Ar1Plugin out;
    out.phi = std::clamp(acf[1] / acf[0], -(1.0 - 1e-6), 1.0 - 1e-6);
    double zsum = 0.0;
    for (int i = 1; i < n; ++i) zsum += x[i] - out.phi * x[i - 1];
    const double zbar = zsum / static_cast<double>(n - 1);
    double ss = 0.0;
    for (int i = 1; i < n; ++i) {
        const double z = x[i] - out.phi * x[i - 1] - zbar;
        ss += z * z;
    }
    out.sigma2 = ss / static_cast<double>(n - 2);
    return out;
}

double ar1_v0(const Ar1Plugin& m) { return m.sigma2 / ((1.0 - m.phi) * (1.0 - m.phi)); }

double ar1_v1(const Ar1Plugin& m) {
    return 2.0 * m.phi * m.sigma2 /
           ((1.0 - m.phi) * (1.0 - m.phi) * (1.0 - m.phi) * (1.0 + m.phi));
}

}  // namespace

CovEstimate cov_unadjusted(const MultiSeries& s, const KernelSpec& K, int ell,
                           const CovOptions& opts) {
    const int n = s.size();
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("cov_unadjusted requires 1 <= ell < n");
    }
    CovEstimate out;
    out.matrix = weighted_gamma_sum(s, K, ell);
    out.ell = ell;
    out.method = "un";
    return maybe_floor(std::move(out), n, opts);
}

CovEstimate cov_tail_postcolored(const MultiSeries& s, const KernelSpec& K, int ell,
                                 const ColoringModel& model, const CovOptions& opts) {
    const int n = s.size();
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("cov_tail_postcolored requires 1 <= ell < n");
    }
    if (model.dim() != s.dim()) {
        throw std::invalid_argument("cov_tail_postcolored: model dimension mismatch");
    }
    const Eigen::MatrixXd vtilde = weighted_gamma_sum(s, K, ell);
    const Eigen::MatrixXd vm = model.lrv_mat();
    const Eigen::MatrixXd mm = model.M_mat(K, ell);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(mm);
    if (!lu.isInvertible()) {
        throw std::runtime_error(
            "cov_tail_postcolored: singular M(theta); change ell or regularize the model");
    }
    // { V M^{-1} V~ + V~ M^{-1} V } / 2; the second term is the transpose of
    // the first because V, M, V~ are symmetric.
    const Eigen::MatrixXd p = vm * lu.solve(vtilde);
    CovEstimate out;
    out.matrix = 0.5 * (p + p.transpose());
    out.ell = ell;
    out.method = "tail";
    return maybe_floor(std::move(out), n, opts);
}

CovEstimate cov_prewhitened_var1(const MultiSeries& s, const KernelSpec& K, int ell,
                                 const CovOptions& opts) {
    const int n = s.size();
    const int d = s.dim();
    if (ell < 1 || ell >= n - 1) {
        throw std::invalid_argument("cov_prewhitened_var1 requires 1 <= ell < n-1");
    }
    ColoringModel model = fit_var1(s);
    const Eigen::MatrixXd& phi = model.coefficient_matrix();
    const Eigen::MatrixXd recolor_base = Eigen::MatrixXd::Identity(d, d) - phi;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(recolor_base);
    const double cond =
        svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
    if (!(cond < 1e12)) {
        std::ostringstream msg;
        msg << "cov_prewhitened_var1: recoloring matrix nearly singular (condition number "
            << cond << ")";
        throw std::runtime_error(msg.str());
    }
    const Eigen::MatrixXd& x = s.values();
    Eigen::MatrixXd z(n - 1, d);
    for (int i = 1; i < n; ++i) {
        z.row(i - 1) = x.row(i) - (phi * x.row(i - 1).transpose()).transpose();
    }
    MultiSeries zs(std::move(z));
    const Eigen::MatrixXd vtilde_z = weighted_gamma_sum(zs, K, ell);
    const Eigen::MatrixXd r = recolor_base.partialPivLu().inverse();
    Eigen::MatrixXd v = r * vtilde_z * r.transpose();
    CovEstimate out;
    out.matrix = 0.5 * (v + v.transpose());
    out.ell = ell;
    out.method = "pw";
    return maybe_floor(std::move(out), n, opts);
}

CovEstimate eigenvalue_floor(const CovEstimate& v, int n) {
    if (n < 1) throw std::invalid_argument("eigenvalue_floor requires n >= 1");
    if (!v.matrix.allFinite()) {
        throw std::runtime_error("eigenvalue_floor: matrix has non-finite entries");
    }
    const Eigen::MatrixXd sym = 0.5 * (v.matrix + v.matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue_floor: eigendecomposition failed");
    }
    const double floor_value = 1.0 / static_cast<double>(n);
    Eigen::VectorXd lam = es.eigenvalues();
    for (int i = 0; i < lam.size(); ++i) lam(i) = std::max(lam(i), floor_value);
    CovEstimate out;
    out.matrix = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    out.ell = v.ell;
    out.method = v.method;
    out.floored = true;
    return out;
}

int ell_tail_multivariate(const MultiSeries& s, const ColoringModel& var1_model,
                          const KernelSpec& K) {
    const int n = s.size();
    const int d = s.dim();
    if (var1_model.dim() != d) {
        throw std::invalid_argument("ell_tail_multivariate: model dimension mismatch");
    }
    double num0 = 0.0, num1 = 0.0;
    for (int j = 0; j < d; ++j) {
        Series comp = s.component(j);
        num0 += weighted_moment_sum(comp, bartlett_kernel(), pilot_bandwidth(n, 0), 0);
        num1 += weighted_moment_sum(comp, bartlett_kernel(), pilot_bandwidth(n, 1), 1);
    }
    const double model_v0 = var1_model.lrv_mat().trace();
    const double model_v1 = var1_model.vp_mat(1).trace();
    if (!(num0 > 0.0) || !(model_v0 > 0.0)) return 1;
    const double xi = num1 / num0 - model_v1 / model_v0;
    return ell_tail(xi, K, n);
}

int ell_andrews_components(const MultiSeries& s) {
    const int d = s.dim();
    std::vector<double> v0, v1;
    v0.reserve(static_cast<std::size_t>(d));
    v1.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        Ar1Plugin m = component_ar1(s.component(j));
        v0.push_back(ar1_v0(m));
        v1.push_back(ar1_v1(m));
    }
    return andrews_aggregate(v0, v1, s.size());
}

int ell_andrews_components_prewhitened(const MultiSeries& s) {
    const int n = s.size();
    const int d = s.dim();
    std::vector<double> v0, v1;
    v0.reserve(static_cast<std::size_t>(d));
    v1.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        Series comp = s.component(j);
        Ar1Plugin m = component_ar1(comp);
        // AR(1)-prewhitened component series Z*_2..Z*_n.
        std::vector<double> z(static_cast<std::size_t>(n - 1));
        for (int i = 1; i < n; ++i) {
            z[static_cast<std::size_t>(i - 1)] = comp[i] - m.phi * comp[i - 1];
        }
        Series zs(std::move(z));
        AutocovTable zacf = sample_autocov(zs, 1);
        double phi_z = 0.0;
        if (zacf[0] > 0.0) {
            phi_z = std::clamp(zacf[1] / zacf[0], -(1.0 - 1e-6), 1.0 - 1e-6);
        }
        double ss = 0.0;
        for (int i = 1; i < zs.size(); ++i) {
            const double w = zs[i] - phi_z * zs[i - 1];
            ss += w * w;
        }
        const double sigma2 = ss / static_cast<double>(zs.size() - 2);
        Ar1Plugin mz{phi_z, sigma2};
        v0.push_back(ar1_v0(mz));
        v1.push_back(ar1_v1(mz));
    }
    return andrews_aggregate(v0, v1, n);
}

}  // namespace postcolor
