#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postcolor/autocov.hpp"
#include "postcolor/kernel.hpp"
#include "postcolor/series.hpp"

namespace postcolor {

enum class ModelKind { AR1, ARMA11, MAq, ARp, VAR1 };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Parametric coloring model: supplies the model-implied autocovariances
/// gamma_k(theta) and the derived quantities
///   v(theta)        = sum_k gamma_k(theta)
///   v_p(theta)      = sum_k |k|^p gamma_k(theta)
///   M_{l,K}(theta)  = sum_k K(k/l) gamma_k(theta)
/// in scalar form, plus the matrix analogues for the VAR(1) kind.
class ColoringModel {
public:
    static ColoringModel ar1(double phi, double sigma2);
    static ColoringModel arma11(double a, double b, double sigma2);
    static ColoringModel maq(std::vector<double> b, double sigma2);
    static ColoringModel arp(std::vector<double> a, double sigma2);
    static ColoringModel var1(Eigen::MatrixXd phi, Eigen::MatrixXd sigma_z);

    ModelKind kind() const { return kind_; }
    bool is_scalar() const { return kind_ != ModelKind::VAR1; }
    int dim() const { return is_scalar() ? 1 : static_cast<int>(phi_mat_.rows()); }

    const std::vector<double>& params() const { return params_; }
    double innovation_var() const { return sigma2_; }
    const Eigen::MatrixXd& coefficient_matrix() const { return phi_mat_; }
    const Eigen::MatrixXd& innovation_cov() const { return sigma_mat_; }

    /// Set by the fitting routines when they had to fall back (e.g. the
    /// ARMA(1,1) optimizer did not converge).
    bool fit_warning = false;

    // Scalar model quantities.
    double autocov(long k) const;
    double lrv() const;
    double vp(int p) const;
    double kappa(int p) const;  // vp(p) / lrv()
    double M(const KernelSpec& K, long ell) const;
    double finite_sample_lrv(long n) const;  // sum_{|k|<n} (1-|k|/n) gamma_k

    // Matrix quantities (VAR1 only).
    Eigen::MatrixXd autocov_mat(long k) const;
    Eigen::MatrixXd lrv_mat() const;
    Eigen::MatrixXd vp_mat(int p) const;
    Eigen::MatrixXd M_mat(const KernelSpec& K, long ell) const;

    std::string to_json() const;
    static ColoringModel from_json(const std::string& text);

private:
    ColoringModel() = default;

    ModelKind kind_ = ModelKind::AR1;
    std::vector<double> params_;   // scalar kinds
    double sigma2_ = 1.0;          // scalar innovation variance
    Eigen::MatrixXd phi_mat_;      // VAR1 coefficient
    Eigen::MatrixXd sigma_mat_;    // VAR1 innovation covariance
    Eigen::MatrixXd gamma0_mat_;   // VAR1 stationary covariance (cached)
};

struct ModelSummary {
    double v = 0.0;
    double v_p = 0.0;
    double kappa_p = 0.0;
};

ModelSummary summarize(const ColoringModel& m, int p);

// --- Fitting -------------------------------------------------------------

/// phi_bar = gamma~_1/gamma~_0 clamped into (-clamp, clamp); innovation
/// variance calibrated so the model gamma_0 matches gamma~_0 exactly.
ColoringModel fit_ar1(const AutocovTable& acf, double clamp = 1.0 - 1e-6);
ColoringModel fit_ar1(const Series& s, double clamp = 1.0 - 1e-6);

/// Conditional-sum-of-squares ARMA(1,1) fit over the open box
/// (-1+eps, 1-eps)^2, initialized at (gamma~_1/gamma~_0, 0).  Falls back to
/// the AR(1)-equivalent (phi_bar, 0) with fit_warning set when the
/// optimizer fails to converge.
///
/// With ar1_pretest the b = 0 submodel is kept unless the CSS improvement
/// passes a chi-square(1) likelihood-ratio check; this pins the fit on the
/// near-cancellation ridge, where only the transfer function is identified.
/// Ratio functionals such as kappa_1 are ridge-invariant, so plug-ins that
/// only need them can skip the pretest.
ColoringModel fit_arma11(const Series& s, bool ar1_pretest = true);

/// Moment matching via the innovations algorithm.
ColoringModel fit_maq(const Series& s, int q);

/// Yule-Walker.
ColoringModel fit_arp(const Series& s, int p);

/// Phi_bar from the lag-1/lag-0 sample autocovariance matrices, residual
/// covariance from Z_i = X_i - Phi_bar X_{i-1}.  Spectral radius shrunk to
/// 1 - 1e-6 if necessary; singular Gamma~_0 is an error.
ColoringModel fit_var1(const MultiSeries& s);

}  // namespace postcolor
