#pragma once

#include <utility>

#include "postcolor/kernel.hpp"
#include "postcolor/series.hpp"

namespace postcolor {

struct XiEstimate {
    double xi = 0.0;
    int p = 1;
    enum class Method { parametric, nonparametric } method = Method::nonparametric;
    bool degenerate = false;  // pilot LRV was <= 0, xi forced to 0
};

/// Parametric plug-in: fit ARMA(1,1) and AR(1), return the difference of
/// their lag-one dependence ratios
///   xi_1 = 2(a+b)(1+ab)/{(1+b)^2 (1-a^2)} - 2 phi/(1-phi^2).
XiEstimate xi1_parametric(const Series& s);

/// Nonparametric plug-in: xi^_1 = v~_{1,#}/v~_{0,#} - 2 phi_bar/(1-phi_bar^2)
/// with pilot bandwidths l_r^# = ceil(2 n^{1/(2r+3)}).
XiEstimate xi1_nonparametric(const Series& s, const KernelSpec& pilot);
XiEstimate xi1_nonparametric(const Series& s);

/// v~_{r,#} = sum_{|k|<n} K(k/l) |k|^r gamma~_k  (pilot building block).
double weighted_moment_sum(const Series& s, const KernelSpec& K, int ell, int r);

int pilot_bandwidth(int n, int r);  // ceil(2 n^{1/(2r+3)})

/// Nonparametric dependence-ratio estimate v~_{1,#}/v~_{0,#} at the pilot
/// bandwidths; returns 0 (degenerate) when v~_{0,#} <= 0.
double nonparametric_kappa1(const Series& s, const KernelSpec& pilot, bool* degenerate = nullptr);

/// MSE-optimal bandwidth ceil({p B^2 xi^2 n / (2A)}^{1/(2p+1)}) clamped to
/// [1, n-1].  Requires a finite-order kernel.
int ell_tail(double xi, const KernelSpec& K, int n);
int ell_tail(const XiEstimate& xi, const KernelSpec& K, int n);

/// Andrews AR(1) plug-in ceil({6 phi^2 n / (1-phi^2)^2}^{1/3}), clamped.
int ell_andrews_ar1(double phi, int n);
int ell_andrews_ar1(const Series& s);

struct AsymptoticProfile {
    double mse_n23 = 0.0;   // lim n^{2/3} MSE / v^2
    double bias_n13 = 0.0;  // lim n^{1/3} Bias / v (signed)
    double var_n23 = 0.0;
};

/// Optimal-bandwidth asymptotics for a tail postcolored estimator with
/// dependence-ratio mismatch xi = kappa1 - kappa1_model:
///   MSE  = (2p+1) {(2A/p)^p |B xi|}^{2/(2p+1)}
///   Bias^2 = MSE/(1+2p),  Var = 2p MSE/(1+2p),  sign(Bias) = sign(B xi).
AsymptoticProfile asymptotic_profile(double kappa1, double kappa1_model,
                                     const KernelSpec& K);

/// Open interval (phi_-, phi_+) of AR(1) coloring parameters that reduce
/// asymptotic MSE, from
///   varphi = {-1 + (4 kappa1^2 + 1)^{1/2}} / (2 kappa1),
///   phi_- = varphi 1(kappa1 < 0), phi_+ = varphi 1(kappa1 > 0).
std::pair<double, double> improvement_region_ar1(double kappa1);

}  // namespace postcolor
