#pragma once

#include <string>
#include <vector>

#include "postcolor/kernel.hpp"
#include "postcolor/model.hpp"
#include "postcolor/series.hpp"

namespace postcolor {

struct LrvEstimate {
    double value = 0.0;
    int ell = 1;
    double eta = 1.0;  // postcoloring coefficient; 1 for unadjusted
    std::string method;
};

/// Kernel lag-window estimator v~ = sum_{|k|<n} K(k/l) gamma~_k.
LrvEstimate lrv_unadjusted(const Series& s, const KernelSpec& K, int ell);

/// AR(1) parametric estimator sigma~_z^2 / (1-phi_bar)^2 with
/// Z_i = X_i - phi_bar X_{i-1} and sigma~_z^2 = sum (Z_i - Zbar)^2/(n-2).
LrvEstimate lrv_parametric_ar1(const Series& s);

/// Andrews-style AR(1) prewhitened estimator
/// v~(l; K; Z_{2:n}) / (1 - phi_bar)^2 with |phi_bar| clamped at `clamp`.
LrvEstimate lrv_prewhitened_ar1(const Series& s, const KernelSpec& K, int ell,
                                double clamp = 0.97);

/// Tail postcolored estimator eta * v~ with eta = v(theta)/M_{l,K}(theta);
/// the ./0 convention maps a vanishing M to eta = 1.
LrvEstimate lrv_tail_postcolored(const Series& s, const KernelSpec& K, int ell,
                                 const ColoringModel& model);

/// Two-kernel variant: eta = v(theta)/M_{l,H}(theta), v~ computed with K.
/// H == K reproduces lrv_tail_postcolored exactly.
LrvEstimate lrv_tail_postcolored_general(const Series& s, const KernelSpec& K,
                                         const KernelSpec& H, int ell,
                                         const ColoringModel& model);

/// Finite-sample-target variant: coefficient v_fs(theta)/M_{l,K}(theta)
/// with v_fs(theta) = sum_{|k|<n} (1-|k|/n) gamma_k(theta).
LrvEstimate lrv_tail_finite_sample(const Series& s, const KernelSpec& K, int ell,
                                   const ColoringModel& model);

struct WeightScheme {
    enum class Kind { simple_average, adaptive };
    Kind kind = Kind::adaptive;
    std::vector<double> weights;  // filled by lrv_multi_model
};

/// Weighted combination sum_j w_j v^[j] of per-model tail postcolored
/// estimators, each with its own bandwidth.  Adaptive weights are
/// w_j ~ |xi^[j]|^{-2}; models with |xi^[j]| < 1e-12 share weight one.
LrvEstimate lrv_multi_model(const Series& s, const KernelSpec& K,
                            const std::vector<ColoringModel>& models,
                            const std::vector<int>& bandwidths,
                            WeightScheme& scheme);

/// Closed-form AR(1)+Bartlett coefficient
/// eta = l(1-phi^2) / (2 phi^{l+1} - 2 phi - l phi^2 + l);
/// reduces to (1+phi)/(1-phi) at l = 1.
double eta_ar1_bartlett(double phi, long ell);

}  // namespace postcolor
