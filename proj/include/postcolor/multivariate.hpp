#pragma once

#include <string>

#include <Eigen/Dense>

#include "postcolor/kernel.hpp"
#include "postcolor/model.hpp"
#include "postcolor/series.hpp"

namespace postcolor {

struct CovEstimate {
    Eigen::MatrixXd matrix;
    int ell = 1;
    std::string method;
    bool floored = false;
};

struct CovOptions {
    // Apply the 1/n eigenvalue floor whenever the estimate has an
    // eigenvalue below 1/n (the correction used in the experiments).
    bool auto_floor = true;
};

/// V~(l;K) = sum_{|k|<n} K(k/l) Gamma~_k.
CovEstimate cov_unadjusted(const MultiSeries& s, const KernelSpec& K, int ell,
                           const CovOptions& opts = {});

/// Symmetrized matrix tail postcolored estimator
/// { V(theta) M^{-1}(theta) V~ + V~ M^{-1}(theta) V(theta) } / 2.
CovEstimate cov_tail_postcolored(const MultiSeries& s, const KernelSpec& K, int ell,
                                 const ColoringModel& model,
                                 const CovOptions& opts = {});

/// VAR(1) prewhitened estimator (I-Phi)^{-1} V~(l;K;Z_{2:n}) (I-Phi^T)^{-1}
/// with Phi, Z from fit_var1.  Errors out when the recoloring matrix has
/// condition number above 1e12.
CovEstimate cov_prewhitened_var1(const MultiSeries& s, const KernelSpec& K, int ell,
                                 const CovOptions& opts = {});

/// Replace eigenvalues below 1/n by 1/n (Q Lambda+ Q^T on the symmetrized
/// input).  Idempotent.
CovEstimate eigenvalue_floor(const CovEstimate& v, int n);

/// Trace-aggregated nonparametric plug-in bandwidth
///   xi^ = sum_j V~_{1,#}^{(jj)} / sum_j V~_{0,#}^{(jj)}
///         - sum_j V_1^{(jj)}(Phi) / sum_j V^{(jj)}(Phi),
///   l^ = ceil((3 xi^2 n / 2)^{1/3}),
/// with pilot bandwidths l_r^# = ceil(2 n^{1/(2r+3)}).
int ell_tail_multivariate(const MultiSeries& s, const ColoringModel& var1_model,
                          const KernelSpec& K);

/// Component-wise AR(1) parametric plug-in bandwidth
///   l^ = ceil([3n/2 * sum_j v1_j^2 / sum_j v0_j^2]^{1/3})
/// with v0_j, v1_j the AR(1) model LRV and first moment sum per component.
int ell_andrews_components(const MultiSeries& s);

/// Same plug-in evaluated on the component-wise AR(1) prewhitened series.
int ell_andrews_components_prewhitened(const MultiSeries& s);

}  // namespace postcolor
