#pragma once

#include "postcolor/kernel.hpp"
#include "postcolor/model.hpp"
#include "postcolor/series.hpp"

namespace postcolor {

struct SpectralEstimate {
    double omega = 0.0;
    double value = 0.0;
    int ell = 1;
    double coefficient = 1.0;
};

/// Kernel spectral density estimator
/// f~(w) = (1/2pi) sum_{|k|<n} K(k/l) gamma~_k cos(k w), w in [0, pi].
SpectralEstimate spectral_unadjusted(const Series& s, const KernelSpec& K, int ell,
                                     double omega);

/// Tail postcolored spectral estimator: f~(w) scaled by
///   sum_k gamma_k(theta) cos(k w) / sum_k K(k/l) gamma_k(theta) cos(k w),
/// with the ./0 convention mapping a vanishing denominator to 1.
SpectralEstimate spectral_tail_postcolored(const Series& s, const KernelSpec& K,
                                           int ell, double omega,
                                           const ColoringModel& model);

}  // namespace postcolor
