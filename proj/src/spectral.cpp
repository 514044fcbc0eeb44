#include "postcolor/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "postcolor/autocov.hpp"

namespace postcolor {

namespace {

constexpr double kCoefZeroGuard = 1e-300;

int kernel_lag_cutoff(const KernelSpec& K, int ell, int n) {
    if (!std::isfinite(K.support)) return n - 1;
    const int kmax = static_cast<int>(std::floor(static_cast<double>(ell) * K.support + 1e-9));
    return std::min(n - 1, kmax);
}

void check_args(int n, int ell, double omega) {
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("spectral estimator requires 1 <= ell < n");
    }
    if (!(omega >= 0.0 && omega <= std::numbers::pi)) {
        throw std::invalid_argument("spectral estimator requires omega in [0, pi]");
    }
}

// Model cosine sums sum_k w_k gamma_k(theta) cos(k w) truncated where the
// autocovariances fall below 1e-14.
double model_cos_sum(const ColoringModel& m, double omega, const KernelSpec* K, long ell) {
    double acc = (K ? (*K)(0.0) : 1.0) * m.autocov(0);
    long kmax = 20000000L;
    if (K && std::isfinite(K->support)) {
        kmax = static_cast<long>(std::floor(static_cast<double>(ell) * K->support + 1e-9));
    }
    for (long k = 1; k <= kmax; ++k) {
        const double g = m.autocov(k);
        const double w = K ? (*K)(static_cast<double>(k) / static_cast<double>(ell)) : 1.0;
        acc += 2.0 * w * g * std::cos(static_cast<double>(k) * omega);
        if (std::abs(g) < 1e-14 && k > 8) break;
    }
    return acc;
}

}  // namespace

SpectralEstimate spectral_unadjusted(const Series& s, const KernelSpec& K, int ell,
                                     double omega) {
    const int n = s.size();
    check_args(n, ell, omega);
    const int kmax = kernel_lag_cutoff(K, ell, n);
    AutocovTable acf = sample_autocov(s, kmax);
    double acc = K(0.0) * acf[0];
    for (int k = 1; k <= kmax; ++k) {
        acc += 2.0 * K(static_cast<double>(k) / static_cast<double>(ell)) * acf[k] *
               std::cos(static_cast<double>(k) * omega);
    }
    SpectralEstimate out;
    out.omega = omega;
    out.value = acc / (2.0 * std::numbers::pi);
    out.ell = ell;
    out.coefficient = 1.0;
    return out;
}

SpectralEstimate spectral_tail_postcolored(const Series& s, const KernelSpec& K, int ell,
                                           double omega, const ColoringModel& model) {
    const int n = s.size();
    check_args(n, ell, omega);
    if (!model.is_scalar()) {
        throw std::invalid_argument("spectral_tail_postcolored requires a scalar model");
    }
    const double num = model_cos_sum(model, omega, nullptr, 0);
    const double den = model_cos_sum(model, omega, &K, ell);
    const double coef = (std::abs(den) < kCoefZeroGuard) ? 1.0 : num / den;
    SpectralEstimate base = spectral_unadjusted(s, K, ell, omega);
    SpectralEstimate out;
    out.omega = omega;
    out.value = coef * base.value;
    out.ell = ell;
    out.coefficient = coef;
    return out;
}

}  // namespace postcolor
