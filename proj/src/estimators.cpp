#include "postcolor/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "postcolor/autocov.hpp"
#include "postcolor/bandwidth.hpp"

namespace postcolor {

namespace {

constexpr double kEtaZeroGuard = 1e-300;  // |M| below this triggers ./0 == 1

int kernel_lag_cutoff(const KernelSpec& K, int ell, int n) {
    if (!std::isfinite(K.support)) return n - 1;
    const int kmax = static_cast<int>(std::floor(static_cast<double>(ell) * K.support + 1e-9));
    return std::min(n - 1, kmax);
}

double weighted_sum(const AutocovTable& acf, const KernelSpec& K, int ell, int kmax) {
    double acc = K(0.0) * acf[0];
    for (int k = 1; k <= kmax; ++k) {
        acc += 2.0 * K(static_cast<double>(k) / static_cast<double>(ell)) * acf[k];
    }
    return acc;
}

}  // namespace

LrvEstimate lrv_unadjusted(const Series& s, const KernelSpec& K, int ell) {
    const int n = s.size();
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("lrv_unadjusted requires 1 <= ell < n");
    }
    const int kmax = kernel_lag_cutoff(K, ell, n);
    AutocovTable acf = sample_autocov(s, kmax);
    LrvEstimate out;
    out.value = weighted_sum(acf, K, ell, kmax);
    out.ell = ell;
    out.eta = 1.0;
    out.method = "un";
    return out;
}

LrvEstimate lrv_parametric_ar1(const Series& s) {
    const int n = s.size();
    if (n < 3) throw std::invalid_argument("lrv_parametric_ar1 requires n >= 3");
    AutocovTable acf = sample_autocov(s, 1);
    if (!(acf[0] > 0.0)) throw std::invalid_argument("lrv_parametric_ar1: degenerate series");
    const double phi = std::clamp(acf[1] / acf[0], -(1.0 - 1e-6), 1.0 - 1e-6);
    double zsum = 0.0;
    for (int i = 1; i < n; ++i) zsum += s[i] - phi * s[i - 1];
    const double zbar = zsum / static_cast<double>(n - 1);
    double ss = 0.0;
    for (int i = 1; i < n; ++i) {
        const double z = s[i] - phi * s[i - 1] - zbar;
        ss += z * z;
    }
    const double sigma2_z = ss / static_cast<double>(n - 2);
    LrvEstimate out;
    out.value = sigma2_z / ((1.0 - phi) * (1.0 - phi));
    out.ell = 1;
    out.eta = 1.0 / ((1.0 - phi) * (1.0 - phi));
    out.method = "para";
    return out;
}

LrvEstimate lrv_prewhitened_ar1(const Series& s, const KernelSpec& K, int ell, double clamp) {
    const int n = s.size();
    if (n < 4) throw std::invalid_argument("lrv_prewhitened_ar1 requires n >= 4");
    if (ell < 1 || ell >= n - 1) {
        throw std::invalid_argument("lrv_prewhitened_ar1 requires 1 <= ell < n-1");
    }
    if (!(clamp > 0.0 && clamp <= 1.0)) {
        throw std::invalid_argument("lrv_prewhitened_ar1 requires clamp in (0,1]");
    }
    AutocovTable acf = sample_autocov(s, 1);
    if (!(acf[0] > 0.0)) throw std::invalid_argument("lrv_prewhitened_ar1: degenerate series");
    const double phi = std::clamp(acf[1] / acf[0], -clamp, clamp);
    std::vector<double> z(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) z[static_cast<std::size_t>(i - 1)] = s[i] - phi * s[i - 1];
    Series zs(std::move(z));
    LrvEstimate inner = lrv_unadjusted(zs, K, ell);
    const double recolor = 1.0 / ((1.0 - phi) * (1.0 - phi));
    LrvEstimate out;
    out.value = inner.value * recolor;
    out.ell = ell;
    out.eta = recolor;
    out.method = "pw";
    return out;
}

LrvEstimate lrv_tail_postcolored(const Series& s, const KernelSpec& K, int ell,
                                 const ColoringModel& model) {
    return lrv_tail_postcolored_general(s, K, K, ell, model);
}

LrvEstimate lrv_tail_postcolored_general(const Series& s, const KernelSpec& K,
                                         const KernelSpec& H, int ell,
                                         const ColoringModel& model) {
    const int n = s.size();
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("tail postcolored estimator requires 1 <= ell < n");
    }
    double eta;
    if (model.kind() == ModelKind::AR1 && H.name == "bartlett") {
        eta = eta_ar1_bartlett(model.params()[0], ell);
    } else {
        const double m = model.M(H, ell);
        eta = (std::abs(m) < kEtaZeroGuard) ? 1.0 : model.lrv() / m;
    }
    LrvEstimate base = lrv_unadjusted(s, K, ell);
    LrvEstimate out;
    out.value = eta * base.value;
    out.ell = ell;
    out.eta = eta;
    out.method = (H.name == K.name) ? "tail" : "tail-general";
    return out;
}

LrvEstimate lrv_tail_finite_sample(const Series& s, const KernelSpec& K, int ell,
                                   const ColoringModel& model) {
    const int n = s.size();
    if (ell < 1 || ell >= n) {
        throw std::invalid_argument("lrv_tail_finite_sample requires 1 <= ell < n");
    }
    const double m = model.M(K, ell);
    const double vfs = model.finite_sample_lrv(n);
    const double coef = (std::abs(m) < kEtaZeroGuard) ? 1.0 : vfs / m;
    LrvEstimate base = lrv_unadjusted(s, K, ell);
    LrvEstimate out;
    out.value = coef * base.value;
    out.ell = ell;
    out.eta = coef;
    out.method = "tail-fs";
    return out;
}

LrvEstimate lrv_multi_model(const Series& s, const KernelSpec& K,
                            const std::vector<ColoringModel>& models,
                            const std::vector<int>& bandwidths, WeightScheme& scheme) {
    if (models.empty() || models.size() != bandwidths.size()) {
        throw std::invalid_argument("lrv_multi_model requires matching non-empty model/bandwidth lists");
    }
    const std::size_t J = models.size();
    std::vector<double> weights(J, 0.0);
    if (scheme.kind == WeightScheme::Kind::simple_average) {
        std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(J));
    } else {
        // Adaptive weights ~ |xi^[j]|^{-2} with the shared nonparametric
        // kappa_1 estimate; near-zero xi takes over (ties split evenly).
        const double kappa_hat = nonparametric_kappa1(s, bartlett_kernel());
        std::vector<double> xi(J, 0.0);
        std::vector<std::size_t> zero_idx;
        for (std::size_t j = 0; j < J; ++j) {
            xi[j] = kappa_hat - models[j].kappa(1);
            if (std::abs(xi[j]) < 1e-12) zero_idx.push_back(j);
        }
        if (!zero_idx.empty()) {
            for (std::size_t j : zero_idx) weights[j] = 1.0 / static_cast<double>(zero_idx.size());
        } else {
            double total = 0.0;
            for (std::size_t j = 0; j < J; ++j) {
                weights[j] = 1.0 / (xi[j] * xi[j]);
                total += weights[j];
            }
            for (auto& w : weights) w /= total;
        }
    }
    double value = 0.0;
    for (std::size_t j = 0; j < J; ++j) {
        value += weights[j] * lrv_tail_postcolored(s, K, bandwidths[j], models[j]).value;
    }
    scheme.weights = std::move(weights);
    LrvEstimate out;
    out.value = value;
    out.ell = bandwidths[0];
    out.eta = 1.0;
    out.method = "multi";
    return out;
}

}  // namespace postcolor
