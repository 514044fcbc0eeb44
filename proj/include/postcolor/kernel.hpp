#pragma once

#include <functional>
#include <limits>
#include <string>

namespace postcolor {

/// A lag-window kernel together with the constants that drive bandwidth
/// selection: the characteristic order p, A = integral of K^2 over (0,inf)
/// and B = lim_{t->0} {K(t)-1}/t^p.
///
/// Kernels with no finite characteristic order (flat at the origin, like the
/// truncated kernel) carry order_p == kInfiniteOrder and const_B == 0;
/// operations that require a finite order must reject them.
struct KernelSpec {
    static constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

    std::function<double(double)> eval;
    int order_p = 1;
    double const_A = 0.0;
    double const_B = 0.0;
    bool psd = false;
    // K(t) == 0 for |t| > support; +inf when the support is unbounded.
    double support = std::numeric_limits<double>::infinity();
    std::string name;

    double operator()(double t) const { return eval(t); }
    bool finite_order() const { return order_p != kInfiniteOrder; }
};

/// Triangular kernel max(1-|t|, 0): order 1, A = 1/3, B = -1, PSD.
KernelSpec bartlett_kernel();

/// Indicator kernel 1(|t| <= 1): no finite order, not PSD.
KernelSpec truncated_kernel();

/// Lugsail combination (1-c)^{-1} K_Bart(t) - c (1-c)^{-1} K_Bart(rt).
/// Requires c in [0,1) and r >= 1; defaults c = 1/2, r = 3.
KernelSpec lugsail_kernel(double c = 0.5, double r = 3.0);

KernelSpec kernel_by_name(const std::string& name);

}  // namespace postcolor
