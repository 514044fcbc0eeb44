#include "postcolor/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace postcolor {

namespace {

double bartlett_eval(double t) { return std::max(1.0 - std::abs(t), 0.0); }

}  // namespace

KernelSpec bartlett_kernel() {
    KernelSpec k;
    k.eval = bartlett_eval;
    k.order_p = 1;
    k.const_A = 1.0 / 3.0;
    k.const_B = -1.0;
    k.psd = true;
    k.support = 1.0;
    k.name = "bartlett";
    return k;
}

KernelSpec truncated_kernel() {
    KernelSpec k;
    k.eval = [](double t) { return std::abs(t) <= 1.0 ? 1.0 : 0.0; };
    k.order_p = KernelSpec::kInfiniteOrder;
    k.const_A = 1.0;
    k.const_B = 0.0;
    k.psd = false;
    k.support = 1.0;
    k.name = "truncated";
    return k;
}

KernelSpec lugsail_kernel(double c, double r) {
    if (!(c >= 0.0 && c < 1.0)) {
        throw std::invalid_argument("lugsail kernel requires c in [0,1)");
    }
    if (!(r >= 1.0)) {
        throw std::invalid_argument("lugsail kernel requires r >= 1");
    }
    const double scale = 1.0 / (1.0 - c);
    KernelSpec k;
    k.eval = [c, r, scale](double t) {
        return scale * bartlett_eval(t) - c * scale * bartlett_eval(r * t);
    };
    k.order_p = 1;
    // K(t) = 1 + t (cr - 1)/(1 - c) + ... near 0.
    k.const_B = (c * r - 1.0) * scale;
    // integral of K^2 over (0,inf):
    //   s^2 [ 1/3 - 2c {1/(2r) - 1/(6r^2)} + c^2/(3r) ].
    k.const_A = scale * scale *
                (1.0 / 3.0 - 2.0 * c * (0.5 / r - 1.0 / (6.0 * r * r)) + c * c / (3.0 * r));
    k.psd = false;
    k.support = 1.0;
    k.name = "lugsail";
    return k;
}

KernelSpec kernel_by_name(const std::string& name) {
    if (name == "bartlett") return bartlett_kernel();
    if (name == "truncated") return truncated_kernel();
    if (name == "lugsail") return lugsail_kernel();
    throw std::invalid_argument("unknown kernel: " + name);
}

}  // namespace postcolor
