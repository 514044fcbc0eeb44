#include "postcolor/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

#include <json.hpp>

namespace postcolor {

namespace {

constexpr double kAdmissibleMargin = 1e-6;
constexpr double kGammaTruncTol = 1e-14;
constexpr long kGammaTruncCap = 20000000L;

double companion_spectral_radius(const std::vector<double>& a) {
    const int p = static_cast<int>(a.size());
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < p; ++j) comp(0, j) = a[static_cast<std::size_t>(j)];
    for (int i = 1; i < p; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    double rho = 0.0;
    for (int i = 0; i < p; ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    return rho;
}

double matrix_spectral_radius(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    double rho = 0.0;
    for (int i = 0; i < m.rows(); ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
    return rho;
}

// Yule-Walker system for gamma_0..gamma_p of an AR(p) model.
std::vector<double> arp_base_gammas(const std::vector<double>& a, double sigma2) {
    const int p = static_cast<int>(a.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p + 1, p + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(p + 1);
    rhs(0) = sigma2;
    A(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) A(0, j) -= a[static_cast<std::size_t>(j - 1)];
    for (int k = 1; k <= p; ++k) {
        A(k, k) += 1.0;
        for (int j = 1; j <= p; ++j) A(k, std::abs(k - j)) -= a[static_cast<std::size_t>(j - 1)];
    }
    Eigen::VectorXd g = A.partialPivLu().solve(rhs);
    return std::vector<double>(g.data(), g.data() + p + 1);
}

std::vector<double> maq_gammas(const std::vector<double>& b, double sigma2) {
    const long q = static_cast<long>(b.size());
    std::vector<double> g(static_cast<std::size_t>(q) + 1, 0.0);
    for (long k = 0; k <= q; ++k) {
        double acc = 0.0;
        for (long j = 0; j + k <= q; ++j) {
            const double bj = (j == 0) ? 1.0 : b[static_cast<std::size_t>(j - 1)];
            const double bjk = (j + k == 0) ? 1.0 : b[static_cast<std::size_t>(j + k - 1)];
            acc += bj * bjk;
        }
        g[static_cast<std::size_t>(k)] = sigma2 * acc;
    }
    return g;
}

// Sequential generator of model autocovariances gamma_1, gamma_2, ...
// O(1) per step for every scalar kind.
class GammaSeq {
public:
    GammaSeq(ModelKind kind, const std::vector<double>& params, double sigma2,
             const std::vector<double>& base)
        : kind_(kind), params_(params), base_(base) {
        switch (kind_) {
            case ModelKind::AR1:
                cur_ = sigma2 / (1.0 - params_[0] * params_[0]);
                break;
            case ModelKind::ARMA11:
                // cur_ holds gamma_1; later steps multiply by a.
                cur_ = sigma2 * (params_[0] + params_[1]) * (1.0 + params_[0] * params_[1]) /
                       (1.0 - params_[0] * params_[0]);
                break;
            case ModelKind::MAq:
                break;
            case ModelKind::ARp:
                buf_ = base_;  // gamma_0..gamma_p from Yule-Walker
                break;
            default:
                throw std::logic_error("GammaSeq: scalar kinds only");
        }
    }

    double next() {
        ++k_;
        switch (kind_) {
            case ModelKind::AR1:
                cur_ *= params_[0];
                return cur_;
            case ModelKind::ARMA11:
                if (k_ > 1) cur_ *= params_[0];
                return cur_;
            case ModelKind::MAq:
                return k_ < static_cast<long>(base_.size()) ? base_[static_cast<std::size_t>(k_)]
                                                            : 0.0;
            case ModelKind::ARp: {
                const long p = static_cast<long>(params_.size());
                if (k_ < static_cast<long>(buf_.size())) return buf_[static_cast<std::size_t>(k_)];
                // buf_ holds the previous p+1 autocovariances ending at k_-1.
                double g = 0.0;
                for (long j = 0; j < p; ++j) {
                    g += params_[static_cast<std::size_t>(j)] *
                         buf_[buf_.size() - 1 - static_cast<std::size_t>(j)];
                }
                buf_.erase(buf_.begin());
                buf_.push_back(g);
                return g;
            }
            default:
                return 0.0;
        }
    }

    bool finite_memory() const { return kind_ == ModelKind::MAq; }
    long memory() const { return static_cast<long>(base_.size()) - 1; }

private:
    ModelKind kind_;
    const std::vector<double>& params_;
    std::vector<double> base_;
    std::vector<double> buf_;
    double cur_ = 0.0;
    long k_ = 0;
};

}  // namespace

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::AR1: return "AR1";
        case ModelKind::ARMA11: return "ARMA11";
        case ModelKind::MAq: return "MAq";
        case ModelKind::ARp: return "ARp";
        case ModelKind::VAR1: return "VAR1";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "AR1") return ModelKind::AR1;
    if (s == "ARMA11") return ModelKind::ARMA11;
    if (s == "MAq") return ModelKind::MAq;
    if (s == "ARp") return ModelKind::ARp;
    if (s == "VAR1") return ModelKind::VAR1;
    throw std::invalid_argument("unknown model kind: " + s);
}

ColoringModel ColoringModel::ar1(double phi, double sigma2) {
    if (!(std::abs(phi) < 1.0)) throw std::invalid_argument("AR1 requires |phi| < 1");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("AR1 requires sigma2 > 0");
    ColoringModel m;
    m.kind_ = ModelKind::AR1;
    m.params_ = {phi};
    m.sigma2_ = sigma2;
    return m;
}

ColoringModel ColoringModel::arma11(double a, double b, double sigma2) {
    if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0)) {
        throw std::invalid_argument("ARMA11 requires |a| < 1 and |b| < 1");
    }
    if (!(sigma2 > 0.0)) throw std::invalid_argument("ARMA11 requires sigma2 > 0");
    ColoringModel m;
    m.kind_ = ModelKind::ARMA11;
    m.params_ = {a, b};
    m.sigma2_ = sigma2;
    return m;
}

ColoringModel ColoringModel::maq(std::vector<double> b, double sigma2) {
    if (b.empty()) throw std::invalid_argument("MAq requires q >= 1");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("MAq requires sigma2 > 0");
    ColoringModel m;
    m.kind_ = ModelKind::MAq;
    m.params_ = std::move(b);
    m.sigma2_ = sigma2;
    return m;
}

ColoringModel ColoringModel::arp(std::vector<double> a, double sigma2) {
    if (a.empty()) throw std::invalid_argument("ARp requires p >= 1");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("ARp requires sigma2 > 0");
    if (companion_spectral_radius(a) >= 1.0) {
        throw std::invalid_argument("ARp coefficients are non-stationary");
    }
    ColoringModel m;
    m.kind_ = ModelKind::ARp;
    m.params_ = std::move(a);
    m.sigma2_ = sigma2;
    return m;
}

ColoringModel ColoringModel::var1(Eigen::MatrixXd phi, Eigen::MatrixXd sigma_z) {
    if (phi.rows() != phi.cols() || sigma_z.rows() != sigma_z.cols() ||
        phi.rows() != sigma_z.rows() || phi.rows() < 1) {
        throw std::invalid_argument("VAR1 requires square d x d Phi and Sigma_z");
    }
    if (matrix_spectral_radius(phi) >= 1.0) {
        throw std::invalid_argument("VAR1 coefficient matrix is non-stationary");
    }
    ColoringModel m;
    m.kind_ = ModelKind::VAR1;
    m.phi_mat_ = std::move(phi);
    m.sigma_mat_ = 0.5 * (sigma_z + sigma_z.transpose());
    const int d = static_cast<int>(m.phi_mat_.rows());
    // vec(Gamma_0) = (I - Phi (x) Phi)^{-1} vec(Sigma_z)
    Eigen::MatrixXd kron = Eigen::kroneckerProduct(m.phi_mat_, m.phi_mat_);
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(d * d, d * d) - kron;
    Eigen::VectorXd vec_sigma(Eigen::Map<const Eigen::VectorXd>(m.sigma_mat_.data(), d * d));
    Eigen::VectorXd vec_gamma = lhs.partialPivLu().solve(vec_sigma);
    Eigen::MatrixXd gamma0 = Eigen::Map<Eigen::MatrixXd>(vec_gamma.data(), d, d);
    m.gamma0_mat_ = 0.5 * (gamma0 + gamma0.transpose());
    return m;
}

double ColoringModel::autocov(long k) const {
    const long ak = std::labs(k);
    switch (kind_) {
        case ModelKind::AR1: {
            const double phi = params_[0];
            return sigma2_ * std::pow(phi, static_cast<double>(ak)) / (1.0 - phi * phi);
        }
        case ModelKind::ARMA11: {
            const double a = params_[0], b = params_[1];
            if (ak == 0) return sigma2_ * (1.0 + b * b + 2.0 * a * b) / (1.0 - a * a);
            const double g1 = sigma2_ * (a + b) * (1.0 + a * b) / (1.0 - a * a);
            return g1 * std::pow(a, static_cast<double>(ak - 1));
        }
        case ModelKind::MAq: {
            const long q = static_cast<long>(params_.size());
            if (ak > q) return 0.0;
            double acc = 0.0;
            for (long j = 0; j + ak <= q; ++j) {
                const double bj = (j == 0) ? 1.0 : params_[static_cast<std::size_t>(j - 1)];
                const double bjk =
                    (j + ak == 0) ? 1.0 : params_[static_cast<std::size_t>(j + ak - 1)];
                acc += bj * bjk;
            }
            return sigma2_ * acc;
        }
        case ModelKind::ARp: {
            const std::vector<double> base = arp_base_gammas(params_, sigma2_);
            const long p = static_cast<long>(params_.size());
            if (ak <= p) return base[static_cast<std::size_t>(ak)];
            std::vector<double> buf(base);
            for (long k2 = p + 1; k2 <= ak; ++k2) {
                double g = 0.0;
                for (long j = 0; j < p; ++j) {
                    g += params_[static_cast<std::size_t>(j)] * buf[buf.size() - 1 - static_cast<std::size_t>(j)];
                }
                buf.push_back(g);
            }
            return buf.back();
        }
        case ModelKind::VAR1:
            throw std::logic_error("autocov: scalar accessor on VAR1 model");
    }
    return 0.0;
}

double ColoringModel::lrv() const {
    switch (kind_) {
        case ModelKind::AR1: {
            const double phi = params_[0];
            return sigma2_ / ((1.0 - phi) * (1.0 - phi));
        }
        case ModelKind::ARMA11: {
            const double a = params_[0], b = params_[1];
            return sigma2_ * (1.0 + b) * (1.0 + b) / ((1.0 - a) * (1.0 - a));
        }
        case ModelKind::MAq: {
            double s = 1.0;
            for (double b : params_) s += b;
            return sigma2_ * s * s;
        }
        case ModelKind::ARp: {
            double s = 1.0;
            for (double a : params_) s -= a;
            return sigma2_ / (s * s);
        }
        case ModelKind::VAR1:
            throw std::logic_error("lrv: scalar accessor on VAR1 model");
    }
    return 0.0;
}

double ColoringModel::vp(int p) const {
    if (p < 1) throw std::invalid_argument("vp requires p >= 1");
    switch (kind_) {
        case ModelKind::AR1: {
            const double phi = params_[0];
            if (p == 1) {
                return 2.0 * sigma2_ * phi /
                       ((1.0 - phi) * (1.0 - phi) * (1.0 - phi) * (1.0 + phi));
            }
            if (p == 2) {
                // 2 gamma_0 * phi (1+phi)/(1-phi)^3
                const double g0 = sigma2_ / (1.0 - phi * phi);
                return 2.0 * g0 * phi * (1.0 + phi) / std::pow(1.0 - phi, 3.0);
            }
            break;
        }
        case ModelKind::ARMA11: {
            if (p == 1) {
                const double a = params_[0], b = params_[1];
                return 2.0 * sigma2_ * (a + b) * (1.0 + a * b) /
                       ((1.0 - a * a) * (1.0 - a) * (1.0 - a));
            }
            break;
        }
        case ModelKind::MAq: {
            auto g = maq_gammas(params_, sigma2_);
            double acc = 0.0;
            for (std::size_t k = 1; k < g.size(); ++k) {
                acc += 2.0 * std::pow(static_cast<double>(k), p) * g[k];
            }
            return acc;
        }
        case ModelKind::ARp:
            break;
        case ModelKind::VAR1:
            throw std::logic_error("vp: scalar accessor on VAR1 model");
    }
    // Truncated summation: tails decay geometrically for every admissible
    // scalar kind.
    std::vector<double> base;
    if (kind_ == ModelKind::ARp) base = arp_base_gammas(params_, sigma2_);
    if (kind_ == ModelKind::MAq) base = maq_gammas(params_, sigma2_);
    GammaSeq seq(kind_, params_, sigma2_, base);
    double acc = 0.0;
    for (long k = 1; k <= kGammaTruncCap; ++k) {
        const double g = seq.next();
        acc += 2.0 * std::pow(static_cast<double>(k), p) * g;
        if (std::abs(g) < kGammaTruncTol && k > 8) break;
        if (seq.finite_memory() && k >= seq.memory()) break;
    }
    return acc;
}

double ColoringModel::kappa(int p) const { return vp(p) / lrv(); }

double eta_ar1_bartlett(double phi, long ell) {
    if (ell < 1) throw std::invalid_argument("eta_ar1_bartlett requires ell >= 1");
    if (ell == 1) return (1.0 + phi) / (1.0 - phi);
    const double l = static_cast<double>(ell);
    const double denom =
        2.0 * std::pow(phi, static_cast<double>(ell + 1)) - 2.0 * phi - l * phi * phi + l;
    return l * (1.0 - phi * phi) / denom;
}

double ColoringModel::M(const KernelSpec& K, long ell) const {
    if (ell < 1) throw std::invalid_argument("M requires ell >= 1");
    if (kind_ == ModelKind::VAR1) throw std::logic_error("M: scalar accessor on VAR1 model");
    if (kind_ == ModelKind::AR1 && K.name == "bartlett") {
        return lrv() / eta_ar1_bartlett(params_[0], ell);
    }
    if (kind_ == ModelKind::AR1 && K.name == "truncated") {
        const double phi = params_[0];
        const double g0 = sigma2_ / (1.0 - phi * phi);
        return g0 * (1.0 + phi - 2.0 * std::pow(phi, static_cast<double>(ell + 1))) /
               (1.0 - phi);
    }
    long kmax = kGammaTruncCap;
    const bool bounded = std::isfinite(K.support);
    if (bounded) {
        kmax = static_cast<long>(std::floor(static_cast<double>(ell) * K.support + 1e-9));
    }
    std::vector<double> base;
    if (kind_ == ModelKind::ARp) base = arp_base_gammas(params_, sigma2_);
    if (kind_ == ModelKind::MAq) base = maq_gammas(params_, sigma2_);
    GammaSeq seq(kind_, params_, sigma2_, base);
    double acc = autocov(0);
    for (long k = 1; k <= kmax; ++k) {
        const double g = seq.next();
        acc += 2.0 * K(static_cast<double>(k) / static_cast<double>(ell)) * g;
        if (!bounded && std::abs(g) < kGammaTruncTol && k > 8) break;
        if (seq.finite_memory() && k >= seq.memory()) break;
    }
    return acc;
}

double ColoringModel::finite_sample_lrv(long n) const {
    if (n < 2) throw std::invalid_argument("finite_sample_lrv requires n >= 2");
    if (kind_ == ModelKind::VAR1) {
        throw std::logic_error("finite_sample_lrv: scalar accessor on VAR1 model");
    }
    std::vector<double> base;
    if (kind_ == ModelKind::ARp) base = arp_base_gammas(params_, sigma2_);
    if (kind_ == ModelKind::MAq) base = maq_gammas(params_, sigma2_);
    GammaSeq seq(kind_, params_, sigma2_, base);
    const double g0 = autocov(0);
    double acc = g0;
    for (long k = 1; k < n; ++k) {
        const double g = seq.next();
        acc += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(n)) * g;
        if (std::abs(g) < 1e-17 * (1.0 + std::abs(g0)) && k > 8) break;
        if (seq.finite_memory() && k >= seq.memory()) break;
    }
    return acc;
}

Eigen::MatrixXd ColoringModel::autocov_mat(long k) const {
    if (kind_ != ModelKind::VAR1) {
        // Scalar models expose 1x1 matrices for the d=1 reductions.
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = autocov(k);
        return m;
    }
    const long ak = std::labs(k);
    Eigen::MatrixXd cur = gamma0_mat_;
    for (long i = 0; i < ak; ++i) cur = phi_mat_ * cur;
    if (k < 0) return cur.transpose();
    return cur;
}

Eigen::MatrixXd ColoringModel::lrv_mat() const {
    if (kind_ != ModelKind::VAR1) {
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = lrv();
        return m;
    }
    const int d = dim();
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd s =
        (eye - phi_mat_).partialPivLu().solve(phi_mat_ * gamma0_mat_);
    Eigen::MatrixXd v = gamma0_mat_ + s + s.transpose();
    return 0.5 * (v + v.transpose());
}

Eigen::MatrixXd ColoringModel::vp_mat(int p) const {
    if (kind_ != ModelKind::VAR1) {
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = vp(p);
        return m;
    }
    const int d = dim();
    if (p == 1) {
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(eye - phi_mat_);
        Eigen::MatrixXd t = lu.solve(lu.solve(phi_mat_ * gamma0_mat_));
        return t + t.transpose();
    }
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd cur = gamma0_mat_;
    const double scale = gamma0_mat_.norm() + 1.0;
    for (long k = 1; k <= 200000; ++k) {
        cur = phi_mat_ * cur;
        const double w = std::pow(static_cast<double>(k), p);
        acc += w * (cur + cur.transpose());
        if (cur.norm() < 1e-16 * scale) break;
    }
    return acc;
}

Eigen::MatrixXd ColoringModel::M_mat(const KernelSpec& K, long ell) const {
    if (ell < 1) throw std::invalid_argument("M_mat requires ell >= 1");
    if (kind_ != ModelKind::VAR1) {
        Eigen::MatrixXd m(1, 1);
        m(0, 0) = M(K, ell);
        return m;
    }
    long kmax = 200000;
    if (std::isfinite(K.support)) {
        kmax = static_cast<long>(std::floor(static_cast<double>(ell) * K.support + 1e-9));
    }
    Eigen::MatrixXd acc = K(0.0) * gamma0_mat_;
    Eigen::MatrixXd cur = gamma0_mat_;
    const double scale = gamma0_mat_.norm() + 1.0;
    for (long k = 1; k <= kmax; ++k) {
        cur = phi_mat_ * cur;
        const double w = K(static_cast<double>(k) / static_cast<double>(ell));
        acc += w * (cur + cur.transpose());
        if (!std::isfinite(K.support) && cur.norm() < 1e-16 * scale) break;
    }
    return acc;
}

ModelSummary summarize(const ColoringModel& m, int p) {
    ModelSummary s;
    s.v = m.lrv();
    s.v_p = m.vp(p);
    s.kappa_p = s.v_p / s.v;
    return s;
}

// --- Fitting ---------------------------------------------------------------

ColoringModel fit_ar1(const AutocovTable& acf, double clamp) {
    if (acf.max_lag() < 1) throw std::invalid_argument("fit_ar1 requires lag-1 autocovariance");
    const double g0 = acf[0];
    if (!(g0 > 0.0)) throw std::invalid_argument("fit_ar1: degenerate series (gamma_0 <= 0)");
    double phi = acf[1] / g0;
    phi = std::clamp(phi, -clamp, clamp);
    // Innovation variance calibrated so the model gamma_0 equals gamma~_0.
    return ColoringModel::ar1(phi, g0 * (1.0 - phi * phi));
}

ColoringModel fit_ar1(const Series& s, double clamp) {
    return fit_ar1(sample_autocov(s, 1), clamp);
}

namespace {

struct CssResult {
    double a = 0.0, b = 0.0, sse = 0.0;
    bool converged = false;
};

double css_objective(const std::vector<double>& x, double xbar, double a, double b) {
    double e_prev = 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double e = (x[i] - xbar) - a * (x[i - 1] - xbar) - b * e_prev;
        acc += e * e;
        e_prev = e;
    }
    return acc;
}

CssResult arma11_css(const std::vector<double>& x, double xbar, double a0) {
    constexpr double kBound = 1.0 - kAdmissibleMargin;
    auto to_param = [](double u) { return kBound * std::tanh(u); };
    auto objective = [&](const Eigen::Vector2d& u) {
        return css_objective(x, xbar, to_param(u(0)), to_param(u(1)));
    };
    const double a0c = std::clamp(a0, -kBound + 1e-9, kBound - 1e-9);
    Eigen::Vector2d start(std::atanh(a0c / kBound), 0.0);

    // Nelder-Mead on the unconstrained tanh-reparameterized surface.
    std::array<Eigen::Vector2d, 3> simplex = {start, start + Eigen::Vector2d(0.25, 0.0),
                                              start + Eigen::Vector2d(0.0, 0.25)};
    std::array<double, 3> f;
    for (int i = 0; i < 3; ++i) f[static_cast<std::size_t>(i)] = objective(simplex[static_cast<std::size_t>(i)]);

    bool converged = false;
    for (int iter = 0; iter < 500; ++iter) {
        std::array<int, 3> idx = {0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int l, int r) {
            return f[static_cast<std::size_t>(l)] < f[static_cast<std::size_t>(r)];
        });
        const int lo = idx[0], mid = idx[1], hi = idx[2];
        const double spread = std::abs(f[static_cast<std::size_t>(hi)] - f[static_cast<std::size_t>(lo)]);
        const double size = (simplex[static_cast<std::size_t>(hi)] - simplex[static_cast<std::size_t>(lo)]).norm() +
                            (simplex[static_cast<std::size_t>(mid)] - simplex[static_cast<std::size_t>(lo)]).norm();
        if (spread <= 1e-12 * (1.0 + std::abs(f[static_cast<std::size_t>(lo)])) && size <= 1e-9) {
            converged = true;
            break;
        }
        const Eigen::Vector2d centroid =
            0.5 * (simplex[static_cast<std::size_t>(lo)] + simplex[static_cast<std::size_t>(mid)]);
        const Eigen::Vector2d refl = centroid + (centroid - simplex[static_cast<std::size_t>(hi)]);
        const double f_refl = objective(refl);
        if (f_refl < f[static_cast<std::size_t>(lo)]) {
            const Eigen::Vector2d expand = centroid + 2.0 * (centroid - simplex[static_cast<std::size_t>(hi)]);
            const double f_exp = objective(expand);
            if (f_exp < f_refl) {
                simplex[static_cast<std::size_t>(hi)] = expand;
                f[static_cast<std::size_t>(hi)] = f_exp;
            } else {
                simplex[static_cast<std::size_t>(hi)] = refl;
                f[static_cast<std::size_t>(hi)] = f_refl;
            }
        } else if (f_refl < f[static_cast<std::size_t>(mid)]) {
            simplex[static_cast<std::size_t>(hi)] = refl;
            f[static_cast<std::size_t>(hi)] = f_refl;
        } else {
            const Eigen::Vector2d contract =
                centroid + 0.5 * (simplex[static_cast<std::size_t>(hi)] - centroid);
            const double f_con = objective(contract);
            if (f_con < f[static_cast<std::size_t>(hi)]) {
                simplex[static_cast<std::size_t>(hi)] = contract;
                f[static_cast<std::size_t>(hi)] = f_con;
            } else {
                for (int i : {mid, hi}) {
                    simplex[static_cast<std::size_t>(i)] =
                        simplex[static_cast<std::size_t>(lo)] +
                        0.5 * (simplex[static_cast<std::size_t>(i)] - simplex[static_cast<std::size_t>(lo)]);
                    f[static_cast<std::size_t>(i)] = objective(simplex[static_cast<std::size_t>(i)]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (f[static_cast<std::size_t>(i)] < f[static_cast<std::size_t>(best)]) best = i;
    }
    CssResult res;
    res.a = to_param(simplex[static_cast<std::size_t>(best)](0));
    res.b = to_param(simplex[static_cast<std::size_t>(best)](1));
    res.sse = f[static_cast<std::size_t>(best)];
    res.converged = converged;
    return res;
}

}  // namespace

namespace {

// Golden-section CSS minimization in a alone (b = 0).
double ar1_css_min(const std::vector<double>& x, double xbar, double* sse_out) {
    constexpr double kBound = 1.0 - kAdmissibleMargin;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = -kBound, hi = kBound;
    double c = hi - gr * (hi - lo);
    double d = lo + gr * (hi - lo);
    double fc = css_objective(x, xbar, c, 0.0);
    double fd = css_objective(x, xbar, d, 0.0);
    for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = css_objective(x, xbar, c, 0.0);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = css_objective(x, xbar, d, 0.0);
        }
    }
    const double a = 0.5 * (lo + hi);
    if (sse_out) *sse_out = css_objective(x, xbar, a, 0.0);
    return a;
}

}  // namespace

ColoringModel fit_arma11(const Series& s, bool ar1_pretest) {
    const int n = s.size();
    if (n < 10) throw std::invalid_argument("fit_arma11 requires n >= 10");
    AutocovTable acf = sample_autocov(s, 1);
    if (!(acf[0] > 0.0)) throw std::invalid_argument("fit_arma11: degenerate series");
    const double phi0 =
        std::clamp(acf[1] / acf[0], -1.0 + kAdmissibleMargin, 1.0 - kAdmissibleMargin);

    // The CSS surface has a flat near-cancellation ridge (a ~ -b) whenever
    // the MA part adds little; the nested likelihood-ratio pretest against
    // the b = 0 submodel pins the fit to the identified representative.
    double sse_ar = 0.0;
    const double a_ar = ar1_css_min(s.values(), s.mean(), &sse_ar);
    CssResult css = arma11_css(s.values(), s.mean(), ar1_pretest ? a_ar : phi0);
    if (!css.converged) {
        ColoringModel fallback = ColoringModel::arma11(
            phi0, 0.0, std::max(css_objective(s.values(), s.mean(), phi0, 0.0), 1e-300) /
                           static_cast<double>(n - 1));
        fallback.fit_warning = true;
        return fallback;
    }
    if (ar1_pretest) {
        const double lr = static_cast<double>(n) * std::log(std::max(sse_ar, 1e-300) /
                                                            std::max(css.sse, 1e-300));
        if (!(lr > 3.841)) {  // chi-square(1), 5%
            return ColoringModel::arma11(
                a_ar, 0.0, std::max(sse_ar, 1e-300) / static_cast<double>(n - 1));
        }
    }
    return ColoringModel::arma11(css.a, css.b,
                                 std::max(css.sse, 1e-300) / static_cast<double>(n - 1));
}

ColoringModel fit_maq(const Series& s, int q) {
    const int n = s.size();
    if (q < 1) throw std::invalid_argument("fit_maq requires q >= 1");
    if (n < 2 * q + 2) throw std::invalid_argument("fit_maq: series too short for order q");
    const int m = std::min(n - 2, std::max(2 * q, static_cast<int>(std::ceil(1.5 * std::sqrt(n)))));
    AutocovTable acf = sample_autocov(s, m);
    if (!(acf[0] > 0.0)) throw std::invalid_argument("fit_maq: degenerate series");

    // Innovations algorithm on the sample autocovariances.
    std::vector<std::vector<double>> theta(static_cast<std::size_t>(m) + 1);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    v[0] = acf[0];
    int last_stable = 0;
    for (int mm = 1; mm <= m; ++mm) {
        theta[static_cast<std::size_t>(mm)].assign(static_cast<std::size_t>(mm) + 1, 0.0);
        for (int k = 0; k < mm; ++k) {
            double acc = acf[mm - k];
            for (int j = 0; j < k; ++j) {
                acc -= theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(k - j)] *
                       theta[static_cast<std::size_t>(mm)][static_cast<std::size_t>(mm - j)] *
                       v[static_cast<std::size_t>(j)];
            }
            theta[static_cast<std::size_t>(mm)][static_cast<std::size_t>(mm - k)] =
                acc / v[static_cast<std::size_t>(k)];
        }
        double vv = acf[0];
        for (int j = 0; j < mm; ++j) {
            const double t = theta[static_cast<std::size_t>(mm)][static_cast<std::size_t>(mm - j)];
            vv -= t * t * v[static_cast<std::size_t>(j)];
        }
        if (!(vv > 0.0)) break;
        v[static_cast<std::size_t>(mm)] = vv;
        last_stable = mm;
    }
    if (last_stable < q) throw std::runtime_error("fit_maq: innovations algorithm degenerated");
    std::vector<double> b(static_cast<std::size_t>(q));
    for (int j = 1; j <= q; ++j) {
        b[static_cast<std::size_t>(j - 1)] =
            theta[static_cast<std::size_t>(last_stable)][static_cast<std::size_t>(j)];
    }
    ColoringModel model = ColoringModel::maq(std::move(b), v[static_cast<std::size_t>(last_stable)]);
    model.fit_warning = (last_stable < m);
    return model;
}

ColoringModel fit_arp(const Series& s, int p) {
    const int n = s.size();
    if (p < 1) throw std::invalid_argument("fit_arp requires p >= 1");
    if (n < 2 * p + 2) throw std::invalid_argument("fit_arp: series too short for order p");
    AutocovTable acf = sample_autocov(s, p);
    if (!(acf[0] > 0.0)) throw std::invalid_argument("fit_arp: degenerate series");
    Eigen::MatrixXd R(p, p);
    Eigen::VectorXd r(p);
    for (int i = 0; i < p; ++i) {
        r(i) = acf[i + 1];
        for (int j = 0; j < p; ++j) R(i, j) = acf[std::abs(i - j)];
    }
    Eigen::VectorXd a = R.ldlt().solve(r);
    std::vector<double> coef(a.data(), a.data() + p);
    double rho = companion_spectral_radius(coef);
    if (rho >= 1.0 - kAdmissibleMargin) {
        // Scale the roots inside the unit circle: a_j -> a_j s^j.
        const double scale = (1.0 - kAdmissibleMargin) / rho;
        double sj = 1.0;
        for (auto& c : coef) {
            sj *= scale;
            c *= sj;
        }
    }
    double sigma2 = acf[0];
    for (int j = 0; j < p; ++j) sigma2 -= coef[static_cast<std::size_t>(j)] * acf[j + 1];
    sigma2 = std::max(sigma2, 1e-12 * acf[0]);
    return ColoringModel::arp(std::move(coef), sigma2);
}

ColoringModel fit_var1(const MultiSeries& s) {
    const int n = s.size();
    const int d = s.dim();
    Eigen::MatrixXd g0 = sample_cross_autocov(s, 0);
    Eigen::MatrixXd g1 = sample_cross_autocov(s, 1);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g0);
    if (!lu.isInvertible()) {
        throw std::runtime_error("fit_var1: singular lag-0 autocovariance matrix");
    }
    // Phi = Gamma_1 Gamma_0^{-1}  (least-squares coefficient of X_i on X_{i-1}).
    Eigen::MatrixXd phi = lu.solve(g1.transpose()).transpose();
    const double rho = matrix_spectral_radius(phi);
    if (rho >= 1.0 - kAdmissibleMargin) {
        phi *= (1.0 - kAdmissibleMargin) / rho;
    }
    const Eigen::MatrixXd& x = s.values();
    Eigen::MatrixXd z(n - 1, d);
    for (int i = 1; i < n; ++i) {
        z.row(i - 1) = x.row(i) - (phi * x.row(i - 1).transpose()).transpose();
    }
    Eigen::RowVectorXd zbar = z.colwise().mean();
    Eigen::MatrixXd centered = z.rowwise() - zbar;
    Eigen::MatrixXd sigma_z = centered.transpose() * centered / static_cast<double>(n - 1);
    return ColoringModel::var1(std::move(phi), std::move(sigma_z));
}

// --- JSON round-trip --------------------------------------------------------

std::string ColoringModel::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind_);
    if (kind_ == ModelKind::VAR1) {
        const int d = dim();
        j["d"] = d;
        std::vector<double> phi_flat, sig_flat;
        for (int i = 0; i < d; ++i) {
            for (int jj = 0; jj < d; ++jj) {
                phi_flat.push_back(phi_mat_(i, jj));
                sig_flat.push_back(sigma_mat_(i, jj));
            }
        }
        j["params"] = phi_flat;
        j["innovation_var"] = sig_flat;
    } else {
        j["params"] = params_;
        j["innovation_var"] = sigma2_;
    }
    return j.dump();
}

ColoringModel ColoringModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (kind == ModelKind::VAR1) {
        const int d = j.at("d").get<int>();
        auto phi_flat = j.at("params").get<std::vector<double>>();
        auto sig_flat = j.at("innovation_var").get<std::vector<double>>();
        if (static_cast<int>(phi_flat.size()) != d * d ||
            static_cast<int>(sig_flat.size()) != d * d) {
            throw std::invalid_argument("VAR1 JSON: parameter length mismatch");
        }
        Eigen::MatrixXd phi(d, d), sig(d, d);
        for (int i = 0; i < d; ++i) {
            for (int jj = 0; jj < d; ++jj) {
                phi(i, jj) = phi_flat[static_cast<std::size_t>(i * d + jj)];
                sig(i, jj) = sig_flat[static_cast<std::size_t>(i * d + jj)];
            }
        }
        return var1(std::move(phi), std::move(sig));
    }
    auto params = j.at("params").get<std::vector<double>>();
    const double sigma2 = j.at("innovation_var").get<double>();
    switch (kind) {
        case ModelKind::AR1:
            if (params.size() != 1) throw std::invalid_argument("AR1 JSON: expected 1 parameter");
            return ar1(params[0], sigma2);
        case ModelKind::ARMA11:
            if (params.size() != 2) throw std::invalid_argument("ARMA11 JSON: expected 2 parameters");
            return arma11(params[0], params[1], sigma2);
        case ModelKind::MAq:
            return maq(std::move(params), sigma2);
        case ModelKind::ARp:
            return arp(std::move(params), sigma2);
        default:
            throw std::invalid_argument("unsupported model kind in JSON");
    }
}

}  // namespace postcolor
