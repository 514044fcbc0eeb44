#include "postcolor/generators.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace postcolor {

namespace {

constexpr int kBurnIn = 1000;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

Generator Generator::arma11(double a, double b, std::uint64_t seed, double innov_sd) {
    require(std::abs(a) < 1.0, "ARMA11 generator requires |a| < 1");
    require(std::abs(b) < 1.0, "ARMA11 generator requires |b| < 1");
    require(innov_sd > 0.0, "ARMA11 generator requires positive innovation sd");
    Generator g;
    g.kind = Kind::ARMA11;
    g.params = {a, b};
    g.innov_sd = innov_sd;
    g.seed = seed;
    return g;
}

Generator Generator::ar2(double a1, double a2, std::uint64_t seed) {
    require(std::abs(a2) < 1.0 && a2 + a1 < 1.0 && a2 - a1 < 1.0,
            "AR2 generator requires |a2|<1, a2+a1<1, a2-a1<1");
    Generator g;
    g.kind = Kind::AR2;
    g.params = {a1, a2};
    g.seed = seed;
    return g;
}

Generator Generator::ma2(double b1, double b2, std::uint64_t seed) {
    Generator g;
    g.kind = Kind::MA2;
    g.params = {b1, b2};
    g.seed = seed;
    return g;
}

Generator Generator::tar(double rho1, double rho2, std::uint64_t seed) {
    require(std::max(rho1, rho2) < 1.0, "TAR generator requires max(rho1, rho2) < 1");
    require(std::abs(rho1) < 1.0 && std::abs(rho2) < 1.0,
            "TAR generator requires rho1, rho2 in (-1,1)");
    Generator g;
    g.kind = Kind::TAR;
    g.params = {rho1, rho2};
    g.seed = seed;
    return g;
}

Generator Generator::geom_ar1(double phi, std::uint64_t seed) {
    require(std::abs(phi) < 1.0, "GeomAR1 generator requires |phi| < 1");
    Generator g;
    g.kind = Kind::GeomAR1;
    g.params = {phi};
    g.seed = seed;
    return g;
}

Generator Generator::varma11(Eigen::MatrixXd Phi, Eigen::MatrixXd Ups,
                             Eigen::MatrixXd Sigma_eps, std::uint64_t seed) {
    require(Phi.rows() == Phi.cols() && Ups.rows() == Ups.cols() &&
                Sigma_eps.rows() == Sigma_eps.cols() && Phi.rows() == Ups.rows() &&
                Phi.rows() == Sigma_eps.rows(),
            "VARMA11 generator requires conformable square matrices");
    Eigen::EigenSolver<Eigen::MatrixXd> es(Phi, false);
    for (int i = 0; i < Phi.rows(); ++i) {
        require(std::abs(es.eigenvalues()(i)) < 1.0,
                "VARMA11 generator requires a stationary Phi");
    }
    Generator g;
    g.kind = Kind::VARMA11;
    g.Phi = std::move(Phi);
    g.Ups = std::move(Ups);
    g.Sigma_eps = std::move(Sigma_eps);
    g.seed = seed;
    return g;
}

Generator Generator::mean_shift(double mu, Generator inner) {
    require(inner.kind != Kind::MeanShift, "MeanShift generator cannot nest");
    require(!inner.multivariate(), "MeanShift generator requires a scalar inner kind");
    Generator g;
    g.kind = Kind::MeanShift;
    g.mu = mu;
    g.seed = inner.seed;
    g.inner = std::make_shared<Generator>(std::move(inner));
    return g;
}

std::string Generator::describe() const {
    std::ostringstream ss;
    switch (kind) {
        case Kind::ARMA11: ss << "arma11(" << params[0] << "," << params[1] << ")"; break;
        case Kind::AR2: ss << "ar2(" << params[0] << "," << params[1] << ")"; break;
        case Kind::MA2: ss << "ma2(" << params[0] << "," << params[1] << ")"; break;
        case Kind::TAR: ss << "tar(" << params[0] << "," << params[1] << ")"; break;
        case Kind::GeomAR1: ss << "geomar1(" << params[0] << ")"; break;
        case Kind::VARMA11: ss << "varma11(d=" << Phi.rows() << ")"; break;
        case Kind::MeanShift: ss << "meanshift(" << mu << "," << inner->describe() << ")"; break;
    }
    return ss.str();
}

Series generate(const Generator& g, int n, Rng& rng) {
    require(n >= 2, "generate requires n >= 2");
    require(!g.multivariate(), "generate: use generate_multi for VARMA11");
    std::vector<double> out(static_cast<std::size_t>(n));
    const int total = n + kBurnIn;
    switch (g.kind) {
        case Generator::Kind::ARMA11: {
            const double a = g.params[0], b = g.params[1];
            double x = 0.0, e_prev = 0.0;
            for (int i = 0; i < total; ++i) {
                const double e = g.innov_sd * rng.normal();
                x = a * x + e + b * e_prev;
                e_prev = e;
                if (i >= kBurnIn) out[static_cast<std::size_t>(i - kBurnIn)] = x;
            }
            break;
        }
        case Generator::Kind::AR2: {
            const double a1 = g.params[0], a2 = g.params[1];
            double x1 = 0.0, x2 = 0.0;
            for (int i = 0; i < total; ++i) {
                const double x = a1 * x1 + a2 * x2 + g.innov_sd * rng.normal();
                x2 = x1;
                x1 = x;
                if (i >= kBurnIn) out[static_cast<std::size_t>(i - kBurnIn)] = x;
            }
            break;
        }
        case Generator::Kind::MA2: {
            const double b1 = g.params[0], b2 = g.params[1];
            double e1 = 0.0, e2 = 0.0;
            for (int i = 0; i < total; ++i) {
                const double e = g.innov_sd * rng.normal();
                const double x = e + b1 * e1 + b2 * e2;
                e2 = e1;
                e1 = e;
                if (i >= kBurnIn) out[static_cast<std::size_t>(i - kBurnIn)] = x;
            }
            break;
        }
        case Generator::Kind::TAR: {
            const double r1 = g.params[0], r2 = g.params[1];
            double x = 0.0;
            for (int i = 0; i < total; ++i) {
                x = r1 * std::max(x, 0.0) + r2 * std::min(0.0, x) + g.innov_sd * rng.normal();
                if (i >= kBurnIn) out[static_cast<std::size_t>(i - kBurnIn)] = x;
            }
            break;
        }
        case Generator::Kind::GeomAR1: {
            const double phi = g.params[0];
            double y = 0.0;
            for (int i = 0; i < total; ++i) {
                y = phi * y + g.innov_sd * rng.normal();
                if (i >= kBurnIn) out[static_cast<std::size_t>(i - kBurnIn)] = std::exp(y);
            }
            break;
        }
        case Generator::Kind::MeanShift: {
            Series base = generate(*g.inner, n, rng);
            for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = g.mu + base[i];
            break;
        }
        default:
            throw std::logic_error("generate: unhandled kind");
    }
    return Series(std::move(out));
}

Series generate(const Generator& g, int n) {
    Rng rng(g.seed);
    return generate(g, n, rng);
}

MultiSeries generate_multi(const Generator& g, int n, Rng& rng) {
    require(n >= 2, "generate_multi requires n >= 2");
    require(g.multivariate(), "generate_multi: scalar generator");
    const int d = static_cast<int>(g.Phi.rows());
    const Eigen::MatrixXd chol = Eigen::LLT<Eigen::MatrixXd>(g.Sigma_eps).matrixL();
    Eigen::MatrixXd out(n, d);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd eps_prev = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd z(d);
    const int total = n + kBurnIn;
    for (int i = 0; i < total; ++i) {
        for (int j = 0; j < d; ++j) z(j) = rng.normal();
        Eigen::VectorXd eps = chol * z;
        x = g.Phi * x + g.Ups * eps_prev + eps;
        eps_prev = eps;
        if (i >= kBurnIn) out.row(i - kBurnIn) = x.transpose();
    }
    return MultiSeries(std::move(out));
}

MultiSeries generate_multi(const Generator& g, int n) {
    Rng rng(g.seed);
    return generate_multi(g, n, rng);
}

double arma11_gamma(double a, double b, long k) {
    const long ak = std::labs(k);
    if (ak == 0) return (1.0 + b * b + 2.0 * a * b) / (1.0 - a * a);
    const double g1 = (a + b) * (1.0 + a * b) / (1.0 - a * a);
    return g1 * std::pow(a, static_cast<double>(ak - 1));
}

double arma11_lrv(double a, double b) {
    return (1.0 + b) * (1.0 + b) / ((1.0 - a) * (1.0 - a));
}

double arma11_kappa1(double a, double b) {
    return 2.0 * (a + b) * (1.0 + a * b) / ((1.0 + b) * (1.0 + b) * (1.0 - a * a));
}

double arma11_phi_star(double a, double b) {
    return (a + b) * (1.0 + a * b) / (1.0 + b * b + 2.0 * a * b);
}

double arma11_phi_star_z(double a, double b) {
    const double ps = arma11_phi_star(a, b);
    return ps * ps * (ps - a) / (1.0 - ps * ps);
}

double arma11_xi1(double a, double b) {
    const double ps = arma11_phi_star(a, b);
    return arma11_kappa1(a, b) - 2.0 * ps / (1.0 - ps * ps);
}

namespace {

// Batch-means LRV over a long streamed path.
struct BatchMeans {
    double value = 0.0;
    double mc_se = 0.0;
};

BatchMeans batch_means_lrv(const Generator& g, long path_length) {
    const long batch = static_cast<long>(std::floor(std::sqrt(static_cast<double>(path_length))));
    const long num_batches = path_length / batch;
    Rng rng(mix_seed(g.seed, 0x74727574ULL, 0x6c72765fULL));  // dedicated truth stream
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(num_batches));

    // Stream the path without storing it.
    const int chunk = 1 << 16;
    Generator local = g;
    // Inline generation loop with persistent state (mirrors generate()).
    double x = 0.0, e_prev = 0.0, y = 0.0;
    long produced = -static_cast<long>(kBurnIn);
    double batch_sum = 0.0;
    long in_batch = 0;
    double grand_sum = 0.0;
    while (static_cast<long>(means.size()) < num_batches) {
        for (int i = 0; i < chunk && static_cast<long>(means.size()) < num_batches; ++i) {
            double value = 0.0;
            switch (local.kind) {
                case Generator::Kind::TAR: {
                    x = local.params[0] * std::max(x, 0.0) + local.params[1] * std::min(0.0, x) +
                        local.innov_sd * rng.normal();
                    value = x;
                    break;
                }
                case Generator::Kind::GeomAR1: {
                    y = local.params[0] * y + local.innov_sd * rng.normal();
                    value = std::exp(y);
                    break;
                }
                case Generator::Kind::ARMA11: {
                    const double e = local.innov_sd * rng.normal();
                    x = local.params[0] * x + e + local.params[1] * e_prev;
                    e_prev = e;
                    value = x;
                    break;
                }
                default:
                    throw std::logic_error("batch_means_lrv: unsupported kind");
            }
            ++produced;
            if (produced <= 0) continue;
            batch_sum += value;
            grand_sum += value;
            if (++in_batch == batch) {
                means.push_back(batch_sum / static_cast<double>(batch));
                batch_sum = 0.0;
                in_batch = 0;
            }
        }
    }
    const double grand_mean = grand_sum / (static_cast<double>(num_batches) * batch);
    double ss = 0.0;
    for (double m : means) ss += (m - grand_mean) * (m - grand_mean);
    BatchMeans out;
    out.value = static_cast<double>(batch) * ss / static_cast<double>(num_batches - 1);
    out.mc_se = out.value * std::sqrt(2.0 / static_cast<double>(num_batches - 1));
    return out;
}

std::string cache_key(const Generator& g, long path_length) {
    std::ostringstream ss;
    ss << g.describe() << "|sd=" << g.innov_sd << "|seed=" << g.seed << "|N=" << path_length;
    return ss.str();
}

double cached_batch_means(const Generator& g, const std::string& cache_path) {
    const long path_length = 10000000L;
    const std::string key = cache_key(g, path_length);
    nlohmann::json cache = nlohmann::json::object();
    if (!cache_path.empty()) {
        std::ifstream in(cache_path);
        if (in) {
            try {
                in >> cache;
            } catch (...) {
                cache = nlohmann::json::object();
            }
        }
        if (cache.contains(key)) return cache[key]["value"].get<double>();
    }
    BatchMeans bm = batch_means_lrv(g, path_length);
    if (!cache_path.empty()) {
        cache[key] = {{"value", bm.value}, {"mc_se", bm.mc_se}, {"seed", g.seed},
                      {"path_length", path_length}};
        std::ofstream out(cache_path);
        if (out) out << cache.dump(2) << "\n";
    }
    return bm.value;
}

}  // namespace

double true_lrv(const Generator& g, const std::string& cache_path) {
    const double s2 = g.innov_sd * g.innov_sd;
    switch (g.kind) {
        case Generator::Kind::ARMA11:
            return s2 * arma11_lrv(g.params[0], g.params[1]);
        case Generator::Kind::AR2: {
            const double s = 1.0 - g.params[0] - g.params[1];
            return s2 / (s * s);
        }
        case Generator::Kind::MA2: {
            const double s = 1.0 + g.params[0] + g.params[1];
            return s2 * s * s;
        }
        case Generator::Kind::MeanShift:
            return true_lrv(*g.inner, cache_path);
        case Generator::Kind::TAR:
        case Generator::Kind::GeomAR1:
            return cached_batch_means(g, cache_path);
        case Generator::Kind::VARMA11:
            throw std::invalid_argument("true_lrv: use true_lrv_matrix for VARMA11");
    }
    throw std::logic_error("true_lrv: unhandled kind");
}

Eigen::MatrixXd true_lrv_matrix(const Generator& g) {
    require(g.kind == Generator::Kind::VARMA11, "true_lrv_matrix requires VARMA11");
    const int d = static_cast<int>(g.Phi.rows());
    // Gamma_0 solves Gamma_0 = Phi Gamma_0 Phi^T + RHS with
    // RHS = Sigma + (Phi+Ups) Sigma (Phi+Ups)^T - Phi Sigma Phi^T.
    const Eigen::MatrixXd rhs = g.Sigma_eps +
                                (g.Phi + g.Ups) * g.Sigma_eps * (g.Phi + g.Ups).transpose() -
                                g.Phi * g.Sigma_eps * g.Phi.transpose();
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            for (int k = 0; k < d; ++k) {
                for (int l = 0; l < d; ++l) {
                    // (Phi (x) Phi) vec(G) = vec(Phi G Phi^T), column-major vec.
                    lhs(i + j * d, k + l * d) -= g.Phi(i, k) * g.Phi(j, l);
                }
            }
        }
    }
    Eigen::VectorXd vec_rhs(d * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) vec_rhs(i + j * d) = rhs(i, j);
    }
    Eigen::VectorXd vec_gamma = lhs.partialPivLu().solve(vec_rhs);
    Eigen::MatrixXd gamma0(d, d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) gamma0(i, j) = vec_gamma(i + j * d);
    }
    gamma0 = 0.5 * (gamma0 + gamma0.transpose()).eval();
    const Eigen::MatrixXd gamma1 = g.Phi * gamma0 + g.Ups * g.Sigma_eps;
    const Eigen::MatrixXd s =
        (Eigen::MatrixXd::Identity(d, d) - g.Phi).partialPivLu().solve(gamma1);
    Eigen::MatrixXd v = gamma0 + s + s.transpose();
    return 0.5 * (v + v.transpose());
}

}  // namespace postcolor
