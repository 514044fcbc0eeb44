#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "postcolor/rng.hpp"
#include "postcolor/series.hpp"

namespace postcolor {

/// Data-generating process for the simulation experiments.  All scalar
/// kinds use standard normal innovations scaled by innov_sd; a burn-in of
/// 1000 draws is discarded before the retained sample.
struct Generator {
    enum class Kind { ARMA11, AR2, MA2, TAR, GeomAR1, VARMA11, MeanShift };

    Kind kind = Kind::ARMA11;
    std::vector<double> params;
    double innov_sd = 1.0;
    std::uint64_t seed = 0;

    // VARMA11 only.
    Eigen::MatrixXd Phi, Ups, Sigma_eps;

    // MeanShift only.
    double mu = 0.0;
    std::shared_ptr<const Generator> inner;

    static Generator arma11(double a, double b, std::uint64_t seed = 0,
                            double innov_sd = 1.0);
    static Generator ar2(double a1, double a2, std::uint64_t seed = 0);
    static Generator ma2(double b1, double b2, std::uint64_t seed = 0);
    static Generator tar(double rho1, double rho2, std::uint64_t seed = 0);
    static Generator geom_ar1(double phi, std::uint64_t seed = 0);
    static Generator varma11(Eigen::MatrixXd Phi, Eigen::MatrixXd Ups,
                             Eigen::MatrixXd Sigma_eps, std::uint64_t seed = 0);
    static Generator mean_shift(double mu, Generator inner);

    bool multivariate() const { return kind == Kind::VARMA11; }
    std::string describe() const;
};

Series generate(const Generator& g, int n, Rng& rng);
Series generate(const Generator& g, int n);  // rng seeded from g.seed
MultiSeries generate_multi(const Generator& g, int n, Rng& rng);
MultiSeries generate_multi(const Generator& g, int n);

/// Long-run variance of the generator.  Closed forms for the linear kinds;
/// TAR and GeomAR1 fall back to a batch-means estimate over a 1e7-length
/// path, cached in `cache_path` (JSON) when non-empty.
double true_lrv(const Generator& g, const std::string& cache_path = "");

Eigen::MatrixXd true_lrv_matrix(const Generator& g);

// ARMA(1,1) population quantities used for the "true optimal bandwidth"
// policy (unit innovation variance):
double arma11_lrv(double a, double b);
double arma11_gamma(double a, double b, long k);
double arma11_kappa1(double a, double b);
double arma11_phi_star(double a, double b);    // gamma_1/gamma_0
double arma11_phi_star_z(double a, double b);  // lag-1 ratio of the prewhitened series
double arma11_xi1(double a, double b);         // kappa1 - 2 phi*/(1-phi*^2)

}  // namespace postcolor
