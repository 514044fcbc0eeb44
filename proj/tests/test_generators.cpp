#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "postcolor/autocov.hpp"
#include "postcolor/generators.hpp"
#include "postcolor/model.hpp"

using namespace postcolor;

namespace {

// Empirical MC standard error of gamma^_k via segment batching.
struct MomentCheck {
    double estimate;
    double se;
};

MomentCheck segment_autocov(const Series& path, int k, int segments) {
    const int n = path.size();
    const int len = n / segments;
    std::vector<double> vals;
    vals.reserve(static_cast<std::size_t>(segments));
    for (int s = 0; s < segments; ++s) {
        std::vector<double> seg(path.values().begin() + static_cast<long>(s) * len,
                                path.values().begin() + static_cast<long>(s + 1) * len);
        vals.push_back(sample_autocov(Series(std::move(seg)), k)[k]);
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= segments;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    MomentCheck out;
    out.estimate = mean;
    out.se = std::sqrt(ss / (segments - 1.0) / segments);
    return out;
}

}  // namespace

TEST_CASE("generator determinism and basic moments") {
    Generator g = Generator::arma11(0.0, 0.0, 71);
    Series a = generate(g, 1000);
    Series b = generate(g, 1000);
    for (int i = 0; i < 1000; ++i) CHECK(a[i] == b[i]);

    Series big = generate(Generator::arma11(0.0, 0.0, 72), 1000000);
    CHECK(sample_autocov(big, 0)[0] == doctest::Approx(1.0).epsilon(0.01));

    Series ar = generate(Generator::arma11(0.5, 0.0, 73), 1000000);
    AutocovTable acf = sample_autocov(ar, 1);
    CHECK(acf[1] / acf[0] == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(acf[1] / acf[0] - 0.5) < 0.01);
}

TEST_CASE("generator moments match the model autocovariances within 3 SE") {
    struct Case {
        Generator gen;
        ColoringModel model;
    };
    const Case cases[] = {
        {Generator::arma11(0.5, -0.3, 74), ColoringModel::arma11(0.5, -0.3, 1.0)},
        {Generator::ar2(0.4, -0.2, 75), ColoringModel::arp({0.4, -0.2}, 1.0)},
        {Generator::ma2(0.3, 0.2, 76), ColoringModel::maq({0.3, 0.2}, 1.0)},
    };
    for (const auto& c : cases) {
        Series path = generate(c.gen, 1000000);
        for (int k = 0; k <= 3; ++k) {
            MomentCheck mc = segment_autocov(path, k, 100);
            CHECK(std::abs(mc.estimate - c.model.autocov(k)) < 3.0 * mc.se + 1e-9);
        }
    }
}

TEST_CASE("true LRV closed forms") {
    CHECK(true_lrv(Generator::arma11(0.5, 0.0)) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(true_lrv(Generator::ma2(0.3, 0.2)) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(true_lrv(Generator::arma11(-0.5, 0.5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(true_lrv(Generator::ar2(0.4, -0.2)) ==
          doctest::Approx(1.0 / (0.8 * 0.8)).epsilon(1e-14));
    // Scaled innovations multiply the LRV by sd^2.
    CHECK(true_lrv(Generator::arma11(0.5, 0.0, 0, 2.0)) ==
          doctest::Approx(16.0).epsilon(1e-14));
    CHECK(true_lrv(Generator::mean_shift(3.0, Generator::arma11(0.5, 0.0))) ==
          doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("mean shift generator adds a constant") {
    Generator inner = Generator::arma11(0.4, 0.0, 77);
    Generator shifted = Generator::mean_shift(2.5, inner);
    Series base = generate(inner, 5000);
    Series moved = generate(shifted, 5000);
    for (int i = 0; i < 5000; ++i) {
        CHECK(moved[i] == doctest::Approx(base[i] + 2.5).epsilon(1e-14));
    }
}

TEST_CASE("batch-means truth for nonlinear generators, with cache") {
    // TAR(0,0) is i.i.d. N(0,1): LRV 1.
    Generator tar0 = Generator::tar(0.0, 0.0, 78);
    const double v = true_lrv(tar0);
    CHECK(v == doctest::Approx(1.0).epsilon(0.05));

    // Cache round trip returns the identical stored value.
    const std::string cache = "/tmp/postcolor_test_lrv_cache.json";
    std::remove(cache.c_str());
    Generator tar = Generator::tar(0.3, 0.5, 79);
    const double first = true_lrv(tar, cache);
    const double second = true_lrv(tar, cache);
    CHECK(first == second);
    CHECK(first > 0.0);
    std::remove(cache.c_str());

    // Geometric AR(1) is the exponential of a Gaussian AR(1); its LRV is
    // positive and grows with phi.
    const double g_small = true_lrv(Generator::geom_ar1(0.3, 80));
    const double g_large = true_lrv(Generator::geom_ar1(0.7, 80));
    CHECK(g_small > 0.0);
    CHECK(g_large > g_small);
}

TEST_CASE("VARMA(1,1) matrix truth against a batch-means oracle") {
    Eigen::MatrixXd phi(2, 2), ups(2, 2), sig(2, 2);
    phi << 0.7, 0.0, 0.0, 0.7;
    ups << 0.3, 0.1, 0.1, 0.3;
    sig << 1.0, 0.5, 0.5, 1.0;
    Generator g = Generator::varma11(phi, ups, sig, 81);
    Eigen::MatrixXd v = true_lrv_matrix(g);
    CHECK((v - v.transpose()).cwiseAbs().maxCoeff() < 1e-12);

    // Batch-means estimate over a long simulated path.
    const int n = 2000000;
    const int batch = 2000;
    MultiSeries path = generate_multi(g, n);
    const int nb = n / batch;
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
    Eigen::RowVectorXd grand = path.values().colwise().mean();
    for (int bidx = 0; bidx < nb; ++bidx) {
        Eigen::RowVectorXd bm =
            path.values().middleRows(bidx * batch, batch).colwise().mean() - grand;
        acc += bm.transpose() * bm;
    }
    Eigen::MatrixXd bm_v = acc * static_cast<double>(batch) / (nb - 1.0);
    CHECK((bm_v - v).cwiseAbs().maxCoeff() / v.norm() < 0.1);
}

TEST_CASE("generator validation") {
    CHECK_THROWS_AS(Generator::arma11(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Generator::ar2(0.9, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(Generator::tar(1.1, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(Generator::geom_ar1(1.0), std::invalid_argument);
    CHECK_THROWS_AS(true_lrv(Generator::varma11(Eigen::MatrixXd::Zero(2, 2),
                                                Eigen::MatrixXd::Zero(2, 2),
                                                Eigen::MatrixXd::Identity(2, 2))),
                    std::invalid_argument);
}
