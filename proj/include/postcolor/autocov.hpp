#pragma once

#include <vector>

#include <Eigen/Dense>

#include "postcolor/series.hpp"

namespace postcolor {

/// Sample autocovariances gamma~_0..gamma~_L with the divisor-n convention:
///   gamma~_k = (1/n) sum_{i=|k|+1}^n (X_i - Xbar)(X_{i-|k|} - Xbar).
struct AutocovTable {
    std::vector<double> gammas;
    int n = 0;

    int max_lag() const { return static_cast<int>(gammas.size()) - 1; }
    double operator[](int k) const;  // symmetric in k
};

AutocovTable sample_autocov(const Series& s, int max_lag);
AutocovTable sample_autocov(const Series& s);  // max_lag = n-1

/// Sample cross-autocovariance matrix at lag k (|k| < n):
///   Gamma~_k = (1/n) sum_{i=k+1}^n (X_i - Xbar)(X_{i-k} - Xbar)^T, k >= 0,
/// and Gamma~_{-k} = Gamma~_k^T.
Eigen::MatrixXd sample_cross_autocov(const MultiSeries& s, int k);

/// All lags 0..max_lag at once (one pass over the data per lag).
std::vector<Eigen::MatrixXd> sample_cross_autocov_table(const MultiSeries& s, int max_lag);

}  // namespace postcolor
