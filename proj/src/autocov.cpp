#include "postcolor/autocov.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace postcolor {

double AutocovTable::operator[](int k) const {
    int ak = std::abs(k);
    if (ak > max_lag()) {
        throw std::out_of_range("autocovariance lag beyond table");
    }
    return gammas[static_cast<std::size_t>(ak)];
}

AutocovTable sample_autocov(const Series& s, int max_lag) {
    const int n = s.size();
    if (max_lag < 0 || max_lag >= n) {
        throw std::invalid_argument("sample_autocov requires 0 <= max_lag < n");
    }
    const double xbar = s.mean();
    AutocovTable table;
    table.n = n;
    table.gammas.resize(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) {
        double acc = 0.0;
        for (int i = k; i < n; ++i) {
            acc += (s[i] - xbar) * (s[i - k] - xbar);
        }
        table.gammas[static_cast<std::size_t>(k)] = acc / static_cast<double>(n);
    }
    return table;
}

AutocovTable sample_autocov(const Series& s) { return sample_autocov(s, s.size() - 1); }

Eigen::MatrixXd sample_cross_autocov(const MultiSeries& s, int k) {
    const int n = s.size();
    const int d = s.dim();
    const int ak = std::abs(k);
    if (ak >= n) {
        throw std::invalid_argument("sample_cross_autocov requires |k| < n");
    }
    const Eigen::MatrixXd& x = s.values();
    const Eigen::VectorXd& mu = s.mean();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (int i = ak; i < n; ++i) {
        acc.noalias() += (x.row(i).transpose() - mu) * (x.row(i - ak) - mu.transpose());
    }
    acc /= static_cast<double>(n);
    if (k < 0) return acc.transpose();
    return acc;
}

std::vector<Eigen::MatrixXd> sample_cross_autocov_table(const MultiSeries& s, int max_lag) {
    const int n = s.size();
    if (max_lag < 0 || max_lag >= n) {
        throw std::invalid_argument("sample_cross_autocov_table requires 0 <= max_lag < n");
    }
    std::vector<Eigen::MatrixXd> out;
    out.reserve(static_cast<std::size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) out.push_back(sample_cross_autocov(s, k));
    return out;
}

}  // namespace postcolor
