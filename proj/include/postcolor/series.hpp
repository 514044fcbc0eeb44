#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace postcolor {

/// Univariate stationary sample X_1,...,X_n.  Requires n >= 2 and finite
/// entries; both are checked at construction.
class Series {
public:
    explicit Series(std::vector<double> values);

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }
    double mean() const { return mean_; }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

private:
    std::vector<double> values_;
    double mean_;
};

/// d-variate sample stored as an n x d matrix; row i is the observation at
/// time i.  Requires n >= 2, d >= 1, finite entries.
class MultiSeries {
public:
    explicit MultiSeries(Eigen::MatrixXd values);

    int size() const { return static_cast<int>(values_.rows()); }
    int dim() const { return static_cast<int>(values_.cols()); }
    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::VectorXd row(int i) const { return values_.row(i).transpose(); }
    const Eigen::VectorXd& mean() const { return mean_; }
    Series component(int j) const;

private:
    Eigen::MatrixXd values_;
    Eigen::VectorXd mean_;
};

// File ingestion.  CSV: one column per variable, optional header line,
// row = time point.  Plain text: one value per line, univariate.
Series load_series_text(const std::string& path);
Series load_series_csv(const std::string& path, int column = 0);
MultiSeries load_multiseries_csv(const std::string& path);
MultiSeries parse_multiseries_csv_text(const std::string& text);

}  // namespace postcolor
