#include "postcolor/series.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace postcolor {

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw std::invalid_argument("Series requires at least 2 observations");
    }
    double sum = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Series contains a non-finite value");
        }
        sum += v;
    }
    mean_ = sum / static_cast<double>(values_.size());
}

MultiSeries::MultiSeries(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 2 || values_.cols() < 1) {
        throw std::invalid_argument("MultiSeries requires n >= 2 and d >= 1");
    }
    if (!values_.allFinite()) {
        throw std::invalid_argument("MultiSeries contains a non-finite value");
    }
    mean_ = values_.colwise().mean().transpose();
}

Series MultiSeries::component(int j) const {
    if (j < 0 || j >= dim()) {
        throw std::invalid_argument("component index out of range");
    }
    std::vector<double> col(static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i) col[static_cast<std::size_t>(i)] = values_(i, j);
    return Series(std::move(col));
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',' || ch == '\t' || ch == ';') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_number(const std::string& field, double& out) {
    const char* begin = field.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ') ++end;
    return *end == '\0';
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

MultiSeries parse_multiseries_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        // Skip blank lines; a non-numeric first line is treated as a header.
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (blank) continue;
        auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool ok = true;
        for (const auto& f : fields) {
            if (f.find_first_not_of(" \t") == std::string::npos) continue;
            double v;
            if (!parse_number(f, v)) {
                ok = false;
                break;
            }
            row.push_back(v);
        }
        if (!ok) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw std::runtime_error("non-numeric CSV field in data row: " + line);
        }
        first = false;
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::runtime_error("CSV input contains no data rows");
    }
    const std::size_t d = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw std::runtime_error("ragged CSV input: inconsistent column count");
        }
        for (std::size_t j = 0; j < d; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return MultiSeries(std::move(m));
}

MultiSeries load_multiseries_csv(const std::string& path) {
    return parse_multiseries_csv_text(read_file(path));
}

Series load_series_csv(const std::string& path, int column) {
    MultiSeries ms = load_multiseries_csv(path);
    return ms.component(column);
}

Series load_series_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open file: " + path);
    }
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    return Series(std::move(values));
}

}  // namespace postcolor
