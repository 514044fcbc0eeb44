#include "postcolor/emit.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace postcolor {

std::string format_double(double x) {
    char buf[40];
    // Shortest representation that round-trips a double.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) {
            throw std::logic_error("render_csv: row width mismatch");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string mc_rows_to_csv(const std::vector<McRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
        cells.push_back({r.estimator, format_double(r.a), format_double(r.b),
                         std::to_string(r.n), format_double(r.mse100), format_double(r.bias10),
                         format_double(r.mc_se)});
    }
    return render_csv({"estimator", "a", "b", "n", "mse100", "bias10", "mc_se"}, cells);
}

std::string mc_rows_to_json(const std::vector<McRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"estimator", r.estimator},
                       {"a", r.a},
                       {"b", r.b},
                       {"n", r.n},
                       {"mse100", r.mse100},
                       {"bias10", r.bias10},
                       {"mc_se", r.mc_se}});
    }
    return arr.dump(2) + "\n";
}

std::vector<McRow> parse_mc_rows_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<McRow> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 7) throw std::runtime_error("bad table CSV row: " + line);
        McRow r;
        r.estimator = fields[0];
        r.a = std::strtod(fields[1].c_str(), nullptr);
        r.b = std::strtod(fields[2].c_str(), nullptr);
        r.n = std::atoi(fields[3].c_str());
        r.mse100 = std::strtod(fields[4].c_str(), nullptr);
        r.bias10 = std::strtod(fields[5].c_str(), nullptr);
        r.mc_se = std::strtod(fields[6].c_str(), nullptr);
        rows.push_back(std::move(r));
    }
    return rows;
}

void emit(const std::vector<McRow>& rows, const std::string& path, const std::string& format) {
    if (format == "csv") {
        write_text_file(path, mc_rows_to_csv(rows));
    } else if (format == "json") {
        write_text_file(path, mc_rows_to_json(rows));
    } else {
        throw std::invalid_argument("emit: format must be csv or json");
    }
}

std::string mean_test_rows_to_csv(const std::vector<MeanTestRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({r.method, format_double(r.phi), format_double(r.mu),
                         format_double(r.reject_rate)});
    }
    return render_csv({"method", "phi", "mu", "reject_rate"}, cells);
}

std::string hac_rows_to_csv(const std::vector<HacRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({r.method, format_double(r.a), format_double(r.b),
                         format_double(r.delta), format_double(r.reject_rate)});
    }
    return render_csv({"method", "a", "b", "delta", "reject_rate"}, cells);
}

std::string two_model_rows_to_csv(const std::vector<TwoModelRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({r.estimator, format_double(r.c), format_double(r.rmse),
                         format_double(r.bias)});
    }
    return render_csv({"estimator", "c", "rmse", "bias"}, cells);
}

std::string mcmc_rows_to_csv(const std::vector<McmcCoverageRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows) {
        cells.push_back({r.method, format_double(r.coverage), format_double(r.avg_iterations),
                         format_double(r.mse_mean)});
    }
    return render_csv({"method", "coverage", "avg_iterations", "mse_mean"}, cells);
}

}  // namespace postcolor
