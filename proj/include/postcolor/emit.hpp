#pragma once

#include <string>
#include <vector>

#include "postcolor/montecarlo.hpp"

namespace postcolor {

/// Shortest round-trippable decimal representation of x.
std::string format_double(double x);

/// Generic CSV emission: fixed header, rows of preformatted cells.
std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

void write_text_file(const std::string& path, const std::string& text);

// Table results: columns (estimator, a, b, n, mse100, bias10, mc_se).
std::string mc_rows_to_csv(const std::vector<McRow>& rows);
std::string mc_rows_to_json(const std::vector<McRow>& rows);
std::vector<McRow> parse_mc_rows_csv(const std::string& text);

void emit(const std::vector<McRow>& rows, const std::string& path,
          const std::string& format);

std::string mean_test_rows_to_csv(const std::vector<MeanTestRow>& rows);
std::string hac_rows_to_csv(const std::vector<HacRow>& rows);
std::string two_model_rows_to_csv(const std::vector<TwoModelRow>& rows);
std::string mcmc_rows_to_csv(const std::vector<McmcCoverageRow>& rows);

}  // namespace postcolor
