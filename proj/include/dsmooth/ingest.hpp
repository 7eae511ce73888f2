#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dsmooth/smooth_test.hpp"

namespace dsmooth {

struct Dataset {
  std::vector<std::string> labels;
  std::vector<double> x;
  std::vector<double> u;

  std::size_t size() const noexcept { return x.size(); }
  bool operator==(const Dataset&) const = default;
};

/// Reads two numeric columns from a comma-separated file. A column is named
/// by its header text (case-insensitive) or by a 1-based index. With names,
/// the first row must be a header; with indices, a first row whose selected
/// cells are not numeric is taken as a header. A `label` header column, if
/// present, fills Dataset::labels; otherwise rows are labelled by number.
/// Throws ParseError with the row/column of the first problem.
Dataset load_csv(const std::filesystem::path& path, std::string_view x_column = "X", std::string_view u_column = "U");

Dataset parse_csv(std::istream& in, std::string_view x_column = "X", std::string_view u_column = "U");

/// One numeric column (same column rules as load_csv).
std::vector<double> load_column(const std::filesystem::path& path, std::string_view column = "1");

/// `label,X,U` header followed by one row per observation.
void write_csv(std::ostream& out, const Dataset& data);

/// Paired first-goal times from the 2005-06 (19 matches) and 2004-05
/// (18 matches) UEFA Champions League seasons. X: minute of the first kick
/// goal by either team; U: minute of the home team's first goal.
const Dataset& uefa_dataset();

enum class UefaModel { additive, multiplicative };

std::string_view to_string(UefaModel model) noexcept;

struct UefaAnalysis {
  UefaModel model = UefaModel::additive;
  double lambda_x = 0.0;
  double lambda_u = 0.0;
  TestResult result;
};

/// X = Y + Z, U = V + W with Y ~ Poisson(mean X) and V ~ Poisson(mean U)
/// playing the known-moment role; tests L(Z) = L(W).
UefaAnalysis uefa_additive(const Dataset& data, int max_order = kDefaultMaxOrder);

/// X = Y Z, U = V W on the log scale: log Y, log V have LogPoisson moments
/// (conditioned on a positive count); tests L(log Z) = L(log W). Requires
/// strictly positive data.
UefaAnalysis uefa_multiplicative(const Dataset& data, int max_order = kDefaultMaxOrder);

}  // namespace dsmooth
