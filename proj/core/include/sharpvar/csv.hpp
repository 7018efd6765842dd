#ifndef SHARPVAR_CSV_HPP
#define SHARPVAR_CSV_HPP

#include <string>
#include <vector>

#include "sharpvar/adjust.hpp"

namespace sharpvar {

/// Comma-delimited table with RFC 4180 quoting, header row required.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws naming the column when absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

struct CsvSchema {
  std::string outcome_column;
  std::string treatment_column;
  std::vector<std::string> covariate_columns;
  std::string strata_column;  // empty = none

  void validate() const;
};

/// Builds ExperimentData from a CSV file. Treatment cells must be 0 or 1,
/// covariates numeric; a strata column is expanded to centered indicator
/// columns appended to X. Missing or non-numeric cells are hard errors
/// naming the row and column.
ExperimentData load_csv(const std::string& path, const CsvSchema& schema);

}  // namespace sharpvar

#endif  // SHARPVAR_CSV_HPP
