#include "sharpvar/csv.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sharpvar {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::runtime_error("missing column: " + name);
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      // swallowed; \r\n handled at the \n
    } else if (c == '\n') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw std::runtime_error("csv: unterminated quoted field");
  }
  if (field_started || !record.empty() || !field.empty()) {
    end_record();
  }

  if (records.empty()) {
    throw std::runtime_error("csv: missing header row");
  }
  CsvTable table;
  table.header = records.front();
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() == 1 && records[r][0].empty()) continue;  // blank line
    if (records[r].size() != table.header.size()) {
      throw std::runtime_error("csv: row " + std::to_string(r) +
                               " has wrong number of fields");
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

void CsvSchema::validate() const {
  if (outcome_column.empty() || treatment_column.empty()) {
    throw std::invalid_argument("CsvSchema: outcome and treatment columns are required");
  }
  if (outcome_column == treatment_column) {
    throw std::invalid_argument("CsvSchema: duplicate column name: " + outcome_column);
  }
  std::set<std::string> names{outcome_column, treatment_column};
  for (const auto& c : covariate_columns) {
    if (!names.insert(c).second) {
      throw std::invalid_argument("CsvSchema: duplicate column name: " + c);
    }
  }
  if (!strata_column.empty() && !names.insert(strata_column).second) {
    throw std::invalid_argument("CsvSchema: duplicate column name: " + strata_column);
  }
}

namespace {

double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
  if (cell.empty()) {
    throw std::runtime_error("missing value at row " + std::to_string(row) +
                             ", column " + col);
  }
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(cell, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("non-numeric value '" + cell + "' at row " +
                             std::to_string(row) + ", column " + col);
  }
  if (pos != cell.size() || std::isnan(v)) {
    throw std::runtime_error("non-numeric value '" + cell + "' at row " +
                             std::to_string(row) + ", column " + col);
  }
  return v;
}

}  // namespace

ExperimentData load_csv(const std::string& path, const CsvSchema& schema) {
  schema.validate();
  const CsvTable table = read_csv(path);
  const std::size_t y_col = table.column(schema.outcome_column);
  const std::size_t z_col = table.column(schema.treatment_column);
  std::vector<std::size_t> x_cols;
  for (const auto& c : schema.covariate_columns) x_cols.push_back(table.column(c));
  const bool has_strata = !schema.strata_column.empty();
  const std::size_t s_col = has_strata ? table.column(schema.strata_column) : 0;

  const std::size_t n = table.rows.size();
  ExperimentData data;
  data.y_obs.resize(n);
  data.z.resize(n);
  std::vector<int> strata(has_strata ? n : 0);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n),
                    static_cast<Eigen::Index>(x_cols.size()));

  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = r + 2;  // 1-based, after the header
    data.y_obs[r] = parse_cell(row[y_col], line, schema.outcome_column);

    const std::string& zc = row[z_col];
    if (zc == "0") {
      data.z[r] = 0;
    } else if (zc == "1") {
      data.z[r] = 1;
    } else {
      throw std::runtime_error("treatment value '" + zc + "' at row " +
                               std::to_string(line) + " is not 0 or 1");
    }
    for (std::size_t j = 0; j < x_cols.size(); ++j) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          parse_cell(row[x_cols[j]], line, schema.covariate_columns[j]);
    }
    if (has_strata) {
      const double sv = parse_cell(row[s_col], line, schema.strata_column);
      strata[r] = static_cast<int>(sv);
      if (static_cast<double>(strata[r]) != sv) {
        throw std::runtime_error("stratum value '" + row[s_col] + "' at row " +
                                 std::to_string(line) + " is not an integer");
      }
    }
  }

  if (has_strata) {
    const Eigen::MatrixXd s = encode_strata(strata);
    Eigen::MatrixXd combined(x.rows(), x.cols() + s.cols());
    combined << x, s;
    data.x = std::move(combined);
  } else {
    data.x = std::move(x);
  }
  data.validate();
  return data;
}

}  // namespace sharpvar
