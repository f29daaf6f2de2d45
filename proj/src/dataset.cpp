#include "asymshap/dataset.hpp"

#include "asymshap/csv.hpp"
#include "asymshap/errors.hpp"

namespace asymshap {

void Dataset::validate() const {
  if (x.rows() < 2) throw Error(ErrorCode::InvalidInput, "dataset needs at least two rows");
  if (!x.allFinite()) throw Error(ErrorCode::InvalidInput, "dataset contains missing or non-finite values");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != x.cols()) {
    throw Error(ErrorCode::InvalidInput, "column name count does not match the data");
  }
  if (y && (y->size() != x.rows() || !y->allFinite())) throw Error(ErrorCode::InvalidInput, "bad outcome column");
  if (event) {
    if (event->size() != x.rows()) throw Error(ErrorCode::InvalidInput, "bad event column");
    for (double e : *event)
      if (e != 0.0 && e != 1.0) throw Error(ErrorCode::InvalidInput, "event indicator must be 0 or 1");
  }
}

Dataset Dataset::select_rows(const std::vector<Eigen::Index>& idx) const {
  Dataset out;
  out.names = names;
  out.x = x(idx, Eigen::all);
  if (y) out.y = Eigen::VectorXd((*y)(idx));
  if (event) out.event = Eigen::VectorXd((*event)(idx));
  return out;
}

Dataset read_dataset_csv(const std::string& path, const std::optional<std::string>& outcome,
                         const std::optional<std::string>& event) {
  const CsvTable t = read_csv(path);
  const auto& header = t.header;

  int y_col = -1, e_col = -1;
  std::vector<int> var_cols;
  Dataset out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (outcome && header[c] == *outcome) {
      y_col = static_cast<int>(c);
    } else if (event && header[c] == *event) {
      e_col = static_cast<int>(c);
    } else {
      var_cols.push_back(static_cast<int>(c));
      out.names.push_back(header[c]);
    }
  }
  if (outcome && y_col < 0) throw Error(ErrorCode::InvalidInput, "outcome column '" + *outcome + "' not found");
  if (event && e_col < 0) throw Error(ErrorCode::InvalidInput, "event column '" + *event + "' not found");

  std::vector<std::vector<double>> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    std::vector<double> row;
    row.reserve(header.size());
    for (const auto& cell : t.rows[r]) row.push_back(parse_double(cell, path + " record " + std::to_string(r + 1)));
    rows.push_back(std::move(row));
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  out.x.resize(n, static_cast<Eigen::Index>(var_cols.size()));
  if (y_col >= 0) out.y = Eigen::VectorXd(n);
  if (e_col >= 0) out.event = Eigen::VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < var_cols.size(); ++k) out.x(i, static_cast<Eigen::Index>(k)) = r[static_cast<std::size_t>(var_cols[k])];
    if (y_col >= 0) (*out.y)(i) = r[static_cast<std::size_t>(y_col)];
    if (e_col >= 0) (*out.event)(i) = r[static_cast<std::size_t>(e_col)];
  }
  out.validate();
  return out;
}

}  // namespace asymshap
