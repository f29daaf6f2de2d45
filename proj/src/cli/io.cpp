#include "asymshap/cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "asymshap/csv.hpp"
#include "asymshap/errors.hpp"

namespace asymshap::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot move output into place: " + path.string());
}

Coalition parse_pattern(std::string_view pattern, int q) {
  if (static_cast<int>(pattern.size()) != q)
    throw Error(ErrorCode::InvalidInput, "coalition pattern '" + std::string(pattern) + "' has the wrong length");
  Coalition s;
  for (int h = 0; h < q; ++h) {
    const char c = pattern[static_cast<std::size_t>(h)];
    if (c == '1') {
      s = s.with(h);
    } else if (c != '0') {
      throw Error(ErrorCode::InvalidInput, "coalition pattern '" + std::string(pattern) + "' must be 0/1");
    }
  }
  return s;
}

std::string weights_csv(const WeightMatrices& w, const FeatureSet& features, bool plus) {
  std::ostringstream out;
  out << "feature";
  for (Coalition s : w.coalitions) out << ',' << s.pattern(w.num_features);
  out << '\n';
  for (int h = 0; h < w.num_features; ++h) {
    out << features[h].name;
    for (std::size_t c = 0; c < w.cols(); ++c) out << ',' << (plus ? w.plus(h, c) : w.minus(h, c)).to_string();
    out << '\n';
  }
  return out.str();
}

std::string coalitions_csv(const std::vector<Coalition>& coalitions, const FeatureSet& features) {
  std::ostringstream out;
  out << "index,pattern,size,members\n";
  for (std::size_t i = 0; i < coalitions.size(); ++i) {
    const Coalition s = coalitions[i];
    out << i << ',' << s.pattern(features.size()) << ',' << s.size() << ',';
    bool first = true;
    for (int h : s.members()) {
      out << (first ? "" : ";") << features[h].name;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

std::string results_csv(const std::vector<ShapleyResult>& results, const FeatureSet& features,
                        const std::vector<std::size_t>& row_ids) {
  std::ostringstream out;
  out << "row,feature,value,plus,minus,se,base,mode,samples,seed\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const ShapleyResult& r = results[i];
    for (int h = 0; h < features.size(); ++h) {
      const double se = r.std_errors.size() > 0 ? r.std_errors(h) : 0.0;
      out << row_ids[i] << ',' << features[h].name << ',' << format_double(r.values(h)) << ','
          << format_double(r.plus(h)) << ',' << format_double(r.minus(h)) << ',' << format_double(se) << ','
          << format_double(r.base) << ',' << to_string(r.mode) << ',' << r.samples << ',' << r.seed << '\n';
    }
  }
  return out.str();
}

NuTable read_nu_table(const std::string& path, int q) {
  const CsvTable t = read_csv(path);
  const int rc = t.column("row"), cc = t.column("coalition"), vc = t.column("value");
  if (rc < 0 || cc < 0 || vc < 0) throw Error(ErrorCode::InvalidInput, path + ": expected row,coalition,value columns");
  NuTable out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const std::string where = path + " record " + std::to_string(i + 1);
    const double row = parse_double(r[static_cast<std::size_t>(rc)], where);
    if (row < 0 || row != std::floor(row)) throw Error(ErrorCode::InvalidInput, where + ": bad row id");
    const Coalition s = parse_pattern(r[static_cast<std::size_t>(cc)], q);
    const auto key = std::make_pair(static_cast<std::size_t>(row), s.bits());
    if (!out.emplace(key, parse_double(r[static_cast<std::size_t>(vc)], where)).second)
      throw Error(ErrorCode::InvalidInput, where + ": duplicate row and coalition");
  }
  return out;
}

LocalShapleyTable read_local_table(const std::string& table_path, const std::string& outcomes_path,
                                   const std::string& outcome, const std::optional<std::string>& group) {
  const CsvTable t = read_csv(table_path);
  LocalShapleyTable out;
  std::vector<std::string> row_keys;

  const int fc = t.column("feature"), vc = t.column("value"), rc = t.column("row");
  if (fc >= 0 && vc >= 0) {
    if (rc < 0) throw Error(ErrorCode::InvalidInput, table_path + ": long tables need a row column");
    std::map<std::string, std::size_t> feature_idx, row_idx;
    std::vector<std::tuple<std::size_t, std::size_t, double>> cells;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& r = t.rows[i];
      const std::string& f = r[static_cast<std::size_t>(fc)];
      const std::string& row = r[static_cast<std::size_t>(rc)];
      auto [fit, fnew] = feature_idx.try_emplace(f, out.features.size());
      if (fnew) out.features.push_back(f);
      auto [rit, rnew] = row_idx.try_emplace(row, row_keys.size());
      if (rnew) row_keys.push_back(row);
      cells.emplace_back(rit->second, fit->second,
                         parse_double(r[static_cast<std::size_t>(vc)], table_path + " record " + std::to_string(i + 1)));
    }
    out.phi = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(row_keys.size()),
                                        static_cast<Eigen::Index>(out.features.size()), std::nan(""));
    for (const auto& [i, h, v] : cells) out.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(h)) = v;
    if (!out.phi.allFinite()) throw Error(ErrorCode::InvalidInput, table_path + ": every row needs every feature");
  } else {
    std::vector<int> cols;
    for (std::size_t c = 0; c < t.header.size(); ++c) {
      if (static_cast<int>(c) == rc) continue;
      cols.push_back(static_cast<int>(c));
      out.features.push_back(t.header[c]);
    }
    out.phi.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      row_keys.push_back(rc >= 0 ? t.rows[i][static_cast<std::size_t>(rc)] : std::to_string(i));
      for (std::size_t k = 0; k < cols.size(); ++k) {
        out.phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            parse_double(t.rows[i][static_cast<std::size_t>(cols[k])], table_path + " record " + std::to_string(i + 1));
      }
    }
  }

  const CsvTable o = read_csv(outcomes_path);
  const int yc = o.column(outcome);
  if (yc < 0) throw Error(ErrorCode::InvalidInput, outcomes_path + ": outcome column '" + outcome + "' not found");
  const int gc = group ? o.column(*group) : -1;
  if (group && gc < 0) throw Error(ErrorCode::InvalidInput, outcomes_path + ": group column '" + *group + "' not found");
  const int orc = o.column("row");
  if (o.rows.size() != row_keys.size()) throw Error(ErrorCode::InvalidInput, "outcome and table row counts differ");

  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < o.rows.size(); ++i)
    position[orc >= 0 && rc >= 0 ? o.rows[i][static_cast<std::size_t>(orc)] : row_keys[i]] = i;
  out.y.resize(static_cast<Eigen::Index>(row_keys.size()));
  if (gc >= 0) out.groups.emplace();
  for (std::size_t i = 0; i < row_keys.size(); ++i) {
    const auto it = position.find(row_keys[i]);
    if (it == position.end()) throw Error(ErrorCode::InvalidInput, "no outcome for row " + row_keys[i]);
    const auto& r = o.rows[it->second];
    out.y(static_cast<Eigen::Index>(i)) = parse_double(r[static_cast<std::size_t>(yc)], outcomes_path);
    if (gc >= 0) out.groups->push_back(r[static_cast<std::size_t>(gc)]);
  }
  out.validate();
  return out;
}

}  // namespace asymshap::cli
