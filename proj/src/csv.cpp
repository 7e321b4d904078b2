#include "k2st/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace k2st {

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path,
                              std::size_t lineno) {
  std::vector<double> out;
  std::istringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
      if (pos != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": non-numeric cell '" + cell + "'");
    }
  }
  return out;
}

// column-wise (x - mean) / std using `stats` rows pooled; population std.
void standardize_with(Mat& target, const Vec& mean, const Vec& std) {
  for (Eigen::Index c = 0; c < target.cols(); ++c) {
    if (std[c] > 0.0)
      target.col(c) = (target.col(c).array() - mean[c]) / std[c];
  }
}

std::pair<Vec, Vec> column_stats(const Mat& m) {
  const Vec mean = m.colwise().mean();
  Vec std(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    std[c] = std::sqrt((m.col(c).array() - mean[c]).square().mean());
  }
  return {mean, std};
}

}  // namespace

Mat load_csv_matrix(const std::string& path, bool header) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (line.empty()) continue;
    rows.push_back(parse_row(line, path, lineno));
    if (rows.size() > 1 && rows.back().size() != rows.front().size())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": ragged row");
  }
  if (rows.empty()) throw std::invalid_argument(path + ": empty file");
  Mat out(static_cast<Eigen::Index>(rows.size()),
          static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return out;
}

SemiSupervisedSample load_csv_dataset(const DatasetPaths& paths, bool header,
                                      bool standardize) {
  SemiSupervisedSample s;
  s.labeled_x = load_csv_matrix(paths.x, header);
  s.labeled_v = load_csv_matrix(paths.v, header);
  s.labeled_y = load_csv_matrix(paths.y, header);
  s.labeled_w = load_csv_matrix(paths.w, header);
  if (s.labeled_x.rows() != s.labeled_v.rows())
    throw std::invalid_argument("row-count mismatch between " + paths.x +
                                " and " + paths.v);
  if (s.labeled_y.rows() != s.labeled_w.rows())
    throw std::invalid_argument("row-count mismatch between " + paths.y +
                                " and " + paths.w);
  if (paths.unlabeled_v)
    s.unlabeled_v = load_csv_matrix(*paths.unlabeled_v, header);
  else
    s.unlabeled_v.resize(0, s.labeled_v.cols());
  if (paths.unlabeled_w)
    s.unlabeled_w = load_csv_matrix(*paths.unlabeled_w, header);
  else
    s.unlabeled_w.resize(0, s.labeled_w.cols());
  s.validate();

  if (standardize) {
    Mat pooled_xy(s.labeled_x.rows() + s.labeled_y.rows(), s.labeled_x.cols());
    pooled_xy << s.labeled_x, s.labeled_y;
    const auto [xm, xs] = column_stats(pooled_xy);
    standardize_with(s.labeled_x, xm, xs);
    standardize_with(s.labeled_y, xm, xs);

    const auto [vm, vs] = column_stats(s.labeled_v);
    standardize_with(s.labeled_v, vm, vs);
    if (s.unlabeled_v.rows() > 0) standardize_with(s.unlabeled_v, vm, vs);

    const auto [wm, ws] = column_stats(s.labeled_w);
    standardize_with(s.labeled_w, wm, ws);
    if (s.unlabeled_w.rows() > 0) standardize_with(s.unlabeled_w, wm, ws);
  }
  return s;
}

}  // namespace k2st
