#pragma once

#include "k2st/types.hpp"

#include <optional>
#include <string>

namespace k2st {

struct DatasetPaths {
  std::string x, v, y, w;
  std::optional<std::string> unlabeled_v;
  std::optional<std::string> unlabeled_w;
};

// Numeric CSV, no header unless `header` is set. Row i of the x file
// pairs with row i of the v file (likewise y/w). With `standardize`,
// X/Y columns are scaled by pooled labeled X+Y statistics and each
// covariate space by its labeled statistics (population std; std-0
// columns left untouched).
SemiSupervisedSample load_csv_dataset(const DatasetPaths& paths,
                                      bool header = false,
                                      bool standardize = false);

Mat load_csv_matrix(const std::string& path, bool header);

}  // namespace k2st
