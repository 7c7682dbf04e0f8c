#ifndef BPT_HEATMAP_HPP
#define BPT_HEATMAP_HPP

#include <Eigen/Core>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpt/errors.hpp"

namespace bpt {

// Binary PPM (P6) grayscale render: linear map min -> black, max -> white,
// row 0 at the top. A constant matrix maps to mid-gray (128). Output bytes
// are deterministic for identical input.
inline void render_heatmap(const Eigen::MatrixXd& matrix, const std::string& path) {
  if (matrix.size() == 0) throw std::invalid_argument("render_heatmap: empty matrix");
  if (!matrix.allFinite()) throw std::invalid_argument("render_heatmap: non-finite entries");
  const double lo = matrix.minCoeff();
  const double hi = matrix.maxCoeff();
  const bool degenerate = !(hi > lo);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P6\n" << matrix.cols() << ' ' << matrix.rows() << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(matrix.cols()) * 3);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      const double v = degenerate ? 128.0 : 255.0 * (matrix(i, j) - lo) / (hi - lo);
      const auto g = static_cast<unsigned char>(std::lround(v));
      row[3 * j] = row[3 * j + 1] = row[3 * j + 2] = g;
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace bpt

#endif  // BPT_HEATMAP_HPP
