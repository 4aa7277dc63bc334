#pragma once

#include <Eigen/Dense>
#include <string>

#include "vocheck/errors.hpp"

namespace vocheck {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_metzler(const Matrix& a, double tol = 0.0) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j && a(i, j) < -tol) return false;
  return true;
}

inline void require_square(const Matrix& a, const std::string& name) {
  if (a.rows() != a.cols())
    throw DimensionError(name + " must be square, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
}

inline void require_finite(const Matrix& a, const std::string& name) {
  if (!a.allFinite()) throw DomainError(name + " has non-finite entries");
}

}  // namespace vocheck
