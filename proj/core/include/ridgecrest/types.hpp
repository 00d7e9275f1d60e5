#pragma once

#include <Eigen/Core>

namespace ridgecrest {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Samples are stored row-wise: an n-by-D matrix holds n points in R^D.

}  // namespace ridgecrest
