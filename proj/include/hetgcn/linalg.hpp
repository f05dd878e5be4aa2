#pragma once

#include <Eigen/Core>

namespace hetgcn {

using Index = Eigen::Index;

// Row-major so that feature rows are contiguous for the sparse kernels.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

}  // namespace hetgcn
