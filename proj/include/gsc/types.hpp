#pragma once

#include <Eigen/Dense>

namespace gsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

} // namespace gsc
