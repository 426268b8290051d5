#pragma once

#include <Eigen/Dense>

namespace ridgecr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace ridgecr
