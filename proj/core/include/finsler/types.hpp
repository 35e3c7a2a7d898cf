#pragma once

#include <Eigen/Dense>

namespace finsler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace finsler
