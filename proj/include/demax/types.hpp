#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace demax {

using Real = double;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VectorX = Eigen::VectorXd;
using ArrayX = Eigen::ArrayXd;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatI = Eigen::SparseMatrix<int>;
using Index = Eigen::Index;

} // namespace demax
