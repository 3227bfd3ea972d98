/**
 * @file types.hpp
 * @brief Shared vector aliases used across the toolkit.
 */
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace pinngm {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

using PointList = std::vector<Vec3>;

}  // namespace pinngm
