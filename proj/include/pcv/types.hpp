#pragma once

#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace pcv {

// Central dense-type aliases; everything geometric or numeric in the core is
// expressed in these so Eigen stays the only math dependency.
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Aabb = Eigen::AlignedBox3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// One point cloud frame: N x 3 positions, optional N x 3 RGB (empty if absent).
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using ColorMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

// GOF x tile 0/1 visibility mask.
using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

}  // namespace pcv
