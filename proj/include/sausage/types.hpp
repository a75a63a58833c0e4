#pragma once

#include <Eigen/Core>

namespace sausage {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

// Points are stored as columns.
template <typename Scalar>
using Points2 = Eigen::Matrix<Scalar, 2, Eigen::Dynamic>;

using Point = Point2<double>;
using PointCloud = Points2<double>;

}  // namespace sausage
