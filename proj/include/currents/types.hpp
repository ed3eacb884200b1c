#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace currents {

using Index = Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
using SparseMatrix = Eigen::SparseMatrix<double>;
using IncidenceMatrix = Eigen::SparseMatrix<int>;

/// A point of R^N.
using Point = Vector;

} // namespace currents
