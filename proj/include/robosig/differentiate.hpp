#pragma once

#include <Eigen/Core>

namespace robosig {

/// Time derivative of a uniformly sampled series. Central differences inside,
/// first-order one-sided differences at both ends; order 2 applies the
/// scheme twice. Needs at least 3 samples.
Eigen::VectorXd differentiate(const Eigen::Ref<const Eigen::VectorXd>& series, double dt, int order = 1);

/// Row-wise differentiate: each row of `rows` is one series.
Eigen::MatrixXd differentiate_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows, double dt, int order = 1);

}  // namespace robosig
