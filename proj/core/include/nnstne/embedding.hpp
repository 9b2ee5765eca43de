#pragma once

#include <Eigen/Dense>

#include "nnstne/similarity.hpp"

namespace nnstne {

/// Row-stochastic Student-t membership probabilities of each series to each
/// shapelet. Rows sum to 1; smaller distances map to larger memberships.
struct MembershipMatrix {
  Eigen::MatrixXd q;  ///< N x K
  double alpha = 1.0;
};

/// Heavy-tailed kernel (1 + f/alpha)^(-(alpha+1)/2), normalized per row.
/// Requires f >= 0 elementwise (entries within -1e-12 of zero are treated
/// as zero) and alpha > 0.
MembershipMatrix t_membership(const Eigen::MatrixXd& f, double alpha);

inline MembershipMatrix t_membership(const FeatureMatrix& f, double alpha) {
  return t_membership(f.f, alpha);
}

namespace detail {

/// Unnormalized kernel value, evaluated as exp(-(a+1)/2 * log1p(f/a)) so
/// large alpha stays accurate.
double t_kernel(double f, double alpha);

/// d t_kernel / d f.
double t_kernel_derivative(double f, double alpha);

}  // namespace detail

}  // namespace nnstne
