#include "nnstne/embedding.hpp"

#include <cmath>
#include <stdexcept>

namespace nnstne {

namespace detail {

double t_kernel(double f, double alpha) {
  return std::exp(-0.5 * (alpha + 1.0) * std::log1p(f / alpha));
}

double t_kernel_derivative(double f, double alpha) {
  // d/df (1 + f/a)^(-(a+1)/2) = -(a+1)/(2a) * (1 + f/a)^(-(a+3)/2)
  return -(alpha + 1.0) / (2.0 * alpha) * std::exp(-0.5 * (alpha + 3.0) * std::log1p(f / alpha));
}

}  // namespace detail

MembershipMatrix t_membership(const Eigen::MatrixXd& f, double alpha) {
  if (f.cols() < 1) throw std::invalid_argument("t_membership: no shapelet columns");
  if (!(alpha > 0.0)) throw std::invalid_argument("t_membership: alpha must be positive");

  MembershipMatrix out;
  out.alpha = alpha;
  out.q.resize(f.rows(), f.cols());
  for (long i = 0; i < f.rows(); ++i) {
    double row_sum = 0.0;
    for (long k = 0; k < f.cols(); ++k) {
      double v = f(i, k);
      if (v < 0.0) {
        if (v < -1e-12) throw std::invalid_argument("t_membership: negative distance");
        v = 0.0;
      }
      const double u = detail::t_kernel(v, alpha);
      out.q(i, k) = u;
      row_sum += u;
    }
    out.q.row(i) /= row_sum;
  }
  return out;
}

}  // namespace nnstne
