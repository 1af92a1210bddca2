#pragma once

#include <Eigen/Dense>

namespace cdrum {

struct NnlsResult {
  Eigen::VectorXd x;
  double objective = 0.0;     // ||Ax - b||^2 at the minimizer
  double kkt_residual = 0.0;  // max first-order violation at exit
  int iterations = 0;
};

// Nonnegativity-constrained least squares min_{x>=0} ||Ax - b||^2 via the
// active-set method of Lawson and Hanson. Throws SolverStalledError if the
// first-order conditions cannot be certified within the iteration budget.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double kkt_tol = 1e-10,
                int max_outer = 0);

}  // namespace cdrum
