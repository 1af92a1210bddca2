#include "cdrum/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "cdrum/errors.hpp"
#include "cdrum/numeric.hpp"

namespace cdrum {

namespace {

// Least squares restricted to the passive columns.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                              const std::vector<int>& passive) {
  Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(passive.size()));
  for (std::size_t k = 0; k < passive.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(passive[k]);
  return Ap.colPivHouseholderQr().solve(b);
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double kkt_tol,
                int max_outer) {
  const Eigen::Index n = A.cols();
  if (max_outer <= 0) max_outer = static_cast<int>(3 * n + 200);

  NnlsResult result;
  result.x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<int> passive_list;

  Eigen::VectorXd residual = b;
  Eigen::VectorXd w = A.transpose() * residual;

  // entry threshold scaled to the problem; certification below uses kkt_tol
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  const double entry_tol = kkt_tol * scale;

  int outer = 0;
  while (outer < max_outer) {
    int j = -1;
    double best = entry_tol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!passive[static_cast<std::size_t>(i)] && w[i] > best) {
        best = w[i];
        j = static_cast<int>(i);
      }
    }
    if (j < 0) break;  // dual feasible
    ++outer;

    passive[static_cast<std::size_t>(j)] = true;
    passive_list.push_back(j);
    std::sort(passive_list.begin(), passive_list.end());

    while (true) {
      Eigen::VectorXd z = solve_passive(A, b, passive_list);
      double zmin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < passive_list.size(); ++k) zmin = std::min(zmin, z[static_cast<Eigen::Index>(k)]);
      if (zmin > 0.0) {
        for (std::size_t k = 0; k < passive_list.size(); ++k)
          result.x[passive_list[k]] = z[static_cast<Eigen::Index>(k)];
        break;
      }
      // step toward z until the first passive coordinate hits zero
      double alpha = 1.0;
      for (std::size_t k = 0; k < passive_list.size(); ++k) {
        double zk = z[static_cast<Eigen::Index>(k)];
        if (zk <= 0.0) {
          double xk = result.x[passive_list[k]];
          double denom = xk - zk;
          if (denom > 0.0) alpha = std::min(alpha, xk / denom);
        }
      }
      for (std::size_t k = 0; k < passive_list.size(); ++k) {
        int col = passive_list[k];
        result.x[col] += alpha * (z[static_cast<Eigen::Index>(k)] - result.x[col]);
      }
      std::vector<int> keep;
      const double drop_tol = 1e-14;
      for (int col : passive_list) {
        if (result.x[col] <= drop_tol) {
          result.x[col] = 0.0;
          passive[static_cast<std::size_t>(col)] = false;
        } else {
          keep.push_back(col);
        }
      }
      if (keep.size() == passive_list.size()) {
        // no coordinate left the passive set; accept z clamped to zero to
        // avoid cycling on degenerate columns
        for (std::size_t k = 0; k < passive_list.size(); ++k)
          result.x[passive_list[k]] = std::max(0.0, z[static_cast<Eigen::Index>(k)]);
        break;
      }
      passive_list = std::move(keep);
      if (passive_list.empty()) break;
    }

    residual = b - A * result.x;
    w = A.transpose() * residual;
  }

  residual = b - A * result.x;
  w = A.transpose() * residual;
  double kkt = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (result.x[i] > 0.0)
      kkt = std::max(kkt, std::abs(w[i]));
    else
      kkt = std::max(kkt, std::max(0.0, w[i]));
  }
  result.kkt_residual = kkt / scale;
  result.objective = residual.squaredNorm();
  result.iterations = outer;
  if (result.kkt_residual > kkt_tol * 10)
    throw SolverStalledError(format_number(result.kkt_residual));
  return result;
}

}  // namespace cdrum
