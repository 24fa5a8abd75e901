#pragma once

#include <span>

#include <Eigen/Dense>

namespace wheelleg::mpc {

/// Diagonal weights of the tracking cost.
struct CostWeights {
  Eigen::VectorXd stage;     // Q
  Eigen::VectorXd input;     // R
  Eigen::VectorXd terminal;  // S
  double dt = 0.05;
};

/// Discretized cost of one behavior segment:
///   sum_k (e_k' Q e_k + u_k' R u_k) dt + e_end' S e_end.
/// `errors` and `inputs` pair up step by step. Throws DomainError on
/// dimension mismatches.
double behavior_cost(std::span<const Eigen::VectorXd> errors,
                     std::span<const Eigen::VectorXd> inputs,
                     const Eigen::VectorXd& terminal_error, const CostWeights& weights);

}  // namespace wheelleg::mpc
