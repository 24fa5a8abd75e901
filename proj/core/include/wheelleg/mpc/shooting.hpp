#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace wheelleg::mpc {

/// Finite-horizon tracking problem in single-shooting form.
///
/// Decision variables are `control_horizon` input blocks; block
/// control_horizon - 1 is held for the remaining steps. Stage errors are
/// weighted by `stage_weight * dt`, inputs by `input_weight * dt`, and the
/// error at every step listed in `segment_ends` additionally by
/// `terminal_weight`.
struct ShootingProblem {
  std::size_t state_dim = 0;
  std::size_t input_dim = 0;
  std::size_t error_dim = 0;
  std::size_t horizon = 0;
  std::size_t control_horizon = 0;
  double dt = 0.0;

  /// x_{k+1} = step(k, x_k, u_k), k = 0 .. horizon-1. May throw on divergence.
  std::function<Eigen::VectorXd(std::size_t, const Eigen::VectorXd&, const Eigen::VectorXd&)> step;
  /// e_k = error(k, x_k), k = 1 .. horizon.
  std::function<Eigen::VectorXd(std::size_t, const Eigen::VectorXd&)> error;

  Eigen::VectorXd stage_weight;
  Eigen::VectorXd terminal_weight;
  Eigen::VectorXd input_weight;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  /// 1-based step indices closing each behavior segment; last == horizon.
  std::vector<std::size_t> segment_ends;

  /// State components that enter `step` only as x_{k+1}[i] = x_k[i] + ...
  /// (e.g. world position). Their Jacobian columns are unit vectors and are
  /// not finite-differenced.
  std::vector<std::size_t> translation_states;
};

struct SolverOptions {
  int max_iterations = 10;
  double tolerance = 1e-6;      // relative cost decrease that ends the descent
  double fd_step = 1e-5;        // relative central-difference step
  int max_backtracks = 12;
};

struct ShootingResult {
  Eigen::MatrixXd inputs;                  // input_dim x control_horizon
  std::vector<Eigen::VectorXd> states;     // horizon + 1, states[0] = x0
  double cost = 0.0;
  int iterations = 0;
  std::vector<double> cost_history;        // cost of every accepted iterate, starting with x0's
  bool failed = false;
  std::size_t model_steps = 0;             // number of step() evaluations
};

/// Total cost of a rollout, summed over behavior segments. Returns +inf when
/// the rollout is not finite.
double shooting_cost(const ShootingProblem& problem, const Eigen::VectorXd& x0,
                     const Eigen::MatrixXd& inputs, std::vector<Eigen::VectorXd>* states = nullptr,
                     std::size_t* model_steps = nullptr);

/// Minimizes the problem cost by projected Gauss-Newton descent.
///
/// Each iteration linearizes the step map by central differences along the
/// current rollout, solves the box-constrained quadratic model of the cost
/// by an active-set method and backtracks along the resulting step until the
/// true cost decreases. Every iterate stays inside [lower, upper], and the
/// accepted cost sequence is non-increasing. If the initial rollout is not
/// finite the initial (projected) inputs are returned with `failed` set.
ShootingResult solve_shooting(const ShootingProblem& problem, const Eigen::VectorXd& x0,
                              const Eigen::MatrixXd& initial_inputs, const SolverOptions& options);

/// Minimizes 0.5 d'Hd + g'd subject to lower <= d <= upper (lower <= 0 <= upper).
Eigen::VectorXd solve_box_qp(const Eigen::MatrixXd& hessian, const Eigen::VectorXd& gradient,
                             const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

}  // namespace wheelleg::mpc
