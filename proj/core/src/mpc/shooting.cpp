#include "wheelleg/mpc/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wheelleg/errors.hpp"
#include "wheelleg/mpc/cost.hpp"

namespace wheelleg::mpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check(const ShootingProblem& p, const Eigen::VectorXd& x0, const Eigen::MatrixXd& inputs) {
  if (p.horizon == 0 || p.control_horizon == 0 || p.control_horizon > p.horizon) {
    throw DomainError("shooting problem needs 1 <= control_horizon <= horizon");
  }
  if (static_cast<std::size_t>(x0.size()) != p.state_dim) {
    throw DomainError("shooting problem: initial state dimension mismatch");
  }
  if (static_cast<std::size_t>(inputs.rows()) != p.input_dim ||
      static_cast<std::size_t>(inputs.cols()) != p.control_horizon) {
    throw DomainError("shooting problem: input matrix must be input_dim x control_horizon");
  }
  if (static_cast<std::size_t>(p.stage_weight.size()) != p.error_dim ||
      static_cast<std::size_t>(p.terminal_weight.size()) != p.error_dim ||
      static_cast<std::size_t>(p.input_weight.size()) != p.input_dim ||
      static_cast<std::size_t>(p.lower.size()) != p.input_dim ||
      static_cast<std::size_t>(p.upper.size()) != p.input_dim) {
    throw DomainError("shooting problem: weight or bound dimension mismatch");
  }
  if (p.segment_ends.empty() || p.segment_ends.back() != p.horizon) {
    throw DomainError("shooting problem: segment_ends must finish at the horizon");
  }
}

std::size_t block_of(std::size_t step, std::size_t control_horizon) {
  return std::min(step, control_horizon - 1);
}

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

Eigen::MatrixXd project(const ShootingProblem& p, Eigen::MatrixXd inputs) {
  for (Eigen::Index c = 0; c < inputs.cols(); ++c) {
    inputs.col(c) = inputs.col(c).cwiseMax(p.lower).cwiseMin(p.upper);
  }
  return inputs;
}

Eigen::VectorXd safe_step(const ShootingProblem& p, std::size_t k, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& u) {
  try {
    return p.step(k, x, u);
  } catch (const IntegrationError&) {
    return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p.state_dim), kInf);
  }
}

}  // namespace

double shooting_cost(const ShootingProblem& p, const Eigen::VectorXd& x0,
                     const Eigen::MatrixXd& inputs, std::vector<Eigen::VectorXd>* states_out,
                     std::size_t* model_steps) {
  check(p, x0, inputs);
  std::vector<Eigen::VectorXd> states(p.horizon + 1);
  std::vector<Eigen::VectorXd> errors(p.horizon);
  std::vector<Eigen::VectorXd> step_inputs(p.horizon);
  states[0] = x0;
  bool finite = true;
  for (std::size_t k = 0; k < p.horizon; ++k) {
    step_inputs[k] = inputs.col(static_cast<Eigen::Index>(block_of(k, p.control_horizon)));
    if (finite) {
      states[k + 1] = safe_step(p, k, states[k], step_inputs[k]);
      if (model_steps) ++*model_steps;
      finite = all_finite(states[k + 1]);
    }
    if (!finite) {
      states[k + 1] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p.state_dim), kInf);
      errors[k] = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(p.error_dim), kInf);
      continue;
    }
    errors[k] = p.error(k + 1, states[k + 1]);
  }
  if (states_out) *states_out = states;
  if (!finite) return kInf;

  const CostWeights weights{p.stage_weight, p.input_weight, p.terminal_weight, p.dt};
  double total = 0.0;
  std::size_t begin = 0;
  for (std::size_t end : p.segment_ends) {
    const std::span<const Eigen::VectorXd> seg_errors(errors.data() + begin, end - begin);
    const std::span<const Eigen::VectorXd> seg_inputs(step_inputs.data() + begin, end - begin);
    total += behavior_cost(seg_errors, seg_inputs, errors[end - 1], weights);
    begin = end;
  }
  return std::isfinite(total) ? total : kInf;
}

Eigen::VectorXd solve_box_qp(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                             const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const Eigen::Index n = g.size();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  // 0 free, -1 at lower, +1 at upper
  std::vector<int> state(static_cast<std::size_t>(n), 0);

  for (int iter = 0; iter < 60; ++iter) {
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int s = state[static_cast<std::size_t>(i)];
      if (s == 0) {
        free_idx.push_back(i);
      } else {
        d[i] = s < 0 ? lower[i] : upper[i];
      }
    }
    if (!free_idx.empty()) {
      const auto nf = static_cast<Eigen::Index>(free_idx.size());
      Eigen::MatrixXd hf(nf, nf);
      Eigen::VectorXd rhs(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        const Eigen::Index i = free_idx[static_cast<std::size_t>(a)];
        double r = -g[i];
        for (Eigen::Index j = 0; j < n; ++j) {
          if (state[static_cast<std::size_t>(j)] != 0) r -= H(i, j) * d[j];
        }
        rhs[a] = r;
        for (Eigen::Index b = 0; b < nf; ++b) hf(a, b) = H(i, free_idx[static_cast<std::size_t>(b)]);
      }
      const Eigen::VectorXd x = hf.ldlt().solve(rhs);
      for (Eigen::Index a = 0; a < nf; ++a) d[free_idx[static_cast<std::size_t>(a)]] = x[a];
    }

    bool changed = false;
    for (Eigen::Index i : free_idx) {
      if (!(d[i] >= lower[i])) {
        state[static_cast<std::size_t>(i)] = -1;
        changed = true;
      } else if (!(d[i] <= upper[i])) {
        state[static_cast<std::size_t>(i)] = 1;
        changed = true;
      }
    }
    if (changed) continue;

    const Eigen::VectorXd grad = H * d + g;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int s = state[static_cast<std::size_t>(i)];
      if ((s < 0 && grad[i] < 0.0) || (s > 0 && grad[i] > 0.0)) {
        state[static_cast<std::size_t>(i)] = 0;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return d.cwiseMax(lower).cwiseMin(upper);
}

ShootingResult solve_shooting(const ShootingProblem& p, const Eigen::VectorXd& x0,
                              const Eigen::MatrixXd& initial_inputs, const SolverOptions& options) {
  check(p, x0, initial_inputs);
  const auto n = static_cast<Eigen::Index>(p.state_dim);
  const auto m = static_cast<Eigen::Index>(p.input_dim);
  const auto ne = static_cast<Eigen::Index>(p.error_dim);
  const auto nb = static_cast<Eigen::Index>(p.control_horizon);
  const Eigen::Index nz = m * nb;

  ShootingResult result;
  result.inputs = project(p, initial_inputs);
  result.cost = shooting_cost(p, x0, result.inputs, &result.states, &result.model_steps);
  if (!std::isfinite(result.cost)) {
    result.failed = true;
    return result;
  }
  result.cost_history.push_back(result.cost);

  std::vector<bool> is_translation(p.state_dim, false);
  for (std::size_t i : p.translation_states) is_translation.at(i) = true;
  std::vector<bool> is_terminal(p.horizon + 1, false);
  for (std::size_t e : p.segment_ends) is_terminal.at(e) = true;

  Eigen::VectorXd input_hessian(nz);
  for (Eigen::Index b = 0; b < nb; ++b) {
    const double count = (b + 1 < nb) ? 1.0 : static_cast<double>(p.horizon - p.control_horizon + 1);
    input_hessian.segment(b * m, m) = count * p.dt * p.input_weight;
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(nz, nz);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(nz);
    Eigen::MatrixXd sens = Eigen::MatrixXd::Zero(n, nz);
    Eigen::MatrixXd A(n, n);
    Eigen::MatrixXd B(n, m);
    Eigen::MatrixXd C(ne, n);

    for (std::size_t k = 0; k < p.horizon; ++k) {
      // local origin for the translation states
      Eigen::VectorXd xk = result.states[k];
      for (std::size_t i : p.translation_states) xk[static_cast<Eigen::Index>(i)] = 0.0;
      const Eigen::VectorXd uk =
          result.inputs.col(static_cast<Eigen::Index>(block_of(k, p.control_horizon)));

      for (Eigen::Index j = 0; j < n; ++j) {
        if (is_translation[static_cast<std::size_t>(j)]) {
          A.col(j).setZero();
          A(j, j) = 1.0;
          continue;
        }
        const double h = options.fd_step * std::max(1.0, std::abs(xk[j]));
        Eigen::VectorXd xp = xk;
        Eigen::VectorXd xm = xk;
        xp[j] += h;
        xm[j] -= h;
        A.col(j) = (safe_step(p, k, xp, uk) - safe_step(p, k, xm, uk)) / (2.0 * h);
        result.model_steps += 2;
      }
      for (Eigen::Index j = 0; j < m; ++j) {
        const double h = options.fd_step * std::max(1.0, std::abs(uk[j]));
        Eigen::VectorXd up = uk;
        Eigen::VectorXd um = uk;
        up[j] += h;
        um[j] -= h;
        B.col(j) = (safe_step(p, k, xk, up) - safe_step(p, k, xk, um)) / (2.0 * h);
        result.model_steps += 2;
      }
      if (!A.allFinite() || !B.allFinite()) {
        A = A.unaryExpr([](double v) { return std::isfinite(v) ? v : 0.0; });
        B = B.unaryExpr([](double v) { return std::isfinite(v) ? v : 0.0; });
      }

      const Eigen::Index active_cols = m * std::min<Eigen::Index>(static_cast<Eigen::Index>(k) + 1, nb);
      sens.leftCols(active_cols) = A * sens.leftCols(active_cols);
      sens.middleCols(static_cast<Eigen::Index>(block_of(k, p.control_horizon)) * m, m) += B;

      const Eigen::VectorXd& actual = result.states[k + 1];
      const Eigen::VectorXd ek = p.error(k + 1, actual);
      for (Eigen::Index j = 0; j < n; ++j) {
        const double h = options.fd_step * std::max(1.0, std::abs(actual[j]));
        Eigen::VectorXd xp = actual;
        Eigen::VectorXd xm = actual;
        xp[j] += h;
        xm[j] -= h;
        C.col(j) = (p.error(k + 1, xp) - p.error(k + 1, xm)) / (2.0 * h);
      }
      const Eigen::MatrixXd G = C * sens.leftCols(active_cols);
      Eigen::VectorXd w = p.stage_weight * p.dt;
      if (is_terminal[k + 1]) w += p.terminal_weight;
      const Eigen::MatrixXd WG = w.asDiagonal() * G;
      H.topLeftCorner(active_cols, active_cols).noalias() += G.transpose() * WG;
      g.head(active_cols).noalias() += WG.transpose() * ek;
    }

    const Eigen::Map<const Eigen::VectorXd> z(result.inputs.data(), nz);
    H.diagonal() += input_hessian;
    g += input_hessian.cwiseProduct(z);

    Eigen::VectorXd lo(nz), hi(nz);
    for (Eigen::Index b = 0; b < nb; ++b) {
      lo.segment(b * m, m) = p.lower - result.inputs.col(b);
      hi.segment(b * m, m) = p.upper - result.inputs.col(b);
    }
    lo = lo.cwiseMin(0.0);
    hi = hi.cwiseMax(0.0);
    const Eigen::VectorXd step = solve_box_qp(H, g, lo, hi);

    bool accepted = false;
    double alpha = 1.0;
    for (int bt = 0; bt <= options.max_backtracks; ++bt, alpha *= 0.5) {
      Eigen::VectorXd cand = z + alpha * step;
      Eigen::MatrixXd cand_inputs =
          project(p, Eigen::Map<Eigen::MatrixXd>(cand.data(), m, nb));
      std::vector<Eigen::VectorXd> cand_states;
      const double c = shooting_cost(p, x0, cand_inputs, &cand_states, &result.model_steps);
      if (c < result.cost) {
        const double previous = result.cost;
        result.inputs = std::move(cand_inputs);
        result.states = std::move(cand_states);
        result.cost = c;
        result.cost_history.push_back(c);
        accepted = true;
        result.iterations = iter + 1;
        if (previous - c <= options.tolerance * previous) return result;
        break;
      }
    }
    if (!accepted) break;
  }
  return result;
}

}  // namespace wheelleg::mpc
