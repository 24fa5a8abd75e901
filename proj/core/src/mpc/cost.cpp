#include "wheelleg/mpc/cost.hpp"

#include "wheelleg/errors.hpp"

namespace wheelleg::mpc {

double behavior_cost(std::span<const Eigen::VectorXd> errors,
                     std::span<const Eigen::VectorXd> inputs,
                     const Eigen::VectorXd& terminal_error, const CostWeights& weights) {
  if (errors.size() != inputs.size()) {
    throw DomainError("behavior_cost: error and input sequences differ in length");
  }
  if (terminal_error.size() != weights.terminal.size()) {
    throw DomainError("behavior_cost: terminal error dimension mismatch");
  }
  double stage = 0.0;
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (errors[k].size() != weights.stage.size() || inputs[k].size() != weights.input.size()) {
      throw DomainError("behavior_cost: stage dimension mismatch");
    }
    stage += errors[k].cwiseProduct(weights.stage).dot(errors[k]);
    stage += inputs[k].cwiseProduct(weights.input).dot(inputs[k]);
  }
  return stage * weights.dt + terminal_error.cwiseProduct(weights.terminal).dot(terminal_error);
}

}  // namespace wheelleg::mpc
