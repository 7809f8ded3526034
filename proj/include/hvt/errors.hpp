#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hvt {

// Input failed a structural check (unitarity, density-matrix invariants,
// dimension agreement, malformed file). Exit code 1 at the CLI.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Support graph of a "unitary" produced a component with |I| != |J|; only
// possible when zero_tol misclassifies an entry.
class BlockStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Schrödinger scaling did not reach its tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Eigen::MatrixXd last_iterate,
                   std::vector<double> residual_history)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        residual_history_(std::move(residual_history)) {}

  const Eigen::MatrixXd& last_iterate() const { return last_iterate_; }
  const std::vector<double>& residual_history() const { return residual_history_; }

 private:
  Eigen::MatrixXd last_iterate_;
  std::vector<double> residual_history_;
};

}  // namespace hvt
