#pragma once

#include <string>
#include <vector>

namespace stlf {

struct TrainingInfo {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  int iterations = 0;
  bool converged = false;
  bool warning = false;              // set when the solver stopped abnormally
  std::string message;
  std::vector<double> loss_history;  // GBRT: training MSE after each stage, stage 0 first
};

}  // namespace stlf
