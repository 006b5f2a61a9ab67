#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qterm/vec.hpp"

namespace qterm {

enum class RunStatus {
  Ok,
  MaxIterExceeded,
  FevalBudgetExceeded,
  LineSearchFailure,
  Degenerate,
  NumericalFailure,
};

const char* to_string(RunStatus status) noexcept;

/// Which rule produced a stepsize.
enum class Branch {
  Sd,              // exact steepest descent
  Initial,         // ||x||_inf / ||g||_inf start
  WarmupBb1,
  Bb1,
  Bb2,
  Day,
  ShortNew,        // min{bb2_{k-1}, bb2_k, alpha_new}
  ShortBbq,        // min{bb2_{k-1}, bb2_k, alpha_bbq}
  ShortBb2Min,     // min{bb2_{k-1}, bb2_k}
  ShortBb2,        // bb2_k alone
  NewDirect,       // Hessian-projected alpha_new
  Bbq,             // alpha_bbq alone
  CurvatureFallback,
};

const char* to_string(Branch branch) noexcept;

struct TraceEntry {
  std::size_t k = 0;        // 1-based iterate index the step is taken from
  double step = 0.0;        // trial stepsize alpha_k
  double taken = 0.0;       // accepted lambda_k (equals step without line search)
  Branch branch = Branch::Sd;
  double gnorm = 0.0;       // ||g_k||_2
  double f = 0.0;           // f(x_k)
  double tau = 0.0;         // threshold in force when alpha_k was chosen
};

struct RunReport {
  RunStatus status = RunStatus::Ok;
  std::size_t iterations = 0;  // steps taken
  std::size_t nfe = 0;
  std::size_t ngrad = 0;
  double final_gnorm = 0.0;    // ||g||_2 for quadratic solvers, ||g||_inf for Algorithm 1
  double final_f = 0.0;
  double wall_time = 0.0;      // seconds
  Vector x;
  std::map<std::string, std::size_t> branch_counts;
  std::vector<TraceEntry> trace;  // filled when tracing is enabled
  std::string message;

  void count(Branch b) { ++branch_counts[to_string(b)]; }
};

}  // namespace qterm
