#pragma once

#include <string>

#include "kmas/types.hpp"

namespace kmas {

enum class SchedulePolicy { Kmas, Hold, Increase, Decrease, RandomOnly };

SchedulePolicy parse_policy(const std::string& name);  // throws ConfigError
const char* to_string(SchedulePolicy p);

// Maps training progress p in [0, 1] to the hard-negative ratio alpha.
//
// The kmas policy is piecewise linear: zero through the warmup, a linear
// rise from beta_warm to the peak position, then a linear decay to zero at
// p = 1. The peak sits at P_peak = beta_warm + gamma_peak * (1 - beta_warm),
// which the parameter bounds keep strictly between beta_warm and 1.
struct RatioSchedule {
  SchedulePolicy policy = SchedulePolicy::Kmas;
  double beta_warm = 0.25;   // in [0, 1)
  double gamma_peak = 0.25;  // in (0, 1)
  double alpha_max = 0.4;    // in [0, 1]

  double peak_progress() const { return beta_warm + gamma_peak * (1.0 - beta_warm); }

  void validate() const;  // throws ConfigError on out-of-range parameters

  // alpha for progress p; pure, p in [0, 1].
  double hard_ratio(double p) const;
};

// Completed-iteration ratio p = m / t_total. Throws ConfigError if t_total
// is zero.
double progress(long long m, long long t_total);

}  // namespace kmas
