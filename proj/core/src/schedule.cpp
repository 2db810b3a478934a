#include "kmas/schedule.hpp"

namespace kmas {

SchedulePolicy parse_policy(const std::string& name) {
  if (name == "kmas") return SchedulePolicy::Kmas;
  if (name == "hold") return SchedulePolicy::Hold;
  if (name == "increase") return SchedulePolicy::Increase;
  if (name == "decrease") return SchedulePolicy::Decrease;
  if (name == "random_only") return SchedulePolicy::RandomOnly;
  throw ConfigError("unknown policy '" + name +
                        "' (expected kmas|hold|increase|decrease|random_only)",
                    "schedule.policy");
}

const char* to_string(SchedulePolicy p) {
  switch (p) {
    case SchedulePolicy::Kmas: return "kmas";
    case SchedulePolicy::Hold: return "hold";
    case SchedulePolicy::Increase: return "increase";
    case SchedulePolicy::Decrease: return "decrease";
    case SchedulePolicy::RandomOnly: return "random_only";
  }
  return "?";
}

void RatioSchedule::validate() const {
  if (!(beta_warm >= 0.0 && beta_warm < 1.0))
    throw ConfigError("must be in [0, 1)", "schedule.beta_warm");
  if (!(gamma_peak > 0.0 && gamma_peak < 1.0))
    throw ConfigError("must be in (0, 1)", "schedule.gamma_peak");
  if (!(alpha_max >= 0.0 && alpha_max <= 1.0))
    throw ConfigError("must be in [0, 1]", "schedule.alpha_max");
}

double RatioSchedule::hard_ratio(double p) const {
  switch (policy) {
    case SchedulePolicy::RandomOnly:
      return 0.0;
    case SchedulePolicy::Hold:
      return alpha_max;
    case SchedulePolicy::Increase:
      if (p < beta_warm) return 0.0;
      return alpha_max * (p - beta_warm) / (1.0 - beta_warm);
    case SchedulePolicy::Decrease:
      return alpha_max * (1.0 - p);
    case SchedulePolicy::Kmas: {
      const double peak = peak_progress();
      if (p < beta_warm) return 0.0;
      if (p < peak) return alpha_max * (p - beta_warm) / (peak - beta_warm);
      return alpha_max * (1.0 - p) / (1.0 - peak);
    }
  }
  return 0.0;
}

double progress(long long m, long long t_total) {
  if (t_total == 0) throw ConfigError("must be >= 1", "T_total");
  return static_cast<double>(m) / static_cast<double>(t_total);
}

}  // namespace kmas
