#pragma once

#include <string_view>
#include <vector>

namespace uam::vertidrome {

// Delay-based airside service grade on the 95th-percentile slot delay:
// A <= 60 s, B <= 180 s, C <= 600 s, D above.
enum class LosGrade { A, B, C, D, no_traffic };

std::string_view to_string(LosGrade g);

struct AirsideLoS {
  int vertidrome = 0;
  double period_start_s = 0.0;
  double period_end_s = 0.0;
  std::size_t movements = 0;
  double mean_delay_s = 0.0;
  double p95_delay_s = 0.0;
  LosGrade grade = LosGrade::no_traffic;
};

LosGrade grade_for(double p95_delay_s);

// Nearest-rank percentile, q in (0, 1]. Empty input gives 0.
double percentile_nearest_rank(std::vector<double> values, double q);

AirsideLoS airside_los(int vertidrome, const std::vector<double>& delays_s, double period_start_s = 0.0,
                       double period_end_s = 0.0);

}  // namespace uam::vertidrome
