#include "uam/vertidrome/los.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uam/error.hpp"

namespace uam::vertidrome {

std::string_view to_string(LosGrade g) {
  switch (g) {
    case LosGrade::A: return "A";
    case LosGrade::B: return "B";
    case LosGrade::C: return "C";
    case LosGrade::D: return "D";
    case LosGrade::no_traffic: return "no-traffic";
  }
  return "?";
}

LosGrade grade_for(double p95) {
  if (p95 <= 60.0) return LosGrade::A;
  if (p95 <= 180.0) return LosGrade::B;
  if (p95 <= 600.0) return LosGrade::C;
  return LosGrade::D;
}

double percentile_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("percentile must be in (0, 1]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::max<std::size_t>(rank, 1) - 1];
}

AirsideLoS airside_los(int vertidrome, const std::vector<double>& delays_s, double period_start_s,
                       double period_end_s) {
  AirsideLoS out;
  out.vertidrome = vertidrome;
  out.period_start_s = period_start_s;
  out.period_end_s = period_end_s;
  out.movements = delays_s.size();
  if (delays_s.empty()) return out;
  out.mean_delay_s = std::accumulate(delays_s.begin(), delays_s.end(), 0.0) / static_cast<double>(delays_s.size());
  out.p95_delay_s = percentile_nearest_rank(delays_s, 0.95);
  out.grade = grade_for(out.p95_delay_s);
  return out;
}

}  // namespace uam::vertidrome
