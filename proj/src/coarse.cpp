#include "coarse.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace c2f {

void CandidateGenSpec::validate() const {
  require(angle_step_deg > 0 && angle_step_deg <= 360, "candidate spec: angle step must lie in (0, 360]");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    require(radii[i] > 0, "candidate spec: radii must be positive");
    require(i == 0 || radii[i] > radii[i - 1], "candidate spec: radii must be increasing");
  }
}

CandidateGenSpec candidate_spec_for(const BoundingBox& box, std::span<const double> radius_factors,
                                    double angle_step_deg, bool include_center) {
  CandidateGenSpec spec;
  const double side = std::max(box.width, box.height);
  for (double f : radius_factors) spec.radii.push_back(f * side);
  spec.angle_step_deg = angle_step_deg;
  spec.include_center = include_center;
  return spec;
}

std::vector<CandidateRegion> generate_candidates(cv::Point2d last_center, const BoundingBox& last_box,
                                                 const CandidateGenSpec& spec, cv::Size frame_size) {
  require(last_box.valid(), "generate_candidates: previous box must have positive area");
  spec.validate();

  auto clamp_to_frame = [&](cv::Point2d p) {
    return cv::Point2d(std::clamp(p.x, 0.0, std::max(0.0, frame_size.width - 1.0)),
                       std::clamp(p.y, 0.0, std::max(0.0, frame_size.height - 1.0)));
  };
  auto make = [&](cv::Point2d c) {
    CandidateRegion r;
    r.center = clamp_to_frame(c);
    r.box = BoundingBox::centered(r.center, last_box.width, last_box.height);
    return r;
  };

  std::vector<CandidateRegion> out;
  if (spec.include_center) out.push_back(make(last_center));
  const int steps = static_cast<int>(std::ceil(360.0 / spec.angle_step_deg - 1e-9));
  for (double radius : spec.radii) {
    for (int k = 0; k < steps; ++k) {
      const double theta = k * spec.angle_step_deg * std::numbers::pi / 180.0;
      out.push_back(make({last_center.x + radius * std::cos(theta), last_center.y + radius * std::sin(theta)}));
    }
  }
  return out;
}

std::size_t best_candidate(std::span<const CandidateRegion> candidates) {
  require(!candidates.empty(), "best_candidate: no candidates");
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    require(candidates[i].likelihood.has_value(), "best_candidate: candidate not scored");
    if (*candidates[i].likelihood > *candidates[best].likelihood) best = i;
  }
  return best;
}

cv::Point2d coarse_center(std::span<const CandidateRegion> candidates, std::size_t q) {
  require(!candidates.empty(), "coarse_center: no candidates");
  require(q >= 1, "coarse_center: q must be at least 1");
  const std::size_t best = best_candidate(candidates);

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return *candidates[a].likelihood > *candidates[b].likelihood;
  });
  order.resize(std::min(q, order.size()));

  double wsum = 0.0, x = 0.0, y = 0.0;
  for (std::size_t idx : order) {
    const double p = *candidates[idx].likelihood;
    if (p <= 0) continue;
    wsum += p;
    x += p * candidates[idx].center.x;
    y += p * candidates[idx].center.y;
  }
  if (wsum <= 0) return candidates[best].center;
  return {x / wsum, y / wsum};
}

}  // namespace c2f
