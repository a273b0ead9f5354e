#pragma once

#include "features.hpp"
#include "image.hpp"

#include <optional>
#include <span>
#include <vector>

namespace c2f {

// Polar sampling pattern around the previous target center.
struct CandidateGenSpec {
  std::vector<double> radii;  // pixels, positive and increasing
  double angle_step_deg = 30.0;
  bool include_center = true;

  void validate() const;
};

// Default pattern: radii at the given fractions of the larger target side.
CandidateGenSpec candidate_spec_for(const BoundingBox& box, std::span<const double> radius_factors,
                                    double angle_step_deg, bool include_center);

struct CandidateRegion {
  cv::Point2d center;
  BoundingBox box;
  FeatureVector feature;
  std::optional<double> likelihood;
};

std::vector<CandidateRegion> generate_candidates(cv::Point2d last_center, const BoundingBox& last_box,
                                                 const CandidateGenSpec& spec, cv::Size frame_size);

// Likelihood-weighted mean of the top-q candidate centers. Candidates with
// non-positive likelihood are dropped from the top-q; if none remain the
// best candidate's center is returned.
cv::Point2d coarse_center(std::span<const CandidateRegion> candidates, std::size_t q);

// Index of the highest-likelihood candidate (first one on ties).
std::size_t best_candidate(std::span<const CandidateRegion> candidates);

}  // namespace c2f
