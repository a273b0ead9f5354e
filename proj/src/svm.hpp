#pragma once

#include "features.hpp"

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace c2f {

// Linear one-class SVM kept over a sliding window of retained vectors.
//
// W and rho solve the nu-one-class dual
//
//   min 1/2 a'Qa   s.t.  0 <= a_i <= 1/(nu n),  sum a_i = 1,   Q_ij = x_i . x_j
//
// with W = sum a_i x_i and rho the offset of the supporting hyperplane.
// Scores are
//
//   score(T) = clip((W.T - b) / s, -1, 1),   b = (1 - nu) rho,
//
// where s is the largest value of W.x - b over the retained window, so the
// most typical training vector scores 1 and the zero crossing sits a
// fraction nu below the hyperplane.
//
// Updates append to the window (evicting the oldest beyond the budget) and
// re-solve the dual over the window. An update with a vector already in the
// window only refreshes its age.
class OneClassSvm {
 public:
  static OneClassSvm train(std::span<const FeatureVector> vectors, double nu, std::size_t budget);

  void update(const FeatureVector& vector);

  // W.T - b, unclipped.
  double decision_value(std::span<const double> t) const;
  double score(const FeatureVector& t) const;

  const std::vector<double>& weights() const { return weights_; }
  double rho() const { return rho_; }
  double bias() const { return bias_; }
  double scale() const { return scale_; }
  double nu() const { return nu_; }
  std::size_t budget() const { return budget_; }
  std::size_t dimension() const { return weights_.size(); }
  const std::deque<std::vector<double>>& retained() const { return retained_; }
  // Dual coefficients, aligned with retained().
  const std::vector<double>& alphas() const { return alphas_; }

  bool operator==(const OneClassSvm&) const = default;

 private:
  OneClassSvm() = default;
  void solve();

  double nu_ = 0.1;
  std::size_t budget_ = 50;
  std::deque<std::vector<double>> retained_;
  std::vector<double> alphas_;
  std::vector<double> weights_;
  double rho_ = 0.0;
  double bias_ = 0.0;
  double scale_ = 1.0;
};

}  // namespace c2f
