#include "svm.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace c2f {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

OneClassSvm OneClassSvm::train(std::span<const FeatureVector> vectors, double nu, std::size_t budget) {
  require(!vectors.empty(), "svm: empty training set");
  require(nu > 0 && nu <= 1, "svm: nu must lie in (0, 1]");
  require(budget >= 1, "svm: budget must be at least 1");
  const std::size_t dim = vectors.front().size();
  require(dim > 0, "svm: zero-length feature vectors");

  OneClassSvm model;
  model.nu_ = nu;
  model.budget_ = budget;
  for (const auto& v : vectors) {
    require(v.size() == dim, "svm: feature vectors differ in length");
    require(all_finite(v.values), "svm: non-finite feature value");
    if (std::find(model.retained_.begin(), model.retained_.end(), v.values) != model.retained_.end()) continue;
    model.retained_.push_back(v.values);
    if (model.retained_.size() > budget) model.retained_.pop_front();
  }
  model.solve();
  return model;
}

void OneClassSvm::update(const FeatureVector& vector) {
  require(vector.size() == dimension(), "svm: update vector has the wrong dimension");
  require(all_finite(vector.values), "svm: non-finite feature value");
  auto it = std::find(retained_.begin(), retained_.end(), vector.values);
  if (it != retained_.end()) {
    // Same point set, same solution: only the eviction order changes.
    const auto idx = static_cast<std::size_t>(it - retained_.begin());
    const double a = alphas_[idx];
    retained_.erase(it);
    alphas_.erase(alphas_.begin() + static_cast<std::ptrdiff_t>(idx));
    retained_.push_back(vector.values);
    alphas_.push_back(a);
    return;
  }
  retained_.push_back(vector.values);
  if (retained_.size() > budget_) retained_.pop_front();
  solve();
}

double OneClassSvm::decision_value(std::span<const double> t) const {
  require(t.size() == weights_.size(), "svm: feature dimension mismatch (got " + std::to_string(t.size()) +
                                           ", model has " + std::to_string(weights_.size()) + ")");
  return dot(weights_, t) - bias_;
}

double OneClassSvm::score(const FeatureVector& t) const {
  return std::clamp(decision_value(t.values) / scale_, -1.0, 1.0);
}

// SMO with second-order working-set selection over the full Gram matrix;
// the window is small (budget-bounded), so Q is materialized.
void OneClassSvm::solve() {
  const std::size_t n = retained_.size();
  const std::size_t dim = retained_.front().size();
  std::vector<double> q(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) q[i * n + j] = q[j * n + i] = dot(retained_[i], retained_[j]);

  const double c = 1.0 / (nu_ * static_cast<double>(n));
  std::vector<double> alpha(n, 1.0 / static_cast<double>(n));
  std::vector<double> grad(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) grad[i] += q[i * n + j] * alpha[j];

  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, q[i * n + i]);
  const double eps = 1e-13 * max_diag;
  constexpr double kTau = 1e-12;
  const std::size_t max_iter = 100000 * std::max<std::size_t>(n, 10);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // i: may grow (alpha < C) with the smallest gradient.
    std::size_t i = n;
    double g_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t)
      if (alpha[t] < c && grad[t] < g_min) g_min = grad[t], i = t;
    // j: may shrink (alpha > 0), chosen by second-order gain.
    std::size_t j = n;
    double g_max = -std::numeric_limits<double>::infinity();
    double best_gain = -1.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha[t] <= 0.0) continue;
      g_max = std::max(g_max, grad[t]);
      if (i == n || grad[t] <= g_min) continue;
      double a = q[i * n + i] + q[t * n + t] - 2.0 * q[i * n + t];
      if (a <= 0) a = kTau;
      const double diff = grad[t] - g_min;
      const double gain = diff * diff / a;
      if (gain > best_gain) best_gain = gain, j = t;
    }
    if (i == n || j == n || g_max - g_min <= eps) break;

    double a = q[i * n + i] + q[j * n + j] - 2.0 * q[i * n + j];
    if (a <= 0) a = kTau;
    const double room_i = c - alpha[i];
    const double room_j = alpha[j];
    const double delta = std::min({(grad[j] - grad[i]) / a, room_i, room_j});
    if (delta <= 0) break;

    alpha[i] = delta == room_i ? c : alpha[i] + delta;
    alpha[j] = delta == room_j ? 0.0 : alpha[j] - delta;
    for (std::size_t t = 0; t < n; ++t) grad[t] += delta * (q[t * n + i] - q[t * n + j]);
  }

  // rho: gradient on free vectors; otherwise the midpoint of the feasible interval.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0 && alpha[t] < c) {
      free_sum += grad[t];
      ++free_count;
    } else if (alpha[t] >= c) {
      lower = std::max(lower, grad[t]);
    } else {
      upper = std::min(upper, grad[t]);
    }
  }
  if (free_count > 0) {
    rho_ = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(lower) && std::isfinite(upper)) {
    rho_ = 0.5 * (lower + upper);
  } else {
    rho_ = std::isfinite(lower) ? lower : upper;
  }

  alphas_ = alpha;
  weights_.assign(dim, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t d = 0; d < dim; ++d) weights_[d] += alpha[t] * retained_[t][d];

  bias_ = (1.0 - nu_) * rho_;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : retained_) best = std::max(best, dot(weights_, v) - bias_);
  // All-zero training data leaves W = 0 and nothing to normalize by.
  scale_ = best > 1e-12 * std::max(1.0, std::abs(rho_)) ? best : 1.0;
}

}  // namespace c2f
