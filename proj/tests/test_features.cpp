#include <doctest.h>

#include "error.hpp"
#include "features.hpp"
#include "support.hpp"

#include <opencv2/imgproc.hpp>

using namespace c2f;

namespace {

ActivationStack stack_of(std::initializer_list<cv::Mat> maps) {
  ActivationStack s;
  for (const auto& m : maps) s.maps.push_back(m.clone());
  return s;
}

}  // namespace

TEST_CASE("pool_features sums each map and scales by lambda") {
  const auto s = stack_of({(cv::Mat_<double>(2, 2) << 1, 2, 3, 4), cv::Mat::zeros(2, 2, CV_64F)});
  const FeatureVector t = pool_features(s, 0.1);
  REQUIRE(t.size() == 2);
  // Hand sum: 0.1 * (1 + 2 + 3 + 4).
  CHECK(t.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(t.values[1] == 0.0);
  CHECK(t.lambda == 0.1);
}

TEST_CASE("pool_features of all-zero maps is the zero vector") {
  ActivationStack s;
  for (int k = 0; k < 5; ++k) s.maps.push_back(cv::Mat::zeros(7, 7, CV_64F));
  for (double v : pool_features(s, 0.3).values) CHECK(v == 0.0);
}

TEST_CASE("pool_features rejects empty stacks and bad lambda") {
  CHECK_THROWS_AS(pool_features(ActivationStack{}, 0.1), Error);
  const auto s = stack_of({cv::Mat::ones(2, 2, CV_64F)});
  CHECK_THROWS_AS(pool_features(s, 0.0), Error);
  try {
    pool_features(ActivationStack{}, 0.1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
}

TEST_CASE("pool_features is linear and lambda is a global factor") {
  const cv::Size sz(7, 7);
  ActivationStack a, b, mix;
  for (int k = 0; k < 4; ++k) {
    a.maps.push_back(testing::random_grid(sz, 10 + k));
    b.maps.push_back(testing::random_grid(sz, 20 + k));
    mix.maps.push_back(2.5 * a.maps.back() - 0.75 * b.maps.back());
  }
  const auto pa = pool_features(a, 0.1), pb = pool_features(b, 0.1), pm = pool_features(mix, 0.1);
  for (std::size_t h = 0; h < 4; ++h) CHECK(std::abs(pm.values[h] - (2.5 * pa.values[h] - 0.75 * pb.values[h])) < 1e-9);

  const auto p1 = pool_features(a, 1.0), p01 = pool_features(a, 0.01);
  // With lambda' = 1 the factor applies to the same sum, so equality is exact.
  for (std::size_t h = 0; h < 4; ++h) CHECK(p01.values[h] == 0.01 * p1.values[h]);
}

TEST_CASE("extract_patch: full-frame identity crop") {
  const cv::Mat frame = testing::random_gray({24, 16}, 3);
  const ImagePatch p = extract_patch(frame, {0, 0, 24, 16}, {24, 16});
  REQUIRE(p.pixels.size() == frame.size());
  double maxdiff = cv::norm(p.pixels, frame, cv::NORM_INF);
  CHECK(maxdiff < 1e-6);
}

TEST_CASE("extract_patch: uniform frame gives a uniform patch of the same gray") {
  const cv::Mat frame(10, 10, CV_32F, cv::Scalar(0.37f));
  const ImagePatch p = extract_patch(frame, {2.5, 3.0, 4.0, 5.5}, {9, 13});
  REQUIRE(p.pixels.size() == cv::Size(9, 13));
  double lo, hi;
  cv::minMaxLoc(p.pixels, &lo, &hi);
  CHECK(lo == doctest::Approx(0.37).epsilon(1e-6));
  CHECK(hi == doctest::Approx(0.37).epsilon(1e-6));
}

TEST_CASE("extract_patch: out-of-frame columns replicate the edge (index-clamping oracle)") {
  const cv::Mat frame = testing::random_gray({20, 12}, 5);
  // Box half outside the left edge, sampled at native resolution.
  const BoundingBox box{-5, 2, 10, 8};
  const ImagePatch p = extract_patch(frame, box, {10, 8});
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 10; ++u) {
      const int sx = std::clamp(u - 5, 0, frame.cols - 1), sy = std::clamp(v + 2, 0, frame.rows - 1);
      CHECK(p.pixels.at<float>(v, u) == doctest::Approx(frame.at<float>(sy, sx)).epsilon(1e-6));
    }
}

TEST_CASE("extract_patch: box entirely outside is an out-of-bounds error") {
  const cv::Mat frame = testing::random_gray({20, 12}, 5);
  try {
    extract_patch(frame, {30, 0, 5, 5}, {5, 5});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfBounds);
  }
  CHECK_THROWS_AS(extract_patch(frame, {0, 0, 0, 5}, {5, 5}), Error);
}

TEST_CASE("augment: counts and identity transform") {
  const ImagePatch p{testing::random_gray({28, 28}, 9)};
  CHECK(augment(p, {}).size() == 1);
  const auto same = augment(p, {AugmentEntry{0.0, 1.0, 0.0, 0.0}});
  REQUIRE(same.size() == 2);
  CHECK(cv::norm(same[1].pixels, p.pixels, cv::NORM_INF) == 0.0);
  CHECK(default_augment_spec().size() == 12);
  CHECK(augment(p, default_augment_spec()).size() == 13);
}

TEST_CASE("synthetic backend: shape, determinism and non-degeneracy") {
  const SyntheticBackend backend(7);
  CHECK(backend.depth() == 32);
  CHECK(backend.map_size() == cv::Size(7, 7));
  const ImagePatch p{testing::random_gray({28, 28}, 11)};
  const ActivationStack s1 = compute_activations(backend, p);
  const ActivationStack s2 = SyntheticBackend(7).compute(p);
  REQUIRE(s1.depth() == 32);
  CHECK(s1.map_size() == cv::Size(7, 7));
  bool identical = true;
  for (int k = 0; k < 32; ++k) identical = identical && testing::same_bits(s1.maps[k], s2.maps[k]);
  CHECK(identical);

  ImagePatch rotated;
  cv::rotate(p.pixels, rotated.pixels, cv::ROTATE_90_CLOCKWISE);
  const ActivationStack sr = compute_activations(backend, rotated);
  bool differs = false;
  for (int k = 0; k < 32; ++k) differs = differs || !testing::same_bits(s1.maps[k], sr.maps[k]);
  CHECK(differs);
  for (const auto& m : s1.maps) {
    double lo;
    cv::minMaxLoc(m, &lo);
    CHECK(lo >= 0.0);
  }
}

TEST_CASE("synthetic backend: flat patches give zero activations") {
  const SyntheticBackend backend(7);
  const ImagePatch flat{cv::Mat(28, 28, CV_32F, cv::Scalar(0.6f))};
  for (double v : pool_features(compute_activations(backend, flat), 0.1).values) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("extract_patch then activations is deterministic end to end") {
  const cv::Mat frame = testing::random_gray({80, 60}, 13);
  Frame f = Frame::from_mat(frame);
  const SyntheticBackend backend(7);
  const auto a = describe_region(backend, f, {10.3, 7.7, 30, 25}, 0.1);
  const auto b = describe_region(backend, f, {10.3, 7.7, 30, 25}, 0.1);
  CHECK(a.values == b.values);
}

TEST_CASE("deep backend: a missing model file is a backend error") {
  try {
    DeepBackend("/nonexistent/model.onnx", "");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Backend);
  }
  BackendOptions opts;
  opts.kind = "deep";
  CHECK_THROWS_AS(make_backend(opts), Error);
  opts.kind = "synthetic";
  CHECK(make_backend(opts)->name() == "synthetic");
}
