#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sampro/rng.hpp"
#include "sampro/subsample.hpp"
#include "test_helpers.hpp"

using namespace sampro;
using sampro::testing::make_design;
using sampro::testing::make_multiset;
using sampro::testing::three_point_eval;

TEST_CASE("iid draws from a point mass return only that point") {
  const EvalMatrix eval = three_point_eval(1);
  const DesignMeasure mass = make_design(eval.candidates, {1}, {1.0});
  const SampleMultiset x = draw_iid(mass, 20, 123);
  REQUIRE(x.size() == 20);
  for (Eigen::Index idx : x.indices) CHECK(idx == 1);
}

TEST_CASE("iid draw frequencies match the design weights") {
  const EvalMatrix eval = three_point_eval(2);
  const DesignMeasure half = make_design(eval.candidates, {0, 2}, {0.5, 0.5});
  const SampleMultiset x = draw_iid(half, 10000, 42);
  Eigen::Index zeros = 0;
  for (Eigen::Index idx : x.indices) {
    CHECK((idx == 0 || idx == 2));
    if (idx == 0) ++zeros;
  }
  const double freq = static_cast<double>(zeros) / 10000.0;
  CHECK(std::abs(freq - 0.5) <= 0.02);
}

TEST_CASE("iid draws are reproducible from the seed") {
  const EvalMatrix eval = three_point_eval(2);
  const DesignMeasure half = make_design(eval.candidates, {0, 2}, {0.5, 0.5});
  const SampleMultiset a = draw_iid(half, 50, 7);
  const SampleMultiset b = draw_iid(half, 50, 7);
  const SampleMultiset c = draw_iid(half, 50, 8);
  CHECK(a.indices == b.indices);
  CHECK(a.indices != c.indices);
}

TEST_CASE("subsampling the endpoint design balances the multiset") {
  const EvalMatrix eval = three_point_eval(2);
  const DesignMeasure half = make_design(eval.candidates, {0, 2}, {0.5, 0.5});
  const auto [x, report] = subsample_to(eval, half, 4, 7);
  CHECK(x.indices == std::vector<Eigen::Index>{0, 0, 2, 2});
  // G_X = I, so the constant is sup_x sqrt(1 + x^2) = sqrt(2).
  CHECK(report.discretization_constant == doctest::Approx(std::sqrt(2.0)));
  CHECK(discretization_constant(eval, x) == doctest::Approx(std::sqrt(2.0)));
  CHECK(report.achieved_size == 4);
  CHECK(report.target_size == 4);
  CHECK(report.retries_used == 0);
  CHECK(report.lower_frame_bound > 0.0);

  // The reported seed reproduces the attempt's iid pool deterministically.
  const SampleMultiset again = draw_iid(half, 14, report.seed);
  CHECK(again.size() == 14);
}

TEST_CASE("a constant space subsamples with constant one") {
  const EvalMatrix eval = three_point_eval(1);
  const DesignMeasure uniform =
      make_design(eval.candidates, {0, 1, 2}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto [x, report] = subsample_to(eval, uniform, 2, 5);
  CHECK(x.size() == 2);
  CHECK(report.discretization_constant == doctest::Approx(1.0));
}

TEST_CASE("subsampling validates the target size") {
  const EvalMatrix eval = three_point_eval(2);
  const DesignMeasure half = make_design(eval.candidates, {0, 2}, {0.5, 0.5});
  CHECK_THROWS_AS(subsample_to(eval, half, 2, 1), InvalidInput);
}

TEST_CASE("exhausted retries raise a failure carrying the best attempt") {
  const EvalMatrix eval = three_point_eval(2);
  // Essentially all mass on one atom: every pool is rank deficient.
  const DesignMeasure degenerate = make_design(eval.candidates, {0, 2}, {1.0 - 1e-9, 1e-9});
  try {
    subsample_to(eval, degenerate, 3, 1, 2);
    FAIL("expected SubsampleFailure");
  } catch (const SubsampleFailure& failure) {
    CHECK(std::isinf(failure.best_report.discretization_constant));
    CHECK(std::string(failure.what()).find("attempts") != std::string::npos);
  }
}

TEST_CASE("union of multisets concatenates and keeps the grid") {
  const EvalMatrix eval = three_point_eval(2);
  const SampleMultiset a = make_multiset(eval.candidates, {0, 2});
  const SampleMultiset b = make_multiset(eval.candidates, {1, 2});
  const SampleMultiset z = union_multisets(a, b);
  CHECK(z.indices == std::vector<Eigen::Index>{0, 1, 2, 2});

  Eigen::MatrixXd other(2, 1);
  other << 0.0, 1.0;
  const CandidateSetPtr different = build_candidate_set(ExplicitDomain{other});
  const SampleMultiset c = make_multiset(different, {0, 1});
  CHECK_THROWS_AS(union_multisets(a, c), InvalidInput);
}

TEST_CASE("the union of equal-size multisets averages their squared norms") {
  const EvalMatrix eval = sampro::testing::interval_eval(3, 9);
  const SampleMultiset a = make_multiset(eval.candidates, {0, 3, 5, 8});
  const SampleMultiset b = make_multiset(eval.candidates, {1, 1, 4, 7});
  const SampleMultiset z = union_multisets(a, b);
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd f(9);
    for (Eigen::Index k = 0; k < 9; ++k) f(k) = rng.normal();
    auto mean_sq = [&](const SampleMultiset& x) {
      double s = 0.0;
      for (Eigen::Index idx : x.indices) s += f(idx) * f(idx);
      return s / static_cast<double>(x.size());
    };
    CHECK(std::abs(mean_sq(z) - 0.5 * (mean_sq(a) + mean_sq(b))) <= 1e-12);
  }
}

TEST_CASE("discretization constant handbook values") {
  const EvalMatrix eval = three_point_eval(2);
  CHECK(discretization_constant(eval, make_multiset(eval.candidates, {0, 2})) ==
        doctest::Approx(std::sqrt(2.0)));
  const EvalMatrix constants = three_point_eval(1);
  CHECK(discretization_constant(constants, make_multiset(constants.candidates, {1, 2})) ==
        doctest::Approx(1.0));
  // Two copies of the midpoint cannot norm (1, t).
  CHECK_THROWS_AS(discretization_constant(eval, make_multiset(eval.candidates, {1, 1})),
                  SingularMeasure);
}

TEST_CASE("the discretization constant is never below one") {
  const EvalMatrix eval = sampro::testing::interval_eval(3, 17);
  const SampleMultiset x = make_multiset(eval.candidates, {0, 4, 8, 12, 16});
  CHECK(discretization_constant(eval, x) >= 1.0 - 1e-10);
}

TEST_CASE("subsampling is reproducible from the seed") {
  const EvalMatrix eval = sampro::testing::torus_eval(3, 32);
  DesignMeasure uniform;
  uniform.candidates = eval.candidates;
  for (Eigen::Index k = 0; k < 32; ++k) uniform.support.push_back(k);
  uniform.weights = Eigen::VectorXd::Constant(32, 1.0 / 32.0);
  const auto [xa, ra] = subsample_to(eval, uniform, 6, 99);
  const auto [xb, rb] = subsample_to(eval, uniform, 6, 99);
  CHECK(xa.indices == xb.indices);
  CHECK(ra.discretization_constant == rb.discretization_constant);
  CHECK(ra.seed == rb.seed);
}
