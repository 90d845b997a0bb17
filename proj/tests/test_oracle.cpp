#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support.hpp"
#include "trirl/error.hpp"
#include "trirl/geometry.hpp"
#include "trirl/oracle.hpp"
#include "trirl/ta_failure.hpp"

using namespace trirl;
using std::numbers::pi;
using trirl::testing::random_image;
using trirl::testing::random_unit;

namespace {

ImageTensor basis(Shape s, std::size_t i) {
  ImageTensor e(s);
  e[i] = 1.0;
  return e;
}

} // namespace

TEST_CASE("halfspace labels and optimum") {
  const Shape s{2, 2, 1};
  HalfspaceOracle h(basis(s, 0), -0.7);
  ImageTensor x(s, 0.5);
  CHECK(h.predict(x).class_index == 0);
  CHECK(h.optimal_distance(x) == doctest::Approx(0.2));
  x[0] = 1.2; // margin +0.5
  CHECK(h.predict(x).class_index == 1);
  x[0] = 0.7; // exactly on the plane: not > 0
  CHECK(h.predict(x).class_index == 0);
  // non-unit normals are measured in their own norm
  HalfspaceOracle h2(3.0 * basis(s, 1), -3.0 * 0.9);
  CHECK(h2.optimal_distance(ImageTensor(s, 0.5)) == doctest::Approx(0.4));
}

TEST_CASE("sphere labels and optimum") {
  const Shape s{3, 3, 1};
  const ImageTensor c(s, 0.5);
  SphereOracle sp(c, 0.3);
  CHECK(sp.predict(c).class_index == 0);
  CHECK(sp.optimal_distance(c) == doctest::Approx(0.3));
  ImageTensor out = c;
  out[4] += 0.31;
  CHECK(sp.predict(out).class_index == 1);
  CHECK(sp.optimal_distance(out) == doctest::Approx(0.01));
}

TEST_CASE("polytope optimum matches a brute-force 2-D grid") {
  const Shape s{2, 1, 1};
  Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<PolytopeOracle::Face> faces;
    const ImageTensor x(s, std::vector<double>{0.5, 0.5});
    for (int k = 0; k < 2; ++k) {
      const ImageTensor w = random_unit(s, rng);
      faces.push_back({w, -dot(w, x) - (0.05 + 0.3 * rng.uniform())});
    }
    PolytopeOracle p(faces);
    REQUIRE(p.predict(x).class_index == 0);
    double best = 1e9;
    const int n = 801;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const ImageTensor q(s, std::vector<double>{-0.5 + 2.0 * i / (n - 1), -0.5 + 2.0 * j / (n - 1)});
        if (p.predict(q).class_index == 1)
          best = std::min(best, l2_distance(q, x));
      }
    CHECK(std::abs(best - p.optimal_distance(x)) < 2.0 / (n - 1) * 1.5);
  }
}

TEST_CASE("halfspace crossing found by bisection matches the analytic point") {
  Rng rng(9);
  const Shape s{4, 4, 1};
  for (int i = 0; i < 50; ++i) {
    const ImageTensor w = random_unit(s, rng);
    const ImageTensor x = random_image(s, rng, 0.3, 0.7);
    HalfspaceOracle h(w, -dot(w, x) - 0.2);
    ImageTensor u = random_unit(s, rng);
    if (dot(u, w) < 0)
      u = -1.0 * u;
    if (dot(u, w) < 0.05)
      continue;
    const double t_star = 0.2 / dot(u, w);
    double lo = 0.0, hi = 2.0 * t_star;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (h.predict(x + mid * u).class_index == 1 ? hi : lo) = mid;
    }
    CHECK(std::abs(hi - t_star) < 1e-9);
  }
}

TEST_CASE("budget wrapper") {
  const Shape s{2, 2, 1};
  HalfspaceOracle h(basis(s, 0), -0.7);
  BudgetedOracle b(h, 3);
  const ImageTensor x(s, 0.5);
  for (std::uint64_t i = 1; i <= 3; ++i)
    CHECK(b.classify(x).query_index == i);
  CHECK_THROWS_AS(b.classify(x), BudgetExhausted);
  CHECK(b.budget().used == 3);
  CHECK(b.budget().exhausted());
  BudgetedOracle b2(h, 5);
  CHECK_THROWS_AS(b2.classify(ImageTensor({4, 1, 1})), ShapeMismatch);
  CHECK(b2.budget().used == 0);
}

TEST_CASE("synthetic oracles are pure") {
  Rng rng(2);
  const Shape s{3, 3, 2};
  SphereOracle sp(ImageTensor(s, 0.5), 0.8);
  for (int i = 0; i < 100; ++i) {
    const ImageTensor q = random_image(s, rng);
    CHECK(sp.predict(q) == sp.predict(q));
  }
}

TEST_CASE("ta-failure fixtures: region audit") {
  for (const auto &params : ta_failure_catalog()) {
    CAPTURE(params.id);
    const TaFailureFixture f = make_ta_failure_fixture(params.id);
    TaFailureOracle o = f.oracle();
    // benign point correct, start adversary adversarial
    CHECK(o.predict(f.x) == f.label);
    CHECK_FALSE(o.predict(f.start) == f.label);
    // 10^4-point audit: region non-empty, and part of it lies beyond the TA path
    const RegionAudit audit = audit_region(f, pi / 4);
    CHECK(audit.samples == 10000);
    CHECK(audit.adversarial > 0);
    CHECK(audit.beyond_reach > 0);
  }
}

TEST_CASE("ta-failure fixtures: TA path misses, larger alpha hits") {
  const double step = pi / 64;
  for (const auto &params : ta_failure_catalog()) {
    CAPTURE(params.id);
    const TaFailureFixture f = make_ta_failure_fixture(params.id);
    TaFailureOracle o = f.oracle();
    Rng rng(params.seed + 1);
    const FrequencySubspace sub = sample_subspace(f.x, f.start, 0.5, rng);
    const auto query = [&](double alpha, double beta) {
      const TriangleParams p{alpha, beta, pi / 16, beta_upper_bound(alpha)};
      return !(o.predict(round_to_f32(candidate(f.x, f.start, p, sub))) == f.label);
    };
    // TA starts at pi/4 and only moves down after failures; sweep its whole
    // beta window at each angle it can visit
    for (double alpha = pi / 4; alpha >= pi / 16 - 1e-12; alpha -= 0.01) {
      const double b0 = initial_beta(alpha, pi / 16);
      CHECK_FALSE(query(alpha, b0));
      CHECK_FALSE(query(alpha, -b0));
    }
    // first grid angle inside the wedge
    const int k = static_cast<int>(std::ceil((params.wedge_lo - pi / 4) / step));
    const double alpha = pi / 4 + k * step;
    CHECK(query(alpha, initial_beta(alpha, pi / 16)));
    if (params.id == "f1" || params.id == "f4")
      CHECK(k == 3);
  }
}
