#include <cmath>

#include "doctest.h"
#include "circreg/error.hpp"
#include "circreg/stats.hpp"

using namespace circreg;

TEST_SUITE("stats") {

TEST_CASE("least squares") {
  const LinearFit f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.r2 == doctest::Approx(1));
  const QuadraticFit q = fit_quadratic({-2, -1, 0, 1, 2}, {5, 2, 1, 2, 5});
  CHECK(q.c2 == doctest::Approx(1));
  CHECK(q.c1 == doctest::Approx(0).epsilon(1e-12));
  CHECK(q.c0 == doctest::Approx(1));
}

TEST_CASE("moments and medians") {
  CHECK(mean({1, 2, 3, 4}) == doctest::Approx(2.5));
  CHECK(variance({1, 2, 3, 4}) == doctest::Approx(5.0 / 3));
  CHECK(median({5, 1, 3}) == 3);
  CHECK(median({4, 1, 3, 2}) == doctest::Approx(2.5));
}

TEST_CASE("Wilson interval") {
  const Interval i = wilson_interval(0.5, 100);
  CHECK(i.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(i.hi == doctest::Approx(0.5962).epsilon(1e-3));
  const Interval z = wilson_interval(0.0, 50);
  CHECK(z.lo == doctest::Approx(0));
  CHECK(z.hi > 0);
}

TEST_CASE("autocorrelation and effective sample size") {
  Rng rng(3);
  std::vector<double> iid, ar;
  double x = 0;
  for (int i = 0; i < 20000; ++i) {
    iid.push_back(rng.uniform());
    x = 0.9 * x + (rng.uniform() - 0.5);
    ar.push_back(x);
  }
  CHECK(effective_sample_size(iid) == doctest::Approx(20000).epsilon(0.15));
  // AR(1) with rho = 0.9 has tau = (1 + rho) / (1 - rho) = 19.
  CHECK(integrated_autocorrelation(ar) == doctest::Approx(19).epsilon(0.25));
  CHECK(block_jackknife_stderr(iid, 20) == doctest::Approx(std::sqrt(1.0 / 12 / 20000)).epsilon(0.3));
}

TEST_CASE("potential scale reduction") {
  Rng rng(4);
  std::vector<std::vector<double>> same(4), apart(4);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 1000; ++i) {
      same[c].push_back(rng.uniform());
      apart[c].push_back(rng.uniform() + c);
    }
  CHECK(gelman_rubin(same) < 1.01);
  CHECK(gelman_rubin(apart) > 1.5);
}

TEST_CASE("bootstrap median interval covers the median") {
  Rng rng(5);
  std::vector<double> v;
  for (int i = 0; i < 2001; ++i) v.push_back(rng.uniform());
  const Interval ci = bootstrap_median_interval(v, rng, 1000);
  CHECK(ci.contains(median(v)));
  CHECK(ci.hi - ci.lo < 0.1);
}

}
