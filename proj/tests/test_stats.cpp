#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sehs/errors.hpp"
#include "sehs/rng.hpp"
#include "sehs/stats.hpp"

using namespace sehs;

TEST_SUITE("stats") {

TEST_CASE("mean and population variance") {
  CHECK(mean({1, 2, 3, 4}) == doctest::Approx(2.5));
  CHECK(variance({1, 2, 3, 4}) == doctest::Approx(1.25));
  CHECK(variance({5, 5, 5}) == doctest::Approx(0.0));
}

TEST_CASE("pearson matches a hand-computed value") {
  // Independently computed: r = 6 / sqrt(10 * 6).
  CHECK(pearson({1, 2, 3, 4, 5}, {2, 4, 5, 4, 5}) ==
        doctest::Approx(0.7745966692414834).epsilon(1e-12));
}

TEST_CASE("pearson is exactly +-1 on affine images") {
  const std::vector<double> x = {0.3, 1.7, -2.0, 5.5, 4.1};
  std::vector<double> up, down;
  for (double v : x) {
    up.push_back(3.0 * v + 1.0);
    down.push_back(-0.5 * v + 2.0);
  }
  CHECK(pearson(x, up) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, down) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pearson rejects degenerate inputs") {
  CHECK_THROWS_AS(pearson({1, 2}, {1, 2, 3}), data_error);
  CHECK(pearson({1, 1, 1}, {1, 2, 3}) == 0.0);  // zero variance: defined as 0
}

TEST_CASE("least-squares fit matches a reference implementation") {
  // x = 0..4, y = {1,2,1,3,2}: slope 0.3, intercept 1.2, two-sided
  // p = 0.3189317919 (reference statistical package).
  const SlopeFit fit = fit_slope({0, 1, 2, 3, 4}, {1, 2, 1, 3, 2});
  CHECK(fit.slope == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(fit.p_value == doctest::Approx(0.31893179191277526).epsilon(1e-9));
  CHECK(fit.n == 5);
}

TEST_CASE("slope of uncorrelated noise is insignificant, of a trend significant") {
  Rng rng(42);
  std::vector<double> x, noise, trend;
  for (int i = 0; i < 200; ++i) {
    x.push_back(i);
    noise.push_back(rng.gaussian());
    trend.push_back(0.05 * i + rng.gaussian());
  }
  CHECK(fit_slope(x, noise).p_value > 0.01);
  CHECK(fit_slope(x, trend).p_value < 1e-6);
  CHECK(fit_slope(x, trend).slope > 0.0);
}

TEST_CASE("regularized incomplete beta matches closed forms") {
  CHECK(incomplete_beta(2, 3, 0.5) == doctest::Approx(0.6875).epsilon(1e-12));
  // I_{1/4}(1/2, 1/2) = (2/pi) * asin(1/2) = 1/3.
  CHECK(incomplete_beta(0.5, 0.5, 0.25) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(incomplete_beta(2, 3, 0.0) == doctest::Approx(0.0));
  CHECK(incomplete_beta(2, 3, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("incomplete beta symmetry I_x(a,b) = 1 - I_{1-x}(b,a)") {
  for (const double x : {0.1, 0.37, 0.5, 0.83}) {
    CHECK(incomplete_beta(1.7, 3.2, x) ==
          doctest::Approx(1.0 - incomplete_beta(3.2, 1.7, 1.0 - x)).epsilon(1e-10));
  }
}

TEST_CASE("two-sided t tail probabilities match reference values") {
  CHECK(student_t_sf_two_sided(0.0, 5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(student_t_sf_two_sided(2.5, 10) ==
        doctest::Approx(0.031446844236608776).epsilon(1e-9));
  CHECK(student_t_sf_two_sided(4.0, 28) ==
        doctest::Approx(0.00042020685710655734).epsilon(1e-7));
  // Symmetric in the sign of t.
  CHECK(student_t_sf_two_sided(-2.5, 10) ==
        doctest::Approx(student_t_sf_two_sided(2.5, 10)).epsilon(1e-12));
}

TEST_CASE("deterministic rng streams repeat and differ across seeds") {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  bool any_diff = false;
  Rng a2(7);
  for (int i = 0; i < 10; ++i) any_diff |= (a2.uniform() != c.uniform());
  CHECK(any_diff);
}

TEST_CASE("uniform_int covers its range without bias artifacts at the edges") {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_int(7)];
  for (int k = 0; k < 7; ++k) {
    CHECK(counts[k] > 9000);
    CHECK(counts[k] < 11000);
  }
}

TEST_CASE("gaussian moments are sane") {
  Rng rng(3);
  std::vector<double> xs;
  for (int i = 0; i < 50000; ++i) xs.push_back(rng.gaussian(2.0, 0.5));
  CHECK(mean(xs) == doctest::Approx(2.0).epsilon(0.01));
  CHECK(std::sqrt(variance(xs)) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("shuffle is a permutation and seed-stable") {
  Rng r1(9), r2(9);
  std::vector<int> a{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, b = a;
  r1.shuffle(a);
  r2.shuffle(b);
  CHECK(a == b);
  std::vector<int> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

}  // TEST_SUITE
