#include <catch_amalgamated.hpp>

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "spinon/formfactor.hpp"
#include "spinon/parallel.hpp"
#include "spinon/quadrature.hpp"

using Catch::Matchers::WithinAbs;
constexpr double pi = std::numbers::pi;

TEST_CASE("quadrature settings validation") {
  spinon::QuadratureSpec s;
  CHECK_NOTHROW(s.validate());
  using Mutator = void (*)(spinon::QuadratureSpec &);
  for (Mutator bad : {+[](spinon::QuadratureSpec &q) { q.abs_tol = 0.0; },
                      +[](spinon::QuadratureSpec &q) { q.rel_tol = -1e-3; },
                      +[](spinon::QuadratureSpec &q) { q.split_point = 0.0; },
                      +[](spinon::QuadratureSpec &q) { q.max_subdivisions = 0; }}) {
    spinon::QuadratureSpec q;
    bad(q);
    CHECK_THROWS_AS(q.validate(), spinon::DomainError);
  }
}

TEST_CASE("elementary integrals with conservative error estimates") {
  const spinon::QuadratureSpec spec;
  struct Case {
    double (*f)(double);
    double a, b, exact;
  };
  const Case cases[] = {
      {[](double x) { return x * x; }, 0.0, 1.0, 1.0 / 3.0},
      {[](double x) { return std::sin(x); }, 0.0, pi, 2.0},
      {[](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
  };
  for (const auto &c : cases) {
    const auto r = spinon::integrate_adaptive(c.f, c.a, c.b, spec);
    CHECK(std::abs(r.value - c.exact) <= std::max(r.error, 4e-16));
    CHECK(r.error <= spec.target(r.value));
  }
}

TEST_CASE("form-factor integrand on [0, 40] is reproducible across subdivision limits") {
  const spinon::FormFactorArg arg{0.0, pi / 2.0};
  auto f = [&](double x) { return spinon::form_factor_integrand(x, spinon::FormFactorSign::plus, arg); };
  spinon::QuadratureSpec lo, hi;
  lo.max_subdivisions = 60;
  hi.max_subdivisions = 600;
  hi.abs_tol = hi.rel_tol = 1e-13;
  const auto a = spinon::integrate_adaptive(f, 0.0, 40.0, lo);
  const auto b = spinon::integrate_adaptive(f, 0.0, 40.0, hi);
  CHECK_THAT(a.value, WithinAbs(b.value, 1e-10));
  CHECK(std::abs(a.value - b.value) <= a.error + b.error);
}

TEST_CASE("non-convergence is reported") {
  spinon::QuadratureSpec spec;
  spec.max_subdivisions = 3;
  spec.abs_tol = spec.rel_tol = 1e-14;
  auto f = [](double x) { return std::sin(1.0 / x); };
  CHECK_THROWS_AS(spinon::integrate_adaptive(f, 1e-6, 1.0, spec), spinon::ConvergenceError);
  CHECK_THROWS_AS(spinon::integrate_adaptive(f, 1.0, 1.0, spec), spinon::DomainError);
}

TEST_CASE("uniform breakpoints cover the interval") {
  const auto pts = spinon::uniform_breakpoints(2.0, 7.5, 1.0);
  REQUIRE(pts.size() == 7);
  CHECK(pts.front() == 2.0);
  CHECK(pts.back() == 7.5);
  for (std::size_t i = 1; i < pts.size(); ++i)
    CHECK(pts[i] - pts[i - 1] <= 1.0 + 1e-15);
}

TEST_CASE("parallel map keeps index order and propagates errors") {
  for (int threads : {1, 2, 5}) {
    const auto v = spinon::parallel_map<std::size_t>(100, threads, [](std::size_t i) { return i * i; });
    REQUIRE(v.size() == 100);
    for (std::size_t i = 0; i < v.size(); ++i)
      CHECK(v[i] == i * i);
  }
  CHECK_THROWS_AS(spinon::parallel_map<int>(10, 3,
                                            [](std::size_t i) -> int {
                                              if (i == 7)
                                                throw std::runtime_error("boom");
                                              return 0;
                                            }),
                  std::runtime_error);
}
