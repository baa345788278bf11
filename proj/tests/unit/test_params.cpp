#include <doctest.h>

#include "ultraflow/errors.hpp"
#include "ultraflow/params.hpp"

using namespace ultraflow;

TEST_CASE("derived exponents") {
  const UltraParams p = UltraParams::make(2.5, 5.0, 2.0, 0.01);
  CHECK(p.d() == 3);
  CHECK(p.kappa() == doctest::Approx(2.0 * 3.0 + 1.0));
  CHECK(p.m() == doctest::Approx(1.0 + 0.4 * (0.5 - 1.0)));
  CHECK_FALSE(p.integer_dimension());
  CHECK(p.regularized_valid());
  CHECK(p.with_beta(1.0).kappa() == doctest::Approx(4.0));
  CHECK(p.with_beta(1.0).m() == doctest::Approx(1.0));
}

TEST_CASE("ceil dimension") {
  CHECK(ceil_dimension(0.25) == 1);
  CHECK(ceil_dimension(3.0) == 3);
  CHECK(ceil_dimension(3.0000001) == 4);
}

TEST_CASE("domain checks") {
  CHECK_THROWS_AS(UltraParams::make(0.0, 3.0), DomainError);
  CHECK_THROWS_AS(UltraParams::make(-1.0, 3.0), DomainError);
  CHECK_THROWS_AS(UltraParams::make(2.0, 0.5), DomainError);
  CHECK_THROWS_AS(UltraParams::make(2.0, 3.0, 0.0), DomainError);
  CHECK_THROWS_AS(UltraParams::make(2.0, 3.0, 1.0, 1e-9), DomainError);
  CHECK_THROWS_AS(UltraParams::make(2.0, 3.0, 1.0, -0.1), DomainError);
  CHECK_NOTHROW(UltraParams::make(2.0, 1.0, 1.0, 1e-8));
  CHECK_FALSE(UltraParams::make(2.5, 3.0).regularized_valid());
  CHECK(UltraParams::make(3.0, 3.0).regularized_valid());
}
