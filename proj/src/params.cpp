#include "ultraflow/params.hpp"

#include <cmath>
#include <string>

#include "ultraflow/errors.hpp"

namespace ultraflow {

int ceil_dimension(double n) { return static_cast<int>(std::ceil(n)); }

UltraParams UltraParams::make(double n, double p, double beta, double eps) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("dimension n must be positive, got " + std::to_string(n));
  }
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("exponent p must be >= 1, got " + std::to_string(p));
  }
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw DomainError("flow exponent beta must be finite and nonzero");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw DomainError("regularization eps must be >= 0");
  }
  if (eps > 0.0 && eps < kMinEps) {
    throw DomainError("regularization eps below 1e-8 is not supported");
  }
  return UltraParams(n, ceil_dimension(n), eps, p, beta);
}

}  // namespace ultraflow
