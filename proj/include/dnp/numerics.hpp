#pragma once

#include <functional>
#include <string>

namespace dnp {

using ScalarFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod quadrature of f over [a, b] (a > b allowed, sign flips).
double integrate(const ScalarFn& f, double a, double b, double tol = 1e-12);

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
double golden_section_argmax(const ScalarFn& f, double lo, double hi, double tol = 1e-12);

/// Largest |f(s1) - f(s2)| / |s1 - s2| over adjacent points of a uniform sample of [lo, hi].
double estimate_lipschitz(const ScalarFn& f, double lo, double hi, int samples = 4097);

/// max |f| on [lo, hi]: dense sampling, then golden-section refinement around the best sample.
double max_abs_on_interval(const ScalarFn& f, double lo, double hi, int samples = 4097);

/// Decimal with 17 significant digits; parses back to the same double.
std::string format_real(double x);

}  // namespace dnp
