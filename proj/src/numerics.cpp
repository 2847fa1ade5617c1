#include "dnp/numerics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dnp {

double integrate(const ScalarFn& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    // Boost's error estimate is not scaled by the interval length, so short
    // intervals look inaccurate; integrate over [0, 1] instead
    tol = std::max(tol, 1e-12);
    const double len = b - a;
    const std::function<double(double)> g = [&](double t) { return f(a + len * t); };
    double error = 0.0;
    double l1 = 0.0;
    const double one = gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 0, 0.0, &error, &l1);
    if (error <= std::max(tol * l1, 1e-300)) return len * one;
    return len * gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, tol, &error);
}

double golden_section_argmax(const ScalarFn& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

double estimate_lipschitz(const ScalarFn& f, double lo, double hi, int samples) {
    if (!(hi > lo) || samples < 2) return 0.0;
    const double step = (hi - lo) / (samples - 1);
    double prev = f(lo);
    double lip = 0.0;
    for (int k = 1; k < samples; ++k) {
        const double s = (k == samples - 1) ? hi : lo + k * step;
        const double cur = f(s);
        lip = std::max(lip, std::abs(cur - prev) / step);
        prev = cur;
    }
    return lip;
}

double max_abs_on_interval(const ScalarFn& f, double lo, double hi, int samples) {
    if (!(hi > lo)) return std::abs(f(lo));
    const double step = (hi - lo) / (samples - 1);
    double best = -1.0;
    int best_k = 0;
    for (int k = 0; k < samples; ++k) {
        const double s = (k == samples - 1) ? hi : lo + k * step;
        const double v = std::abs(f(s));
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    const double a = std::max(lo, lo + (best_k - 1) * step);
    const double b = std::min(hi, lo + (best_k + 1) * step);
    const auto absf = [&f](double s) { return std::abs(f(s)); };
    const double refined = absf(golden_section_argmax(absf, a, b));
    return std::max(best, refined);
}

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0;  // no "-0" in reports
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general,
                             std::numeric_limits<double>::max_digits10);
    return std::string(buf, res.ptr);
}

}  // namespace dnp
