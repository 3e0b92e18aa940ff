#ifndef QOSC_NUMERICS_HPP
#define QOSC_NUMERICS_HPP

#include <functional>
#include <utility>
#include <vector>

namespace qosc::num {

// Brent root finding on a bracketing interval [a, b] with f(a)*f(b) <= 0.
// Throws NumericalError if the bracket is invalid or the iteration stalls.
double brent(const std::function<double(double)>& f, double a, double b,
             double xtol = 1e-14, double rtol = 1e-12, int max_iter = 200);

// Expand [lo, hi] geometrically (factor 10 per side, up to max_expand times)
// until f changes sign across it. Returns the bracket; throws NoCutoffError
// if no sign change appears.
std::pair<double, double> expand_bracket(const std::function<double(double)>& f,
                                         double lo, double hi, int max_expand = 10);

// Adaptive Simpson quadrature of f over [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_depth = 48);

// Least-squares straight line y = slope*x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log|y| against log(x), for power-law exponent checks. All x, |y| > 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Five-point central first derivative at the middle of five uniformly spaced samples.
double central_derivative_5(double fm2, double fm1, double fp1, double fp2, double h);

}  // namespace qosc::num

#endif
