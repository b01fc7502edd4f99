#include "tumorcord/quadrature.hpp"

#include <cmath>

#include "tumorcord/errors.hpp"

namespace tumorcord {

namespace {

struct Simpson {
    const std::function<double(double)>& fn;
    int evaluations = 0;
    double error = 0.0;

    double eval(double x) {
        ++evaluations;
        return fn(x);
    }

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) {
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (depth <= 0) {
            throw NumericalError("adaptive_simpson: maximum recursion depth reached");
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                                  double abs_tol, int max_depth) {
    if (a == b) return {};
    Simpson s{fn};
    const double fa = s.eval(a);
    const double fb = s.eval(b);
    const double fm = s.eval(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double v = s.recurse(a, b, fa, fm, fb, whole, abs_tol, max_depth);
    if (!std::isfinite(v)) throw NumericalError("adaptive_simpson: non-finite integral");
    return {v, s.error, s.evaluations};
}

}  // namespace tumorcord
