#include "incontact/tip_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "incontact/errors.hpp"

namespace incontact {

void TipScenario::validate() const {
    if (radius_mm <= 0.0 || width_mm <= 0.0 || height_mm <= 0.0)
        throw DomainError("tip scenario requires positive radius, width, and height");
}

double tip_x_max(const TipScenario& s) {
    s.validate();
    const double c = s.radius_mm + s.width_mm;
    if (s.height_mm >= c) return std::numeric_limits<double>::infinity();
    return c - std::sqrt(c * c - s.height_mm * s.height_mm);
}

double tip_angle(const TipScenario& s, double x) {
    s.validate();
    const double c = s.radius_mm + s.width_mm;
    const double xm = tip_x_max(s);
    const double slack = 1e-9 * std::max(1.0, c);
    if (x < -slack || x > xm + slack)
        throw DomainError("push distance outside the contact range [0, x_max]");
    x = std::clamp(x, 0.0, xm);

    const double a = c - x;
    const double b = s.height_mm;
    const double len = std::hypot(a, b);
    const double ratio = std::min(1.0, c / len);
    double theta = std::atan2(b, a) - std::acos(ratio);

    // one or two Newton steps tighten the closed form to machine residual;
    // skipped near x_max where the root is tangential (f' -> 0)
    for (int i = 0; i < 4; ++i) {
        const double f = a * std::cos(theta) + b * std::sin(theta) - c;
        if (std::abs(f) <= 1e-12 * c) break;
        const double fp = -a * std::sin(theta) + b * std::cos(theta);
        if (std::abs(fp) < 1e-9 * c) break;
        theta -= f / fp;
    }
    if (theta < 0.0) theta = 0.0;
    return theta;
}

double contact_drop(const TipScenario& s, double theta) {
    s.validate();
    return s.radius_mm * theta;
}

double drop_slope(const TipScenario& s, double x) {
    s.validate();
    const double xm = tip_x_max(s);
    if (x < 0.0 || x >= xm)
        throw DomainError("drop_slope requires 0 <= x < x_max");
    if (x == 0.0) return s.radius_mm / s.height_mm;  // analytic onset limit

    double step = 0.01;
    if (std::isfinite(xm)) step = std::min(step, xm / 1000.0);

    auto drop_at = [&](double xx) { return contact_drop(s, tip_angle(s, xx)); };
    if (x - step >= 0.0 && x + step <= xm)
        return (drop_at(x + step) - drop_at(x - step)) / (2.0 * step);
    if (x + step <= xm) {
        // too close to the onset for a symmetric step
        const double h = x;
        return (drop_at(2.0 * h) - drop_at(0.0)) / (2.0 * h);
    }
    return (drop_at(x) - drop_at(x - step)) / step;  // near x_max
}

namespace {

struct Pt {
    double x, y;
};

// Distance from the pushed circle center to the tipped near face, positive on
// the sensor side. Built from explicitly constructed points only.
double face_distance(const TipScenario& s, double x, double theta) {
    const double w = s.width_mm;
    const Pt pivot{w, 0.0};
    // near-bottom corner and a second point up the face, rotated about the
    // pivot (clockwise with y up: the near edge lifts as the object tips away)
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    auto rotate = [&](double px, double py) {
        return Pt{pivot.x + px * ct + py * st, pivot.y - px * st + py * ct};
    };
    const double span = 2.0 * std::max({s.height_mm, s.width_mm, 10.0});
    const Pt base = rotate(-w, 0.0);
    const Pt top = rotate(-w, span);

    double nx = -(top.y - base.y);
    double ny = top.x - base.x;
    const double len = std::hypot(nx, ny);
    nx /= len;
    ny /= len;
    // orient the normal away from the object interior
    if ((pivot.x - base.x) * nx + (pivot.y - base.y) * ny > 0.0) {
        nx = -nx;
        ny = -ny;
    }

    const Pt center{x - s.radius_mm, s.height_mm};
    return (center.x - base.x) * nx + (center.y - base.y) * ny;
}

} // namespace

double brute_force_tip_oracle(const TipScenario& s, double x, double theta_step) {
    s.validate();
    if (!(theta_step > 0.0) || theta_step > 1e-4)
        throw DomainError("oracle bisection step must lie in (0, 1e-4] rad");
    if (x < 0.0) throw DomainError("push distance must be non-negative");

    auto f = [&](double theta) { return face_distance(s, x, theta) - s.radius_mm; };

    // locate the maximum of f on [0, pi/2] by golden-section search, then
    // bisect on [0, peak]; f(0) = -x <= 0 and f rises to the peak
    const double half_pi = 1.5707963267948966;
    const double gr = 0.6180339887498949;
    double lo = 0.0, hi = half_pi;
    double m1 = hi - gr * (hi - lo);
    double m2 = lo + gr * (hi - lo);
    double f1 = f(m1), f2 = f(m2);
    for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
        if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + gr * (hi - lo);
            f2 = f(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - gr * (hi - lo);
            f1 = f(m1);
        }
    }
    const double peak = 0.5 * (lo + hi);
    if (f(peak) < 0.0)
        throw DomainError("no contact solution in [0, pi/2]; push distance too large");

    double a = 0.0, b = peak;
    if (f(a) > 0.0) return 0.0;  // already in contact with no tip
    for (int i = 0; i < 200 && b - a > theta_step; ++i) {
        const double mid = 0.5 * (a + b);
        if (f(mid) <= 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

} // namespace incontact
