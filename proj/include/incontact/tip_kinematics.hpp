#ifndef INCONTACT_TIP_KINEMATICS_HPP
#define INCONTACT_TIP_KINEMATICS_HPP

// 2D kinematics of a curved sensor tipping a vertically uniform object.
//
// A sensor of radius R (curved in the gravity direction) contacts the object
// of width w at height h above the support surface and advances horizontally
// by x. The object pivots about its bottom edge far from the sensor. Closing
// the displacement loop through the contact height gives the scalar contact
// equation
//
//     (R + w - x) * cos(theta) + h * sin(theta) = R + w
//
// whose smallest non-negative root is the tip angle. The contact point
// travels R * theta down the sensor surface.

#include <cstdint>

namespace incontact {

struct TipScenario {
    double radius_mm = 372.0;  // sensor radius of curvature
    double width_mm = 100.0;   // object width along the push direction
    double height_mm = 150.0;  // initial contact height above the floor

    void validate() const;
};

// Largest admissible push distance: where the closed-form root ceases to
// exist, (R + w) - sqrt((R + w)^2 - h^2). When h >= R + w there is no such
// cutoff and +infinity is returned.
double tip_x_max(const TipScenario& s);

// Smallest tip angle theta >= 0 satisfying the contact equation for push
// distance x in [0, tip_x_max]. Closed form plus Newton polish to a residual
// below 1e-12 * (R + w). Throws DomainError outside the admissible range.
double tip_angle(const TipScenario& s, double x);

// Distance the contact point travels along the sensor in the gravity
// direction: R * theta.
double contact_drop(const TipScenario& s, double theta);

// d(R*theta)/dx. Interior points use a central finite difference with step
// min(0.01 mm, x_max/1000); at x = 0 the analytic onset limit R/h is returned
// (implicit differentiation gives dtheta/dx = 1/h there). Requires
// 0 <= x < tip_x_max.
double drop_slope(const TipScenario& s, double x);

// Reference solver sharing no algebra with tip_angle: constructs the tipped
// object face explicitly (two rotated points), measures the distance from the
// pushed circle center at (x - R, h) to that line, and bisects on theta until
// the distance equals R. theta_step is the bisection tolerance and must be
// <= 1e-4 rad. Throws DomainError when no root exists in [0, pi/2].
double brute_force_tip_oracle(const TipScenario& s, double x, double theta_step);

} // namespace incontact

#endif
