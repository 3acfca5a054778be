#include "incontact/cue_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "incontact/errors.hpp"
#include "incontact/random.hpp"

namespace incontact {

const char* to_string(ProgressAxis axis) {
    switch (axis) {
        case ProgressAxis::Time: return "time";
        case ProgressAxis::NormalProgress: return "normal_progress";
        case ProgressAxis::TangentialProgress: return "tangential_progress";
    }
    return "?";
}

const char* to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::CopGravity: return "cop_gravity";
        case FeatureKind::CopHorizontal: return "cop_horizontal";
        case FeatureKind::Area: return "area";
        case FeatureKind::Intensity: return "intensity";
    }
    return "?";
}

std::string FeatureTrack::label() const {
    return std::string(to_string(feature)) + " vs " + to_string(axis);
}

namespace {

double median_inplace(std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    return 0.5 * (v[mid - 1] + hi);
}

} // namespace

double default_inlier_tol(const std::vector<TrackPoint>& points) {
    const std::size_t n = points.size();
    if (n < 2) return 1e-9;

    // Theil-Sen pre-fit: median pairwise slope, then median intercept
    std::vector<double> slopes;
    slopes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dp = points[j].progress - points[i].progress;
            if (dp != 0.0) slopes.push_back((points[j].value - points[i].value) / dp);
        }
    }
    const double slope = median_inplace(slopes);
    std::vector<double> intercepts(n);
    for (std::size_t i = 0; i < n; ++i) intercepts[i] = points[i].value - slope * points[i].progress;
    const double intercept = median_inplace(intercepts);

    std::vector<double> abs_resid(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        abs_resid[i] = std::abs(points[i].value - (slope * points[i].progress + intercept));
        scale = std::max(scale, std::abs(points[i].value));
    }
    const double mad = median_inplace(abs_resid);
    return std::max(3.0 * mad, 1e-9 * (scale + 1.0));
}

std::vector<bool> ransac_filter(const FeatureTrack& track, int iterations, double inlier_tol,
                                std::uint64_t seed) {
    const auto& pts = track.points;
    const std::size_t n = pts.size();
    if (n < 2) throw InsufficientDataError(track.label(), "RANSAC requires at least 2 points");
    if (iterations == 0) return std::vector<bool>(n, true);
    if (!(inlier_tol > 0.0)) throw DomainError("RANSAC inlier tolerance must be positive");

    SplitMix64 rng(seed);
    std::vector<bool> best_mask(n, true);
    std::size_t best_count = 0;
    double best_total = std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<bool> mask(n);
    for (int it = 0; it < iterations; ++it) {
        const std::size_t i = static_cast<std::size_t>(rng.below(n));
        std::size_t j = static_cast<std::size_t>(rng.below(n));
        while (j == i) j = static_cast<std::size_t>(rng.below(n));
        const double dp = pts[j].progress - pts[i].progress;
        if (dp == 0.0) continue;  // vertical pair, no line

        const double m = (pts[j].value - pts[i].value) / dp;
        const double b = pts[i].value - m * pts[i].progress;
        std::size_t count = 0;
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = std::abs(pts[k].value - (m * pts[k].progress + b));
            mask[k] = r <= inlier_tol;
            if (mask[k]) {
                ++count;
                total += r;
            }
        }
        if (!found || count > best_count || (count == best_count && total < best_total)) {
            found = true;
            best_count = count;
            best_total = total;
            best_mask = mask;
        }
    }
    return best_mask;
}

namespace {

// Fitted values and per-segment summaries for one hinge-basis solution.
struct HingeFit {
    double breakpoint;
    double slope1, slope2;
    double sse;
    std::size_t split;  // first index of segment 2
};

} // namespace

PiecewiseFit fit_piecewise_2(const std::vector<TrackPoint>& points) {
    const std::size_t n = points.size();
    if (n < kMinFitPoints)
        throw InsufficientDataError("", "piecewise fit requires at least 8 points");

    double p_mean = 0.0, v_mean = 0.0;
    for (const auto& pt : points) {
        p_mean += pt.progress;
        v_mean += pt.value;
    }
    p_mean /= static_cast<double>(n);
    v_mean /= static_cast<double>(n);

    double spp = 0.0, spv = 0.0, svv = 0.0;
    for (const auto& pt : points) {
        const double a = pt.progress - p_mean;
        const double v = pt.value - v_mean;
        spp += a * a;
        spv += a * v;
        svv += v * v;
    }
    const double line_slope = spp > 0.0 ? spv / spp : 0.0;
    double line_sse = 0.0;
    for (const auto& pt : points) {
        const double r = (pt.value - v_mean) - line_slope * (pt.progress - p_mean);
        line_sse += r * r;
    }

    // exhaustive breakpoint search over interior points; each segment must
    // cover at least 3 points
    std::optional<HingeFit> best;
    for (std::size_t k = 2; k + 4 <= n; ++k) {
        const double b = points[k].progress;
        double h_mean = 0.0;
        for (const auto& pt : points) h_mean += std::max(0.0, pt.progress - b);
        h_mean /= static_cast<double>(n);

        // centered basis {p - p_mean, hinge - h_mean}; the constant term drops out
        double saa = 0.0, sag = 0.0, sgg = 0.0, sav = 0.0, sgv = 0.0;
        for (const auto& pt : points) {
            const double a = pt.progress - p_mean;
            const double g = std::max(0.0, pt.progress - b) - h_mean;
            const double v = pt.value - v_mean;
            saa += a * a;
            sag += a * g;
            sgg += g * g;
            sav += a * v;
            sgv += g * v;
        }
        const double det = saa * sgg - sag * sag;
        if (std::abs(det) <= 1e-12 * saa * sgg) continue;
        const double alpha = (sav * sgg - sgv * sag) / det;
        const double gamma = (sgv * saa - sav * sag) / det;

        double sse = 0.0;
        for (const auto& pt : points) {
            const double a = pt.progress - p_mean;
            const double g = std::max(0.0, pt.progress - b) - h_mean;
            const double r = (pt.value - v_mean) - alpha * a - gamma * g;
            sse += r * r;
        }
        if (!best || sse < best->sse)
            best = HingeFit{b, alpha, alpha + gamma, sse, k + 1};
    }

    PiecewiseFit fit;
    fit.inlier_count = n;

    const double tiny = 1e-9 * line_sse + 1e-12 * svv;
    if (!best || best->sse >= line_sse - tiny) {
        // two segments add nothing: report the single line split at the midpoint
        fit.single_line = true;
        fit.breakpoint = 0.5 * (points.front().progress + points.back().progress);
        fit.slope = {line_slope, line_slope};
        fit.sse = line_sse;
        double sum1 = 0.0, sum2 = 0.0;
        std::size_t n1 = 0, n2 = 0;
        for (const auto& pt : points) {
            const double y = v_mean + line_slope * (pt.progress - p_mean);
            if (pt.progress <= fit.breakpoint) {
                sum1 += y;
                ++n1;
            } else {
                sum2 += y;
                ++n2;
            }
        }
        fit.mean = {n1 ? sum1 / n1 : v_mean, n2 ? sum2 / n2 : v_mean};
        return fit;
    }

    fit.breakpoint = best->breakpoint;
    fit.slope = {best->slope1, best->slope2};
    fit.sse = best->sse;
    // recompute fitted values for the segment means
    double h_mean = 0.0;
    for (const auto& pt : points) h_mean += std::max(0.0, pt.progress - fit.breakpoint);
    h_mean /= static_cast<double>(n);
    const double gamma = best->slope2 - best->slope1;
    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = points[i].progress - p_mean;
        const double g = std::max(0.0, points[i].progress - fit.breakpoint) - h_mean;
        const double y = v_mean + best->slope1 * a + gamma * g;
        if (i < best->split)
            sum1 += y;
        else
            sum2 += y;
    }
    fit.mean = {sum1 / static_cast<double>(best->split),
                sum2 / static_cast<double>(n - best->split)};
    return fit;
}

PiecewiseFit fit_track_robust(const FeatureTrack& track, const RansacParams& params) {
    const std::size_t n = track.points.size();
    if (n < kMinFitPoints)
        throw InsufficientDataError(track.label(), track.label() + ": fewer than 8 points");

    const double tol = params.inlier_tol > 0.0 ? params.inlier_tol : default_inlier_tol(track.points);
    const auto mask = ransac_filter(track, params.iterations, tol, params.seed);
    std::vector<TrackPoint> inliers;
    inliers.reserve(n);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) inliers.push_back(track.points[i]);

    // A consensus that rejects more than a quarter of the track means the
    // data are not "a dominant line plus stray spikes"; filtering would
    // discard structure, so fall back to the full track.
    const std::size_t required = std::max(kMinFitPoints, (3 * n + 3) / 4);
    if (inliers.size() < required) inliers = track.points;

    PiecewiseFit fit = fit_piecewise_2(inliers);
    fit.inlier_count = inliers.size();
    return fit;
}

namespace {

const FeatureTrack* find_track(const std::vector<FeatureTrack>& tracks, FeatureKind kind,
                               ProgressAxis axis) {
    for (const auto& t : tracks)
        if (t.feature == kind && t.axis == axis) return &t;
    return nullptr;
}

std::optional<PiecewiseFit> fit_track(const FeatureTrack& track, const RansacParams& params,
                                      bool mandatory) {
    if (track.points.size() < kMinFitPoints) {
        if (mandatory)
            throw InsufficientDataError(track.label(), track.label() + ": fewer than 8 points");
        return std::nullopt;
    }
    return fit_track_robust(track, params);
}

} // namespace

CueSet extract_cues(const std::vector<FeatureTrack>& tracks, const RansacParams& params, CueFits* fits) {
    const FeatureTrack* drop = find_track(tracks, FeatureKind::CopGravity, ProgressAxis::NormalProgress);
    const FeatureTrack* intensity = find_track(tracks, FeatureKind::Intensity, ProgressAxis::Time);
    if (!drop)
        throw InsufficientDataError("cop_gravity vs normal_progress", "mandatory track missing: cop_gravity vs normal_progress");
    if (!intensity)
        throw InsufficientDataError("intensity vs time", "mandatory track missing: intensity vs time");

    CueSet cues;
    CueFits local;
    CueFits& out = fits ? *fits : local;

    out.drop = fit_track(*drop, params, true);
    cues.drop_rate = out.drop->slope;

    out.intensity = fit_track(*intensity, params, true);
    cues.intensity_mean = {std::clamp(out.intensity->mean[0], 0.0, 255.0),
                           std::clamp(out.intensity->mean[1], 0.0, 255.0)};

    if (const FeatureTrack* t = find_track(tracks, FeatureKind::CopHorizontal, ProgressAxis::TangentialProgress)) {
        out.horizontal = fit_track(*t, params, false);
        if (out.horizontal) cues.horizontal_rate = out.horizontal->slope;
    }
    if (const FeatureTrack* t = find_track(tracks, FeatureKind::Area, ProgressAxis::NormalProgress)) {
        out.area = fit_track(*t, params, false);
        if (out.area) cues.area_rate = out.area->slope;
    }
    return cues;
}

} // namespace incontact
