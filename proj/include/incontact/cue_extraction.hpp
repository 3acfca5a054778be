#ifndef INCONTACT_CUE_EXTRACTION_HPP
#define INCONTACT_CUE_EXTRACTION_HPP

// Turns per-frame feature sequences into tactile cues: RANSAC outlier
// rejection followed by a continuous two-segment piecewise-linear least
// squares fit, yielding per-segment slopes and means.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace incontact {

enum class ProgressAxis { Time, NormalProgress, TangentialProgress };
enum class FeatureKind { CopGravity, CopHorizontal, Area, Intensity };

const char* to_string(ProgressAxis axis);
const char* to_string(FeatureKind kind);

struct TrackPoint {
    double progress = 0.0;
    double value = 0.0;
    bool operator==(const TrackPoint&) const = default;
};

// The evolution of one tactile feature over time or robot progress.
// progress must be strictly increasing; fits need at least 8 points.
struct FeatureTrack {
    FeatureKind feature = FeatureKind::CopGravity;
    ProgressAxis axis = ProgressAxis::NormalProgress;
    std::vector<TrackPoint> points;

    std::string label() const;
};

inline constexpr std::size_t kMinFitPoints = 8;

// Continuous two-segment linear fit. Both segments share the value at the
// breakpoint; slope/mean entry 0 covers progress <= breakpoint.
struct PiecewiseFit {
    double breakpoint = 0.0;
    std::array<double, 2> slope{0.0, 0.0};
    std::array<double, 2> mean{0.0, 0.0};  // mean of fitted values over each segment's points
    double sse = 0.0;
    std::size_t inlier_count = 0;
    bool single_line = false;  // fallback path: both segments are one line
};

struct RansacParams {
    int iterations = 200;
    double inlier_tol = 0.0;  // <= 0: auto, 3x median absolute residual of a robust pre-fit
    std::uint64_t seed = 1;
};

// Classic 2-point-sample line RANSAC with a deterministic seeded source.
// Returns the consensus-maximal inlier mask; ties broken by lower total
// residual, then by earlier iteration. iterations == 0 disables the filter
// (all points kept). Throws InsufficientDataError below 2 points.
std::vector<bool> ransac_filter(const FeatureTrack& track, int iterations, double inlier_tol,
                                std::uint64_t seed);

// Auto tolerance: 3x the median absolute residual of a Theil-Sen pre-fit,
// floored to a small positive value so exact data keeps every point.
double default_inlier_tol(const std::vector<TrackPoint>& points);

// Fits the best continuous two-segment line by exhaustive breakpoint search
// over interior data points (each segment must cover >= 3 points), solved in
// the hinge basis {1, p, max(0, p - b)}. Falls back to a single-line fit
// (identical segments, breakpoint at the progress midpoint) when two segments
// do not improve on one. Throws InsufficientDataError below 8 points.
PiecewiseFit fit_piecewise_2(const std::vector<TrackPoint>& points);

// RANSAC followed by the piecewise fit. The mask is applied only when its
// consensus keeps at least 75% of the track (and at least 8 points); a weaker
// consensus means the gross-outlier model does not describe the track, and
// the fit then uses every point. Throws InsufficientDataError (with the track
// label) when the track itself is shorter than 8 points.
PiecewiseFit fit_track_robust(const FeatureTrack& track, const RansacParams& params);

// Assembled cue values, one pair per fit segment.
struct CueSet {
    std::array<double, 2> drop_rate{0.0, 0.0};        // cop_gravity vs normal progress (mm/mm)
    std::array<double, 2> horizontal_rate{0.0, 0.0};  // cop_horizontal vs tangential progress (mm/mm)
    std::array<double, 2> intensity_mean{255.0, 255.0};
    std::array<double, 2> area_rate{0.0, 0.0};        // mm^2/mm; unused by the default rules
};

struct CueFits {
    std::optional<PiecewiseFit> drop, horizontal, intensity, area;
};

// Applies ransac_filter then fit_piecewise_2 per track and assembles the
// CueSet. cop_gravity vs normal progress and intensity vs time are mandatory;
// a missing or too-short mandatory track raises InsufficientDataError with
// the track label. Missing optional tracks yield neutral cues (rate 0).
CueSet extract_cues(const std::vector<FeatureTrack>& tracks, const RansacParams& params,
                    CueFits* fits = nullptr);

} // namespace incontact

#endif
