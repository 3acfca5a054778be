#ifndef INCONTACT_FRAME_PROCESSING_HPP
#define INCONTACT_FRAME_PROCESSING_HPP

// Converts raw taxel grids into per-frame contact-patch features: per-taxel
// normalization against an unloaded baseline, bicubic upsampling to sub-taxel
// resolution, threshold segmentation, convex-hull patch merging, and image
// moments for the center of pressure.
//
// All functions here are pure; frames may be processed concurrently.

#include <optional>
#include <vector>

#include "incontact/geometry2d.hpp"

namespace incontact {

struct SensorGeometry {
    int rows = 24;
    int cols = 16;
    double pitch_mm = 5.0;        // center-to-center taxel spacing
    double radius_mm = 372.0;     // radius of curvature in the gravity direction
    double sample_rate_hz = 10.0;

    void validate() const;
    double width_mm() const { return cols * pitch_mm; }
    double height_mm() const { return rows * pitch_mm; }
    bool operator==(const SensorGeometry&) const = default;
};

// One timestamped taxel-grid sample with the synchronized robot pose.
// Grid is row-major; row index increases in the gravity (downward) direction.
struct RawFrame {
    double timestamp_s = 0.0;
    double pose_normal_mm = 0.0;      // robot progress into the object
    double pose_tangential_mm = 0.0;  // robot progress across the object
    std::vector<int> counts;          // rows*cols non-negative sensor counts
    bool operator==(const RawFrame&) const = default;
};

// Dense greyscale image. Used both for normalized taxel grids (values in
// [0, 255], 255 = unloaded) and for their upsampled versions.
struct Image {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Image() = default;
    Image(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    bool operator==(const Image&) const = default;
};

// Per-frame contact descriptors in sensor-surface millimeters.
// x runs along columns (tangential axis), y along rows (gravity axis, down).
struct PatchFeatures {
    bool present = false;
    double cop_x_mm = 0.0;
    double cop_y_mm = 0.0;
    double area_mm2 = 0.0;
    double intensity = 0.0;  // mean normalized value near the center of pressure
    bool operator==(const PatchFeatures&) const = default;
};

struct FrameParams {
    int upsample_factor = 8;
    double patch_threshold = 200.0;   // foreground: value <= threshold
    int min_component_area = 4;       // fine pixels; smaller components dropped
    bool binary_moments = false;      // weight 1 instead of (255 - value)
};

// Per-taxel ratio to the unloaded baseline, scaled to [0, 255].
// value = clamp(255 * counts / baseline, 0, 255); unloaded taxels read 255
// and loaded taxels read lower (mutual-capacitance signal drops with pressure).
Image normalize(const RawFrame& frame, const std::vector<int>& baseline, const SensorGeometry& geometry);

// Catmull-Rom bicubic upsampling (a = -0.5) with clamped border samples.
// factor == 1 returns the input unchanged; outputs are clamped to [0, 255].
Image upsample_bicubic(const Image& img, int factor);

// Thresholds the fine image (foreground: value <= patch_threshold), extracts
// 8-connected components, discards those smaller than min_component_area
// pixels, and returns each survivor's outer boundary polygon in pixel-corner
// coordinates (pixel (r, c) spans [c, c+1] x [r, r+1]).
std::vector<Polygon> segment_patch(const Image& fine, double patch_threshold, int min_component_area = 4);

// Convex hull of the union of all contour vertices; merges disjoint patches
// into a single one. Returns nullopt when all vertices are collinear
// (degenerate patch, treated upstream as "no patch").
std::optional<Polygon> merge_hull(const std::vector<Polygon>& contours);

// Image moments over hull-interior pixels, weighted by pressure
// (255 - value), or by 1 when binary_moments is set. Returns present = false
// when the hull contains no pixel weight. intensity is the mean value within
// one taxel pitch of the center of pressure.
PatchFeatures patch_features(const Image& fine, const Polygon& hull, const SensorGeometry& geometry,
                             int factor, bool binary_moments = false);

// Full per-frame chain: normalize -> upsample -> segment -> hull -> features.
// A frame with no patch (or a degenerate one) yields present = false.
PatchFeatures process_frame(const RawFrame& frame, const std::vector<int>& baseline,
                            const SensorGeometry& geometry, const FrameParams& params);

} // namespace incontact

#endif
