#include "incontact/pipeline.hpp"

#include <cmath>

#include "incontact/errors.hpp"

namespace incontact {

namespace {

// Collapses runs of equal progress (the robot halted) by averaging the value,
// keeping the track's progress strictly increasing.
std::vector<TrackPoint> merge_equal_progress(const std::vector<TrackPoint>& raw) {
    std::vector<TrackPoint> out;
    std::size_t i = 0;
    while (i < raw.size()) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < raw.size() && raw[j].progress == raw[i].progress) {
            sum += raw[j].value;
            ++j;
        }
        out.push_back({raw[i].progress, sum / static_cast<double>(j - i)});
        i = j;
    }
    return out;
}

void add_track(std::vector<FeatureTrack>& tracks, FeatureKind kind, ProgressAxis axis,
               std::vector<TrackPoint> raw) {
    auto points = merge_equal_progress(raw);
    if (points.size() < 2) return;  // no motion along this axis (or no data)
    tracks.push_back({kind, axis, std::move(points)});
}

} // namespace

std::vector<FeatureTrack> build_tracks(const TrialRecord& trial, const FrameParams& params) {
    std::vector<TrackPoint> drop, horizontal, intensity, area;
    for (const RawFrame& frame : trial.frames) {
        const PatchFeatures f = process_frame(frame, trial.baseline, trial.geometry, params);
        if (!f.present) continue;
        drop.push_back({frame.pose_normal_mm, f.cop_y_mm});
        horizontal.push_back({frame.pose_tangential_mm, f.cop_x_mm});
        intensity.push_back({frame.timestamp_s, f.intensity});
        area.push_back({frame.pose_normal_mm, f.area_mm2});
    }

    std::vector<FeatureTrack> tracks;
    add_track(tracks, FeatureKind::CopGravity, ProgressAxis::NormalProgress, std::move(drop));
    add_track(tracks, FeatureKind::CopHorizontal, ProgressAxis::TangentialProgress, std::move(horizontal));
    add_track(tracks, FeatureKind::Intensity, ProgressAxis::Time, std::move(intensity));
    add_track(tracks, FeatureKind::Area, ProgressAxis::NormalProgress, std::move(area));
    return tracks;
}

namespace {

const FeatureTrack* find(const std::vector<FeatureTrack>& tracks, FeatureKind kind, ProgressAxis axis) {
    for (const auto& t : tracks)
        if (t.feature == kind && t.axis == axis) return &t;
    return nullptr;
}

} // namespace

TrialAnalysis analyze_trial(const TrialRecord& trial, const FrameParams& frame_params,
                            const RansacParams& ransac_params, const Thresholds& thresholds) {
    thresholds.validate();

    TrialAnalysis out;
    for (const RawFrame& frame : trial.frames)
        out.frame_features.push_back(process_frame(frame, trial.baseline, trial.geometry, frame_params));
    out.tracks = build_tracks(trial, frame_params);

    try {
        out.cues = extract_cues(out.tracks, ransac_params, &out.fits);
        out.predicted = classify_normal(out.cues, thresholds);
    } catch (const InsufficientDataError& e) {
        // A trial that halts early on the force cap leaves too few distinct
        // normal-progress samples for the drop fit. The intensity cue alone
        // still identifies a fixed contact, matching the rule precedence.
        if (e.label() != "cop_gravity vs normal_progress") throw;
        const FeatureTrack* intensity = find(out.tracks, FeatureKind::Intensity, ProgressAxis::Time);
        if (!intensity || intensity->points.size() < kMinFitPoints) throw;
        out.fits.intensity = fit_track_robust(*intensity, ransac_params);
        out.cues = CueSet{};
        out.cues.intensity_mean = {std::clamp(out.fits.intensity->mean[0], 0.0, 255.0),
                                   std::clamp(out.fits.intensity->mean[1], 0.0, 255.0)};
        out.intensity_only = true;
        if (std::min(out.cues.intensity_mean[0], out.cues.intensity_mean[1]) < thresholds.intensity_fixed)
            out.predicted = MotionClass::Immovable;
        // else: no normal-direction verdict; the tangential one may still apply
    }

    // tangential verdict, when the robot actually moved tangentially
    if (const FeatureTrack* t = find(out.tracks, FeatureKind::CopHorizontal, ProgressAxis::TangentialProgress)) {
        if (t->points.size() >= kMinFitPoints) {
            const PiecewiseFit fit = fit_track_robust(*t, ransac_params);
            if (!out.fits.horizontal) out.fits.horizontal = fit;
            const double span = t->points.back().progress - t->points.front().progress;
            const double left = fit.breakpoint - t->points.front().progress;
            const double right = t->points.back().progress - fit.breakpoint;
            out.tangential_rate = (fit.slope[0] * left + fit.slope[1] * right) / span;
            out.tangential = classify_tangential(*out.tangential_rate, thresholds);
        }
    }
    return out;
}

} // namespace incontact
