#ifndef INCONTACT_PIPELINE_HPP
#define INCONTACT_PIPELINE_HPP

// Ties the stages together for one trial: frames -> patch features -> feature
// tracks -> cues -> motion class. Uses only the frames, baseline, and sensor
// geometry of a trial; labels and mobility are never consulted.

#include <optional>
#include <vector>

#include "incontact/classifier.hpp"
#include "incontact/cue_extraction.hpp"
#include "incontact/frame_processing.hpp"
#include "incontact/simulator.hpp"

namespace incontact {

// Feature tracks assembled from the frames of a trial. Progress axes collapse
// frames that share a pose value (e.g. while the robot is halted) by
// averaging, keeping progress strictly increasing. Tracks for axes with no
// robot motion are omitted.
std::vector<FeatureTrack> build_tracks(const TrialRecord& trial, const FrameParams& params);

struct TrialAnalysis {
    std::vector<PatchFeatures> frame_features;
    std::vector<FeatureTrack> tracks;
    CueSet cues;
    CueFits fits;
    std::optional<MotionClass> predicted;
    bool intensity_only = false;  // drop track too short; classified from intensity alone
    std::optional<double> tangential_rate;
    std::optional<TangentialClass> tangential;
};

// Full pipeline for one trial. When the robot halts early on the force cap,
// the gravity-direction track can end up with too few distinct progress
// values to fit; classification then falls back to the intensity cue alone
// (low intensity -> Immovable) and intensity_only is set. With neither a
// usable drop track nor a low intensity (e.g. a pure brushing trial),
// predicted stays empty and only the tangential verdict is filled in.
// A missing or too-short intensity track propagates InsufficientDataError.
TrialAnalysis analyze_trial(const TrialRecord& trial, const FrameParams& frame_params,
                            const RansacParams& ransac_params, const Thresholds& thresholds);

} // namespace incontact

#endif
