#ifndef INCONTACT_CLASSIFIER_HPP
#define INCONTACT_CLASSIFIER_HPP

// Maps cue sets to object-motion categories with fixed threshold rules and
// aggregates (true, predicted) pairs into a confusion matrix.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "incontact/cue_extraction.hpp"

namespace incontact {

enum class MotionClass { Immovable = 0, Sliding = 1, Tipping = 2 };
enum class TangentialClass { Stationary, MovingContact };

const char* to_string(MotionClass c);
const char* to_string(TangentialClass c);
std::optional<MotionClass> parse_motion_class(const std::string& s);
std::optional<TangentialClass> parse_tangential_class(const std::string& s);

struct Thresholds {
    double intensity_fixed = 65.0;  // below this (strict) the contact is on a fixed object
    double tip_band_low = 1.0;      // gravity-direction drop rate band indicating tip
    double tip_band_high = 5.0;     // band is closed: rates of exactly 1 or 5 count as tip
    double tangential_eps = 0.15;   // tolerance around the equal-and-opposite rate -1

    void validate() const;
};

// Rule precedence: a low intensity segment wins (Immovable), then a drop-rate
// segment inside the tip band (Tipping), else Sliding. Total and pure.
MotionClass classify_normal(const CueSet& cues, const Thresholds& th);

// horizontal_rate is mm of patch motion per mm of robot tangential motion.
// A rate within tangential_eps of -1 means the patch mirrors the robot: the
// object is stationary. Only meaningful when the robot actually moved
// tangentially; callers gate on that.
TangentialClass classify_tangential(double horizontal_rate, const Thresholds& th);

// 3x3 confusion matrix over {Immovable, Sliding, Tipping}, rows = true class.
class ConfusionMatrix {
public:
    void add(MotionClass truth, MotionClass predicted);

    std::size_t count(MotionClass truth, MotionClass predicted) const;
    std::size_t total() const;
    std::size_t trace() const;
    double accuracy() const;  // trace / total

    // Per-class precision and recall; 0 when the denominator is empty.
    double precision(MotionClass c) const;
    double recall(MotionClass c) const;

private:
    std::array<std::array<std::size_t, 3>, 3> counts_{};
};

// Accumulates labeled predictions. Throws EmptyEvaluationError on no input.
ConfusionMatrix evaluate(const std::vector<std::pair<MotionClass, MotionClass>>& trials);

} // namespace incontact

#endif
