#include "incontact/classifier.hpp"

#include <algorithm>

#include "incontact/errors.hpp"

namespace incontact {

const char* to_string(MotionClass c) {
    switch (c) {
        case MotionClass::Immovable: return "immovable";
        case MotionClass::Sliding: return "sliding";
        case MotionClass::Tipping: return "tipping";
    }
    return "?";
}

const char* to_string(TangentialClass c) {
    return c == TangentialClass::Stationary ? "stationary" : "moving_contact";
}

std::optional<MotionClass> parse_motion_class(const std::string& s) {
    if (s == "immovable") return MotionClass::Immovable;
    if (s == "sliding") return MotionClass::Sliding;
    if (s == "tipping") return MotionClass::Tipping;
    return std::nullopt;
}

std::optional<TangentialClass> parse_tangential_class(const std::string& s) {
    if (s == "stationary") return TangentialClass::Stationary;
    if (s == "moving_contact") return TangentialClass::MovingContact;
    return std::nullopt;
}

void Thresholds::validate() const {
    if (!(intensity_fixed > 0.0 && intensity_fixed < 255.0))
        throw DomainError("intensity threshold must lie in (0, 255)");
    if (!(tip_band_low < tip_band_high)) throw DomainError("tip band must be a non-empty interval");
    if (!(tangential_eps > 0.0)) throw DomainError("tangential tolerance must be positive");
}

MotionClass classify_normal(const CueSet& cues, const Thresholds& th) {
    // A hard press can drag the patch around, so the fixed-contact check runs
    // before the tip-band check. Intensity strictly below the threshold;
    // the tip band is closed.
    if (std::min(cues.intensity_mean[0], cues.intensity_mean[1]) < th.intensity_fixed)
        return MotionClass::Immovable;
    for (double rate : cues.drop_rate)
        if (rate >= th.tip_band_low && rate <= th.tip_band_high) return MotionClass::Tipping;
    return MotionClass::Sliding;
}

TangentialClass classify_tangential(double horizontal_rate, const Thresholds& th) {
    if (std::abs(horizontal_rate + 1.0) <= th.tangential_eps) return TangentialClass::Stationary;
    return TangentialClass::MovingContact;
}

void ConfusionMatrix::add(MotionClass truth, MotionClass predicted) {
    counts_[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)] += 1;
}

std::size_t ConfusionMatrix::count(MotionClass truth, MotionClass predicted) const {
    return counts_[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
}

std::size_t ConfusionMatrix::total() const {
    std::size_t acc = 0;
    for (const auto& row : counts_)
        for (std::size_t c : row) acc += c;
    return acc;
}

std::size_t ConfusionMatrix::trace() const {
    return counts_[0][0] + counts_[1][1] + counts_[2][2];
}

double ConfusionMatrix::accuracy() const {
    const std::size_t n = total();
    return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
}

double ConfusionMatrix::precision(MotionClass c) const {
    const std::size_t j = static_cast<std::size_t>(c);
    std::size_t col = 0;
    for (std::size_t i = 0; i < 3; ++i) col += counts_[i][j];
    return col == 0 ? 0.0 : static_cast<double>(counts_[j][j]) / static_cast<double>(col);
}

double ConfusionMatrix::recall(MotionClass c) const {
    const std::size_t i = static_cast<std::size_t>(c);
    std::size_t row = 0;
    for (std::size_t j = 0; j < 3; ++j) row += counts_[i][j];
    return row == 0 ? 0.0 : static_cast<double>(counts_[i][i]) / static_cast<double>(row);
}

ConfusionMatrix evaluate(const std::vector<std::pair<MotionClass, MotionClass>>& trials) {
    if (trials.empty()) throw EmptyEvaluationError("no trials to evaluate");
    ConfusionMatrix m;
    for (const auto& [truth, predicted] : trials) m.add(truth, predicted);
    return m;
}

} // namespace incontact
