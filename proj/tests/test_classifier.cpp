#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "incontact/classifier.hpp"
#include "incontact/errors.hpp"

using namespace incontact;

namespace {

CueSet cues_of(double inten1, double inten2, double drop1, double drop2) {
    CueSet c;
    c.intensity_mean = {inten1, inten2};
    c.drop_rate = {drop1, drop2};
    return c;
}

} // namespace

TEST_CASE("low intensity wins regardless of drop rate") {
    const Thresholds th;
    CHECK(classify_normal(cues_of(120.0, 50.0, 0.0, 0.0), th) == MotionClass::Immovable);
    CHECK(classify_normal(cues_of(120.0, 50.0, 2.5, 2.5), th) == MotionClass::Immovable);
    CHECK(classify_normal(cues_of(40.0, 140.0, 0.1, 0.1), th) == MotionClass::Immovable);
}

TEST_CASE("a drop-rate segment in the band means tipping") {
    const Thresholds th;
    CHECK(classify_normal(cues_of(150.0, 140.0, 0.2, 2.5), th) == MotionClass::Tipping);
    CHECK(classify_normal(cues_of(150.0, 140.0, 2.5, 0.2), th) == MotionClass::Tipping);
}

TEST_CASE("everything else slides") {
    const Thresholds th;
    CHECK(classify_normal(cues_of(150.0, 140.0, 0.1, 0.3), th) == MotionClass::Sliding);
    CHECK(classify_normal(cues_of(150.0, 140.0, 7.0, -2.0), th) == MotionClass::Sliding);
}

TEST_CASE("threshold boundary conventions") {
    const Thresholds th;
    // intensity exactly at the threshold is NOT immovable (strict less-than)
    CHECK(classify_normal(cues_of(65.0, 65.0, 0.0, 0.0), th) == MotionClass::Sliding);
    // the tip band is closed at both ends
    CHECK(classify_normal(cues_of(150.0, 150.0, 1.0, 0.0), th) == MotionClass::Tipping);
    CHECK(classify_normal(cues_of(150.0, 150.0, 5.0, 0.0), th) == MotionClass::Tipping);
    CHECK(classify_normal(cues_of(150.0, 150.0, 0.999, 0.0), th) == MotionClass::Sliding);
    CHECK(classify_normal(cues_of(150.0, 150.0, 5.001, 0.0), th) == MotionClass::Sliding);
}

TEST_CASE("property: lowering intensity never leaves immovable") {
    const Thresholds th;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> inten(0.0, 255.0), rate(-2.0, 8.0), shrink(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        CueSet c = cues_of(inten(rng), inten(rng), rate(rng), rate(rng));
        const MotionClass before = classify_normal(c, th);
        CueSet lower = c;
        lower.intensity_mean[0] *= shrink(rng);
        lower.intensity_mean[1] *= shrink(rng);
        const MotionClass after = classify_normal(lower, th);
        if (before == MotionClass::Immovable) CHECK(after == MotionClass::Immovable);
    }
}

TEST_CASE("property: sub-threshold perturbations preserve the class") {
    const Thresholds th;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> inten(0.0, 255.0), rate(-2.0, 8.0), u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        CueSet c = cues_of(inten(rng), inten(rng), rate(rng), rate(rng));

        // distance to the nearest decision surface
        double margin = 255.0;
        for (double m : c.intensity_mean) margin = std::min(margin, std::abs(m - th.intensity_fixed));
        for (double r : c.drop_rate) {
            margin = std::min(margin, std::abs(r - th.tip_band_low));
            margin = std::min(margin, std::abs(r - th.tip_band_high));
        }
        if (margin <= 1e-6) continue;

        const double eps = 0.5 * margin;
        CueSet p = c;
        p.intensity_mean[0] += eps * u(rng) * 0.99;
        p.intensity_mean[1] += eps * u(rng) * 0.99;
        p.drop_rate[0] += eps * u(rng) * 0.99;
        p.drop_rate[1] += eps * u(rng) * 0.99;
        CHECK(classify_normal(p, th) == classify_normal(c, th));
    }
}

TEST_CASE("property: classification is deterministic and total") {
    const Thresholds th;
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> inten(-10.0, 300.0), rate(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        const CueSet c = cues_of(inten(rng), inten(rng), rate(rng), rate(rng));
        const MotionClass a = classify_normal(c, th);
        CHECK(classify_normal(c, th) == a);
        CHECK((a == MotionClass::Immovable || a == MotionClass::Sliding || a == MotionClass::Tipping));
    }
}

TEST_CASE("tangential: equal and opposite means stationary") {
    const Thresholds th;
    CHECK(classify_tangential(-1.0, th) == TangentialClass::Stationary);
    CHECK(classify_tangential(-1.1, th) == TangentialClass::Stationary);  // inside the band
    CHECK(classify_tangential(-0.4, th) == TangentialClass::MovingContact);
    CHECK(classify_tangential(0.0, th) == TangentialClass::MovingContact);
}

TEST_CASE("evaluate: perfect predictions") {
    std::vector<std::pair<MotionClass, MotionClass>> trials;
    for (int i = 0; i < 20; ++i) {
        trials.push_back({MotionClass::Immovable, MotionClass::Immovable});
        trials.push_back({MotionClass::Sliding, MotionClass::Sliding});
        trials.push_back({MotionClass::Tipping, MotionClass::Tipping});
    }
    const auto m = evaluate(trials);
    CHECK(m.accuracy() == 1.0);
    CHECK(m.total() == 60);
    CHECK(m.count(MotionClass::Immovable, MotionClass::Immovable) == 20);
    CHECK(m.count(MotionClass::Sliding, MotionClass::Sliding) == 20);
    CHECK(m.count(MotionClass::Tipping, MotionClass::Tipping) == 20);
    CHECK(m.precision(MotionClass::Sliding) == 1.0);
    CHECK(m.recall(MotionClass::Tipping) == 1.0);
}

TEST_CASE("evaluate: one miss among ten") {
    std::vector<std::pair<MotionClass, MotionClass>> trials;
    for (int i = 0; i < 9; ++i) trials.push_back({MotionClass::Tipping, MotionClass::Tipping});
    trials.push_back({MotionClass::Tipping, MotionClass::Sliding});
    const auto m = evaluate(trials);
    CHECK(m.accuracy() == doctest::Approx(0.9));
    CHECK(m.count(MotionClass::Tipping, MotionClass::Sliding) == 1);
    CHECK(m.recall(MotionClass::Tipping) == doctest::Approx(0.9));
}

TEST_CASE("evaluate: empty input is an error") {
    CHECK_THROWS_AS(evaluate({}), EmptyEvaluationError);
}

TEST_CASE("class names round-trip") {
    for (MotionClass c : {MotionClass::Immovable, MotionClass::Sliding, MotionClass::Tipping})
        CHECK(parse_motion_class(to_string(c)) == c);
    CHECK_FALSE(parse_motion_class("rolling").has_value());
    for (TangentialClass c : {TangentialClass::Stationary, TangentialClass::MovingContact})
        CHECK(parse_tangential_class(to_string(c)) == c);
}

TEST_CASE("threshold validation") {
    Thresholds bad;
    bad.intensity_fixed = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = Thresholds{};
    bad.tip_band_low = 5.0;
    bad.tip_band_high = 1.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
