#include "incontact/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "incontact/errors.hpp"
#include "incontact/tip_kinematics.hpp"

namespace incontact {

namespace {
constexpr double kGravity = 9.81;  // m/s^2
}

const char* to_string(Shape s) { return s == Shape::Cylinder ? "cylinder" : "box"; }

const char* to_string(Mobility m) {
    switch (m) {
        case Mobility::Free: return "free";
        case Mobility::TipProne: return "tip_prone";
        case Mobility::WallConstrained: return "wall_constrained";
    }
    return "?";
}

const char* to_string(Quirk q) {
    switch (q) {
        case Quirk::None: return "none";
        case Quirk::Deformable: return "deformable";
        case Quirk::Concave: return "concave";
    }
    return "?";
}

std::optional<Shape> parse_shape(const std::string& s) {
    if (s == "cylinder") return Shape::Cylinder;
    if (s == "box") return Shape::Box;
    return std::nullopt;
}

std::optional<Mobility> parse_mobility(const std::string& s) {
    if (s == "free") return Mobility::Free;
    if (s == "tip_prone") return Mobility::TipProne;
    if (s == "wall_constrained") return Mobility::WallConstrained;
    return std::nullopt;
}

std::optional<Quirk> parse_quirk(const std::string& s) {
    if (s == "none") return Quirk::None;
    if (s == "deformable") return Quirk::Deformable;
    if (s == "concave") return Quirk::Concave;
    return std::nullopt;
}

void ObjectSpec::validate() const {
    if (name.empty()) throw DomainError("object needs a name");
    if (dim_a_mm <= 0.0 || height_mm <= 0.0 || weight_g <= 0.0)
        throw DomainError("object dimensions and weight must be positive");
    if (shape == Shape::Box && dim_b_mm <= 0.0)
        throw DomainError("box objects need a positive face depth");
    if (!(friction_mu > 0.0 && friction_mu < 2.0))
        throw DomainError("friction coefficient must lie in (0, 2)");
}

void TrialConfig::validate() const {
    if (speed_mm_s < 0.0) throw DomainError("speed must be non-negative");
    if (contact_height_mm <= 0.0) throw DomainError("contact height must be positive");
    if (!(max_normal_force_n > immovable_threshold_n))
        throw DomainError("force cap must exceed the immovable threshold");
    if (wall_stiffness_n_mm <= 0.0) throw DomainError("wall stiffness must be positive");
    if (noise_sigma < 0.0) throw DomainError("noise sigma must be non-negative");
    if (push_distance_mm <= 0.0) throw DomainError("push distance must be positive");
    if (tangential_ratio < 0.0) throw DomainError("tangential ratio must be non-negative");
}

double force_to_signal(double force_n, double f0_n) {
    if (force_n < 0.0) throw DomainError("contact force must be non-negative");
    if (f0_n <= 0.0) throw DomainError("signal saturation constant must be positive");
    return 255.0 / (1.0 + force_n / f0_n);
}

namespace {

double sq(double v) { return v * v; }

// Fraction of the contact force reaching a taxel at offset (dx, dy) from the
// patch center. Peak-normalized: the center taxel carries the full force,
// which reproduces the pairing of a ~20 N press with a sub-threshold signal.
double footprint_weight(const SceneState& st, double dx, double dy) {
    const double hx = st.footprint_half_x_mm;
    const double hy = st.footprint_half_y_mm;
    if (st.footprint_shape == Shape::Cylinder) {
        const double rho = std::sqrt(sq(dx / hx) + sq(dy / hy));
        if (rho >= 1.0) return 0.0;
        return sq(std::cos(1.5707963267948966 * rho));
    }
    if (std::abs(dx) >= hx || std::abs(dy) >= hy) return 0.0;
    return sq(std::cos(1.5707963267948966 * dx / hx)) * sq(std::cos(1.5707963267948966 * dy / hy));
}

// Quasi-static push force against a tipping object: torque balance about the
// far bottom edge, with gravity resisting through the offset of the center of
// mass. Decays toward zero as the object approaches its balance point.
double tip_resist_force(const ObjectSpec& object, double contact_height_mm, double theta) {
    const double m_kg = object.weight_g / 1000.0;
    const double lever = 0.5 * object.width_along_push() * std::cos(theta) -
                         0.5 * object.height_mm * std::sin(theta);
    return std::max(0.0, m_kg * kGravity * lever / contact_height_mm);
}

double normal_speed(const TrialConfig& config) {
    return config.speed_mm_s / std::sqrt(1.0 + sq(config.tangential_ratio));
}

} // namespace

SceneState init_scene(const ObjectSpec& object, const TrialConfig& config, const SensorGeometry& geometry) {
    object.validate();
    config.validate();
    geometry.validate();
    if (config.contact_height_mm >= object.height_mm)
        throw DomainError("contact height must be below the object height");

    SceneState st;
    st.patch_x_mm = config.start_x_mm;
    st.patch_y_mm = config.start_y_mm;
    st.signal_f0_n = config.signal_f0_n;
    st.footprint_shape = object.shape;
    if (object.shape == Shape::Cylinder)
        st.footprint_half_x_mm = std::clamp(0.18 * object.dim_a_mm, 8.0, 14.0);
    else
        st.footprint_half_x_mm = std::clamp(0.12 * object.dim_b_mm, 10.0, 18.0);
    st.footprint_half_y_mm = 12.0;

    if (config.brush) {
        st.in_contact = true;
        st.contact_force_n = config.brush_force_n;
    } else if (config.mobility == Mobility::WallConstrained) {
        st.in_contact = false;  // force ramps from zero penetration
    } else {
        st.in_contact = true;
        st.contact_force_n = std::max(
            config.mobility == Mobility::Free
                ? object.friction_mu * (object.weight_g / 1000.0) * kGravity
                : tip_resist_force(object, config.contact_height_mm, 0.0),
            config.engagement_force_n);
    }
    return st;
}

void step_scene(SceneState& state, const ObjectSpec& object, const TrialConfig& config,
                const SensorGeometry& geometry, double dt_s) {
    if (state.ended) return;
    state.t_s += dt_s;

    if (config.brush) {
        // tangential brushing along a wall-pinned object at constant force
        state.pose_tangential_mm += config.speed_mm_s * dt_s;
        state.patch_x_mm = config.start_x_mm - (1.0 - config.tangential_follow) * state.pose_tangential_mm;
        state.contact_force_n = config.brush_force_n;
        state.in_contact = true;
        if (state.pose_tangential_mm >= config.push_distance_mm) state.ended = true;
        return;
    }

    const double v_n = normal_speed(config);
    const double v_t = config.tangential_ratio * v_n;

    switch (config.mobility) {
        case Mobility::Free: {
            state.pose_normal_mm += v_n * dt_s;
            state.pose_tangential_mm += v_t * dt_s;
            // the object translates with the contact; the patch stays put
            state.contact_force_n = std::max(
                object.friction_mu * (object.weight_g / 1000.0) * kGravity, config.engagement_force_n);
            state.in_contact = true;
            if (state.pose_normal_mm >= config.push_distance_mm) state.ended = true;
            break;
        }
        case Mobility::TipProne: {
            const TipScenario scenario{geometry.radius_mm, object.width_along_push(),
                                       config.contact_height_mm};
            const double limit = 0.85 * tip_x_max(scenario);
            const double next_x = state.pose_normal_mm + v_n * dt_s;
            if (next_x >= limit) {
                // contact about to leave the trackable range; cut the trial
                state.ended = true;
                state.truncated = true;
                break;
            }
            state.pose_normal_mm = next_x;
            state.pose_tangential_mm += v_t * dt_s;
            state.tip_theta_rad = tip_angle(scenario, next_x);
            const double drop = contact_drop(scenario, state.tip_theta_rad);
            if (config.adversarial && object.quirk == Quirk::Deformable) {
                // the sensor dents the object; the patch barely moves
                state.patch_y_mm = config.start_y_mm;
            } else if (config.adversarial && object.quirk == Quirk::Concave) {
                // a protruding rim keeps contact and walks the patch upward
                state.patch_y_mm = config.start_y_mm - 0.5 * drop;
            } else {
                state.patch_y_mm = config.start_y_mm + drop;
            }
            state.contact_force_n = std::max(
                tip_resist_force(object, config.contact_height_mm, state.tip_theta_rad),
                config.engagement_force_n);
            state.in_contact = true;
            if (state.pose_normal_mm >= config.push_distance_mm) state.ended = true;
            break;
        }
        case Mobility::WallConstrained: {
            if (!state.halted) {
                const double next_n = state.pose_normal_mm + v_n * dt_s;
                const double next_force = config.wall_stiffness_n_mm * next_n;
                if (next_force > config.max_normal_force_n) {
                    state.halted = true;  // stop before exceeding the cap
                } else {
                    state.pose_normal_mm = next_n;
                    state.pose_tangential_mm += v_t * dt_s;
                    state.contact_force_n = next_force;
                }
            }
            if (state.halted) {
                state.hold_elapsed_s += dt_s;
                if (state.hold_elapsed_s >= config.hold_time_s - 1e-9) state.ended = true;
            }
            state.in_contact = state.contact_force_n > 0.0;
            if (state.pose_normal_mm >= config.push_distance_mm) state.ended = true;
            break;
        }
    }
}

RawFrame render_frame(const SceneState& state, const SensorGeometry& geometry,
                      const std::vector<int>& baseline, double noise_sigma, SplitMix64& noise) {
    geometry.validate();
    const std::size_t n = static_cast<std::size_t>(geometry.rows) * geometry.cols;
    if (baseline.size() != n) throw StructuralError("baseline length does not match the sensor grid");

    RawFrame frame;
    frame.timestamp_s = state.t_s;
    frame.pose_normal_mm = state.pose_normal_mm;
    frame.pose_tangential_mm = state.pose_tangential_mm;
    frame.counts.resize(n);

    const double f0 = state.signal_f0_n;
    for (int r = 0; r < geometry.rows; ++r) {
        for (int c = 0; c < geometry.cols; ++c) {
            double taxel_force = 0.0;
            if (state.in_contact && state.contact_force_n > 0.0) {
                const double dx = (c + 0.5) * geometry.pitch_mm - state.patch_x_mm;
                const double dy = (r + 0.5) * geometry.pitch_mm - state.patch_y_mm;
                taxel_force = state.contact_force_n * footprint_weight(state, dx, dy);
            }
            const std::size_t i = static_cast<std::size_t>(r) * geometry.cols + c;
            double counts = baseline[i] * force_to_signal(taxel_force, f0) / 255.0;
            if (noise_sigma > 0.0) counts += noise_sigma * noise.gaussian();
            frame.counts[i] = std::max(0, static_cast<int>(std::lround(counts)));
        }
    }
    return frame;
}

TrialRecord generate_trial(const ObjectSpec& object, const TrialConfig& config,
                           const SensorGeometry& geometry) {
    SplitMix64 rng(config.seed);

    TrialRecord trial;
    trial.geometry = geometry;
    trial.object = object;
    trial.config = config;

    const std::size_t n = static_cast<std::size_t>(geometry.rows) * geometry.cols;
    trial.baseline.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        trial.baseline[i] = 780 + static_cast<int>(rng.below(41));  // mild per-taxel spread

    SceneState state = init_scene(object, config, geometry);
    const double dt = 1.0 / geometry.sample_rate_hz;
    const int max_frames = 100000;
    while (static_cast<int>(trial.frames.size()) < max_frames) {
        trial.frames.push_back(render_frame(state, geometry, trial.baseline, config.noise_sigma, rng));
        step_scene(state, object, config, geometry, dt);
        if (state.ended) break;
    }

    switch (config.mobility) {
        case Mobility::Free: trial.true_class = MotionClass::Sliding; break;
        case Mobility::TipProne: trial.true_class = MotionClass::Tipping; break;
        case Mobility::WallConstrained: trial.true_class = MotionClass::Immovable; break;
    }
    if (config.brush)
        trial.true_tangential = config.tangential_follow == 0.0 ? TangentialClass::Stationary
                                                                : TangentialClass::MovingContact;
    return trial;
}

std::vector<TrialRecord> generate_dataset(const std::vector<ObjectSpec>& objects,
                                          const DatasetOptions& options) {
    if (objects.empty()) throw DomainError("object catalog is empty");
    if (options.trials_per_condition <= 0) throw DomainError("trials_per_condition must be positive");

    const Mobility conditions[] = {Mobility::Free, Mobility::TipProne, Mobility::WallConstrained};
    std::vector<TrialRecord> trials;
    trials.reserve(objects.size() * 3 * options.trials_per_condition);

    std::uint64_t trial_index = 0;
    for (const ObjectSpec& object : objects) {
        for (Mobility mobility : conditions) {
            for (int k = 0; k < options.trials_per_condition; ++k, ++trial_index) {
                SplitMix64 rng(derive_seed(options.seed, trial_index));

                TrialConfig config;
                config.mobility = mobility;
                config.noise_sigma = options.noise_sigma;
                config.adversarial = options.adversarial;
                // half the condition's trials move purely normal, half with an
                // equal tangential component
                config.tangential_ratio = k < (options.trials_per_condition + 1) / 2 ? 0.0 : 1.0;
                // emulate hand-shifted initial poses with seeded jitter
                config.contact_height_mm = object.height_mm * rng.uniform(0.55, 0.75);
                config.start_y_mm = rng.uniform(28.0, 40.0);
                config.start_x_mm = 0.5 * options.geometry.width_mm() + rng.uniform(-8.0, 8.0);
                config.seed = rng.next();

                trials.push_back(generate_trial(object, config, options.geometry));
            }
        }
    }
    return trials;
}

std::vector<ObjectSpec> default_catalog() {
    return {
        {"Glass Vase", Shape::Cylinder, 90.0, 0.0, 190.0, 390.0, 0.3, Quirk::None},
        {"Cardboard Cylinder", Shape::Cylinder, 61.0, 0.0, 270.0, 170.0, 0.3, Quirk::None},
        {"Salt Shaker", Shape::Cylinder, 68.0, 0.0, 208.0, 910.0, 0.3, Quirk::None},
        {"Wooden Box", Shape::Box, 100.0, 165.0, 230.0, 420.0, 0.3, Quirk::None},
        {"Cardboard Box", Shape::Box, 43.0, 133.0, 180.0, 260.0, 0.3, Quirk::None},
        {"Pancake Mix", Shape::Box, 60.0, 155.0, 208.0, 960.0, 0.3, Quirk::None},
        {"Mayonnaise", Shape::Box, 70.0, 90.0, 180.0, 610.0, 0.3, Quirk::None},
        {"Coconut Water", Shape::Box, 74.0, 80.0, 230.0, 1060.0, 0.3, Quirk::None},
        {"Lemonade", Shape::Box, 80.0, 110.0, 270.0, 2000.0, 0.3, Quirk::Concave},
        {"Sunflower Oil", Shape::Box, 76.0, 76.0, 240.0, 950.0, 0.3, Quirk::None},
        {"Balsamic Vinaigrette", Shape::Box, 45.0, 103.0, 204.0, 300.0, 0.3, Quirk::None},
        {"Syrup", Shape::Box, 70.0, 106.0, 255.0, 900.0, 0.3, Quirk::None},
        {"Coffee Grounds", Shape::Box, 90.0, 140.0, 180.0, 620.0, 0.3, Quirk::Deformable},
    };
}

std::vector<ObjectSpec> prototypical_catalog() {
    auto all = default_catalog();
    all.resize(5);
    return all;
}

} // namespace incontact
