#ifndef INCONTACT_SIMULATOR_HPP
#define INCONTACT_SIMULATOR_HPP

// Quasi-static scene simulator: a planar robot pushes or brushes rigid convex
// objects under three mobility conditions, and the contact is rendered into
// taxel-grid frames through a force-to-signal model with configurable noise.
// Produces labeled trials for verifying the classification pipeline.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "incontact/classifier.hpp"
#include "incontact/frame_processing.hpp"
#include "incontact/random.hpp"

namespace incontact {

enum class Shape { Cylinder, Box };
enum class Mobility { Free, TipProne, WallConstrained };

// Optional per-object failure-mode emulation, active only when a trial runs
// with adversarial mode on: a deformable object swallows the contact motion
// during tip; a concave one walks the patch up the sensor instead of down.
enum class Quirk { None, Deformable, Concave };

const char* to_string(Shape s);
const char* to_string(Mobility m);
const char* to_string(Quirk q);
std::optional<Shape> parse_shape(const std::string& s);
std::optional<Mobility> parse_mobility(const std::string& s);
std::optional<Quirk> parse_quirk(const std::string& s);

struct ObjectSpec {
    std::string name;
    Shape shape = Shape::Cylinder;
    double dim_a_mm = 90.0;   // cylinder: diameter; box: width along the push direction
    double dim_b_mm = 0.0;    // box only: depth of the contacted face
    double height_mm = 190.0;
    double weight_g = 390.0;
    double friction_mu = 0.3;
    Quirk quirk = Quirk::None;

    double width_along_push() const { return dim_a_mm; }
    void validate() const;
    bool operator==(const ObjectSpec&) const = default;
};

struct TrialConfig {
    Mobility mobility = Mobility::Free;
    double speed_mm_s = 10.0;
    double contact_height_mm = 120.0;     // height of first contact above the floor
    double tangential_ratio = 0.0;        // tangential motion component / normal component
    double max_normal_force_n = 30.0;     // robot halts before exceeding this
    double immovable_threshold_n = 20.0;  // ground-truth mobility definition
    double wall_stiffness_n_mm = 10.0;
    double noise_sigma = 0.0;             // counts, Gaussian per taxel per frame
    std::uint64_t seed = 1;

    // Protocol extensions beyond the core parameters.
    double push_distance_mm = 15.0;   // normal progress target for moving contacts
    double hold_time_s = 1.5;         // sampling continues this long after a force halt
    double engagement_force_n = 2.5;  // minimum contact force while an object moves with the push
    double signal_f0_n = 6.0;         // force-to-signal saturation constant
    double start_x_mm = 40.0;         // initial patch center on the grid
    double start_y_mm = 35.0;
    bool brush = false;               // tangential brushing protocol (wall-pinned object)
    double brush_force_n = 5.0;
    double tangential_follow = 0.0;   // fraction of tangential robot motion the object follows
    bool adversarial = false;         // enable Quirk emulation

    void validate() const;
    bool operator==(const TrialConfig&) const = default;
};

// A full labeled contact trial.
struct TrialRecord {
    SensorGeometry geometry;
    ObjectSpec object;
    TrialConfig config;
    std::vector<int> baseline;  // rows*cols unloaded counts
    std::vector<RawFrame> frames;
    std::optional<MotionClass> true_class;
    std::optional<TangentialClass> true_tangential;
    bool operator==(const TrialRecord&) const = default;
};

// Monotone decreasing signal model s(F) = 255 / (1 + F/F0): 255 when
// unloaded, saturating smoothly under load. Throws DomainError for F < 0.
double force_to_signal(double force_n, double f0_n = 6.0);

// Scene state between frames. The patch footprint parameters are carried here
// so rendering needs no further object knowledge.
struct SceneState {
    double t_s = 0.0;
    double pose_normal_mm = 0.0;
    double pose_tangential_mm = 0.0;
    double patch_x_mm = 0.0;
    double patch_y_mm = 0.0;
    double contact_force_n = 0.0;
    double footprint_half_x_mm = 14.0;
    double footprint_half_y_mm = 12.0;
    Shape footprint_shape = Shape::Cylinder;
    double signal_f0_n = 6.0;
    double tip_theta_rad = 0.0;
    bool in_contact = false;
    bool halted = false;      // force cap reached; robot no longer advances
    double hold_elapsed_s = 0.0;
    bool ended = false;
    bool truncated = false;   // tip reached the contact-loss cutoff
};

SceneState init_scene(const ObjectSpec& object, const TrialConfig& config, const SensorGeometry& geometry);

// Advances the scene by one sample interval. Free: the object translates with
// the contact and the patch stays put vertically. TipProne: the patch drops
// R*theta per the tip kinematics, truncated before contact is lost.
// WallConstrained: force ramps with penetration and the robot halts before
// exceeding max_normal_force_n.
void step_scene(SceneState& state, const ObjectSpec& object, const TrialConfig& config,
                const SensorGeometry& geometry, double dt_s);

// Renders the per-taxel counts for the current state: force falls off
// radially (cosine) over the footprint with the center taxel carrying the
// full contact force, then counts = baseline * s(F)/255 + Gaussian noise,
// rounded and clamped at zero. Deterministic given the noise stream.
RawFrame render_frame(const SceneState& state, const SensorGeometry& geometry,
                      const std::vector<int>& baseline, double noise_sigma, SplitMix64& noise);

// One complete trial under the given configuration.
TrialRecord generate_trial(const ObjectSpec& object, const TrialConfig& config,
                           const SensorGeometry& geometry);

struct DatasetOptions {
    int trials_per_condition = 20;
    std::uint64_t seed = 1;
    double noise_sigma = 2.0;
    bool adversarial = false;
    SensorGeometry geometry{};
};

// objects x {Free, TipProne, WallConstrained} x trials_per_condition, with
// seeded jitter of contact height and lateral offset per trial. Half of each
// condition's trials move purely normal, half with an equal tangential
// component. Per-trial seeds derive from the trial index, so generation order
// does not affect the output.
std::vector<TrialRecord> generate_dataset(const std::vector<ObjectSpec>& objects,
                                          const DatasetOptions& options);

// Built-in object catalog (13 household items); the first five are the
// geometrically simple prototypical set.
std::vector<ObjectSpec> default_catalog();
std::vector<ObjectSpec> prototypical_catalog();

} // namespace incontact

#endif
