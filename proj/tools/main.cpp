// Command-line surface: simulate labeled trial datasets, extract per-frame
// features and cue fits, classify trials, aggregate confusion matrices, and
// tabulate the tip-kinematics model.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "incontact/errors.hpp"
#include "incontact/pipeline.hpp"
#include "incontact/tip_kinematics.hpp"
#include "incontact/trial_io.hpp"

namespace fs = std::filesystem;
using namespace incontact;

namespace {

std::string round3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::vector<fs::path> collect_trial_files(const fs::path& in) {
    std::vector<fs::path> files;
    if (fs::is_directory(in)) {
        for (const auto& entry : fs::directory_iterator(in))
            if (entry.is_regular_file() && entry.path().extension() == ".log")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(in);
    }
    return files;
}

struct PipelineOptions {
    FrameParams frame;
    RansacParams ransac;
    Thresholds thresholds;
    std::string thresholds_file;

    void finalize() {
        if (!thresholds_file.empty()) thresholds = read_thresholds(thresholds_file);
        thresholds.validate();
    }
};

void add_pipeline_flags(CLI::App* cmd, PipelineOptions& opt) {
    cmd->add_option("--upsample", opt.frame.upsample_factor, "Bicubic upsample factor")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threshold", opt.frame.patch_threshold, "Patch threshold on the 0-255 scale");
    cmd->add_option("--thresholds", opt.thresholds_file, "Classifier thresholds file");
    cmd->add_option("--seed", opt.ransac.seed, "Seed for the RANSAC sampling");
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const std::string& objects_file, int trials_per_condition, std::uint64_t seed,
                 double noise_sigma, bool adversarial, const std::string& out_dir) {
    std::vector<ObjectSpec> objects =
        objects_file.empty() ? default_catalog() : read_catalog(objects_file);

    DatasetOptions options;
    options.trials_per_condition = trials_per_condition;
    options.seed = seed;
    options.noise_sigma = noise_sigma;
    options.adversarial = adversarial;
    const auto trials = generate_dataset(objects, options);

    fs::create_directories(out_dir);
    std::ofstream manifest(fs::path(out_dir) / "manifest.txt");
    if (!manifest) throw Error("cannot write manifest in " + out_dir);
    manifest << "manifest version 1\n";
    manifest << "dataset objects=" << objects.size() << " trials_per_condition=" << trials_per_condition
             << " seed=" << seed << " noise_sigma=" << format_double(noise_sigma)
             << " adversarial=" << (adversarial ? 1 : 0) << " trials=" << trials.size() << "\n";

    for (std::size_t i = 0; i < trials.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "trial_%04zu.log", i);
        write_trial(fs::path(out_dir) / name, trials[i]);
        manifest << "trial file=" << name << " object=\"" << trials[i].object.name
                 << "\" mobility=" << to_string(trials[i].config.mobility)
                 << " class=" << to_string(*trials[i].true_class) << "\n";
    }
    std::cout << "wrote " << trials.size() << " trials to " << out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------- features

int cmd_features(const std::string& in_file, PipelineOptions& opt) {
    opt.finalize();
    const TrialRecord trial = read_trial(in_file);

    TrialAnalysis analysis;
    std::string note;
    try {
        analysis = analyze_trial(trial, opt.frame, opt.ransac, opt.thresholds);
    } catch (const InsufficientDataError& e) {
        // still print the per-frame features; the fit tables stay empty
        note = e.what();
        analysis.frame_features.clear();
        for (const RawFrame& frame : trial.frames)
            analysis.frame_features.push_back(
                process_frame(frame, trial.baseline, trial.geometry, opt.frame));
        analysis.tracks = build_tracks(trial, opt.frame);
    }

    std::cout << "# frames: t_s\tpose_n_mm\tpose_t_mm\tpresent\tcop_x_mm\tcop_y_mm\tarea_mm2\tintensity\n";
    for (std::size_t i = 0; i < trial.frames.size(); ++i) {
        const RawFrame& f = trial.frames[i];
        const PatchFeatures& p = analysis.frame_features[i];
        std::cout << format_double(f.timestamp_s) << '\t' << format_double(f.pose_normal_mm) << '\t'
                  << format_double(f.pose_tangential_mm) << '\t' << (p.present ? 1 : 0) << '\t';
        if (p.present)
            std::cout << format_double(p.cop_x_mm) << '\t' << format_double(p.cop_y_mm) << '\t'
                      << format_double(p.area_mm2) << '\t' << format_double(p.intensity) << "\n";
        else
            std::cout << "-\t-\t-\t-\n";
    }

    std::cout << "\n# fits: track\tpoints\tinliers\tbreakpoint\tslope1\tslope2\tmean1\tmean2\tsse\n";
    auto print_fit = [&](const char* name, FeatureKind kind, ProgressAxis axis,
                         const std::optional<PiecewiseFit>& fit) {
        std::size_t points = 0;
        for (const auto& t : analysis.tracks)
            if (t.feature == kind && t.axis == axis) points = t.points.size();
        std::cout << name << '\t' << points << '\t';
        if (fit)
            std::cout << fit->inlier_count << '\t' << format_double(fit->breakpoint) << '\t'
                      << format_double(fit->slope[0]) << '\t' << format_double(fit->slope[1]) << '\t'
                      << format_double(fit->mean[0]) << '\t' << format_double(fit->mean[1]) << '\t'
                      << format_double(fit->sse) << "\n";
        else
            std::cout << "-\t-\t-\t-\t-\t-\t-\n";
    };
    print_fit("cop_gravity_vs_normal", FeatureKind::CopGravity, ProgressAxis::NormalProgress,
              analysis.fits.drop);
    print_fit("cop_horizontal_vs_tangential", FeatureKind::CopHorizontal,
              ProgressAxis::TangentialProgress, analysis.fits.horizontal);
    print_fit("intensity_vs_time", FeatureKind::Intensity, ProgressAxis::Time, analysis.fits.intensity);
    print_fit("area_vs_normal", FeatureKind::Area, ProgressAxis::NormalProgress, analysis.fits.area);

    std::cout << "\n# cues\n";
    std::cout << "drop_rate\t" << format_double(analysis.cues.drop_rate[0]) << '\t'
              << format_double(analysis.cues.drop_rate[1]) << "\n";
    std::cout << "horizontal_rate\t" << format_double(analysis.cues.horizontal_rate[0]) << '\t'
              << format_double(analysis.cues.horizontal_rate[1]) << "\n";
    std::cout << "intensity_mean\t" << format_double(analysis.cues.intensity_mean[0]) << '\t'
              << format_double(analysis.cues.intensity_mean[1]) << "\n";
    std::cout << "area_rate\t" << format_double(analysis.cues.area_rate[0]) << '\t'
              << format_double(analysis.cues.area_rate[1]) << "\n";
    if (!note.empty()) std::cout << "# note: " << note << "\n";
    return 0;
}

// ---------------------------------------------------------------- classify

struct TrialResult {
    fs::path file;
    TrialAnalysis analysis;
    std::optional<MotionClass> truth;
};

std::vector<TrialResult> run_pipeline(const fs::path& in, PipelineOptions& opt) {
    opt.finalize();
    const auto files = collect_trial_files(in);
    std::vector<TrialResult> results;
    for (const fs::path& file : files) {
        const TrialRecord trial = read_trial(file);
        TrialResult res;
        res.file = file;
        res.truth = trial.true_class;
        res.analysis = analyze_trial(trial, opt.frame, opt.ransac, opt.thresholds);
        results.push_back(std::move(res));
    }
    return results;
}

int cmd_classify(const std::string& in, PipelineOptions& opt, const std::string& format) {
    const auto results = run_pipeline(in, opt);
    if (results.empty()) throw Error("no trial logs found in " + in);

    bool all_verdicts = true;
    if (format == "table") {
        std::printf("%-28s %-10s %9s %9s %9s %9s %-12s\n", "file", "predicted", "drop1", "drop2",
                    "inten1", "inten2", "tangential");
        for (const auto& r : results) {
            const CueSet& c = r.analysis.cues;
            std::printf("%-28s %-10s %9s %9s %9s %9s %-12s\n", r.file.filename().c_str(),
                        r.analysis.predicted ? to_string(*r.analysis.predicted) : "none",
                        round3(c.drop_rate[0]).c_str(), round3(c.drop_rate[1]).c_str(),
                        round3(c.intensity_mean[0]).c_str(), round3(c.intensity_mean[1]).c_str(),
                        r.analysis.tangential ? to_string(*r.analysis.tangential) : "none");
            if (!r.analysis.predicted && !r.analysis.tangential) all_verdicts = false;
        }
    } else {
        for (const auto& r : results) {
            const TrialAnalysis& a = r.analysis;
            std::cout << "trial file=" << r.file.filename().string()
                      << " predicted=" << (a.predicted ? to_string(*a.predicted) : "none")
                      << " intensity_only=" << (a.intensity_only ? 1 : 0);
            std::cout << " drop_rate1=" << format_double(a.cues.drop_rate[0])
                      << " drop_rate2=" << format_double(a.cues.drop_rate[1])
                      << " horizontal_rate1=" << format_double(a.cues.horizontal_rate[0])
                      << " horizontal_rate2=" << format_double(a.cues.horizontal_rate[1])
                      << " intensity_mean1=" << format_double(a.cues.intensity_mean[0])
                      << " intensity_mean2=" << format_double(a.cues.intensity_mean[1])
                      << " area_rate1=" << format_double(a.cues.area_rate[0])
                      << " area_rate2=" << format_double(a.cues.area_rate[1]);
            auto fit_fields = [&](const char* prefix, const std::optional<PiecewiseFit>& fit) {
                if (!fit) return;
                std::cout << ' ' << prefix << "_breakpoint=" << format_double(fit->breakpoint) << ' '
                          << prefix << "_inliers=" << fit->inlier_count;
            };
            fit_fields("drop", a.fits.drop);
            fit_fields("intensity", a.fits.intensity);
            fit_fields("horizontal", a.fits.horizontal);
            fit_fields("area", a.fits.area);
            std::cout << " tangential=" << (a.tangential ? to_string(*a.tangential) : "none");
            if (a.tangential_rate) std::cout << " tangential_rate=" << format_double(*a.tangential_rate);
            std::cout << "\n";
            if (!a.predicted && !a.tangential) all_verdicts = false;
        }
    }
    if (!all_verdicts) {
        std::cerr << "error: some trials yielded no verdict\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const std::string& in, PipelineOptions& opt, const std::string& format) {
    if (!fs::is_directory(in)) throw Error("evaluate expects a directory: " + in);
    const auto results = run_pipeline(in, opt);

    std::vector<std::pair<MotionClass, MotionClass>> pairs;
    for (const auto& r : results) {
        if (!r.truth)
            throw Error(r.file.string() + " carries no ground-truth label");
        if (!r.analysis.predicted)
            throw Error(r.file.string() + " yielded no motion-class prediction");
        pairs.push_back({*r.truth, *r.analysis.predicted});
    }
    const ConfusionMatrix m = evaluate(pairs);  // throws EmptyEvaluationError on none

    const MotionClass classes[] = {MotionClass::Immovable, MotionClass::Sliding, MotionClass::Tipping};
    if (format == "table") {
        std::printf("%-12s", "true\\pred");
        for (MotionClass p : classes) std::printf(" %10s", to_string(p));
        std::printf("\n");
        for (MotionClass t : classes) {
            std::printf("%-12s", to_string(t));
            for (MotionClass p : classes) std::printf(" %10zu", m.count(t, p));
            std::printf("\n");
        }
        std::printf("accuracy %s over %zu trials\n", round3(m.accuracy()).c_str(), m.total());
        for (MotionClass c : classes)
            std::printf("%-12s precision %s recall %s\n", to_string(c), round3(m.precision(c)).c_str(),
                        round3(m.recall(c)).c_str());
    } else {
        for (MotionClass t : classes)
            for (MotionClass p : classes)
                std::cout << "confusion true=" << to_string(t) << " predicted=" << to_string(p)
                          << " count=" << m.count(t, p) << "\n";
        std::cout << "accuracy value=" << format_double(m.accuracy()) << " trials=" << m.total() << "\n";
        for (MotionClass c : classes)
            std::cout << "class name=" << to_string(c) << " precision=" << format_double(m.precision(c))
                      << " recall=" << format_double(m.recall(c)) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- tip-model

int cmd_tip_model(double radius, double width, double height, int steps) {
    const TipScenario scenario{radius, width, height};
    scenario.validate();
    double x_hi = tip_x_max(scenario);
    if (!std::isfinite(x_hi)) x_hi = 0.35 * (radius + width);  // no kinematic cutoff; pick a span

    std::cout << "# x_mm\ttheta_rad\tdrop_mm\tslope\n";
    for (int i = 0; i <= steps; ++i) {
        const double x = x_hi * static_cast<double>(i) / static_cast<double>(steps);
        const double theta = tip_angle(scenario, x);
        const double drop = contact_drop(scenario, theta);
        double slope;
        if (i < steps) {
            slope = drop_slope(scenario, x);
        } else {
            const double dx = x_hi / (1000.0 * steps);
            slope = (drop - contact_drop(scenario, tip_angle(scenario, x - dx))) / dx;
        }
        std::cout << format_double(x) << '\t' << format_double(theta) << '\t' << format_double(drop)
                  << '\t' << format_double(slope) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"incontact: classify object motion from incidental tactile contact"};
    app.require_subcommand(1);

    // simulate
    std::string objects_file, out_dir;
    int trials_per_condition = 20;
    std::uint64_t sim_seed = 1;
    double noise_sigma = 2.0;
    bool adversarial = false;
    auto* sim = app.add_subcommand("simulate", "Generate a labeled synthetic trial dataset");
    sim->add_option("--objects", objects_file, "Object catalog file (default: built-in catalog)");
    sim->add_option("--trials-per-condition", trials_per_condition, "Trials per mobility condition")
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "Master seed; the only source of randomness");
    sim->add_option("--noise", noise_sigma, "Sensor noise sigma in counts");
    sim->add_flag("--adversarial", adversarial, "Enable the failure-mode emulation for quirky objects");
    sim->add_option("--out", out_dir, "Output directory")->required();

    // features
    std::string features_in;
    PipelineOptions features_opt;
    auto* feat = app.add_subcommand("features", "Per-frame patch features and cue fits for one trial");
    feat->add_option("--in", features_in, "Trial log file")->required();
    add_pipeline_flags(feat, features_opt);

    // classify
    std::string classify_in;
    PipelineOptions classify_opt;
    std::string classify_format = "records";
    auto* cls = app.add_subcommand("classify", "Predict the motion class of trials");
    cls->add_option("--in", classify_in, "Trial log file or directory")->required();
    cls->add_option("--format", classify_format, "records (full precision) or table (rounded)")
        ->check(CLI::IsMember({"records", "table"}));
    add_pipeline_flags(cls, classify_opt);

    // evaluate
    std::string evaluate_in;
    PipelineOptions evaluate_opt;
    std::string evaluate_format = "records";
    auto* eval = app.add_subcommand("evaluate", "Confusion matrix of predictions vs true labels");
    eval->add_option("--in", evaluate_in, "Directory of labeled trial logs")->required();
    eval->add_option("--format", evaluate_format, "records (full precision) or table (rounded)")
        ->check(CLI::IsMember({"records", "table"}));
    add_pipeline_flags(eval, evaluate_opt);

    // tip-model
    double tip_radius = 372.0, tip_width = 100.0, tip_height = 150.0;
    int tip_steps = 50;
    auto* tip = app.add_subcommand("tip-model", "Tabulate tip angle and contact drop vs push distance");
    tip->add_option("--radius", tip_radius, "Sensor radius of curvature (mm)")->required();
    tip->add_option("--width", tip_width, "Object width along the push (mm)")->required();
    tip->add_option("--height", tip_height, "Contact height above the floor (mm)")->required();
    tip->add_option("--steps", tip_steps, "Number of table rows past x = 0")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(objects_file, trials_per_condition, sim_seed, noise_sigma, adversarial,
                                out_dir);
        if (feat->parsed()) return cmd_features(features_in, features_opt);
        if (cls->parsed()) return cmd_classify(classify_in, classify_opt, classify_format);
        if (eval->parsed()) return cmd_evaluate(evaluate_in, evaluate_opt, evaluate_format);
        if (tip->parsed()) return cmd_tip_model(tip_radius, tip_width, tip_height, tip_steps);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
