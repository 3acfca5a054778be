#include "incontact/trial_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "incontact/errors.hpp"

namespace incontact {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// One parsed line: record type plus key=value fields and trailing bare tokens
// (used for count arrays).
struct Record {
    std::string type;
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::string> bare;
    std::size_t line = 0;

    const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return &v;
        return nullptr;
    }
};

// Splits a line into tokens, honoring double quotes with backslash escapes.
std::vector<std::string> tokenize(const std::string& line, std::size_t line_no) {
    std::vector<std::string> tokens;
    std::string cur;
    bool in_token = false, in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '\\' && i + 1 < line.size()) {
                cur.push_back(line[++i]);
            } else if (c == '"') {
                in_quotes = false;
            } else {
                cur.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            in_quotes = true;
            in_token = true;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            if (in_token) {
                tokens.push_back(cur);
                cur.clear();
                in_token = false;
            }
            continue;
        }
        cur.push_back(c);
        in_token = true;
    }
    if (in_quotes)
        throw ParseError(ParseError::Kind::BadRecord, line_no, "unterminated quote");
    if (in_token) tokens.push_back(cur);
    return tokens;
}

Record parse_record(const std::string& line, std::size_t line_no) {
    Record rec;
    rec.line = line_no;
    auto tokens = tokenize(line, line_no);
    if (tokens.empty()) return rec;
    rec.type = tokens[0];
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos)
            rec.bare.push_back(tokens[i]);
        else
            rec.fields.push_back({tokens[i].substr(0, eq), tokens[i].substr(eq + 1)});
    }
    return rec;
}

double parse_double(const Record& rec, const std::string& key) {
    const std::string* v = rec.find(key);
    if (!v)
        throw ParseError(ParseError::Kind::MissingRecord, rec.line,
                         rec.type + " record is missing field '" + key + "'");
    double out = 0.0;
    auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size() || !std::isfinite(out))
        throw ParseError(ParseError::Kind::BadNumber, rec.line,
                         "field '" + key + "' is not a finite number: " + *v);
    return out;
}

std::uint64_t parse_u64(const Record& rec, const std::string& key) {
    const std::string* v = rec.find(key);
    if (!v)
        throw ParseError(ParseError::Kind::MissingRecord, rec.line,
                         rec.type + " record is missing field '" + key + "'");
    std::uint64_t out = 0;
    auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size())
        throw ParseError(ParseError::Kind::BadNumber, rec.line,
                         "field '" + key + "' is not an unsigned integer: " + *v);
    return out;
}

int parse_int(const Record& rec, const std::string& key) {
    const double v = parse_double(rec, key);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ParseError(ParseError::Kind::BadNumber, rec.line, "field '" + key + "' is not an integer");
    return i;
}

std::string parse_string(const Record& rec, const std::string& key) {
    const std::string* v = rec.find(key);
    if (!v)
        throw ParseError(ParseError::Kind::MissingRecord, rec.line,
                         rec.type + " record is missing field '" + key + "'");
    return *v;
}

std::vector<int> parse_count_array(Record rec, std::size_t expected, const char* what) {
    if (!rec.bare.empty() && rec.bare.front() == "counts") rec.bare.erase(rec.bare.begin());
    if (rec.bare.size() < expected)
        throw ParseError(ParseError::Kind::TruncatedRecord, rec.line,
                         std::string(what) + " holds " + std::to_string(rec.bare.size()) +
                             " counts, expected " + std::to_string(expected));
    if (rec.bare.size() > expected)
        throw ParseError(ParseError::Kind::DimensionMismatch, rec.line,
                         std::string(what) + " holds " + std::to_string(rec.bare.size()) +
                             " counts, expected " + std::to_string(expected));
    std::vector<int> out(expected);
    for (std::size_t i = 0; i < expected; ++i) {
        const std::string& tok = rec.bare[i];
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out[i]);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
            throw ParseError(ParseError::Kind::BadNumber, rec.line, "bad count value: " + tok);
        if (out[i] < 0)
            throw ParseError(ParseError::Kind::BadNumber, rec.line, "negative count value: " + tok);
    }
    return out;
}

void write_field(std::ostream& os, const char* key, double v) { os << ' ' << key << '=' << format_double(v); }

} // namespace

void write_trial(const std::filesystem::path& path, const TrialRecord& trial) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path.string());

    os << "version " << kTrialLogVersion << "\n";

    const SensorGeometry& g = trial.geometry;
    os << "geometry rows=" << g.rows << " cols=" << g.cols;
    write_field(os, "pitch_mm", g.pitch_mm);
    write_field(os, "radius_mm", g.radius_mm);
    write_field(os, "sample_rate_hz", g.sample_rate_hz);
    os << "\n";

    const ObjectSpec& o = trial.object;
    os << "object name=" << quote(o.name) << " shape=" << to_string(o.shape);
    write_field(os, "dim_a_mm", o.dim_a_mm);
    write_field(os, "dim_b_mm", o.dim_b_mm);
    write_field(os, "height_mm", o.height_mm);
    write_field(os, "weight_g", o.weight_g);
    write_field(os, "friction_mu", o.friction_mu);
    os << " quirk=" << to_string(o.quirk) << "\n";

    const TrialConfig& c = trial.config;
    os << "config mobility=" << to_string(c.mobility);
    write_field(os, "speed_mm_s", c.speed_mm_s);
    write_field(os, "contact_height_mm", c.contact_height_mm);
    write_field(os, "tangential_ratio", c.tangential_ratio);
    write_field(os, "max_normal_force_n", c.max_normal_force_n);
    write_field(os, "immovable_threshold_n", c.immovable_threshold_n);
    write_field(os, "wall_stiffness_n_mm", c.wall_stiffness_n_mm);
    write_field(os, "noise_sigma", c.noise_sigma);
    os << " seed=" << c.seed;
    write_field(os, "push_distance_mm", c.push_distance_mm);
    write_field(os, "hold_time_s", c.hold_time_s);
    write_field(os, "engagement_force_n", c.engagement_force_n);
    write_field(os, "signal_f0_n", c.signal_f0_n);
    write_field(os, "start_x_mm", c.start_x_mm);
    write_field(os, "start_y_mm", c.start_y_mm);
    os << " brush=" << (c.brush ? 1 : 0);
    write_field(os, "brush_force_n", c.brush_force_n);
    write_field(os, "tangential_follow", c.tangential_follow);
    os << " adversarial=" << (c.adversarial ? 1 : 0) << "\n";

    if (trial.true_class || trial.true_tangential) {
        os << "label";
        if (trial.true_class) os << " class=" << to_string(*trial.true_class);
        if (trial.true_tangential) os << " tangential=" << to_string(*trial.true_tangential);
        os << "\n";
    }

    os << "baseline";
    for (int v : trial.baseline) os << ' ' << v;
    os << "\n";

    for (const RawFrame& f : trial.frames) {
        os << "frame t=" << format_double(f.timestamp_s)
           << " pose_n=" << format_double(f.pose_normal_mm)
           << " pose_t=" << format_double(f.pose_tangential_mm) << " counts";
        for (int v : f.counts) os << ' ' << v;
        os << "\n";
    }
    if (!os) throw Error("write failed: " + path.string());
}

TrialRecord read_trial(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open for reading: " + path.string());

    TrialRecord trial;
    std::string line;
    std::size_t line_no = 0;

    // header records must arrive in a fixed order: version, geometry, object,
    // config, optional label, baseline, then the frame lines
    enum class Stage { Version, Geometry, Object, Config, Baseline, Frames } stage = Stage::Version;
    std::size_t grid_size = 0;
    double last_t = 0.0;

    while (std::getline(is, line)) {
        ++line_no;
        Record rec = parse_record(line, line_no);
        if (rec.type.empty() || rec.type[0] == '#') continue;

        if (stage == Stage::Version) {
            if (rec.type != "version" || rec.bare.size() != 1)
                throw ParseError(ParseError::Kind::UnsupportedVersion, line_no,
                                 "expected 'version 1' as the first record");
            if (rec.bare[0] != kTrialLogVersion)
                throw ParseError(ParseError::Kind::UnsupportedVersion, line_no,
                                 "unsupported trial-log version: " + rec.bare[0]);
            stage = Stage::Geometry;
            continue;
        }

        if (rec.type == "geometry") {
            if (stage != Stage::Geometry)
                throw ParseError(ParseError::Kind::BadRecord, line_no, "geometry record out of order");
            trial.geometry.rows = parse_int(rec, "rows");
            trial.geometry.cols = parse_int(rec, "cols");
            trial.geometry.pitch_mm = parse_double(rec, "pitch_mm");
            trial.geometry.radius_mm = parse_double(rec, "radius_mm");
            trial.geometry.sample_rate_hz = parse_double(rec, "sample_rate_hz");
            try {
                trial.geometry.validate();
            } catch (const Error& e) {
                throw ParseError(ParseError::Kind::BadRecord, line_no, e.what());
            }
            grid_size = static_cast<std::size_t>(trial.geometry.rows) * trial.geometry.cols;
            stage = Stage::Object;
            continue;
        }
        if (rec.type == "object") {
            if (stage != Stage::Object)
                throw ParseError(ParseError::Kind::BadRecord, line_no, "object record out of order");
            trial.object.name = parse_string(rec, "name");
            auto shape = parse_shape(parse_string(rec, "shape"));
            if (!shape) throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown shape");
            trial.object.shape = *shape;
            trial.object.dim_a_mm = parse_double(rec, "dim_a_mm");
            trial.object.dim_b_mm = parse_double(rec, "dim_b_mm");
            trial.object.height_mm = parse_double(rec, "height_mm");
            trial.object.weight_g = parse_double(rec, "weight_g");
            trial.object.friction_mu = parse_double(rec, "friction_mu");
            auto quirk = parse_quirk(parse_string(rec, "quirk"));
            if (!quirk) throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown quirk");
            trial.object.quirk = *quirk;
            stage = Stage::Config;
            continue;
        }
        if (rec.type == "config") {
            if (stage != Stage::Config)
                throw ParseError(ParseError::Kind::BadRecord, line_no, "config record out of order");
            TrialConfig& c = trial.config;
            auto mobility = parse_mobility(parse_string(rec, "mobility"));
            if (!mobility) throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown mobility");
            c.mobility = *mobility;
            c.speed_mm_s = parse_double(rec, "speed_mm_s");
            c.contact_height_mm = parse_double(rec, "contact_height_mm");
            c.tangential_ratio = parse_double(rec, "tangential_ratio");
            c.max_normal_force_n = parse_double(rec, "max_normal_force_n");
            c.immovable_threshold_n = parse_double(rec, "immovable_threshold_n");
            c.wall_stiffness_n_mm = parse_double(rec, "wall_stiffness_n_mm");
            c.noise_sigma = parse_double(rec, "noise_sigma");
            c.seed = parse_u64(rec, "seed");
            c.push_distance_mm = parse_double(rec, "push_distance_mm");
            c.hold_time_s = parse_double(rec, "hold_time_s");
            c.engagement_force_n = parse_double(rec, "engagement_force_n");
            c.signal_f0_n = parse_double(rec, "signal_f0_n");
            c.start_x_mm = parse_double(rec, "start_x_mm");
            c.start_y_mm = parse_double(rec, "start_y_mm");
            c.brush = parse_int(rec, "brush") != 0;
            c.brush_force_n = parse_double(rec, "brush_force_n");
            c.tangential_follow = parse_double(rec, "tangential_follow");
            c.adversarial = parse_int(rec, "adversarial") != 0;
            stage = Stage::Baseline;
            continue;
        }
        if (rec.type == "label") {
            if (stage != Stage::Baseline)
                throw ParseError(ParseError::Kind::BadRecord, line_no, "label record out of order");
            if (const std::string* c = rec.find("class")) {
                auto cls = parse_motion_class(*c);
                if (!cls)
                    throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown motion class");
                trial.true_class = *cls;
            }
            if (const std::string* t = rec.find("tangential")) {
                auto tc = parse_tangential_class(*t);
                if (!tc)
                    throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown tangential class");
                trial.true_tangential = *tc;
            }
            continue;
        }
        if (rec.type == "baseline") {
            if (stage != Stage::Baseline)
                throw ParseError(ParseError::Kind::BadRecord, line_no, "baseline record out of order");
            trial.baseline = parse_count_array(rec, grid_size, "baseline record");
            for (int v : trial.baseline)
                if (v <= 0)
                    throw ParseError(ParseError::Kind::BadNumber, line_no,
                                     "baseline entries must be positive");
            stage = Stage::Frames;
            continue;
        }
        if (rec.type == "frame") {
            if (stage != Stage::Frames)
                throw ParseError(ParseError::Kind::BadRecord, line_no,
                                 "frame record before the baseline record");
            RawFrame f;
            f.timestamp_s = parse_double(rec, "t");
            f.pose_normal_mm = parse_double(rec, "pose_n");
            f.pose_tangential_mm = parse_double(rec, "pose_t");
            f.counts = parse_count_array(rec, grid_size, "frame record");
            if (!trial.frames.empty() && f.timestamp_s <= last_t)
                throw ParseError(ParseError::Kind::NonMonotoneTime, line_no,
                                 "frame timestamps must strictly increase");
            last_t = f.timestamp_s;
            trial.frames.push_back(std::move(f));
            continue;
        }
        throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown record type: " + rec.type);
    }

    if (stage != Stage::Frames)
        throw ParseError(ParseError::Kind::MissingRecord, line_no, "file ends before the baseline record");
    if (trial.frames.empty())
        throw ParseError(ParseError::Kind::MissingRecord, line_no, "trial log contains no frames");
    return trial;
}

std::vector<ObjectSpec> read_catalog(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open catalog: " + path.string());

    std::vector<ObjectSpec> objects;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        Record rec = parse_record(line, line_no);
        if (rec.type.empty() || rec.type[0] == '#') continue;
        if (rec.type != "object")
            throw ParseError(ParseError::Kind::BadRecord, line_no,
                             "catalog lines must be 'object' records");
        ObjectSpec o;
        o.name = parse_string(rec, "name");
        auto shape = parse_shape(parse_string(rec, "shape"));
        if (!shape) throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown shape");
        o.shape = *shape;
        o.dim_a_mm = parse_double(rec, "dim_a_mm");
        o.dim_b_mm = o.shape == Shape::Box ? parse_double(rec, "dim_b_mm") : 0.0;
        o.height_mm = parse_double(rec, "height_mm");
        o.weight_g = parse_double(rec, "weight_g");
        o.friction_mu = parse_double(rec, "friction_mu");
        o.quirk = Quirk::None;
        if (const std::string* q = rec.find("quirk")) {
            auto quirk = parse_quirk(*q);
            if (!quirk) throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown quirk");
            o.quirk = *quirk;
        }
        try {
            o.validate();
        } catch (const Error& e) {
            throw ParseError(ParseError::Kind::BadRecord, line_no, e.what());
        }
        objects.push_back(std::move(o));
    }
    return objects;
}

void write_catalog(const std::filesystem::path& path, const std::vector<ObjectSpec>& objects) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path.string());
    os << "# object catalog: dimensions in mm, weight in g\n";
    for (const ObjectSpec& o : objects) {
        os << "object name=" << quote(o.name) << " shape=" << to_string(o.shape);
        write_field(os, "dim_a_mm", o.dim_a_mm);
        if (o.shape == Shape::Box) write_field(os, "dim_b_mm", o.dim_b_mm);
        write_field(os, "height_mm", o.height_mm);
        write_field(os, "weight_g", o.weight_g);
        write_field(os, "friction_mu", o.friction_mu);
        os << " quirk=" << to_string(o.quirk) << "\n";
    }
}

Thresholds read_thresholds(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open thresholds file: " + path.string());

    Thresholds th;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        Record rec = parse_record(line, line_no);
        if (rec.type.empty() || rec.type[0] == '#') continue;
        const auto eq = rec.type.find('=');
        if (eq == std::string::npos)
            throw ParseError(ParseError::Kind::BadRecord, line_no, "expected key=value");
        Record kv;
        kv.line = line_no;
        kv.type = "thresholds";
        kv.fields.push_back({rec.type.substr(0, eq), rec.type.substr(eq + 1)});
        const std::string key = kv.fields[0].first;
        if (key == "intensity_fixed")
            th.intensity_fixed = parse_double(kv, key);
        else if (key == "tip_band_low")
            th.tip_band_low = parse_double(kv, key);
        else if (key == "tip_band_high")
            th.tip_band_high = parse_double(kv, key);
        else if (key == "tangential_eps")
            th.tangential_eps = parse_double(kv, key);
        else
            throw ParseError(ParseError::Kind::BadRecord, line_no, "unknown threshold: " + key);
    }
    th.validate();
    return th;
}

} // namespace incontact
