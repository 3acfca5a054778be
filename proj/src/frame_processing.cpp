#include "incontact/frame_processing.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <unordered_map>

#include "incontact/errors.hpp"

namespace incontact {

void SensorGeometry::validate() const {
    if (rows < 2 || cols < 2) throw StructuralError("sensor grid needs at least 2x2 taxels");
    if (pitch_mm <= 0.0 || radius_mm <= 0.0 || sample_rate_hz <= 0.0)
        throw StructuralError("sensor pitch, radius, and sample rate must be positive");
}

Image normalize(const RawFrame& frame, const std::vector<int>& baseline, const SensorGeometry& geometry) {
    geometry.validate();
    const std::size_t n = static_cast<std::size_t>(geometry.rows) * geometry.cols;
    if (frame.counts.size() != n)
        throw StructuralError("frame counts length does not match the sensor grid");
    if (baseline.size() != n)
        throw StructuralError("baseline length does not match the sensor grid");

    Image out(geometry.rows, geometry.cols);
    for (std::size_t i = 0; i < n; ++i) {
        if (baseline[i] <= 0) throw InvalidBaselineError("baseline contains a non-positive entry");
        const double v = 255.0 * static_cast<double>(frame.counts[i]) / static_cast<double>(baseline[i]);
        out.data[i] = std::clamp(v, 0.0, 255.0);
    }
    return out;
}

namespace {

// Catmull-Rom weights (a = -0.5) for the four samples around fraction t.
void catmull_rom_weights(double t, double w[4]) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

struct TapSet {
    int base = 0;       // index of sample p1
    double w[4] = {0, 0, 0, 0};
};

// Output pixel i maps to source coordinate (i + 0.5)/factor - 0.5, so pixel
// centers of input and output grids stay aligned.
std::vector<TapSet> make_taps(int out_size, int factor) {
    std::vector<TapSet> taps(out_size);
    for (int i = 0; i < out_size; ++i) {
        const double src = (i + 0.5) / factor - 0.5;
        const double fl = std::floor(src);
        taps[i].base = static_cast<int>(fl);
        catmull_rom_weights(src - fl, taps[i].w);
    }
    return taps;
}

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

} // namespace

Image upsample_bicubic(const Image& img, int factor) {
    if (factor < 1) throw DomainError("upsample factor must be >= 1");
    if (factor == 1) return img;

    const auto row_taps = make_taps(img.rows * factor, factor);
    const auto col_taps = make_taps(img.cols * factor, factor);

    Image out(img.rows * factor, img.cols * factor);
    for (int r = 0; r < out.rows; ++r) {
        const TapSet& rt = row_taps[r];
        int ri[4];
        for (int k = 0; k < 4; ++k) ri[k] = clamp_index(rt.base - 1 + k, img.rows);
        for (int c = 0; c < out.cols; ++c) {
            const TapSet& ct = col_taps[c];
            double acc = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double* row = &img.data[static_cast<std::size_t>(ri[k]) * img.cols];
                double line = 0.0;
                for (int j = 0; j < 4; ++j)
                    line += ct.w[j] * row[clamp_index(ct.base - 1 + j, img.cols)];
                acc += rt.w[k] * line;
            }
            out.at(r, c) = std::clamp(acc, 0.0, 255.0);
        }
    }
    return out;
}

namespace {

// Directed boundary edge between pixel-corner lattice points.
struct BoundaryEdge {
    int x0, y0, x1, y1;
    bool used = false;
};

// Traces the closed loops formed by the boundary edges of one component and
// returns the outer one (largest positive signed area). At corners where two
// pixels of the component touch diagonally, the walk turns so both stay on a
// single outline, matching 8-connectivity.
Polygon trace_outer_boundary(std::vector<BoundaryEdge>& edges, int grid_w) {
    std::unordered_map<long long, std::vector<std::size_t>> outgoing;
    outgoing.reserve(edges.size());
    auto corner_key = [grid_w](int x, int y) {
        return static_cast<long long>(y) * (grid_w + 1) + x;
    };
    for (std::size_t i = 0; i < edges.size(); ++i)
        outgoing[corner_key(edges[i].x0, edges[i].y0)].push_back(i);

    Polygon best;
    double best_area = 0.0;

    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (edges[start].used) continue;
        Polygon loop;
        std::size_t cur = start;
        while (true) {
            BoundaryEdge& e = edges[cur];
            e.used = true;
            loop.push_back({static_cast<double>(e.x0), static_cast<double>(e.y0)});
            const int dx = e.x1 - e.x0;
            const int dy = e.y1 - e.y0;

            auto it = outgoing.find(corner_key(e.x1, e.y1));
            std::size_t next = edges.size();
            for (std::size_t cand : it->second) {
                if (edges[cand].used) continue;
                if (next == edges.size()) {
                    next = cand;
                    continue;
                }
                // pinch corner: prefer the turn that keeps circling the
                // diagonal neighbor (negative cross of travel directions)
                const BoundaryEdge& c = edges[cand];
                const double cr = dx * (c.y1 - c.y0) - dy * (c.x1 - c.x0);
                if (cr < 0.0) next = cand;
            }
            if (next == edges.size()) break;  // loop closed
            cur = next;
        }

        const double area = signed_area(loop);
        if (area > best_area) {
            best_area = area;
            best = std::move(loop);
        }
    }

    // merge runs of collinear lattice steps
    Polygon simplified;
    const std::size_t n = best.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& prev = best[(i + n - 1) % n];
        const Vec2& curp = best[i];
        const Vec2& next = best[(i + 1) % n];
        if (cross(prev, curp, next) != 0.0) simplified.push_back(curp);
    }
    return simplified;
}

} // namespace

std::vector<Polygon> segment_patch(const Image& fine, double patch_threshold, int min_component_area) {
    if (!(patch_threshold > 0.0 && patch_threshold < 255.0))
        throw DomainError("patch threshold must lie in (0, 255)");

    const int H = fine.rows;
    const int W = fine.cols;
    std::vector<int> label(static_cast<std::size_t>(H) * W, -1);
    auto fg = [&](int r, int c) { return fine.at(r, c) <= patch_threshold; };

    std::vector<Polygon> contours;
    int next_label = 0;
    for (int r0 = 0; r0 < H; ++r0) {
        for (int c0 = 0; c0 < W; ++c0) {
            if (!fg(r0, c0) || label[static_cast<std::size_t>(r0) * W + c0] >= 0) continue;

            // flood fill one 8-connected component
            std::vector<std::pair<int, int>> pixels;
            std::queue<std::pair<int, int>> frontier;
            frontier.push({r0, c0});
            label[static_cast<std::size_t>(r0) * W + c0] = next_label;
            while (!frontier.empty()) {
                auto [r, c] = frontier.front();
                frontier.pop();
                pixels.push_back({r, c});
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        if (dr == 0 && dc == 0) continue;
                        const int rr = r + dr;
                        const int cc = c + dc;
                        if (rr < 0 || rr >= H || cc < 0 || cc >= W) continue;
                        std::size_t idx = static_cast<std::size_t>(rr) * W + cc;
                        if (label[idx] < 0 && fg(rr, cc)) {
                            label[idx] = next_label;
                            frontier.push({rr, cc});
                        }
                    }
                }
            }

            if (static_cast<int>(pixels.size()) >= min_component_area) {
                auto in_component = [&](int r, int c) {
                    if (r < 0 || r >= H || c < 0 || c >= W) return false;
                    return label[static_cast<std::size_t>(r) * W + c] == next_label;
                };
                std::vector<BoundaryEdge> edges;
                for (auto [r, c] : pixels) {
                    if (!in_component(r - 1, c)) edges.push_back({c, r, c + 1, r});
                    if (!in_component(r, c + 1)) edges.push_back({c + 1, r, c + 1, r + 1});
                    if (!in_component(r + 1, c)) edges.push_back({c + 1, r + 1, c, r + 1});
                    if (!in_component(r, c - 1)) edges.push_back({c, r + 1, c, r});
                }
                contours.push_back(trace_outer_boundary(edges, W));
            }
            ++next_label;
        }
    }
    return contours;
}

std::optional<Polygon> merge_hull(const std::vector<Polygon>& contours) {
    if (contours.empty()) throw DomainError("merge_hull requires at least one contour");
    std::vector<Vec2> points;
    for (const Polygon& c : contours) points.insert(points.end(), c.begin(), c.end());
    Polygon hull = convex_hull(std::move(points));
    if (hull.empty()) return std::nullopt;
    return hull;
}

PatchFeatures patch_features(const Image& fine, const Polygon& hull, const SensorGeometry& geometry,
                             int factor, bool binary_moments) {
    geometry.validate();
    if (hull.size() < 3) throw DomainError("patch_features requires a non-degenerate hull");
    if (factor < 1) throw DomainError("upsample factor must be >= 1");

    double min_x = hull[0].x, max_x = hull[0].x, min_y = hull[0].y, max_y = hull[0].y;
    for (const Vec2& v : hull) {
        min_x = std::min(min_x, v.x);
        max_x = std::max(max_x, v.x);
        min_y = std::min(min_y, v.y);
        max_y = std::max(max_y, v.y);
    }
    const int c_lo = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    const int c_hi = std::min(fine.cols - 1, static_cast<int>(std::ceil(max_x + 0.5)));
    const int r_lo = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    const int r_hi = std::min(fine.rows - 1, static_cast<int>(std::ceil(max_y + 0.5)));

    double m00 = 0.0, m10 = 0.0, m01 = 0.0;
    for (int r = r_lo; r <= r_hi; ++r) {
        for (int c = c_lo; c <= c_hi; ++c) {
            const Vec2 center{c + 0.5, r + 0.5};
            if (!point_in_convex(hull, center)) continue;
            const double weight = binary_moments ? 1.0 : 255.0 - fine.at(r, c);
            m00 += weight;
            m10 += weight * center.x;
            m01 += weight * center.y;
        }
    }

    PatchFeatures out;
    if (m00 <= 0.0) return out;  // hull holds no pressure weight

    const double mm_per_px = geometry.pitch_mm / factor;
    out.present = true;
    out.cop_x_mm = (m10 / m00) * mm_per_px;
    out.cop_y_mm = (m01 / m00) * mm_per_px;
    out.area_mm2 = signed_area(hull) * mm_per_px * mm_per_px;

    // mean value within one taxel pitch of the center of pressure
    const double radius_px = static_cast<double>(factor);
    const double cop_x_px = m10 / m00;
    const double cop_y_px = m01 / m00;
    const int ic_lo = std::max(0, static_cast<int>(std::floor(cop_x_px - radius_px - 1.0)));
    const int ic_hi = std::min(fine.cols - 1, static_cast<int>(std::ceil(cop_x_px + radius_px)));
    const int ir_lo = std::max(0, static_cast<int>(std::floor(cop_y_px - radius_px - 1.0)));
    const int ir_hi = std::min(fine.rows - 1, static_cast<int>(std::ceil(cop_y_px + radius_px)));
    double sum = 0.0;
    std::size_t count = 0;
    for (int r = ir_lo; r <= ir_hi; ++r) {
        for (int c = ic_lo; c <= ic_hi; ++c) {
            const double dx = (c + 0.5) - cop_x_px;
            const double dy = (r + 0.5) - cop_y_px;
            if (dx * dx + dy * dy <= radius_px * radius_px) {
                sum += fine.at(r, c);
                ++count;
            }
        }
    }
    out.intensity = count > 0 ? sum / static_cast<double>(count) : fine.at(static_cast<int>(cop_y_px), static_cast<int>(cop_x_px));
    return out;
}

PatchFeatures process_frame(const RawFrame& frame, const std::vector<int>& baseline,
                            const SensorGeometry& geometry, const FrameParams& params) {
    const Image norm = normalize(frame, baseline, geometry);
    const Image fine = upsample_bicubic(norm, params.upsample_factor);
    const auto contours = segment_patch(fine, params.patch_threshold, params.min_component_area);
    if (contours.empty()) return {};
    const auto hull = merge_hull(contours);
    if (!hull) return {};
    return patch_features(fine, *hull, geometry, params.upsample_factor, params.binary_moments);
}

} // namespace incontact
