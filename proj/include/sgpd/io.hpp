#pragma once

// Serialization and the small data pipeline: domain/barcode JSON, diagram and
// trace CSV, time-delay embedding, and smoothed histogram vectorization of
// signed diagram points. Floats are written with 17 significant digits so
// write∘read is the identity bitwise; parsing goes through nlohmann/json,
// emission through a small writer that guarantees the format.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "gpd.hpp"
#include "optimize.hpp"

#include "json.hpp"

namespace sgpd {

[[nodiscard]] inline std::string fmt_double(double v) {
    if (!std::isfinite(v)) throw internal_error("refusing to serialize a non-finite number");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

[[nodiscard]] inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

[[nodiscard]] inline double get_finite(const nlohmann::json& j, const std::string& ctx) {
    if (!j.is_number()) throw format_error(ctx + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw format_error(ctx + ": number is not finite");
    return v;
}

[[nodiscard]] inline std::vector<Point2> get_points(const nlohmann::json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty()) throw format_error(ctx + ": expected a nonempty array of [x, y] pairs");
    std::vector<Point2> pts;
    pts.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const nlohmann::json& p = j[i];
        if (!p.is_array() || p.size() != 2) throw format_error(ctx + ": expected [x, y] pairs");
        pts.push_back(Point2{get_finite(p[0], ctx), get_finite(p[1], ctx)});
    }
    return pts;
}

inline void append_points(std::string& out, const std::vector<Point2>& pts) {
    out += '[';
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ',';
        out += '[';
        out += fmt_double(pts[i].x);
        out += ',';
        out += fmt_double(pts[i].y);
        out += ']';
    }
    out += ']';
}

[[nodiscard]] inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw format_error(what + ": " + e.what());
    }
}

} // namespace detail

[[nodiscard]] inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot open file for writing: " + path.string());
    out << content;
    if (!out) throw format_error("failed to write file: " + path.string());
}

// ---- Domain JSON ----------------------------------------------------------
// {"name": str, "intervals": [entry, ...]} where an entry is either the
// embedded form {"x","y","a","b","c","d"} or the general form
// {"mins": [[x,y],...], "maxs": [[x,y],...]}. Embedded entries round-trip
// bitwise; a file mixing both forms is read but rewritten in general form.

[[nodiscard]] inline std::string domain_to_json(const Domain& dom) {
    if (dom.size() == 0) throw invalid_input("domain must contain at least one interval");
    std::string out = "{\"name\":\"" + detail::json_escape(dom.name) + "\",\"intervals\":[";
    for (std::size_t i = 0; i < dom.size(); ++i) {
        if (i) out += ',';
        if (dom.has_vecs()) {
            const IntervalVec6& v = dom.vecs[i];
            out += "{\"x\":" + fmt_double(v.x) + ",\"y\":" + fmt_double(v.y) + ",\"a\":" + fmt_double(v.a) +
                   ",\"b\":" + fmt_double(v.b) + ",\"c\":" + fmt_double(v.c) + ",\"d\":" + fmt_double(v.d) + "}";
        } else {
            out += "{\"mins\":";
            detail::append_points(out, dom.intervals[i].mins);
            out += ",\"maxs\":";
            detail::append_points(out, dom.intervals[i].maxs);
            out += "}";
        }
    }
    out += "]}\n";
    return out;
}

[[nodiscard]] inline Domain parse_domain_json(const std::string& text) {
    const nlohmann::json j = detail::parse_json(text, "domain");
    if (!j.is_object() || !j.contains("name") || !j.contains("intervals"))
        throw format_error("domain: expected an object with \"name\" and \"intervals\"");
    if (!j["name"].is_string()) throw format_error("domain: \"name\" must be a string");
    const nlohmann::json& arr = j["intervals"];
    if (!arr.is_array() || arr.empty()) throw format_error("domain: \"intervals\" must be a nonempty array");

    Domain dom;
    dom.name = j["name"].get<std::string>();
    bool all_embedded = true;
    std::vector<IntervalVec6> vecs;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const nlohmann::json& e = arr[i];
        const std::string ctx = "domain intervals[" + std::to_string(i) + "]";
        if (!e.is_object()) throw format_error(ctx + ": expected an object");
        try {
            if (e.contains("x")) {
                IntervalVec6 v;
                for (const char* f : {"x", "y", "a", "b", "c", "d"})
                    if (!e.contains(f)) throw format_error(ctx + ": missing field \"" + f + "\"");
                v.x = detail::get_finite(e["x"], ctx);
                v.y = detail::get_finite(e["y"], ctx);
                v.a = detail::get_finite(e["a"], ctx);
                v.b = detail::get_finite(e["b"], ctx);
                v.c = detail::get_finite(e["c"], ctx);
                v.d = detail::get_finite(e["d"], ctx);
                dom.intervals.push_back(decode_vec6(v));
                vecs.push_back(v);
            } else if (e.contains("mins")) {
                all_embedded = false;
                dom.intervals.push_back(make_interval(detail::get_points(e["mins"], ctx + ".mins"),
                                                      detail::get_points(e["maxs"], ctx + ".maxs")));
            } else {
                throw format_error(ctx + ": expected embedded fields or \"mins\"/\"maxs\"");
            }
        } catch (const invalid_input& err) {
            throw format_error(ctx + ": " + err.what());
        }
    }
    if (all_embedded) dom.vecs = std::move(vecs);
    return dom;
}

[[nodiscard]] inline Domain read_domain_json(const std::filesystem::path& path) {
    try {
        return parse_domain_json(read_text_file(path));
    } catch (const format_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

inline void write_domain_json(const std::filesystem::path& path, const Domain& dom) {
    write_text_file(path, domain_to_json(dom));
}

// ---- Barcode JSON ---------------------------------------------------------
// {"bars": [{"mins": [[x,y],...], "maxs": [[x,y],...], "mult": k}, ...]}
// with integer multiplicities >= 1; an empty bar list is the zero module.

[[nodiscard]] inline std::string barcode_to_json(const Barcode& bc) {
    std::string out = "{\"bars\":[";
    for (std::size_t i = 0; i < bc.size(); ++i) {
        if (i) out += ',';
        out += "{\"mins\":";
        detail::append_points(out, bc.bars[i].region.mins);
        out += ",\"maxs\":";
        detail::append_points(out, bc.bars[i].region.maxs);
        out += ",\"mult\":" + std::to_string(bc.bars[i].multiplicity) + "}";
    }
    out += "]}\n";
    return out;
}

[[nodiscard]] inline Barcode parse_barcode_json(const std::string& text) {
    const nlohmann::json j = detail::parse_json(text, "barcode");
    if (!j.is_object() || !j.contains("bars") || !j["bars"].is_array())
        throw format_error("barcode: expected an object with a \"bars\" array");
    Barcode bc;
    const nlohmann::json& arr = j["bars"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const nlohmann::json& e = arr[i];
        const std::string ctx = "barcode bars[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("mins") || !e.contains("maxs") || !e.contains("mult"))
            throw format_error(ctx + ": expected \"mins\", \"maxs\" and \"mult\"");
        if (!e["mult"].is_number_integer()) throw format_error(ctx + ": \"mult\" must be an integer");
        Bar b;
        b.multiplicity = e["mult"].get<long long>();
        if (b.multiplicity < 1) throw format_error(ctx + ": \"mult\" must be at least 1");
        try {
            b.region = make_interval(detail::get_points(e["mins"], ctx + ".mins"),
                                     detail::get_points(e["maxs"], ctx + ".maxs"));
        } catch (const invalid_input& err) {
            throw format_error(ctx + ": " + err.what());
        }
        bc.bars.push_back(std::move(b));
    }
    return bc;
}

[[nodiscard]] inline Barcode read_barcode_json(const std::filesystem::path& path) {
    try {
        return parse_barcode_json(read_text_file(path));
    } catch (const format_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

inline void write_barcode_json(const std::filesystem::path& path, const Barcode& bc) {
    write_text_file(path, barcode_to_json(bc));
}

// ---- Diagram CSV ----------------------------------------------------------
// Header x,y,a,b,c,d,mult; multiplicities are signed and never zero.

[[nodiscard]] inline std::string gpd_points_to_csv(const std::vector<GPDPoint>& pts) {
    std::string out = "x,y,a,b,c,d,mult\n";
    for (const GPDPoint& p : pts) {
        if (p.multiplicity == 0) throw invalid_input("diagram points must have nonzero multiplicity");
        out += fmt_double(p.v.x) + ',' + fmt_double(p.v.y) + ',' + fmt_double(p.v.a) + ',' + fmt_double(p.v.b) +
               ',' + fmt_double(p.v.c) + ',' + fmt_double(p.v.d) + ',' + std::to_string(p.multiplicity) + '\n';
    }
    return out;
}

namespace detail {

[[nodiscard]] inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

[[nodiscard]] inline double parse_double_field(const std::string& field, const std::string& ctx) {
    if (field.empty()) throw format_error(ctx + ": empty numeric field");
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) throw format_error(ctx + ": bad number '" + field + "'");
    if (!std::isfinite(v)) throw format_error(ctx + ": number is not finite");
    return v;
}

[[nodiscard]] inline long long parse_int_field(const std::string& field, const std::string& ctx) {
    if (field.empty()) throw format_error(ctx + ": empty integer field");
    char* end = nullptr;
    const long long v = std::strtoll(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size()) throw format_error(ctx + ": bad integer '" + field + "'");
    return v;
}

[[nodiscard]] inline std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(std::move(line));
        start = nl + 1;
    }
    return lines;
}

} // namespace detail

[[nodiscard]] inline std::vector<GPDPoint> parse_gpd_csv(const std::string& text) {
    const std::vector<std::string> lines = detail::csv_lines(text);
    if (lines.empty() || lines.front() != "x,y,a,b,c,d,mult")
        throw format_error("diagram: expected header x,y,a,b,c,d,mult");
    std::vector<GPDPoint> pts;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string ctx = "diagram row " + std::to_string(i);
        const std::vector<std::string> f = detail::split_csv_line(lines[i]);
        if (f.size() != 7) throw format_error(ctx + ": expected 7 fields");
        GPDPoint p;
        p.v.x = detail::parse_double_field(f[0], ctx);
        p.v.y = detail::parse_double_field(f[1], ctx);
        p.v.a = detail::parse_double_field(f[2], ctx);
        p.v.b = detail::parse_double_field(f[3], ctx);
        p.v.c = detail::parse_double_field(f[4], ctx);
        p.v.d = detail::parse_double_field(f[5], ctx);
        p.multiplicity = detail::parse_int_field(f[6], ctx);
        if (p.multiplicity == 0) throw format_error(ctx + ": zero multiplicity");
        if (!is_decodable_vec6(p.v)) throw format_error(ctx + ": coordinates are not a decodable interval");
        pts.push_back(p);
    }
    return pts;
}

[[nodiscard]] inline std::vector<GPDPoint> read_gpd_csv(const std::filesystem::path& path) {
    try {
        return parse_gpd_csv(read_text_file(path));
    } catch (const format_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

inline void write_gpd_csv(const std::filesystem::path& path, const std::vector<GPDPoint>& pts) {
    write_text_file(path, gpd_points_to_csv(pts));
}

// ---- Optimization trace CSV ------------------------------------------------

[[nodiscard]] inline std::string trace_to_csv(const LossTrace& trace) {
    std::string out = "epoch,loss,seconds\n";
    for (std::size_t i = 0; i < trace.loss.size(); ++i)
        out += std::to_string(i) + ',' + fmt_double(trace.loss[i]) + ',' + fmt_double(trace.seconds[i]) + '\n';
    return out;
}

[[nodiscard]] inline LossTrace parse_trace_csv(const std::string& text) {
    const std::vector<std::string> lines = detail::csv_lines(text);
    if (lines.empty() || lines.front() != "epoch,loss,seconds") throw format_error("trace: expected header epoch,loss,seconds");
    LossTrace trace;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string ctx = "trace row " + std::to_string(i);
        const std::vector<std::string> f = detail::split_csv_line(lines[i]);
        if (f.size() != 3) throw format_error(ctx + ": expected 3 fields");
        if (detail::parse_int_field(f[0], ctx) != static_cast<long long>(i - 1))
            throw format_error(ctx + ": epochs must count up from 0");
        trace.loss.push_back(detail::parse_double_field(f[1], ctx));
        trace.seconds.push_back(detail::parse_double_field(f[2], ctx));
    }
    return trace;
}

inline void write_trace_csv(const std::filesystem::path& path, const LossTrace& trace) {
    write_text_file(path, trace_to_csv(trace));
}

// ---- Epsilon matrix CSV ----------------------------------------------------

[[nodiscard]] inline std::string epsilon_matrix_to_csv(const EpsilonMatrix& em) {
    std::string out = "r,s,eps\n";
    for (std::size_t r = 0; r < em.rows; ++r)
        for (std::size_t s = 0; s < em.cols; ++s)
            out += std::to_string(r) + ',' + std::to_string(s) + ',' + fmt_double(em.at(r, s)) + '\n';
    return out;
}

inline void write_epsilon_matrix_csv(const std::filesystem::path& path, const EpsilonMatrix& em) {
    write_text_file(path, epsilon_matrix_to_csv(em));
}

// ---- Time series and embedding ----------------------------------------------

struct TimeSeries {
    std::string label;
    std::vector<double> samples;
};

// One series per line: label, then the samples; lines may differ in length.
[[nodiscard]] inline std::vector<TimeSeries> parse_timeseries_csv(const std::string& text) {
    std::vector<TimeSeries> series;
    for (const std::string& line : detail::csv_lines(text)) {
        const std::vector<std::string> f = detail::split_csv_line(line);
        if (f.size() < 2) throw format_error("time series: each line needs a label and at least one sample");
        TimeSeries ts;
        ts.label = f[0];
        const std::string ctx = "time series '" + ts.label + "'";
        for (std::size_t i = 1; i < f.size(); ++i) ts.samples.push_back(detail::parse_double_field(f[i], ctx));
        series.push_back(std::move(ts));
    }
    if (series.empty()) throw format_error("time series: file is empty");
    return series;
}

[[nodiscard]] inline std::vector<TimeSeries> read_timeseries_csv(const std::filesystem::path& path) {
    try {
        return parse_timeseries_csv(read_text_file(path));
    } catch (const format_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

struct PointCloud {
    std::size_t dim = 0;
    std::vector<double> coords;  // point-major

    [[nodiscard]] std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
};

// Sliding-window delay embedding: point k collects dim consecutive samples
// starting at k, giving n - dim + 1 points.
[[nodiscard]] inline PointCloud time_delay_embed(const std::vector<double>& samples, std::size_t dim = 3) {
    if (dim == 0) throw invalid_input("embedding dimension must be positive");
    if (samples.size() < dim) throw invalid_input("time series is shorter than the embedding dimension");
    PointCloud pc;
    pc.dim = dim;
    const std::size_t count = samples.size() - dim + 1;
    pc.coords.reserve(count * dim);
    for (std::size_t k = 0; k < count; ++k)
        for (std::size_t j = 0; j < dim; ++j) pc.coords.push_back(samples[k + j]);
    return pc;
}

[[nodiscard]] inline std::string point_cloud_to_csv(const PointCloud& pc) {
    if (pc.dim == 0) throw invalid_input("point cloud has no dimension");
    std::string out;
    for (std::size_t j = 0; j < pc.dim; ++j) {
        if (j) out += ',';
        out += "x" + std::to_string(j);
    }
    out += '\n';
    for (std::size_t k = 0; k < pc.size(); ++k) {
        for (std::size_t j = 0; j < pc.dim; ++j) {
            if (j) out += ',';
            out += fmt_double(pc.coords[k * pc.dim + j]);
        }
        out += '\n';
    }
    return out;
}

inline void write_point_cloud_csv(const std::filesystem::path& path, const PointCloud& pc) {
    write_text_file(path, point_cloud_to_csv(pc));
}

// ---- Histogram vectorization ------------------------------------------------

struct HistogramGrid {
    std::array<int, 6> bins{};
    std::array<double, 6> lo{};
    std::array<double, 6> hi{};
};

struct Histogram {
    HistogramGrid grid;
    std::vector<double> weight;  // row-major, axis 0 slowest
};

// Per-axis data ranges; a degenerate or empty axis widens to a unit box
// around the data so binning stays well defined.
[[nodiscard]] inline HistogramGrid auto_grid(const std::vector<GPDPoint>& pts, const std::array<int, 6>& bins) {
    HistogramGrid grid;
    grid.bins = bins;
    for (int axis = 0; axis < 6; ++axis) {
        grid.lo[axis] = std::numeric_limits<double>::infinity();
        grid.hi[axis] = -std::numeric_limits<double>::infinity();
    }
    for (const GPDPoint& p : pts) {
        const std::array<double, 6> c{p.v.x, p.v.y, p.v.a, p.v.b, p.v.c, p.v.d};
        for (int axis = 0; axis < 6; ++axis) {
            grid.lo[axis] = std::min(grid.lo[axis], c[axis]);
            grid.hi[axis] = std::max(grid.hi[axis], c[axis]);
        }
    }
    for (int axis = 0; axis < 6; ++axis) {
        if (!(grid.lo[axis] < grid.hi[axis])) {
            const double center = pts.empty() ? 0.5 : grid.lo[axis];
            grid.lo[axis] = center - 0.5;
            grid.hi[axis] = center + 0.5;
        }
    }
    return grid;
}

// Signed accumulation of diagram points into the grid (out-of-range clamps to
// the edge bins) followed by separable Gaussian smoothing. sigma is measured
// in bins, the kernel is truncated at ceil(4*sigma), normalized to total mass
// one, and convolved with zero padding; sigma = 0 is the identity.
[[nodiscard]] inline Histogram histogram_vectorize(const std::vector<GPDPoint>& pts, const HistogramGrid& grid,
                                                   double sigma) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw invalid_input("sigma must be finite and nonnegative");
    std::size_t cells = 1;
    for (int axis = 0; axis < 6; ++axis) {
        if (grid.bins[axis] < 1) throw invalid_input("histogram needs at least one bin per axis");
        if (!(grid.lo[axis] < grid.hi[axis])) throw invalid_input("histogram axis range is degenerate");
        cells *= static_cast<std::size_t>(grid.bins[axis]);
        if (cells > std::size_t{1} << 24) throw invalid_input("histogram grid is too large");
    }

    Histogram hist;
    hist.grid = grid;
    hist.weight.assign(cells, 0.0);
    for (const GPDPoint& p : pts) {
        const std::array<double, 6> c{p.v.x, p.v.y, p.v.a, p.v.b, p.v.c, p.v.d};
        std::size_t flat = 0;
        for (int axis = 0; axis < 6; ++axis) {
            const double t =
                (c[axis] - grid.lo[axis]) / (grid.hi[axis] - grid.lo[axis]) * static_cast<double>(grid.bins[axis]);
            const int idx = std::clamp(static_cast<int>(std::floor(t)), 0, grid.bins[axis] - 1);
            flat = flat * static_cast<std::size_t>(grid.bins[axis]) + static_cast<std::size_t>(idx);
        }
        hist.weight[flat] += static_cast<double>(p.multiplicity);
    }
    if (sigma == 0.0) return hist;

    const int radius = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double mass = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[static_cast<std::size_t>(k + radius)] = std::exp(-0.5 * (k / sigma) * (k / sigma));
        mass += kernel[static_cast<std::size_t>(k + radius)];
    }
    for (double& w : kernel) w /= mass;

    std::vector<double> next(cells);
    std::size_t stride = cells;
    for (int axis = 0; axis < 6; ++axis) {
        const std::size_t b = static_cast<std::size_t>(grid.bins[axis]);
        stride /= b;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t flat = 0; flat < cells; ++flat) {
            const double w = hist.weight[flat];
            if (w == 0.0) continue;
            const std::size_t pos = (flat / stride) % b;
            const std::size_t base = flat - pos * stride;  // this axis zeroed out
            for (int k = -radius; k <= radius; ++k) {
                const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(pos) + k;
                if (j < 0 || j >= static_cast<std::ptrdiff_t>(b)) continue;
                next[base + static_cast<std::size_t>(j) * stride] += w * kernel[static_cast<std::size_t>(k + radius)];
            }
        }
        hist.weight.swap(next);
    }
    return hist;
}

[[nodiscard]] inline std::string histogram_to_csv(const Histogram& hist) {
    std::string out = "i0,i1,i2,i3,i4,i5,weight\n";
    std::array<int, 6> idx{};
    for (const double w : hist.weight) {
        for (int axis = 0; axis < 6; ++axis) {
            out += std::to_string(idx[axis]);
            out += ',';
        }
        out += fmt_double(w);
        out += '\n';
        for (int axis = 5; axis >= 0; --axis) {
            if (++idx[axis] < hist.grid.bins[axis]) break;
            idx[axis] = 0;
        }
    }
    return out;
}

inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist) {
    write_text_file(path, histogram_to_csv(hist));
}

// ---- Optimizer config JSON ---------------------------------------------------

[[nodiscard]] inline OptimConfig parse_optim_config_json(const std::string& text) {
    const nlohmann::json j = detail::parse_json(text, "config");
    if (!j.is_object()) throw format_error("config: expected an object");
    OptimConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "m") {
            if (!value.is_number_integer() || value.get<long long>() < 0) throw format_error("config: bad m");
            cfg.m = value.get<std::size_t>();
        } else if (key == "epochs") {
            if (!value.is_number_integer()) throw format_error("config: bad epochs");
            cfg.epochs = value.get<int>();
        } else if (key == "lr") {
            cfg.lr = detail::get_finite(value, "config.lr");
        } else if (key == "momentum") {
            cfg.momentum = detail::get_finite(value, "config.momentum");
        } else if (key == "lr_decay") {
            cfg.lr_decay = detail::get_finite(value, "config.lr_decay");
        } else if (key == "seed") {
            if (!value.is_number_integer() || value.get<long long>() < 0) throw format_error("config: bad seed");
            cfg.seed = value.get<std::uint64_t>();
        } else {
            throw format_error("config: unknown key \"" + key + "\"");
        }
    }
    return cfg;
}

[[nodiscard]] inline OptimConfig read_optim_config_json(const std::filesystem::path& path) {
    try {
        return parse_optim_config_json(read_text_file(path));
    } catch (const format_error& e) {
        throw format_error(path.string() + ": " + e.what());
    }
}

// ---- Unit-box normalization ---------------------------------------------------

// Affine rescaling of the two filtration axes onto [0, 1], computed from the
// joint bounding box of everything ingested in one run; a degenerate axis is
// translated to zero instead of scaled.
struct UnitNormalizer {
    bool any = false;
    Box2 box{{0.0, 0.0}, {0.0, 0.0}};

    void include(const Box2& b) {
        box = any ? join(box, b) : b;
        any = true;
    }
    void include(const Domain& dom) {
        for (const PQInterval& iv : dom.intervals) include(bounding_box(iv));
    }
    void include(const Barcode& bc) {
        for (const Bar& b : bc.bars) include(bounding_box(b.region));
    }

    [[nodiscard]] double scale_x() const { return box.hi.x > box.lo.x ? 1.0 / (box.hi.x - box.lo.x) : 1.0; }
    [[nodiscard]] double scale_y() const { return box.hi.y > box.lo.y ? 1.0 / (box.hi.y - box.lo.y) : 1.0; }

    [[nodiscard]] Point2 apply(Point2 p) const {
        return Point2{(p.x - box.lo.x) * scale_x(), (p.y - box.lo.y) * scale_y()};
    }
    [[nodiscard]] PQInterval apply(const PQInterval& iv) const {
        PQInterval out = iv;
        for (Point2& m : out.mins) m = apply(m);
        for (Point2& M : out.maxs) M = apply(M);
        return out;
    }
    [[nodiscard]] Domain apply(const Domain& dom) const {
        if (dom.has_vecs()) {
            std::vector<IntervalVec6> vecs;
            vecs.reserve(dom.size());
            for (const IntervalVec6& v : dom.vecs)
                vecs.push_back(IntervalVec6{(v.x - box.lo.x) * scale_x(), (v.y - box.lo.y) * scale_y(),
                                            v.a * scale_y(), v.b * scale_x(), v.c * scale_y(), v.d * scale_x()});
            return make_domain_from_vecs(dom.name, std::move(vecs));
        }
        Domain out;
        out.name = dom.name;
        for (const PQInterval& iv : dom.intervals) out.intervals.push_back(apply(iv));
        return out;
    }
    [[nodiscard]] Barcode apply(const Barcode& bc) const {
        Barcode out = bc;
        for (Bar& b : out.bars) b.region = apply(b.region);
        return out;
    }
};

} // namespace sgpd
