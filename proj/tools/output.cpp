#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace cli {

namespace {

constexpr double kW = 720, kH = 480;    // canvas
constexpr double kL = 70, kR = 20, kT = 40, kB = 50; // margins

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ManifestError("cannot open output file '" + path + "'");
    return out;
}

std::string fmtg(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axes {
    double x0, x1, y0, y1;
    double px(double x) const {
        double t = x1 == x0 ? 0.5 : (x - x0) / (x1 - x0);
        return kL + t * (kW - kL - kR);
    }
    double py(double y) const {
        double t = y1 == y0 ? 0.5 : (y - y0) / (y1 - y0);
        return kH - kB - t * (kH - kB - kT);
    }
};

void svg_open(std::ofstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
        << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

void svg_frame(std::ofstream& out, const Axes& a) {
    out << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR
        << "\" height=\"" << kH - kT - kB
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    auto label = [&](double x, double y, const std::string& s, const char* anchor) {
        out << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"" << anchor
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" << s
            << "</text>\n";
    };
    label(kL, kH - kB + 16, fmtg(a.x0), "middle");
    label(kW - kR, kH - kB + 16, fmtg(a.x1), "middle");
    label(kL - 6, kH - kB + 4, fmtg(a.y0), "end");
    label(kL - 6, kT + 4, fmtg(a.y1), "end");
}

Axes fit_axes(const std::vector<Series>& series) {
    Axes a{0, 1, 0, 1};
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) { a = {x, x, y, y}; first = false; continue; }
            a.x0 = std::min(a.x0, x); a.x1 = std::max(a.x1, x);
            a.y0 = std::min(a.y0, y); a.y1 = std::max(a.y1, y);
        }
    if (a.y0 == a.y1) { a.y0 -= 1; a.y1 += 1; }
    if (a.x0 == a.x1) { a.x0 -= 1; a.x1 += 1; }
    double pad = 0.04 * (a.y1 - a.y0);
    a.y0 -= pad; a.y1 += pad;
    return a;
}

void svg_legend(std::ofstream& out, const std::vector<Series>& series) {
    double y = kT + 14;
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        out << "<rect x=\"" << kW - kR - 150 << "\" y=\"" << y - 9
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n"
            << "<text x=\"" << kW - kR - 136 << "\" y=\"" << y
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
            << "</text>\n";
        y += 16;
    }
}

// Diverging blue-white-red map for t in [0, 1].
std::string diverging(double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto mix = [](double a, double b, double u) {
        return static_cast<int>(std::lround(a + (b - a) * u));
    };
    int r, g, b;
    if (t < 0.5) {
        double u = t / 0.5;
        r = mix(0x21, 0xf7, u); g = mix(0x66, 0xf7, u); b = mix(0xac, 0xf7, u);
    } else {
        double u = (t - 0.5) / 0.5;
        r = mix(0xf7, 0xb2, u); g = mix(0xf7, 0x18, u); b = mix(0xf7, 0x2b, u);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

void svg_cells(std::ofstream& out, int n1, int n2,
               const std::function<std::string(int, int)>& color) {
    double cw = (kW - kL - kR) / n1, ch = (kH - kT - kB) / n2;
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            std::string c = color(i, j);
            if (c.empty()) continue;
            // j grows upward in data space, downward in SVG space
            double x = kL + i * cw, y = kH - kB - (j + 1) * ch;
            out << "<rect x=\"" << fmtg(x) << "\" y=\"" << fmtg(y) << "\" width=\""
                << fmtg(cw + 0.5) << "\" height=\"" << fmtg(ch + 0.5) << "\" fill=\""
                << c << "\"/>\n";
        }
}

} // namespace

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ResultTable::add(std::vector<std::string> row) {
    rows.push_back(std::move(row));
}

void write_csv(const std::string& path, const ResultTable& table,
               const Manifest& manifest) {
    auto out = open_out(path);
    const std::string prov = manifest.provenance_line();
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(prov)));
    out << "# qwalk " << kToolVersion << "\n"
        << "# manifest " << prov << "\n"
        << "# manifest_hash " << hash << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << (c ? "," : "") << table.columns[c];
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << row[c];
        out << "\n";
    }
}

void write_json(const std::string& path, const ResultTable& table,
                const Manifest& manifest) {
    auto out = open_out(path);
    const std::string prov = manifest.provenance_line();
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(prov)));
    nlohmann::ordered_json j;
    j["tool"] = "qwalk";
    j["version"] = kToolVersion;
    j["manifest"] = manifest.to_json();
    j["manifest_hash"] = hash;
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    out << j.dump(2) << "\n";
}

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<Series>& series) {
    auto out = open_out(path);
    Axes a = fit_axes(series);
    svg_open(out, title);
    svg_frame(out, a);
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points)
            out << fmtg(a.px(x)) << "," << fmtg(a.py(y)) << " ";
        out << "\"/>\n";
    }
    svg_legend(out, series);
    out << "</svg>\n";
}

void write_svg_scatter(const std::string& path, const std::string& title,
                       const std::vector<Series>& series) {
    auto out = open_out(path);
    Axes a = fit_axes(series);
    svg_open(out, title);
    svg_frame(out, a);
    for (const auto& s : series)
        for (auto [x, y] : s.points)
            out << "<circle cx=\"" << fmtg(a.px(x)) << "\" cy=\"" << fmtg(a.py(y))
                << "\" r=\"2.4\" fill=\"" << s.color << "\"/>\n";
    svg_legend(out, series);
    out << "</svg>\n";
}

void write_svg_heatmap(const std::string& path, const std::string& title,
                       int n1, int n2, double x0, double x1, double y0,
                       double y1,
                       const std::vector<std::optional<double>>& values) {
    auto out = open_out(path);
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& v : values)
        if (v) {
            if (first) { lo = hi = *v; first = false; }
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
    if (hi == lo) hi = lo + 1;
    svg_open(out, title);
    svg_cells(out, n1, n2, [&](int i, int j) -> std::string {
        const auto& v = values[static_cast<std::size_t>(j) * n1 + i];
        if (!v) return "#000000";
        return diverging((*v - lo) / (hi - lo));
    });
    svg_frame(out, {x0, x1, y0, y1});
    out << "<text x=\"" << kL << "\" y=\"" << kT - 6
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">range ["
        << fmtg(lo) << ", " << fmtg(hi) << "], black = gap closing</text>\n</svg>\n";
}

void write_svg_boundaries(const std::string& path, const std::string& title,
                          int n1, int n2, double x0, double x1, double y0,
                          double y1, const std::vector<bool>& black,
                          const std::vector<bool>& red) {
    auto out = open_out(path);
    svg_open(out, title);
    svg_cells(out, n1, n2, [&](int i, int j) -> std::string {
        std::size_t idx = static_cast<std::size_t>(j) * n1 + i;
        if (black[idx]) return "#000000";
        if (red[idx]) return "#d32f2f";
        return "";
    });
    svg_frame(out, {x0, x1, y0, y1});
    out << "<text x=\"" << kL << "\" y=\"" << kT - 6
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">"
           "black = topological transition, red = pseudo-unitarity boundary"
        << "</text>\n</svg>\n";
}

} // namespace cli
