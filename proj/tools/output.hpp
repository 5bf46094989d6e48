#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "manifest.hpp"

namespace cli {

// Shortest exact decimal that round-trips a double (17 significant digits).
std::string fmt17(double v);

// Every command reduces to one or more flat tables. CSV is the contract
// (provenance header, fixed column order, 17-digit cells, byte-identical
// reruns); JSON mirrors the same cells; SVG is a convenience rendering.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
};

void write_csv(const std::string& path, const ResultTable& table,
               const Manifest& manifest);
void write_json(const std::string& path, const ResultTable& table,
                const Manifest& manifest);

// --- Minimal SVG plotting -------------------------------------------------

struct Series {
    std::string label;
    std::string color; // e.g. "#2166ac"
    std::vector<std::pair<double, double>> points;
};

void write_svg_lines(const std::string& path, const std::string& title,
                     const std::vector<Series>& series);

void write_svg_scatter(const std::string& path, const std::string& title,
                       const std::vector<Series>& series);

// Row-major grid of n1 x n2 cells spanning [x0,x1] x [y0,y1]; cell (i,j)
// holds value index j*n1 + i. Missing cells are drawn black.
void write_svg_heatmap(const std::string& path, const std::string& title,
                       int n1, int n2, double x0, double x1, double y0,
                       double y1, const std::vector<std::optional<double>>& values);

// Boundary overlay: cells flagged in `black` (gap closings) are drawn black,
// cells flagged in `red` (pseudo-unitarity breaking edges) red.
void write_svg_boundaries(const std::string& path, const std::string& title,
                          int n1, int n2, double x0, double x1, double y0,
                          double y1, const std::vector<bool>& black,
                          const std::vector<bool>& red);

} // namespace cli
