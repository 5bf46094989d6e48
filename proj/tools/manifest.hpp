#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwalk/core.hpp"

namespace cli {

inline constexpr const char* kToolVersion = "1.2.0";

// Manifest problems exit with status 2; numerical failures with 3.
struct ManifestError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// "0.5pi" / "-0.25pi" / "1.5708"; fractions like "2/3" also work for p-lists.
double parse_angle(const std::string& text);
double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// Coin-parameter scan line. Three shapes:
//   "th1=th2+0.5pi,n=13"            theta1 follows theta2 with an offset
//   "th1=0pi,n=41"                  theta1 fixed, theta2 swept
//   "th2=0.125pi,n=13,range=-1pi:1pi"  theta2 fixed, theta1 swept
// The swept angle covers [range_lo, range_hi] inclusive (default [-pi, pi]).
struct LineSpec {
    enum class Kind { diagonal, fixed_theta1, fixed_theta2 };
    Kind kind = Kind::diagonal;
    double value = qwalk::kPi / 2; // diagonal offset or the fixed angle
    int n = 13;
    double range_lo = -qwalk::kPi;
    double range_hi = qwalk::kPi;
    std::string text;

    std::vector<qwalk::CoinParams> points() const;
    // The swept coordinate of point i (what a plot's x-axis shows).
    double swept(int i) const;
};

LineSpec parse_line_spec(const std::string& text);

std::uint64_t fnv1a64(const std::string& text);

struct Manifest {
    std::string command;
    std::string family = "three";  // three | four | wfour
    std::string frame = "prime";   // prime | dprime | both
    std::vector<double> p_values;  // per-command default
    int steps = 0;                 // 0 = per-command default
    std::string line_text;         // empty = per-command default
    int grid_n1 = 0, grid_n2 = 0;  // 0 = per-command default
    std::uint64_t seed = 0;
    std::string out;               // empty = "<command>.<ext>"
    std::string format = "csv";    // csv | json | svg (svg also writes csv)

    // Lattice / edge-dynamics extras.
    int sites = 0;
    std::vector<double> left, right; // coin angle pairs, radians

    // Disorder extras.
    std::string kind = "static";         // static | dynamic
    double amplitude = qwalk::kPi / 20;
    int ensembles = 10;
    std::string mode = "displacement";   // displacement | edge
    bool independent_draws = false;

    std::vector<int> t_values; // moments sampling times

    // Fills every per-command default above, then validates; throws
    // ManifestError on anything a run cannot proceed with.
    void finalize();

    nlohmann::ordered_json to_json() const;
    static Manifest from_json(const nlohmann::ordered_json& j);
    static Manifest load(const std::string& path);

    // Single-line serialization embedded in every output, plus its hash.
    std::string provenance_line() const;

    qwalk::Family family_enum() const;
    std::vector<qwalk::Frame> frames() const;
    LineSpec line() const;
    qwalk::CoinParams left_coin() const;
    qwalk::CoinParams right_coin() const;
    std::string out_path(qwalk::Frame frame, const std::string& suffix,
                         const std::string& ext) const;
    // Frame-agnostic variant for commands whose output covers both frames.
    std::string out_file(const std::string& suffix, const std::string& ext) const;
};

} // namespace cli
