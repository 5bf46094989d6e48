#include "manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double_strict(const std::string& text, const char* what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ManifestError(std::string("cannot parse ") + what + " '" + text + "'");
    }
    if (used != text.size())
        throw ManifestError(std::string("trailing characters in ") + what + " '" + text + "'");
    return v;
}

} // namespace

double parse_angle(const std::string& raw) {
    std::string text = trim(raw);
    if (text.empty()) throw ManifestError("empty angle");
    if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
        std::string head = trim(text.substr(0, text.size() - 2));
        if (head.empty() || head == "-") head += "1";
        return parse_double_strict(head, "angle") * qwalk::kPi;
    }
    return parse_double_strict(text, "angle");
}

double parse_number(const std::string& raw) {
    std::string text = trim(raw);
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        double num = parse_double_strict(text.substr(0, slash), "fraction");
        double den = parse_double_strict(text.substr(slash + 1), "fraction");
        if (den == 0) throw ManifestError("zero denominator in '" + text + "'");
        return num / den;
    }
    if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") return parse_angle(text);
    return parse_double_strict(text, "number");
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ','))
        if (!trim(part).empty()) out.push_back(parse_number(part));
    if (out.empty()) throw ManifestError("empty list '" + text + "'");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const auto& part : split(text, ',')) {
        if (trim(part).empty()) continue;
        double v = parse_double_strict(trim(part), "integer");
        if (v != std::floor(v))
            throw ManifestError("expected integer in list '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ManifestError("empty list '" + text + "'");
    return out;
}

LineSpec parse_line_spec(const std::string& text) {
    LineSpec spec;
    spec.text = text;
    bool have_lhs = false;
    for (const auto& raw : split(text, ',')) {
        std::string part = trim(raw);
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw ManifestError("bad line token '" + part + "'");
        std::string key = trim(part.substr(0, eq));
        std::string val = trim(part.substr(eq + 1));
        if (key == "n") {
            spec.n = static_cast<int>(parse_double_strict(val, "line count"));
        } else if (key == "range") {
            auto colon = val.find(':');
            if (colon == std::string::npos)
                throw ManifestError("range needs 'lo:hi' in '" + part + "'");
            spec.range_lo = parse_angle(val.substr(0, colon));
            spec.range_hi = parse_angle(val.substr(colon + 1));
        } else if (key == "th1" || key == "th2") {
            have_lhs = true;
            const std::string other = key == "th1" ? "th2" : "th1";
            if (val.rfind(other, 0) == 0) {
                // e.g. th1=th2+0.5pi — a diagonal through coin space
                std::string rest = trim(val.substr(other.size()));
                if (key != "th1")
                    throw ManifestError("diagonal lines are written as th1=th2+<angle>");
                if (rest.empty())
                    spec.value = 0;
                else if (rest[0] == '+')
                    spec.value = parse_angle(rest.substr(1));
                else if (rest[0] == '-')
                    spec.value = -parse_angle(rest.substr(1));
                else
                    throw ManifestError("bad diagonal offset '" + val + "'");
                spec.kind = LineSpec::Kind::diagonal;
            } else {
                spec.value = parse_angle(val);
                spec.kind = key == "th1" ? LineSpec::Kind::fixed_theta1
                                         : LineSpec::Kind::fixed_theta2;
            }
        } else {
            throw ManifestError("unknown line key '" + key + "'");
        }
    }
    if (!have_lhs) throw ManifestError("line spec needs th1=... or th2=...");
    if (spec.n < 1) throw ManifestError("line needs n >= 1");
    if (!(spec.range_hi >= spec.range_lo))
        throw ManifestError("line range is empty");
    return spec;
}

double LineSpec::swept(int i) const {
    if (n == 1) return range_lo;
    return range_lo + (range_hi - range_lo) * static_cast<double>(i) / (n - 1);
}

std::vector<qwalk::CoinParams> LineSpec::points() const {
    std::vector<qwalk::CoinParams> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = swept(i);
        switch (kind) {
        case Kind::diagonal:     pts.push_back({s + value, s}); break;
        case Kind::fixed_theta1: pts.push_back({value, s}); break;
        case Kind::fixed_theta2: pts.push_back({s, value}); break;
        }
    }
    return pts;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

qwalk::Family Manifest::family_enum() const {
    if (family == "three") return qwalk::Family::three_step;
    if (family == "four") return qwalk::Family::four_step;
    if (family == "wfour") return qwalk::Family::w_four_step;
    throw ManifestError("unknown family '" + family + "'");
}

std::vector<qwalk::Frame> Manifest::frames() const {
    if (frame == "prime") return {qwalk::Frame::prime};
    if (frame == "dprime") return {qwalk::Frame::double_prime};
    if (frame == "both") return {qwalk::Frame::prime, qwalk::Frame::double_prime};
    throw ManifestError("unknown frame '" + frame + "'");
}

LineSpec Manifest::line() const { return parse_line_spec(line_text); }

qwalk::CoinParams Manifest::left_coin() const {
    return {left.at(0), left.at(1)};
}

qwalk::CoinParams Manifest::right_coin() const {
    return {right.at(0), right.at(1)};
}

namespace {

std::string strip_extension(const std::string& path) {
    auto dot = path.find_last_of('.');
    auto slash = path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        return path.substr(0, dot);
    return path;
}

} // namespace

std::string Manifest::out_path(qwalk::Frame fr, const std::string& suffix,
                               const std::string& ext) const {
    std::string base = strip_extension(out);
    if (frame == "both")
        base += fr == qwalk::Frame::prime ? "_prime" : "_dprime";
    if (!suffix.empty()) base += "_" + suffix;
    return base + "." + ext;
}

std::string Manifest::out_file(const std::string& suffix,
                               const std::string& ext) const {
    std::string base = strip_extension(out);
    if (!suffix.empty()) base += "_" + suffix;
    return base + "." + ext;
}

void Manifest::finalize() {
    static const std::vector<std::string> kCommands = {
        "phase-diagram", "displacement", "moments",   "chiral",
        "spectrum",      "edge-dynamics", "disorder", "pseudo-unitarity"};
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        throw ManifestError("unknown command '" + command + "'");
    family_enum();
    frames();
    if (format != "csv" && format != "json" && format != "svg")
        throw ManifestError("unknown format '" + format + "'");
    if (kind != "static" && kind != "dynamic")
        throw ManifestError("unknown disorder kind '" + kind + "'");
    if (mode != "displacement" && mode != "edge")
        throw ManifestError("unknown disorder mode '" + mode + "'");

    const bool three = family == "three";
    const bool wfour = family == "wfour";

    // Per-command defaults. A W4 scan sweeps theta1 at fixed theta2 = pi/8,
    // where the word's eight-fold phases line up; the other families scan
    // the theta1 = theta2 + pi/2 diagonal.
    auto default_line = [&](int n) {
        return wfour ? "th2=0.125pi,n=" + std::to_string(n)
                     : "th1=th2+0.5pi,n=" + std::to_string(n);
    };
    if (command == "phase-diagram") {
        if (grid_n1 == 0) { grid_n1 = 201; grid_n2 = 201; }
        if (p_values.empty()) p_values = {0.0};
    } else if (command == "displacement") {
        if (steps == 0) steps = 30;
        if (p_values.empty()) p_values = {1.0};
        if (line_text.empty()) line_text = default_line(13);
    } else if (command == "moments") {
        if (steps == 0) steps = 50;
        if (p_values.empty()) p_values = {0.0};
        if (line_text.empty()) line_text = default_line(41);
        if (t_values.empty()) t_values = three ? std::vector<int>{4, 50}
                                               : std::vector<int>{3, 50};
    } else if (command == "chiral") {
        if (steps == 0) steps = 50;
        if (p_values.empty()) p_values = {9.0 / 25.0};
        if (line_text.empty()) line_text = default_line(13);
    } else if (command == "spectrum") {
        if (p_values.empty()) p_values = {9.0 / 25.0};
        if (sites == 0) sites = 401;
    } else if (command == "edge-dynamics") {
        if (steps == 0) steps = three ? 4 : 3;
        if (p_values.empty()) p_values = {9.0 / 25.0};
    } else if (command == "disorder") {
        if (steps == 0) steps = mode == "edge" ? (three ? 4 : 3) : 30;
        if (p_values.empty()) p_values = {mode == "edge" ? 9.0 / 25.0 : 1.0};
        if (line_text.empty()) line_text = default_line(13);
    } else if (command == "pseudo-unitarity") {
        if (grid_n1 == 0) { grid_n1 = 101; grid_n2 = 101; }
        if (p_values.empty()) p_values = {9.0 / 25.0, 2.0 / 3.0};
    }
    const bool uses_interface = command == "spectrum" ||
                                command == "edge-dynamics" ||
                                (command == "disorder" && mode == "edge");
    if (uses_interface && (left.empty() || right.empty())) {
        // Two-phase interface defaults, chosen so each family shows its
        // protected interface modes out of the box.
        if (command == "spectrum") {
            if (three)      { left = {qwalk::kPi / 4, -qwalk::kPi / 4};
                              right = {qwalk::kPi / 2, 0.0}; }
            else if (!wfour){ left = {qwalk::kPi / 16, 5 * qwalk::kPi / 16};
                              right = {-9 * qwalk::kPi / 16, -5 * qwalk::kPi / 16}; }
            else            { left = {qwalk::kPi / 2, qwalk::kPi / 8};
                              right = {-qwalk::kPi / 2, qwalk::kPi / 8}; }
        } else {
            if (three)      { left = {2 * qwalk::kPi / 3, qwalk::kPi / 4};
                              right = {-9 * qwalk::kPi / 10, 3 * qwalk::kPi / 5}; }
            else if (!wfour){ left = {qwalk::kPi / 16, 5 * qwalk::kPi / 16};
                              right = {-9 * qwalk::kPi / 16, -5 * qwalk::kPi / 16}; }
            else            { left = {qwalk::kPi / 2, qwalk::kPi / 8};
                              right = {-qwalk::kPi / 2, qwalk::kPi / 8}; }
        }
    }
    if (out.empty()) out = command + (format == "json" ? ".json" : ".csv");

    // Validation proper.
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw ManifestError("loss probability must lie in [0, 1]");
    if (command == "edge-dynamics" || (command == "disorder" && mode == "edge"))
        for (double p : p_values)
            if (p >= 1.0)
                throw ManifestError("corrected densities need p < 1");
    if (steps < 0) throw ManifestError("steps must be positive");
    if (grid_n1 < 0 || grid_n2 < 0) throw ManifestError("grid must be positive");
    if (grid_n1 > 0 && grid_n2 == 0) grid_n2 = grid_n1;
    if (!line_text.empty()) line(); // parse errors surface here
    if (sites != 0 && (sites < 3 || sites % 2 == 0))
        throw ManifestError("sites must be odd and >= 3");
    if (uses_interface && (left.size() != 2 || right.size() != 2))
        throw ManifestError("coin angle pairs need exactly two angles");
    if (!(amplitude >= 0)) throw ManifestError("amplitude must be >= 0");
    if (ensembles < 1) throw ManifestError("ensembles must be >= 1");
    if (kind == "dynamic" && independent_draws)
        throw ManifestError("independent draws require static disorder");
    if (command == "disorder" && mode == "edge" && kind == "dynamic")
        throw ManifestError("edge persistence is defined for static disorder");
    for (int t : t_values)
        if (t < 1) throw ManifestError("sampling times must be >= 1");
    if (command == "moments" && !t_values.empty())
        steps = std::max(steps, *std::max_element(t_values.begin(), t_values.end()));
}

nlohmann::ordered_json Manifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["family"] = family;
    j["frame"] = frame;
    j["p"] = p_values;
    j["steps"] = steps;
    if (!line_text.empty()) j["line"] = line_text;
    if (grid_n1 > 0) j["grid"] = std::to_string(grid_n1) + "x" + std::to_string(grid_n2);
    j["seed"] = seed;
    j["out"] = out;
    j["format"] = format;
    if (sites > 0) j["sites"] = sites;
    if (!left.empty()) j["left"] = left;
    if (!right.empty()) j["right"] = right;
    if (command == "disorder") {
        j["kind"] = kind;
        j["amplitude"] = amplitude;
        j["ensembles"] = ensembles;
        j["mode"] = mode;
        j["independent_draws"] = independent_draws;
    }
    if (!t_values.empty()) j["times"] = t_values;
    return j;
}

Manifest Manifest::from_json(const nlohmann::ordered_json& j) {
    Manifest m;
    try {
        m.command = j.value("command", std::string());
        m.family = j.value("family", std::string("three"));
        m.frame = j.value("frame", std::string("prime"));
        if (j.contains("p")) {
            if (j["p"].is_array())
                m.p_values = j["p"].get<std::vector<double>>();
            else if (j["p"].is_string())
                m.p_values = parse_number_list(j["p"].get<std::string>());
            else
                m.p_values = {j["p"].get<double>()};
        }
        m.steps = j.value("steps", 0);
        m.line_text = j.value("line", std::string());
        if (j.contains("grid")) {
            std::string g = j["grid"].get<std::string>();
            auto x = g.find('x');
            if (x == std::string::npos) throw ManifestError("grid needs '<n1>x<n2>'");
            m.grid_n1 = static_cast<int>(parse_double_strict(g.substr(0, x), "grid"));
            m.grid_n2 = static_cast<int>(parse_double_strict(g.substr(x + 1), "grid"));
        }
        m.seed = j.value("seed", std::uint64_t{0});
        m.out = j.value("out", std::string());
        m.format = j.value("format", std::string("csv"));
        m.sites = j.value("sites", 0);
        auto angles = [&](const char* key) -> std::vector<double> {
            if (!j.contains(key)) return {};
            if (j[key].is_string()) {
                std::vector<double> v;
                for (const auto& part : split(j[key].get<std::string>(), ','))
                    v.push_back(parse_angle(part));
                return v;
            }
            return j[key].get<std::vector<double>>();
        };
        m.left = angles("left");
        m.right = angles("right");
        m.kind = j.value("kind", std::string("static"));
        if (j.contains("amplitude")) {
            if (j["amplitude"].is_string())
                m.amplitude = parse_angle(j["amplitude"].get<std::string>());
            else
                m.amplitude = j["amplitude"].get<double>();
        }
        m.ensembles = j.value("ensembles", 10);
        m.mode = j.value("mode", std::string("displacement"));
        m.independent_draws = j.value("independent_draws", false);
        if (j.contains("times")) m.t_values = j["times"].get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(std::string("bad manifest field: ") + e.what());
    }
    return m;
}

Manifest Manifest::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest '" + path + "'");
    nlohmann::ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

std::string Manifest::provenance_line() const { return to_json().dump(); }

} // namespace cli
