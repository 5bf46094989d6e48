// Command-line front end: every subcommand evaluates one figure-style sweep
// and writes provenance-stamped tables (CSV/JSON) plus optional SVG renders.
#include <algorithm>
#include <cmath>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "output.hpp"
#include "qwalk/core.hpp"
#include "qwalk/disorder.hpp"
#include "qwalk/dynamics.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/momentum.hpp"
#include "qwalk/parallel.hpp"

namespace {

using cli::Manifest;
using cli::ResultTable;
using cli::Series;
using cli::fmt17;

const std::vector<std::string> kPalette = {"#2166ac", "#b2182b", "#1b7837",
                                           "#762a83", "#e08214", "#636363"};

std::string frame_tag(qwalk::Frame fr) {
    return fr == qwalk::Frame::prime ? "prime" : "dprime";
}

void note(const std::string& path) { std::cout << "wrote " << path << "\n"; }

void emit(const Manifest& m, const std::string& path_csv,
          const std::string& path_json, const ResultTable& table) {
    if (m.format == "json") {
        cli::write_json(path_json, table, m);
        note(path_json);
    } else {
        cli::write_csv(path_csv, table, m);
        note(path_csv);
    }
}

void emit_framed(const Manifest& m, qwalk::Frame fr, const std::string& suffix,
                 const ResultTable& table) {
    emit(m, m.out_path(fr, suffix, "csv"), m.out_path(fr, suffix, "json"), table);
}

void emit_plain(const Manifest& m, const std::string& suffix,
                const ResultTable& table) {
    emit(m, m.out_file(suffix, "csv"), m.out_file(suffix, "json"), table);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] =
            n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return v;
}

// ---------------------------------------------------------------------------
// phase-diagram: winding pair per coin point; sweeps mark gap closings as
// boundary rows, a single-point query lets GapClosed escalate instead.
// ---------------------------------------------------------------------------

void run_phase_diagram(const Manifest& m) {
    const auto family = m.family_enum();
    const qwalk::LossParams loss{m.p_values.front()};
    ResultTable table;
    table.columns = {"theta1", "theta2", "nu_prime", "nu_dprime", "boundary_flag"};

    auto add_point = [&](qwalk::CoinParams c,
                         const std::optional<qwalk::WindingPair>& pair) {
        if (pair)
            table.add({fmt17(c.theta1), fmt17(c.theta2),
                       std::to_string(pair->nu_prime),
                       std::to_string(pair->nu_double_prime), "0"});
        else
            table.add({fmt17(c.theta1), fmt17(c.theta2), "", "", "1"});
    };

    if (!m.line_text.empty()) {
        const auto line = m.line();
        const auto points = line.points();
        std::vector<std::optional<qwalk::WindingPair>> cells(points.size());
        if (points.size() == 1) {
            cells[0] = qwalk::winding_pair(points[0], loss, family);
        } else {
            qwalk::parallel_for(static_cast<int>(points.size()), [&](int i) {
                try {
                    cells[static_cast<std::size_t>(i)] =
                        qwalk::winding_pair(points[static_cast<std::size_t>(i)],
                                            loss, family);
                } catch (const qwalk::GapClosed&) {
                    // boundary marker
                }
            });
        }
        for (std::size_t i = 0; i < points.size(); ++i)
            add_point(points[i], cells[i]);
        emit_plain(m, "", table);
        if (m.format == "svg") {
            Series prime{"nu_prime", kPalette[0], {}},
                dprime{"nu_dprime", kPalette[1], {}};
            for (std::size_t i = 0; i < points.size(); ++i)
                if (cells[i]) {
                    double s = line.swept(static_cast<int>(i));
                    prime.points.push_back({s, double(cells[i]->nu_prime)});
                    dprime.points.push_back({s, double(cells[i]->nu_double_prime)});
                }
            auto path = m.out_file("", "svg");
            cli::write_svg_lines(path, "winding numbers", {prime, dprime});
            note(path);
        }
        return;
    }

    if (m.grid_n1 == 1 && m.grid_n2 == 1) {
        qwalk::CoinParams c{-qwalk::kPi, -qwalk::kPi};
        add_point(c, qwalk::winding_pair(c, loss, family));
        emit_plain(m, "", table);
        return;
    }

    const auto pd = qwalk::phase_diagram(family, loss, m.grid_n1, m.grid_n2);
    for (int i1 = 0; i1 < pd.n1; ++i1)
        for (int i2 = 0; i2 < pd.n2; ++i2)
            add_point({pd.theta1s[static_cast<std::size_t>(i1)],
                       pd.theta2s[static_cast<std::size_t>(i2)]},
                      pd.at(i1, i2));
    emit_plain(m, "", table);

    if (m.format == "svg") {
        auto heat = [&](bool prime_map, const std::string& suffix,
                        const std::string& title) {
            // svg grid is (i, j) = (theta1, theta2), value index j*n1 + i
            std::vector<std::optional<double>> vals(
                static_cast<std::size_t>(pd.n1) * pd.n2);
            for (int i1 = 0; i1 < pd.n1; ++i1)
                for (int i2 = 0; i2 < pd.n2; ++i2) {
                    const auto& cell = pd.at(i1, i2);
                    if (cell)
                        vals[static_cast<std::size_t>(i2) * pd.n1 + i1] =
                            prime_map ? cell->nu_prime : cell->nu_double_prime;
                }
            auto path = m.out_file(suffix, "svg");
            cli::write_svg_heatmap(path, title, pd.n1, pd.n2, pd.theta1s.front(),
                                   pd.theta1s.back(), pd.theta2s.front(),
                                   pd.theta2s.back(), vals);
            note(path);
        };
        heat(true, "", "winding nu_prime");
        heat(false, "nu_dprime", "winding nu_dprime");
    }
}

// ---------------------------------------------------------------------------
// displacement: <Delta x>(steps) along a coin line, one row per (point, p).
// ---------------------------------------------------------------------------

void run_displacement(const Manifest& m) {
    const auto family = m.family_enum();
    const auto line = m.line();
    const auto points = line.points();
    for (auto fr : m.frames()) {
        const auto variant = qwalk::variant_of(family, fr);
        ResultTable table;
        table.columns = {"theta1", "theta2", "p", "t", "avg_displacement"};
        const int n_pts = static_cast<int>(points.size());
        const int n_p = static_cast<int>(m.p_values.size());
        std::vector<double> values(static_cast<std::size_t>(n_pts) * n_p);
        qwalk::parallel_for(n_pts * n_p, [&](int idx) {
            const auto& coin = points[static_cast<std::size_t>(idx / n_p)];
            const double p = m.p_values[static_cast<std::size_t>(idx % n_p)];
            auto seq = qwalk::build_floquet(variant, coin, {p});
            values[static_cast<std::size_t>(idx)] =
                qwalk::average_displacement(qwalk::evolve(seq, m.steps));
        });
        for (int i = 0; i < n_pts; ++i)
            for (int j = 0; j < n_p; ++j)
                table.add({fmt17(points[static_cast<std::size_t>(i)].theta1),
                           fmt17(points[static_cast<std::size_t>(i)].theta2),
                           fmt17(m.p_values[static_cast<std::size_t>(j)]),
                           std::to_string(m.steps),
                           fmt17(values[static_cast<std::size_t>(i) * n_p + j])});
        emit_framed(m, fr, "", table);
        if (m.format == "svg") {
            std::vector<Series> series;
            for (int j = 0; j < n_p; ++j) {
                Series s{"p=" + fmt17(m.p_values[static_cast<std::size_t>(j)]),
                         kPalette[static_cast<std::size_t>(j) % kPalette.size()],
                         {}};
                for (int i = 0; i < n_pts; ++i)
                    s.points.push_back(
                        {line.swept(i),
                         values[static_cast<std::size_t>(i) * n_p + j]});
                series.push_back(std::move(s));
            }
            auto path = m.out_path(fr, "", "svg");
            cli::write_svg_lines(path, "average displacement (" + frame_tag(fr) + ")",
                                 series);
            note(path);
        }
    }
}

// ---------------------------------------------------------------------------
// moments: m2 and m2/t^2 at the requested times along a coin line.
// ---------------------------------------------------------------------------

void run_moments(const Manifest& m) {
    const auto family = m.family_enum();
    const auto line = m.line();
    const auto points = line.points();
    const int t_max = m.steps;
    for (auto fr : m.frames()) {
        const auto variant = qwalk::variant_of(family, fr);
        ResultTable table;
        table.columns = {"theta1", "theta2", "p", "t", "m2", "m2_over_t2"};
        const int n_pts = static_cast<int>(points.size());
        const int n_p = static_cast<int>(m.p_values.size());
        const int n_t = static_cast<int>(m.t_values.size());
        std::vector<qwalk::SecondMoment> values(
            static_cast<std::size_t>(n_pts) * n_p * n_t);
        qwalk::parallel_for(n_pts * n_p, [&](int idx) {
            const auto& coin = points[static_cast<std::size_t>(idx / n_p)];
            const double p = m.p_values[static_cast<std::size_t>(idx % n_p)];
            auto seq = qwalk::build_floquet(variant, coin, {p});
            auto traj = qwalk::evolve(seq, t_max);
            for (int k = 0; k < n_t; ++k) {
                int t = m.t_values[static_cast<std::size_t>(k)];
                values[static_cast<std::size_t>(idx) * n_t + k] =
                    qwalk::second_moment(traj.state_at(t), t);
            }
        });
        for (int i = 0; i < n_pts; ++i)
            for (int j = 0; j < n_p; ++j)
                for (int k = 0; k < n_t; ++k) {
                    const auto& sm =
                        values[(static_cast<std::size_t>(i) * n_p + j) * n_t + k];
                    table.add({fmt17(points[static_cast<std::size_t>(i)].theta1),
                               fmt17(points[static_cast<std::size_t>(i)].theta2),
                               fmt17(m.p_values[static_cast<std::size_t>(j)]),
                               std::to_string(m.t_values[static_cast<std::size_t>(k)]),
                               fmt17(sm.m2), fmt17(sm.m2_over_t2)});
                }
        emit_framed(m, fr, "", table);
        if (m.format == "svg") {
            std::vector<Series> series;
            for (int j = 0; j < n_p; ++j)
                for (int k = 0; k < n_t; ++k) {
                    Series s{"p=" + fmt17(m.p_values[static_cast<std::size_t>(j)]) +
                                 " t=" +
                                 std::to_string(m.t_values[static_cast<std::size_t>(k)]),
                             kPalette[static_cast<std::size_t>(j * n_t + k) %
                                      kPalette.size()],
                             {}};
                    for (int i = 0; i < n_pts; ++i)
                        s.points.push_back(
                            {line.swept(i),
                             values[(static_cast<std::size_t>(i) * n_p + j) * n_t + k]
                                 .m2_over_t2});
                    series.push_back(std::move(s));
                }
            auto path = m.out_path(fr, "", "svg");
            cli::write_svg_lines(path, "m2 / t^2 (" + frame_tag(fr) + ")", series);
            note(path);
        }
    }
}

// ---------------------------------------------------------------------------
// chiral: -2C(t) time series along a coin line.
// ---------------------------------------------------------------------------

void run_chiral(const Manifest& m) {
    const auto family = m.family_enum();
    const auto line = m.line();
    const auto points = line.points();
    for (auto fr : m.frames()) {
        const auto variant = qwalk::variant_of(family, fr);
        ResultTable table;
        table.columns = {"theta1", "theta2", "p", "t", "minus_two_c"};
        const int n_pts = static_cast<int>(points.size());
        const int n_p = static_cast<int>(m.p_values.size());
        std::vector<qwalk::ObservableSeries> values(
            static_cast<std::size_t>(n_pts) * n_p);
        qwalk::parallel_for(n_pts * n_p, [&](int idx) {
            const auto& coin = points[static_cast<std::size_t>(idx / n_p)];
            const double p = m.p_values[static_cast<std::size_t>(idx % n_p)];
            auto seq = qwalk::build_floquet(variant, coin, {p});
            values[static_cast<std::size_t>(idx)] =
                qwalk::chiral_series(qwalk::evolve(seq, m.steps));
        });
        for (int i = 0; i < n_pts; ++i)
            for (int j = 0; j < n_p; ++j) {
                const auto& s = values[static_cast<std::size_t>(i) * n_p + j];
                for (std::size_t k = 0; k < s.t.size(); ++k)
                    table.add({fmt17(points[static_cast<std::size_t>(i)].theta1),
                               fmt17(points[static_cast<std::size_t>(i)].theta2),
                               fmt17(m.p_values[static_cast<std::size_t>(j)]),
                               std::to_string(s.t[k]), fmt17(s.value[k])});
            }
        emit_framed(m, fr, "", table);
        if (m.format == "svg") {
            // convergence panel: late-time mean of -2C against the scan angle
            const int t_from = std::min(10, m.steps);
            std::vector<Series> series;
            for (int j = 0; j < n_p; ++j) {
                Series s{"p=" + fmt17(m.p_values[static_cast<std::size_t>(j)]),
                         kPalette[static_cast<std::size_t>(j) % kPalette.size()],
                         {}};
                for (int i = 0; i < n_pts; ++i) {
                    const auto& obs = values[static_cast<std::size_t>(i) * n_p + j];
                    double sum = 0;
                    int count = 0;
                    for (std::size_t k = 0; k < obs.t.size(); ++k)
                        if (obs.t[k] >= t_from) {
                            sum += obs.value[k];
                            ++count;
                        }
                    s.points.push_back({line.swept(i), count ? sum / count : 0.0});
                }
                series.push_back(std::move(s));
            }
            auto path = m.out_path(fr, "", "svg");
            cli::write_svg_lines(
                path, "late-time scaled chiral displacement (" + frame_tag(fr) + ")",
                series);
            note(path);
        }
    }
}

// ---------------------------------------------------------------------------
// spectrum: dense two-phase ring diagonalization, eigenvalue table plus
// edge-state profiles.
// ---------------------------------------------------------------------------

void run_spectrum(const Manifest& m) {
    const auto family = m.family_enum();
    for (auto fr : m.frames()) {
        qwalk::LatticeConfig config;
        config.n_sites = m.sites;
        config.variant = qwalk::variant_of(family, fr);
        config.loss = {m.p_values.front()};
        config.regions = {{config.x_min(), -1, m.left_coin()},
                          {0, config.x_max(), m.right_coin()}};
        const auto u = qwalk::build_lattice_floquet(config);
        const auto spec = qwalk::spectrum(u);
        const auto edges = qwalk::classify_edge_states(config, spec);
        std::set<int> edge_cols;
        for (const auto& e : edges) edge_cols.insert(e.index);

        ResultTable table;
        table.columns = {"re_lambda", "im_lambda", "ipr", "edge_flag", "center"};
        const int dim = static_cast<int>(spec.lambdas.size());
        for (int c = 0; c < dim; ++c) {
            auto density = qwalk::site_density(spec.vectors, c);
            double ipr = qwalk::inverse_participation_ratio(density);
            int center = config.x_min() +
                         static_cast<int>(std::max_element(density.begin(),
                                                           density.end()) -
                                          density.begin());
            table.add({fmt17(spec.lambdas[static_cast<std::size_t>(c)].real()),
                       fmt17(spec.lambdas[static_cast<std::size_t>(c)].imag()),
                       fmt17(ipr), edge_cols.count(c) ? "1" : "0",
                       std::to_string(center)});
        }
        emit_framed(m, fr, "", table);

        ResultTable profiles;
        profiles.columns = {"x"};
        for (std::size_t e = 0; e < edges.size(); ++e)
            profiles.columns.push_back("state_" + std::to_string(e));
        for (int i = 0; i < config.n_sites; ++i) {
            std::vector<std::string> row{std::to_string(config.x_min() + i)};
            for (const auto& e : edges)
                row.push_back(fmt17(e.profile[static_cast<std::size_t>(i)]));
            profiles.add(std::move(row));
        }
        emit_framed(m, fr, "profiles", profiles);

        if (m.format == "svg") {
            Series bulk{"bulk", "#9e9e9e", {}}, edge{"edge", "#d32f2f", {}};
            for (int c = 0; c < dim; ++c) {
                auto pt = std::pair{spec.lambdas[static_cast<std::size_t>(c)].real(),
                                    spec.lambdas[static_cast<std::size_t>(c)].imag()};
                (edge_cols.count(c) ? edge : bulk).points.push_back(pt);
            }
            auto path = m.out_path(fr, "", "svg");
            cli::write_svg_scatter(
                path, "Floquet spectrum (" + frame_tag(fr) + ")", {bulk, edge});
            note(path);
        }
    }
}

// ---------------------------------------------------------------------------
// edge-dynamics: loss-compensated density P_C(x, t) of a two-phase interface
// evolved from |x=0>|+>.
// ---------------------------------------------------------------------------

void run_edge_dynamics(const Manifest& m) {
    const auto family = m.family_enum();
    const auto left = m.left_coin();
    const auto right = m.right_coin();
    for (auto fr : m.frames()) {
        auto seq = qwalk::build_floquet(qwalk::variant_of(family, fr), right,
                                        {m.p_values.front()});
        seq.coin_field = [left, right](int x) { return x < 0 ? left : right; };
        const auto traj = qwalk::evolve(seq, m.steps);
        const auto pc = qwalk::corrected_probability(traj, seq.loss);
        const int width = static_cast<int>(pc.rows.front().size());

        ResultTable table;
        table.columns = {"t", "x", "p_corrected"};
        for (int t = 0; t <= m.steps; ++t)
            for (int i = 0; i < width; ++i)
                table.add({std::to_string(t), std::to_string(pc.offset + i),
                           fmt17(pc.rows[static_cast<std::size_t>(t)]
                                        [static_cast<std::size_t>(i)])});
        emit_framed(m, fr, "", table);

        if (m.format == "svg") {
            std::vector<std::optional<double>> vals(
                static_cast<std::size_t>(width) * (m.steps + 1));
            for (int t = 0; t <= m.steps; ++t)
                for (int i = 0; i < width; ++i)
                    vals[static_cast<std::size_t>(t) * width + i] =
                        pc.rows[static_cast<std::size_t>(t)]
                               [static_cast<std::size_t>(i)];
            auto path = m.out_path(fr, "", "svg");
            cli::write_svg_heatmap(path,
                                   "loss-compensated density (" + frame_tag(fr) + ")",
                                   width, m.steps + 1, pc.offset,
                                   pc.offset + width - 1, 0, m.steps, vals);
            note(path);
        }
    }
}

// ---------------------------------------------------------------------------
// disorder: ensemble displacement statistics along a coin line, or per-member
// corrected densities of the interface walk.
// ---------------------------------------------------------------------------

void run_disorder(const Manifest& m) {
    const auto family = m.family_enum();
    qwalk::DisorderSpec spec;
    spec.kind = m.kind == "static" ? qwalk::DisorderKind::static_coin
                                   : qwalk::DisorderKind::dynamic_coin;
    spec.amplitude = m.amplitude;
    spec.n_ensembles = m.ensembles;
    spec.master_seed = m.seed;
    spec.independent_draws = m.independent_draws;

    if (m.mode == "edge") {
        for (auto fr : m.frames()) {
            const auto variant = qwalk::variant_of(family, fr);
            const auto ep = qwalk::disordered_edge_persistence(
                variant, m.left_coin(), m.right_coin(), {m.p_values.front()},
                spec, m.steps);
            ResultTable table;
            table.columns = {"ensemble", "t", "x", "p_corrected"};
            for (std::size_t e = 0; e < ep.densities.size(); ++e) {
                const auto& pc = ep.densities[e];
                const int width = static_cast<int>(pc.rows.front().size());
                for (int t = 0; t <= m.steps; ++t)
                    for (int i = 0; i < width; ++i)
                        table.add({std::to_string(e), std::to_string(t),
                                   std::to_string(pc.offset + i),
                                   fmt17(pc.rows[static_cast<std::size_t>(t)]
                                                [static_cast<std::size_t>(i)])});
            }
            emit_framed(m, fr, "", table);

            ResultTable peaks;
            peaks.columns = {"ensemble", "final_peak"};
            for (std::size_t e = 0; e < ep.final_peaks.size(); ++e)
                peaks.add({std::to_string(e), std::to_string(ep.final_peaks[e])});
            emit_framed(m, fr, "peaks", peaks);

            if (m.format == "svg") {
                Series s{"final peak", kPalette[0], {}};
                for (std::size_t e = 0; e < ep.final_peaks.size(); ++e)
                    s.points.push_back(
                        {double(e), double(ep.final_peaks[e])});
                auto path = m.out_path(fr, "peaks", "svg");
                cli::write_svg_scatter(
                    path, "disordered edge persistence (" + frame_tag(fr) + ")", {s});
                note(path);
            }
        }
        return;
    }

    const auto line = m.line();
    const auto points = line.points();
    for (auto fr : m.frames()) {
        const auto variant = qwalk::variant_of(family, fr);
        ResultTable table;
        table.columns = {"theta1",    "theta2",   "p",
                         "kind",      "amplitude", "ensembles",
                         "mean_displacement", "std_displacement"};
        const int n_pts = static_cast<int>(points.size());
        const int n_p = static_cast<int>(m.p_values.size());
        std::vector<qwalk::EnsembleStats> stats(
            static_cast<std::size_t>(n_pts) * n_p);
        // ensemble_displacement parallelizes internally; keep the outer loop
        // serial so worker threads are not oversubscribed.
        for (int idx = 0; idx < n_pts * n_p; ++idx) {
            const auto& coin = points[static_cast<std::size_t>(idx / n_p)];
            const double p = m.p_values[static_cast<std::size_t>(idx % n_p)];
            stats[static_cast<std::size_t>(idx)] = qwalk::ensemble_displacement(
                variant, coin, {p}, spec, m.steps);
        }
        for (int i = 0; i < n_pts; ++i)
            for (int j = 0; j < n_p; ++j) {
                const auto& st = stats[static_cast<std::size_t>(i) * n_p + j];
                table.add({fmt17(points[static_cast<std::size_t>(i)].theta1),
                           fmt17(points[static_cast<std::size_t>(i)].theta2),
                           fmt17(m.p_values[static_cast<std::size_t>(j)]), m.kind,
                           fmt17(m.amplitude), std::to_string(m.ensembles),
                           fmt17(st.mean), fmt17(st.stddev)});
            }
        emit_framed(m, fr, "", table);

        if (m.format == "svg") {
            std::vector<Series> series;
            for (int j = 0; j < n_p; ++j) {
                Series mean{"mean p=" + fmt17(m.p_values[static_cast<std::size_t>(j)]),
                            kPalette[static_cast<std::size_t>(j) % kPalette.size()],
                            {}};
                Series spread{"mean+std", "#9e9e9e", {}};
                Series spread2{"mean-std", "#9e9e9e", {}};
                for (int i = 0; i < n_pts; ++i) {
                    const auto& st = stats[static_cast<std::size_t>(i) * n_p + j];
                    mean.points.push_back({line.swept(i), st.mean});
                    spread.points.push_back({line.swept(i), st.mean + st.stddev});
                    spread2.points.push_back({line.swept(i), st.mean - st.stddev});
                }
                series.push_back(std::move(mean));
                series.push_back(std::move(spread));
                series.push_back(std::move(spread2));
            }
            auto path = m.out_path(fr, "", "svg");
            cli::write_svg_lines(
                path, "disordered mean displacement (" + frame_tag(fr) + ")", series);
            note(path);
        }
    }
}

// ---------------------------------------------------------------------------
// pseudo-unitarity: max_k (Re n0)^2 of the gamma-scaled walk over a coin
// grid, one block per loss strength.
// ---------------------------------------------------------------------------

void run_pseudo_unitarity(const Manifest& m) {
    const auto family = m.family_enum();
    const auto variant = qwalk::variant_of(family, m.frames().front());
    const auto th1 = linspace(-qwalk::kPi, qwalk::kPi, m.grid_n1);
    const auto th2 = linspace(-qwalk::kPi, qwalk::kPi, m.grid_n2);
    const std::size_t n_cells = th1.size() * th2.size();

    ResultTable table;
    table.columns = {"theta1", "theta2", "p", "max_n0_sq", "pseudo_unitary"};
    std::vector<std::vector<qwalk::PseudoUnitarity>> blocks;
    for (double p : m.p_values) {
        std::vector<qwalk::PseudoUnitarity> cells(n_cells);
        qwalk::parallel_for(static_cast<int>(n_cells), [&](int idx) {
            const auto i1 = static_cast<std::size_t>(idx) / th2.size();
            const auto i2 = static_cast<std::size_t>(idx) % th2.size();
            auto seq = qwalk::build_floquet(variant, {th1[i1], th2[i2]}, {p});
            cells[static_cast<std::size_t>(idx)] = qwalk::pseudo_unitarity(seq);
        });
        for (std::size_t i1 = 0; i1 < th1.size(); ++i1)
            for (std::size_t i2 = 0; i2 < th2.size(); ++i2) {
                const auto& c = cells[i1 * th2.size() + i2];
                table.add({fmt17(th1[i1]), fmt17(th2[i2]), fmt17(p),
                           fmt17(c.max_n0_sq), c.is_pseudo_unitary ? "1" : "0"});
            }
        blocks.push_back(std::move(cells));
    }
    emit_plain(m, "", table);

    if (m.format == "svg") {
        // Boundary overlay per loss strength: black marks topological
        // transitions of the lossless walk, red marks flips of the
        // pseudo-unitarity flag between neighboring cells.
        const auto pd =
            qwalk::phase_diagram(family, {0.0}, m.grid_n1, m.grid_n2);
        std::vector<bool> black(n_cells, false);
        auto same_pair = [&](int a1, int a2, int b1, int b2) {
            const auto &ca = pd.at(a1, a2), &cb = pd.at(b1, b2);
            if (!ca || !cb) return true; // closed cells are already black
            return ca->nu_prime == cb->nu_prime &&
                   ca->nu_double_prime == cb->nu_double_prime;
        };
        for (int i1 = 0; i1 < pd.n1; ++i1)
            for (int i2 = 0; i2 < pd.n2; ++i2) {
                bool b = !pd.at(i1, i2);
                if (i1 + 1 < pd.n1 && !same_pair(i1, i2, i1 + 1, i2)) b = true;
                if (i2 + 1 < pd.n2 && !same_pair(i1, i2, i1, i2 + 1)) b = true;
                if (b)
                    black[static_cast<std::size_t>(i2) * pd.n1 + i1] = true;
            }
        for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& cells = blocks[bi];
            std::vector<bool> red(n_cells, false);
            auto flag = [&](std::size_t i1, std::size_t i2) {
                return cells[i1 * th2.size() + i2].is_pseudo_unitary;
            };
            for (std::size_t i1 = 0; i1 < th1.size(); ++i1)
                for (std::size_t i2 = 0; i2 < th2.size(); ++i2) {
                    bool r = false;
                    if (i1 + 1 < th1.size() && flag(i1, i2) != flag(i1 + 1, i2))
                        r = true;
                    if (i2 + 1 < th2.size() && flag(i1, i2) != flag(i1, i2 + 1))
                        r = true;
                    if (r) red[i2 * th1.size() + i1] = true;
                }
            auto path = m.out_file("p" + std::to_string(bi), "svg");
            cli::write_svg_boundaries(
                path, "pseudo-unitarity boundaries, p = " + fmt17(m.p_values[bi]),
                static_cast<int>(th1.size()), static_cast<int>(th2.size()),
                -qwalk::kPi, qwalk::kPi, -qwalk::kPi, qwalk::kPi, black, red);
            note(path);
        }
    }
}

void dispatch(const Manifest& m) {
    if (m.command == "phase-diagram") run_phase_diagram(m);
    else if (m.command == "displacement") run_displacement(m);
    else if (m.command == "moments") run_moments(m);
    else if (m.command == "chiral") run_chiral(m);
    else if (m.command == "spectrum") run_spectrum(m);
    else if (m.command == "edge-dynamics") run_edge_dynamics(m);
    else if (m.command == "disorder") run_disorder(m);
    else if (m.command == "pseudo-unitarity") run_pseudo_unitarity(m);
    else throw cli::ManifestError("unknown command '" + m.command + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological invariants and loss dynamics of multi-step "
                 "discrete-time quantum walks"};
    app.require_subcommand(0, 1);

    Manifest m;
    std::string manifest_path, p_text, grid_text, line_text, left_text,
        right_text, amp_text, times_text;
    app.add_option("--manifest", manifest_path,
                   "JSON run manifest; overrides every flag");

    const std::vector<std::pair<std::string, std::string>> kCommands = {
        {"phase-diagram", "winding-number map over the coin-angle torus"},
        {"displacement", "average displacement of the lost walker fraction"},
        {"moments", "second moment m2 and the ballistic ratio m2/t^2"},
        {"chiral", "scaled chiral displacement -2C(t)"},
        {"spectrum", "two-phase ring spectrum with edge-state classification"},
        {"edge-dynamics", "loss-compensated interface densities P_C(x,t)"},
        {"disorder", "coin-disorder ensembles: displacement stats or edge runs"},
        {"pseudo-unitarity", "map of max_k (Re n0)^2 for the scaled walk"}};

    for (const auto& [name, desc] : kCommands) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--family", m.family, "walk family: three|four|wfour");
        sub->add_option("--frame", m.frame, "time frame: prime|dprime|both");
        sub->add_option("--p", p_text, "loss probabilities, e.g. '0,9/25,2/3'");
        sub->add_option("--steps", m.steps, "number of Floquet periods");
        sub->add_option("--grid", grid_text, "coin grid '<n1>x<n2>'");
        sub->add_option("--line", line_text,
                        "coin scan line, e.g. 'th1=th2+0.5pi,n=13'");
        sub->add_option("--seed", m.seed, "master seed for disorder draws");
        sub->add_option("--out", m.out, "output path (extension is derived)");
        sub->add_option("--format", m.format, "csv|json|svg (svg adds plots)");
        sub->add_option("--manifest", manifest_path,
                        "JSON run manifest; overrides every flag");
        if (name == "spectrum" || name == "edge-dynamics" || name == "disorder") {
            sub->add_option("--sites", m.sites, "ring size (odd)");
            sub->add_option("--left", left_text, "left coin 'th1,th2'");
            sub->add_option("--right", right_text, "right coin 'th1,th2'");
        }
        if (name == "disorder") {
            sub->add_option("--kind", m.kind, "static|dynamic");
            sub->add_option("--amplitude", amp_text,
                            "disorder amplitude, e.g. '0.05pi'");
            sub->add_option("--ensembles", m.ensembles, "ensemble members");
            sub->add_option("--mode", m.mode, "displacement|edge");
            sub->add_flag("--independent", m.independent_draws,
                          "draw theta1/theta2 offsets independently");
        }
        if (name == "moments")
            sub->add_option("--times", times_text, "sampling times, e.g. '4,50'");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::string cmd;
    for (const auto* sub : app.get_subcommands()) cmd = sub->get_name();

    try {
        if (!manifest_path.empty()) {
            Manifest loaded = Manifest::load(manifest_path);
            if (loaded.command.empty()) loaded.command = cmd;
            if (!cmd.empty() && loaded.command != cmd)
                throw cli::ManifestError("manifest command '" + loaded.command +
                                         "' does not match subcommand '" + cmd +
                                         "'");
            m = loaded;
        } else {
            if (cmd.empty()) {
                std::cerr << app.help();
                return 2;
            }
            m.command = cmd;
            if (!p_text.empty()) m.p_values = cli::parse_number_list(p_text);
            if (!grid_text.empty()) {
                auto x = grid_text.find('x');
                if (x == std::string::npos)
                    throw cli::ManifestError("grid needs '<n1>x<n2>'");
                m.grid_n1 = std::stoi(grid_text.substr(0, x));
                m.grid_n2 = std::stoi(grid_text.substr(x + 1));
            }
            m.line_text = line_text;
            if (!left_text.empty()) {
                m.left.clear();
                for (const auto& v : cli::parse_number_list(left_text))
                    m.left.push_back(v);
            }
            if (!right_text.empty()) {
                m.right.clear();
                for (const auto& v : cli::parse_number_list(right_text))
                    m.right.push_back(v);
            }
            if (!amp_text.empty()) m.amplitude = cli::parse_angle(amp_text);
            if (!times_text.empty()) m.t_values = cli::parse_int_list(times_text);
        }
        m.finalize();
        dispatch(m);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
