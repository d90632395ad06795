// Command-line front end: minimum-time schedule synthesis for harmonic-trap
// expansion, gamma sweeps, switching-curve extraction, RK4 verification and
// split-operator quantum checks, with CSV/JSON output.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trapexpand/io.hpp"
#include "trapexpand/phase.hpp"
#include "trapexpand/schrodinger.hpp"
#include "trapexpand/sweep.hpp"
#include "trapexpand/synthesis.hpp"
#include "trapexpand/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

struct Options {
    double u1 = 1.0;
    double u2 = 1.0;
    double gamma = 2.0;
    double gamma_min = 1.01;
    double gamma_max = 10.0;
    double gamma_step = 0.01;
    double dt = 1e-4;
    int grid_points = 4096;
    double grid_span = 0.0;  // 0: auto, 8*gamma
    int snapshots = 0;
    std::string format = "csv";
    std::string out_path;
    std::string schedule_path;
    std::string schedule_out_path;
};

/// Writes to --out when given, stdout otherwise.
int write_output(const Options& opt, const std::string& text) {
    if (opt.out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream f(opt.out_path);
    if (!f) {
        std::cerr << "error: cannot open output file " << opt.out_path << "\n";
        return kExitIo;
    }
    f << text;
    return kExitOk;
}

int cmd_synth(const Options& opt) {
    const trapexpand::ControlBounds bounds(opt.u1, opt.u2);
    const auto sol = trapexpand::synthesize(bounds, opt.gamma);
    if (!opt.schedule_out_path.empty()) {
        std::ofstream f(opt.schedule_out_path);
        if (!f) {
            std::cerr << "error: cannot open schedule file " << opt.schedule_out_path << "\n";
            return kExitIo;
        }
        f << trapexpand::schedule_to_json(sol.schedule).dump(2) << "\n";
    }
    return write_output(opt, trapexpand::solution_to_json(sol).dump(2) + "\n");
}

int cmd_sweep(const Options& opt) {
    const trapexpand::ControlBounds bounds(opt.u1, opt.u2);
    const auto result =
        trapexpand::sweep(bounds, opt.gamma_min, opt.gamma_max, opt.gamma_step);

    std::ostringstream os;
    if (opt.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : result.rows) {
            nlohmann::json tn = nlohmann::json::array();
            for (const auto& t : row.t_n) {
                tn.push_back(t ? nlohmann::json(*t) : nlohmann::json(nullptr));
            }
            rows.push_back({{"gamma", row.gamma},
                            {"T0", row.t0},
                            {"T_n", tn},
                            {"optimal_n", row.optimal_n},
                            {"optimal_T", row.optimal_t}});
        }
        nlohmann::json crossings = nlohmann::json::array();
        for (const auto& c : result.crossovers) {
            crossings.push_back({{"n_low", c.n_low},
                                 {"n_high", c.n_high},
                                 {"gamma", c.gamma},
                                 {"time_gap", c.time_gap}});
        }
        os << nlohmann::json{{"schema", 1}, {"rows", rows}, {"crossovers", crossings}}.dump(2)
           << "\n";
    } else {
        os << "gamma,T0";
        for (int n = 1; n <= result.n_columns; ++n) os << ",T" << n;
        os << ",optimal_n,optimal_T\n";
        for (const auto& row : result.rows) {
            os << trapexpand::fmt_float(row.gamma) << "," << trapexpand::fmt_float(row.t0);
            for (const auto& t : row.t_n) os << "," << (t ? trapexpand::fmt_float(*t) : "");
            os << "," << row.optimal_n << "," << trapexpand::fmt_float(row.optimal_t) << "\n";
        }
        for (const auto& c : result.crossovers) {
            os << "# crossover n=" << c.n_low << "->" << c.n_high << " gamma="
               << trapexpand::fmt_float(c.gamma)
               << " time_gap=" << trapexpand::fmt_float(c.time_gap) << "\n";
        }
    }
    return write_output(opt, os.str());
}

int cmd_curves(const Options& opt) {
    const trapexpand::ControlBounds bounds(opt.u1, opt.u2);
    std::ostringstream os;
    os << "gamma,j,x1,x2,kind\n";
    for (double g = opt.gamma_min; g <= opt.gamma_max + 1e-12; g += opt.gamma_step) {
        const auto sol = trapexpand::synthesize(bounds, std::min(g, opt.gamma_max));
        for (std::size_t j = 0; j < sol.switching_points.size(); ++j) {
            const auto& p = sol.switching_points[j];
            os << trapexpand::fmt_float(sol.schedule.gamma) << "," << j << ","
               << trapexpand::fmt_float(p.x1) << "," << trapexpand::fmt_float(p.x2) << ","
               << trapexpand::kind_name(sol.schedule.segments[j].control.kind) << "\n";
        }
    }
    return write_output(opt, os.str());
}

int cmd_verify(const Options& opt) {
    trapexpand::SynthesisSolution sol;
    if (!opt.schedule_path.empty()) {
        std::ifstream f(opt.schedule_path);
        if (!f) {
            std::cerr << "error: cannot open schedule file " << opt.schedule_path << "\n";
            return kExitIo;
        }
        nlohmann::json j;
        f >> j;
        sol.schedule = trapexpand::schedule_from_json(j);
        // XY schedules (2 segments) have zero turns; Y(XY)^n has 2n + 1 segments
        const auto n_segs = sol.schedule.segments.size();
        sol.n_turns = n_segs >= 3 ? static_cast<int>((n_segs - 1) / 2) : 0;
        sol.total_time = sol.schedule.total_time;
        for (std::size_t i = 0; i + 1 < sol.schedule.segments.size(); ++i) {
            sol.switching_points.push_back(sol.schedule.segments[i].end);
        }
        if (sol.n_turns >= 1 && !sol.switching_points.empty()) {
            const auto& p = sol.switching_points.front();
            sol.s = (p.x2 / p.x1) * (p.x2 / p.x1);
        }
    } else {
        const trapexpand::ControlBounds bounds(opt.u1, opt.u2);
        sol = trapexpand::synthesize(bounds, opt.gamma);
    }

    const auto report = trapexpand::check_solution(sol, opt.dt);
    const int rc = write_output(opt, trapexpand::report_to_json(report).dump(2) + "\n");
    if (rc != kExitOk) return rc;
    return report.passed() ? kExitOk : kExitVerification;
}

int cmd_wavefn(const Options& opt) {
    const trapexpand::ControlBounds bounds(opt.u1, opt.u2);
    const auto sol = trapexpand::synthesize(bounds, opt.gamma);

    const double span = opt.grid_span > 0.0 ? opt.grid_span : 8.0 * opt.gamma;
    const trapexpand::SpatialGrid grid(opt.grid_points, span);
    const auto psi0 = trapexpand::ground_state(1.0, grid);
    const auto psi = trapexpand::split_step_propagate(psi0, sol.schedule, opt.dt);

    const double omega_final = 1.0 / (opt.gamma * opt.gamma);
    const auto target = trapexpand::ground_state(omega_final, grid);
    const auto ansatz = trapexpand::scaling_solution(opt.gamma, 0.0, grid);

    nlohmann::json j = {{"schema", 1},
                        {"gamma", opt.gamma},
                        {"omega_final", omega_final},
                        {"total_time", sol.total_time},
                        {"norm", psi.norm_sq()},
                        {"fidelity_ground_state", trapexpand::fidelity(psi, target)},
                        {"fidelity_scaling_ansatz", trapexpand::fidelity(psi, ansatz)}};
    std::cout << j.dump(2) << "\n";

    if (opt.snapshots > 0 && !opt.out_path.empty()) {
        // |psi|^2 snapshots at evenly spaced times, one column per snapshot.
        std::ostringstream os;
        os << "x";
        std::vector<trapexpand::WaveState> states;
        trapexpand::Schedule partial = sol.schedule;
        for (int k = 1; k <= opt.snapshots; ++k) {
            const double t_k = sol.total_time * k / opt.snapshots;
            partial.segments.clear();
            partial.total_time = 0.0;
            double acc = 0.0;
            for (const auto& seg : sol.schedule.segments) {
                if (acc + seg.duration <= t_k) {
                    partial.segments.push_back(seg);
                    acc += seg.duration;
                } else if (acc < t_k) {
                    trapexpand::Segment head = seg;
                    head.duration = t_k - acc;
                    head.end = trapexpand::propagate_constant(head.start, head.control.value,
                                                              head.duration);
                    partial.segments.push_back(head);
                    acc = t_k;
                }
            }
            partial.total_time = acc;
            states.push_back(trapexpand::split_step_propagate(psi0, partial, opt.dt));
            os << ",density_t" << trapexpand::fmt_float(t_k);
        }
        os << "\n";
        for (int i = 0; i < grid.n_points; ++i) {
            os << trapexpand::fmt_float(grid.x(i));
            for (const auto& st : states) {
                os << "," << trapexpand::fmt_float(std::norm(st.amplitudes[i]));
            }
            os << "\n";
        }
        const int rc = write_output(opt, os.str());
        if (rc != kExitOk) return rc;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-optimal bang-bang synthesis for harmonic-trap expansion"};
    app.set_config("--config");
    app.require_subcommand(1);

    Options opt;
    const auto add_bounds = [&](CLI::App* cmd) {
        cmd->add_option("--u1", opt.u1, "Lower control-bound magnitude (>= 1)");
        cmd->add_option("--u2", opt.u2, "Upper control bound (>= 1)");
    };
    const auto add_gamma = [&](CLI::App* cmd) {
        cmd->add_option("--gamma", opt.gamma, "Expansion ratio (> 1)");
    };
    const auto add_range = [&](CLI::App* cmd) {
        cmd->add_option("--gamma-min", opt.gamma_min, "Sweep start (> 1)");
        cmd->add_option("--gamma-max", opt.gamma_max, "Sweep end");
        cmd->add_option("--gamma-step", opt.gamma_step, "Sweep step");
    };
    const auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format: csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", opt.out_path, "Output path (default stdout)");
    };

    auto* synth = app.add_subcommand("synth", "Compute the minimum-time schedule");
    add_bounds(synth);
    add_gamma(synth);
    add_out(synth);
    synth->add_option("--schedule-out", opt.schedule_out_path,
                      "Also write the bare schedule in interchange format");

    auto* sweep = app.add_subcommand("sweep", "Tabulate candidate times over a gamma range");
    add_bounds(sweep);
    add_range(sweep);
    add_out(sweep);

    auto* curves = app.add_subcommand("curves", "Extract optimal switching points over a range");
    add_bounds(curves);
    add_range(curves);
    add_out(curves);

    auto* verify = app.add_subcommand("verify", "RK4 re-integration checks of a schedule");
    add_bounds(verify);
    add_gamma(verify);
    add_out(verify);
    verify->add_option("--dt", opt.dt, "RK4 step");
    verify->add_option("--schedule", opt.schedule_path, "Schedule JSON to verify");

    auto* wavefn = app.add_subcommand("wavefn", "Split-operator frictionless-cooling check");
    add_bounds(wavefn);
    add_gamma(wavefn);
    add_out(wavefn);
    wavefn->add_option("--dt", opt.dt, "Split-step size");
    wavefn->add_option("--grid-points", opt.grid_points, "Grid points (power of two)");
    wavefn->add_option("--grid-span", opt.grid_span, "Grid half-span (default 8*gamma)");
    wavefn->add_option("--snapshots", opt.snapshots, "Density snapshots written to --out");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        if (curves->parsed()) return cmd_curves(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (wavefn->parsed()) return cmd_wavefn(opt);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
