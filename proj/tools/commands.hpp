#pragma once

// Subcommands of the dlindblad executable. Each takes an already-parsed
// JSON config and writes to a stream or to the configured output file, so
// the test suite can drive them without spawning processes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dlindblad/dlindblad.hpp"

namespace dlindblad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPhysics = 2;

// Max relative deviation of <N(t)> between the full ODE and the leading-order
// analytic solution over lambda t in [0, 1], q-real tau^2 = 0.2, T = 0,
// fock_dim 16, rho0 = |3><3|, dt = 1e-3 / lambda. Measured 0.015758, frozen.
inline constexpr double kLeadingOrderRegressionBound = 0.016;
inline constexpr double kGeneratorEquivalenceTol = 1e-12;
inline constexpr double kMomentConsistencyTol = 1e-10;
inline constexpr int kCrosscheckMaxDim = 16;

struct RunContext {
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::uint64_t seed = 0;
    std::optional<std::string> final_state;
};

struct Fig1Options {
    double tau_sq = 0.2;
    MomentState s0{3.0, 9.0};
    int points = 301;
    double lambda_t_max = 3.0;
};

namespace detail {

inline OutputFormat resolve_format(const RunContext& ctx, OutputFormat config_default) {
    return ctx.format.value_or(config_default);
}

// Runs `write` against the file named by --out (or the config's output path),
// falling back to `fallback`.
inline void with_output(const RunContext& ctx, const std::optional<std::string>& config_path,
                        std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
    const auto path = ctx.out ? ctx.out : config_path;
    if (!path) {
        write(fallback);
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) {
        throw ConfigError("cannot open output file " + *path);
    }
    write(file);
}

inline std::string pass_fail(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace detail

// --- validate --------------------------------------------------------------

inline int cmd_validate(const json& j, const RunContext& ctx, std::ostream& out) {
    if (!j.is_object() || !j.contains("environment")) {
        throw ConfigError("missing \"environment\" block");
    }
    const auto env = parse_environment(j.at("environment"), false);
    const auto m = constraint_margins(env);
    // same slack as environment validation
    const bool ok_i = m.dpp > 0.0;
    const bool ok_ii = m.dqq > 0.0;
    const bool ok_iii = m.uncertainty >= -kConstraintRelTol * env.lambda * env.lambda / 4.0;
    const bool ok_lambda = env.lambda > 0.0;
    const bool ok_contract = m.contraction >= -kConstraintRelTol * env.lambda;

    int fock_dim = 16;
    if (j.contains("fock_dim")) fock_dim = j.at("fock_dim").get<int>();
    std::string deformation_msg = "ok";
    bool ok_deformation = fock_dim >= 2;
    if (!ok_deformation) deformation_msg = "fock_dim must be at least 2";
    try {
        const auto spec = j.contains("deformation") ? parse_deformation(j.at("deformation"))
                                                    : DeformationSpec::identity();
        validate(spec, fock_dim);
    } catch (const PhysicsError& e) {
        ok_deformation = false;
        deformation_msg = e.what();
    }

    const bool all = ok_i && ok_ii && ok_iii && ok_lambda && ok_contract && ok_deformation;
    const auto format = detail::resolve_format(ctx, OutputFormat::Csv);
    detail::with_output(ctx, std::nullopt, out, [&](std::ostream& os) {
        if (format == OutputFormat::Json) {
            os << "{\n"
               << "  \"lambda_positive\": " << (ok_lambda ? "true" : "false") << ",\n"
               << "  \"constraint_i\": {\"pass\": " << (ok_i ? "true" : "false")
               << ", \"margin\": " << json_double(m.dpp) << "},\n"
               << "  \"constraint_ii\": {\"pass\": " << (ok_ii ? "true" : "false")
               << ", \"margin\": " << json_double(m.dqq) << "},\n"
               << "  \"constraint_iii\": {\"pass\": " << (ok_iii ? "true" : "false")
               << ", \"margin\": " << json_double(m.uncertainty) << "},\n"
               << "  \"d2_at_least_lambda\": {\"pass\": " << (ok_contract ? "true" : "false")
               << ", \"margin\": " << json_double(m.contraction) << "},\n"
               << "  \"deformation\": {\"pass\": " << (ok_deformation ? "true" : "false")
               << ", \"message\": " << json_string(deformation_msg) << "},\n"
               << "  \"valid\": " << (all ? "true" : "false") << "\n}\n";
            return;
        }
        os << "lambda > 0                      " << detail::pass_fail(ok_lambda) << "  lambda = "
           << fmt_double(env.lambda) << '\n';
        os << "(i)   D_pp > 0                  " << detail::pass_fail(ok_i) << "  margin "
           << fmt_double(m.dpp) << '\n';
        os << "(ii)  D_qq > 0                  " << detail::pass_fail(ok_ii) << "  margin "
           << fmt_double(m.dqq) << '\n';
        os << "(iii) D_pp D_qq - D_pq^2 >= l^2/4 " << detail::pass_fail(ok_iii) << "  margin "
           << fmt_double(m.uncertainty) << '\n';
        os << "D2 >= lambda                    " << detail::pass_fail(ok_contract) << "  margin "
           << fmt_double(m.contraction) << '\n';
        os << "deformation up to fock_dim      " << detail::pass_fail(ok_deformation) << "  "
           << deformation_msg << '\n';
        os << (all ? "valid" : "INVALID") << '\n';
    });
    return all ? kExitOk : kExitPhysics;
}

// --- simulate --------------------------------------------------------------

inline Trajectory run_simulation(const SimConfig& cfg) {
    const DeformedLiouvillian liouvillian(cfg.deformation, cfg.fock_dim, cfg.environment);
    IntegrateOptions options;
    options.sample_every = cfg.sample_every;
    options.positivity_tol = cfg.positivity_tol;
    options.leakage_tol = cfg.leakage_tol;
    const double dt = cfg.dt.value_or(default_dt(cfg.environment));
    return integrate(liouvillian, initial_state(cfg), cfg.t_final, dt, options);
}

inline constexpr std::array<std::string_view, 7> kTrajectoryColumns = {
    "t", "trace", "purity", "mean_N", "mean_N2", "min_eig", "top_pop"};

inline void write_trajectory(std::ostream& os, const Trajectory& traj, OutputFormat format) {
    const auto row = [](const TrajectoryRecord& r) {
        return std::array<double, 7>{r.t, r.trace, r.purity, r.mean_n, r.mean_n2, r.min_eig, r.top_pop};
    };
    if (format == OutputFormat::Csv) {
        write_csv_header(os, kTrajectoryColumns);
        for (const auto& r : traj.records) write_csv_row(os, row(r));
        return;
    }
    os << "{\n  \"step\": " << json_double(traj.step) << ",\n  \"records\": [";
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
        const auto values = row(traj.records[k]);
        os << (k ? ",\n    {" : "\n    {");
        for (std::size_t c = 0; c < values.size(); ++c) {
            if (c) os << ", ";
            os << json_string(kTrajectoryColumns[c]) << ": " << json_double(values[c]);
        }
        os << '}';
    }
    os << "\n  ]\n}\n";
}

inline int cmd_simulate(const json& j, const RunContext& ctx, std::ostream& out) {
    const auto cfg = parse_config(j);
    const auto traj = run_simulation(cfg);
    const auto format = detail::resolve_format(ctx, cfg.output_format);
    detail::with_output(ctx, cfg.output_path, out,
                        [&](std::ostream& os) { write_trajectory(os, traj, format); });
    if (ctx.final_state) {
        std::ofstream file(*ctx.final_state, std::ios::binary);
        if (!file) throw ConfigError("cannot open " + *ctx.final_state);
        file << json_matrix(traj.final_state.matrix()) << '\n';
    }
    return kExitOk;
}

// --- moments ---------------------------------------------------------------

inline int cmd_moments(const json& j, const RunContext& ctx, std::ostream& out) {
    const auto cfg = parse_config(j);
    const auto& env = cfg.environment;
    if (!env.is_thermal_form()) {
        throw ConfigError("moments needs thermal-form coefficients (D1 = 0)");
    }
    if (cfg.deformation.kind == DeformationKind::Table) {
        throw ConfigError("moments needs a q-deformation or none; tables have no tau");
    }
    const double tau_sq = cfg.deformation.signed_tau_sq();
    const double coth = env.effective_coth();
    const MomentState s0 = moments_of(initial_state(cfg));
    const double dt = cfg.dt.value_or(default_dt(env));
    const auto samples = integrate_truncated(coth, tau_sq, env.lambda, s0, cfg.t_final, dt, cfg.sample_every);
    const bool closed = env.is_zero_temperature();

    std::vector<std::string_view> columns = {"t", "truncated_N", "truncated_N2"};
    if (closed) {
        for (std::string_view c : {"closed_N", "closed_N2", "leading_N", "leading_N2"}) columns.push_back(c);
    }
    const auto format = detail::resolve_format(ctx, cfg.output_format);
    detail::with_output(ctx, cfg.output_path, out, [&](std::ostream& os) {
        if (format == OutputFormat::Json) os << "{\n  \"columns\": [";
        if (format == OutputFormat::Json) {
            for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? ", " : "") << json_string(columns[c]);
            os << "],\n  \"rows\": [";
        } else {
            write_csv_header(os, columns);
        }
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const auto& smp = samples[k];
            std::vector<double> row = {smp.t, smp.s.mean_n, smp.s.mean_n2};
            if (closed) {
                const auto e = solve_t0(env.lambda, tau_sq, s0, smp.t);
                const auto l = solve_t0_leading(env.lambda, tau_sq, s0, smp.t);
                row.insert(row.end(), {e.mean_n, e.mean_n2, l.mean_n, l.mean_n2});
            }
            if (format == OutputFormat::Json) {
                os << (k ? ",\n    " : "\n    ") << json_array(row);
            } else {
                write_csv_row(os, row);
            }
        }
        if (format == OutputFormat::Json) os << "\n  ]\n}\n";
    });
    return kExitOk;
}

// --- fig1 ------------------------------------------------------------------

inline constexpr std::array<std::string_view, 7> kFig1Columns = {
    "t", "qreal_N", "qphase_N", "undeformed_N", "qreal_N2", "qphase_N2", "undeformed_N2"};

// Rows of the figure: lambda = 1 so t is the dimensionless lambda t.
inline std::vector<std::array<double, 7>> fig1_rows(const Fig1Options& opt) {
    if (opt.points < 2) {
        throw ConfigError("fig1 needs at least two grid points");
    }
    std::vector<std::array<double, 7>> rows;
    rows.reserve(static_cast<std::size_t>(opt.points));
    for (int k = 0; k < opt.points; ++k) {
        const double t = opt.lambda_t_max * k / (opt.points - 1);
        const auto real = solve_t0_leading(1.0, opt.tau_sq, opt.s0, t);
        const auto phase = solve_t0_leading(1.0, -opt.tau_sq, opt.s0, t);
        const auto plain = solve_t0_leading(1.0, 0.0, opt.s0, t);
        rows.push_back({t, real.mean_n, phase.mean_n, plain.mean_n, real.mean_n2, phase.mean_n2,
                        plain.mean_n2});
    }
    return rows;
}

inline int cmd_fig1(const Fig1Options& opt, const RunContext& ctx, std::ostream& out) {
    const auto rows = fig1_rows(opt);
    const auto format = detail::resolve_format(ctx, OutputFormat::Csv);
    detail::with_output(ctx, std::nullopt, out, [&](std::ostream& os) {
        if (format == OutputFormat::Csv) {
            write_csv_header(os, kFig1Columns);
            for (const auto& r : rows) write_csv_row(os, r);
            return;
        }
        os << "{\n  \"tau_sq\": " << json_double(opt.tau_sq) << ",\n  \"columns\": [";
        for (std::size_t c = 0; c < kFig1Columns.size(); ++c) os << (c ? ", " : "") << json_string(kFig1Columns[c]);
        os << "],\n  \"rows\": [";
        for (std::size_t k = 0; k < rows.size(); ++k) os << (k ? ",\n    " : "\n    ") << json_array(rows[k]);
        os << "\n  ]\n}\n";
    });
    return kExitOk;
}

// --- steady ----------------------------------------------------------------

struct SteadyReport {
    double ratio = 0.0;
    double p0_infinite = 0.0;
    PopulationVector populations;
    double detailed_balance_residual = 0.0;
    std::optional<double> boltzmann_match;  // thermal configs only
};

inline SteadyReport steady_report(const SimConfig& cfg) {
    SteadyReport rep;
    const auto& env = cfg.environment;
    rep.ratio = steady_ratio(env);
    rep.p0_infinite = infinite_range_p0(env);
    rep.populations = steady_state(cfg.deformation, env, cfg.fock_dim);
    // per-link form; the rate-weighted one picks up deformation-dependent rounding
    rep.detailed_balance_residual = detailed_balance_link_residual(env, rep.populations);
    if (env.coth_factor) {
        PopulationVector reference(rep.populations.size(), 0.0);
        if (*env.coth_factor == 1.0) {
            reference[0] = 1.0;
        } else {
            reference = boltzmann_distribution(theta_from_coth(*env.coth_factor), cfg.fock_dim);
        }
        double worst = 0.0;
        for (std::size_t n = 0; n < reference.size(); ++n) {
            worst = std::max(worst, std::abs(rep.populations[n] - reference[n]));
        }
        rep.boltzmann_match = worst;
    }
    return rep;
}

inline int cmd_steady(const json& j, const RunContext& ctx, std::ostream& out) {
    const auto cfg = parse_config(j);
    const auto rep = steady_report(cfg);
    detail::with_output(ctx, cfg.output_path, out, [&](std::ostream& os) {
        os << "{\n  \"ratio\": " << json_double(rep.ratio) << ",\n  \"p0_infinite\": "
           << json_double(rep.p0_infinite) << ",\n  \"populations\": " << json_array(rep.populations)
           << ",\n  \"detailed_balance_residual\": " << json_double(rep.detailed_balance_residual)
           << ",\n  \"boltzmann_match\": "
           << (rep.boltzmann_match ? json_double(*rep.boltzmann_match) : std::string("null")) << "\n}\n";
    });
    return kExitOk;
}

// --- crosscheck ------------------------------------------------------------

struct CheckResult {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool skipped = false;
    std::string note;
    bool passed() const { return skipped || deviation < tolerance; }
};

// Max relative deviation of <N(t)> between the ODE and the leading-order
// solution, lambda t in [0, lambda_t_max], dt = 1e-3 / lambda.
inline double ode_vs_leading_deviation(const DeformationSpec& spec, int dim, double lambda,
                                       const DensityMatrix& rho0, double lambda_t_max = 1.0,
                                       std::vector<std::pair<double, double>>* trace = nullptr) {
    const DeformedLiouvillian liouvillian(spec, dim, thermal(1.0, lambda, ZeroTemperature{}));
    IntegrateOptions options;
    options.sample_every = 10;
    const auto traj = integrate(liouvillian, rho0, lambda_t_max / lambda, 1e-3 / lambda, options);
    const MomentState s0 = moments_of(rho0);
    double worst = 0.0;
    for (const auto& r : traj.records) {
        const auto lead = solve_t0_leading(lambda, spec.signed_tau_sq(), s0, r.t);
        const double dev = std::abs(r.mean_n - lead.mean_n) / std::abs(lead.mean_n);
        worst = std::max(worst, dev);
        if (trace) trace->emplace_back(lambda * r.t, dev);
    }
    return worst;
}

inline std::vector<CheckResult> crosscheck(const SimConfig& cfg, std::uint64_t seed) {
    if (cfg.fock_dim > kCrosscheckMaxDim) {
        throw DimensionTooLarge("crosscheck needs fock_dim <= " + std::to_string(kCrosscheckMaxDim));
    }
    const int dim = cfg.fock_dim;
    const DeformedLiouvillian liouvillian(cfg.deformation, dim, cfg.environment);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    // random state supported on levels 0..support-1
    const auto random_state = [&](int support) {
        CMatrix x = CMatrix::Zero(dim, dim);
        for (int r = 0; r < support; ++r)
            for (int c = 0; c < support; ++c) x(r, c) = Complex(g(rng), g(rng));
        CMatrix rho = x * x.adjoint();
        rho /= rho.trace().real();
        return DensityMatrix(0.5 * (rho + rho.adjoint()));
    };

    std::vector<CheckResult> results;

    CheckResult gen{"generator operator form vs number representation", 0.0, kGeneratorEquivalenceTol};
    for (int k = 0; k < 20; ++k) {
        const auto rho = random_state(dim);
        gen.deviation = std::max(
            gen.deviation,
            (liouvillian.apply(rho) - liouvillian.apply_number_rep(rho)).cwiseAbs().maxCoeff());
    }
    results.push_back(gen);

    CheckResult mom{"Tr[N L(rho)], Tr[N^2 L(rho)] vs moment equations", 0.0, kMomentConsistencyTol};
    if (!cfg.environment.is_thermal_form()) {
        mom.skipped = true;
        mom.note = "needs D1 = 0";
    } else {
        // top level empty: the truncated generator leaks there
        for (int k = 0; k < 20; ++k) {
            mom.deviation =
                std::max(mom.deviation, moment_consistency_check(liouvillian, random_state(dim - 1)).max_deviation());
        }
    }
    results.push_back(mom);

    CheckResult lead{"ODE <N> vs leading-order analytics, lambda t <= 1", 0.0, kLeadingOrderRegressionBound};
    const auto kind = cfg.deformation.kind;
    const bool q_kind = kind == DeformationKind::QReal || kind == DeformationKind::QPhase ||
                        kind == DeformationKind::QTaylor;
    if (!q_kind || !cfg.environment.is_zero_temperature() || !cfg.environment.is_thermal_form()) {
        lead.skipped = true;
        lead.note = "needs a q-deformation at T = 0";
    } else if (std::abs(cfg.deformation.signed_tau_sq()) > 0.2) {
        lead.skipped = true;
        lead.note = "bound calibrated for |tau^2| <= 0.2";
    } else {
        lead.deviation = ode_vs_leading_deviation(cfg.deformation, dim, cfg.environment.lambda,
                                                  initial_state(cfg));
    }
    results.push_back(lead);
    return results;
}

inline int cmd_crosscheck(const json& j, const RunContext& ctx, std::ostream& out) {
    const auto cfg = parse_config(j);
    const auto results = crosscheck(cfg, ctx.seed);
    bool ok = true;
    detail::with_output(ctx, std::nullopt, out, [&](std::ostream& os) {
        for (const auto& r : results) {
            ok = ok && r.passed();
            os << (r.skipped ? "skip" : detail::pass_fail(r.passed())) << "  " << r.name;
            if (r.skipped) {
                os << "  (" << r.note << ")\n";
            } else {
                os << "  deviation " << fmt_double(r.deviation) << " < " << fmt_double(r.tolerance) << '\n';
            }
        }
    });
    return ok ? kExitOk : kExitPhysics;
}

// --- dispatch --------------------------------------------------------------

using ConfigCommand = int (*)(const json&, const RunContext&, std::ostream&);

// Maps exceptions onto exit codes: physics failures 2, everything else 1.
inline int guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const PhysicsError& e) {
        err << "error: " << e.what() << '\n';
        return kExitPhysics;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

// Sets a dotted path ("environment.lambda") inside a config. Values that
// parse as JSON are stored as such, anything else as a string.
inline void set_dotted(json& j, std::string_view path, const std::string& value) {
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key(path.substr(start, dot - start));
        if (key.empty()) throw ConfigError("empty key in sweep path");
        if (dot == std::string_view::npos) {
            (*node)[key] = json::parse(value, nullptr, false).is_discarded() ? json(value) : json::parse(value);
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

struct Sweep {
    std::string path;
    std::vector<std::string> values;
};

inline Sweep parse_sweep(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
        throw ConfigError("--sweep expects key=v1,v2,...");
    }
    Sweep s{spec.substr(0, eq), {}};
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) s.values.push_back(item);
    }
    if (s.values.empty()) throw ConfigError("--sweep needs at least one value");
    return s;
}

// out.csv + (lambda, 0.2) -> out.lambda=0.2.csv
inline std::string sweep_output_path(const std::string& base, const std::string& key, const std::string& value) {
    const auto leaf = key.substr(key.rfind('.') == std::string::npos ? 0 : key.rfind('.') + 1);
    const auto slash = base.find_last_of('/');
    const auto dot = base.rfind('.');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    const std::string stem = has_ext ? base.substr(0, dot) : base;
    const std::string ext = has_ext ? base.substr(dot) : "";
    return stem + "." + leaf + "=" + value + ext;
}

// Runs one config command per sweep value concurrently; each task writes its
// own file. Returns the worst exit code.
inline int run_sweep(ConfigCommand command, const json& base, const RunContext& ctx, const Sweep& sweep,
                     std::ostream& err) {
    if (!ctx.out) {
        throw ConfigError("--sweep requires --out so each run gets its own file");
    }
    struct Outcome {
        int code = 0;
        std::string messages;
    };
    std::vector<std::future<Outcome>> tasks;
    for (const auto& value : sweep.values) {
        tasks.push_back(std::async(std::launch::async, [&, value] {
            Outcome result;
            std::ostringstream local_err;
            result.code = guarded(
                [&] {
                    json cfg = base;
                    set_dotted(cfg, sweep.path, value);
                    RunContext task_ctx = ctx;
                    task_ctx.out = sweep_output_path(*ctx.out, sweep.path, value);
                    if (ctx.final_state) {
                        task_ctx.final_state = sweep_output_path(*ctx.final_state, sweep.path, value);
                    }
                    std::ostringstream sink;
                    return command(cfg, task_ctx, sink);
                },
                local_err);
            if (!local_err.str().empty()) result.messages = sweep.path + "=" + value + ": " + local_err.str();
            return result;
        }));
    }
    int worst = kExitOk;
    for (auto& t : tasks) {
        const auto o = t.get();
        err << o.messages;
        worst = std::max(worst, o.code);
    }
    return worst;
}

}  // namespace dlindblad::cli
