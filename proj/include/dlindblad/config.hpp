#pragma once

// JSON simulator configuration.
//
// {
//   "environment":  {"omega": 1, "lambda": 0.1, "temperature": "zero" | {"theta": t} | {"coth": c}}
//                 | {"omega": 1, "lambda": 0.1, "D_qq": .., "D_pp": .., "D_pq": ..}
//                 | {"omega": 1, "couplings": [[re_a, im_a, re_b, im_b], ...]},
//   "deformation":  {"kind": "none"|"q-real"|"q-phase"|"q-taylor"|"table", "tau": t, "table": [..]},
//   "fock_dim": 16,
//   "initial_state": {"fock": n} | {"thermal": theta} | {"populations": [..]}
//                  | {"matrix": [[[re, im], ...], ...]},
//   "t_final": 10, "dt": 0.01, "sample_every": 10,
//   "positivity_tol": 1e-8, "leakage_tol": 1e-8,
//   "output": {"path": "traj.csv", "format": "csv" | "json"}
// }

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dlindblad/deformation.hpp"
#include "dlindblad/density_matrix.hpp"
#include "dlindblad/environment.hpp"
#include "dlindblad/errors.hpp"

namespace dlindblad {

using json = nlohmann::json;

enum class OutputFormat { Csv, Json };

struct SimConfig {
    EnvironmentCoefficients environment;
    DeformationSpec deformation;
    int fock_dim = 16;
    json initial_state = json{{"fock", 0}};
    double t_final = 0.0;
    std::optional<double> dt;  // default derived from the environment
    int sample_every = 1;
    double positivity_tol = 1e-8;
    double leakage_tol = 1e-8;
    std::optional<std::string> output_path;
    OutputFormat output_format = OutputFormat::Csv;
};

namespace detail {

inline double number(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw ConfigError(std::string("missing key \"") + key + "\"");
    }
    if (!j.at(key).is_number()) {
        throw ConfigError(std::string("key \"") + key + "\" must be a number");
    }
    return j.at(key).get<double>();
}

}  // namespace detail

// With check = false the coefficients are derived but not validated, so
// that constraint margins can be reported for inadmissible inputs.
inline EnvironmentCoefficients parse_environment(const json& j, bool check = true) {
    if (!j.is_object()) {
        throw ConfigError("\"environment\" must be an object");
    }
    const double omega = detail::number(j, "omega");
    const int forms = static_cast<int>(j.contains("temperature")) + static_cast<int>(j.contains("D_qq")) +
                      static_cast<int>(j.contains("couplings"));
    if (forms != 1) {
        throw ConfigError("environment needs exactly one of \"temperature\", \"D_qq\"/\"D_pp\"/\"D_pq\" "
                          "or \"couplings\"");
    }
    if (j.contains("temperature")) {
        const double lambda = detail::number(j, "lambda");
        const json& t = j.at("temperature");
        Temperature temperature;
        if (t.is_string() && t.get<std::string>() == "zero") {
            temperature = ZeroTemperature{};
        } else if (t.is_object() && t.contains("theta")) {
            temperature = Theta{detail::number(t, "theta")};
        } else if (t.is_object() && t.contains("coth")) {
            temperature = CothFactor{detail::number(t, "coth")};
        } else {
            throw ConfigError("\"temperature\" must be \"zero\", {\"theta\": x} or {\"coth\": x}");
        }
        return check ? thermal(omega, lambda, temperature)
                     : thermal_unchecked(omega, lambda, coth_of(temperature));
    }
    if (j.contains("D_qq")) {
        const double lambda = detail::number(j, "lambda");
        const double dqq = detail::number(j, "D_qq");
        const double dpp = detail::number(j, "D_pp");
        const double dpq = detail::number(j, "D_pq");
        return check ? from_diffusion(omega, lambda, dqq, dpp, dpq)
                     : coefficients_unchecked(omega, lambda, dqq, dpp, dpq);
    }
    const json& list = j.at("couplings");
    if (!list.is_array()) {
        throw ConfigError("\"couplings\" must be an array of [re_a, im_a, re_b, im_b]");
    }
    std::vector<Coupling> pairs;
    for (const auto& row : list) {
        if (!row.is_array() || row.size() != 4) {
            throw ConfigError("each coupling must be [re_a, im_a, re_b, im_b]");
        }
        pairs.push_back({{row[0].get<double>(), row[1].get<double>()},
                         {row[2].get<double>(), row[3].get<double>()}});
    }
    return check ? from_environment_couplings(omega, pairs) : couplings_unchecked(omega, pairs);
}

inline DeformationSpec parse_deformation(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw ConfigError("\"deformation\" must be an object with a string \"kind\"");
    }
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "none") {
        return DeformationSpec::identity();
    }
    if (kind == "table") {
        if (!j.contains("table") || !j.at("table").is_array()) {
            throw ConfigError("table deformation needs a \"table\" array");
        }
        return DeformationSpec::from_table(j.at("table").get<std::vector<double>>());
    }
    const double tau = detail::number(j, "tau");
    if (kind == "q-real") return DeformationSpec::q_real(tau);
    if (kind == "q-phase") return DeformationSpec::q_phase(tau);
    if (kind == "q-taylor") return DeformationSpec::q_taylor(tau);
    throw ConfigError("unknown deformation kind \"" + kind + "\"");
}

inline SimConfig parse_config(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    SimConfig cfg;
    if (!j.contains("environment")) {
        throw ConfigError("missing \"environment\" block");
    }
    cfg.environment = parse_environment(j.at("environment"));
    cfg.deformation = j.contains("deformation") ? parse_deformation(j.at("deformation"))
                                                : DeformationSpec::identity();
    if (j.contains("fock_dim")) {
        if (!j.at("fock_dim").is_number_integer()) {
            throw ConfigError("\"fock_dim\" must be an integer");
        }
        cfg.fock_dim = j.at("fock_dim").get<int>();
    }
    if (cfg.fock_dim < 2) {
        throw ConfigError("\"fock_dim\" must be at least 2");
    }
    validate(cfg.deformation, cfg.fock_dim);
    if (j.contains("initial_state")) cfg.initial_state = j.at("initial_state");
    if (j.contains("t_final")) cfg.t_final = detail::number(j, "t_final");
    if (cfg.t_final < 0.0) {
        throw ConfigError("\"t_final\" must be nonnegative");
    }
    if (j.contains("dt")) cfg.dt = detail::number(j, "dt");
    if (j.contains("sample_every")) cfg.sample_every = j.at("sample_every").get<int>();
    if (cfg.sample_every < 1) {
        throw ConfigError("\"sample_every\" must be a positive integer");
    }
    if (j.contains("positivity_tol")) cfg.positivity_tol = detail::number(j, "positivity_tol");
    if (j.contains("leakage_tol")) cfg.leakage_tol = detail::number(j, "leakage_tol");
    if (j.contains("output")) {
        const json& out = j.at("output");
        if (out.contains("path")) cfg.output_path = out.at("path").get<std::string>();
        if (out.contains("format")) {
            const auto f = out.at("format").get<std::string>();
            if (f == "csv") cfg.output_format = OutputFormat::Csv;
            else if (f == "json") cfg.output_format = OutputFormat::Json;
            else throw ConfigError("output format must be \"csv\" or \"json\"");
        }
    }
    return cfg;
}

inline DensityMatrix initial_state(const SimConfig& cfg) {
    const json& s = cfg.initial_state;
    const int d = cfg.fock_dim;
    if (!s.is_object() || s.size() != 1) {
        throw ConfigError("\"initial_state\" must hold exactly one of fock/thermal/populations/matrix");
    }
    if (s.contains("fock")) {
        return DensityMatrix::fock(d, s.at("fock").get<int>());
    }
    if (s.contains("thermal")) {
        const double theta = s.at("thermal").get<double>();
        if (!(theta > 0.0)) throw ConfigError("thermal initial state needs theta > 0");
        return DensityMatrix::gibbs(d, 1.0 / std::tanh(theta));
    }
    if (s.contains("populations")) {
        auto p = s.at("populations").get<std::vector<double>>();
        if (static_cast<int>(p.size()) > d) {
            throw ConfigError("more initial populations than Fock levels");
        }
        p.resize(static_cast<std::size_t>(d), 0.0);
        return DensityMatrix::diagonal(p);
    }
    if (s.contains("matrix")) {
        const json& rows = s.at("matrix");
        if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
            throw ConfigError("initial matrix must have fock_dim rows");
        }
        CMatrix rho(d, d);
        for (int m = 0; m < d; ++m) {
            if (!rows[m].is_array() || static_cast<int>(rows[m].size()) != d) {
                throw ConfigError("initial matrix must have fock_dim columns");
            }
            for (int n = 0; n < d; ++n) {
                const json& z = rows[m][n];
                if (!z.is_array() || z.size() != 2) {
                    throw ConfigError("matrix entries must be [re, im] pairs");
                }
                rho(m, n) = Complex(z[0].get<double>(), z[1].get<double>());
            }
        }
        return DensityMatrix(std::move(rho));
    }
    throw ConfigError("unknown initial_state form");
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace dlindblad
