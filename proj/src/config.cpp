#include "nhqc/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nhqc/table.hpp"

namespace nhqc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_f64(const std::string& v, int line) {
    const std::string t = trim(v);
    if (t.empty()) throw ParseError("missing numeric value", line);
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE)
        throw ParseError("cannot parse '" + t + "' as a number", line);
    return x;
}

long parse_i64(const std::string& v, int line) {
    const std::string t = trim(v);
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ParseError("cannot parse '" + t + "' as an integer", line);
    return x;
}

std::uint64_t parse_u64(const std::string& v, int line) {
    const std::string t = trim(v);
    errno = 0;
    char* end = nullptr;
    const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE)
        throw ParseError("cannot parse '" + t + "' as an unsigned integer", line);
    return x;
}

bool parse_bool(const std::string& v, int line) {
    const std::string t = trim(v);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ParseError("cannot parse '" + t + "' as a boolean", line);
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(trim(v));
    while (std::getline(ss, item, ',')) out.push_back(parse_f64(item, line));
    if (out.empty()) throw ParseError("empty list value", line);
    return out;
}

Axis parse_axis(const std::string& v, int line) {
    const auto a = axis_from_name(trim(v));
    if (!a)
        throw ParseError("unknown axis '" + trim(v) +
                             "' (valid: ge, dtheta, lambda, sigma_z, omega_c)",
                         line);
    return *a;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({up + 1, row[j - 1] + 1,
                               diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

// Heuristic magnitude checks; MHz-scale inputs should not look like GHz or kHz.
void unit_sanity(RunConfig& cfg, const std::string& key, double v) {
    const bool is_freq = key.rfind("circuit.omega", 0) == 0;
    const bool is_rate = key.rfind("circuit.gamma", 0) == 0 ||
                         key.rfind("circuit.lambda", 0) == 0 ||
                         key.rfind("circuit.g_", 0) == 0;
    const bool is_phase = key.rfind("circuit.theta", 0) == 0;
    if (is_freq && v != 0.0 && (std::abs(v) < 50.0 || std::abs(v) > 5e4))
        cfg.warnings.push_back(key + " = " + format_double(v) +
                               " is far from the MHz scale expected here "
                               "(reference point is a few thousand MHz); "
                               "did you enter GHz or Hz?");
    if (is_rate && std::abs(v) > 2000.0)
        cfg.warnings.push_back(key + " = " + format_double(v) +
                               " is unusually large for a MHz-scale rate; "
                               "did you enter kHz?");
    if (is_phase && std::abs(v) > 8.0)
        cfg.warnings.push_back(key + " = " + format_double(v) +
                               " is far outside [-2pi, 2pi]; phases are radians");
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto num = [&t](const std::string& key, std::function<void(RunConfig&, double)> set) {
            t[key] = [key, set](RunConfig& c, const std::string& v, int line) {
                const double x = parse_f64(v, line);
                unit_sanity(c, key, x);
                set(c, x);
            };
        };
        num("circuit.omega_a", [](RunConfig& c, double x) { c.circuit.omega_a = x; });
        num("circuit.omega_q1", [](RunConfig& c, double x) { c.circuit.omega_q[0] = x; });
        num("circuit.omega_q2", [](RunConfig& c, double x) { c.circuit.omega_q[1] = x; });
        num("circuit.omega_c", [](RunConfig& c, double x) { c.circuit.omega_c = x; });
        num("circuit.gamma_q1", [](RunConfig& c, double x) { c.circuit.gamma_q[0] = x; });
        num("circuit.gamma_q2", [](RunConfig& c, double x) { c.circuit.gamma_q[1] = x; });
        num("circuit.gamma_a", [](RunConfig& c, double x) { c.circuit.gamma_a = x; });
        num("circuit.g_xy", [](RunConfig& c, double x) { c.circuit.g_xy = x; });
        num("circuit.g_qc1", [](RunConfig& c, double x) { c.circuit.g_qc[0] = x; });
        num("circuit.g_qc2", [](RunConfig& c, double x) { c.circuit.g_qc[1] = x; });
        num("circuit.lambda_q1", [](RunConfig& c, double x) { c.circuit.lambda_q[0] = x; });
        num("circuit.lambda_q2", [](RunConfig& c, double x) { c.circuit.lambda_q[1] = x; });
        num("circuit.theta_q1", [](RunConfig& c, double x) { c.circuit.theta_q[0] = x; });
        num("circuit.theta_q2", [](RunConfig& c, double x) { c.circuit.theta_q[1] = x; });
        num("circuit.sigma_z1", [](RunConfig& c, double x) { c.circuit.sigma_z[0] = x; });
        num("circuit.sigma_z2", [](RunConfig& c, double x) { c.circuit.sigma_z[1] = x; });
        num("model.ge_override", [](RunConfig& c, double x) { c.ge_override = x; });
        t["scan.axis1"] = [](RunConfig& c, const std::string& v, int line) {
            c.scan.axis1 = parse_axis(v, line);
        };
        t["scan.axis2"] = [](RunConfig& c, const std::string& v, int line) {
            c.scan.axis2 = parse_axis(v, line);
        };
        num("scan.a1_min", [](RunConfig& c, double x) { c.scan.a1_min = x; });
        num("scan.a1_max", [](RunConfig& c, double x) { c.scan.a1_max = x; });
        num("scan.a2_min", [](RunConfig& c, double x) { c.scan.a2_min = x; });
        num("scan.a2_max", [](RunConfig& c, double x) { c.scan.a2_max = x; });
        t["scan.n1"] = [](RunConfig& c, const std::string& v, int line) {
            c.scan.n1 = static_cast<int>(parse_i64(v, line));
        };
        t["scan.n2"] = [](RunConfig& c, const std::string& v, int line) {
            c.scan.n2 = static_cast<int>(parse_i64(v, line));
        };
        t["scan.a1_values"] = [](RunConfig& c, const std::string& v, int line) {
            c.scan.a1_values = parse_list(v, line);
        };
        t["scan.a2_values"] = [](RunConfig& c, const std::string& v, int line) {
            c.scan.a2_values = parse_list(v, line);
        };
        num("ep.tol_disc", [](RunConfig& c, double x) { c.ep.tol_disc = x; });
        t["ep.max_bisect"] = [](RunConfig& c, const std::string& v, int line) {
            c.ep.max_bisect = static_cast<int>(parse_i64(v, line));
        };
        num("evolve.sigma_z1_0", [](RunConfig& c, double x) { c.evolve.sigma_z0[0] = x; });
        num("evolve.sigma_z2_0", [](RunConfig& c, double x) { c.evolve.sigma_z0[1] = x; });
        num("evolve.t_max", [](RunConfig& c, double x) { c.evolve.t_max = x; });
        t["evolve.t_max_raw"] = [](RunConfig& c, const std::string& v, int line) {
            c.evolve.t_max_raw = parse_bool(v, line);
        };
        t["evolve.n_steps"] = [](RunConfig& c, const std::string& v, int line) {
            c.evolve.n_steps = static_cast<int>(parse_i64(v, line));
        };
        t["evolve.engine"] = [](RunConfig& c, const std::string& v, int line) {
            const auto e = engine_from_name(trim(v));
            if (!e)
                throw ParseError("unknown engine '" + trim(v) +
                                     "' (valid: exact, rk4, both)",
                                 line);
            c.evolve.engine = *e;
        };
        t["evolve.feedback"] = [](RunConfig& c, const std::string& v, int line) {
            const auto f = feedback_from_name(trim(v));
            if (!f)
                throw ParseError("unknown feedback mode '" + trim(v) +
                                     "' (valid: off, frozen, self_consistent)",
                                 line);
            c.evolve.feedback = *f;
        };
        t["oracle.gamma_a_schedule"] = [](RunConfig& c, const std::string& v, int line) {
            c.oracle.gamma_a_schedule = parse_list(v, line);
        };
        t["oracle.with_coupler"] = [](RunConfig& c, const std::string& v, int line) {
            c.oracle.with_coupler = parse_bool(v, line);
        };
        num("oracle.gamma_c", [](RunConfig& c, double x) { c.oracle.gamma_c = x; });
        t["output.path"] = [](RunConfig& c, const std::string& v, int) {
            c.output_path = trim(v);
        };
        t["output.format"] = [](RunConfig& c, const std::string& v, int line) {
            const std::string f = trim(v);
            if (f != "csv" && f != "json")
                throw ParseError("unknown format '" + f + "' (valid: csv, json)", line);
            c.format = f;
        };
        t["threads"] = [](RunConfig& c, const std::string& v, int line) {
            c.threads = static_cast<int>(parse_i64(v, line));
            if (c.threads < 1) throw ParseError("threads must be >= 1", line);
        };
        t["seed"] = [](RunConfig& c, const std::string& v, int line) {
            c.seed = parse_u64(v, line);
        };
        return t;
    }();
    return table;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) {
        std::string best;
        std::size_t best_d = static_cast<std::size_t>(-1);
        for (const auto& [k, _] : table) {
            const std::size_t d = levenshtein(key, k);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        throw UnknownKey(key, best, line);
    }
    it->second(cfg, value, line);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [key, _] : setters()) k.push_back(key);
        return k;
    }();
    return keys;
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string pre = hash == std::string::npos ? raw : raw.substr(0, hash);
        if (trim(pre).empty()) continue;
        const auto eq = pre.find('=');
        if (eq == std::string::npos || trim(pre.substr(0, eq)).empty())
            throw ParseError("expected 'key = value'", line_no,
                             static_cast<int>(pre.find_first_not_of(" \t")) + 1);
        set_key(base, trim(pre.substr(0, eq)), trim(pre.substr(eq + 1)), line_no);
    }
    return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), std::move(base));
}

void apply_override(RunConfig& cfg, const std::string& key_eq_value) {
    const auto eq = key_eq_value.find('=');
    if (eq == std::string::npos || trim(key_eq_value.substr(0, eq)).empty())
        throw ParseError("override must look like key=value, got '" + key_eq_value + "'");
    set_key(cfg, trim(key_eq_value.substr(0, eq)), trim(key_eq_value.substr(eq + 1)), 0);
}

AxisSpec resolved_axis1(const RunConfig& cfg) {
    if (!cfg.scan.a1_values.empty()) return {cfg.scan.axis1, cfg.scan.a1_values};
    return linspace_axis(cfg.scan.axis1, cfg.scan.a1_min, cfg.scan.a1_max, cfg.scan.n1);
}

AxisSpec resolved_axis2(const RunConfig& cfg) {
    if (!cfg.scan.a2_values.empty()) return {cfg.scan.axis2, cfg.scan.a2_values};
    return linspace_axis(cfg.scan.axis2, cfg.scan.a2_min, cfg.scan.a2_max, cfg.scan.n2);
}

std::vector<std::string> echo_config(const RunConfig& cfg) {
    std::vector<std::string> out;
    const auto num = [&](const std::string& k, double v) {
        out.push_back(k + " = " + format_double(v));
    };
    const auto str = [&](const std::string& k, const std::string& v) {
        out.push_back(k + " = " + v);
    };
    const auto list = [&](const std::string& k, const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += format_double(v[i]);
        }
        out.push_back(k + " = " + s);
    };
    const CircuitParams& c = cfg.circuit;
    num("circuit.omega_a", c.omega_a);
    num("circuit.omega_q1", c.omega_q[0]);
    num("circuit.omega_q2", c.omega_q[1]);
    num("circuit.omega_c", c.omega_c);
    num("circuit.gamma_q1", c.gamma_q[0]);
    num("circuit.gamma_q2", c.gamma_q[1]);
    num("circuit.gamma_a", c.gamma_a);
    num("circuit.g_xy", c.g_xy);
    num("circuit.g_qc1", c.g_qc[0]);
    num("circuit.g_qc2", c.g_qc[1]);
    num("circuit.lambda_q1", c.lambda_q[0]);
    num("circuit.lambda_q2", c.lambda_q[1]);
    num("circuit.theta_q1", c.theta_q[0]);
    num("circuit.theta_q2", c.theta_q[1]);
    num("circuit.sigma_z1", c.sigma_z[0]);
    num("circuit.sigma_z2", c.sigma_z[1]);
    str("model.ge_override",
        cfg.ge_override ? format_double(*cfg.ge_override) : std::string("none"));
    str("scan.axis1", axis_name(cfg.scan.axis1));
    num("scan.a1_min", cfg.scan.a1_min);
    num("scan.a1_max", cfg.scan.a1_max);
    num("scan.n1", cfg.scan.n1);
    if (!cfg.scan.a1_values.empty()) list("scan.a1_values", cfg.scan.a1_values);
    str("scan.axis2", axis_name(cfg.scan.axis2));
    num("scan.a2_min", cfg.scan.a2_min);
    num("scan.a2_max", cfg.scan.a2_max);
    num("scan.n2", cfg.scan.n2);
    if (!cfg.scan.a2_values.empty()) list("scan.a2_values", cfg.scan.a2_values);
    num("ep.tol_disc", cfg.ep.tol_disc);
    num("ep.max_bisect", cfg.ep.max_bisect);
    num("evolve.sigma_z1_0", cfg.evolve.sigma_z0[0]);
    num("evolve.sigma_z2_0", cfg.evolve.sigma_z0[1]);
    num("evolve.t_max", cfg.evolve.t_max);
    str("evolve.t_max_raw", cfg.evolve.t_max_raw ? "true" : "false");
    num("evolve.n_steps", cfg.evolve.n_steps);
    str("evolve.engine", engine_name(cfg.evolve.engine));
    str("evolve.feedback", feedback_name(cfg.evolve.feedback));
    list("oracle.gamma_a_schedule", cfg.oracle.gamma_a_schedule);
    str("oracle.with_coupler", cfg.oracle.with_coupler ? "true" : "false");
    num("oracle.gamma_c", cfg.oracle.gamma_c);
    str("output.format", cfg.format);
    num("threads", cfg.threads);
    out.push_back("seed = " + std::to_string(cfg.seed));
    return out;
}

}  // namespace nhqc
