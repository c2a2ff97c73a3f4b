// octo: verification suites and computations over octonionic MA operators.
//
//   octo verify <suite> [--seed N] [--samples N] [--out FILE] [--config FILE] [--tol KEY=VALUE]...
//   octo compute capacity|lelong|perron [options] [--csv FILE]
//
// Output is JSON lines.  The first line holds only the timestamp; every
// other line is a deterministic function of the configuration.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "octo/octo.hpp"

namespace {

using octo::json;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct RunConfig {
    std::uint64_t seed = 1;
    std::size_t samples = octo::kDefaultSamples;
    std::string suite;
    std::string out;  // empty: stdout
    std::map<std::string, double> tol;

    [[nodiscard]] json to_json() const {
        json t = json::object();
        for (const auto& [k, v] : tol) t[k] = v;
        return {{"seed", seed}, {"samples", samples}, {"suite", suite}, {"out", out}, {"tolerances", t}};
    }
    [[nodiscard]] octo::SuiteConfig suite_config() const { return {seed, samples, tol}; }
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::pair<std::string, double> parse_tol(const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--tol", "expected KEY=VALUE, got '" + kv + "'");
    try {
        return {trim(kv.substr(0, eq)), std::stod(kv.substr(eq + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--tol", "not a number in '" + kv + "'");
    }
}

/// key=value lines; '#' starts a comment.
void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        try {
            if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "samples") cfg.samples = std::stoull(val);
            else if (key == "suite") cfg.suite = val;
            else if (key == "out") cfg.out = val;
            else if (key.rfind("tol.", 0) == 0) cfg.tol[key.substr(4)] = std::stod(val);
            else throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": bad value '" + val + "'");
        }
    }
}

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw octo::DomainError("cli", "cannot write '" + path + "'");
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
        out << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) v.push_back(std::stod(item));
    }
    return v;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw octo::DomainError("cli", "cannot write '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void line(const json& j) { stream() << j.dump() << '\n'; }

private:
    std::ofstream file_;
};

std::string num(double v) { return octo::fmt::num(v); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification suites and computations for octonionic Monge-Ampere operators"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::optional<std::uint64_t> flag_seed;
    std::optional<std::size_t> flag_samples;
    std::optional<std::string> flag_out;
    std::vector<std::string> tol_flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", flag_seed, "Base seed (env OCTO_SEED; default 1)");
        sub->add_option("--samples", flag_samples, "Quadrature samples per integral (default 200000)")
            ->check(CLI::Range(std::size_t(octo::kMinSamples), std::size_t(1) << 40));
        sub->add_option("--out", flag_out, "Write JSON lines here instead of stdout");
        sub->add_option("--config", config_path, "key=value file (seed, samples, suite, out, tol.KEY)");
        sub->add_option("--tol", tol_flags, "Tolerance override KEY=VALUE");
    };

    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite_arg;
    verify->add_option("suite,--suite", suite_arg,
                       "algebra|hermitian|jets|geometry|ibp|comparison|lelong|capacity|perron|all");
    add_common(verify);

    auto* compute = app.add_subcommand("compute", "Run a computation");
    compute->require_subcommand(1);
    std::string csv_path;

    auto* cap = compute->add_subcommand("capacity", "Capacity of a ball condenser");
    double cap_r = 0.5, cap_R = 1.0;
    std::string cap_center = "origin", cap_deltas = "0.04,0.02,0.01";
    cap->add_option("--r", cap_r, "Inner radius");
    cap->add_option("--R", cap_R, "Outer radius");
    cap->add_option("--center", cap_center, "Common centre (point syntax)");
    cap->add_option("--deltas", cap_deltas, "Comma-separated smoothing sweep");
    cap->add_option("--csv", csv_path, "CSV table: delta,mass,stderr");
    add_common(cap);

    auto* lel = compute->add_subcommand("lelong", "sigma(a,r)/r^8 table and Lelong number");
    std::string lel_field = "fundamental", lel_center = "origin", lel_at, lel_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1",
                lel_eps = "0.01,0.001,0.0001";
    lel->add_option("--field", lel_field, "'fundamental' (pole at --center) or a field expression");
    lel->add_option("--center", lel_center, "Pole of the fundamental solution");
    lel->add_option("--at", lel_at, "Point a of sigma(a, r) (default: --center)");
    lel->add_option("--r-grid", lel_grid, "Comma-separated radii");
    lel->add_option("--eps", lel_eps, "Smoothing family for the fundamental solution");
    lel->add_option("--csv", csv_path, "CSV table: r,sigma_over_r8,stderr,nondecreasing");
    add_common(lel);

    auto* per = compute->add_subcommand("perron", "Lower/upper bounds for the Perron-Bremermann envelope");
    std::string per_phi, per_at = "origin";
    std::optional<double> per_C;
    std::size_t per_M = 256;
    std::vector<std::string> per_minorants;
    per->add_option("--phi", per_phi, "Boundary datum (field expression)")->required();
    per->add_option("--at", per_at, "Evaluation point");
    per->add_option("--C", per_C, "Second-difference bound (default: twice the sampled bound)");
    per->add_option("--M", per_M, "Boundary barrier count")->check(CLI::Range(16, 1 << 20));
    per->add_option("--minorant", per_minorants, "Extra OPSH candidate (repeatable)");
    per->add_option("--csv", csv_path, "CSV table: x,lower,upper,stderr,gap");
    add_common(per);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (const char* env = std::getenv("OCTO_SEED")) {
            try {
                cfg.seed = std::stoull(env);
            } catch (const std::exception&) {
                std::cerr << "OCTO_SEED is not an integer: " << env << "\n";
                return kExitUsage;
            }
        }
        if (flag_seed) cfg.seed = *flag_seed;
        if (flag_samples) cfg.samples = *flag_samples;
        if (flag_out) cfg.out = *flag_out;
        for (const auto& t : tol_flags) cfg.tol.insert_or_assign(parse_tol(t).first, parse_tol(t).second);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    if (verify->parsed()) {
        if (!suite_arg.empty()) cfg.suite = suite_arg;
        if (!octo::is_suite(cfg.suite)) {
            std::cerr << "unknown suite '" << cfg.suite << "'\n" << verify->help();
            return kExitUsage;
        }
    }

    try {
        Output out(cfg.out);
        out.line({{"timestamp", timestamp()}});
        const json config = cfg.to_json();

        if (verify->parsed()) {
            const auto results = octo::run_suite(cfg.suite, cfg.suite_config());
            std::size_t failed = 0;
            for (const auto& r : results) {
                out.line(octo::to_json(r, config));
                failed += r.pass ? 0 : 1;
            }
            out.line({{"summary", {{"suite", cfg.suite}, {"checks", results.size()}, {"failed", failed}}}});
            return failed == 0 ? 0 : kExitFail;
        }

        const octo::SuiteConfig sc = cfg.suite_config();
        if (cap->parsed()) {
            octo::CondenserSpec c;
            c.a = octo::parse_point(cap_center);
            c.r = cap_r;
            c.R = cap_R;
            c.deltas = parse_list(cap_deltas);
            const auto rep = octo::capacity_ball(c, sc.spec("compute.capacity", octo::Method::QMC));
            json j = octo::capacity_json(rep);
            j["converged"] = rep.converged();
            j["residual_stderr"] = rep.residual_stderr;
            out.line({{"compute", "capacity"}, {"config", config}, {"report", j}});
            if (!csv_path.empty()) {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < rep.masses.size(); ++i)
                    rows.push_back({num(rep.condenser.deltas[i]), num(rep.masses[i].value), num(rep.masses[i].stderr_)});
                rows.push_back({"0", num(rep.capacity.value), num(rep.capacity.stderr_)});
                write_csv(csv_path, {"delta", "mass", "stderr"}, rows);
            }
            return 0;
        }
        if (lel->parsed()) {
            const octo::Point center = octo::parse_point(lel_center);
            const octo::Point at = lel_at.empty() ? center : octo::parse_point(lel_at);
            const auto grid = parse_list(lel_grid);
            const auto spec = sc.spec("compute.lelong");
            octo::LelongReport rep;
            if (lel_field == "fundamental") rep = octo::lelong_fundamental(center, at, grid, parse_list(lel_eps), spec);
            else rep = octo::lelong(at, octo::parse_field(lel_field), grid, spec);
            json j = {{"field", lel_field}, {"center", octo::fmt::point(center)}, {"at", octo::fmt::point(at)},
                      {"rows", octo::lelong_rows(rep)}, {"monotone", rep.monotone},
                      {"lelong", rep.lelong.value}, {"lelong_stderr", rep.lelong.stderr_}};
            if (!rep.eps_family.empty()) {
                j["eps"] = rep.eps_family;
                j["eps_fit_residual"] = rep.eps_fit_residual;
            }
            out.line({{"compute", "lelong"}, {"config", config}, {"report", j}});
            if (!csv_path.empty()) {
                std::vector<std::vector<std::string>> rows;
                for (std::size_t i = 0; i < rep.rows.size(); ++i) {
                    bool up = true;
                    if (i > 0) {
                        const auto d = rep.rows[i].sigma_over_r8 - rep.rows[i - 1].sigma_over_r8;
                        up = d.value >= -3 * d.stderr_;
                    }
                    rows.push_back({num(rep.rows[i].r), num(rep.rows[i].sigma_over_r8.value),
                                    num(rep.rows[i].sigma_over_r8.stderr_), up ? "1" : "0"});
                }
                write_csv(csv_path, {"r", "sigma_over_r8", "stderr", "nondecreasing"}, rows);
            }
            return 0;
        }
        if (per->parsed()) {
            octo::BoundaryData bd{octo::parse_field(per_phi), 0.0, {}, {}};
            if (per_C) {
                bd.C = *per_C;
            } else {
                bd.C = 2.0 * octo::validate_boundary({bd.phi, INFINITY, {}, {}}, sc.seed_for("compute.perron.C"))
                                 .sup_quotient;
            }
            for (const auto& m : per_minorants) bd.minorants.push_back(octo::parse_field(m));
            const auto env = octo::build_lower(bd, per_M, sc.seed_for("compute.perron"));
            const octo::Point x = octo::parse_point(per_at);
            octo::QuadratureSpec ws;
            ws.samples = octo::perron_walks(sc);
            ws.seed = sc.seed_for("compute.perron.upper");
            const auto v = octo::sandwich_eval(bd, env, x, ws);
            json j = {{"phi", bd.phi.text()}, {"C", bd.C}, {"M", per_M}, {"at", octo::fmt::point(x)},
                      {"lower", v.lower}, {"upper", v.upper.value}, {"stderr", v.upper.stderr_}, {"gap", v.gap},
                      {"ordered", v.ordered()}};
            out.line({{"compute", "perron"}, {"config", config}, {"report", j}});
            if (!csv_path.empty())
                write_csv(csv_path, {"x", "lower", "upper", "stderr", "gap"},
                          {{octo::fmt::point(x), num(v.lower), num(v.upper.value), num(v.upper.stderr_), num(v.gap)}});
            return v.ordered() ? 0 : kExitFail;
        }
    } catch (const octo::Error& e) {
        std::cerr << json({{"error", {{"code", e.code()}, {"message", e.what()}}}}).dump() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << json({{"error", {{"code", "cli.internal"}, {"message", e.what()}}}}).dump() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
