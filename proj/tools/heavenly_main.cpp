// Command-line driver: configure a solution family, run verification sweeps,
// and emit machine-readable reports (JSON lines on stdout, summaries on
// stderr).
//
// Exit codes: 0 all checks pass, 1 check failure, 2 configuration error,
// 3 no valid samples.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "heavenly/sweep.hpp"

namespace {

using namespace heavenly;

struct CliOptions {
    std::string config_path;
    std::string family = "cubic";
    double A = 1, B = 0, C = 0, D = 0, alpha = 0, beta = 0;
    std::vector<std::string> terms; // superposition: weight:family:A:B:C:D:alpha:beta
    std::array<double, 10> box = {-2, 2, -2, 2, -2, 2, -2, 2, -2, 2};
    long samples = 1000;
    std::uint64_t seed = 1;
    std::string branch = "both";
    std::string checks = "linear,veq,polynom,metric,ricci,signature,noninvariance,"
                         "legendre-roundtrip";
    std::vector<std::string> tolerances; // check=value
    double perturb_p4 = 0.0;
    // table options
    std::string grid = "re_p,rho";
    int grid_a = 10, grid_b = 10;
    std::vector<std::string> fixed; // var=value
    std::string table_branch = "+";
};

/// CLI options that may also come from the key=value configuration file.
/// Command-line flags win over file values.
struct ConfigBinding {
    std::map<std::string, CLI::Option*> options;
    CliOptions* target = nullptr;

    void apply_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open config file: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            lineno += 1;
            const auto first = line.find_first_not_of(" \t");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            " is not key=value");
            const std::string key = line.substr(first, eq - first);
            const std::string value = line.substr(eq + 1);
            apply(key, value, lineno);
        }
    }

private:
    void apply(const std::string& key, const std::string& value, int lineno) {
        CliOptions& o = *target;
        const auto it = options.find(key);
        if (it == options.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key " + key);
        // repeatable keys accumulate; scalar keys defer to command-line flags
        if (key == "tol") {
            o.tolerances.push_back(value);
            return;
        }
        if (key == "term") {
            o.terms.push_back(value);
            return;
        }
        if (it->second->count() > 0) return; // flag given explicitly: flags win
        if (key == "family") o.family = value;
        else if (key == "A") o.A = parse_double(value, lineno);
        else if (key == "B") o.B = parse_double(value, lineno);
        else if (key == "C") o.C = parse_double(value, lineno);
        else if (key == "D") o.D = parse_double(value, lineno);
        else if (key == "alpha") o.alpha = parse_double(value, lineno);
        else if (key == "beta") o.beta = parse_double(value, lineno);
        else if (key == "samples") o.samples = static_cast<long>(parse_double(value, lineno));
        else if (key == "seed") o.seed = std::stoull(value);
        else if (key == "branch") o.branch = value;
        else if (key == "checks") o.checks = value;
        else if (key == "perturb_p4") o.perturb_p4 = parse_double(value, lineno);
        else if (key == "grid") o.grid = value;
        else if (key == "grid_a") o.grid_a = std::stoi(value);
        else if (key == "grid_b") o.grid_b = std::stoi(value);
        else if (key == "table_branch") o.table_branch = value;
        else {
            for (int j = 0; j < 5; ++j) {
                if (key == std::string(kDomainVarNames[j]) + "_min")
                    o.box[2 * j] = parse_double(value, lineno);
                else if (key == std::string(kDomainVarNames[j]) + "_max")
                    o.box[2 * j + 1] = parse_double(value, lineno);
            }
        }
    }

    static double parse_double(const std::string& value, int lineno) {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": bad number " + value);
        return x;
    }
};

int var_index(const std::string& name) {
    for (int j = 0; j < 5; ++j)
        if (name == kDomainVarNames[j]) return j;
    throw std::invalid_argument("unknown domain variable: " + name);
}

Family family_from_name(const std::string& name) {
    if (name == "cubic") return Family::cubic;
    if (name == "exponential") return Family::exponential;
    if (name == "superposition") return Family::superposition;
    throw std::invalid_argument("unknown family: " + name);
}

std::pair<double, FamilyParams> parse_term(const std::string& text) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ':')) parts.push_back(token);
    if (parts.size() != 8)
        throw std::invalid_argument("term format is weight:family:A:B:C:D:alpha:beta");
    FamilyParams fp;
    fp.family = family_from_name(parts[1]);
    if (fp.family == Family::superposition)
        throw std::invalid_argument("superposition terms must be cubic or exponential");
    fp.A = std::stod(parts[2]);
    fp.B = std::stod(parts[3]);
    fp.C = std::stod(parts[4]);
    fp.D = std::stod(parts[5]);
    fp.alpha = std::stod(parts[6]);
    fp.beta = std::stod(parts[7]);
    return {std::stod(parts[0]), fp};
}

SweepConfig build_config(const CliOptions& o) {
    SweepConfig cfg;
    cfg.family = family_from_name(o.family);
    cfg.params = {cfg.family, o.A, o.B, o.C, o.D, o.alpha, o.beta};
    for (const std::string& t : o.terms) cfg.superposition.push_back(parse_term(t));
    if (cfg.family == Family::superposition && cfg.superposition.empty())
        throw std::invalid_argument("superposition family needs at least one term");
    for (int j = 0; j < 5; ++j) cfg.domain[j] = {o.box[2 * j], o.box[2 * j + 1]};
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    if (o.branch == "plus" || o.branch == "+")
        cfg.branch = BranchMode::plus;
    else if (o.branch == "minus" || o.branch == "-")
        cfg.branch = BranchMode::minus;
    else if (o.branch == "both")
        cfg.branch = BranchMode::both;
    else
        throw std::invalid_argument("branch must be plus, minus or both");
    cfg.checks = parse_checks(o.checks);
    for (const std::string& t : o.tolerances) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("tolerance format is check=value");
        const std::string name = t.substr(0, eq);
        check_from_name(name); // validates
        cfg.tolerances[name] = std::stod(t.substr(eq + 1));
    }
    cfg.perturb_p4 = o.perturb_p4;
    return cfg;
}

ConfigBinding add_common_options(CLI::App* cmd, CliOptions& o) {
    ConfigBinding bind;
    bind.target = &o;
    auto& m = bind.options;
    cmd->add_option("--config", o.config_path, "key=value configuration file (flags win)");
    m["family"] = cmd->add_option("--family", o.family,
                                  "solution family: cubic, exponential, superposition")
                      ->capture_default_str();
    m["A"] = cmd->add_option("--A", o.A, "amplitude A (alpha mode)")->capture_default_str();
    m["B"] = cmd->add_option("--B", o.B, "amplitude B (beta mode)")->capture_default_str();
    m["C"] = cmd->add_option("--C", o.C, "amplitude C (alpha mode)")->capture_default_str();
    m["D"] = cmd->add_option("--D", o.D, "amplitude D (beta mode)")->capture_default_str();
    m["alpha"] = cmd->add_option("--alpha", o.alpha, "spectral parameter of the first mode")
                     ->capture_default_str();
    m["beta"] = cmd->add_option("--beta", o.beta, "spectral parameter of the second mode")
                    ->capture_default_str();
    m["term"] = cmd->add_option(
        "--term", o.terms, "superposition member, weight:family:A:B:C:D:alpha:beta (repeatable)");
    const char* flag_names[10] = {"--re-p-min", "--re-p-max", "--im-p-min", "--im-p-max",
                                  "--re-z-min", "--re-z-max", "--im-z-min", "--im-z-max",
                                  "--rho-min",  "--rho-max"};
    const char* key_names[10] = {"re_p_min", "re_p_max", "im_p_min", "im_p_max", "re_z_min",
                                 "re_z_max", "im_z_min", "im_z_max", "rho_min",  "rho_max"};
    for (int i = 0; i < 10; ++i)
        m[key_names[i]] =
            cmd->add_option(flag_names[i], o.box[i], "sampling box bound")->capture_default_str();
    m["samples"] =
        cmd->add_option("--samples", o.samples, "number of sample points")->capture_default_str();
    m["seed"] = cmd->add_option("--seed", o.seed, "RNG seed (reports are reproducible per seed)")
                    ->capture_default_str();
    m["branch"] = cmd->add_option("--branch", o.branch, "root branch: plus, minus, both")
                      ->capture_default_str();
    m["checks"] =
        cmd->add_option("--checks", o.checks, "comma-separated check list")->capture_default_str();
    m["tol"] = cmd->add_option("--tol", o.tolerances,
                               "relative tolerance override, check=value (repeatable)");
    m["perturb_p4"] = cmd->add_option("--perturb-p4", o.perturb_p4,
                                      "verification control: add eps * p^4 to w (linear check only)")
                          ->capture_default_str();
    return bind;
}

void add_table_options(CLI::App* table, CliOptions& o, ConfigBinding& bind) {
    auto& m = bind.options;
    m["grid"] = table->add_option("--grid", o.grid, "two grid variables, e.g. re_p,rho")
                    ->capture_default_str();
    m["grid_a"] = table->add_option("--grid-a", o.grid_a, "grid size along the first variable")
                      ->capture_default_str();
    m["grid_b"] = table->add_option("--grid-b", o.grid_b, "grid size along the second variable")
                      ->capture_default_str();
    table->add_option("--fix", o.fixed, "fixed value for a non-grid variable, var=value");
    m["table_branch"] =
        table->add_option("--table-branch", o.table_branch, "branch for the table: + or -")
            ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification harness for Legendre-transformed Ricci-flat metrics"};
    app.require_subcommand(1);

    CliOptions vo, to, so;
    CLI::App* verify = app.add_subcommand("verify", "run verification sweeps");
    ConfigBinding vbind = add_common_options(verify, vo);

    CLI::App* table = app.add_subcommand("table", "tabulate the reconstructed potential");
    ConfigBinding tbind = add_common_options(table, to);
    add_table_options(table, to, tbind);

    CLI::App* show = app.add_subcommand("show-config", "echo the effective configuration");
    ConfigBinding sbind = add_common_options(show, so);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) {
            if (!vo.config_path.empty()) vbind.apply_file(vo.config_path);
            return heavenly::run_sweep_cli(build_config(vo), std::cout, std::cerr);
        }
        if (table->parsed()) {
            if (!to.config_path.empty()) tbind.apply_file(to.config_path);
            const heavenly::SweepConfig cfg = build_config(to);
            heavenly::TableSpec spec;
            const auto comma = to.grid.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("--grid needs two variables, e.g. re_p,rho");
            spec.var_a = var_index(to.grid.substr(0, comma));
            spec.var_b = var_index(to.grid.substr(comma + 1));
            spec.n_a = to.grid_a;
            spec.n_b = to.grid_b;
            for (const std::string& f : to.fixed) {
                const auto eq = f.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--fix format is var=value");
                spec.fixed[static_cast<std::size_t>(var_index(f.substr(0, eq)))] =
                    std::stod(f.substr(eq + 1));
            }
            if (to.table_branch == "+" || to.table_branch == "plus")
                spec.branch = heavenly::Branch::plus;
            else if (to.table_branch == "-" || to.table_branch == "minus")
                spec.branch = heavenly::Branch::minus;
            else
                throw std::invalid_argument("--table-branch must be + or -");
            return heavenly::emit_solution_table(cfg, spec, std::cout);
        }
        if (show->parsed()) {
            if (!so.config_path.empty()) sbind.apply_file(so.config_path);
            std::cout << heavenly::format_config(build_config(so));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
