#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "heavenly/geometry.hpp"
#include "heavenly/residuals.hpp"
#include "heavenly/rng.hpp"

namespace heavenly {

enum class Check {
    linear,             // six-equation residuals of w
    veq,                // transformed Monge-Ampère residual of v
    polynom,            // degree-6 polynomial identity and homogeneity (cubic only)
    metric,             // metric assembly hygiene: reality, symmetry, nondegeneracy
    ricci,              // Ricci-flatness with nontrivial Riemann curvature
    signature,          // empirical eigenvalue-sign map (report only)
    noninvariance,      // necessary noninvariance indicators
    legendre_roundtrip, // closed-form v against w + rho r, v_rho = r, implicit engine
};

const char* check_name(Check);
Check check_from_name(const std::string&); // throws std::invalid_argument
std::vector<Check> parse_checks(const std::string& comma_separated);

enum class BranchMode { plus, minus, both };

struct Interval {
    double lo = -2.0, hi = 2.0;
};

/// Full description of one verification run. Deterministic given (config, seed).
struct SweepConfig {
    Family family = Family::cubic;
    FamilyParams params{};
    /// Weighted members of a superposition (used when family == superposition).
    std::vector<std::pair<double, FamilyParams>> superposition;
    /// Sampling box for (Re p, Im p, Re z, Im z, ρ); the fifth interval also
    /// provides r when sampling w-space directly (linear check).
    std::array<Interval, 5> domain{};
    long samples = 1000;
    std::uint64_t seed = 1;
    BranchMode branch = BranchMode::both;
    std::vector<Check> checks{Check::linear};
    /// Per-check relative tolerance overrides, keyed by check_name().
    std::map<std::string, double> tolerances;
    /// Verification control: adds perturb_p4 * p^4 to w, which breaks exactly
    /// one linear equation; only valid together with checks = {linear}.
    double perturb_p4 = 0.0;
};

/// One report line: worst-case result of one check on one branch.
struct CheckRecord {
    std::string check;
    std::string family;
    std::string branch; // "+", "-", or "all"
    std::uint64_t seed = 0;
    long samples_valid = 0;
    long samples_total = 0;
    double max_rel = 0;
    bool pass = false;
    std::array<double, 5> worst_point{};
    std::string note;
    std::vector<ResidualReport> equations;
    std::string to_json() const; // single-line JSON object
};

struct SweepResult {
    std::vector<CheckRecord> records; // canonical order: sorted by (check, branch)
    int exit_code = 0;                // 0 pass, 1 failure, 3 no valid samples
};

/// Run every configured check. Throws std::invalid_argument on inconsistent
/// configuration (the CLI maps that to exit code 2).
SweepResult run_sweep(const SweepConfig&);

void write_records(const SweepResult&, std::ostream& out);   // one JSON object per line
void write_summary(const SweepResult&, std::ostream& err);   // human-readable

/// Records to `out`, summary to `err`; returns the exit code.
int run_sweep_cli(const SweepConfig&, std::ostream& out, std::ostream& err);

/// Rectangular grid over two of the five domain variables, the rest fixed.
struct TableSpec {
    int var_a = 0, var_b = 4;          // indices into (re_p, im_p, re_z, im_z, rho)
    int n_a = 10, n_b = 10;
    std::array<double, 5> fixed{};     // values of the non-grid variables
    Branch branch = Branch::plus;
};

extern const std::array<const char*, 5> kDomainVarNames;

/// Tab-separated v-table: coordinates, r, v, branch-existence value, validity
/// flag; '#' header lines document fixed values and family parameters.
int emit_solution_table(const SweepConfig&, const TableSpec&, std::ostream& out);

/// Canonical key=value listing; readable both by a human and by the CLI
/// config-file mechanism.
std::string format_config(const SweepConfig&);

const char* family_label(Family);

} // namespace heavenly
