#include "heavenly/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace heavenly {

const std::array<const char*, 5> kDomainVarNames = {"re_p", "im_p", "re_z", "im_z", "rho"};

const char* check_name(Check c) {
    switch (c) {
    case Check::linear: return "linear";
    case Check::veq: return "veq";
    case Check::polynom: return "polynom";
    case Check::metric: return "metric";
    case Check::ricci: return "ricci";
    case Check::signature: return "signature";
    case Check::noninvariance: return "noninvariance";
    case Check::legendre_roundtrip: return "legendre-roundtrip";
    }
    return "?";
}

Check check_from_name(const std::string& name) {
    static const std::array<Check, 8> all = {Check::linear,    Check::veq,
                                             Check::polynom,   Check::metric,
                                             Check::ricci,     Check::signature,
                                             Check::noninvariance, Check::legendre_roundtrip};
    for (Check c : all)
        if (name == check_name(c)) return c;
    throw std::invalid_argument("unknown check: " + name);
}

std::vector<Check> parse_checks(const std::string& list) {
    std::vector<Check> out;
    std::string token;
    std::istringstream is(list);
    while (std::getline(is, token, ',')) {
        if (!token.empty()) out.push_back(check_from_name(token));
    }
    if (out.empty()) throw std::invalid_argument("empty check list");
    return out;
}

const char* family_label(Family f) {
    switch (f) {
    case Family::cubic: return "cubic";
    case Family::exponential: return "exponential";
    case Family::superposition: return "superposition";
    }
    return "?";
}

namespace {

struct BranchCase {
    Branch branch = Branch::plus;
    const char* label = "+";
};

std::vector<BranchCase> branch_cases(BranchMode mode) {
    switch (mode) {
    case BranchMode::plus: return {{Branch::plus, "+"}};
    case BranchMode::minus: return {{Branch::minus, "-"}};
    case BranchMode::both: return {{Branch::plus, "+"}, {Branch::minus, "-"}};
    }
    return {};
}

struct SweepContext {
    const SweepConfig& config;
    std::vector<WeightedSolution> solutions; // one entry except for superposition
    CounterRng rng;

    bool single_family() const { return config.family != Family::superposition; }
    const SpectralSolution& solution() const { return solutions.front().solution; }

    std::array<double, 5> sample(long i) const {
        std::array<double, 5> x{};
        for (int j = 0; j < 5; ++j)
            x[j] = rng.uniform(static_cast<std::uint64_t>(i) * 8 + j, config.domain[j].lo,
                               config.domain[j].hi);
        return x;
    }

    Jet w_at(Complex p, Complex z, double r, int order) const {
        Jet w = superpose(solutions, PointJets::real_slice(p, z, r, order));
        if (config.perturb_p4 != 0.0) {
            w += config.perturb_p4 * pow(Jet::variable(kP, p, 5, order), 4);
        }
        return w;
    }

    /// Closed-form v jets for the two-mode families, implicit engine otherwise.
    VJet v_at(Complex p, Complex z, double rho, Branch branch, int order) const {
        if (config.family == Family::cubic)
            return cubic_v_jet(solution(), p, z, rho, branch, order);
        if (config.family == Family::exponential)
            return exp_v_jet(solution(), p, z, rho, branch, order);
        const ImplicitV iv = implicit_legendre(
            [this](Complex pp, Complex zz, double rr, int ord) { return w_at(pp, zz, rr, ord); },
            p, z, rho, 0.0, order);
        VJet out;
        out.v = iv.v_jet;
        out.r = iv.r;
        out.status = iv.status;
        return out;
    }
};

double check_tolerance(const SweepConfig& cfg, Check c, double fallback) {
    const auto it = cfg.tolerances.find(check_name(c));
    return it == cfg.tolerances.end() ? fallback : it->second;
}

CheckRecord make_record(const SweepContext& ctx, Check c, const char* branch_label) {
    CheckRecord rec;
    rec.check = check_name(c);
    rec.family = family_label(ctx.config.family);
    rec.branch = branch_label;
    rec.seed = ctx.config.seed;
    rec.samples_total = ctx.config.samples;
    return rec;
}

void finalize_record(CheckRecord& rec) {
    rec.max_rel = 0;
    bool pass = true;
    for (const ResidualReport& r : rec.equations) {
        if (r.max_rel >= rec.max_rel) {
            rec.max_rel = r.max_rel;
            rec.worst_point = r.worst_point;
        }
        pass = pass && r.pass();
    }
    rec.pass = pass && rec.samples_valid > 0;
}

CheckRecord run_linear(const SweepContext& ctx) {
    CheckRecord rec = make_record(ctx, Check::linear, "all");
    const double tol = check_tolerance(ctx.config, Check::linear, 1e-9);
    rec.equations.resize(6);
    for (int e = 0; e < 6; ++e) {
        rec.equations[e].equation_id = LinearResiduals::equation_ids()[e];
        rec.equations[e].tolerance = tol;
    }
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const Complex p{x[0], x[1]}, z{x[2], x[3]};
        const double r = x[4];
        const Jet w = ctx.w_at(p, z, r, 2);
        const LinearResiduals res = linear_system_residuals(w, ctx.solution().lambda);
        for (int e = 0; e < 6; ++e)
            rec.equations[e].add_sample(std::abs(res.residual[e]), res.scale[e], x);
    }
    rec.samples_valid = ctx.config.samples;
    finalize_record(rec);
    return rec;
}

CheckRecord run_veq(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::veq, bc.label);
    const double tol = check_tolerance(ctx.config, Check::veq, 1e-8);
    rec.equations.resize(1);
    rec.equations[0].equation_id = "transformed_cma";
    rec.equations[0].tolerance = tol;
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const VJet vj = ctx.v_at({x[0], x[1]}, {x[2], x[3]}, x[4], bc.branch, 2);
        if (!vj.valid()) continue;
        const TransformedCma res = transformed_cma_residual(vj.v);
        rec.equations[0].add_sample(res.residual, res.scale, x);
        rec.samples_valid += 1;
    }
    finalize_record(rec);
    return rec;
}

CheckRecord run_polynom(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::polynom, bc.label);
    const double tol = check_tolerance(ctx.config, Check::polynom, 1e-8);
    rec.equations.resize(2);
    rec.equations[0].equation_id = "polynomial_identity";
    rec.equations[0].tolerance = tol;
    rec.equations[1].equation_id = "degree6_homogeneity";
    rec.equations[1].tolerance = tol;
    long homogeneity_samples = 0;
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const Complex p{x[0], x[1]}, z{x[2], x[3]};
        const double rho = x[4];
        const CubicV cv = cubic_v(ctx.solution(), p, z, rho, bc.branch);
        if (!cv.valid()) continue;
        rec.samples_valid += 1;

        const double k3 = cv.quad.k * cv.quad.k * cv.quad.k;
        const double t1 = k3 * k3 * cv.v * cv.v;
        const double t2 = 2.0 * k3 * cv.data.P3 * cv.v;
        const double t3 = cv.data.P3 * cv.data.P3;
        const double t4 = cv.quad.discriminant * cv.data.P2 * cv.data.P2;
        const double scale =
            std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1.0});
        rec.equations[0].add_sample(t1 - t2 + t3 - t4, scale, x);

        if (rho > 0) {
            // scaling (p, p̄, z, z̄, σ) -> 2 (p, p̄, z, z̄, σ) with ρ = σ²:
            // the cube root of v must scale linearly
            const double s = 2.0;
            const CubicV scaled = cubic_v(ctx.solution(), s * p, s * z, s * s * rho, bc.branch);
            if (scaled.valid()) {
                homogeneity_samples += 1;
                const double lhs = std::cbrt(scaled.v);
                const double rhs = s * std::cbrt(cv.v);
                rec.equations[1].add_sample(lhs - rhs, std::max({std::abs(lhs), std::abs(rhs), 1.0}),
                                            x);
            }
        }
    }
    finalize_record(rec);
    char buf[64];
    std::snprintf(buf, sizeof buf, "homogeneity_samples=%ld", homogeneity_samples);
    rec.note = buf;
    return rec;
}

CheckRecord run_metric(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::metric, bc.label);
    const double tol = check_tolerance(ctx.config, Check::metric, 1e-8);
    rec.equations.resize(2);
    rec.equations[0].equation_id = "metric_reality";
    rec.equations[0].tolerance = tol;
    rec.equations[1].equation_id = "delta_plus_dominates";
    rec.equations[1].tolerance = tol;
    double min_abs_det = std::numeric_limits<double>::infinity();
    long degenerate = 0;
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const VJet vj = ctx.v_at({x[0], x[1]}, {x[2], x[3]}, x[4], bc.branch, 2);
        if (!vj.valid()) continue;
        const MetricSample ms = transformed_metric(vj.v, {x[0], x[1]}, {x[2], x[3]}, x[4]);
        if (ms.degenerate) {
            degenerate += 1;
            continue;
        }
        rec.samples_valid += 1;
        rec.equations[0].add_sample(ms.imag_residual, 1.0, x);
        const double dom_scale = std::max(std::abs(ms.delta_plus), 1.0);
        rec.equations[1].add_sample(std::max(0.0, std::abs(ms.delta) - ms.delta_plus), dom_scale, x);
        min_abs_det = std::min(min_abs_det, std::abs(ms.det_g));
    }
    finalize_record(rec);
    char buf[96];
    std::snprintf(buf, sizeof buf, "degenerate=%ld min_abs_det=%.3e", degenerate,
                  rec.samples_valid > 0 ? min_abs_det : 0.0);
    rec.note = buf;
    return rec;
}

CheckRecord run_ricci(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::ricci, bc.label);
    const double tol = check_tolerance(ctx.config, Check::ricci, 1e-6);
    rec.equations.resize(1);
    rec.equations[0].equation_id = "ricci_flatness";
    rec.equations[0].tolerance = tol;
    double max_riemann = 0;
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const VJet vj = ctx.v_at({x[0], x[1]}, {x[2], x[3]}, x[4], bc.branch, 4);
        if (!vj.valid()) continue;
        const MetricJets mj = transformed_metric_jets(vj.v, {x[0], x[1]}, {x[2], x[3]}, x[4]);
        if (mj.sample.degenerate) continue;
        const CurvatureSample cs = curvature(mj);
        rec.samples_valid += 1;
        rec.equations[0].add_sample(cs.ricci_norm, std::max(1.0, cs.riemann_norm), x);
        max_riemann = std::max(max_riemann, cs.riemann_norm);
    }
    finalize_record(rec);
    const bool nontrivial = max_riemann > 1e-8;
    rec.pass = rec.pass && nontrivial;
    char buf[96];
    std::snprintf(buf, sizeof buf, "max_riemann=%.6e nontrivial=%s", max_riemann,
                  nontrivial ? "yes" : "no");
    rec.note = buf;
    return rec;
}

CheckRecord run_signature(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::signature, bc.label);
    long pos = 0, neg = 0, indef = 0, degen = 0;
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const VJet vj = ctx.v_at({x[0], x[1]}, {x[2], x[3]}, x[4], bc.branch, 2);
        if (!vj.valid()) {
            degen += 1;
            continue;
        }
        const MetricSample ms = transformed_metric(vj.v, {x[0], x[1]}, {x[2], x[3]}, x[4]);
        if (ms.degenerate || ms.sig.degenerate()) {
            degen += 1;
            continue;
        }
        rec.samples_valid += 1;
        if (ms.sig.sign() > 0)
            pos += 1;
        else if (ms.sig.sign() < 0)
            neg += 1;
        else
            indef += 1;
    }
    rec.pass = rec.samples_valid > 0;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "positive_definite=%ld negative_definite=%ld indefinite=%ld excluded=%ld", pos,
                  neg, indef, degen);
    rec.note = buf;
    return rec;
}

CheckRecord run_noninvariance(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::noninvariance, bc.label);
    std::vector<SamplePoint> pts;
    pts.reserve(static_cast<std::size_t>(ctx.config.samples));
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        pts.push_back({Complex{x[0], x[1]}, Complex{x[2], x[3]}, x[4]});
    }
    const VJetField field = [&ctx, &bc](Complex p, Complex z, double rho, int order) {
        return ctx.v_at(p, z, rho, bc.branch, order);
    };
    const NoninvarianceReport rep = noninvariance_indicator(field, pts);
    rec.samples_valid = rep.samples_used;
    rec.pass = rep.samples_used > 0 && rep.all_directions_active && rep.curvature_nontrivial;
    std::ostringstream os;
    os << "grad_abs_max=[";
    for (int d = 0; d < 5; ++d) os << (d ? "," : "") << rep.grad_abs_max[d];
    os << "] riemann_min=" << rep.riemann_min << " active=" << (rep.all_directions_active ? 1 : 0)
       << " curved=" << (rep.curvature_nontrivial ? 1 : 0);
    rec.note = os.str();
    return rec;
}

CheckRecord run_legendre_roundtrip(const SweepContext& ctx, const BranchCase& bc) {
    CheckRecord rec = make_record(ctx, Check::legendre_roundtrip, bc.label);
    const double tol = check_tolerance(ctx.config, Check::legendre_roundtrip, 1e-9);
    rec.equations.resize(3);
    rec.equations[0].equation_id = "v_equals_w_plus_rho_r";
    rec.equations[0].tolerance = tol;
    rec.equations[1].equation_id = "v_rho_equals_r";
    rec.equations[1].tolerance = check_tolerance(ctx.config, Check::legendre_roundtrip, 1e-10);
    rec.equations[2].equation_id = "implicit_matches_closed_form";
    rec.equations[2].tolerance = tol;
    const WField wf = make_w_field(ctx.solution());
    for (long i = 0; i < ctx.config.samples; ++i) {
        const auto x = ctx.sample(i);
        const Complex p{x[0], x[1]}, z{x[2], x[3]};
        const double rho = x[4];

        double v_closed = 0, r_closed = 0, seed_r = 0;
        if (ctx.config.family == Family::cubic) {
            const CubicV cv = cubic_v(ctx.solution(), p, z, rho, bc.branch);
            if (!cv.valid()) continue;
            v_closed = cv.v;
            r_closed = cv.r;
            seed_r = cv.r; // closed-form root seeds the generic engine
        } else {
            const ExpV ev = exp_v(ctx.solution(), p, z, rho, bc.branch);
            if (!ev.valid()) continue;
            v_closed = ev.v;
            r_closed = ev.r;
            seed_r = ev.G / ev.H > 0 ? 0.5 * std::log(ev.G / ev.H) : 0.0;
        }
        rec.samples_valid += 1;

        const Jet w = ctx.w_at(p, z, r_closed, 2);
        const double w_plus = w.value().real() + rho * r_closed;
        rec.equations[0].add_sample(v_closed - w_plus,
                                    std::max({std::abs(v_closed), std::abs(w_plus), 1.0}), x);

        const VJet vj = ctx.v_at(p, z, rho, bc.branch, 2);
        if (vj.valid()) {
            const double v_rho = vj.v.partial({0, 0, 0, 0, 1}).real();
            rec.equations[1].add_sample(v_rho - r_closed, std::max(1.0, std::abs(r_closed)), x);
        }

        const ImplicitV iv = implicit_legendre(wf, p, z, rho, seed_r, 2);
        if (iv.valid()) {
            // the generic engine may land on the other branch when seeded
            // between basins; compare only when it found the same root
            if (std::abs(iv.r - r_closed) <= 1e-6 * std::max(1.0, std::abs(r_closed))) {
                rec.equations[2].add_sample(iv.v - v_closed,
                                            std::max({std::abs(v_closed), 1.0}), x);
            }
        }
    }
    finalize_record(rec);
    return rec;
}

void validate(const SweepConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
    for (const Interval& iv : cfg.domain)
        if (!(iv.lo <= iv.hi)) throw std::invalid_argument("empty domain interval");
    if (cfg.checks.empty()) throw std::invalid_argument("no checks configured");
    if (cfg.family == Family::superposition && cfg.superposition.empty())
        throw std::invalid_argument("superposition family needs at least one term");
    for (Check c : cfg.checks) {
        if (c == Check::polynom && cfg.family != Family::cubic)
            throw std::invalid_argument("polynom check applies to the cubic family only");
        if (c == Check::legendre_roundtrip && cfg.family == Family::superposition)
            throw std::invalid_argument(
                "legendre-roundtrip needs a closed-form family (cubic or exponential)");
    }
    if (cfg.perturb_p4 != 0.0) {
        for (Check c : cfg.checks)
            if (c != Check::linear)
                throw std::invalid_argument("perturb_p4 is a control for the linear check only");
    }
}

} // namespace

SweepResult run_sweep(const SweepConfig& config) {
    validate(config);
    SweepContext ctx{config, {}, CounterRng{config.seed}};
    if (config.family == Family::superposition) {
        for (const auto& [weight, params] : config.superposition)
            ctx.solutions.push_back({weight, make_solution(params)});
    } else {
        ctx.solutions.push_back({1.0, make_solution(config.params)});
    }

    SweepResult result;
    const std::vector<BranchCase> branches =
        ctx.single_family() ? branch_cases(config.branch)
                            : std::vector<BranchCase>{{Branch::plus, "all"}};
    for (Check c : config.checks) {
        switch (c) {
        case Check::linear:
            result.records.push_back(run_linear(ctx));
            break;
        case Check::veq:
            for (const auto& bc : branches) result.records.push_back(run_veq(ctx, bc));
            break;
        case Check::polynom:
            for (const auto& bc : branches) result.records.push_back(run_polynom(ctx, bc));
            break;
        case Check::metric:
            for (const auto& bc : branches) result.records.push_back(run_metric(ctx, bc));
            break;
        case Check::ricci:
            for (const auto& bc : branches) result.records.push_back(run_ricci(ctx, bc));
            break;
        case Check::signature:
            for (const auto& bc : branches) result.records.push_back(run_signature(ctx, bc));
            break;
        case Check::noninvariance:
            for (const auto& bc : branches) result.records.push_back(run_noninvariance(ctx, bc));
            break;
        case Check::legendre_roundtrip:
            for (const auto& bc : branches)
                result.records.push_back(run_legendre_roundtrip(ctx, bc));
            break;
        }
    }

    std::sort(result.records.begin(), result.records.end(),
              [](const CheckRecord& a, const CheckRecord& b) {
                  return std::tie(a.check, a.branch) < std::tie(b.check, b.branch);
              });

    bool any_fail = false, any_empty = false;
    for (const CheckRecord& r : result.records) {
        any_fail = any_fail || !r.pass;
        any_empty = any_empty || r.samples_valid == 0;
    }
    result.exit_code = any_empty ? 3 : (any_fail ? 1 : 0);
    return result;
}

std::string CheckRecord::to_json() const {
    nlohmann::ordered_json j;
    j["check"] = check;
    j["family"] = family;
    j["branch"] = branch;
    j["seed"] = seed;
    j["samples_valid"] = samples_valid;
    j["samples_total"] = samples_total;
    j["max_rel"] = max_rel;
    j["verdict"] = pass ? "pass" : "fail";
    j["worst_point"] = worst_point;
    if (!note.empty()) j["note"] = note;
    if (!equations.empty()) {
        nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
        for (const ResidualReport& r : equations)
            eqs.push_back(nlohmann::ordered_json::parse(r.to_json()));
        j["equations"] = eqs;
    }
    return j.dump();
}

void write_records(const SweepResult& result, std::ostream& out) {
    for (const CheckRecord& r : result.records) out << r.to_json() << "\n";
}

void write_summary(const SweepResult& result, std::ostream& err) {
    for (const CheckRecord& r : result.records) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "[%s] %-18s branch=%-3s max_rel=%-12.3e valid=%ld/%ld %s",
                      r.pass ? "PASS" : "FAIL", r.check.c_str(), r.branch.c_str(), r.max_rel,
                      r.samples_valid, r.samples_total, r.note.c_str());
        err << buf << "\n";
    }
    const char* verdict = result.exit_code == 0  ? "PASS"
                          : result.exit_code == 3 ? "NO VALID SAMPLES"
                                                  : "FAIL";
    err << "overall: " << verdict << " (exit " << result.exit_code << ")\n";
}

int run_sweep_cli(const SweepConfig& config, std::ostream& out, std::ostream& err) {
    const SweepResult result = run_sweep(config);
    write_records(result, out);
    write_summary(result, err);
    return result.exit_code;
}

namespace {

std::string fmt_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

int emit_solution_table(const SweepConfig& config, const TableSpec& grid, std::ostream& out) {
    if (grid.var_a < 0 || grid.var_a > 4 || grid.var_b < 0 || grid.var_b > 4 ||
        grid.var_a == grid.var_b)
        throw std::invalid_argument("table grid needs two distinct domain variables");
    if (grid.n_a < 1 || grid.n_b < 1) throw std::invalid_argument("grid sizes must be >= 1");
    if (config.family == Family::superposition)
        throw std::invalid_argument("table output needs a closed-form family");

    const SpectralSolution sol = make_solution(config.params);
    out << "# family: " << to_text(config.params) << "\n";
    out << "# branch: " << (grid.branch == Branch::plus ? "+" : "-") << "\n";
    out << "# grid: " << kDomainVarNames[grid.var_a] << " x " << kDomainVarNames[grid.var_b]
        << "\n";
    out << "# fixed:";
    for (int j = 0; j < 5; ++j) {
        if (j == grid.var_a || j == grid.var_b) continue;
        out << " " << kDomainVarNames[j] << "=" << fmt_g17(grid.fixed[j]);
    }
    out << "\n";
    out << "# existence column: cubic discriminant l^2-km / exponential radicand rho^2+4GH\n";
    out << kDomainVarNames[grid.var_a] << "\t" << kDomainVarNames[grid.var_b]
        << "\tr\tv\texistence\tvalid\n";

    for (int ia = 0; ia < grid.n_a; ++ia) {
        for (int ib = 0; ib < grid.n_b; ++ib) {
            std::array<double, 5> x = grid.fixed;
            const Interval da = config.domain[grid.var_a];
            const Interval db = config.domain[grid.var_b];
            x[grid.var_a] = grid.n_a == 1 ? da.lo : da.lo + (da.hi - da.lo) * ia / (grid.n_a - 1);
            x[grid.var_b] = grid.n_b == 1 ? db.lo : db.lo + (db.hi - db.lo) * ib / (grid.n_b - 1);
            const Complex p{x[0], x[1]}, z{x[2], x[3]};
            double r = 0, v = 0, existence = 0;
            bool valid = false;
            if (config.family == Family::cubic) {
                const CubicV cv = cubic_v(sol, p, z, x[4], grid.branch);
                existence = cv.quad.discriminant;
                valid = cv.valid();
                r = cv.r;
                v = cv.v;
            } else {
                const ExpV ev = exp_v(sol, p, z, x[4], grid.branch);
                existence = ev.radicand;
                valid = ev.valid();
                r = ev.r;
                v = ev.v;
            }
            out << fmt_g17(x[grid.var_a]) << "\t" << fmt_g17(x[grid.var_b]) << "\t"
                << (valid ? fmt_g17(r) : "-") << "\t" << (valid ? fmt_g17(v) : "-") << "\t"
                << fmt_g17(existence) << "\t" << (valid ? 1 : 0) << "\n";
        }
    }
    return 0;
}

std::string format_config(const SweepConfig& cfg) {
    std::ostringstream os;
    os << "family=" << family_label(cfg.family) << "\n";
    if (cfg.family == Family::superposition) {
        for (const auto& [w, fp] : cfg.superposition) {
            os << "term=" << fmt_g17(w) << ":" << family_label(fp.family) << ":" << fmt_g17(fp.A)
               << ":" << fmt_g17(fp.B) << ":" << fmt_g17(fp.C) << ":" << fmt_g17(fp.D) << ":"
               << fmt_g17(fp.alpha) << ":" << fmt_g17(fp.beta) << "\n";
        }
    } else {
        os << "A=" << fmt_g17(cfg.params.A) << "\n";
        os << "B=" << fmt_g17(cfg.params.B) << "\n";
        os << "C=" << fmt_g17(cfg.params.C) << "\n";
        os << "D=" << fmt_g17(cfg.params.D) << "\n";
        os << "alpha=" << fmt_g17(cfg.params.alpha) << "\n";
        os << "beta=" << fmt_g17(cfg.params.beta) << "\n";
    }
    for (int j = 0; j < 5; ++j) {
        os << kDomainVarNames[j] << "_min=" << fmt_g17(cfg.domain[j].lo) << "\n";
        os << kDomainVarNames[j] << "_max=" << fmt_g17(cfg.domain[j].hi) << "\n";
    }
    os << "samples=" << cfg.samples << "\n";
    os << "seed=" << cfg.seed << "\n";
    os << "branch="
       << (cfg.branch == BranchMode::both ? "both" : cfg.branch == BranchMode::plus ? "plus" : "minus")
       << "\n";
    os << "checks=";
    for (std::size_t i = 0; i < cfg.checks.size(); ++i)
        os << (i ? "," : "") << check_name(cfg.checks[i]);
    os << "\n";
    for (const auto& [name, tol] : cfg.tolerances) os << "tol=" << name << "=" << fmt_g17(tol) << "\n";
    if (cfg.perturb_p4 != 0.0) os << "perturb_p4=" << fmt_g17(cfg.perturb_p4) << "\n";
    return os.str();
}

} // namespace heavenly
