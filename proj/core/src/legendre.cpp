#include "heavenly/legendre.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heavenly {

namespace {

constexpr Complex kI{0.0, 1.0};

struct TermConsts {
    double amp_a = 0;  // A (or B)
    double amp_c = 0;  // C (or D)
    double gamma = 1;
    double alpha = 0;
};

TermConsts consts_of(const SpectralTerm& t) {
    return {term_const_A(t), term_const_C(t), t.gamma(), t.alpha};
}

struct XiMu {
    double xi = 0, mu = 0;
};

XiMu xi_mu_scalar(double alpha, Complex p, Complex z) {
    const Complex pb = std::conj(p), zb = std::conj(z);
    const Complex xi = p + pb + kI * alpha * (pb - p);
    const Complex fw = (alpha + kI) / (alpha - kI);
    const Complex mu = fw * z + (1.0 / fw) * zb;
    return {xi.real(), mu.real()};
}

void require_cubic(const SpectralSolution& sol) {
    if (!is_cubic_family(sol))
        throw std::invalid_argument("operation requires the two-mode cubic family");
}

} // namespace

const char* to_string(LegendreStatus s) {
    switch (s) {
    case LegendreStatus::ok: return "ok";
    case LegendreStatus::negative_discriminant: return "negative_discriminant";
    case LegendreStatus::degenerate_quadratic: return "degenerate_quadratic";
    case LegendreStatus::nonpositive_radicand: return "nonpositive_radicand";
    case LegendreStatus::nonpositive_log_argument: return "nonpositive_log_argument";
    case LegendreStatus::zero_h: return "zero_h";
    case LegendreStatus::newton_failed: return "newton_failed";
    case LegendreStatus::fold_point: return "fold_point";
    case LegendreStatus::singular_hessian: return "singular_hessian";
    }
    return "?";
}

QuadraticData cubic_klm(const SpectralSolution& sol, Complex p, Complex z, double rho) {
    require_cubic(sol);
    const TermConsts ta = consts_of(sol.terms[0]);
    const TermConsts tb = consts_of(sol.terms[1]);
    const XiMu a = xi_mu_scalar(ta.alpha, p, z);
    const XiMu b = xi_mu_scalar(tb.alpha, p, z);

    QuadraticData q;
    q.k = ta.amp_c * ta.gamma + tb.amp_c * tb.gamma;
    q.l = ta.gamma * (ta.amp_a * a.xi + ta.amp_c * a.mu) +
          tb.gamma * (tb.amp_a * b.xi + tb.amp_c * b.mu);
    q.m = ta.gamma * (2.0 * ta.amp_a * a.xi * a.mu + ta.amp_c * a.mu * a.mu) +
          tb.gamma * (2.0 * tb.amp_a * b.xi * b.mu + tb.amp_c * b.mu * b.mu) -
          ta.amp_c * a.xi * a.xi - tb.amp_c * b.xi * b.xi - rho / 3.0;
    q.discriminant = q.l * q.l - q.k * q.m;
    return q;
}

RootResult solve_r(const QuadraticData& q, Branch branch) {
    const double s = branch_sign(branch);
    if (q.k == 0.0) {
        if (q.l == 0.0) return {0.0, LegendreStatus::degenerate_quadratic};
        return {-q.m / (2.0 * q.l), LegendreStatus::ok};
    }
    if (q.discriminant < 0.0) return {0.0, LegendreStatus::negative_discriminant};
    const double sq = std::sqrt(q.discriminant);
    // avoid cancellation: -l and s*sq add constructively when s*l <= 0
    if (s * q.l <= 0.0) return {(-q.l + s * sq) / q.k, LegendreStatus::ok};
    const double denom = -q.l - s * sq;
    if (denom == 0.0) return {(-q.l + s * sq) / q.k, LegendreStatus::ok};
    return {q.m / denom, LegendreStatus::ok};
}

CubicV cubic_v(const SpectralSolution& sol, Complex p, Complex z, double rho, Branch branch) {
    require_cubic(sol);
    CubicV out;
    out.quad = cubic_klm(sol, p, z, rho);
    const QuadraticData& q = out.quad;
    if (q.k == 0.0) {
        out.status = LegendreStatus::degenerate_quadratic;
        return out;
    }
    if (q.discriminant < 0.0) {
        out.status = LegendreStatus::negative_discriminant;
        return out;
    }
    const RootResult root = solve_r(q, branch);
    out.r = root.r;
    out.status = root.status;
    if (!root.valid()) return out;

    const TermConsts ta = consts_of(sol.terms[0]);
    const TermConsts tb = consts_of(sol.terms[1]);
    const XiMu a = xi_mu_scalar(ta.alpha, p, z);
    const XiMu b = xi_mu_scalar(tb.alpha, p, z);
    const double D = q.discriminant;
    CubicVData& d = out.data;
    d.s_alpha = q.k * a.xi;
    d.s_beta = q.k * b.xi;
    d.l_alpha = q.l - q.k * a.mu;
    d.l_beta = q.l - q.k * b.mu;
    d.P2 = 6.0 * (ta.amp_a * ta.gamma * d.s_alpha * d.l_alpha +
                  tb.amp_a * tb.gamma * d.s_beta * d.l_beta) +
           ta.amp_c * (3.0 * d.s_alpha * d.s_alpha - ta.gamma * (D + 3.0 * d.l_alpha * d.l_alpha)) +
           tb.amp_c * (3.0 * d.s_beta * d.s_beta - tb.gamma * (D + 3.0 * d.l_beta * d.l_beta)) +
           q.k * q.k * rho;
    d.P3 = ta.amp_a *
               (d.s_alpha * d.s_alpha * d.s_alpha -
                3.0 * ta.gamma * d.s_alpha * (D + d.l_alpha * d.l_alpha)) +
           tb.amp_a *
               (d.s_beta * d.s_beta * d.s_beta -
                3.0 * tb.gamma * d.s_beta * (D + d.l_beta * d.l_beta)) -
           3.0 * ta.amp_c * d.l_alpha *
               (d.s_alpha * d.s_alpha - ta.gamma * (D + d.l_alpha * d.l_alpha / 3.0)) -
           3.0 * tb.amp_c * d.l_beta *
               (d.s_beta * d.s_beta - tb.gamma * (D + d.l_beta * d.l_beta / 3.0)) -
           q.k * q.k * rho * q.l;
    const double s = branch_sign(branch);
    out.v = (d.P3 + s * std::sqrt(D) * d.P2) / (q.k * q.k * q.k);
    return out;
}

ExpGH exp_gh(const SpectralSolution& sol, Complex p, Complex z) {
    if (!is_exp_family(sol))
        throw std::invalid_argument("operation requires the two-mode exponential family");
    const Complex pb = std::conj(p), zb = std::conj(z);
    ExpGH out;
    {
        const SpectralTerm& t = sol.terms[0];
        const double g = t.gamma();
        const double c2t = (1.0 - t.alpha * t.alpha) / g;
        const double s2t = 2.0 * t.alpha / g;
        const double ct = 1.0 / std::sqrt(g);
        const double st = t.alpha / std::sqrt(g);
        const Complex arg = ct * (p + pb) + kI * st * (pb - p);
        const Complex pre = std::exp(c2t * (z + zb) + kI * s2t * (zb - z));
        out.G = (pre * (term_const_A(t) * std::cos(arg) + term_const_C(t) * std::sin(arg))).real();
    }
    {
        const SpectralTerm& t = sol.terms[1];
        const double d = t.gamma();
        const double c2f = (1.0 - t.alpha * t.alpha) / d;
        const double s2f = 2.0 * t.alpha / d;
        const double cf = 1.0 / std::sqrt(d);
        const double sf = t.alpha / std::sqrt(d);
        const Complex arg = cf * (p + pb) + kI * sf * (pb - p);
        const Complex pre = std::exp(-c2f * (z + zb) + kI * s2f * (z - zb));
        out.H = (pre * (term_const_A(t) * std::cos(arg) - term_const_C(t) * std::sin(arg))).real();
    }
    return out;
}

// Near-degeneracy cutoffs for the exponential closed form. Jet coefficients
// of 1/H and 1/sqrt(radicand) amplify round-off like H^-2 and rad^-1, so
// samples inside these slivers carry fewer than the certified eight digits
// and are excluded as degenerate rather than reported with junk residuals.
constexpr double kExpZeroHCutoff = 1e-3;
constexpr double kExpFoldCutoff = 1e-6;

ExpV exp_v(const SpectralSolution& sol, Complex p, Complex z, double rho, Branch branch) {
    ExpV out;
    const ExpGH gh = exp_gh(sol, p, z);
    out.G = gh.G;
    out.H = gh.H;
    out.radicand = rho * rho + 4.0 * gh.G * gh.H;
    if (std::abs(gh.H) < kExpZeroHCutoff * std::max({1.0, std::abs(gh.G), std::abs(rho)})) {
        out.status = LegendreStatus::zero_h;
        return out;
    }
    const double rad_scale = std::max({rho * rho, std::abs(4.0 * gh.G * gh.H), 1.0});
    if (out.radicand <= kExpFoldCutoff * rad_scale) {
        out.status = LegendreStatus::nonpositive_radicand;
        return out;
    }
    const double s = branch_sign(branch);
    const double sq = std::sqrt(out.radicand);
    const double arg = (-rho + s * sq) / (2.0 * gh.H);
    if (arg <= 0.0) {
        out.status = LegendreStatus::nonpositive_log_argument;
        return out;
    }
    out.r = std::log(arg);
    out.v = s * sq + rho * out.r;
    return out;
}

namespace {

struct VSpaceJets {
    Jet p, pbar, z, zbar, rho;
};

VSpaceJets v_space_jets(Complex p, Complex z, double rho, int order) {
    return {Jet::variable(kP, p, 5, order), Jet::variable(kPbar, std::conj(p), 5, order),
            Jet::variable(kZ, z, 5, order), Jet::variable(kZbar, std::conj(z), 5, order),
            Jet::variable(kRho, Complex{rho}, 5, order)};
}

} // namespace

VJet cubic_v_jet(const SpectralSolution& sol, Complex p, Complex z, double rho, Branch branch,
                 int order) {
    require_cubic(sol);
    VJet out;
    const QuadraticData q = cubic_klm(sol, p, z, rho);
    if (q.k == 0.0) {
        out.status = LegendreStatus::degenerate_quadratic;
        return out;
    }
    if (q.discriminant <= 0.0) {
        out.status = LegendreStatus::negative_discriminant;
        return out;
    }
    const RootResult root = solve_r(q, branch);
    out.r = root.r;

    const VSpaceJets c = v_space_jets(p, z, rho, order);
    const TermConsts ta = consts_of(sol.terms[0]);
    const TermConsts tb = consts_of(sol.terms[1]);
    Jet xia, mua, xib, mub;
    xi_mu(ta.alpha, c.p, c.pbar, c.z, c.zbar, xia, mua);
    xi_mu(tb.alpha, c.p, c.pbar, c.z, c.zbar, xib, mub);

    const double k = q.k;
    const Jet l = ta.gamma * (ta.amp_a * xia + ta.amp_c * mua) +
                  tb.gamma * (tb.amp_a * xib + tb.amp_c * mub);
    const Jet m = ta.gamma * (2.0 * ta.amp_a * xia * mua + ta.amp_c * mua * mua) +
                  tb.gamma * (2.0 * tb.amp_a * xib * mub + tb.amp_c * mub * mub) -
                  ta.amp_c * xia * xia - tb.amp_c * xib * xib - c.rho / 3.0;
    const Jet D = l * l - k * m;
    const Jet sqrtD = sqrt(D);
    const Jet sa = k * xia;
    const Jet sb = k * xib;
    const Jet la = l - k * mua;
    const Jet lb = l - k * mub;
    const Jet P2 = 6.0 * (ta.amp_a * ta.gamma * sa * la + tb.amp_a * tb.gamma * sb * lb) +
                   ta.amp_c * (3.0 * sa * sa - ta.gamma * (D + 3.0 * la * la)) +
                   tb.amp_c * (3.0 * sb * sb - tb.gamma * (D + 3.0 * lb * lb)) + (k * k) * c.rho;
    const Jet P3 = ta.amp_a * (sa * sa * sa - 3.0 * ta.gamma * sa * (D + la * la)) +
                   tb.amp_a * (sb * sb * sb - 3.0 * tb.gamma * sb * (D + lb * lb)) -
                   3.0 * ta.amp_c * la * (sa * sa - ta.gamma * (D + la * la / 3.0)) -
                   3.0 * tb.amp_c * lb * (sb * sb - tb.gamma * (D + lb * lb / 3.0)) -
                   (k * k) * c.rho * l;
    const double s = branch_sign(branch);
    out.v = (P3 + s * (sqrtD * P2)) / (k * k * k);
    out.status = LegendreStatus::ok;
    return out;
}

VJet exp_v_jet(const SpectralSolution& sol, Complex p, Complex z, double rho, Branch branch,
               int order) {
    VJet out;
    const ExpV scalar = exp_v(sol, p, z, rho, branch);
    out.r = scalar.r;
    if (!scalar.valid()) {
        out.status = scalar.status;
        return out;
    }
    const VSpaceJets c = v_space_jets(p, z, rho, order);
    const GHJets gh = exp_profile_gh(sol, c.p, c.pbar, c.z, c.zbar);
    const Jet rad = c.rho * c.rho + 4.0 * (gh.G * gh.H);
    const double s = branch_sign(branch);
    const Jet sq = sqrt(rad);
    const Jet arg = (s * sq - c.rho) / (2.0 * gh.H);
    out.v = s * sq + c.rho * log(arg);
    out.status = LegendreStatus::ok;
    return out;
}

LegendrePoint solve_legendre_point(const SpectralSolution& sol, Complex p, Complex z, double rho,
                                   Branch branch) {
    LegendrePoint pt;
    pt.p = p;
    pt.z = z;
    pt.rho = rho;
    pt.branch = branch;
    if (is_cubic_family(sol)) {
        const QuadraticData q = cubic_klm(sol, p, z, rho);
        const RootResult root = solve_r(q, branch);
        pt.r = root.r;
        pt.status = root.status;
        return pt;
    }
    if (is_exp_family(sol)) {
        const ExpV ev = exp_v(sol, p, z, rho, branch);
        pt.r = ev.r;
        pt.status = ev.status;
        return pt;
    }
    const ImplicitV iv = implicit_legendre(make_w_field(sol), p, z, rho, 0.0, 2);
    pt.r = iv.r;
    pt.status = iv.status;
    return pt;
}

WField make_w_field(const SpectralSolution& sol) {
    return [sol](Complex p, Complex z, double r, int order) {
        return eval_w(sol, PointJets::real_slice(p, z, r, order));
    };
}

ImplicitV implicit_legendre(const WField& field, Complex p, Complex z, double rho, double seed_r,
                            int order, const ImplicitOptions& opt) {
    ImplicitV out;
    double r = seed_r;
    bool converged = false;
    for (int it = 0; it < opt.max_iter; ++it) {
        const Jet w2 = field(p, z, r, 2);
        const double g = w2.partial({0, 0, 0, 0, 1}).real() + rho;
        const double gp = w2.partial({0, 0, 0, 0, 2}).real();
        if (std::abs(gp) < opt.fold_eps * std::max(1.0, w2.max_abs())) {
            out.status = LegendreStatus::fold_point;
            out.iterations = it;
            return out;
        }
        const double dr = -g / gp;
        r += dr;
        out.iterations = it + 1;
        if (std::abs(g) <= opt.tol * std::max(1.0, std::abs(rho)) &&
            std::abs(dr) <= opt.tol * std::max(1.0, std::abs(r))) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        out.status = LegendreStatus::newton_failed;
        return out;
    }
    out.r = r;

    const Jet w = field(p, z, r, order);
    // top-order coefficients of the lifted derivatives are unknown; they only
    // influence the top order of the root jet, which cancels out of v below
    const Jet wr = w.derivative(kR).lifted(order);
    const Jet wrr = wr.derivative(kR).lifted(order);
    const Jet rho_jet = Jet::variable(kRho, Complex{rho}, 5, order);

    Jet root = Jet::constant(Complex{r}, 5, order);
    for (int it = 0; it < order; ++it) {
        const Jet g = substitute_var(wr, kR, Complex{r}, root) + rho_jet;
        const Jet gp = substitute_var(wrr, kR, Complex{r}, root);
        root -= g / gp;
    }
    out.v_jet = substitute_var(w, kR, Complex{r}, root) + rho_jet * root;
    out.v = out.v_jet.value().real();
    return out;
}

double legendre_existence_det(const Jet& w_jet) {
    const Complex wpp = w_jet.partial({2, 0, 0, 0, 0});
    const Complex wppb = w_jet.partial({1, 1, 0, 0, 0});
    const Complex wpr = w_jet.partial({1, 0, 0, 0, 1});
    const Complex wpbpb = w_jet.partial({0, 2, 0, 0, 0});
    const Complex wpbr = w_jet.partial({0, 1, 0, 0, 1});
    const Complex wrr = w_jet.partial({0, 0, 0, 0, 2});
    const Complex det = wpp * (wpbpb * wrr - wpbr * wpbr) - wppb * (wppb * wrr - wpbr * wpr) +
                        wpr * (wppb * wpbr - wpbpb * wpr);
    return det.real();
}

VJetField make_v_field(const SpectralSolution& sol, Branch branch) {
    if (is_cubic_family(sol)) {
        return [sol, branch](Complex p, Complex z, double rho, int order) {
            return cubic_v_jet(sol, p, z, rho, branch, order);
        };
    }
    if (is_exp_family(sol)) {
        return [sol, branch](Complex p, Complex z, double rho, int order) {
            return exp_v_jet(sol, p, z, rho, branch, order);
        };
    }
    // generic solutions go through the implicit engine; no branch structure,
    // Newton runs from seed r = 0
    const WField w = make_w_field(sol);
    return [w](Complex p, Complex z, double rho, int order) {
        const ImplicitV iv = implicit_legendre(w, p, z, rho, 0.0, order);
        VJet out;
        out.v = iv.v_jet;
        out.r = iv.r;
        out.status = iv.status;
        return out;
    };
}

namespace {

/// u(z1, z2) along the inverse 2d Legendre map; Newton state warm-starts from
/// the previous solve.
class PotentialEval {
public:
    PotentialEval(const VJetField& field, double rho, const Invert2dOptions& opt)
        : field_(field), rho_(rho), opt_(opt) {}

    bool eval(Complex z1, Complex z2, Complex& p_inout, double& u_out,
              LegendreStatus& status_out, int& iters) {
        Complex p = p_inout;
        for (int it = 0; it < opt_.max_iter; ++it) {
            const VJet vj = field_(p, z2, rho_, 2);
            if (!vj.valid()) {
                status_out = vj.status;
                return false;
            }
            const Complex vp = vj.v.partial({1, 0, 0, 0, 0});
            const Complex F = vp + z1;
            const Complex vpp = vj.v.partial({2, 0, 0, 0, 0});
            const Complex vppb = vj.v.partial({1, 1, 0, 0, 0});
            Eigen::Matrix2d M;
            M(0, 0) = (vpp + vppb).real();
            M(0, 1) = -(vpp - vppb).imag();
            M(1, 0) = (vpp + vppb).imag();
            M(1, 1) = (vpp - vppb).real();
            const double scale = M.cwiseAbs().maxCoeff();
            if (std::abs(M.determinant()) < 1e-14 * std::max(1.0, scale * scale)) {
                status_out = LegendreStatus::singular_hessian;
                return false;
            }
            const Eigen::Vector2d rhs{-F.real(), -F.imag()};
            const Eigen::Vector2d d = M.partialPivLu().solve(rhs);
            p += Complex{d(0), d(1)};
            iters = it + 1;
            if (std::abs(F) <= opt_.tol * std::max(1.0, std::abs(z1)) &&
                std::hypot(d(0), d(1)) <= opt_.tol * std::max(1.0, std::abs(p))) {
                const VJet vv = field_(p, z2, rho_, 2);
                if (!vv.valid()) {
                    status_out = vv.status;
                    return false;
                }
                p_inout = p;
                u_out = vv.v.value().real() + 2.0 * (p * z1).real();
                status_out = LegendreStatus::ok;
                return true;
            }
        }
        status_out = LegendreStatus::newton_failed;
        return false;
    }

private:
    const VJetField& field_;
    double rho_;
    const Invert2dOptions& opt_;
};

} // namespace

Invert2d invert_legendre_2d(const VJetField& field, Complex z1, Complex z, double rho,
                            Complex seed_p, const Invert2dOptions& opt) {
    Invert2d out;
    PotentialEval eval(field, rho, opt);

    Complex p = seed_p;
    double u0 = 0;
    if (!eval.eval(z1, z, p, u0, out.status, out.iterations)) return out;
    out.p = p;
    out.u = u0;

    // second partials of u over (Re z1, Im z1, Re z2, Im z2), Richardson-extrapolated
    auto u_at = [&](double d0, double d1, double d2, double d3, bool& ok) {
        Complex pp = p; // warm start from the central solution
        double u = 0;
        LegendreStatus st;
        int it = 0;
        ok = eval.eval(z1 + Complex{d0, d1}, z + Complex{d2, d3}, pp, u, st, it);
        return u;
    };
    double hess[4][4];
    double err_max = 0;
    bool ok = true;
    auto second = [&](int a, int b, double h) {
        double da[4] = {0, 0, 0, 0};
        double db[4] = {0, 0, 0, 0};
        da[a] = h;
        db[b] = h;
        bool e0 = true, e1 = true, e2 = true, e3 = true;
        double val;
        if (a == b) {
            const double up = u_at(da[0], da[1], da[2], da[3], e0);
            const double um = u_at(-da[0], -da[1], -da[2], -da[3], e1);
            val = (up - 2.0 * u0 + um) / (h * h);
        } else {
            const double upp = u_at(da[0] + db[0], da[1] + db[1], da[2] + db[2], da[3] + db[3], e0);
            const double upm = u_at(da[0] - db[0], da[1] - db[1], da[2] - db[2], da[3] - db[3], e1);
            const double ump = u_at(-da[0] + db[0], -da[1] + db[1], -da[2] + db[2], -da[3] + db[3], e2);
            const double umm = u_at(-da[0] - db[0], -da[1] - db[1], -da[2] - db[2], -da[3] - db[3], e3);
            val = (upp - upm - ump + umm) / (4.0 * h * h);
        }
        ok = ok && e0 && e1 && e2 && e3;
        return val;
    };
    for (int a = 0; a < 4 && ok; ++a) {
        for (int b = a; b < 4 && ok; ++b) {
            // two Richardson levels with a step-halving error estimate
            const auto level1 = [&](double h) {
                const double c1 = second(a, b, h);
                const double c2 = second(a, b, h / 2.0);
                return (4.0 * c2 - c1) / 3.0;
            };
            const double r1 = level1(opt.fd_step);
            const double r2 = level1(opt.fd_step / 2.0);
            hess[a][b] = hess[b][a] = (16.0 * r2 - r1) / 15.0;
            err_max = std::max(err_max, std::abs(r2 - r1) / 15.0);
        }
    }
    if (!ok) {
        out.status = LegendreStatus::newton_failed;
        return out;
    }
    out.fd_error = err_max;
    out.u_11b = Complex{(hess[0][0] + hess[1][1]) / 4.0, 0.0};
    out.u_22b = Complex{(hess[2][2] + hess[3][3]) / 4.0, 0.0};
    out.u_12b = Complex{(hess[0][2] + hess[1][3]) / 4.0, (hess[0][3] - hess[1][2]) / 4.0};
    out.u_21b = std::conj(out.u_12b);
    out.cma_residual = (out.u_11b * out.u_22b - out.u_12b * out.u_21b).real() - 1.0;
    return out;
}

} // namespace heavenly
