#include "heavenly/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <stdexcept>

namespace heavenly {

namespace {

constexpr Complex kI{0.0, 1.0};

using Form = std::array<Complex, 4>; // complex 1-form over (dx1, dx2, dx3, dx4)

constexpr Form kDp{Complex{1, 0}, Complex{0, 1}, Complex{0, 0}, Complex{0, 0}};
constexpr Form kDpbar{Complex{1, 0}, Complex{0, -1}, Complex{0, 0}, Complex{0, 0}};
constexpr Form kDz{Complex{0, 0}, Complex{0, 0}, Complex{1, 0}, Complex{0, 1}};
constexpr Form kDzbar{Complex{0, 0}, Complex{0, 0}, Complex{1, 0}, Complex{0, -1}};

void add_sym(std::array<std::array<Complex, 4>, 4>& g, Complex coef, const Form& a,
             const Form& b) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g[i][j] += coef * 0.5 * (a[i] * b[j] + a[j] * b[i]);
}

struct Hessian {
    Complex v_pp, v_pbpb, v_ppb, v_pbz, v_pzb, v_zzb;
};

Hessian hessian_values(const Jet& v_jet) {
    return {v_jet.partial({2, 0, 0, 0, 0}), v_jet.partial({0, 2, 0, 0, 0}),
            v_jet.partial({1, 1, 0, 0, 0}), v_jet.partial({0, 1, 1, 0, 0}),
            v_jet.partial({1, 0, 0, 1, 0}), v_jet.partial({0, 0, 1, 1, 0})};
}

MetricSample sample_from_hessian(const Hessian& h, Complex p, Complex z, double rho,
                                 const GeometryOptions& opt) {
    MetricSample s;
    s.p = p;
    s.z = z;
    s.rho = rho;
    s.v_pp = h.v_pp;
    s.v_pbpb = h.v_pbpb;
    s.v_ppb = h.v_ppb;
    s.v_pbz = h.v_pbz;
    s.v_pzb = h.v_pzb;
    s.v_zzb = h.v_zzb;

    const Complex delta_c = h.v_pp * h.v_pbpb - h.v_ppb * h.v_ppb;
    s.delta = delta_c.real();
    s.delta_plus = (h.v_pp * h.v_pbpb + h.v_ppb * h.v_ppb).real();
    const double hess_scale =
        std::max({std::abs(h.v_pp), std::abs(h.v_pbpb), std::abs(h.v_ppb), std::abs(h.v_pbz),
                  std::abs(h.v_pzb), std::abs(h.v_zzb), 1.0});
    if (std::abs(h.v_ppb) <= opt.degeneracy_eps * hess_scale ||
        std::abs(delta_c) <= opt.degeneracy_eps * hess_scale * hess_scale) {
        s.degenerate = true;
        return s;
    }

    Form E, Eb;
    for (int i = 0; i < 4; ++i) {
        E[i] = h.v_ppb * kDp[i] + h.v_pbz * kDz[i];
        Eb[i] = h.v_ppb * kDpbar[i] + h.v_pzb * kDzbar[i];
    }
    std::array<std::array<Complex, 4>, 4> gc{};
    add_sym(gc, h.v_pp / delta_c, E, E);
    add_sym(gc, h.v_pbpb / delta_c, Eb, Eb);
    add_sym(gc, (h.v_pp * h.v_pbpb + h.v_ppb * h.v_ppb) / (h.v_ppb * delta_c), E, Eb);
    add_sym(gc, delta_c / h.v_ppb, kDz, kDzbar);

    double max_entry = 0, max_imag = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            max_entry = std::max(max_entry, std::abs(gc[i][j]));
            max_imag = std::max(max_imag, std::abs(gc[i][j].imag()));
            s.g(i, j) = gc[i][j].real();
        }
    }
    s.imag_residual = max_imag / std::max(1.0, max_entry);
    s.det_g = s.g.determinant();
    s.sig = signature(s.g, opt.eigen_eps);
    // a near-zero eigenvalue relative to ||g|| means the sample carries no
    // usable curvature information even when det_g is formally nonzero
    if (s.sig.degenerate()) s.degenerate = true;
    return s;
}

} // namespace

SignatureRecord signature(const Eigen::Matrix4d& g, double eigen_eps) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
    const Eigen::Vector4d ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    SignatureRecord rec;
    for (int i = 0; i < 4; ++i) {
        if (std::abs(ev(i)) <= eigen_eps * std::max(1.0, scale))
            rec.near_zero += 1;
        else if (ev(i) > 0)
            rec.positive += 1;
        else
            rec.negative += 1;
    }
    return rec;
}

Eigen::Matrix4d kahler_metric(Complex u_11b, Complex u_12b, Complex u_21b, Complex u_22b) {
    // same real-coordinate convention: dz1 = dx1 + i dx2, dz2 = dx3 + i dx4
    std::array<std::array<Complex, 4>, 4> gc{};
    add_sym(gc, 2.0 * u_11b, kDp, kDpbar);
    add_sym(gc, 2.0 * u_12b, kDp, kDzbar);
    add_sym(gc, 2.0 * u_21b, kDz, kDpbar);
    add_sym(gc, 2.0 * u_22b, kDz, kDzbar);
    Eigen::Matrix4d g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = gc[i][j].real();
    return g;
}

Eigen::Matrix4d kahler_metric(const Jet& u_jet) {
    if (u_jet.num_vars() != 4 || u_jet.order() < 2)
        throw std::invalid_argument("kahler_metric expects a 4-variable jet of order >= 2");
    return kahler_metric(u_jet.partial({1, 1, 0, 0}), u_jet.partial({1, 0, 0, 1}),
                         u_jet.partial({0, 1, 1, 0}), u_jet.partial({0, 0, 1, 1}));
}

MetricSample transformed_metric(const Jet& v_jet, Complex p, Complex z, double rho,
                                const GeometryOptions& opt) {
    if (v_jet.num_vars() != 5 || v_jet.order() < 2)
        throw std::invalid_argument("transformed_metric expects a 5-variable jet of order >= 2");
    return sample_from_hessian(hessian_values(v_jet), p, z, rho, opt);
}

namespace {

/// Second derivatives of v as order-2 jets re-expanded in the real coordinates
/// (x1, x2, x3, x4) = (Re p, Im p, Re z, Im z) at fixed ρ.
struct HessianJets {
    Jet v_pp, v_pbpb, v_ppb, v_pbz, v_pzb, v_zzb;
};

HessianJets real_slice_hessian_jets(const Jet& v_jet, Complex p, Complex z, double rho) {
    const int n = 2;
    const Jet x1 = Jet::variable(0, Complex{0.0}, 4, n);
    const Jet x2 = Jet::variable(1, Complex{0.0}, 4, n);
    const Jet x3 = Jet::variable(2, Complex{0.0}, 4, n);
    const Jet x4 = Jet::variable(3, Complex{0.0}, 4, n);
    const std::array<Complex, 5> centers{p, std::conj(p), z, std::conj(z), Complex{rho}};
    const std::array<Jet, 5> args{x1 + kI * x2 + centers[0], x1 - kI * x2 + centers[1],
                                  x3 + kI * x4 + centers[2], x3 - kI * x4 + centers[3],
                                  Jet::constant(centers[4], 4, n)};
    const auto to_real = [&](const Jet& f) {
        return compose(f, centers, std::span<const Jet>(args));
    };
    HessianJets h;
    h.v_pp = to_real(v_jet.derivative(kP).derivative(kP));
    h.v_pbpb = to_real(v_jet.derivative(kPbar).derivative(kPbar));
    h.v_ppb = to_real(v_jet.derivative(kP).derivative(kPbar));
    h.v_pbz = to_real(v_jet.derivative(kPbar).derivative(kZ));
    h.v_pzb = to_real(v_jet.derivative(kP).derivative(kZbar));
    h.v_zzb = to_real(v_jet.derivative(kZ).derivative(kZbar));
    return h;
}

} // namespace

MetricJets transformed_metric_jets(const Jet& v_jet, Complex p, Complex z, double rho,
                                   const GeometryOptions& opt) {
    if (v_jet.num_vars() != 5 || v_jet.order() < 4)
        throw std::invalid_argument(
            "transformed_metric_jets expects a 5-variable jet of order >= 4");
    MetricJets out;
    out.sample = sample_from_hessian(hessian_values(v_jet), p, z, rho, opt);
    if (out.sample.degenerate) return out;

    const HessianJets h = real_slice_hessian_jets(v_jet, p, z, rho);
    const Jet delta = h.v_pp * h.v_pbpb - h.v_ppb * h.v_ppb;
    const Jet delta_plus = h.v_pp * h.v_pbpb + h.v_ppb * h.v_ppb;

    std::array<Jet, 4> E, Eb;
    for (int i = 0; i < 4; ++i) {
        E[i] = h.v_ppb * kDp[i] + h.v_pbz * kDz[i];
        Eb[i] = h.v_ppb * kDpbar[i] + h.v_pzb * kDzbar[i];
    }

    const Jet inv_delta = reciprocal(delta);
    const Jet inv_ppb = reciprocal(h.v_ppb);
    const Jet c1 = h.v_pp * inv_delta;
    const Jet c2 = h.v_pbpb * inv_delta;
    const Jet c3 = delta_plus * inv_ppb * inv_delta;
    const Jet c4 = delta * inv_ppb;

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.g[i][j] = Jet::zero(4, 2);
    const auto add_jets = [&](const Jet& coef, const std::array<Jet, 4>& a,
                              const std::array<Jet, 4>& b) {
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                const Jet term = coef * ((a[i] * b[j] + a[j] * b[i]) * 0.5);
                out.g[i][j] += term;
                if (j != i) out.g[j][i] += term;
            }
        }
    };
    add_jets(c1, E, E);
    add_jets(c2, Eb, Eb);
    add_jets(c3, E, Eb);
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const Complex sym = 0.5 * (kDz[i] * kDzbar[j] + kDz[j] * kDzbar[i]);
            if (sym == 0.0) continue;
            const Jet term = c4 * sym;
            out.g[i][j] += term;
            if (j != i) out.g[j][i] += term;
        }
    }
    return out;
}

namespace {

CurvatureSample curvature_from_jets(const std::array<std::array<Jet, 4>, 4>& gj) {
    const int nv = gj[0][0].num_vars();
    // inverse metric as order-1 jets by Gauss-Jordan elimination on jet entries
    std::array<std::array<Jet, 4>, 4> A, Inv;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            A[i][j] = gj[i][j].truncated(1);
            Inv[i][j] = Jet::constant(i == j ? 1.0 : 0.0, nv, 1);
        }
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        double best = std::abs(A[col][col].value());
        for (int rr = col + 1; rr < 4; ++rr) {
            const double cand = std::abs(A[rr][col].value());
            if (cand > best) {
                best = cand;
                pivot = rr;
            }
        }
        if (best == 0.0) throw std::domain_error("curvature: singular metric");
        std::swap(A[col], A[pivot]);
        std::swap(Inv[col], Inv[pivot]);
        const Jet inv_p = reciprocal(A[col][col]);
        for (int j = 0; j < 4; ++j) {
            A[col][j] = A[col][j] * inv_p;
            Inv[col][j] = Inv[col][j] * inv_p;
        }
        for (int rr = 0; rr < 4; ++rr) {
            if (rr == col) continue;
            const Jet f = A[rr][col];
            if (f.max_abs() == 0.0) continue;
            for (int j = 0; j < 4; ++j) {
                A[rr][j] -= f * A[col][j];
                Inv[rr][j] -= f * Inv[col][j];
            }
        }
    }

    std::array<std::array<std::array<Jet, 4>, 4>, 4> dg; // dg[c][a][b] = ∂_c g_ab
    for (int c = 0; c < 4; ++c)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) dg[c][a][b] = gj[a][b].derivative(c);

    std::array<std::array<std::array<Jet, 4>, 4>, 4> gamma; // gamma[a][b][c] = Γ^a_{bc}
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            for (int c = b; c < 4; ++c) {
                Jet sum = Jet::zero(nv, 1);
                for (int d = 0; d < 4; ++d) {
                    sum += Inv[a][d] * (dg[b][d][c] + dg[c][b][d] - dg[d][b][c]);
                }
                sum = sum * 0.5;
                gamma[a][b][c] = sum;
                if (c != b) gamma[a][c][b] = sum;
            }
        }
    }

    CurvatureSample out;
    double gamma_val[4][4][4];
    double dgamma[4][4][4][4]; // dgamma[e][a][b][c] = ∂_e Γ^a_{bc}
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c) {
                gamma_val[a][b][c] = gamma[a][b][c].value().real();
                out.christoffel[a][b][c] = gamma_val[a][b][c];
                for (int e = 0; e < 4; ++e) {
                    int mi[4] = {0, 0, 0, 0};
                    mi[e] = 1;
                    dgamma[e][a][b][c] = gamma[a][b][c].partial(std::span<const int>(mi, 4)).real();
                }
            }

    // R_{bc} = ∂_a Γ^a_{bc} − ∂_c Γ^a_{ba} + Γ^a_{ae} Γ^e_{bc} − Γ^a_{ce} Γ^e_{ba}
    Eigen::Matrix4d ricci = Eigen::Matrix4d::Zero();
    for (int b = 0; b < 4; ++b) {
        for (int c = 0; c < 4; ++c) {
            double val = 0;
            for (int a = 0; a < 4; ++a) {
                val += dgamma[a][a][b][c] - dgamma[c][a][b][a];
                for (int e = 0; e < 4; ++e)
                    val += gamma_val[a][a][e] * gamma_val[e][b][c] -
                           gamma_val[a][c][e] * gamma_val[e][b][a];
            }
            ricci(b, c) = val;
        }
    }
    out.ricci = ricci;
    out.ricci_norm = ricci.norm();
    out.sym_residual = (ricci - ricci.transpose()).norm();

    // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce} Γ^e_{db} − Γ^a_{de} Γ^e_{cb}
    double riemann_sq = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double R = dgamma[c][a][d][b] - dgamma[d][a][c][b];
                    for (int e = 0; e < 4; ++e)
                        R += gamma_val[a][c][e] * gamma_val[e][d][b] -
                             gamma_val[a][d][e] * gamma_val[e][c][b];
                    riemann_sq += R * R;
                }
    out.riemann_norm = std::sqrt(riemann_sq);
    return out;
}

} // namespace

CurvatureSample curvature(const MetricJets& mj) {
    if (mj.sample.degenerate) throw std::domain_error("curvature at a degenerate metric sample");
    return curvature_from_jets(mj.g);
}

namespace {

nlohmann::ordered_json provenance(const MetricSample& s, const char* branch) {
    nlohmann::ordered_json j;
    j["point"] = {s.p.real(), s.p.imag(), s.z.real(), s.z.imag()};
    j["branch"] = branch;
    j["rho"] = s.rho;
    return j;
}

} // namespace

std::string to_json(const MetricSample& s, const char* branch) {
    nlohmann::ordered_json j = provenance(s, branch);
    j["degenerate"] = s.degenerate;
    j["delta"] = s.delta;
    j["delta_plus"] = s.delta_plus;
    if (!s.degenerate) {
        std::array<std::array<double, 4>, 4> g{};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) g[a][b] = s.g(a, b);
        j["g"] = g;
        j["det_g"] = s.det_g;
        j["imag_residual"] = s.imag_residual;
        j["signature"] = {{"positive", s.sig.positive},
                          {"negative", s.sig.negative},
                          {"near_zero", s.sig.near_zero}};
    }
    return j.dump();
}

std::string to_json(const CurvatureSample& c, const MetricSample& at, const char* branch) {
    nlohmann::ordered_json j = provenance(at, branch);
    j["ricci_norm"] = c.ricci_norm;
    j["riemann_norm"] = c.riemann_norm;
    j["sym_residual"] = c.sym_residual;
    std::array<std::array<double, 4>, 4> ric{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) ric[a][b] = c.ricci(a, b);
    j["ricci"] = ric;
    return j.dump();
}

CurvatureSample curvature_fd(const MetricPointField& field, const std::array<double, 4>& x0,
                             double h) {
    const JetLayout& L = JetLayout::get(4, 2);
    std::array<std::array<Jet, 4>, 4> gj;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gj[i][j] = Jet::zero(4, 2);
    const auto put = [&](const Eigen::Matrix4d& m, int rank) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) gj[i][j].coeff_by_rank(rank) += m(i, j);
    };

    const Eigen::Matrix4d g0 = field(x0);
    put(g0, 0);
    for (int a = 0; a < 4; ++a) {
        auto xp = x0, xm = x0;
        xp[a] += h;
        xm[a] -= h;
        const Eigen::Matrix4d gp = field(xp), gm = field(xm);
        int mi[4] = {0, 0, 0, 0};
        mi[a] = 1;
        put((gp - gm) / (2 * h), L.rank(std::span<const int>(mi, 4)));
        mi[a] = 2;
        // Taylor coefficient of Δx_a² is half the second derivative
        put((gp - 2 * g0 + gm) / (2 * h * h), L.rank(std::span<const int>(mi, 4)));
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            auto xpp = x0, xpm = x0, xmp = x0, xmm = x0;
            xpp[a] += h;
            xpp[b] += h;
            xpm[a] += h;
            xpm[b] -= h;
            xmp[a] -= h;
            xmp[b] += h;
            xmm[a] -= h;
            xmm[b] -= h;
            const Eigen::Matrix4d cross =
                (field(xpp) - field(xpm) - field(xmp) + field(xmm)) / (4 * h * h);
            int mi[4] = {0, 0, 0, 0};
            mi[a] = 1;
            mi[b] = 1;
            put(cross, L.rank(std::span<const int>(mi, 4)));
        }
    }
    return curvature_from_jets(gj);
}

NoninvarianceReport noninvariance_indicator(const VJetField& field,
                                            std::span<const SamplePoint> points,
                                            const GeometryOptions& opt) {
    if (points.size() < 10)
        throw std::invalid_argument("noninvariance_indicator needs at least 10 samples");
    NoninvarianceReport rep;
    rep.grad_abs_min.fill(std::numeric_limits<double>::infinity());
    rep.riemann_min = std::numeric_limits<double>::infinity();
    double value_scale = 1.0;
    for (const SamplePoint& s : points) {
        const VJet vj = field(s.p, s.z, s.rho, 4);
        if (!vj.valid()) continue;
        static const std::array<std::array<int, 5>, 5> dirs{
            {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}}};
        for (int d = 0; d < 5; ++d) {
            const double gval = std::abs(vj.v.partial(std::span<const int>(dirs[d].data(), 5)));
            rep.grad_abs_min[d] = std::min(rep.grad_abs_min[d], gval);
            rep.grad_abs_max[d] = std::max(rep.grad_abs_max[d], gval);
        }
        value_scale = std::max(value_scale, std::abs(vj.v.value()));
        const MetricJets mj = transformed_metric_jets(vj.v, s.p, s.z, s.rho, opt);
        if (mj.sample.degenerate) continue;
        const CurvatureSample cs = curvature(mj);
        rep.riemann_min = std::min(rep.riemann_min, cs.riemann_norm);
        rep.riemann_max = std::max(rep.riemann_max, cs.riemann_norm);
        rep.samples_used += 1;
    }
    if (rep.samples_used == 0) {
        rep.riemann_min = 0;
        return rep;
    }
    rep.all_directions_active = true;
    for (int d = 0; d < 5; ++d) {
        if (!(rep.grad_abs_max[d] > 1e-10 * value_scale)) rep.all_directions_active = false;
    }
    rep.curvature_nontrivial = rep.riemann_min > 1e-8;
    return rep;
}

} // namespace heavenly
