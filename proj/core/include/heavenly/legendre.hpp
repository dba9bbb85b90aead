#pragma once

#include <functional>

#include "heavenly/spectral.hpp"

namespace heavenly {

enum class Branch : int { plus = +1, minus = -1 };
inline int branch_sign(Branch b) { return static_cast<int>(b); }

enum class LegendreStatus {
    ok,
    negative_discriminant,    // cubic: no real root on this branch
    degenerate_quadratic,     // cubic: k = l = 0
    nonpositive_radicand,     // exponential: rho^2 + 4GH <= 0
    nonpositive_log_argument, // exponential: chosen branch has no real logarithm
    zero_h,                   // exponential: H vanishes, quadratic in e^r degenerates
    newton_failed,
    fold_point,               // w_rr = 0 at the root: Legendre step not invertible
    singular_hessian          // 2d inversion: p-Hessian not invertible
};

const char* to_string(LegendreStatus);

/// Coefficients of k r^2 + 2 l r + m = 0, the root condition of the inverse
/// one-dimensional Legendre step for the cubic family. The tested
/// normalization against the direct expansion is w_r + rho = -3 (k r^2 + 2 l r + m).
struct QuadraticData {
    double k = 0, l = 0, m = 0;
    double discriminant = 0; // l^2 - k m
};

QuadraticData cubic_klm(const SpectralSolution&, Complex p, Complex z, double rho);

struct RootResult {
    double r = 0;
    LegendreStatus status = LegendreStatus::ok;
    bool valid() const { return status == LegendreStatus::ok; }
};

/// r = (-l + sign * sqrt(discriminant)) / k, with a linear fallback for k = 0.
RootResult solve_r(const QuadraticData&, Branch);

/// A physical sample with its solved Legendre parameter. When valid,
/// w_r(p, p̄, z, z̄, r) + rho = 0 holds to 1e-10 of the local scale, and for
/// the cubic family so does k r² + 2 l r + m = 0.
struct LegendrePoint {
    Complex p, z;
    double rho = 0;
    Branch branch = Branch::plus;
    double r = 0;
    LegendreStatus status = LegendreStatus::ok;
    bool valid() const { return status == LegendreStatus::ok; }
};

/// Solve the branch root for any two-mode family (closed forms) or a general
/// solution (implicit Newton from r = 0, branch ignored).
LegendrePoint solve_legendre_point(const SpectralSolution&, Complex p, Complex z, double rho,
                                   Branch);

/// Auxiliary polynomial values of the cubic closed form,
/// v = (P3 + sign * sqrt(discriminant) * P2) / k^3.
struct CubicVData {
    double P2 = 0, P3 = 0;
    double s_alpha = 0, s_beta = 0, l_alpha = 0, l_beta = 0;
};

struct CubicV {
    double v = 0, r = 0;
    QuadraticData quad;
    CubicVData data;
    LegendreStatus status = LegendreStatus::ok;
    bool valid() const { return status == LegendreStatus::ok; }
};
CubicV cubic_v(const SpectralSolution&, Complex p, Complex z, double rho, Branch);

struct ExpV {
    double v = 0, r = 0;
    double G = 0, H = 0;
    double radicand = 0; // rho^2 + 4 G H
    LegendreStatus status = LegendreStatus::ok;
    bool valid() const { return status == LegendreStatus::ok; }
};
/// v = sign * sqrt(rho^2 + 4GH) + rho * log((-rho + sign * sqrt(rho^2 + 4GH)) / (2H)).
ExpV exp_v(const SpectralSolution&, Complex p, Complex z, double rho, Branch);

/// Scalar G and H of the exponential family on the real slice.
struct ExpGH {
    double G = 0, H = 0;
};
ExpGH exp_gh(const SpectralSolution&, Complex p, Complex z);

/// Closed-form order-`order` jet of v in (p, p̄, z, z̄, ρ) at a real-slice point.
struct VJet {
    Jet v;
    double r = 0;
    LegendreStatus status = LegendreStatus::ok;
    bool valid() const { return status == LegendreStatus::ok; }
};
VJet cubic_v_jet(const SpectralSolution&, Complex p, Complex z, double rho, Branch, int order = 4);
VJet exp_v_jet(const SpectralSolution&, Complex p, Complex z, double rho, Branch, int order = 4);

/// w as a jet at the real-slice point (p, conj p, z, conj z, r).
using WField = std::function<Jet(Complex p, Complex z, double r, int order)>;

WField make_w_field(const SpectralSolution&);

struct ImplicitOptions {
    double tol = 1e-12;
    int max_iter = 50;
    double fold_eps = 1e-10;
};

struct ImplicitV {
    double r = 0, v = 0;
    Jet v_jet; // order-`order` jet in (p, p̄, z, z̄, ρ)
    LegendreStatus status = LegendreStatus::ok;
    int iterations = 0;
    bool valid() const { return status == LegendreStatus::ok; }
};

/// Generic inverse one-dimensional Legendre step: Newton-solve w_r + rho = 0
/// from seed_r, set v = w + rho r, and propagate all partials of v through the
/// implicit dependence r(p, p̄, z, z̄, ρ) by jet-space Newton iteration.
ImplicitV implicit_legendre(const WField&, Complex p, Complex z, double rho, double seed_r,
                            int order = 4, const ImplicitOptions& = {});

/// Determinant of the w-Hessian in (p, p̄, r): the existence condition for the
/// three-dimensional Legendre transformation. Real part returned; the value is
/// real on the real slice. |det| near zero flags a degenerate sample.
double legendre_existence_det(const Jet& w_jet);

/// Field of closed-form (or, for general solutions, implicit) v jets.
using VJetField = std::function<VJet(Complex p, Complex z, double rho, int order)>;
VJetField make_v_field(const SpectralSolution&, Branch);

struct Invert2dOptions {
    double tol = 1e-12;
    int max_iter = 50;
    double fd_step = 1e-2; // base step of the CMA finite-difference check
};

struct Invert2d {
    Complex p;               // solved physical coordinate
    double u = 0;            // reconstructed potential
    double cma_residual = 0; // finite-difference residual of the Monge-Ampère equation
    double fd_error = 0;     // step-halving error estimate of the residual
    Complex u_11b, u_12b, u_21b, u_22b; // finite-difference complex Hessian of u
    LegendreStatus status = LegendreStatus::ok;
    int iterations = 0;
    bool valid() const { return status == LegendreStatus::ok; }
};

/// Inverse of the two-dimensional Legendre map: solve v_p = -z1 for p on the
/// real slice, reconstruct u = v + p z1 + conj(p) conj(z1), and check the
/// Monge-Ampère equation (epsilon = +1) by Richardson-extrapolated finite
/// differences in (z1, z̄1, z2, z̄2).
Invert2d invert_legendre_2d(const VJetField&, Complex z1, Complex z, double rho, Complex seed_p,
                            const Invert2dOptions& = {});

} // namespace heavenly
