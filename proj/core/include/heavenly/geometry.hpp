#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>

#include "heavenly/legendre.hpp"

namespace heavenly {

struct SignatureRecord {
    int positive = 0;
    int negative = 0;
    int near_zero = 0; // eigenvalues below eigen_eps * ||g||
    bool degenerate() const { return near_zero > 0; }
    bool definite() const { return near_zero == 0 && (positive == 4 || negative == 4); }
    int sign() const { return definite() ? (positive == 4 ? +1 : -1) : 0; }
};

/// Eigenvalue sign count of a symmetric 4x4 metric.
SignatureRecord signature(const Eigen::Matrix4d& g, double eigen_eps = 1e-10);

struct GeometryOptions {
    double degeneracy_eps = 1e-10; // cutoff for |v_pp̄| and |Δ| relative to the Hessian scale
    double eigen_eps = 1e-10;
};

/// Pointwise data of the Legendre-transformed metric in the real coordinates
/// (Re p, Im p, Re z, Im z) with ρ fixed; dp = dx1 + i dx2, dz = dx3 + i dx4.
struct MetricSample {
    Complex p, z;
    double rho = 0;
    Complex v_pp, v_pbpb, v_ppb, v_pbz, v_pzb, v_zzb; // coefficient functions of the metric
    double delta = 0;         // v_pp v_p̄p̄ − v_pp̄²  (real on the real slice)
    double delta_plus = 0;    // v_pp v_p̄p̄ + v_pp̄²
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
    double det_g = 0;
    double imag_residual = 0; // largest |Im| of a metric entry relative to the entry scale
    SignatureRecord sig;
    bool degenerate = false;  // v_pp̄ or Δ below the degeneracy cutoff
};

/// The metric and its derivatives: order-2 jets of g_ab in the 4 real
/// coordinates, enough for exact Christoffel symbols and Ricci curvature.
struct MetricJets {
    std::array<std::array<Jet, 4>, 4> g;
    MetricSample sample;
};

/// Kähler metric 2 u_{jk̄} dz^j dz̄^k of a potential jet in (z1, z̄1, z2, z̄2),
/// as the real 4x4 matrix in (Re z1, Im z1, Re z2, Im z2).
Eigen::Matrix4d kahler_metric(const Jet& u_jet);
/// Same, from externally computed complex Hessian entries.
Eigen::Matrix4d kahler_metric(Complex u_11b, Complex u_12b, Complex u_21b, Complex u_22b);

/// Legendre-transformed metric at a real-slice point. Requires a v jet of
/// order >= 2; curvature users need transformed_metric_jets with order >= 4.
MetricSample transformed_metric(const Jet& v_jet, Complex p, Complex z, double rho,
                                const GeometryOptions& = {});
MetricJets transformed_metric_jets(const Jet& v_jet, Complex p, Complex z, double rho,
                                   const GeometryOptions& = {});

/// Connection and curvature at one point. Ricci-flatness is the certified
/// property; decomposing the Riemann tensor further (Weyl, anti-self-duality)
/// is not implemented.
struct CurvatureSample {
    std::array<std::array<std::array<double, 4>, 4>, 4> christoffel{}; // Γ^a_{bc}
    Eigen::Matrix4d ricci = Eigen::Matrix4d::Zero();
    double ricci_norm = 0;    // Frobenius norm of R_{bc}
    double riemann_norm = 0;  // Frobenius norm of R^a_{bcd}; scale indicator
    double sym_residual = 0;  // ||R_{bc} − R_{cb}||
};

/// Curvature from exact metric derivatives (order-2 metric jets).
/// Ricci convention: R_{bc} = ∂_a Γ^a_{bc} − ∂_c Γ^a_{ba} + Γ^a_{ae} Γ^e_{bc} − Γ^a_{ce} Γ^e_{ba}.
CurvatureSample curvature(const MetricJets&);

/// Single-line JSON records with full coordinate provenance.
std::string to_json(const MetricSample&, const char* branch);
std::string to_json(const CurvatureSample&, const MetricSample& at, const char* branch);

/// Point sampler of a metric field, used by the finite-difference cross-check.
using MetricPointField = std::function<Eigen::Matrix4d(const std::array<double, 4>&)>;

/// Independent cross-check: build the metric derivative jets by central finite
/// differences of point samples and run the same curvature assembly.
CurvatureSample curvature_fd(const MetricPointField&, const std::array<double, 4>& x0,
                             double fd_step);

struct SamplePoint {
    Complex p, z;
    double rho = 0;
};

/// Necessary indicators that a transformed potential has no symmetry
/// reduction: every coordinate direction carries a nonvanishing gradient
/// somewhere in the sample, and the curvature is nontrivial at every valid
/// sample. Not a proof of the absence of Killing vectors.
struct NoninvarianceReport {
    std::array<double, 5> grad_abs_min{};
    std::array<double, 5> grad_abs_max{};
    double riemann_min = 0;
    double riemann_max = 0;
    int samples_used = 0;
    bool all_directions_active = false;
    bool curvature_nontrivial = false;
};
NoninvarianceReport noninvariance_indicator(const VJetField&, std::span<const SamplePoint>,
                                            const GeometryOptions& = {});

} // namespace heavenly
