#pragma once

#include <array>
#include <cmath>
#include <string>

#include "heavenly/jet.hpp"

namespace heavenly {

/// Monge-Ampère residual u_{11̄} u_{22̄} − u_{12̄} u_{21̄} − ε for a jet in
/// (z1, z̄1, z2, z̄2). Real part returned; real on the real slice.
double cma_residual(const Jet& u_jet, int epsilon = +1);

/// Linearization of the Monge-Ampère operator on u, applied to a candidate
/// symmetry characteristic φ:
/// u_{11̄} φ_{22̄} + u_{22̄} φ_{11̄} − u_{12̄} φ_{21̄} − u_{21̄} φ_{12̄}.
Complex symmetry_condition_residual(const Jet& u_jet, const Jet& phi_jet);

/// Residuals of the six constant-coefficient linear equations satisfied by
/// w(p, p̄, z, z̄, r), in the order
///   0: w_pp̄ + w_rr
///   1: w_pp − λ w_zr
///   2: w_pr + λ w_p̄z
///   3: w_p̄p̄ − conj(λ) w_z̄r
///   4: w_p̄r + conj(λ) w_pz̄
///   5: w_pp̄ + w_zz̄
/// scale[i] is the largest |term| of equation i floored at 1, so that
/// residual[i] / scale[i] is a meaningful relative residual at any magnitude.
///
/// These six are the final simplified forms of the Legendre-transformed
/// reduction chain. The intermediate quadratic forms the chain passes through
/// are linear combinations of these under the nondegeneracy of the
/// transformation (w_rr² + w_pr w_p̄r ≠ 0), so they are not evaluated
/// separately; neither is the eight-variable extended system upstream of the
/// reduction, whose content reaches the artifact only through these images.
struct LinearResiduals {
    std::array<Complex, 6> residual{};
    std::array<double, 6> scale{};
    double max_rel() const;
    static const std::array<const char*, 6>& equation_ids();
};
LinearResiduals linear_system_residuals(const Jet& w_jet, Complex lambda = Complex{1.0, 0.0});

/// Residual of the Legendre-transformed Monge-Ampère equation on
/// v(p, p̄, z, z̄, ρ): v_pz̄ v_p̄z − v_pp̄ v_zz̄ + v_pp v_p̄p̄ − v_pp̄².
struct TransformedCma {
    double residual = 0;
    double scale = 1; // largest |product term|, floored at 1
    double rel() const { return std::abs(residual) / scale; }
};
TransformedCma transformed_cma_residual(const Jet& v_jet);

/// Running worst-case residual statistics for one equation over a sample set.
struct ResidualReport {
    std::string equation_id;
    double tolerance = 0;
    long samples = 0;
    double max_abs = 0;
    double max_rel = 0;
    std::array<double, 5> worst_point{}; // coordinates of the max_rel sample

    void add_sample(double abs_residual, double scale, const std::array<double, 5>& point);
    void merge(const ResidualReport& other);
    bool pass() const { return max_rel <= tolerance; }
    /// One JSON object on a single line:
    /// {equation_id, samples, max_abs, max_rel, tolerance, verdict, worst_point}.
    std::string to_json() const;
};

} // namespace heavenly
