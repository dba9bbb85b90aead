#pragma once

#include <span>
#include <string>
#include <vector>

#include "heavenly/jet.hpp"

namespace heavenly {

/// Variable order used by every 5-variable jet in this library:
/// w-space jets are expanded in (p, p̄, z, z̄, r), potential-space jets in
/// (p, p̄, z, z̄, ρ).
enum Var5 : int { kP = 0, kPbar = 1, kZ = 2, kZbar = 3, kR = 4, kRho = 4 };

enum class Profile { power, exponential };

/// One spectral mode F(ξ_α + iη_α) plus its implicit conjugate partner.
///
/// The conjugate partner has amplitude conj(amplitude) and argument ξ − iη, so
/// the pair is real on the real slice p̄ = conj(p), z̄ = conj(z), r real.
struct SpectralTerm {
    double alpha = 0.0;      ///< real spectral parameter
    Complex amplitude{0.0};  ///< complex mode amplitude
    Profile profile = Profile::power;
    int power = 3;           ///< exponent for Profile::power (1..4)
    int exp_sign = +1;       ///< sign of i(ξ+iη)/√γ in the exponent (Profile::exponential)

    double gamma() const { return alpha * alpha + 1.0; }
};

/// A finite superposition of spectral modes; solves the six-equation linear
/// system by construction (any analytic profile does). The continuous
/// spectrum is realized as finite quadrature sums only — each node is itself
/// a solution, so no discretization error enters the residuals.
///
/// Only the real-slice (elliptic) families are built here. The holomorphic
/// variant with independent tilded coordinates and the hyperbolic-signature
/// families are intentionally out of scope.
struct SpectralSolution {
    std::vector<SpectralTerm> terms;
    Complex lambda{1.0, 0.0}; ///< unit-modulus constant of the linear system; builders fix 1
};

enum class Family { cubic, exponential, superposition };

/// User-facing constants of a two-mode family. A, C couple to the alpha mode
/// and B, D to the beta mode; all four are real.
struct FamilyParams {
    Family family = Family::cubic;
    double A = 1.0, B = 0.0, C = 0.0, D = 0.0;
    double alpha = 0.0, beta = 0.0;
};

SpectralSolution cubic_family(double A, double B, double C, double D, double alpha, double beta);
SpectralSolution exp_family(double A, double B, double C, double D, double alpha, double beta);
/// Single conjugate-pair power mode (n <= 4), amplitude convention as in the
/// cubic family. n = 2 gives constant metric coefficients downstream.
SpectralSolution power_family(int n, double A, double C, double alpha);
SpectralSolution make_solution(const FamilyParams&);

/// Recover (A, C) from a term's amplitude (inverse of the family builders).
double term_const_A(const SpectralTerm&);
double term_const_C(const SpectralTerm&);

/// Coordinate jets of a w-space sample (p, p̄, z, z̄, r).
struct PointJets {
    Jet p, pbar, z, zbar, r;

    static PointJets at(Complex p, Complex pbar, Complex z, Complex zbar, double r, int order);
    /// p̄ = conj(p), z̄ = conj(z): the slice where solutions are real.
    static PointJets real_slice(Complex p, Complex z, double r, int order);
    int order() const { return p.order(); }
};

/// ξ_α = p + p̄ + iα(p̄ − p), μ_α = ((α+i)/(α−i)) z + ((α−i)/(α+i)) z̄,
/// γ = α² + 1, η_α = √γ (r + μ_α).
struct BuildingBlocks {
    Jet xi, mu, eta;
    double gamma = 1.0;
};
BuildingBlocks building_blocks(double alpha, const PointJets& point);

/// ξ and μ for jets that are not tied to a w-space sample (no r involved).
void xi_mu(double alpha, const Jet& p, const Jet& pbar, const Jet& z, const Jet& zbar,
           Jet& xi, Jet& mu);

/// Evaluate the solution as a jet at the given point.
Jet eval_w(const SpectralSolution&, const PointJets&);

/// Two-mode cubic solution; requires exactly two power-3 terms.
Jet cubic_w(const SpectralSolution&, const PointJets&);

/// Two-mode exponential solution w = e^{−r} G + e^{r} H; requires exactly two
/// exponential terms with signs (+, −). G and H are jets without r dependence.
struct ExpW {
    Jet w, G, H;
};
ExpW exp_w(const SpectralSolution&, const PointJets&);

struct WeightedSolution {
    double weight = 1.0;
    SpectralSolution solution;
};
/// Weighted sum of solutions (a finite quadrature of the continuous spectrum
/// stays a solution term by term).
Jet superpose(std::span<const WeightedSolution>, const PointJets&);

/// True when every term is a power profile of degree <= 2 (constant metric
/// coefficients after the Legendre step, hence flat geometry).
bool geometrically_trivial(const SpectralSolution&);

bool is_cubic_family(const SpectralSolution&); // exactly two power-3 terms
bool is_exp_family(const SpectralSolution&);   // exactly two exponential terms, signs (+, -)

/// G and H factors of the exponential family, w = e^{−r} G + e^{r} H,
/// evaluated on arbitrary (p, p̄, z, z̄) jets.
struct GHJets {
    Jet G, H;
};
GHJets exp_profile_gh(const SpectralSolution&, const Jet& p, const Jet& pbar, const Jet& z,
                      const Jet& zbar);

/// Single-line parameter record: family tag and exact decimal constants.
std::string to_text(const FamilyParams&);
FamilyParams family_params_from_text(const std::string&); // throws std::invalid_argument

} // namespace heavenly
