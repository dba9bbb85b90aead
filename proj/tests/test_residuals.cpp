#include <doctest.h>

#include <cmath>

#include "heavenly/legendre.hpp"
#include "heavenly/residuals.hpp"
#include "oracles.hpp"

using namespace heavenly;

namespace {

Jet u4(int var, Complex value, int order = 2) { return Jet::variable(var, value, 4, order); }

} // namespace

TEST_CASE("Monge-Ampère residual on quadratic potentials") {
    const Complex z1{0.4, 0.7}, z2{-0.3, 0.2};
    const Jet a = u4(0, z1), ab = u4(1, std::conj(z1));
    const Jet b = u4(2, z2), bb = u4(3, std::conj(z2));
    SUBCASE("flat potential") { CHECK(cma_residual(a * ab + b * bb, +1) == 0.0); }
    SUBCASE("doubled first block leaves residual 1") {
        CHECK(cma_residual(2.0 * (a * ab) + b * bb, +1) == 1.0);
    }
    SUBCASE("split signature solves the hyperbolic variant") {
        CHECK(cma_residual(a * ab - b * bb, -1) == 0.0);
    }
}

TEST_CASE("symmetry condition residual") {
    const Complex z1{0.4, 0.7}, z2{-0.3, 0.2};
    const Jet a = u4(0, z1), ab = u4(1, std::conj(z1));
    const Jet b = u4(2, z2), bb = u4(3, std::conj(z2));
    const Jet u = a * ab + b * bb;
    SUBCASE("u itself is not a characteristic on the flat solution") {
        CHECK(symmetry_condition_residual(u, u) == Complex{2.0});
    }
    SUBCASE("constants are always symmetries") {
        CHECK(std::abs(symmetry_condition_residual(u, Jet::constant(3.7, 4, 2))) == 0.0);
    }
    SUBCASE("linear characteristics always satisfy the condition") {
        CHECK(std::abs(symmetry_condition_residual(u, a)) == 0.0);
    }
}

TEST_CASE("linear system residuals on hand-checked solutions") {
    const PointJets pj = PointJets::real_slice({0.7, -0.4}, {0.3, 0.9}, 0.6, 2);
    SUBCASE("w = (p + pbar)^2 - (r - z - zbar)^2 solves all six") {
        const Jet w = (pj.p + pj.pbar) * (pj.p + pj.pbar) -
                      (pj.r - pj.z - pj.zbar) * (pj.r - pj.z - pj.zbar);
        const LinearResiduals res = linear_system_residuals(w);
        for (int e = 0; e < 6; ++e) {
            CAPTURE(e);
            CHECK(std::abs(res.residual[e]) < 1e-14);
        }
    }
    SUBCASE("w = p r breaks exactly the third equation") {
        const LinearResiduals res = linear_system_residuals(pj.p * pj.r);
        CHECK(res.residual[2] == Complex{1.0});
        for (int e : {0, 1, 3, 4, 5}) CHECK(std::abs(res.residual[e]) == 0.0);
    }
    SUBCASE("lambda enters the second equation with its phase") {
        // w = p^2 + (2 / lambda) z r solves equation 1 for that lambda only
        const Complex lambda{0.0, 1.0};
        const Jet w = pj.p * pj.p + (2.0 / lambda) * (pj.z * pj.r);
        const LinearResiduals res = linear_system_residuals(w, lambda);
        CHECK(std::abs(res.residual[1]) < 1e-14);
        const LinearResiduals wrong = linear_system_residuals(w, Complex{1.0});
        CHECK(std::abs(wrong.residual[1]) > 1.0);
    }
}

TEST_CASE("linearity of the residual evaluators is exact") {
    oracles::ValueGen gen{{139}};
    const PointJets pj = PointJets::real_slice({gen.next(-2, 2), gen.next(-2, 2)},
                                               {gen.next(-2, 2), gen.next(-2, 2)},
                                               gen.next(-2, 2), 2);
    Jet w1 = Jet::zero(5, 2), w2 = Jet::zero(5, 2);
    for (int r = 0; r < w1.layout().size(); ++r) {
        w1.coeff_by_rank(r) = gen.next_complex();
        w2.coeff_by_rank(r) = gen.next_complex();
    }
    const double a = 2.5, b = -1.25; // exactly representable
    const LinearResiduals r1 = linear_system_residuals(w1);
    const LinearResiduals r2 = linear_system_residuals(w2);
    const LinearResiduals rc = linear_system_residuals(a * w1 + b * w2);
    for (int e = 0; e < 6; ++e) {
        CAPTURE(e);
        // equality up to reassociation of the floating-point sums
        CHECK(std::abs(rc.residual[e] - (a * r1.residual[e] + b * r2.residual[e])) <
              4e-15 * std::max(1.0, std::abs(rc.residual[e])));
    }
    (void)pj;
}

TEST_CASE("conjugation symmetry on the real slice") {
    oracles::ValueGen gen{{149}};
    const SpectralSolution sol = cubic_family(1.0, -0.2, 0.0, 0.9, 0.45, -0.3);
    // a generic non-solution real jet: conjugate-symmetrize a random one
    for (int t = 0; t < 5; ++t) {
        const PointJets pj = PointJets::real_slice({gen.next(-2, 2), gen.next(-2, 2)},
                                                   {gen.next(-2, 2), gen.next(-2, 2)},
                                                   gen.next(-2, 2), 2);
        // real combination of solution pieces plus a real-slice-symmetric monomial
        const Jet w = eval_w(sol, pj) + (pj.p * pj.pbar) * (pj.z + pj.zbar);
        const LinearResiduals res = linear_system_residuals(w);
        CHECK(std::abs(res.residual[3] - std::conj(res.residual[1])) < 1e-13);
        CHECK(std::abs(res.residual[4] - std::conj(res.residual[2])) < 1e-13);
    }
}

TEST_CASE("transformed Monge-Ampère residual") {
    const Complex pv{0.4, 0.7}, zv{-0.3, 0.2};
    const Jet p = Jet::variable(kP, pv, 5, 2);
    const Jet pb = Jet::variable(kPbar, std::conj(pv), 5, 2);
    const Jet z = Jet::variable(kZ, zv, 5, 2);
    const Jet zb = Jet::variable(kZbar, std::conj(zv), 5, 2);
    SUBCASE("constant-Hessian solution") {
        CHECK(transformed_cma_residual(p * pb + p * zb + pb * z).residual == 0.0);
    }
    SUBCASE("product potential gives exactly -2") {
        const TransformedCma res = transformed_cma_residual(p * pb + z * zb);
        CHECK(res.residual == -2.0);
        CHECK(res.scale == 1.0);
    }
}

TEST_CASE("scale floor keeps relative residuals stable under magnification") {
    // when all terms of an equation scale together and sit above the floor,
    // the relative residual is invariant under w -> c w
    const PointJets pj = PointJets::real_slice({1.2, -0.8}, {0.4, 1.1}, 0.9, 2);
    const Jet w = (pj.p * pj.p) * 2.0 + (pj.z * pj.r) * 3.0 + pj.p * pj.r;
    const LinearResiduals r1 = linear_system_residuals(w);
    const LinearResiduals r2 = linear_system_residuals(w * 1000.0);
    for (int e = 0; e < 6; ++e) {
        if (std::abs(r1.residual[e]) == 0.0) continue;
        if (r1.scale[e] <= 1.0) continue; // floor binds below magnification
        CAPTURE(e);
        CHECK(std::abs(r2.residual[e]) / r2.scale[e] ==
              doctest::Approx(std::abs(r1.residual[e]) / r1.scale[e]).epsilon(1e-12));
    }
}

TEST_CASE("transformed residual on closed-form potentials stays at round-off") {
    oracles::ValueGen gen{{151}};
    const SpectralSolution sol = cubic_family(1.0, 0.5, 1.0 / 3, -0.75, 0.25, -2.0 / 3);
    int checked = 0;
    for (int t = 0; t < 100 && checked < 40; ++t) {
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(-2, 2);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const VJet vj = cubic_v_jet(sol, p, z, rho, b, 2);
            if (!vj.valid()) continue;
            const TransformedCma res = transformed_cma_residual(vj.v);
            CHECK(std::abs(res.residual) < 1e-10 * res.scale);
            checked += 1;
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("residual report accumulates worst cases and serializes") {
    ResidualReport rep;
    rep.equation_id = "w_ppb + w_rr";
    rep.tolerance = 1e-9;
    rep.add_sample(1e-12, 1.0, {1, 2, 3, 4, 5});
    rep.add_sample(-3e-11, 2.0, {0.5, 0, 0, 0, 0});
    rep.add_sample(2e-12, 1.0, {0, 0, 0, 0, 0});
    CHECK(rep.samples == 3);
    CHECK(rep.max_abs == 3e-11);
    CHECK(rep.max_rel == doctest::Approx(1.5e-11));
    CHECK(rep.worst_point[0] == 0.5);
    CHECK(rep.pass());
    const std::string json = rep.to_json();
    CHECK(json.find("\"equation_id\":\"w_ppb + w_rr\"") != std::string::npos);
    CHECK(json.find("\"samples\":3") != std::string::npos);
    CHECK(json.find("\"verdict\":\"pass\"") != std::string::npos);
    CHECK(json.find('\n') == std::string::npos); // one line per record

    ResidualReport other = rep;
    other.add_sample(5e-8, 1.0, {9, 9, 9, 9, 9});
    rep.merge(other);
    CHECK(rep.samples == 7);
    CHECK(!rep.pass());
    CHECK(rep.worst_point[0] == 9);
}
