#include <doctest.h>

#include <cmath>

#include "heavenly/residuals.hpp"
#include "heavenly/spectral.hpp"
#include "oracles.hpp"

using namespace heavenly;

namespace {

constexpr Complex kI{0.0, 1.0};

std::array<double, 5> random_box_point(oracles::ValueGen& gen) {
    return {gen.next(-2, 2), gen.next(-2, 2), gen.next(-2, 2), gen.next(-2, 2), gen.next(-2, 2)};
}

} // namespace

TEST_CASE("building blocks at alpha = 0 collapse to sums") {
    const PointJets pj = PointJets::at({1, 2}, {1, -2}, {3, 1}, {3, -1}, 1.0, 2);
    const BuildingBlocks bb = building_blocks(0.0, pj);
    CHECK(std::abs(bb.xi.value() - Complex{2.0}) < 1e-15);
    CHECK(std::abs(bb.mu.value() - Complex{-6.0}) < 1e-15);
    CHECK(bb.gamma == 1.0);
    CHECK(std::abs(bb.eta.value() - Complex{-5.0}) < 1e-15);
}

TEST_CASE("building blocks at alpha = 1") {
    const PointJets pj = PointJets::real_slice({1, 2}, {3, 1}, 2.0, 2);
    const BuildingBlocks bb = building_blocks(1.0, pj);
    CHECK(std::abs(bb.xi.value() - Complex{6.0}) < 1e-14);
    CHECK(std::abs(bb.mu.value() - Complex{-2.0}) < 1e-14);
    CHECK(bb.gamma == 2.0);
    CHECK(std::abs(bb.eta.value()) < 1e-14);
}

TEST_CASE("building blocks are real on the real slice") {
    oracles::ValueGen gen{{31}};
    for (int t = 0; t < 10; ++t) {
        const auto x = random_box_point(gen);
        const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 2);
        const double alpha = gen.next(-3, 3);
        const BuildingBlocks bb = building_blocks(alpha, pj);
        CHECK(std::abs(bb.xi.value().imag()) < 1e-14);
        CHECK(std::abs(bb.mu.value().imag()) < 1e-14);
        CHECK(std::abs(bb.eta.value().imag()) < 1e-14);
    }
}

TEST_CASE("cubic solution values") {
    SUBCASE("xi = 0 annihilates both monomials") {
        const SpectralSolution sol = cubic_family(1, 0, 0, 0, 0, 1);
        const PointJets pj = PointJets::real_slice({0, 0}, {0, 0}, 1.0, 2);
        CHECK(std::abs(cubic_w(sol, pj).value()) < 1e-15);
    }
    SUBCASE("A-only mode at p = 1, z = 0, r = 0 gives xi^3 = 8") {
        const SpectralSolution sol = cubic_family(1, 0, 0, 0, 0, 1);
        const PointJets pj = PointJets::real_slice({1, 0}, {0, 0}, 0.0, 2);
        CHECK(std::abs(cubic_w(sol, pj).value() - Complex{8.0}) < 1e-14);
    }
}

TEST_CASE("cubic solution is exactly cubic: all order-4 coefficients vanish") {
    oracles::ValueGen gen{{37}};
    const SpectralSolution sol = cubic_family(1.0, -0.7, 0.4, 1.3, 0.6, -1.1);
    const auto x = random_box_point(gen);
    const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 4);
    const Jet w = cubic_w(sol, pj);
    double top = 0;
    const JetLayout& L = w.layout();
    for (int r = L.count_up_to_degree(3); r < L.size(); ++r)
        top = std::max(top, std::abs(w.coeff_by_rank(r)));
    CHECK(top < 1e-12 * w.max_abs());
}

TEST_CASE("cubic solution satisfies all six linear equations at random points") {
    oracles::ValueGen gen{{41}};
    const SpectralSolution sol = cubic_family(1.2, -0.5, 0.8, 0.9, 0.3, -0.8);
    for (int t = 0; t < 50; ++t) {
        const auto x = random_box_point(gen);
        const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 2);
        const LinearResiduals res = linear_system_residuals(cubic_w(sol, pj));
        CHECK(res.max_rel() < 1e-9);
    }
}

TEST_CASE("exponential solution: theta = 0 reduces G to e^{z+zbar} (A cos + C sin)") {
    const double A = 1.3, C = -0.6;
    const SpectralSolution sol = exp_family(A, 0.4, C, 0.2, 0.0, 0.0);
    oracles::ValueGen gen{{43}};
    for (int t = 0; t < 5; ++t) {
        const auto x = random_box_point(gen);
        const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 2);
        const ExpW ew = exp_w(sol, pj);
        const double expected =
            std::exp(2 * x[2]) * (A * std::cos(2 * x[0]) + C * std::sin(2 * x[0]));
        CHECK(std::abs(ew.G.value().real() - expected) < 1e-12 * std::max(1.0, std::abs(expected)));
        CHECK(std::abs(ew.G.value().imag()) < 1e-12);
    }
}

TEST_CASE("exponential solution at the symmetric point is 2 cosh r") {
    const SpectralSolution sol = exp_family(1, 1, 0, 0, 0, 0);
    for (double r : {0.0, 0.5, -1.2}) {
        const PointJets pj = PointJets::real_slice({0, 0}, {0, 0}, r, 2);
        const ExpW ew = exp_w(sol, pj);
        CHECK(std::abs(ew.G.value() - Complex{1.0}) < 1e-14);
        CHECK(std::abs(ew.H.value() - Complex{1.0}) < 1e-14);
        CHECK(std::abs(ew.w.value().real() - 2 * std::cosh(r)) < 1e-14);
    }
}

TEST_CASE("exp_w equals the spectral-mode evaluation") {
    oracles::ValueGen gen{{47}};
    const SpectralSolution sol = exp_family(0.9, -1.1, 0.5, 0.7, 0.35, -0.6);
    for (int t = 0; t < 10; ++t) {
        const auto x = random_box_point(gen);
        const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 3);
        const Jet direct = eval_w(sol, pj);
        const Jet viaGH = exp_w(sol, pj).w;
        CHECK((direct - viaGH).max_abs() < 1e-12 * std::max(1.0, direct.max_abs()));
    }
}

TEST_CASE("exponential solution satisfies all six linear equations") {
    oracles::ValueGen gen{{53}};
    const SpectralSolution sol = exp_family(1.0, 0.8, -0.4, 0.3, 0.5, -0.25);
    for (int t = 0; t < 50; ++t) {
        const auto x = random_box_point(gen);
        const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 2);
        const LinearResiduals res = linear_system_residuals(eval_w(sol, pj));
        CHECK(res.max_rel() < 1e-9);
    }
}

TEST_CASE("reality: real-slice values and real-direction derivatives are real") {
    oracles::ValueGen gen{{59}};
    const SpectralSolution cub = cubic_family(1.0, 0.5, 1.0 / 3, -0.75, 0.25, -2.0 / 3);
    const SpectralSolution ex = exp_family(1.0, 0.5, 1.0 / 3, -0.25, 0.25, -2.0 / 3);
    for (const auto& sol : {cub, ex}) {
        for (int t = 0; t < 10; ++t) {
            const auto x = random_box_point(gen);
            const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 4);
            const Jet w = eval_w(sol, pj);
            // real-direction derivatives are conjugate-symmetric coefficient
            // combinations; check representative ones
            const Complex d_rep = w.partial({1, 0, 0, 0, 0}) + w.partial({0, 1, 0, 0, 0});
            const Complex d_imp = kI * (w.partial({0, 1, 0, 0, 0}) - w.partial({1, 0, 0, 0, 0}));
            const Complex d_r = w.partial({0, 0, 0, 0, 1});
            const double scale = std::max(1.0, w.max_abs());
            CHECK(std::abs(w.value().imag()) < 1e-12 * scale);
            CHECK(std::abs(d_rep.imag()) < 1e-12 * scale);
            CHECK(std::abs(d_imp.imag()) < 1e-12 * scale);
            CHECK(std::abs(d_r.imag()) < 1e-12 * scale);
        }
    }
}

TEST_CASE("superpose is linear and keeps the solution property") {
    oracles::ValueGen gen{{61}};
    const SpectralSolution cub = cubic_family(1.0, -0.3, 0.6, 0.2, 0.4, -0.9);
    const SpectralSolution ex = exp_family(0.7, 1.1, -0.2, 0.5, 0.15, -0.45);
    const std::vector<WeightedSolution> mix = {{0.6, cub}, {-1.7, ex}};
    const auto x = random_box_point(gen);
    const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 2);

    SUBCASE("sum of solutions solves the linear system") {
        const LinearResiduals res = linear_system_residuals(superpose(mix, pj));
        CHECK(res.max_rel() < 1e-9);
    }
    SUBCASE("weighted sum equals the sum of weighted terms") {
        const Jet s = superpose(mix, pj);
        const Jet manual = 0.6 * eval_w(cub, pj) - 1.7 * eval_w(ex, pj);
        CHECK((s - manual).max_abs() < 1e-13 * std::max(1.0, manual.max_abs()));
    }
    SUBCASE("single term with unit weight is the term") {
        const std::vector<WeightedSolution> one = {{1.0, cub}};
        CHECK((superpose(one, pj) - eval_w(cub, pj)).max_abs() == 0.0);
    }
    SUBCASE("ten-node quadrature of the continuous spectrum still solves") {
        std::vector<WeightedSolution> quad;
        for (int n = 0; n < 10; ++n) {
            const double alpha = -1.5 + 3.0 * n / 9.0;
            const double weight = 0.1 * (1.0 + 0.5 * std::sin(alpha)); // smooth amplitude
            quad.push_back({weight, power_family(3, 1.0, 0.5, alpha)});
        }
        const LinearResiduals res = linear_system_residuals(superpose(quad, pj));
        CHECK(res.max_rel() < 1e-9);
    }
    SUBCASE("empty superposition throws") {
        const std::vector<WeightedSolution> none;
        CHECK_THROWS_AS((void)superpose(none, pj), std::invalid_argument);
    }
}

TEST_CASE("power profiles solve the system; quadratic has constant Hessian") {
    oracles::ValueGen gen{{67}};
    for (int n = 1; n <= 4; ++n) {
        const SpectralSolution sol = power_family(n, 1.0, 0.4, 0.8);
        const auto x = random_box_point(gen);
        const PointJets pj = PointJets::real_slice({x[0], x[1]}, {x[2], x[3]}, x[4], 3);
        const LinearResiduals res = linear_system_residuals(eval_w(sol, pj));
        CHECK(res.max_rel() < 1e-9);
    }
    SUBCASE("n = 2 gives constant second derivatives") {
        const SpectralSolution sol = power_family(2, 1.0, 0.4, 0.8);
        CHECK(geometrically_trivial(sol));
        const PointJets a = PointJets::real_slice({0.3, -0.2}, {0.5, 0.1}, 0.7, 2);
        const PointJets b = PointJets::real_slice({-1.1, 0.9}, {0.2, -0.6}, -0.4, 2);
        const Jet wa = eval_w(sol, a), wb = eval_w(sol, b);
        CHECK(std::abs(wa.partial({2, 0, 0, 0, 0}) - wb.partial({2, 0, 0, 0, 0})) < 1e-13);
        CHECK(std::abs(wa.partial({1, 1, 0, 0, 0}) - wb.partial({1, 1, 0, 0, 0})) < 1e-13);
        CHECK(std::abs(wa.partial({0, 0, 0, 0, 2}) - wb.partial({0, 0, 0, 0, 2})) < 1e-13);
    }
    CHECK(!geometrically_trivial(cubic_family(1, 0, 0, 0, 0, 1)));
}

TEST_CASE("parameter records round-trip through text exactly") {
    FamilyParams fp;
    fp.family = Family::exponential;
    fp.A = 1.0 / 3.0;
    fp.B = -0.123456789012345678;
    fp.C = 2.5e-17;
    fp.D = 4.0;
    fp.alpha = 0.1 + 0.2; // not exactly 0.3
    fp.beta = -1e300;
    const std::string text = to_text(fp);
    const FamilyParams back = family_params_from_text(text);
    CHECK(back.family == fp.family);
    CHECK(back.A == fp.A);
    CHECK(back.B == fp.B);
    CHECK(back.C == fp.C);
    CHECK(back.D == fp.D);
    CHECK(back.alpha == fp.alpha);
    CHECK(back.beta == fp.beta);
    CHECK_THROWS_AS((void)family_params_from_text("A=1 B=2"), std::invalid_argument);
    CHECK_THROWS_AS((void)family_params_from_text("family=cubic Q=1"), std::invalid_argument);
}

TEST_CASE("family validation") {
    const SpectralSolution cub = cubic_family(1, 0, 0, 0, 0, 1);
    const SpectralSolution ex = exp_family(1, 1, 0, 0, 0, 0);
    const PointJets pj = PointJets::real_slice({0, 0}, {0, 0}, 0, 2);
    CHECK(is_cubic_family(cub));
    CHECK(is_exp_family(ex));
    CHECK(!is_cubic_family(ex));
    CHECK_THROWS_AS((void)cubic_w(ex, pj), std::invalid_argument);
    CHECK_THROWS_AS((void)exp_w(cub, pj), std::invalid_argument);
    CHECK_THROWS_AS((void)power_family(5, 1, 0, 0), std::invalid_argument);
}
