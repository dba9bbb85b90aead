#include <doctest.h>

#include <cmath>

#include "heavenly/legendre.hpp"
#include "heavenly/residuals.hpp"
#include "oracles.hpp"

using namespace heavenly;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}); }

const SpectralSolution kCubic = cubic_family(1.0, 0.5, 1.0 / 3, -0.75, 0.25, -2.0 / 3);
const SpectralSolution kExp = exp_family(1.0, 0.5, 1.0 / 3, -0.25, 0.25, -2.0 / 3);

} // namespace

TEST_CASE("k l m coefficients vanish as expected in degenerate configurations") {
    const SpectralSolution sol = cubic_family(1.0, 2.0, 0.0, 0.0, 0.3, -0.7);
    const QuadraticData q = cubic_klm(sol, {0.4, 0.1}, {-0.2, 0.5}, 0.8);
    CHECK(q.k == 0.0);
}

TEST_CASE("A-only mode: w_r + rho = -6 xi (r + mu) + rho") {
    const SpectralSolution sol = cubic_family(1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
    const Complex p{0.7, -0.3}, z{0.2, 0.4};
    const double rho = 1.1;
    const QuadraticData q = cubic_klm(sol, p, z, rho);
    const double xi = 2 * p.real();
    const double mu = -2 * z.real(); // alpha = 0: mu = -(z + zbar)
    CHECK(q.k == 0.0);
    CHECK(rel(q.l, xi) < 1e-14);
    CHECK(rel(q.m, 2 * xi * mu - rho / 3) < 1e-14);
    // linear fallback root solves w_r + rho = 0
    const RootResult root = solve_r(q, Branch::plus);
    REQUIRE(root.valid());
    const PointJets pj = PointJets::real_slice(p, z, root.r, 2);
    const Complex wr = eval_w(sol, pj).partial({0, 0, 0, 0, 1});
    CHECK(std::abs(wr.real() + rho) < 1e-12);
}

TEST_CASE("jet expansion of w_r + rho matches -3 (k r^2 + 2 l r + m)") {
    // the tested normalization constant between the quadratic and the direct
    // expansion is exactly -3
    oracles::ValueGen gen{{71}};
    for (int t = 0; t < 20; ++t) {
        const SpectralSolution sol =
            cubic_family(gen.next(-2, 2), gen.next(-2, 2), gen.next(-2, 2), gen.next(-2, 2),
                         gen.next(-2, 2), gen.next(-2, 2));
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(-2, 2);
        const QuadraticData q = cubic_klm(sol, p, z, rho);

        const PointJets pj = PointJets::real_slice(p, z, 0.0, 4);
        const Jet w = eval_w(sol, pj);
        // polynomial coefficients of w_r + rho in r, from derivatives at r = 0
        const double c0 = w.partial({0, 0, 0, 0, 1}).real() + rho;
        const double c1 = w.partial({0, 0, 0, 0, 2}).real();
        const double c2 = w.partial({0, 0, 0, 0, 3}).real() / 2.0;
        const double c3 = w.partial({0, 0, 0, 0, 4}).real() / 6.0;
        CHECK(rel(c0, -3.0 * q.m) < 1e-12);
        CHECK(rel(c1, -6.0 * q.l) < 1e-12);
        CHECK(rel(c2, -3.0 * q.k) < 1e-12);
        CHECK(std::abs(c3) < 1e-12 * std::max(1.0, w.max_abs())); // exactly degree 2
    }
}

TEST_CASE("solve_r closed forms") {
    SUBCASE("symmetric roots") {
        const RootResult r = solve_r({1, 0, -1, 1}, Branch::plus);
        REQUIRE(r.valid());
        CHECK(r.r == 1.0);
        const RootResult rm = solve_r({1, 0, -1, 1}, Branch::minus);
        CHECK(rm.r == -1.0);
    }
    SUBCASE("k=2 l=3 m=1") {
        const QuadraticData q{2, 3, 1, 3 * 3 - 2 * 1};
        CHECK(q.discriminant == 7.0);
        const RootResult r = solve_r(q, Branch::plus);
        REQUIRE(r.valid());
        CHECK(rel(r.r, (-3 + std::sqrt(7.0)) / 2) < 1e-15);
        CHECK(std::abs(q.k * r.r * r.r + 2 * q.l * r.r + q.m) < 1e-14);
    }
    SUBCASE("linear fallback") {
        const RootResult r = solve_r({0, 1, 4, 1}, Branch::plus);
        REQUIRE(r.valid());
        CHECK(r.r == -2.0);
    }
    SUBCASE("negative discriminant") {
        const RootResult r = solve_r({1, 0, 1, -1}, Branch::plus);
        CHECK(r.status == LegendreStatus::negative_discriminant);
    }
    SUBCASE("fully degenerate") {
        const RootResult r = solve_r({0, 0, 1, 0}, Branch::plus);
        CHECK(r.status == LegendreStatus::degenerate_quadratic);
    }
}

TEST_CASE("solved roots satisfy the quadratic to 1e-10") {
    oracles::ValueGen gen{{73}};
    for (int t = 0; t < 200; ++t) {
        QuadraticData q{gen.next(-3, 3), gen.next(-3, 3), gen.next(-3, 3), 0};
        q.discriminant = q.l * q.l - q.k * q.m;
        for (Branch b : {Branch::plus, Branch::minus}) {
            const RootResult r = solve_r(q, b);
            if (!r.valid()) continue;
            const double res = q.k * r.r * r.r + 2 * q.l * r.r + q.m;
            const double scale = std::max({std::abs(q.k * r.r * r.r), std::abs(2 * q.l * r.r),
                                           std::abs(q.m), 1.0});
            CHECK(std::abs(res) < 1e-10 * scale);
        }
    }
}

TEST_CASE("closed-form cubic v equals w + rho r on both branches") {
    oracles::ValueGen gen{{79}};
    long checked = 0;
    for (int t = 0; t < 1000 && checked < 1000; ++t) {
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(-2, 2);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const CubicV cv = cubic_v(kCubic, p, z, rho, b);
            if (!cv.valid()) continue;
            const PointJets pj = PointJets::real_slice(p, z, cv.r, 2);
            const double w = eval_w(kCubic, pj).value().real();
            CHECK(rel(cv.v, w + rho * cv.r) < 1e-9);
            checked += 1;
        }
    }
    CHECK(checked >= 500);
}

TEST_CASE("polynomial identity k^6 v^2 - 2 k^3 P3 v + P3^2 - disc P2^2 = 0") {
    oracles::ValueGen gen{{83}};
    int checked = 0;
    for (int t = 0; t < 400; ++t) {
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(-2, 2);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const CubicV cv = cubic_v(kCubic, p, z, rho, b);
            if (!cv.valid()) continue;
            const double k3 = std::pow(cv.quad.k, 3);
            const double t1 = k3 * k3 * cv.v * cv.v;
            const double t2 = 2 * k3 * cv.data.P3 * cv.v;
            const double t3 = cv.data.P3 * cv.data.P3;
            const double t4 = cv.quad.discriminant * cv.data.P2 * cv.data.P2;
            const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1.0});
            CHECK(std::abs(t1 - t2 + t3 - t4) < 1e-8 * scale);
            checked += 1;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("degree-6 homogeneity: cube root of v scales linearly") {
    oracles::ValueGen gen{{89}};
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(0.05, 2); // rho = sigma^2 needs a positive value
        for (Branch b : {Branch::plus, Branch::minus}) {
            const CubicV cv = cubic_v(kCubic, p, z, rho, b);
            if (!cv.valid()) continue;
            const double s = 2.0;
            const CubicV scaled = cubic_v(kCubic, s * p, s * z, s * s * rho, b);
            REQUIRE(scaled.valid()); // scaling preserves the branch condition
            CHECK(rel(std::cbrt(scaled.v), s * std::cbrt(cv.v)) < 1e-8);
            checked += 1;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("rho = 0 with m = 0 has the root r = 0 and v = w(point, 0)") {
    // C = 1, D = -1 with a real p and z = 0 forces m = 0 while k != 0
    const SpectralSolution sol = cubic_family(0.0, 0.0, 1.0, -1.0, 0.0, 1.0);
    const Complex p{0.8, 0.0}, z{0.0, 0.0};
    const QuadraticData q = cubic_klm(sol, p, z, 0.0);
    CHECK(std::abs(q.m) < 1e-14);
    CHECK(q.k != 0.0);
    bool found_zero_root = false;
    for (Branch b : {Branch::plus, Branch::minus}) {
        const CubicV cv = cubic_v(sol, p, z, 0.0, b);
        if (!cv.valid()) continue;
        if (std::abs(cv.r) < 1e-12) {
            found_zero_root = true;
            const PointJets pj = PointJets::real_slice(p, z, 0.0, 2);
            CHECK(rel(cv.v, eval_w(sol, pj).value().real()) < 1e-12);
        }
    }
    CHECK(found_zero_root);
}

TEST_CASE("exponential closed form") {
    SUBCASE("G = H = 1, rho = 0, plus branch: r = 0, v = 2") {
        const SpectralSolution sol = exp_family(1, 1, 0, 0, 0, 0);
        const ExpV ev = exp_v(sol, {0, 0}, {0, 0}, 0.0, Branch::plus);
        REQUIRE(ev.valid());
        CHECK(ev.G == 1.0);
        CHECK(ev.H == 1.0);
        CHECK(std::abs(ev.r) < 1e-15);
        CHECK(std::abs(ev.v - 2.0) < 1e-15);
    }
    SUBCASE("e^r solves its quadratic to 1e-12") {
        oracles::ValueGen gen{{97}};
        int checked = 0;
        for (int t = 0; t < 300; ++t) {
            const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
            const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
            const double rho = gen.next(-2, 2);
            for (Branch b : {Branch::plus, Branch::minus}) {
                const ExpV ev = exp_v(kExp, p, z, rho, b);
                if (!ev.valid()) continue;
                const double er = std::exp(ev.r);
                const double res = er * er * ev.H + rho * er - ev.G;
                const double scale =
                    std::max({std::abs(er * er * ev.H), std::abs(rho * er), std::abs(ev.G), 1.0});
                CHECK(std::abs(res) < 1e-12 * scale);
                checked += 1;
            }
        }
        CHECK(checked > 200);
    }
    SUBCASE("v = w + rho r on valid branches") {
        oracles::ValueGen gen{{101}};
        int checked = 0;
        for (int t = 0; t < 300; ++t) {
            const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
            const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
            const double rho = gen.next(-2, 2);
            for (Branch b : {Branch::plus, Branch::minus}) {
                const ExpV ev = exp_v(kExp, p, z, rho, b);
                if (!ev.valid()) continue;
                const PointJets pj = PointJets::real_slice(p, z, ev.r, 2);
                const double w = eval_w(kExp, pj).value().real();
                CHECK(rel(ev.v, w + rho * ev.r) < 1e-9);
                checked += 1;
            }
        }
        CHECK(checked > 200);
    }
    SUBCASE("branch errors") {
        // A-only: H = 0 identically
        const SpectralSolution h0 = exp_family(1, 0, 0, 0, 0, 0);
        CHECK(exp_v(h0, {0.1, 0}, {0.1, 0}, 0.5, Branch::plus).status == LegendreStatus::zero_h);
        // negative radicand: G H < 0 with small rho
        const SpectralSolution sol = exp_family(1, -1, 0, 0, 0, 0);
        const ExpV bad = exp_v(sol, {0, 0}, {0, 0}, 0.1, Branch::plus);
        CHECK(bad.status == LegendreStatus::nonpositive_radicand);
        // nonpositive log argument: G H > 0 but H < 0 on the plus branch
        const SpectralSolution neg = exp_family(-1, -1, 0, 0, 0, 0);
        const ExpV logbad = exp_v(neg, {0, 0}, {0, 0}, 0.1, Branch::plus);
        CHECK(logbad.status == LegendreStatus::nonpositive_log_argument);
    }
}

TEST_CASE("solved Legendre points satisfy their defining equations") {
    oracles::ValueGen gen{{211}};
    SpectralSolution mix_build = power_family(3, 1.0, 0.4, 0.8);
    mix_build.terms.push_back(power_family(2, 0.7, -0.9, -0.5).terms[0]);
    const SpectralSolution& mix = mix_build;
    int checked = 0;
    for (int t = 0; t < 200 && checked < 120; ++t) {
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(-2, 2);
        for (const SpectralSolution* sol : {&kCubic, &kExp, &mix}) {
            for (Branch b : {Branch::plus, Branch::minus}) {
                const LegendrePoint pt = solve_legendre_point(*sol, p, z, rho, b);
                if (!pt.valid()) continue;
                const PointJets pj = PointJets::real_slice(p, z, pt.r, 2);
                const Jet w = eval_w(*sol, pj);
                const double wr = w.partial({0, 0, 0, 0, 1}).real();
                const double scale = std::max({std::abs(wr), std::abs(rho), 1.0});
                CHECK(std::abs(wr + rho) < 1e-10 * scale);
                if (is_cubic_family(*sol)) {
                    const QuadraticData q = cubic_klm(*sol, p, z, rho);
                    const double res = q.k * pt.r * pt.r + 2 * q.l * pt.r + q.m;
                    const double qs = std::max(
                        {std::abs(q.k * pt.r * pt.r), std::abs(2 * q.l * pt.r), std::abs(q.m), 1.0});
                    CHECK(std::abs(res) < 1e-10 * qs);
                }
                checked += 1;
            }
        }
    }
    CHECK(checked >= 120);
}

TEST_CASE("implicit engine on the quadratic w = -r^2/2") {
    const WField field = [](Complex p, Complex z, double r, int order) {
        const Jet rj = Jet::variable(kR, Complex{r}, 5, order);
        (void)p;
        (void)z;
        return -0.5 * (rj * rj);
    };
    for (double rho : {0.3, -1.2, 0.0}) {
        const ImplicitV iv = implicit_legendre(field, {0.1, 0.2}, {0.3, -0.1}, rho, 0.0, 4);
        REQUIRE(iv.valid());
        CHECK(rel(iv.r, rho) < 1e-12);                                     // rho = r
        CHECK(rel(iv.v, rho * rho / 2) < 1e-12);                           // v = rho^2/2
        CHECK(rel(iv.v_jet.partial({0, 0, 0, 0, 1}).real(), rho) < 1e-12); // v_rho = r
        CHECK(rel(iv.v_jet.partial({0, 0, 0, 0, 2}).real(), 1.0) < 1e-12);
    }
}

TEST_CASE("implicit engine reproduces the closed forms where both exist") {
    oracles::ValueGen gen{{103}};
    const WField wcub = make_w_field(kCubic);
    const WField wexp = make_w_field(kExp);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
        const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
        const double rho = gen.next(-2, 2);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const CubicV cv = cubic_v(kCubic, p, z, rho, b);
            if (cv.valid()) {
                const ImplicitV iv = implicit_legendre(wcub, p, z, rho, cv.r, 2);
                REQUIRE(iv.valid());
                CHECK(rel(iv.v, cv.v) < 1e-9);
                checked += 1;
            }
            const ExpV ev = exp_v(kExp, p, z, rho, b);
            if (ev.valid()) {
                const double seed = ev.G / ev.H > 0 ? 0.5 * std::log(ev.G / ev.H) : 0.0;
                const ImplicitV iv = implicit_legendre(wexp, p, z, rho, seed, 2);
                if (iv.valid() && std::abs(iv.r - ev.r) < 1e-6 * std::max(1.0, std::abs(ev.r))) {
                    CHECK(rel(iv.v, ev.v) < 1e-9);
                    checked += 1;
                }
            }
        }
    }
    CHECK(checked > 60);
}

TEST_CASE("v jets: v_rho = r (involution) and partials match finite differences") {
    oracles::ValueGen gen{{107}};
    int checked = 0;
    for (int t = 0; t < 40 && checked < 20; ++t) {
        const Complex p{gen.next(-1.5, 1.5), gen.next(-1.5, 1.5)};
        const Complex z{gen.next(-1.5, 1.5), gen.next(-1.5, 1.5)};
        const double rho = gen.next(-1.5, 1.5);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const VJet vj = cubic_v_jet(kCubic, p, z, rho, b, 4);
            if (!vj.valid()) continue;
            const CubicV cv = cubic_v(kCubic, p, z, rho, b);
            REQUIRE(cv.valid());
            CHECK(rel(vj.v.value().real(), cv.v) < 1e-11);
            CHECK(std::abs(vj.v.partial({0, 0, 0, 0, 1}).real() - cv.r) <
                  1e-10 * std::max(1.0, std::abs(cv.r)));

            // finite-difference cross-check of jet partials on scalar closed
            // forms; the whole stencil must stay on the branch
            bool stencil_valid = true;
            const auto scalar = [&](const std::vector<Complex>& x) -> Complex {
                const Complex pp{x[0].real(), x[1].real()};
                const Complex zz{x[2].real(), x[3].real()};
                const CubicV cv2 = cubic_v(kCubic, pp, zz, x[4].real(), b);
                stencil_valid = stencil_valid && cv2.valid();
                return cv2.v;
            };
            const std::vector<Complex> x0 = {p.real(), p.imag(), z.real(), z.imag(), rho};
            // d/dRe p = d/dp + d/dpbar etc.
            const Complex d_rep = vj.v.partial({1, 0, 0, 0, 0}) + vj.v.partial({0, 1, 0, 0, 0});
            const Complex d_imz =
                Complex{0, 1} * (vj.v.partial({0, 0, 1, 0, 0}) - vj.v.partial({0, 0, 0, 1, 0}));
            const Complex fd_rep = oracles::richardson_partial(scalar, x0, {1, 0, 0, 0, 0}, 1e-2);
            const Complex fd_imz = oracles::richardson_partial(scalar, x0, {0, 0, 0, 1, 0}, 1e-2);
            const Complex fd_mixed = oracles::richardson_partial(scalar, x0, {1, 1, 0, 0, 0}, 2e-2);
            // d^2/(dRe p dIm p) in complex derivatives: i (v_pp - v_pbpb)
            const Complex d_mixed = Complex{0, 1} * (vj.v.partial({2, 0, 0, 0, 0}) -
                                                     vj.v.partial({0, 2, 0, 0, 0}));
            if (!stencil_valid) continue; // branch boundary crossed the stencil
            CHECK(std::abs(d_rep - fd_rep) < 1e-6 * std::max(1.0, std::abs(fd_rep)));
            CHECK(std::abs(d_imz - fd_imz) < 1e-6 * std::max(1.0, std::abs(fd_imz)));
            CHECK(std::abs(d_mixed - fd_mixed) < 1e-6 * std::max(1.0, std::abs(fd_mixed)));
            checked += 1;
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("exp v jets agree with the scalar closed form and the involution") {
    oracles::ValueGen gen{{109}};
    int checked = 0;
    for (int t = 0; t < 60 && checked < 20; ++t) {
        const Complex p{gen.next(-1.5, 1.5), gen.next(-1.5, 1.5)};
        const Complex z{gen.next(-1.5, 1.5), gen.next(-1.5, 1.5)};
        const double rho = gen.next(-1.5, 1.5);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const VJet vj = exp_v_jet(kExp, p, z, rho, b, 4);
            if (!vj.valid()) continue;
            const ExpV ev = exp_v(kExp, p, z, rho, b);
            REQUIRE(ev.valid());
            CHECK(rel(vj.v.value().real(), ev.v) < 1e-11);
            CHECK(std::abs(vj.v.partial({0, 0, 0, 0, 1}).real() - ev.r) <
                  1e-10 * std::max(1.0, std::abs(ev.r)));
            checked += 1;
        }
    }
    CHECK(checked >= 20);
}

TEST_CASE("existence determinant of the w-Hessian in (p, pbar, r)") {
    SUBCASE("quadratic solution is degenerate") {
        // w = (p + pbar)^2 - (r - z - zbar)^2
        const PointJets pj = PointJets::real_slice({0.4, 0.7}, {-0.2, 0.3}, 0.6, 2);
        const Jet w = (pj.p + pj.pbar) * (pj.p + pj.pbar) -
                      (pj.r - pj.z - pj.zbar) * (pj.r - pj.z - pj.zbar);
        CHECK(std::abs(legendre_existence_det(w)) < 1e-13);
    }
    SUBCASE("w = p pbar - r^2/2 has determinant 1") {
        const PointJets pj = PointJets::real_slice({0.4, 0.7}, {-0.2, 0.3}, 0.6, 2);
        const Jet w = pj.p * pj.pbar - 0.5 * (pj.r * pj.r);
        CHECK(rel(legendre_existence_det(w), 1.0) < 1e-14);
    }
    SUBCASE("cubic family is generically nondegenerate") {
        oracles::ValueGen gen{{113}};
        int nonzero = 0;
        for (int t = 0; t < 20; ++t) {
            const Complex p{gen.next(-2, 2), gen.next(-2, 2)};
            const Complex z{gen.next(-2, 2), gen.next(-2, 2)};
            const PointJets pj = PointJets::real_slice(p, z, gen.next(-2, 2), 2);
            if (std::abs(legendre_existence_det(eval_w(kCubic, pj))) > 1e-10) nonzero += 1;
        }
        CHECK(nonzero >= 18);
    }
}

namespace {

/// v = p pbar + p zbar + pbar z as a jet field (an exact constant-Hessian
/// solution of the transformed equation).
VJet quadratic_v_field(Complex p, Complex z, double rho, int order) {
    const Jet P = Jet::variable(kP, p, 5, order);
    const Jet Pb = Jet::variable(kPbar, std::conj(p), 5, order);
    const Jet Z = Jet::variable(kZ, z, 5, order);
    const Jet Zb = Jet::variable(kZbar, std::conj(z), 5, order);
    VJet out;
    out.v = P * Pb + P * Zb + Pb * Z;
    out.r = 0;
    out.status = LegendreStatus::ok;
    (void)rho;
    return out;
}

} // namespace

TEST_CASE("2d Legendre inversion on the constant-Hessian example") {
    const Complex z1{0.35, -0.6};
    const Complex z{0.2, 0.15};
    const Invert2d inv = invert_legendre_2d(quadratic_v_field, z1, z, 0.0, {0.0, 0.0});
    REQUIRE(inv.valid());
    // v_p = pbar + zbar  =>  pbar = -z1 - zbar
    const Complex expected_p = std::conj(-z1 - std::conj(z));
    CHECK(std::abs(inv.p - expected_p) < 1e-11);
    // exact quadratic potential: the Monge-Ampère residual is finite-difference noise
    CHECK(std::abs(inv.cma_residual) < 1e-9);

    SUBCASE("round trip: the reconstructed u maps back to v") {
        // u_1 = p by the inverse transform; v = u - z1 u_1 - zbar1 u_1bar
        const double h = 1e-5;
        const auto u_of = [&](Complex zz1) {
            const Invert2d i2 = invert_legendre_2d(quadratic_v_field, zz1, z, 0.0, inv.p);
            REQUIRE(i2.valid());
            return i2.u;
        };
        const double ux = (u_of(z1 + h) - u_of(z1 - h)) / (2 * h);
        const double uy = (u_of(z1 + Complex{0, h}) - u_of(z1 - Complex{0, h})) / (2 * h);
        const Complex u1 = Complex{ux, -uy} / 2.0; // Wirtinger d/dz1 of a real function
        CHECK(std::abs(u1 - inv.p) < 1e-8);
        const double v_back = inv.u - 2 * (z1 * u1).real();
        const VJet vj = quadratic_v_field(inv.p, z, 0.0, 2);
        CHECK(rel(v_back, vj.v.value().real()) < 1e-8);
    }
}

TEST_CASE("cubic-family potential solves the Monge-Ampère equation (finite differences)") {
    oracles::ValueGen gen{{127}};
    const VJetField field = make_v_field(kCubic, Branch::plus);
    int checked = 0;
    for (int t = 0; t < 60 && checked < 20; ++t) {
        const Complex p{gen.next(-1.0, 1.0), gen.next(-1.0, 1.0)};
        const Complex z{gen.next(-1.0, 1.0), gen.next(-1.0, 1.0)};
        const double rho = gen.next(-1.0, 1.0);
        // take the target z1 from a forward evaluation so the Newton seed is exact
        const VJet vj = field(p, z, rho, 2);
        if (!vj.valid()) continue;
        const Complex z1 = -vj.v.partial({1, 0, 0, 0, 0});
        const Invert2d inv = invert_legendre_2d(field, z1, z, rho, p);
        if (!inv.valid()) continue;
        CHECK(std::abs(inv.p - p) < 1e-8);
        const double hscale =
            std::max({std::abs(inv.u_11b), std::abs(inv.u_22b), std::abs(inv.u_12b), 1.0});
        if (inv.fd_error > 1e-6 * hscale) continue; // step-halving error control
        const double scale = std::max({std::abs(inv.u_11b * inv.u_22b),
                                       std::abs(inv.u_12b * inv.u_21b), 1.0});
        CHECK(std::abs(inv.cma_residual) / scale < 1e-5);
        checked += 1;
    }
    CHECK(checked >= 20);
}

TEST_CASE("finite-difference Monge-Ampère residual agrees with the jet identity") {
    // under the inverse transform, CMA residual = -veq / delta
    oracles::ValueGen gen{{131}};
    int checked = 0;
    for (int t = 0; t < 300 && checked < 10; ++t) {
        const VJetField field =
            make_v_field(kExp, t % 2 == 0 ? Branch::minus : Branch::plus);
        const Complex p{gen.next(-1.0, 1.0), gen.next(-1.0, 1.0)};
        const Complex z{gen.next(-1.0, 1.0), gen.next(-1.0, 1.0)};
        const double rho = gen.next(-1.0, 1.0);
        const VJet vj = field(p, z, rho, 2);
        if (!vj.valid()) continue;
        const Complex z1 = -vj.v.partial({1, 0, 0, 0, 0});
        const Invert2d inv = invert_legendre_2d(field, z1, z, rho, p);
        if (!inv.valid()) continue;
        const double hscale =
            std::max({std::abs(inv.u_11b), std::abs(inv.u_22b), std::abs(inv.u_12b), 1.0});
        if (inv.fd_error > 1e-6 * hscale) continue;
        const TransformedCma tc = transformed_cma_residual(vj.v);
        const Complex vpp = vj.v.partial({2, 0, 0, 0, 0});
        const Complex vpbpb = vj.v.partial({0, 2, 0, 0, 0});
        const Complex vppb = vj.v.partial({1, 1, 0, 0, 0});
        const double delta = (vpp * vpbpb - vppb * vppb).real();
        const double expected = -tc.residual / delta;
        const double scale = std::max({std::abs(inv.u_11b * inv.u_22b),
                                       std::abs(inv.u_12b * inv.u_21b), 1.0});
        CHECK(std::abs(inv.cma_residual - expected) / scale < 1e-5);
        checked += 1;
    }
    CHECK(checked >= 10);
}
