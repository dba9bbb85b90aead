#include "heavenly/residuals.hpp"

#include <algorithm>
#include <json.hpp>

namespace heavenly {

double cma_residual(const Jet& u_jet, int epsilon) {
    if (u_jet.num_vars() != 4) throw std::invalid_argument("cma_residual expects a 4-variable jet");
    const Complex u11b = u_jet.partial({1, 1, 0, 0});
    const Complex u22b = u_jet.partial({0, 0, 1, 1});
    const Complex u12b = u_jet.partial({1, 0, 0, 1});
    const Complex u21b = u_jet.partial({0, 1, 1, 0});
    return (u11b * u22b - u12b * u21b).real() - static_cast<double>(epsilon);
}

Complex symmetry_condition_residual(const Jet& u_jet, const Jet& phi_jet) {
    if (u_jet.num_vars() != 4 || phi_jet.num_vars() != 4)
        throw std::invalid_argument("symmetry condition expects 4-variable jets");
    const Complex u11b = u_jet.partial({1, 1, 0, 0});
    const Complex u22b = u_jet.partial({0, 0, 1, 1});
    const Complex u12b = u_jet.partial({1, 0, 0, 1});
    const Complex u21b = u_jet.partial({0, 1, 1, 0});
    const Complex f11b = phi_jet.partial({1, 1, 0, 0});
    const Complex f22b = phi_jet.partial({0, 0, 1, 1});
    const Complex f12b = phi_jet.partial({1, 0, 0, 1});
    const Complex f21b = phi_jet.partial({0, 1, 1, 0});
    return u11b * f22b + u22b * f11b - u12b * f21b - u21b * f12b;
}

double LinearResiduals::max_rel() const {
    double m = 0;
    for (int i = 0; i < 6; ++i) m = std::max(m, std::abs(residual[i]) / scale[i]);
    return m;
}

const std::array<const char*, 6>& LinearResiduals::equation_ids() {
    static const std::array<const char*, 6> ids = {
        "w_ppb + w_rr",          "w_pp - lambda w_zr",     "w_pr + lambda w_pbz",
        "w_pbpb - conj(lambda) w_zbr", "w_pbr + conj(lambda) w_pzb", "w_ppb + w_zzb",
    };
    return ids;
}

LinearResiduals linear_system_residuals(const Jet& w_jet, Complex lambda) {
    if (w_jet.num_vars() != 5)
        throw std::invalid_argument("linear_system_residuals expects a 5-variable jet");
    const Complex wpp = w_jet.partial({2, 0, 0, 0, 0});
    const Complex wppb = w_jet.partial({1, 1, 0, 0, 0});
    const Complex wpbpb = w_jet.partial({0, 2, 0, 0, 0});
    const Complex wrr = w_jet.partial({0, 0, 0, 0, 2});
    const Complex wpr = w_jet.partial({1, 0, 0, 0, 1});
    const Complex wpbr = w_jet.partial({0, 1, 0, 0, 1});
    const Complex wzr = w_jet.partial({0, 0, 1, 0, 1});
    const Complex wzbr = w_jet.partial({0, 0, 0, 1, 1});
    const Complex wpbz = w_jet.partial({0, 1, 1, 0, 0});
    const Complex wpzb = w_jet.partial({1, 0, 0, 1, 0});
    const Complex wzzb = w_jet.partial({0, 0, 1, 1, 0});
    const Complex lbar = std::conj(lambda);

    LinearResiduals out;
    const auto set = [&out](int i, Complex a, Complex b) {
        out.residual[i] = a + b;
        out.scale[i] = std::max({std::abs(a), std::abs(b), 1.0});
    };
    set(0, wppb, wrr);
    set(1, wpp, -lambda * wzr);
    set(2, wpr, lambda * wpbz);
    set(3, wpbpb, -lbar * wzbr);
    set(4, wpbr, lbar * wpzb);
    set(5, wppb, wzzb);
    return out;
}

TransformedCma transformed_cma_residual(const Jet& v_jet) {
    if (v_jet.num_vars() != 5)
        throw std::invalid_argument("transformed_cma_residual expects a 5-variable jet");
    const Complex vpzb = v_jet.partial({1, 0, 0, 1, 0});
    const Complex vpbz = v_jet.partial({0, 1, 1, 0, 0});
    const Complex vppb = v_jet.partial({1, 1, 0, 0, 0});
    const Complex vzzb = v_jet.partial({0, 0, 1, 1, 0});
    const Complex vpp = v_jet.partial({2, 0, 0, 0, 0});
    const Complex vpbpb = v_jet.partial({0, 2, 0, 0, 0});
    const Complex t1 = vpzb * vpbz;
    const Complex t2 = vppb * vzzb;
    const Complex t3 = vpp * vpbpb;
    const Complex t4 = vppb * vppb;
    TransformedCma out;
    out.residual = (t1 - t2 + t3 - t4).real();
    out.scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(t4), 1.0});
    return out;
}

void ResidualReport::add_sample(double abs_residual, double scale,
                                const std::array<double, 5>& point) {
    samples += 1;
    abs_residual = std::abs(abs_residual);
    max_abs = std::max(max_abs, abs_residual);
    const double rel = abs_residual / scale;
    if (rel > max_rel) {
        max_rel = rel;
        worst_point = point;
    }
}

void ResidualReport::merge(const ResidualReport& other) {
    samples += other.samples;
    max_abs = std::max(max_abs, other.max_abs);
    if (other.max_rel > max_rel) {
        max_rel = other.max_rel;
        worst_point = other.worst_point;
    }
}

std::string ResidualReport::to_json() const {
    nlohmann::ordered_json j;
    j["equation_id"] = equation_id;
    j["samples"] = samples;
    j["max_abs"] = max_abs;
    j["max_rel"] = max_rel;
    j["tolerance"] = tolerance;
    j["verdict"] = pass() ? "pass" : "fail";
    j["worst_point"] = worst_point;
    return j.dump();
}

} // namespace heavenly
