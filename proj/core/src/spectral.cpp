#include "heavenly/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace heavenly {

namespace {

constexpr Complex kI{0.0, 1.0};

SpectralTerm power_term(int n, double A, double C, double alpha) {
    if (n < 1 || n > 4) throw std::invalid_argument("power profile requires 1 <= n <= 4");
    SpectralTerm t;
    t.alpha = alpha;
    t.profile = Profile::power;
    t.power = n;
    // A = a + conj(a), C = i sqrt(gamma) (a - conj(a))
    t.amplitude = 0.5 * Complex{A, -C / std::sqrt(t.gamma())};
    return t;
}

SpectralTerm exp_term(double amp_sum, double amp_diff, double alpha, int sign) {
    SpectralTerm t;
    t.alpha = alpha;
    t.profile = Profile::exponential;
    t.exp_sign = sign;
    // A = a + conj(a), C = i (a - conj(a))
    t.amplitude = 0.5 * Complex{amp_sum, -amp_diff};
    return t;
}

} // namespace

SpectralSolution cubic_family(double A, double B, double C, double D, double alpha, double beta) {
    SpectralSolution s;
    s.terms.push_back(power_term(3, A, C, alpha));
    s.terms.push_back(power_term(3, B, D, beta));
    return s;
}

SpectralSolution exp_family(double A, double B, double C, double D, double alpha, double beta) {
    SpectralSolution s;
    s.terms.push_back(exp_term(A, C, alpha, +1));
    s.terms.push_back(exp_term(B, D, beta, -1));
    return s;
}

SpectralSolution power_family(int n, double A, double C, double alpha) {
    SpectralSolution s;
    s.terms.push_back(power_term(n, A, C, alpha));
    return s;
}

SpectralSolution make_solution(const FamilyParams& fp) {
    switch (fp.family) {
    case Family::cubic:
        return cubic_family(fp.A, fp.B, fp.C, fp.D, fp.alpha, fp.beta);
    case Family::exponential:
        return exp_family(fp.A, fp.B, fp.C, fp.D, fp.alpha, fp.beta);
    default:
        throw std::invalid_argument("make_solution: superposition has no single parameter set");
    }
}

double term_const_A(const SpectralTerm& t) { return 2.0 * t.amplitude.real(); }

double term_const_C(const SpectralTerm& t) {
    const double scale = t.profile == Profile::power ? std::sqrt(t.gamma()) : 1.0;
    return -2.0 * scale * t.amplitude.imag();
}

PointJets PointJets::at(Complex p, Complex pbar, Complex z, Complex zbar, double r, int order) {
    return PointJets{
        Jet::variable(kP, p, 5, order),      Jet::variable(kPbar, pbar, 5, order),
        Jet::variable(kZ, z, 5, order),      Jet::variable(kZbar, zbar, 5, order),
        Jet::variable(kR, Complex{r}, 5, order),
    };
}

PointJets PointJets::real_slice(Complex p, Complex z, double r, int order) {
    return at(p, std::conj(p), z, std::conj(z), r, order);
}

void xi_mu(double alpha, const Jet& p, const Jet& pbar, const Jet& z, const Jet& zbar,
           Jet& xi, Jet& mu) {
    xi = p + pbar + (kI * alpha) * (pbar - p);
    const Complex forward = (alpha + kI) / (alpha - kI);
    mu = forward * z + (1.0 / forward) * zbar;
}

BuildingBlocks building_blocks(double alpha, const PointJets& point) {
    BuildingBlocks bb;
    bb.gamma = alpha * alpha + 1.0;
    xi_mu(alpha, point.p, point.pbar, point.z, point.zbar, bb.xi, bb.mu);
    bb.eta = std::sqrt(bb.gamma) * (point.r + bb.mu);
    return bb;
}

namespace {

Jet eval_term(const SpectralTerm& term, const PointJets& point) {
    const BuildingBlocks bb = building_blocks(term.alpha, point);
    const Jet zeta = bb.xi + kI * bb.eta;
    const Jet zeta_conj = bb.xi - kI * bb.eta;
    const Complex a = term.amplitude;
    switch (term.profile) {
    case Profile::power:
        return a * pow(zeta, term.power) + std::conj(a) * pow(zeta_conj, term.power);
    case Profile::exponential: {
        const Complex phase = kI * static_cast<double>(term.exp_sign) / std::sqrt(bb.gamma);
        return a * exp(phase * zeta) + std::conj(a) * exp(-phase * zeta_conj);
    }
    }
    throw std::logic_error("unknown profile");
}

} // namespace

Jet eval_w(const SpectralSolution& sol, const PointJets& point) {
    if (sol.terms.empty()) throw std::invalid_argument("solution has no terms");
    Jet w = eval_term(sol.terms[0], point);
    for (std::size_t i = 1; i < sol.terms.size(); ++i) w += eval_term(sol.terms[i], point);
    return w;
}

bool is_cubic_family(const SpectralSolution& sol) {
    return sol.terms.size() == 2 && sol.terms[0].profile == Profile::power &&
           sol.terms[1].profile == Profile::power && sol.terms[0].power == 3 &&
           sol.terms[1].power == 3;
}

bool is_exp_family(const SpectralSolution& sol) {
    return sol.terms.size() == 2 && sol.terms[0].profile == Profile::exponential &&
           sol.terms[1].profile == Profile::exponential && sol.terms[0].exp_sign == +1 &&
           sol.terms[1].exp_sign == -1;
}

Jet cubic_w(const SpectralSolution& sol, const PointJets& point) {
    if (!is_cubic_family(sol))
        throw std::invalid_argument("cubic_w requires exactly two power-3 terms");
    return eval_w(sol, point);
}

GHJets exp_profile_gh(const SpectralSolution& sol, const Jet& p, const Jet& pbar, const Jet& z,
                      const Jet& zbar) {
    if (!is_exp_family(sol))
        throw std::invalid_argument("exponential family requires two exponential terms, signs (+, -)");
    GHJets out;
    // G mode: amplitude pair (A, C) at angle theta with cos(theta) = 1/sqrt(gamma)
    {
        const SpectralTerm& t = sol.terms[0];
        const double g = t.gamma();
        const double c2t = (1.0 - t.alpha * t.alpha) / g; // cos 2θ
        const double s2t = 2.0 * t.alpha / g;             // sin 2θ
        const double ct = 1.0 / std::sqrt(g);
        const double st = t.alpha / std::sqrt(g);
        const Jet arg = ct * (p + pbar) + (kI * st) * (pbar - p);
        const Jet pre = exp(c2t * (z + zbar) + (kI * s2t) * (zbar - z));
        out.G = pre * (term_const_A(t) * cos(arg) + term_const_C(t) * sin(arg));
    }
    // H mode: amplitude pair (B, D) at angle phi, with the D sign flipped
    {
        const SpectralTerm& t = sol.terms[1];
        const double d = t.gamma();
        const double c2f = (1.0 - t.alpha * t.alpha) / d;
        const double s2f = 2.0 * t.alpha / d;
        const double cf = 1.0 / std::sqrt(d);
        const double sf = t.alpha / std::sqrt(d);
        const Jet arg = cf * (p + pbar) + (kI * sf) * (pbar - p);
        const Jet pre = exp(-c2f * (z + zbar) + (kI * s2f) * (z - zbar));
        out.H = pre * (term_const_A(t) * cos(arg) - term_const_C(t) * sin(arg));
    }
    return out;
}

ExpW exp_w(const SpectralSolution& sol, const PointJets& point) {
    const GHJets gh = exp_profile_gh(sol, point.p, point.pbar, point.z, point.zbar);
    ExpW out;
    out.G = gh.G;
    out.H = gh.H;
    out.w = exp(-point.r) * gh.G + exp(point.r) * gh.H;
    return out;
}

Jet superpose(std::span<const WeightedSolution> sols, const PointJets& point) {
    if (sols.empty()) throw std::invalid_argument("superpose requires at least one solution");
    Jet w = sols[0].weight * eval_w(sols[0].solution, point);
    for (std::size_t i = 1; i < sols.size(); ++i)
        w += sols[i].weight * eval_w(sols[i].solution, point);
    return w;
}

bool geometrically_trivial(const SpectralSolution& sol) {
    for (const SpectralTerm& t : sol.terms) {
        if (t.profile != Profile::power || t.power > 2) return false;
    }
    return true;
}

namespace {

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* family_name(Family f) {
    switch (f) {
    case Family::cubic: return "cubic";
    case Family::exponential: return "exponential";
    case Family::superposition: return "superposition";
    }
    return "?";
}

} // namespace

std::string to_text(const FamilyParams& fp) {
    std::ostringstream os;
    os << "family=" << family_name(fp.family) << " alpha=" << fmt_double(fp.alpha)
       << " beta=" << fmt_double(fp.beta) << " A=" << fmt_double(fp.A)
       << " B=" << fmt_double(fp.B) << " C=" << fmt_double(fp.C) << " D=" << fmt_double(fp.D)
       << " lambda=1";
    return os.str();
}

FamilyParams family_params_from_text(const std::string& text) {
    FamilyParams fp;
    std::istringstream is(text);
    std::string token;
    bool have_family = false;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("malformed parameter token: " + token);
        const std::string key = token.substr(0, eq);
        const std::string val = token.substr(eq + 1);
        if (key == "family") {
            if (val == "cubic") fp.family = Family::cubic;
            else if (val == "exponential") fp.family = Family::exponential;
            else if (val == "superposition") fp.family = Family::superposition;
            else throw std::invalid_argument("unknown family: " + val);
            have_family = true;
            continue;
        }
        if (key == "lambda") {
            if (val != "1") throw std::invalid_argument("only lambda=1 records are supported");
            continue;
        }
        double* target = nullptr;
        if (key == "alpha") target = &fp.alpha;
        else if (key == "beta") target = &fp.beta;
        else if (key == "A") target = &fp.A;
        else if (key == "B") target = &fp.B;
        else if (key == "C") target = &fp.C;
        else if (key == "D") target = &fp.D;
        else throw std::invalid_argument("unknown parameter key: " + key);
        std::size_t used = 0;
        *target = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument("trailing junk in value: " + val);
    }
    if (!have_family) throw std::invalid_argument("parameter record lacks family tag");
    return fp;
}

} // namespace heavenly
