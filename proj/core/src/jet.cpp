#include "heavenly/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace heavenly {

namespace {

void enumerate_degree(int num_vars, int degree, std::array<std::uint8_t, kMaxJetVars>& current,
                      int var, int remaining,
                      std::vector<std::array<std::uint8_t, kMaxJetVars>>& out) {
    if (var == num_vars - 1) {
        current[var] = static_cast<std::uint8_t>(remaining);
        out.push_back(current);
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        current[var] = static_cast<std::uint8_t>(e);
        enumerate_degree(num_vars, degree, current, var + 1, remaining - e, out);
    }
    current[var] = 0;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order) {
    if (num_vars < 1 || num_vars > kMaxJetVars)
        throw std::invalid_argument("jet num_vars must be in [1, 6]");
    if (order < 1 || order > kMaxJetOrder)
        throw std::invalid_argument("jet order must be in [1, 4]");

    cumulative_.assign(order + 1, 0);
    std::array<std::uint8_t, kMaxJetVars> current{};
    for (int d = 0; d <= order; ++d) {
        enumerate_degree(num_vars, d, current, 0, d, exponents_);
        cumulative_[d] = static_cast<int>(exponents_.size());
    }

    const int n = size();
    degrees_.resize(n);
    factorial_.resize(n);
    for (int r = 0; r < n; ++r) {
        int deg = 0;
        double f = 1.0;
        for (int v = 0; v < num_vars; ++v) {
            deg += exponents_[r][v];
            f *= factorial(exponents_[r][v]);
        }
        degrees_[r] = static_cast<std::uint8_t>(deg);
        factorial_[r] = f;
    }

    int packed_size = 1;
    for (int v = 0; v < num_vars; ++v) packed_size *= order + 1;
    rank_lookup_.assign(packed_size, -1);
    for (int r = 0; r < n; ++r) {
        int key = 0;
        for (int v = num_vars - 1; v >= 0; --v) key = key * (order + 1) + exponents_[r][v];
        rank_lookup_[key] = r;
    }

    product_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (degrees_[i] + degrees_[j] > order) continue;
            std::array<int, kMaxJetVars> sum{};
            for (int v = 0; v < num_vars; ++v) sum[v] = exponents_[i][v] + exponents_[j][v];
            product_[static_cast<std::size_t>(i) * n + j] =
                rank(std::span<const int>(sum.data(), num_vars));
        }
    }
}

const JetLayout& JetLayout::get(int num_vars, int order) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, const JetLayout*> registry;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(num_vars, order);
    auto it = registry.find(key);
    if (it == registry.end()) {
        it = registry.emplace(key, new JetLayout(num_vars, order)).first;
    }
    return *it->second;
}

std::span<const std::uint8_t> JetLayout::exponents(int rank) const {
    return {exponents_[rank].data(), static_cast<std::size_t>(num_vars_)};
}

int JetLayout::rank(std::span<const int> exponents) const {
    if (static_cast<int>(exponents.size()) != num_vars_)
        throw std::invalid_argument("multi-index size does not match num_vars");
    int key = 0;
    int deg = 0;
    for (int v = num_vars_ - 1; v >= 0; --v) {
        const int e = exponents[v];
        if (e < 0) throw std::invalid_argument("negative multi-index entry");
        deg += e;
        if (e > order_ || deg > order_) return -1;
        key = key * (order_ + 1) + e;
    }
    return rank_lookup_[key];
}

namespace {

const JetLayout& require_same_layout(const Jet& a, const Jet& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty jet operand");
    if (&a.layout() != &b.layout())
        throw std::invalid_argument("jet operands must share num_vars and order");
    return a.layout();
}

} // namespace

Jet Jet::constant(Complex value, int num_vars, int order) {
    Jet j(&JetLayout::get(num_vars, order));
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(int index, Complex value, int num_vars, int order) {
    if (index < 0 || index >= num_vars) throw std::invalid_argument("variable index out of range");
    Jet j(&JetLayout::get(num_vars, order));
    j.coeffs_[0] = value;
    // linear coefficients directly follow the constant term in graded order
    std::array<int, kMaxJetVars> mi{};
    mi[index] = 1;
    j.coeffs_[j.layout_->rank(std::span<const int>(mi.data(), num_vars))] = 1.0;
    return j;
}

Jet Jet::zero(int num_vars, int order) { return Jet(&JetLayout::get(num_vars, order)); }

Complex Jet::coeff(std::span<const int> exponents) const {
    const int r = layout_->rank(exponents);
    if (r < 0) throw std::invalid_argument("multi-index degree exceeds jet order");
    return coeffs_[r];
}

Complex Jet::coeff(std::initializer_list<int> exponents) const {
    return coeff(std::span<const int>(exponents.begin(), exponents.size()));
}

Complex Jet::partial(std::span<const int> exponents) const {
    const int r = layout_->rank(exponents);
    if (r < 0) throw std::invalid_argument("multi-index degree exceeds jet order");
    return coeffs_[r] * layout_->factorial_product(r);
}

Complex Jet::partial(std::initializer_list<int> exponents) const {
    return partial(std::span<const int>(exponents.begin(), exponents.size()));
}

Jet Jet::derivative(int var) const {
    if (empty()) throw std::invalid_argument("empty jet");
    if (var < 0 || var >= num_vars()) throw std::invalid_argument("variable index out of range");
    if (order() < 2) throw std::invalid_argument("cannot differentiate an order-1 jet");
    const JetLayout& src = *layout_;
    Jet out(&JetLayout::get(num_vars(), order() - 1));
    const JetLayout& dst = out.layout();
    std::array<int, kMaxJetVars> mi{};
    for (int r = 0; r < src.size(); ++r) {
        const auto e = src.exponents(r);
        if (e[var] == 0) continue;
        for (int v = 0; v < num_vars(); ++v) mi[v] = e[v];
        mi[var] -= 1;
        const int dr = dst.rank(std::span<const int>(mi.data(), num_vars()));
        out.coeffs_[dr] = coeffs_[r] * static_cast<double>(e[var]);
    }
    return out;
}

Jet Jet::truncated(int new_order) const {
    if (empty()) throw std::invalid_argument("empty jet");
    if (new_order > order()) throw std::invalid_argument("truncated() cannot raise the order");
    if (new_order == order()) return *this;
    Jet out(&JetLayout::get(num_vars(), new_order));
    const int keep = layout_->count_up_to_degree(new_order);
    std::copy_n(coeffs_.begin(), keep, out.coeffs_.begin());
    return out;
}

Jet Jet::lifted(int new_order) const {
    if (empty()) throw std::invalid_argument("empty jet");
    if (new_order < order()) throw std::invalid_argument("lifted() cannot lower the order");
    if (new_order == order()) return *this;
    Jet out(&JetLayout::get(num_vars(), new_order));
    std::copy(coeffs_.begin(), coeffs_.end(), out.coeffs_.begin());
    return out;
}

double Jet::max_abs() const {
    double m = 0.0;
    for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

double Jet::max_imag() const {
    double m = 0.0;
    for (const Complex& c : coeffs_) m = std::max(m, std::abs(c.imag()));
    return m;
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (Complex& c : out.coeffs_) c = -c;
    return out;
}

Jet& Jet::operator+=(const Jet& rhs) {
    require_same_layout(*this, rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
    require_same_layout(*this, rhs);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(Complex s) {
    for (Complex& c : coeffs_) c *= s;
    return *this;
}

Jet& Jet::operator+=(Complex s) {
    coeffs_[0] += s;
    return *this;
}

Jet& Jet::operator-=(Complex s) {
    coeffs_[0] -= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    const JetLayout& L = require_same_layout(a, b);
    Jet out(&L);
    const int n = L.size();
    const int order = L.order();
    for (int i = 0; i < n; ++i) {
        const Complex ai = a.coeffs_[i];
        if (ai == 0.0) continue;
        const int jmax = L.count_up_to_degree(order - L.degree(i));
        for (int j = 0; j < jmax; ++j) {
            out.coeffs_[L.product_rank(i, j)] += ai * b.coeffs_[j];
        }
    }
    return out;
}

namespace {

/// Evaluate sum_k taylor[k] * (a - a0)^k with taylor[k] = f^(k)(a0)/k!.
Jet analytic_apply(const Jet& a, std::span<const Complex> taylor) {
    const JetLayout& L = a.layout();
    Jet hat = a;
    hat -= a.value();
    Jet out = Jet::constant(taylor[0], L.num_vars(), L.order());
    Jet power = hat;
    for (int k = 1; k <= L.order(); ++k) {
        out += power * taylor[static_cast<std::size_t>(k)];
        if (k < L.order()) power = power * hat;
    }
    return out;
}

} // namespace

Jet exp(const Jet& a) {
    const Complex e0 = std::exp(a.value());
    std::array<Complex, kMaxJetOrder + 1> t{};
    double kf = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) kf *= k;
        t[static_cast<std::size_t>(k)] = e0 / kf;
    }
    return analytic_apply(a, {t.data(), static_cast<std::size_t>(a.order()) + 1});
}

Jet log(const Jet& a) {
    const Complex a0 = a.value();
    if (a0 == 0.0) throw std::domain_error("log of jet with zero value");
    std::array<Complex, kMaxJetOrder + 1> t{};
    t[0] = std::log(a0);
    Complex ipow = 1.0;
    for (int k = 1; k <= a.order(); ++k) {
        ipow /= a0;
        t[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) * ipow / static_cast<double>(k);
    }
    return analytic_apply(a, {t.data(), static_cast<std::size_t>(a.order()) + 1});
}

Jet sqrt(const Jet& a) {
    const Complex a0 = a.value();
    if (a0 == 0.0) throw std::domain_error("sqrt of jet with zero value");
    std::array<Complex, kMaxJetOrder + 1> t{};
    t[0] = std::sqrt(a0);
    // binomial series: c_k = c_{k-1} * (1/2 - (k-1)) / (k * a0)
    for (int k = 1; k <= a.order(); ++k) {
        t[static_cast<std::size_t>(k)] =
            t[static_cast<std::size_t>(k - 1)] * (0.5 - (k - 1)) / (static_cast<double>(k) * a0);
    }
    return analytic_apply(a, {t.data(), static_cast<std::size_t>(a.order()) + 1});
}

Jet sin(const Jet& a) {
    const Complex s0 = std::sin(a.value());
    const Complex c0 = std::cos(a.value());
    const Complex cycle[4] = {s0, c0, -s0, -c0};
    std::array<Complex, kMaxJetOrder + 1> t{};
    double kf = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) kf *= k;
        t[static_cast<std::size_t>(k)] = cycle[k % 4] / kf;
    }
    return analytic_apply(a, {t.data(), static_cast<std::size_t>(a.order()) + 1});
}

Jet cos(const Jet& a) {
    const Complex s0 = std::sin(a.value());
    const Complex c0 = std::cos(a.value());
    const Complex cycle[4] = {c0, -s0, -c0, s0};
    std::array<Complex, kMaxJetOrder + 1> t{};
    double kf = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        if (k > 0) kf *= k;
        t[static_cast<std::size_t>(k)] = cycle[k % 4] / kf;
    }
    return analytic_apply(a, {t.data(), static_cast<std::size_t>(a.order()) + 1});
}

Jet pow(const Jet& a, int n) {
    if (n < 0) throw std::invalid_argument("pow(jet, n) requires n >= 0");
    Jet out = Jet::constant(1.0, a.num_vars(), a.order());
    for (int i = 0; i < n; ++i) out = out * a;
    return out;
}

Jet reciprocal(const Jet& a) {
    const Complex a0 = a.value();
    if (a0 == 0.0) throw std::domain_error("division by jet with zero value");
    std::array<Complex, kMaxJetOrder + 1> t{};
    Complex c = 1.0 / a0;
    t[0] = c;
    for (int k = 1; k <= a.order(); ++k) {
        c = -c / a0;
        t[static_cast<std::size_t>(k)] = c;
    }
    return analytic_apply(a, {t.data(), static_cast<std::size_t>(a.order()) + 1});
}

Jet operator/(const Jet& a, const Jet& b) {
    require_same_layout(a, b);
    return a * reciprocal(b);
}

Jet operator/(Complex s, const Jet& a) { return reciprocal(a) * s; }

Jet compose(const Jet& f, std::span<const Complex> centers, std::span<const Jet> args) {
    if (f.empty()) throw std::invalid_argument("empty jet");
    const JetLayout& Lf = f.layout();
    if (static_cast<int>(args.size()) != Lf.num_vars() || args.size() != centers.size())
        throw std::invalid_argument("compose: need one arg and one center per variable");
    const JetLayout& Lt = args[0].layout();
    for (const Jet& arg : args) require_same_layout(args[0], arg);

    // powers[i][k] = (args[i] - centers[i])^k
    std::vector<std::vector<Jet>> powers(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        Jet hat = args[i];
        hat -= centers[i];
        powers[i].reserve(static_cast<std::size_t>(Lf.order()) + 1);
        powers[i].push_back(Jet::constant(1.0, Lt.num_vars(), Lt.order()));
        for (int k = 1; k <= Lf.order(); ++k) powers[i].push_back(powers[i].back() * hat);
    }

    Jet out = Jet::zero(Lt.num_vars(), Lt.order());
    for (int r = 0; r < Lf.size(); ++r) {
        const Complex c = f.coeff_by_rank(r);
        if (c == 0.0) continue;
        const auto e = Lf.exponents(r);
        Jet term = Jet::constant(c, Lt.num_vars(), Lt.order());
        for (int v = 0; v < Lf.num_vars(); ++v) {
            if (e[v] > 0) term = term * powers[static_cast<std::size_t>(v)][e[v]];
        }
        out += term;
    }
    return out;
}

Jet substitute_var(const Jet& f, int var, Complex center, const Jet& s) {
    if (f.empty() || s.empty()) throw std::invalid_argument("empty jet");
    const JetLayout& Lf = f.layout();
    const JetLayout& Ls = s.layout();
    if (Lf.num_vars() != Ls.num_vars() || Lf.order() != Ls.order())
        throw std::invalid_argument("substitute_var: layouts must have the same shape");
    if (var < 0 || var >= Lf.num_vars()) throw std::invalid_argument("variable index out of range");

    // group f's coefficients by the exponent of `var`
    std::vector<Jet> slices(static_cast<std::size_t>(Lf.order()) + 1,
                            Jet::zero(Ls.num_vars(), Ls.order()));
    std::array<int, kMaxJetVars> mi{};
    for (int r = 0; r < Lf.size(); ++r) {
        const Complex c = f.coeff_by_rank(r);
        if (c == 0.0) continue;
        const auto e = Lf.exponents(r);
        for (int v = 0; v < Lf.num_vars(); ++v) mi[v] = e[v];
        const int k = mi[var];
        mi[var] = 0;
        const int base = Ls.rank(std::span<const int>(mi.data(), Lf.num_vars()));
        slices[static_cast<std::size_t>(k)].coeff_by_rank(base) += c;
    }

    Jet hat = s;
    hat -= center;
    Jet out = slices[0];
    Jet power = hat;
    for (int k = 1; k <= Lf.order(); ++k) {
        out += slices[static_cast<std::size_t>(k)] * power;
        if (k < Lf.order()) power = power * hat;
    }
    return out;
}

} // namespace heavenly
