#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace heavenly {

using Complex = std::complex<double>;

inline constexpr int kMaxJetVars = 6;
inline constexpr int kMaxJetOrder = 4;

/// Shared coefficient bookkeeping for all jets with a given (num_vars, order).
///
/// Coefficients are stored densely in graded lexicographic order: multi-indices
/// sorted by total degree, ties broken lexicographically on the exponent tuple.
/// Instances live in a process-wide registry and are never destroyed, so raw
/// pointers to them stay valid for the lifetime of the program.
class JetLayout {
public:
    static const JetLayout& get(int num_vars, int order);

    int num_vars() const { return num_vars_; }
    int order() const { return order_; }
    /// Number of stored coefficients, i.e. multi-indices of degree <= order.
    int size() const { return static_cast<int>(exponents_.size()); }

    int degree(int rank) const { return degrees_[rank]; }
    std::span<const std::uint8_t> exponents(int rank) const;
    /// Rank of a multi-index, or -1 when its total degree exceeds the order.
    int rank(std::span<const int> exponents) const;
    /// Ranks [0, count_up_to_degree(d)) are exactly the multi-indices of degree <= d.
    int count_up_to_degree(int d) const { return cumulative_[d]; }
    /// Rank of the sum of the multi-indices at ranks i and j (degrees must fit).
    int product_rank(int i, int j) const { return product_[i * size() + j]; }
    /// Product of factorials of the exponents at `rank` (converts coefficient
    /// to mixed partial derivative).
    double factorial_product(int rank) const { return factorial_[rank]; }

private:
    JetLayout(int num_vars, int order);

    int num_vars_;
    int order_;
    std::vector<std::array<std::uint8_t, kMaxJetVars>> exponents_;
    std::vector<std::uint8_t> degrees_;
    std::vector<int> cumulative_;
    std::vector<std::int32_t> product_;
    std::vector<double> factorial_;
    std::vector<std::int32_t> rank_lookup_; // packed base-(order+1) key -> rank
};

/// Truncated multivariate Taylor expansion with complex coefficients.
///
/// A Jet represents a scalar field near a point through all of its mixed
/// partial derivatives up to a fixed total order (at most 4) in up to 6
/// variables. Arithmetic and the analytic maps below propagate the expansion
/// exactly, so extracted partials carry no truncation error. Values are
/// immutable from the caller's perspective; all operations return new jets
/// and are safe to run concurrently.
class Jet {
public:
    Jet() = default;

    static Jet constant(Complex value, int num_vars, int order);
    /// Jet of the coordinate function x_index at the given point.
    static Jet variable(int index, Complex value, int num_vars, int order);
    static Jet zero(int num_vars, int order);

    bool empty() const { return layout_ == nullptr; }
    int num_vars() const { return layout_->num_vars(); }
    int order() const { return layout_->order(); }

    /// Value at the expansion point (zero multi-index coefficient).
    Complex value() const { return coeffs_.empty() ? Complex{} : coeffs_[0]; }

    /// Taylor coefficient for the given exponents.
    Complex coeff(std::span<const int> exponents) const;
    Complex coeff(std::initializer_list<int> exponents) const;
    /// Mixed partial derivative: coefficient times the factorial product.
    Complex partial(std::span<const int> exponents) const;
    Complex partial(std::initializer_list<int> exponents) const;

    std::span<const Complex> coefficients() const { return coeffs_; }
    Complex coeff_by_rank(int rank) const { return coeffs_[rank]; }
    Complex& coeff_by_rank(int rank) { return coeffs_[rank]; }
    const JetLayout& layout() const { return *layout_; }

    /// Jet of the partial derivative with respect to `var`; order drops by one.
    Jet derivative(int var) const;
    /// Copy truncated to a lower order.
    Jet truncated(int new_order) const;
    /// Copy embedded into a higher order with zero-filled top coefficients.
    /// The added coefficients are not derivatives of anything; callers must
    /// only rely on orders that were already present.
    Jet lifted(int new_order) const;

    double max_abs() const;
    /// Largest |Im coefficient|; hygiene check for real-slice evaluations.
    double max_imag() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(Complex s);
    Jet& operator+=(Complex s);
    Jet& operator-=(Complex s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    friend Jet operator+(Jet a, Complex s) { return a += s; }
    friend Jet operator+(Complex s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, Complex s) { return a -= s; }
    friend Jet operator-(Complex s, const Jet& a) { return -a + s; }
    friend Jet operator*(Jet a, Complex s) { return a *= s; }
    friend Jet operator*(Complex s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, Complex s) { return a *= (1.0 / s); }
    friend Jet operator/(Complex s, const Jet& a);

    friend Jet operator+(Jet a, double s) { return a += Complex{s}; }
    friend Jet operator+(double s, Jet a) { return a += Complex{s}; }
    friend Jet operator-(Jet a, double s) { return a -= Complex{s}; }
    friend Jet operator-(double s, const Jet& a) { return -a + Complex{s}; }
    friend Jet operator*(Jet a, double s) { return a *= Complex{s}; }
    friend Jet operator*(double s, Jet a) { return a *= Complex{s}; }
    friend Jet operator/(Jet a, double s) { return a *= Complex{1.0 / s}; }

    friend Jet exp(const Jet& a);
    friend Jet log(const Jet& a);  // principal branch; value must be nonzero
    friend Jet sqrt(const Jet& a); // principal branch; value must be nonzero
    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);
    friend Jet pow(const Jet& a, int n); // n >= 0, by repeated multiplication
    friend Jet reciprocal(const Jet& a);

    /// Substitute args[i] for variable i of f. centers[i] is the expansion
    /// point of f's i-th variable; the composition expands in args[i]'s own
    /// variables. All args must share one layout.
    friend Jet compose(const Jet& f, std::span<const Complex> centers,
                       std::span<const Jet> args);

    /// Substitute variable `var` of f by jet s, keeping the remaining
    /// variables as coordinates of s's space. Requires s's layout to have the
    /// same shape (num_vars, order) as f's, with the non-substituted variables
    /// expanded around the same centers. Much faster than general compose.
    friend Jet substitute_var(const Jet& f, int var, Complex center, const Jet& s);

private:
    Jet(const JetLayout* layout) : layout_(layout), coeffs_(layout->size()) {}

    const JetLayout* layout_ = nullptr;
    std::vector<Complex> coeffs_;
};

} // namespace heavenly
