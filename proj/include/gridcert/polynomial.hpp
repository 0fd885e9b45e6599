#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gridcert {

using Complex = std::complex<double>;

/// Dense real polynomial, ascending degree: coeffs()[k] multiplies s^k.
/// Trailing coefficients at round-off level relative to the largest one are
/// trimmed on construction, so the zero polynomial is the empty list.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs);
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c) { return Polynomial({c}); }
    /// leading * prod (s - r). Complex roots must come with their conjugates.
    static Polynomial from_roots(std::span<const Complex> roots, double leading = 1.0);

    [[nodiscard]] const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Degree of the zero polynomial is reported as -1.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] double coeff(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : 0.0; }
    [[nodiscard]] double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    [[nodiscard]] double max_abs() const noexcept;

    [[nodiscard]] Complex operator()(Complex s) const noexcept;
    [[nodiscard]] double operator()(double s) const noexcept;
    /// Sum of |c_k| |s|^k, the magnitude scale Horner's rule works against.
    [[nodiscard]] double magnitude_scale(double abs_s) const noexcept;

    [[nodiscard]] Polynomial derivative() const;
    [[nodiscard]] Polynomial scaled(double c) const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

    /// Quotient and remainder of a / b.
    static std::pair<Polynomial, Polynomial> divide(const Polynomial& a, const Polynomial& b);

private:
    void trim();

    std::vector<double> coeffs_;
};

}  // namespace gridcert
