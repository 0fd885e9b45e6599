#include "gridcert/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridcert/error.hpp"

namespace gridcert {

namespace {
// Relative size below which a trailing coefficient is treated as round-off.
constexpr double kTrimRel = 8.0 * std::numeric_limits<double>::epsilon();
}  // namespace

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) {
            throw Error(ErrorKind::InvalidArgument, "polynomial coefficient is not finite");
        }
    }
    const double scale = max_abs();
    while (!coeffs_.empty() && std::abs(coeffs_.back()) <= kTrimRel * scale) {
        coeffs_.pop_back();
    }
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots, double leading) {
    // Multiply out in complex arithmetic, then keep the real part; conjugate
    // pairs make the imaginary parts vanish up to round-off.
    std::vector<Complex> c{Complex(leading, 0.0)};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, Complex(0.0, 0.0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> re(c.size());
    std::transform(c.begin(), c.end(), re.begin(), [](Complex z) { return z.real(); });
    return Polynomial(std::move(re));
}

double Polynomial::max_abs() const noexcept {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Complex Polynomial::operator()(Complex s) const noexcept {
    Complex acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::operator()(double s) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::magnitude_scale(double abs_s) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_s + std::abs(*it);
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled(double c) const {
    std::vector<double> out(coeffs_);
    for (double& x : out) x *= c;
    return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
    return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(out));
}

std::pair<Polynomial, Polynomial> Polynomial::divide(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Polynomial{}, a};
    std::vector<double> rem(a.coeffs_);
    const std::size_t nb = b.coeffs_.size();
    std::vector<double> quot(rem.size() - nb + 1, 0.0);
    for (std::size_t k = quot.size(); k-- > 0;) {
        const double q = rem[k + nb - 1] / b.coeffs_.back();
        quot[k] = q;
        for (std::size_t j = 0; j < nb; ++j) rem[k + j] -= q * b.coeffs_[j];
        rem[k + nb - 1] = 0.0;
    }
    rem.resize(nb - 1);
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

}  // namespace gridcert
