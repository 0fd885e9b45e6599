#include "gridcert/rational_tf.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gridcert/error.hpp"

namespace gridcert {

namespace {
constexpr double kPoleHitRel = 1e-14;
}

RationalTF::RationalTF(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw Error(ErrorKind::InvalidArgument, "rational function with zero denominator");
    const double lead = den.leading();
    num_ = num.scaled(1.0 / lead);
    den_ = den.scaled(1.0 / lead);
}

double RationalTF::high_frequency_gain() const noexcept {
    if (num_.degree() < den_.degree()) return 0.0;
    if (num_.degree() == den_.degree()) return num_.leading() / den_.leading();
    return std::numeric_limits<double>::infinity();
}

Complex RationalTF::operator()(Complex s) const {
    const Complex d = den_(s);
    const double scale = den_.magnitude_scale(std::abs(s));
    if (std::abs(d) <= kPoleHitRel * scale) {
        throw Error(ErrorKind::PoleHit, "evaluation at s = (" + std::to_string(s.real()) + ", " +
                                            std::to_string(s.imag()) + ") is at a pole");
    }
    return num_(s) / d;
}

Complex eval(const RationalTF& tf, Complex s) { return tf(s); }

RationalTF add(const RationalTF& a, const RationalTF& b) {
    return {a.num() * b.den() + b.num() * a.den(), a.den() * b.den()};
}

RationalTF mul(const RationalTF& a, const RationalTF& b) { return {a.num() * b.num(), a.den() * b.den()}; }

RationalTF invert(const RationalTF& a) {
    if (a.is_zero()) throw Error(ErrorKind::ZeroInverse, "cannot invert the zero function");
    return {a.den(), a.num()};
}

RationalTF scale(const RationalTF& a, double c) { return {a.num().scaled(c), a.den()}; }

RationalTF combine(const RationalTF& a, const RationalTF& b, CombineKind kind, double c) {
    switch (kind) {
        case CombineKind::add: return add(a, b);
        case CombineKind::mul: return mul(a, b);
        case CombineKind::invert: return invert(a);
        case CombineKind::scale: return scale(a, c);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown combine kind");
}

std::vector<Complex> poles(const RationalTF& tf) {
    return tf.den().degree() >= 1 ? roots(tf.den()) : std::vector<Complex>{};
}

std::vector<Complex> zeros(const RationalTF& tf) {
    return tf.num().degree() >= 1 ? roots(tf.num()) : std::vector<Complex>{};
}

std::vector<NearCancellation> near_cancellations(const RationalTF& tf, double rel_tol) {
    std::vector<NearCancellation> out;
    const auto z = zeros(tf);
    const auto p = poles(tf);
    for (const Complex& zi : z) {
        for (const Complex& pi : p) {
            const double d = std::abs(zi - pi);
            if (d < rel_tol * std::max(1.0, std::abs(pi))) out.push_back({zi, pi, d});
        }
    }
    return out;
}

Complex StateSpace::transfer(Complex s) const {
    const Eigen::Index n = A.rows();
    Complex d(D.size() > 0 ? D(0, 0) : 0.0, 0.0);
    if (n == 0) return d;
    Eigen::MatrixXcd M = -A.cast<Complex>();
    M.diagonal().array() += s;
    const Eigen::VectorXcd x = M.partialPivLu().solve(B.col(0).cast<Complex>());
    return (C.row(0).cast<Complex>() * x)(0) + d;
}

StateSpace realize(const RationalTF& tf) {
    const int n = tf.den().degree();
    if (tf.num().degree() > n) {
        throw Error(ErrorKind::Improper, "deg num > deg den; realize the angle form g(s)/s instead");
    }
    // den is monic by construction.
    double d = 0.0;
    Polynomial num = tf.num();
    if (num.degree() == n) {
        d = num.leading();
        num = num - tf.den().scaled(d);
    }
    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(n, n);
    ss.B = Eigen::MatrixXd::Zero(n, 1);
    ss.C = Eigen::MatrixXd::Zero(1, n);
    ss.D = Eigen::MatrixXd::Constant(1, 1, d);
    if (n == 0) return ss;
    for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
    for (int j = 0; j < n; ++j) {
        ss.A(n - 1, j) = -tf.den().coeff(static_cast<std::size_t>(j));
        ss.C(0, j) = num.coeff(static_cast<std::size_t>(j));
    }
    ss.B(n - 1, 0) = 1.0;
    return ss;
}

namespace {

double factor_arg(Complex root, double omega) {
    const double x = -root.real();
    const double y = omega - root.imag();
    if (x > 0.0) return std::atan2(y, x);
    if (x < 0.0) return std::numbers::pi - std::atan(y / -x);
    if (y > 0.0) return std::numbers::pi / 2.0;
    if (y < 0.0) return -std::numbers::pi / 2.0;
    return 0.0;
}

}  // namespace

ContinuousPhase::ContinuousPhase(const RationalTF& tf, double omega_ref) : zeros_(zeros(tf)), poles_(poles(tf)) {
    if (tf.is_zero()) throw Error(ErrorKind::InvalidArgument, "phase of the zero function");
    const double gain_sign = tf.num().leading() / tf.den().leading();
    offset_ = gain_sign < 0.0 ? std::numbers::pi : 0.0;
    const double ref = omega_ref > 0.0 ? omega_ref : 1e-9;
    const double r = raw(ref);
    offset_ -= 2.0 * std::numbers::pi * std::ceil((r - std::numbers::pi) / (2.0 * std::numbers::pi));
}

double ContinuousPhase::raw(double omega) const noexcept {
    double acc = offset_;
    for (const Complex& z : zeros_) acc += factor_arg(z, omega);
    for (const Complex& p : poles_) acc -= factor_arg(p, omega);
    return acc;
}

double ContinuousPhase::operator()(double omega) const noexcept { return raw(omega); }

void unwrap_phase(std::vector<double>& phase) {
    const double two_pi = 2.0 * std::numbers::pi;
    double shift = 0.0;
    for (std::size_t k = 1; k < phase.size(); ++k) {
        const double prev = phase[k - 1];
        double cur = phase[k] + shift;
        while (cur - prev > std::numbers::pi) {
            cur -= two_pi;
            shift -= two_pi;
        }
        while (cur - prev < -std::numbers::pi) {
            cur += two_pi;
            shift += two_pi;
        }
        phase[k] = cur;
    }
}

}  // namespace gridcert
