#pragma once

#include <Eigen/Dense>

#include <vector>

#include "gridcert/polynomial.hpp"

namespace gridcert {

/// Real-coefficient rational function num(s)/den(s) of the Laplace variable.
/// Stored with a monic denominator; no pole-zero cancellation is ever applied.
class RationalTF {
public:
    RationalTF() : num_(Polynomial::constant(0.0)), den_(Polynomial::constant(1.0)) {}
    RationalTF(Polynomial num, Polynomial den);

    static RationalTF constant(double k) { return {Polynomial::constant(k), Polynomial::constant(1.0)}; }

    [[nodiscard]] const Polynomial& num() const noexcept { return num_; }
    [[nodiscard]] const Polynomial& den() const noexcept { return den_; }

    [[nodiscard]] bool is_zero() const noexcept { return num_.is_zero(); }
    [[nodiscard]] bool is_proper() const noexcept { return num_.degree() <= den_.degree(); }
    [[nodiscard]] bool is_strictly_proper() const noexcept { return num_.degree() < den_.degree(); }
    /// lim_{s->inf} of the function; +inf when improper.
    [[nodiscard]] double high_frequency_gain() const noexcept;

    /// Horner evaluation; throws PoleHit when |den(s)| is below round-off of its scale.
    [[nodiscard]] Complex operator()(Complex s) const;
    [[nodiscard]] Complex at_jw(double omega) const { return (*this)(Complex(0.0, omega)); }

private:
    Polynomial num_;
    Polynomial den_;
};

enum class CombineKind { add, mul, invert, scale };

[[nodiscard]] Complex eval(const RationalTF& tf, Complex s);

[[nodiscard]] RationalTF add(const RationalTF& a, const RationalTF& b);
[[nodiscard]] RationalTF mul(const RationalTF& a, const RationalTF& b);
/// Throws ZeroInverse for the zero function.
[[nodiscard]] RationalTF invert(const RationalTF& a);
[[nodiscard]] RationalTF scale(const RationalTF& a, double c);
/// Single entry point over the four algebraic operations; `b` is ignored for
/// invert and scale, `c` is used only by scale.
[[nodiscard]] RationalTF combine(const RationalTF& a, const RationalTF& b, CombineKind kind, double c = 1.0);

/// All deg(p) roots with multiplicity: companion-matrix eigenvalues of the
/// scaled polynomial followed by Newton polishing. Throws NoConverge when the
/// residual bound 1e-8 * max|coeff| * max(1,|r|)^deg cannot be met.
[[nodiscard]] std::vector<Complex> roots(const Polynomial& p);

[[nodiscard]] std::vector<Complex> poles(const RationalTF& tf);
[[nodiscard]] std::vector<Complex> zeros(const RationalTF& tf);

struct NearCancellation {
    Complex zero;
    Complex pole;
    double distance;
};

/// Zero/pole pairs closer than `rel_tol` * max(1, |pole|).
[[nodiscard]] std::vector<NearCancellation> near_cancellations(const RationalTF& tf, double rel_tol = 1e-6);

struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;

    [[nodiscard]] Eigen::Index states() const noexcept { return A.rows(); }
    /// C (sI - A)^{-1} B + D for a single-input single-output realization.
    [[nodiscard]] Complex transfer(Complex s) const;
};

/// Controllable canonical SISO realization. Throws Improper if deg num > deg den.
[[nodiscard]] StateSpace realize(const RationalTF& tf);

/// Continuous (unwrapped) phase of tf(j omega) for omega >= 0, built from the
/// roots of numerator and denominator. Each factor (j omega - r) contributes an
/// argument that is continuous in omega unless r lies on the positive imaginary
/// axis. The result is shifted by a multiple of 2 pi so that the phase at
/// `omega_ref` lies in (-pi, pi].
class ContinuousPhase {
public:
    explicit ContinuousPhase(const RationalTF& tf, double omega_ref = 0.0);

    /// Radians.
    [[nodiscard]] double operator()(double omega) const noexcept;

private:
    [[nodiscard]] double raw(double omega) const noexcept;

    std::vector<Complex> zeros_;
    std::vector<Complex> poles_;
    double offset_ = 0.0;
};

/// In-place unwrap of a sampled phase sequence (radians): successive jumps
/// larger than pi are folded by 2 pi.
void unwrap_phase(std::vector<double>& phase);

}  // namespace gridcert
