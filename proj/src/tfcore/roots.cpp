#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "gridcert/error.hpp"
#include "gridcert/rational_tf.hpp"

namespace gridcert {

namespace {

constexpr double kResidualRel = 1e-8;
constexpr int kPolishSteps = 6;

double residual_bound(const Polynomial& p, Complex r) {
    return kResidualRel * p.max_abs() * std::pow(std::max(1.0, std::abs(r)), p.degree());
}

}  // namespace

std::vector<Complex> roots(const Polynomial& p) {
    const int deg = p.degree();
    if (deg < 1) throw Error(ErrorKind::InvalidArgument, "roots() needs a polynomial of degree >= 1");

    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(deg));

    // Exact zero roots come from vanishing low-order coefficients.
    std::size_t low = 0;
    while (p.coeffs()[low] == 0.0) {
        out.emplace_back(0.0, 0.0);
        ++low;
    }
    const std::vector<double> c(p.coeffs().begin() + static_cast<std::ptrdiff_t>(low), p.coeffs().end());
    const int n = static_cast<int>(c.size()) - 1;

    if (n >= 1) {
        // Substitute s = sigma t so the scaled monic polynomial has unit constant
        // term, then normalise to max|coeff| = 1 before forming the companion.
        const double sigma = std::pow(std::abs(c.front() / c.back()), 1.0 / n);
        std::vector<double> q(c.size());
        double pw = 1.0;
        for (int k = 0; k <= n; ++k) {
            q[k] = c[k] * pw;
            pw *= sigma;
        }
        const double qmax = *std::max_element(q.begin(), q.end(), [](double a, double b) {
            return std::abs(a) < std::abs(b);
        });
        for (double& x : q) x /= std::abs(qmax);

        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -q[i] / q[n];

        Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
        if (es.info() != Eigen::Success) {
            throw Error(ErrorKind::NoConverge, "companion eigenvalue iteration did not converge");
        }
        const Polynomial dp = p.derivative();
        for (int i = 0; i < n; ++i) {
            Complex r = es.eigenvalues()(i) * sigma;
            double res = std::abs(p(r));
            for (int it = 0; it < kPolishSteps && res > 0.0; ++it) {
                const Complex slope = dp(r);
                if (std::abs(slope) == 0.0) break;
                const Complex cand = r - p(r) / slope;
                const double cres = std::abs(p(cand));
                if (!(cres < res)) break;
                r = cand;
                res = cres;
            }
            if (!(res <= residual_bound(p, r))) {
                throw Error(ErrorKind::NoConverge, "root residual " + std::to_string(res) +
                                                       " exceeds bound; polynomial is ill-conditioned");
            }
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

}  // namespace gridcert
