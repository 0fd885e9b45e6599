#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gridcert/devices.hpp"
#include "gridcert/error.hpp"
#include "gridcert/rational_tf.hpp"
#include "test_support.hpp"

using namespace gridcert;
using gridcert::testing::kW0;

namespace {

RationalTF random_stable_tf(std::mt19937_64& rng, int max_deg) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> D(1, max_deg);
    const int dd = D(rng);
    std::vector<Complex> p;
    while (static_cast<int>(p.size()) < dd) {
        const double re = -(0.1 + 5.0 * U(rng));
        if (dd - static_cast<int>(p.size()) >= 2 && U(rng) < 0.5) {
            p.emplace_back(re, 0.2 + 5.0 * U(rng));
            p.emplace_back(p.back().real(), -p.back().imag());
        } else {
            p.emplace_back(re, 0.0);
        }
    }
    const Polynomial den = Polynomial::from_roots(p);
    std::uniform_int_distribution<int> N(0, dd);
    const int dn = N(rng);
    std::vector<double> nc(static_cast<std::size_t>(dn) + 1);
    for (auto& c : nc) c = 2.0 * U(rng) - 1.0;
    nc.back() = 0.5 + U(rng);
    return {Polynomial(nc), den};
}

void expect_coeffs_near(const Polynomial& a, const Polynomial& b, double tol) {
    ASSERT_EQ(a.degree(), b.degree());
    const double scale = std::max(a.max_abs(), b.max_abs());
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) EXPECT_NEAR(a.coeff(k), b.coeff(k), tol * scale) << "k=" << k;
}

// Cross-multiplied equality a.num * b.den == b.num * a.den.
void expect_tf_equal(const RationalTF& a, const RationalTF& b, double tol) {
    expect_coeffs_near(a.num() * b.den(), b.num() * a.den(), tol);
}

}  // namespace

TEST(Polynomial, TrimsAndReportsDegree) {
    const Polynomial p({1.0, 2.0, 0.0, 0.0});
    EXPECT_EQ(p.degree(), 1);
    EXPECT_TRUE(Polynomial().is_zero());
    EXPECT_EQ(Polynomial().degree(), -1);
}

TEST(Polynomial, DivideRecombines) {
    const Polynomial a({1.0, -3.0, 0.0, 2.0, 5.0});
    const Polynomial b({2.0, 1.0, 1.0});
    const auto [q, r] = Polynomial::divide(a, b);
    EXPECT_LT(r.degree(), b.degree());
    expect_coeffs_near(q * b + r, a, 1e-14);
}

TEST(RationalTF, DcGainOfLineDynamics) {
    const RationalTF mu = line_mu({0.1, kW0});
    EXPECT_NEAR(mu(Complex(0.0, 0.0)).real(), 1.0 / 1.01, 1e-12);
    EXPECT_NEAR(1.0 / 1.01, 0.990099, 1e-6);
}

TEST(RationalTF, DcGainOfGenerator) {
    for (double tg : {0.5, 3.0, 10.0}) {
        for (double xi : {0.0, 0.0131}) {
            const RationalTF g = bus_transfer(MachineParams{3.7, tg, 20.0, xi, kW0, false});
            EXPECT_NEAR(g(Complex(0.0, 0.0)).real(), kW0 / 20.0, 1e-10);
        }
    }
    EXPECT_NEAR(kW0 / 20.0, 18.8496, 1e-4);
}

TEST(RationalTF, HandEvaluation) {
    const RationalTF f(Polynomial({1.0, 1.0}), Polynomial({1.0, 2.0}));
    const Complex v = f(Complex(0.0, 1.0));
    EXPECT_NEAR(v.real(), 0.6, 1e-15);
    EXPECT_NEAR(v.imag(), -0.2, 1e-15);
}

TEST(RationalTF, PoleHitThrows) {
    const RationalTF f(Polynomial({1.0}), Polynomial({0.0, 1.0}));
    try {
        (void)f(Complex(0.0, 0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::PoleHit);
    }
}

TEST(Combine, InvertAndAddExamples) {
    const RationalTF a(Polynomial({1.0}), Polynomial({1.0, 1.0}));
    const RationalTF ia = invert(a);
    EXPECT_EQ(ia.den().degree(), 0);
    expect_tf_equal(ia, RationalTF(Polynomial({1.0, 1.0}), Polynomial({1.0})), 1e-15);

    const RationalTF one_over_s(Polynomial({1.0}), Polynomial({0.0, 1.0}));
    const RationalTF sum = add(one_over_s, one_over_s);
    expect_tf_equal(sum, RationalTF(Polynomial({2.0}), Polynomial({0.0, 1.0})), 1e-15);
    EXPECT_NEAR(std::abs(sum(Complex(0.0, 2.0)) - Complex(0.0, -1.0)), 0.0, 1e-15);
}

TEST(Combine, ZeroInverseThrows) {
    try {
        (void)invert(RationalTF::constant(0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroInverse);
    }
}

TEST(Combine, DispatchMatchesNamedOps) {
    const RationalTF a(Polynomial({1.0, 2.0}), Polynomial({3.0, 1.0, 1.0}));
    const RationalTF b(Polynomial({0.5}), Polynomial({1.0, 4.0}));
    expect_tf_equal(combine(a, b, CombineKind::add), add(a, b), 1e-15);
    expect_tf_equal(combine(a, b, CombineKind::mul), mul(a, b), 1e-15);
    expect_tf_equal(combine(a, b, CombineKind::invert), invert(a), 1e-15);
    expect_tf_equal(combine(a, b, CombineKind::scale, 2.5), scale(a, 2.5), 1e-15);
}

TEST(Combine, CommutesAndAssociates) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const RationalTF a = random_stable_tf(rng, 3);
        const RationalTF b = random_stable_tf(rng, 3);
        const RationalTF c = random_stable_tf(rng, 3);
        expect_tf_equal(add(a, b), add(b, a), 1e-12);
        expect_tf_equal(mul(a, b), mul(b, a), 1e-12);
        expect_tf_equal(add(add(a, b), c), add(a, add(b, c)), 1e-10);
        expect_tf_equal(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-10);
    }
}

TEST(Roots, HandExamples) {
    auto r = roots(Polynomial({1.0, 2.0, 1.0}));
    ASSERT_EQ(r.size(), 2u);
    for (const auto& x : r) EXPECT_NEAR(std::abs(x + 1.0), 0.0, 1e-7);

    r = roots(Polynomial({kW0 * kW0, 0.0, 1.0}));
    ASSERT_EQ(r.size(), 2u);
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
    EXPECT_NEAR(r[0].real(), 0.0, 1e-9 * kW0);
    EXPECT_NEAR(r[0].imag(), -kW0, 1e-9 * kW0);
    EXPECT_NEAR(r[1].imag(), kW0, 1e-9 * kW0);

    const double rho = 0.1;
    const RationalTF mu = line_mu({rho, kW0});
    auto p = poles(mu);
    ASSERT_EQ(p.size(), 2u);
    for (const auto& x : p) {
        EXPECT_NEAR(x.real(), -rho * kW0, 1e-9 * kW0);
        EXPECT_NEAR(std::abs(x.imag()), kW0, 1e-9 * kW0);
    }
}

TEST(Roots, ReconstructionDegreeUpToEight) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int deg = 1 + trial % 8;
        std::vector<double> c(static_cast<std::size_t>(deg) + 1);
        for (auto& x : c) x = U(rng);
        c.back() = 0.5 + std::abs(U(rng));
        const Polynomial p(c);
        const auto r = roots(p);
        ASSERT_EQ(static_cast<int>(r.size()), deg);
        // Reconstruct with plain complex arithmetic, independent of from_roots.
        std::vector<Complex> q{Complex(p.leading(), 0.0)};
        for (const auto& z : r) {
            std::vector<Complex> next(q.size() + 1, Complex(0.0, 0.0));
            for (std::size_t k = 0; k < q.size(); ++k) {
                next[k + 1] += q[k];
                next[k] -= z * q[k];
            }
            q = next;
        }
        for (std::size_t k = 0; k < c.size(); ++k) {
            EXPECT_NEAR(q[k].real(), c[k], 1e-6 * p.max_abs()) << "deg " << deg << " k " << k;
            EXPECT_NEAR(q[k].imag(), 0.0, 1e-6 * p.max_abs());
        }
    }
}

TEST(Roots, NearCancellationReported) {
    const RationalTF f(Polynomial({2.0, 1.0}), Polynomial({2.0 * 3.0, 5.0, 1.0}));  // (s+2)/((s+2)(s+3))
    const auto nc = near_cancellations(f);
    ASSERT_EQ(nc.size(), 1u);
    EXPECT_NEAR(nc[0].pole.real(), -2.0, 1e-9);
    EXPECT_EQ(poles(f).size(), 2u);  // nothing was cancelled
}

TEST(Realize, HandExamples) {
    StateSpace ss = realize(RationalTF(Polynomial({1.0}), Polynomial({1.0, 1.0})));
    ASSERT_EQ(ss.states(), 1);
    EXPECT_DOUBLE_EQ(ss.A(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(ss.B(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(ss.C(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(ss.D(0, 0), 0.0);

    ss = realize(RationalTF(Polynomial({2.0, 1.0}), Polynomial({1.0, 1.0})));
    EXPECT_DOUBLE_EQ(ss.A(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(ss.B(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(ss.C(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(ss.D(0, 0), 1.0);
}

TEST(Realize, ImproperThrows) {
    const RationalTF g = bus_transfer(ConverterParams{0.05, 0.0, 0.005, kW0});
    try {
        (void)realize(g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Improper);
    }
}

TEST(Realize, MatchesEvaluationInRightHalfPlane) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const RationalTF f = random_stable_tf(rng, 5);
        const StateSpace ss = realize(f);
        for (int k = 0; k < 100; ++k) {
            const Complex s(10.0 * U(rng), 20.0 * U(rng) - 10.0);
            const Complex a = f(s);
            const Complex b = ss.transfer(s);
            EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST(Phase, ContinuousAcrossBranchCut) {
    // 1/((s+1)(s+2)(s+3)) goes from 0 to -270 degrees.
    const RationalTF f(Polynomial({1.0}), Polynomial({6.0, 11.0, 6.0, 1.0}));
    ContinuousPhase ph(f);
    EXPECT_NEAR(ph(0.0), 0.0, 1e-12);
    EXPECT_NEAR(ph(1.0), -std::atan(1.0) - std::atan(0.5) - std::atan(1.0 / 3.0), 1e-12);
    EXPECT_NEAR(ph(1e6), -1.5 * std::numbers::pi, 1e-5);
    // Sampled atan2 plus unwrap is an independent route to the same curve.
    std::vector<double> w, sampled;
    for (int k = 0; k <= 400; ++k) {
        w.push_back(std::pow(10.0, -2.0 + 6.0 * k / 400.0));
        sampled.push_back(std::arg(f.at_jw(w.back())));
    }
    unwrap_phase(sampled);
    for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(ph(w[k]), sampled[k], 1e-9);
}
