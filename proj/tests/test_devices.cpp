#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gridcert/devices.hpp"
#include "gridcert/error.hpp"
#include "test_support.hpp"

using namespace gridcert;
using gridcert::testing::kW0;

namespace {

const DamperCircuitParams kTableI{0.182, 0.0117, 0.0662, 0.1858, kW0};

ErrorKind kind_thrown(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST(Damper, TableIMachineGivesQuotedValue) {
    const XiSM x = damper_coefficient(kTableI);
    EXPECT_NEAR(x.seconds, 0.0131, 0.02 * 0.0131);
    EXPECT_NEAR(x.per_unit / kW0, x.seconds, 1e-15);
    const double oracle = 0.182 * 0.0662 * 0.0662 / (0.0117 * (0.182 - 0.0662) * (0.1858 - 0.0662)) / kW0;
    EXPECT_NEAR(x.seconds, oracle, 1e-15);
}

TEST(Damper, VanishesWithSubtransientInductance) {
    DamperCircuitParams p = kTableI;
    double prev = xi_sm(p);
    for (double lad : {1e-2, 1e-4, 1e-6, 0.0}) {
        p.L_ad_sub = lad;
        const double v = xi_sm(p);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_EQ(prev, 0.0);
}

TEST(Damper, DegenerateGeometry) {
    DamperCircuitParams p = kTableI;
    p.L_aq_sub = p.L_ad_sub;
    EXPECT_EQ(kind_thrown([&] { (void)xi_sm(p); }), ErrorKind::DegenerateGeometry);
    p = kTableI;
    p.L_Dd = p.L_ad_sub;
    EXPECT_EQ(kind_thrown([&] { (void)xi_sm(p); }), ErrorKind::DegenerateGeometry);
}

TEST(BusTransfer, GeneratorDcGain) {
    const RationalTF g = bus_transfer(MachineParams{3.7, 3.0, 20.0, 0.0, kW0, false});
    EXPECT_NEAR(g(Complex(0.0, 0.0)).real(), kW0 / 20.0, 1e-12);
    EXPECT_TRUE(g.is_proper());
}

TEST(BusTransfer, CondenserFactorStructure) {
    const double xi = 0.0131;
    const RationalTF g = bus_transfer(MachineParams{2.0, 0.0, 0.0, xi, kW0, true});
    const auto p = poles(g);
    const auto z = zeros(g);
    ASSERT_EQ(p.size(), 1u);
    ASSERT_EQ(z.size(), 1u);
    EXPECT_NEAR(std::abs(p[0]), 0.0, 1e-12);
    EXPECT_NEAR(z[0].real(), -1.0 / xi, 1e-9 / xi);
}

TEST(BusTransfer, PdHighFrequencyGain) {
    const RationalTF g = bus_transfer(ConverterParams{0.05, 3.0, 0.005, kW0});
    EXPECT_NEAR(g.high_frequency_gain(), 0.05 * kW0 * 0.005 / 3.0, 1e-14);
    EXPECT_EQ(kind_of(Device{ConverterParams{0.05, 3.0, 0.005, kW0}}), DeviceKind::pd_droop);
    EXPECT_EQ(kind_of(Device{ConverterParams{0.05, 3.0, 0.0, kW0}}), DeviceKind::droop);
}

TEST(BusTransfer, FastTurbineGeneratorIsVsmDroop) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double H = 1.0 + 8.0 * U(rng);
        const double kg = 5.0 + 30.0 * U(rng);
        const RationalTF sg = bus_transfer(MachineParams{H, 0.0, kg, 0.0, kW0, false});
        const RationalTF dr = bus_transfer(ConverterParams{1.0 / kg, 2.0 * H / kg, 0.0, kW0});
        ASSERT_EQ(sg.num().degree(), dr.num().degree());
        ASSERT_EQ(sg.den().degree(), dr.den().degree());
        for (std::size_t i = 0; i < sg.num().coeffs().size(); ++i) {
            EXPECT_NEAR(sg.num().coeff(i), dr.num().coeff(i), 1e-12 * std::abs(dr.num().coeff(i)));
        }
        for (std::size_t i = 0; i < sg.den().coeffs().size(); ++i) {
            EXPECT_NEAR(sg.den().coeff(i), dr.den().coeff(i), 1e-12 * std::abs(dr.den().coeff(i)));
        }
    }
}

TEST(BusTransfer, LibraryDevicesRealizable) {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 100; ++k) {
        const Device d = gridcert::testing::random_device(rng);
        const RationalTF g = bus_transfer(d);
        EXPECT_TRUE(g.is_proper());
        EXPECT_NO_THROW((void)realize(g));
    }
}

TEST(LineMu, PolesAndErrors) {
    const RationalTF mu = line_mu({0.1, kW0});
    for (const auto& p : poles(mu)) {
        EXPECT_NEAR(p.real(), -0.1 * kW0, 1e-9 * kW0);
        EXPECT_NEAR(std::abs(p.imag()), kW0, 1e-9 * kW0);
    }
    EXPECT_EQ(kind_thrown([] { (void)line_mu({0.0, kW0}); }), ErrorKind::NonPositiveRho);
    EXPECT_EQ(kind_thrown([] { (void)line_mu({-0.1, kW0}); }), ErrorKind::NonPositiveRho);
    EXPECT_NEAR(resonant_frequency(0.1, kW0), kW0 * 0.99499, 1e-5 * kW0);
    EXPECT_NEAR(natural_frequency(0.1, kW0), kW0 * std::sqrt(1.01), 1e-12);
}

TEST(LineMu, GainPeaksAtResonance) {
    for (double rho : {0.02, 0.1, 0.3, 0.6}) {
        const RationalTF mu = line_mu({rho, kW0});
        const double wr = resonant_frequency(rho, kW0);
        double prev = std::abs(mu.at_jw(0.0));
        for (int k = 1; k <= 2000; ++k) {
            const double w = 3.0 * wr * k / 2000.0;
            const double g = std::abs(mu.at_jw(w));
            if (w < wr) {
                EXPECT_GT(g, prev) << "rho " << rho << " w " << w;
            } else if (w - 3.0 * wr / 2000.0 > wr) {
                EXPECT_LT(g, prev) << "rho " << rho << " w " << w;
            }
            prev = g;
        }
    }
}
