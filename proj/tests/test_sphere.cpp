#include <gtest/gtest.h>

#include "curvecp/cp.hpp"
#include "curvecp/sphere.hpp"

using namespace curvecp;

namespace {

const MaterialPair gold_vac{builtin("vacuum"), builtin("Au")};
const IsotropicPolarizability unit = [](const ImaginaryFrequency&) { return 1.0; };

} // namespace

TEST(Bessel, LowestOrderClosedForms) {
    for (double x : {1e-3, 0.2, 1.0, 7.5, 30.0}) {
        const BesselPair b = bessel_pair(0, x);
        EXPECT_NEAR(b.I() / std::sinh(x), 1.0, 1e-13) << x;
        EXPECT_NEAR(b.K() / (pi / 2 * std::exp(-x)), 1.0, 1e-13) << x;
        EXPECT_NEAR(b.dI() / std::cosh(x), 1.0, 1e-13) << x;
        EXPECT_NEAR(b.dlog_K, -1.0, 1e-15);
    }
}

TEST(Bessel, FirstOrderClosedForm) {
    for (double x : {0.05, 1.0, 12.0}) {
        const BesselPair b = bessel_pair(1, x);
        EXPECT_NEAR(b.K() / (pi / 2 * std::exp(-x) * (1 + 1 / x)), 1.0, 1e-13);
        EXPECT_NEAR(b.I() / (std::cosh(x) - std::sinh(x) / x), 1.0, 1e-9);
    }
}

TEST(Bessel, Wronskian) {
    const BesselPair b = bessel_pair(3, 2.5);
    EXPECT_NEAR(b.wronskian(), -pi / 2, 1e-13);
    const BesselSequence s = bessel_sequence(500, 40.0);
    for (int l : {0, 1, 10, 100, 500}) EXPECT_NEAR(s.pair(l).wronskian() / (-pi / 2), 1.0, 1e-11) << l;
}

TEST(Bessel, LargeArgumentWithoutOverflow) {
    // e^x K_1 stays finite at x = 700, where K_1 alone is near underflow
    const double x = 700.0;
    const BesselPair b = bessel_pair(1, x);
    EXPECT_NEAR(std::exp(b.log_K + x) / (pi / 2 * (1 + 1 / x)), 1.0, 1e-13);
    // the leading asymptotic pi/2 is reached only up to the 1/x correction
    EXPECT_NEAR(std::exp(b.log_K + x) / (pi / 2), 1.0, 2e-3);
    EXPECT_TRUE(std::isfinite(b.log_I));
}

TEST(Bessel, PositiveAndMonotone) {
    const BesselSequence s = bessel_sequence(200, 3.0);
    for (int l = 0; l <= 200; ++l) {
        EXPECT_GT(s.dlog_I[l], 0.0);
        EXPECT_LT(s.dlog_K[l], 0.0);
        if (l > 0) {
            EXPECT_LT(s.log_I[l], s.log_I[l - 1]);
            EXPECT_GT(s.log_K[l], s.log_K[l - 1]);
        }
    }
}

TEST(Bessel, DomainErrors) {
    for (double x : {0.0, -1.0, 2e5}) {
        try {
            bessel_pair(1, x);
            FAIL() << x;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::OverflowDomain);
        }
    }
    EXPECT_THROW(bessel_pair(-1, 1.0), Error);
}

TEST(Mie, ZeroContrastScattersNothing) {
    const MieCoefficients t = mie_t(3, MediumResponse{1, 1, 1, 1}, 2.0, 0.7);
    EXPECT_EQ(t.TEE, 0.0);
    EXPECT_EQ(t.THH, 0.0);
}

TEST(Mie, DipoleLimit) {
    for (double eps : {2.0, 3.0, 10.0}) {
        const double x = 1e-3;
        const MieCoefficients t = mie_t(1, MediumResponse{1, 1, eps, 1}, 1.0, x);
        EXPECT_NEAR(t.TEE / (x * x * x) / ((2.0 / 3.0) * (eps - 1) / (eps + 2)), 1.0, 1e-2);
    }
}

TEST(Mie, ElectricMagneticDuality) {
    for (int l : {1, 4, 9}) {
        const MieCoefficients a = mie_t(l, MediumResponse{1, 1, 4.0, 2.0}, 1.5, 0.8);
        const MieCoefficients b = mie_t(l, MediumResponse{1, 1, 2.0, 4.0}, 1.5, 0.8);
        EXPECT_NEAR(a.TEE, b.THH, 1e-13 * std::abs(a.TEE)) << l;
        EXPECT_NEAR(a.THH, b.TEE, 1e-13 * std::abs(a.THH)) << l;
    }
}

TEST(Mie, RealAndFinite) {
    for (const MediumResponse& m : {MediumResponse{1, 1, 50, 1}, MediumResponse::pec()})
        for (double x : {1e-2, 1.0, 100.0}) {
            const MieCoefficients t = mie_t(2, m, 1.0, x);
            EXPECT_TRUE(std::isfinite(t.TEE));
            EXPECT_TRUE(std::isfinite(t.THH));
        }
}

TEST(SphereCp, ZeroContrastVanishes) {
    const MaterialPair vac{builtin("vacuum"), builtin("vacuum")};
    EXPECT_EQ(sphere_cp(5.0, 0.5, FiniteTemperature{300}, unit, vac).energy, 0.0);
}

TEST(SphereCp, LinearInPolarizabilityAndAttractive) {
    const double a = sphere_cp(5.0, 0.5, FiniteTemperature{300}, unit, gold_vac).energy;
    const double b =
        sphere_cp(5.0, 0.5, FiniteTemperature{300}, [](const ImaginaryFrequency&) { return 2.0; }, gold_vac).energy;
    EXPECT_LT(a, 0.0);
    EXPECT_NEAR(b, 2 * a, 1e-14 * std::abs(a));
}

TEST(SphereCp, StaticTermHasHalfWeight) {
    const double R = 5.0, d = 0.5, T = 300.0;
    const SphereResult r = sphere_cp(R, d, FiniteTemperature{T}, unit, gold_vac);
    double sum = 0.0;
    for (int n = 0; n < r.terms; ++n)
        sum += (n == 0 ? 0.5 : 1.0) *
               sphere_summand(gold_vac, R, d, unit, ImaginaryFrequency::from_xi(n * matsubara_spacing(T)));
    EXPECT_NEAR(r.energy, k_boltzmann * T * sum, 1e-13 * std::abs(r.energy));
}

TEST(SphereCp, ApproachesPlaneForLargeRadius) {
    const double R = 1000.0, d = 1.0;
    const ThermalState T = FiniteTemperature{300};
    const double Us = sphere_cp(R, d, T, unit, gold_vac).energy;
    DirectBetas flat(gold_vac, d, true);
    const ParticlePolarizability iso = GenericUniaxial::isotropic(1.0);
    const double U0 = cp_potential({d, 0.0, 0.0}, flat, gold_vac, iso, orient_z, T);
    const double U1 = cp_potential({d, -d / R, -d / R}, flat, gold_vac, iso, orient_z, T);
    EXPECT_LT(std::abs(U0 / Us - 1), 3e-3);
    EXPECT_LT(std::abs(U1 / Us - 1), 1e-5);
}

TEST(SphereCp, RejectsNonPositiveGeometry) {
    EXPECT_THROW(sphere_cp(5.0, 0.0, FiniteTemperature{300}, unit, gold_vac), Error);
    EXPECT_THROW(sphere_cp(-1.0, 0.5, FiniteTemperature{300}, unit, gold_vac), Error);
}
