#include <gtest/gtest.h>

#include "curvecp/materials.hpp"

using namespace curvecp;

namespace {

const char* dispersive[] = {"Au", "Si", "PS", "Br"};

double eps(const char* name, double xi) { return permittivity(builtin(name), ImaginaryFrequency::from_xi(xi)); }

} // namespace

TEST(Permittivity, SiliconStaticValue) { EXPECT_DOUBLE_EQ(eps("Si", 0.0), 11.87); }

TEST(Permittivity, BromobenzeneStaticValue) { EXPECT_NEAR(eps("Br", 0.0), 5.302, 1e-12); }

TEST(Permittivity, GoldAtOneElectronVolt) {
    // 30-digit evaluation of the Drude-oscillator formula, frozen
    EXPECT_NEAR(eps("Au", 1.0), 84.8733196660016478, 1e-12);
}

TEST(Permittivity, PolystyreneAtOneElectronVolt) { EXPECT_NEAR(eps("PS", 1.0), 2.51001822033806726, 1e-13); }

TEST(Permittivity, HighFrequencyLimit) {
    for (const char* m : {"Au", "PS", "Br"}) EXPECT_NEAR(eps(m, 1e6), 1.0, 1e-4) << m;
    // the silicon model keeps a background eps_inf = 1.035
    EXPECT_NEAR(eps("Si", 1e6), 1.035, 1e-4);
}

TEST(Permittivity, StrictlyDecreasingAndAboveOne) {
    for (const char* m : dispersive) {
        double prev = INFINITY;
        for (int i = 0; i <= 200; ++i) {
            const double xi = 1e-4 * std::pow(1e8, i / 200.0);
            const double e = eps(m, xi);
            EXPECT_GE(e, 1.0) << m << " xi " << xi;
            EXPECT_LT(e, prev) << m << " xi " << xi;
            prev = e;
        }
    }
}

TEST(Permittivity, DrudeStaticDivergence) {
    EXPECT_THROW(eps("Au", 0.0), Error);
    EXPECT_TRUE(is_pec_value(permittivity_or_pec(builtin("Au"), ImaginaryFrequency::from_xi(0.0))));
    try {
        eps("Au", 0.0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::StaticDrudeDivergence);
    }
}

TEST(Permittivity, NegativeFrequencyRejected) {
    try {
        ImaginaryFrequency::from_xi(-1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NegativeFrequency);
    }
}

TEST(Frequency, KappaConsistentWithXi) {
    const auto f = ImaginaryFrequency::from_xi(2.0);
    EXPECT_DOUBLE_EQ(f.kappa, 2.0 / hbar_c);
    EXPECT_DOUBLE_EQ(ImaginaryFrequency::from_kappa(f.kappa).xi, f.xi);
}

TEST(Matsubara, FirstFrequencyAtRoomTemperature) {
    const auto l = matsubara_ladder(FiniteTemperature{300.0}, 3);
    EXPECT_EQ(l[0].xi, 0.0);
    EXPECT_NEAR(l[1].xi, 2 * pi * 0.02585199, 1e-7);
    EXPECT_NEAR(l[1].xi, 0.16243, 1e-5);
}

TEST(Matsubara, LinearInTemperature) {
    const auto a = matsubara_ladder(FiniteTemperature{300.0}, 1), b = matsubara_ladder(FiniteTemperature{600.0}, 1);
    EXPECT_DOUBLE_EQ(b[1].xi, 2.0 * a[1].xi);
}

TEST(Matsubara, LadderLinearity) {
    const auto l = matsubara_ladder(FiniteTemperature{287.3}, 50);
    for (int k = 0; k <= 50; ++k) EXPECT_DOUBLE_EQ(l[k].xi, k * l[1].xi);
}

TEST(Matsubara, ZeroTemperatureHasNoLadder) {
    try {
        matsubara_ladder(ZeroTemperature{}, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroTemperature);
    }
}

TEST(Builtin, GoldParameters) {
    const MaterialModel model = builtin("Au");
    const auto& au = std::get<DrudePlusOscillators>(model);
    EXPECT_EQ(au.omega_p, 9.0);
    EXPECT_EQ(au.gamma, 0.035);
    ASSERT_EQ(au.oscillators.size(), 6u);
    EXPECT_EQ(au.oscillators[0].omega, 3.05);
    EXPECT_EQ(au.oscillators[0].f, 7.091);
}

TEST(Builtin, PolystyreneParameters) {
    const MaterialModel model = builtin("polystyrene");
    const auto& ps = std::get<OscillatorsOnly>(model);
    ASSERT_EQ(ps.oscillators.size(), 4u);
    EXPECT_EQ(ps.oscillators[0].omega, 6.35);
    EXPECT_EQ(ps.oscillators[0].f, 14.6);
    EXPECT_EQ(ps.oscillators[0].g, 0.65);
}

TEST(Builtin, Vacuum) {
    const MaterialModel model = builtin("vacuum");
    const auto& v = std::get<Constant>(model);
    EXPECT_EQ(v.eps, 1.0);
    EXPECT_EQ(v.mu, 1.0);
}

TEST(Builtin, UnknownName) {
    try {
        builtin("unobtainium");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnknownMaterial);
    }
}

TEST(MaterialFile, RoundTripIsBitExact) {
    for (const char* m : {"Au", "Si", "PS", "Br", "vacuum", "PEC"}) {
        const MaterialModel a = builtin(m);
        const MaterialModel b = material_from_string(material_to_string(a));
        EXPECT_EQ(material_to_string(a), material_to_string(b)) << m;
        EXPECT_EQ(a.index(), b.index()) << m;
        for (double xi : {0.01, 0.3, 2.0, 17.0})
            EXPECT_EQ(permittivity(a, ImaginaryFrequency::from_xi(xi)), permittivity(b, ImaginaryFrequency::from_xi(xi)))
                << m;
    }
}

TEST(MaterialFile, ParsesOscillatorTables) {
    const char* text = R"(kind = "drude_oscillators"
[drude]
omega_p_eV = 9.0
gamma_eV = 0.035
[[oscillators]]
omega_eV = 3.05
f_eV2 = 7.091
g_eV = 0.75
)";
    const auto m = std::get<DrudePlusOscillators>(material_from_string(text));
    EXPECT_EQ(m.omega_p, 9.0);
    ASSERT_EQ(m.oscillators.size(), 1u);
    EXPECT_EQ(m.oscillators[0].g, 0.75);
}

TEST(MaterialFile, InvalidParametersRejected) {
    EXPECT_THROW(material_from_string("kind = \"debye\"\n[debye]\neps_inf = 2.0\neps_static = 1.5\nomega_uv_eV = 4.0\n"),
                 Error);
    EXPECT_THROW(material_from_string("kind = \"plasma\"\n"), Error);
}

TEST(MediumPair, DrudeBodyBecomesConductorAtZeroFrequency) {
    const MaterialPair p{builtin("Br"), builtin("Au")};
    const MediumResponse m = p.at(ImaginaryFrequency::from_xi(0.0));
    EXPECT_TRUE(m.body_pec());
    EXPECT_NEAR(m.eps0, 5.302, 1e-12);
    EXPECT_FALSE(p.at(ImaginaryFrequency::from_xi(0.1)).body_pec());
}
