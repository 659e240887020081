#include <gtest/gtest.h>

#include "curvecp/cp.hpp"

using namespace curvecp;

namespace {

// Smooth synthetic coefficients, cheap enough for property checks.
class SyntheticBetas final : public BetaSource {
public:
    SyntheticBetas(BetaSet b, double d) : b_(b), d_(d) {}
    BetaSet at(double kb) const override {
        BetaSet s = b_;
        const double e = std::exp(-2.0 * kb) * (1.0 + kb);
        s.beta1_0 *= e;
        s.beta2_0 *= e;
        s.beta1_2 *= e;
        s.beta2_2 *= e;
        s.beta3_2 *= e;
        return s;
    }
    double d_um() const override { return d_; }
    bool has_curvature() const override { return true; }

private:
    BetaSet b_;
    double d_;
};

class StaticOnly final : public BetaSource {
public:
    explicit StaticOnly(BetaSet b) : b_(b) {}
    BetaSet at(double kb) const override { return kb == 0.0 ? b_ : BetaSet{}; }
    double d_um() const override { return 1.0; }
    bool has_curvature() const override { return true; }

private:
    BetaSet b_;
};

BetaSet synthetic_set() {
    BetaSet b;
    b.beta1_0 = 0.06;
    b.beta2_0 = 0.13;
    b.beta1_2 = 0.011;
    b.beta2_2 = -0.02;
    b.beta3_2 = 0.04;
    return b;
}

const MaterialPair gold_vac{builtin("vacuum"), builtin("Au")};
const ParticlePolarizability needle = Ellipsoid{builtin("PS"), 1e-3, 0.1};
const ParticlePolarizability uniaxial = GenericUniaxial::constant(2.0, 1.7);


} // namespace

TEST(Rotation, Examples) {
    auto a = rotate_polarizability(2.0, 1.0, {0.7, 0.2});
    EXPECT_DOUBLE_EQ(a.alpha_perp, 2.0);
    EXPECT_DOUBLE_EQ(a.alpha_zz, 1.0);
    EXPECT_DOUBLE_EQ(a.alpha_xx_minus_yy, 0.0);
    a = rotate_polarizability(4.0, 3.0, orient_x);
    EXPECT_DOUBLE_EQ(a.alpha_perp, 5.0);
    EXPECT_NEAR(a.alpha_zz, 2.0, 1e-15);
    EXPECT_NEAR(a.alpha_xx_minus_yy, 1.0, 1e-15);
    a = rotate_polarizability(4.0, 3.0, orient_y);
    EXPECT_NEAR(a.alpha_xx_minus_yy, -1.0, 1e-15);
    a = rotate_polarizability(4.0, 3.0, orient_z);
    EXPECT_DOUBLE_EQ(a.alpha_perp, 4.0);
    EXPECT_DOUBLE_EQ(a.alpha_zz, 3.0);
}

TEST(Rotation, TraceIsInvariant) {
    for (double t : {0.0, 0.4, 1.2, 2.9})
        for (double p : {0.0, 1.0, 2.5}) {
            const auto a = rotate_polarizability(3.0, 0.4, {t, p});
            EXPECT_NEAR(a.alpha_perp + a.alpha_zz, 3.4, 1e-14);
        }
}

TEST(Ellipsoid, SigmaExamples) {
    EXPECT_NEAR(ellipsoid_sigma(1.0, 5.0, 1.0, 1.0 / 3.0), 0.0, 1e-15);
    EXPECT_EQ(ellipsoid_sigma(2.0, 2.0, 1.0, 0.1), 0.0);
    EXPECT_GT(ellipsoid_sigma(1.0, 5.0, 1.0, 0.1), 0.0);
    EXPECT_LT(ellipsoid_sigma(1.0, 5.0, 1.0, 0.8), 0.0);
    // thin disk: sigma -> -V (eps1 - eps0)^2 / eps1
    EXPECT_NEAR(ellipsoid_sigma(1.3, 4.0, 2.0, 1.0 - 1e-9), -2.0 * 2.7 * 2.7 / 4.0, 1e-7);
}

TEST(Ellipsoid, SigmaMatchesPrincipalValues) {
    for (double nz : {0.05, 0.2, 0.5, 0.9})
        for (double e1 : {1.5, 11.87, pec_sentinel}) {
            const double a = ellipsoid_sigma(1.7, e1, 0.3, nz), b = ellipsoid_response(1.7, e1, 0.3, nz).sigma();
            EXPECT_NEAR(a, b, 1e-12 * std::abs(b)) << nz << " " << e1;
        }
}

TEST(Ellipsoid, InvalidShapeRejected) {
    EXPECT_THROW(ellipsoid_sigma(1.0, 2.0, 1.0, 0.0), Error);
    EXPECT_THROW(ellipsoid_sigma(1.0, 2.0, 1.0, 1.0), Error);
    EXPECT_THROW(ellipsoid_response(1.0, 2.0, -1.0, 0.3), Error);
}

TEST(Potential, ConductorZeroTemperature) {
    const MaterialPair pec{builtin("vacuum"), builtin("PEC")};
    DirectBetas src(pec, 1.0, false);
    const double U = cp_potential({1.0}, src, pec, GenericUniaxial::isotropic(1.0), orient_z, ZeroTemperature{});
    EXPECT_NEAR(U * 8 * pi / (3 * hbar_c), -1.0, 1e-6);
    // scales as d^-4
    DirectBetas far(pec, 2.0, false);
    const double U2 = cp_potential({2.0}, far, pec, GenericUniaxial::isotropic(1.0), orient_z, ZeroTemperature{});
    EXPECT_NEAR(U2 / U, 1.0 / 16, 1e-7);
}

TEST(Potential, ZeroContrastVanishes) {
    const MaterialPair vac{builtin("vacuum"), builtin("vacuum")};
    DirectBetas src(vac, 0.5, true);
    EXPECT_EQ(cp_potential({0.5, 0.1, -0.05}, src, vac, uniaxial, {0.4, 0.3}, FiniteTemperature{300}), 0.0);
}

TEST(Potential, LinearInCurvature) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const Orientation o{0.6, 0.35};
    auto U = [&](double c1, double c2) {
        return cp_potential({0.7, c1, c2}, src, gold_vac, uniaxial, o, FiniteTemperature{300});
    };
    const double u0 = U(0, 0), ua = U(0.05, 0), ub = U(0, -0.08), uab = U(0.05, -0.08);
    EXPECT_NEAR(uab - u0, (ua - u0) + (ub - u0), 1e-12 * std::abs(u0));
    EXPECT_NEAR(U(0.1, 0) - u0, 2 * (ua - u0), 1e-12 * std::abs(u0));
}

TEST(Potential, LinearInPolarizability) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const SurfaceGeometry g{0.7, 0.05, -0.02};
    const double a = cp_potential(g, src, gold_vac, GenericUniaxial::constant(2.0, 1.3), {0.5, 0.2}, FiniteTemperature{300});
    const double b = cp_potential(g, src, gold_vac, GenericUniaxial::constant(4.0, 2.6), {0.5, 0.2}, FiniteTemperature{300});
    EXPECT_NEAR(b, 2 * a, 1e-13 * std::abs(a));
}

TEST(Potential, IsotropicParticleIgnoresOrientation) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const SurfaceGeometry g{0.7, 0.05, -0.02};
    const double a = cp_potential(g, src, gold_vac, GenericUniaxial::isotropic(1.0), {0.0, 0.0}, ZeroTemperature{});
    const double b = cp_potential(g, src, gold_vac, GenericUniaxial::isotropic(1.0), {1.1, 0.7}, ZeroTemperature{});
    EXPECT_NEAR(a, b, 1e-13 * std::abs(a));
}

TEST(Potential, CurvedWithoutCoefficientsRejected) {
    DirectBetas src(gold_vac, 1.0, false);
    EXPECT_THROW(cp_potential({1.0, 0.1, 0.0}, src, gold_vac, uniaxial, orient_z, FiniteTemperature{300}), Error);
}

TEST(Potential, StaticTermHasHalfWeight) {
    const BetaSet b = synthetic_set();
    StaticOnly src(b);
    const double T = 300, d = 1.0;
    const double U = cp_potential({d}, src, gold_vac, GenericUniaxial::constant(2.0, 1.0), orient_z, FiniteTemperature{T});
    EXPECT_NEAR(U, -0.5 * k_boltzmann * T / (d * d * d) * (b.beta1_0 * 2.0 + b.beta2_0 * 1.0), 1e-16);
}

TEST(Orientation, DecompositionConsistent) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const SurfaceGeometry g{0.7, 0.06, -0.03};
    const ThermalState T = FiniteTemperature{300};
    const Orientation a{0.3, 0.2}, b{1.3, 2.0};
    const double full = cp_potential(g, src, gold_vac, needle, a, T) - cp_potential(g, src, gold_vac, needle, b, T);
    const double part = orientation_potential(g, src, gold_vac, needle, a, T) -
                        orientation_potential(g, src, gold_vac, needle, b, T);
    EXPECT_NEAR(full, part, 1e-10 * std::abs(full));
}

TEST(Orientation, NoAnisotropyNoTorque) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const ParticlePolarizability p = GenericUniaxial::constant(2.0, 1.0);
    for (double t : {0.0, 0.8, 1.5})
        EXPECT_EQ(orientation_potential({0.7, 0.1, -0.05}, src, gold_vac, p, {t, 0.3}, ZeroTemperature{}), 0.0);
}

TEST(Orientation, EqualCurvaturesRemoveAzimuth) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const SurfaceGeometry g{0.7, 0.08, 0.08};
    const double a = orientation_potential(g, src, gold_vac, needle, {1.0, 0.0}, ZeroTemperature{});
    const double b = orientation_potential(g, src, gold_vac, needle, {1.0, 1.2}, ZeroTemperature{});
    EXPECT_NEAR(a, b, 1e-14 * std::abs(a));
}

TEST(Orientation, ParityInTheta) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const SurfaceGeometry g{0.7, 0.08, -0.03};
    const auto s = orientation_sums(src, gold_vac, needle, FiniteTemperature{300}, true);
    for (double t : {0.2, 0.9})
        for (double p : {0.0, 0.7}) {
            EXPECT_NEAR(s.energy(g, {t, p}), s.energy(g, {pi - t, p}), 1e-15);
            EXPECT_NEAR(s.energy(g, {t, p}), s.energy(g, {-t, p}), 1e-15);
            EXPECT_NEAR(s.energy(g, {t, p}), s.energy(g, {t, p + pi}), 1e-15);
        }
}

TEST(HighTemperature, MatchesStaticTerm) {
    const double T = 3000, d = 1.3, sigma = 0.7;
    for (auto [e0, e1] : {std::pair{1.0, 3.0}, {2.3, 5.3}, {1.0, pec_sentinel}}) {
        const BetaSet b = beta_set(0.0, {e0, 1, e1, 1});
        const double pref = 0.25 * k_boltzmann * T / (d * d * d) * sigma;
        const OrientationSums h = high_t_sums(e0, e1, sigma, T, d);
        EXPECT_NEAR(h.s0, pref * b.dbeta0(), 1e-8 * std::abs(h.s0)) << e1;
        EXPECT_NEAR(h.s2, pref * b.dbeta2(), 1e-8 * std::abs(h.s0)) << e1;
        EXPECT_NEAR(h.s3, pref * b.beta3_2, 1e-8 * std::abs(h.s0)) << e1;
    }
}

TEST(HighTemperature, ConductorCos2ThetaCoefficient) {
    const double T = 500, d = 2.0, sigma = 1.5;
    const SurfaceGeometry g{d};
    const double c = -k_boltzmann * T * sigma / (32 * d * d * d);
    for (double t : {0.0, 0.4, 1.1})
        EXPECT_NEAR(high_t_orientation(g, 1.0, pec_sentinel, sigma, T, {t, 0.0}), c * std::cos(2 * t), 1e-18);
}

TEST(HighTemperature, MatchesStaticTermOfFullSum) {
    // n = 0 term of the Matsubara sum, computed through the full machinery
    const MaterialPair si{builtin("vacuum"), builtin("Si")};
    const BetaSet b = beta_set(0.0, si.at(ImaginaryFrequency::from_xi(0.0)));
    StaticOnly src(b);
    const ParticlePolarizability p = Ellipsoid{builtin("Si"), 1e-3, 0.2};
    const double sigma = ellipsoid_sigma(1.0, 11.87, 1e-3, 0.2);
    const auto full = orientation_sums(src, si, p, FiniteTemperature{3000}, true);
    const auto h = high_t_sums(1.0, 11.87, sigma, 3000, 1.0);
    EXPECT_NEAR(full.s0, h.s0, 1e-8 * std::abs(h.s0));
    EXPECT_NEAR(full.s2, h.s2, 1e-8 * std::abs(h.s0));
    EXPECT_NEAR(full.s3, h.s3, 1e-8 * std::abs(h.s0));
}

TEST(StableAxis, IsotropicParticleIsDegenerate) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const auto s = stable_axis({0.7, 0.1, -0.05}, src, gold_vac, GenericUniaxial::constant(2.0, 1.0), ZeroTemperature{});
    EXPECT_EQ(s.axis, Axis::Degenerate);
}

TEST(StableAxis, DiskOverDielectricLiesFlat) {
    const double sigma = ellipsoid_sigma(1.0, 11.87, 1e-3, 0.8);
    const auto h = high_t_sums(1.0, 11.87, sigma, 300, 1.0);
    EXPECT_EQ(classify_axis(h, {1.0, 0.05, 0.05}).axis, Axis::TangentialFree);
    EXPECT_EQ(classify_axis(h, {1.0}).axis, Axis::TangentialFree);
    const double sn = ellipsoid_sigma(1.0, 11.87, 1e-3, 0.1);
    EXPECT_EQ(classify_axis(high_t_sums(1.0, 11.87, sn, 300, 1.0), {1.0, 0.05, 0.05}).axis, Axis::Z);
}

TEST(StableAxis, TangentialChoiceFollowsCurvature) {
    const double sigma = ellipsoid_sigma(1.0, 11.87, 1e-3, 0.8);
    const auto h = high_t_sums(1.0, 11.87, sigma, 300, 1.0);
    const Axis a = classify_axis(h, {1.0, 0.1, -0.1}).axis, b = classify_axis(h, {1.0, -0.1, 0.1}).axis;
    EXPECT_TRUE(a == Axis::X || a == Axis::Y);
    EXPECT_TRUE(b == Axis::X || b == Axis::Y);
    EXPECT_NE(a, b);
}

TEST(StableAxis, InvariantUnderOverallScale) {
    SyntheticBetas src(synthetic_set(), 0.7);
    for (auto [c1, c2] : {std::pair{0.0, 0.0}, {0.1, -0.05}, {-0.2, 0.03}}) {
        const SurfaceGeometry g{0.7, c1, c2};
        auto s = orientation_sums(src, gold_vac, needle, FiniteTemperature{300}, true);
        const Axis a = classify_axis(s, g).axis;
        s.s0 *= 10;
        s.s2 *= 10;
        s.s3 *= 10;
        EXPECT_EQ(classify_axis(s, g).axis, a);
        const auto r = classify_axis(s, g);
        EXPECT_LE(std::min({r.U_z, r.U_x, r.U_y}), r.U_z);
    }
}

TEST(StableAxis, EnergiesMatchPotential) {
    SyntheticBetas src(synthetic_set(), 0.7);
    const SurfaceGeometry g{0.7, 0.1, -0.04};
    const auto s = stable_axis(g, src, gold_vac, needle, FiniteTemperature{300});
    EXPECT_NEAR(s.U_x, orientation_potential(g, src, gold_vac, needle, orient_x, FiniteTemperature{300}), 1e-15);
    EXPECT_NEAR(s.U_y - s.U_z,
                cp_potential(g, src, gold_vac, needle, orient_y, FiniteTemperature{300}) -
                    cp_potential(g, src, gold_vac, needle, orient_z, FiniteTemperature{300}),
                1e-10 * std::abs(s.U_z));
}

TEST(SwitchScan, NeedleOverGoldInVacuumNeverSwitches) {
    const ParticlePolarizability au_needle = Ellipsoid{builtin("Au"), 1e-3, 0.1};
    BetaSourceFactory make = [&](double d) -> std::unique_ptr<BetaSource> {
        return std::make_unique<DirectBetas>(gold_vac, d, false);
    };
    const auto sw = switch_scan({0.1, 0.5, 2.0, 10.0}, 0.0, 0.0, make, gold_vac, au_needle, FiniteTemperature{300});
    EXPECT_TRUE(sw.empty());
    EXPECT_EQ(stable_axis({1.0}, *make(1.0), gold_vac, au_needle, FiniteTemperature{300}).axis, Axis::Z);
}

TEST(SwitchScan, RejectsUnorderedGrid) {
    BetaSourceFactory make = [&](double d) -> std::unique_ptr<BetaSource> {
        return std::make_unique<SyntheticBetas>(synthetic_set(), d);
    };
    EXPECT_THROW(switch_scan({1.0, 0.5}, 0.0, 0.0, make, gold_vac, needle, ZeroTemperature{}), Error);
}

TEST(MemoBetas, ForwardsAndCaches) {
    auto inner = std::make_shared<SyntheticBetas>(synthetic_set(), 0.7);
    MemoBetas memo(inner);
    EXPECT_EQ(memo.d_um(), 0.7);
    EXPECT_TRUE(memo.has_curvature());
    EXPECT_EQ(memo.at(0.3).values(), inner->at(0.3).values());
    EXPECT_EQ(memo.at(0.3).values(), inner->at(0.3).values());
}
