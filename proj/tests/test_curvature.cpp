#include <gtest/gtest.h>

#include "curvecp/curvature.hpp"

using namespace curvecp;

namespace {

const MediumResponse dielectric3{1, 1, 3, 1};
const MediumResponse general{2.3, 1.2, 5.3, 1.7};

double image_beta1(double kb) { return std::exp(-2 * kb) * (0.125 + kb / 4 + kb * kb / 2); }
double image_beta2(double kb) { return std::exp(-2 * kb) * (0.25 + kb / 2); }

} // namespace

TEST(Beta0, ClosedFormMatchesScatteringRoute) {
    for (const MediumResponse& m : {dielectric3, general, MediumResponse::pec(2.3), MediumResponse{1, 1, 84.9, 1}})
        for (double kb : {0.0, 0.05, 0.5, 2.0, 7.0}) {
            const Beta0 a = beta0(kb, m), b = beta0_scattering(kb, m);
            const double s = std::max(std::abs(a.beta1), std::abs(a.beta2));
            EXPECT_NEAR(a.beta1, b.beta1, 1e-8 * s) << kb;
            EXPECT_NEAR(a.beta2, b.beta2, 1e-8 * s) << kb;
        }
}

TEST(Beta0, ElectrostaticImage) {
    for (auto [e0, e1] : {std::pair{1.0, 3.0}, {2.3, 5.3}, {4.0, 1.5}}) {
        const double r = (e1 - e0) / (e1 + e0);
        const Beta0 b = beta0(0.0, {e0, 1, e1, 1});
        EXPECT_NEAR(b.beta1, r / (8 * e0), 1e-12);
        EXPECT_NEAR(b.beta2, 2 * b.beta1, 1e-12);
    }
}

TEST(Beta0, ConductorImageDipole) {
    for (double kb : {0.0, 0.1, 0.7, 2.0, 6.0}) {
        const Beta0 b = beta0(kb, MediumResponse::pec());
        EXPECT_NEAR(b.beta1, image_beta1(kb), 1e-10) << kb;
        EXPECT_NEAR(b.beta2, image_beta2(kb), 1e-10) << kb;
    }
}

TEST(Beta0, RejectsNegativeFrequency) {
    EXPECT_THROW(beta0(-0.1, dielectric3), Error);
    EXPECT_THROW(beta2(-0.1, dielectric3), Error);
}

TEST(StaticCurvature, ConductorValues) {
    const BetaSet b = beta_set(0.0, MediumResponse::pec());
    EXPECT_NEAR(b.dbeta0(), 1.0 / 8, 1e-9);
    EXPECT_NEAR(b.dbeta2(), -1.0 / 32, 1e-9);
    EXPECT_NEAR(b.beta3_2, 3.0 / 32, 1e-9);
}

TEST(StaticCurvature, DielectricValues) {
    const BetaSet b = beta_set(0.0, dielectric3);
    EXPECT_NEAR(8 * b.dbeta0(), 0.5, 1e-8);
    EXPECT_NEAR(8 * b.dbeta2(), -1.0 / 16, 1e-8);
    EXPECT_NEAR(8 * b.beta3_2, 5.0 / 16, 1e-8);
}

TEST(Beta2, FrozenDielectricValues) {
    // independent high-precision evaluation, frozen
    const Beta2 b = beta2(0.5, dielectric3);
    EXPECT_NEAR(b.beta1, 0.0375697675, 1e-9);
    EXPECT_NEAR(b.beta2, 0.0427698769, 1e-9);
    EXPECT_NEAR(b.beta3, 0.0154980188, 1e-9);
}

TEST(Beta2, AnalyticMatchesFiniteDifferenceOracle) {
    for (const MediumResponse& m : {dielectric3, general, MediumResponse::pec()})
        for (double kb : {0.1, 1.0, 4.0}) {
            const Beta2 a = beta2(kb, m), b = beta2_oracle(kb, m);
            const double s = std::max({std::abs(a.beta1), std::abs(a.beta2), std::abs(a.beta3)});
            EXPECT_NEAR(a.beta1, b.beta1, 1e-6 * s) << kb;
            EXPECT_NEAR(a.beta2, b.beta2, 1e-6 * s) << kb;
            EXPECT_NEAR(a.beta3, b.beta3, 1e-6 * s) << kb;
        }
}

TEST(Beta2, ImaginaryPartNegligible) {
    const Beta2 b = beta2(1.3, general);
    EXPECT_LT(b.imag, 1e-10);
}

TEST(BetaSet, ZeroContrastVanishes) {
    for (const MediumResponse& m : {MediumResponse{1, 1, 1, 1}, MediumResponse{2.3, 1.5, 2.3, 1.5}})
        for (double kb : {0.0, 0.3, 3.0})
            for (double v : beta_set(kb, m).values()) EXPECT_EQ(v, 0.0);
}

TEST(BetaSet, DecaysAtLargeFrequency) {
    for (const MediumResponse& m : {dielectric3, general, MediumResponse::pec()})
        for (double kb : {1.0, 2.0, 4.0}) {
            const auto a = beta_set(kb, m).values(), b = beta_set(2 * kb, m).values();
            for (int i = 0; i < 5; ++i) EXPECT_LT(std::abs(b[i]), std::abs(a[i])) << kb << " " << i;
        }
}

TEST(Gamma1, FlatPatchGivesZero) {
    const Mat3 g = gamma1_assemble(0.8, dielectric3, {0.0, 0.0, 0.0});
    EXPECT_EQ(mat3_norm(g), 0.0);
}

TEST(Gamma1, SphericalPatchIsTransverselyIsotropic) {
    const Mat3 g = gamma1_assemble(0.8, general, SurfacePatchExpansion::principal(0.1, 0.1));
    const double n = mat3_norm(g);
    EXPECT_NEAR(g[0][0], g[1][1], 1e-10 * n);
    EXPECT_NEAR(g[0][1], 0.0, 1e-10 * n);
    EXPECT_NEAR(g[1][0], 0.0, 1e-10 * n);
}

TEST(Gamma1, LinearInPatch) {
    const auto a = gamma1_assemble(0.6, dielectric3, {0.1, -0.05, 0.02});
    const auto b = gamma1_assemble(0.6, dielectric3, {0.2, -0.1, 0.04});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(b[i][j], 2 * a[i][j], 1e-12 * mat3_norm(b));
}

TEST(Gamma1, CovariantUnderRotation) {
    const double c1 = 0.12, c2 = -0.04, t = pi / 6, c = std::cos(t), s = std::sin(t);
    const Mat3 g0 = gamma1_assemble(0.9, general, SurfacePatchExpansion::principal(c1, c2));
    const SurfacePatchExpansion rotated{c1 * c * c + c2 * s * s, c1 * s * s + c2 * c * c, (c1 - c2) * s * c};
    const Mat3 g = gamma1_assemble(0.9, general, rotated);
    const double R[3][3] = {{c, -s, 0}, {s, c, 0}, {0, 0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double v = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) v += R[i][a] * g0[a][b] * R[j][b];
            EXPECT_NEAR(g[i][j], v, 1e-9 * mat3_norm(g0)) << i << j;
        }
}

TEST(Gamma1, PrincipalPatchRecoversBetas) {
    const Beta2 b = beta2(0.9, general);
    const Mat3 g1 = gamma1_assemble(0.9, general, {1.0, 0.0, 0.0});
    const Mat3 g2 = gamma1_assemble(0.9, general, {0.0, 1.0, 0.0});
    EXPECT_NEAR(g1[2][2] + g2[2][2], 2 * b.beta2, 1e-10);
    EXPECT_NEAR(g1[0][0] - g1[1][1], b.beta3, 1e-10);
}
