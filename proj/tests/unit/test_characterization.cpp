#include "bcinv/characterization.hpp"
#include "bcinv/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace bcinv;
using namespace bcinv::testing;

namespace {

ResponseFunction response_for(int m, Matrix (*v)(double), int n = 2) {
    return forward_response(sample_potential(SpaceTimeGrid(n, 1.0, m), v));
}

}  // namespace

TEST(Sweep, ZeroResponsePasses) {
    const auto report = sigma_min_sweep(ResponseFunction::zeros(SpaceTimeGrid(2, 1.0, 12)));
    EXPECT_TRUE(report.pass);
    EXPECT_EQ(report.records.size(), 12u);
    for (const auto& rec : report.records) {
        EXPECT_NEAR(rec.sigma_min, 1.0, 1e-15);
        EXPECT_EQ(rec.kernel_norm, 0.0);
    }
    EXPECT_FALSE(report.first_failure());
}

TEST(Sweep, ForwardResponsesPass) {
    for (auto v : {nonsymmetric, nilpotent, symmetric}) {
        const auto report = sigma_min_sweep(response_for(40, v));
        EXPECT_TRUE(report.pass);
        EXPECT_GT(report.weakest().sigma_min, 0.1);
    }
    EXPECT_TRUE(sigma_min_sweep(response_for(40, scalar_cos, 1)).pass);
}

TEST(Sweep, StrideGivesSubReportAndRunsAreBitIdentical) {
    const auto r = response_for(24, nonsymmetric);
    const auto full = sigma_min_sweep(r);
    const auto again = sigma_min_sweep(r);
    const auto coarse = sigma_min_sweep(r, 3);
    ASSERT_EQ(coarse.records.size(), 8u);
    auto same = [](const SweepRecord& a, const SweepRecord& b) {
        return a.xi_steps == b.xi_steps && a.xi == b.xi && a.sigma_min == b.sigma_min && a.sigma_max == b.sigma_max &&
               a.rcond == b.rcond && a.kernel_norm == b.kernel_norm && a.pass == b.pass;
    };
    for (std::size_t i = 0; i < full.records.size(); ++i) EXPECT_TRUE(same(full.records[i], again.records[i]));
    for (std::size_t c = 0; c < coarse.records.size(); ++c) EXPECT_TRUE(same(coarse.records[c], full.records[3 * c + 2]));
    EXPECT_THROW(sigma_min_sweep(r, 5), InvalidInput);
}

TEST(Sweep, MinimumSigmaIsMeshIndependent) {
    const double a = sigma_min_sweep(response_for(30, nonsymmetric)).weakest().sigma_min;
    const double b = sigma_min_sweep(response_for(60, nonsymmetric)).weakest().sigma_min;
    EXPECT_NEAR(a / b, 1.0, 0.1);
}

TEST(Factorization, ZeroResponseIsExact) {
    const auto f = check_factorization(ResponseFunction::zeros(SpaceTimeGrid(2, 1.0, 10)));
    EXPECT_EQ(f.relative_residual, 0.0);
    EXPECT_EQ(f.triangularity, 0.0);
    EXPECT_EQ(f.triangularity_dual, 0.0);
}

TEST(Factorization, SecondOrderResidualAndStructuralTriangularity) {
    const auto f1 = check_factorization(response_for(25, nonsymmetric));
    const auto f2 = check_factorization(response_for(50, nonsymmetric));
    EXPECT_LE(f1.relative_residual, 1e-2);
    EXPECT_GE(f1.relative_residual / f2.relative_residual, 3.5);
    for (const auto& f : {f1, f2}) {
        EXPECT_LE(f.triangularity, 1e-10);
        EXPECT_LE(f.triangularity_dual, 1e-10);
    }
}

TEST(Intertwining, ZeroResponseIsExact) {
    const auto it = check_intertwining(ResponseFunction::zeros(SpaceTimeGrid(2, 1.0, 10)), 5);
    EXPECT_EQ(it.relative_residual, 0.0);
    EXPECT_EQ(it.dual_relative_residual, 0.0);
}

TEST(Intertwining, SmoothResponse) {
    const auto a = check_intertwining(response_for(40, nonsymmetric), 20);
    const auto b = check_intertwining(response_for(80, nonsymmetric), 40);
    EXPECT_TRUE(refines(a.relative_residual, b.relative_residual, 1e-3));
    EXPECT_TRUE(refines(a.dual_relative_residual, b.dual_relative_residual, 1e-3));
}

TEST(ProjectorIdentities, CompressedFormIsExact) {
    const auto p = check_projector_identities(response_for(30, nonsymmetric), 10, 20);
    EXPECT_LE(p.idempotency, 1e-12);
    EXPECT_LE(p.intertwining, 1e-12);
    EXPECT_LE(p.nesting, 1e-12);
    EXPECT_LE(p.range_defect, 1e-12);
    const auto s = check_projector_identities(response_for(30, nonsymmetric), 10, 20, ProjectorForm::shortened);
    EXPECT_GT(s.idempotency, 1e-6);
    EXPECT_GT(s.range_defect, 1e-6);
    EXPECT_THROW(check_projector_identities(response_for(30, nonsymmetric), 20, 10), InvalidInput);
}

TEST(Duality, SymmetricConstantPotentialIsRoundoff) {
    const SpaceTimeGrid g(2, 1.0, 100);
    Matrix s(2, 2);
    s << 1.0, 0.4, 0.4, -0.5;
    EXPECT_LE(check_duality(MatrixFunction1D(g, std::vector<Matrix>(101, s))).residual, 1e-11);
}

TEST(Duality, NilpotentPotentialIsExact) {
    // V^2 = 0 makes every discrete response a multiple of V, so r_b = r^T holds exactly.
    for (int m : {50, 100}) EXPECT_EQ(check_duality(sample_potential(SpaceTimeGrid(2, 1.0, m), nilpotent)).residual, 0.0);
}

TEST(SymmetricPd, ZeroAndSymmetricPotential) {
    const auto z = check_symmetric_pd(ResponseFunction::zeros(SpaceTimeGrid(2, 1.0, 10)));
    EXPECT_NEAR(z.min_eigenvalue, 1.0, 1e-14);
    EXPECT_GT(check_symmetric_pd(response_for(40, symmetric)).min_eigenvalue, 0.0);
}

TEST(Scan, FindsShortenedFailureWhileFullPasses) {
    const SpaceTimeGrid g(1, 1.0, 50);
    const auto found = scan_cosine_family(g);
    ASSERT_TRUE(found.found);
    EXPECT_LT(found.xi_steps, 50);
    EXPECT_LE(found.sigma_ratio, default_sigma_threshold);
    EXPECT_GT(found.sigma_ratio_full, default_sigma_threshold);
    const auto report = sigma_min_sweep(cosine_response(g, found.amplitude, 3.0));
    EXPECT_FALSE(report.pass);
    EXPECT_TRUE(report.records.back().pass);
    EXPECT_FALSE(report.records[found.xi_steps - 1].pass);
}
