#include "ppcov/errors.hpp"
#include "ppcov/estimators.hpp"
#include "ppcov/gmvp.hpp"
#include "ppcov/tuning.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace ppcov;

namespace {

ReturnsMatrix gaussian(std::size_t n, std::size_t p, std::uint64_t seed) {
    return sample_mvn(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p)), CovMatrix::identity(p), n, RngStream{seed, 0});
}

IWParams prior_of(const ReturnsMatrix& d) { return default_prior(d); }

}  // namespace

TEST_CASE("cv_loss_cov") {
    const ReturnsMatrix val = gaussian(10, 3, 71);
    const CovMatrix moment(val.values().transpose() * val.values() / 10.0);
    CHECK(cv_loss_cov(moment, val) <= 1e-14);

    // rows scaled so that val^T val / N = 2 I
    Eigen::MatrixXd v = std::sqrt(2.0) * Eigen::MatrixXd::Identity(3, 3) * std::sqrt(3.0);
    CHECK(cv_loss_cov(CovMatrix::identity(3), ReturnsMatrix(v)) == doctest::Approx(1.0));

    Generator gen(RngStream{72, 0});
    for (int trial = 0; trial < 20; ++trial) {
        const CovMatrix est = ppcov::testing::random_spd(gen, 4);
        const ReturnsMatrix vv(ppcov::testing::random_dense(gen, 7, 4));
        CHECK(cv_loss_cov(est, vv) == doctest::Approx(spectral_norm(est - sample_covariance(vv))).epsilon(1e-14));
    }
    CHECK_THROWS_AS(cv_loss_cov(CovMatrix::identity(2), val), InputError);
}

TEST_CASE("cv_loss_gmvp") {
    Eigen::MatrixXd one(4, 1);
    one << 1, 2, 3, 6;  // sample variance 14/3
    CHECK(cv_loss_gmvp(CovMatrix::identity(1), ReturnsMatrix(one)) == doctest::Approx(14.0 / 3));
    CHECK(cv_loss_gmvp(5.0 * CovMatrix::identity(1), ReturnsMatrix(one)) == doctest::Approx(14.0 / 3));
    CHECK(cv_loss_gmvp(CovMatrix::identity(3), ReturnsMatrix(Eigen::MatrixXd::Constant(4, 3, 0.2))) == 0.0);

    Generator gen(RngStream{73, 0});
    for (int trial = 0; trial < 20; ++trial) {
        const CovMatrix est = ppcov::testing::random_spd(gen, 5);
        const ReturnsMatrix vv(ppcov::testing::random_dense(gen, 9, 5));
        const double sd = realized_portfolio_sd(gmvp_weights(est).values(), vv);
        CHECK(cv_loss_gmvp(est, vv) == doctest::Approx(sd * sd / 1e4).epsilon(1e-12));
    }
}

TEST_CASE("cv_posterior_loss") {
    const ReturnsMatrix val = gaussian(12, 2, 74);
    const CovMatrix d = CovMatrix::identity(2);
    CHECK(cv_posterior_loss(std::vector<CovMatrix>{d}, val, CvObjective::cov_spectral) == cv_loss_cov(d, val));

    // Losses {0, 2}: the validation moment itself, and moment + 2 I.
    const CovMatrix m = sample_covariance(val);
    const std::vector<CovMatrix> pair{m, m + 2.0 * CovMatrix::identity(2)};
    CHECK(cv_posterior_loss(pair, val, CvObjective::cov_spectral) == doctest::Approx(1.0));

    Generator gen(RngStream{75, 0});
    std::vector<CovMatrix> draws;
    for (int k = 0; k < 15; ++k) draws.push_back(ppcov::testing::random_spd(gen, 2));
    for (auto obj : {CvObjective::cov_spectral, CvObjective::gmvp_variance}) {
        double loop = 0.0;
        for (const auto& x : draws) loop += obj == CvObjective::cov_spectral ? cv_loss_cov(x, val) : cv_loss_gmvp(x, val);
        CHECK(cv_posterior_loss(draws, val, obj) == doctest::Approx(loop / 15).epsilon(1e-13));
    }

    // Non-SPD draw under the GMVP objective scores +inf.
    const std::vector<CovMatrix> bad{CovMatrix::zero(2)};
    CHECK(std::isinf(cv_posterior_loss(bad, val, CvObjective::gmvp_variance)));
    CHECK_THROWS_AS(cv_posterior_loss(std::vector<CovMatrix>{}, val, CvObjective::cov_spectral), InputError);
}

TEST_CASE("default gamma grid spans identity to full off-diagonal sparsification") {
    const ReturnsMatrix data = gaussian(200, 6, 76);
    const auto grid = default_gamma_grid(data);
    REQUIRE(grid.size() == 21);
    CHECK(grid.front() == 0.0);
    ThresholdConfig cfg;
    cfg.p = 6;
    cfg.n = 200;
    cfg.gamma = grid.back();
    const CovMatrix t = hard_threshold(sample_covariance(data), cfg);
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            if (i != j) CHECK(t(i, j) == 0.0);
        }
    }
    cfg.gamma = grid[19];
    const CovMatrix before = hard_threshold(sample_covariance(data), cfg);
    CHECK((before.dense() - Eigen::MatrixXd(before.dense().diagonal().asDiagonal())).cwiseAbs().maxCoeff() > 0.0);
    CHECK(default_gamma_grid(gaussian(10, 1, 77)) == std::vector<double>{0.0});
}

TEST_CASE("cv splits are disjoint, cover all rows and are seeded") {
    CvPlan plan;
    plan.seed = 5;
    const auto [train, val] = cv_split_rows(30, plan, 2);
    CHECK(train.size() == 20);
    CHECK(val.size() == 10);
    std::set<std::size_t> all(train.begin(), train.end());
    all.insert(val.begin(), val.end());
    CHECK(all.size() == 30);
    CHECK(cv_split_rows(30, plan, 2) == std::make_pair(train, val));
    CHECK(cv_split_rows(30, plan, 3) != std::make_pair(train, val));
    CHECK_THROWS_AS(cv_split_rows(3, plan, 0), InputError);
}

TEST_CASE("cv_select: single grid point, ties and determinism") {
    const ReturnsMatrix data = gaussian(40, 5, 78);
    CvPlan plan;
    plan.grid_gamma = {0.7};
    plan.seed = 3;
    const CvResult one = cv_select(data, prior_of, plan, 20, CvPath::posterior);
    CHECK(one.best.gamma == 0.7);
    CHECK(one.best.n == 40);
    CHECK(one.splits_used == 5);

    plan.grid_gamma = {0.5, 0.5};
    plan.objective = CvObjective::cov_spectral;
    const CvResult dup = cv_select(data, prior_of, plan, 20, CvPath::point);
    CHECK(dup.score_table[0].mean_loss == dup.score_table[1].mean_loss);
    CHECK(dup.best.gamma == 0.5);

    plan.grid_gamma = {};
    plan.grid_epsilon = {1e-4, 1e-2};
    plan.objective = CvObjective::gmvp_variance;
    const CvResult a = cv_select(data, prior_of, plan, 15, CvPath::posterior);
    const CvResult b = cv_select(data, prior_of, plan, 15, CvPath::posterior, {false, 3});
    REQUIRE(a.score_table.size() == 42);
    for (std::size_t k = 0; k < a.score_table.size(); ++k) {
        CHECK(a.score_table[k].mean_loss == b.score_table[k].mean_loss);
        CHECK(a.score_table[k].mean_loss >= 0.0);
    }
    CHECK(a.best.gamma == b.best.gamma);
    CHECK(a.best.epsilon == b.best.epsilon);
    double best_loss = a.score_table[0].mean_loss;
    for (const auto& s : a.score_table) best_loss = std::min(best_loss, s.mean_loss);
    bool found = false;
    for (const auto& s : a.score_table) {
        if (s.mean_loss == best_loss) {
            CHECK(s.gamma == a.best.gamma);  // first minimizer
            CHECK(s.epsilon == a.best.epsilon);
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("cv_select with grid {0} reproduces the untuned baseline") {
    const ReturnsMatrix data = gaussian(30, 4, 79);
    CvPlan plan;
    plan.grid_gamma = {0.0};
    const CvResult r = cv_select(data, prior_of, plan, 10, CvPath::point);
    CHECK(r.best.gamma == 0.0);
    CHECK(thresholded_sample_cov(data, r.best).matrix == sample_covariance(data));
}

TEST_CASE("cv_select picks gamma > 0 on identity-truth data with noisy off-diagonals") {
    // p = 30, n = 40: sample off-diagonals are pure noise of size ~ 1/sqrt(40).
    int positive_point = 0, positive_posterior = 0;
    for (std::uint64_t run = 0; run < 10; ++run) {
        const ReturnsMatrix data = gaussian(40, 30, 800 + run);
        CvPlan plan;
        plan.seed = 900 + run;
        if (cv_select(data, prior_of, plan, 0, CvPath::point).best.gamma > 0.0) ++positive_point;
        if (cv_select(data, prior_of, plan, 50, CvPath::posterior).best.gamma > 0.0) ++positive_posterior;
    }
    CHECK(positive_point >= 9);
    CHECK(positive_posterior >= 9);
}

TEST_CASE("CvPlan validation") {
    CvPlan plan;
    plan.train_fraction = 1.0;
    CHECK_THROWS_AS(plan.validate(), ParameterError);
    plan.train_fraction = 0.5;
    plan.grid_gamma = {1.0, 0.5};
    CHECK_THROWS_AS(plan.validate(), ParameterError);
    plan.grid_gamma = {0.5};
    plan.grid_epsilon = {};
    CHECK_THROWS_AS(plan.validate(), ParameterError);
    CHECK(parse_objective("gmvp-variance") == CvObjective::gmvp_variance);
    CHECK_THROWS_AS(parse_objective("nope"), InputError);
}
