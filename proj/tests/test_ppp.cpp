#include "ppcov/errors.hpp"
#include "ppcov/ppp.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace ppcov;
using ppcov::testing::mean_se;
using ppcov::testing::random_spd;
using ppcov::testing::random_symmetric;

namespace {

// Config whose cutoff is exactly `cut`: p = e^1 is not an integer, so pick
// p = 2 and solve gamma * sqrt(log 2 / n) = cut with n = 1.
ThresholdConfig with_cutoff(double cut, std::size_t p, double eps = kDefaultEpsilon) {
    ThresholdConfig cfg;
    cfg.p = p;
    cfg.n = 1;
    cfg.gamma = cut / std::sqrt(std::log(static_cast<double>(p)));
    cfg.epsilon = eps;
    return cfg;
}

CovMatrix m2(double a, double b, double c) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, b, c;
    return CovMatrix(m);
}

// Independent two-step oracle: elementwise loop, then shift from a full eigendecomposition.
Eigen::MatrixXd brute_force_post_process(const Eigen::MatrixXd& m, double cut, double eps) {
    Eigen::MatrixXd t = m;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            if (std::abs(t(i, j)) < cut) t(i, j) = 0.0;
        }
    }
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(t).eigenvalues()(0);
    if (lmin < eps) t.diagonal().array() += eps - lmin;
    return t;
}

}  // namespace

TEST_CASE("ThresholdConfig cutoff and validation") {
    ThresholdConfig cfg;
    cfg.gamma = 2.0;
    cfg.n = 100;
    cfg.p = 100;
    CHECK(cfg.cutoff() == doctest::Approx(2.0 * std::sqrt(std::log(100.0) / 100.0)));
    cfg.p = 1;
    CHECK(cfg.cutoff() == 0.0);
    cfg.gamma = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.gamma = 1.0;
    cfg.epsilon = -1e-3;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.epsilon = 0.0;
    cfg.n = 0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("hard_threshold examples") {
    const auto cfg = with_cutoff(0.2, 2);
    REQUIRE(cfg.cutoff() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(hard_threshold(m2(1, 0.1, 1), cfg) == CovMatrix::identity(2));

    ThresholdConfig zero;
    zero.p = 2;
    zero.gamma = 0.0;
    const CovMatrix m = m2(1e-300, -1e-12, 3);
    CHECK(hard_threshold(m, zero) == m);

    // Boundary is kept: |0.2| >= 0.2. Build a cutoff that is exactly the entry.
    ThresholdConfig exact;
    exact.p = 2;
    exact.n = 1;
    exact.gamma = 1.0;
    const double cut = exact.cutoff();
    CHECK(hard_threshold(m2(1, cut, 1), exact) == m2(1, cut, 1));
    CHECK(hard_threshold(m2(1, std::nextafter(cut, 0.0), 1), exact) == CovMatrix::identity(2));

    CHECK_THROWS_AS(hard_threshold(CovMatrix::identity(3), cfg), InputError);
}

TEST_CASE("hard_threshold zeroes small diagonals unless preserve_diagonal is set") {
    auto cfg = with_cutoff(0.5, 2);
    const CovMatrix m = CovMatrix::diagonal(Eigen::Vector2d(0.3, 2.0));
    CHECK(hard_threshold(m, cfg)(0, 0) == 0.0);
    cfg.preserve_diagonal = true;
    CHECK(hard_threshold(m, cfg)(0, 0) == 0.3);
}

TEST_CASE("pd_adjust examples") {
    ThresholdConfig cfg;
    cfg.p = 2;
    cfg.epsilon = 0.1;
    const CovMatrix adjusted = pd_adjust(CovMatrix::diagonal(Eigen::Vector2d(1, -0.5)), cfg);
    CHECK(adjusted(0, 0) == doctest::Approx(1.6).epsilon(1e-14));
    CHECK(adjusted(1, 1) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(adjusted(0, 1) == 0.0);

    cfg.p = 3;
    CHECK(pd_adjust(CovMatrix::identity(3), cfg) == CovMatrix::identity(3));

    cfg.p = 2;
    cfg.epsilon = 0.0;
    const CovMatrix psd = CovMatrix::diagonal(Eigen::Vector2d(1.0, 0.0));
    CHECK(pd_adjust(psd, cfg) == psd);
}

TEST_CASE("post_process examples") {
    Generator gen(RngStream{41, 0});
    const CovMatrix spd = random_spd(gen, 4);
    ThresholdConfig identity_cfg;
    identity_cfg.p = 4;
    identity_cfg.gamma = 0.0;
    identity_cfg.epsilon = 0.0;
    CHECK(post_process(spd, identity_cfg) == spd);

    const auto big = with_cutoff(1e6, 4, 0.05);
    const CovMatrix all_zero = post_process(spd, big);
    CHECK((all_zero.dense() - 0.05 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

    for (int trial = 0; trial < 20; ++trial) {
        const CovMatrix m = random_spd(gen, 5);
        const auto cfg = with_cutoff(0.3, 5, 1e-4);
        const Eigen::MatrixXd oracle = brute_force_post_process(m.dense(), cfg.cutoff(), 1e-4);
        CHECK((post_process(m, cfg).dense() - oracle).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("post-processing invariants on random symmetric matrices") {
    Generator gen(RngStream{42, 0});
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t p = 2 + gen.uniform_int(0, 10);
        const CovMatrix m = random_symmetric(gen, p);
        const double g1 = std::abs(gen.normal());
        const double g2 = g1 + std::abs(gen.normal());
        ThresholdConfig a;
        a.p = p;
        a.n = 10;
        a.gamma = g1;
        a.epsilon = 0.01 * std::abs(gen.normal());
        ThresholdConfig b = a;
        b.gamma = g2;

        const CovMatrix t1 = hard_threshold(m, a);
        CHECK(hard_threshold(t1, a) == t1);
        const CovMatrix t2 = hard_threshold(m, b);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                if (t1(i, j) == 0.0) CHECK(t2(i, j) == 0.0);
            }
        }
        const CovMatrix out = post_process(m, a);
        CHECK(out.dense() == out.dense().transpose());
        CHECK(out.dense().allFinite());
        CHECK(sym_eigen_extremes(out).min_eig >= a.epsilon - 1e-10);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                if (i != j) CHECK((out(i, j) == 0.0 || out(i, j) == m(i, j)));
            }
        }
    }
}

TEST_CASE("ensemble generation") {
    Generator gen(RngStream{43, 0});
    Eigen::MatrixXd x(30, 3);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) x(i, j) = gen.normal();
    }
    const ReturnsMatrix data(x);
    const IWParams prior = default_prior(data);
    ThresholdConfig cfg;
    cfg.p = 3;
    cfg.n = 30;
    cfg.gamma = 0.5;

    const auto a = generate_ppp_ensemble(prior, data, cfg, 1, 7);
    const auto b = generate_ppp_ensemble(prior, data, cfg, 1, 7);
    CHECK(a.draws().front() == b.draws().front());
    CHECK(a.seed() == 7);
    CHECK(a.post_processed());

    ThresholdConfig raw_cfg = cfg;
    raw_cfg.gamma = 0.0;
    raw_cfg.epsilon = 0.0;
    const auto iw = generate_ppp_ensemble(prior, data, raw_cfg, 20, 9);
    const auto raw = draw_posterior(posterior_params(prior, data), 20, 9);
    for (std::size_t k = 0; k < raw.size(); ++k) CHECK(iw.draws()[k] == raw[k]);

    const auto par = generate_ppp_ensemble(prior, data, cfg, 20, 9, false, 3);
    const auto ser = generate_ppp_ensemble(prior, data, cfg, 20, 9, false, 1);
    for (std::size_t k = 0; k < 20; ++k) CHECK(par.draws()[k] == ser.draws()[k]);

    CHECK_THROWS_AS(generate_ppp_ensemble(prior, data, cfg, 0, 7), InputError);
}

TEST_CASE("full-size ensemble: 2000 draws at p = 100 all respect the floor") {
    const ReturnsMatrix data = sample_mvn(Eigen::VectorXd::Zero(100), CovMatrix::identity(100), 500, RngStream{44, 0});
    ThresholdConfig cfg;
    cfg.p = 100;
    cfg.n = 500;
    cfg.gamma = 1.0;
    const auto e = generate_ppp_ensemble(default_prior(data), data, cfg, 2000, 45);
    CHECK(e.size() == 2000);
    bool ok = true;
    for (const auto& d : e.draws()) ok &= sym_eigen_extremes(d).min_eig >= cfg.epsilon - 1e-10;
    CHECK(ok);
}

TEST_CASE("ensemble_mean") {
    const std::vector<CovMatrix> two{CovMatrix::identity(2), 3.0 * CovMatrix::identity(2)};
    CHECK(ensemble_mean(two) == 2.0 * CovMatrix::identity(2));
    const CovMatrix one = m2(1, 0.3, 2);
    CHECK(ensemble_mean(std::vector<CovMatrix>{one}) == one);
    CHECK_THROWS_AS(ensemble_mean(std::vector<CovMatrix>{}), InputError);

    // gamma = 0 ensemble from IW(I, 8): mean I/2.
    const IWParams post(CovMatrix::identity(2), 8.0);
    ThresholdConfig cfg;
    cfg.p = 2;
    cfg.gamma = 0.0;
    cfg.epsilon = 0.0;
    const PosteriorEnsemble e(draw_posterior(post, 10000, 46), cfg, post, 46, false);
    const CovMatrix mean = ensemble_mean(e);
    std::vector<double> d00, d01;
    for (const auto& d : e.draws()) {
        d00.push_back(d(0, 0));
        d01.push_back(d(0, 1));
    }
    CHECK(std::abs(mean(0, 0) - 0.5) < 3 * mean_se(d00).se);
    CHECK(std::abs(mean(0, 1)) < 3 * mean_se(d01).se);
}

TEST_CASE("ensemble CSV and metadata round-trip") {
    const auto dir = std::filesystem::temp_directory_path() / "ppcov_ensemble_io";
    std::filesystem::create_directories(dir);
    const IWParams prior(CovMatrix::identity(4), 10.0);
    ThresholdConfig cfg;
    cfg.p = 4;
    cfg.n = 12;
    cfg.gamma = 0.7;
    std::vector<CovMatrix> draws;
    for (const auto& d : draw_posterior(prior, 5, 3)) draws.push_back(post_process(d, cfg));
    const PosteriorEnsemble e(draws, cfg, prior, 3, true);
    write_ensemble_csv(dir / "ensemble.csv", e.draws());
    write_ensemble_metadata(dir / "ensemble.json", e);

    const PosteriorEnsemble back = read_ensemble(dir / "ensemble.csv", dir / "ensemble.json");
    REQUIRE(back.size() == e.size());
    for (std::size_t k = 0; k < e.size(); ++k) {
        CHECK((back.draws()[k].dense() - e.draws()[k].dense()).cwiseAbs().maxCoeff() <= 1e-15);
    }
    CHECK(back.seed() == 3);
    CHECK(back.config().gamma == 0.7);
    CHECK(back.prior().nu() == 10.0);
    std::filesystem::remove_all(dir);
}
