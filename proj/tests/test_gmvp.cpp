#include "ppcov/errors.hpp"
#include "ppcov/gmvp.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace ppcov;
using ppcov::testing::random_spd;

namespace {

CovMatrix m2(double a, double b, double c) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, b, c;
    return CovMatrix(m);
}

PortfolioWeights pw(std::initializer_list<double> v) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(v.size()));
    Eigen::Index k = 0;
    for (double x : v) w(k++) = x;
    return PortfolioWeights(w);
}

}  // namespace

TEST_CASE("gmvp_weights examples") {
    const auto eq = gmvp_weights(CovMatrix::identity(4));
    for (std::size_t i = 0; i < 4; ++i) CHECK(eq[i] == doctest::Approx(0.25));
    const auto d = gmvp_weights(CovMatrix::diagonal(Eigen::Vector2d(1, 2)));
    CHECK(d[0] == doctest::Approx(2.0 / 3));
    CHECK(d[1] == doctest::Approx(1.0 / 3));
    const auto s = gmvp_weights(m2(2, 1, 2));
    CHECK(s[0] == doctest::Approx(0.5));
    CHECK(s[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(gmvp_weights(m2(1, 1, 1)), NotPositiveDefinite);
}

TEST_CASE("PortfolioWeights requires unit sum") {
    CHECK_THROWS_AS(pw({0.5, 0.6}), InputError);
    CHECK_NOTHROW(pw({1.5, -0.5}));
}

TEST_CASE("gmvp_ensemble maps draws in order and names the failing draw") {
    const std::vector<CovMatrix> draws{CovMatrix::identity(2), CovMatrix::diagonal(Eigen::Vector2d(1, 2))};
    const auto ws = gmvp_ensemble(draws);
    REQUIRE(ws.size() == 2);
    CHECK(ws[0][0] == doctest::Approx(0.5));
    CHECK(ws[1][0] == doctest::Approx(2.0 / 3));
    CHECK(gmvp_ensemble(std::vector<CovMatrix>{CovMatrix::identity(3)}).size() == 1);

    const std::vector<CovMatrix> bad{CovMatrix::identity(2), m2(1, 1, 1)};
    try {
        (void)gmvp_ensemble(bad);
        FAIL("expected failure");
    } catch (const NotPositiveDefinite& e) {
        CHECK(std::string(e.what()).find("ensemble draw 1") != std::string::npos);
    }
}

TEST_CASE("GMVP invariants: scale, permutation, optimality") {
    Generator gen(RngStream{61, 0});
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t p = 2 + gen.uniform_int(0, 15);
        const CovMatrix sigma = random_spd(gen, p);
        const Eigen::VectorXd w = gmvp_weights(sigma).values();
        CHECK(std::abs(w.sum() - 1.0) <= 1e-10);

        const Eigen::VectorXd scaled = gmvp_weights(3.7 * sigma).values();
        CHECK((scaled - w).cwiseAbs().maxCoeff() <= 1e-12);

        std::vector<int> perm(p);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = p - 1; i > 0; --i) std::swap(perm[i], perm[gen.uniform_int(0, i)]);
        Eigen::PermutationMatrix<Eigen::Dynamic> P(static_cast<Eigen::Index>(p));
        for (std::size_t i = 0; i < p; ++i) P.indices()(static_cast<Eigen::Index>(i)) = perm[i];
        const CovMatrix permuted(P * sigma.dense() * P.transpose());
        const Eigen::VectorXd wp = gmvp_weights(permuted).values();
        CHECK((wp - P * w).cwiseAbs().maxCoeff() <= 1e-12);

        const double best = w.dot(sigma.dense() * w);
        for (int c = 0; c < 100; ++c) {
            Eigen::VectorXd v = ppcov::testing::random_dense(gen, static_cast<Eigen::Index>(p), 1);
            v(0) += 1.0 - v.sum();
            CHECK(best <= v.dot(sigma.dense() * v) + 1e-12);
        }
    }
}

TEST_CASE("quantile rule and credible intervals") {
    std::vector<PortfolioWeights> grid;
    for (int k = 0; k <= 100; ++k) {
        const double x = k / 100.0;
        grid.push_back(pw({x, 1.0 - x}));
    }
    const auto s = credible_intervals(grid, 0.95);
    REQUIRE(s.assets.size() == 2);
    CHECK(s.assets[0].lower == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(s.assets[0].upper == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(s.assets[0].mean == doctest::Approx(0.5));

    const std::vector<PortfolioWeights> same(5, pw({0.2, 0.8}));
    const auto t = credible_intervals(same, 0.9);
    CHECK(t.assets[1].lower == 0.8);
    CHECK(t.assets[1].upper == 0.8);
    CHECK(t.assets[1].mean == doctest::Approx(0.8));

    const auto sym = credible_intervals({pw({0.3, 0.7}), pw({0.7, 0.3}), pw({0.5, 0.5})}, 0.5);
    CHECK(sym.assets[0].mean == doctest::Approx(0.5));

    CHECK_THROWS_AS(credible_intervals({}, 0.95), InputError);
    CHECK_THROWS_AS(credible_intervals(grid, 1.0), ParameterError);
    CHECK(quantile_type7({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
}

TEST_CASE("coverage") {
    IntervalSummary wide{0.95, std::vector<AssetInterval>(4, AssetInterval{0.5, 0.0, 1.0})};
    CHECK(coverage(wide, pw({0.1, 0.2, 0.3, 0.4})) == 100.0);

    IntervalSummary edges{0.95, {{0.5, 0.25, 0.5}, {0.5, 0.5, 0.75}}};
    CHECK(coverage(edges, pw({0.5, 0.5})) == 100.0);

    IntervalSummary half{0.95, {{0, 0, 0.1}, {0, 0, 0.1}, {0, 0.9, 1}, {0, 0.9, 1}}};
    CHECK(coverage(half, pw({0.05, 0.5, 0.95, -0.5})) == 50.0);

    // Joint permutation leaves coverage unchanged.
    IntervalSummary swapped{0.95, {half.assets[2], half.assets[0], half.assets[3], half.assets[1]}};
    CHECK(coverage(swapped, pw({0.95, 0.05, -0.5, 0.5})) == 50.0);

    CHECK_THROWS_AS(coverage(edges, pw({0.2, 0.3, 0.5})), InputError);
}

TEST_CASE("relative errors") {
    CHECK(relative_cov_error(CovMatrix::identity(3), CovMatrix::identity(3)) == 0.0);
    CHECK(relative_cov_error(CovMatrix::identity(3), 2.0 * CovMatrix::identity(3)) == doctest::Approx(1.0));
    CHECK(relative_cov_error(CovMatrix::diagonal(Eigen::Vector2d(1, 2)), CovMatrix::identity(2)) ==
          doctest::Approx(0.5));
    CHECK_THROWS_AS(relative_cov_error(CovMatrix::zero(2), CovMatrix::identity(2)), InputError);

    CHECK(relative_gmvp_error(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.5, 0.5)) == 0.0);
    CHECK(relative_gmvp_error(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(relative_gmvp_error(Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("realized_portfolio_sd") {
    CHECK(realized_portfolio_sd(Eigen::Vector2d(0.5, 0.5), ReturnsMatrix(Eigen::MatrixXd::Constant(5, 2, 0.3))) == 0.0);

    Eigen::MatrixXd two(2, 2);
    two << 1, 7, -1, 9;
    const ReturnsMatrix t(two);
    CHECK(realized_portfolio_sd(Eigen::Vector2d(1, 0), t) == doctest::Approx(100.0 * std::sqrt(2.0)));
    CHECK(realized_portfolio_sd(Eigen::Vector2d(1, 0), ReturnsMatrix(2.0 * two)) ==
          doctest::Approx(2.0 * 100.0 * std::sqrt(2.0)));

    CHECK_THROWS_AS(realized_portfolio_sd(Eigen::Vector2d(1, 0), ReturnsMatrix(Eigen::MatrixXd::Ones(1, 2))),
                    InputError);
}
