#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "recmarket/analysis.hpp"
#include "recmarket/metrics.hpp"
#include "support/fixtures.hpp"

using namespace recmarket;

namespace {

// Independent consistency oracle: twice the trapezoid area between the
// Lorenz curve and the diagonal.
double gini_from_lorenz(const std::vector<LorenzPoint>& pts) {
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double dx = pts[i].population_fraction - pts[i - 1].population_fraction;
        double gap_l = pts[i - 1].population_fraction - pts[i - 1].value_fraction;
        double gap_r = pts[i].population_fraction - pts[i].value_fraction;
        area += dx * 0.5 * (gap_l + gap_r);
    }
    return 2.0 * area;
}

}  // namespace

TEST_CASE("lorenz curve of a uniform vector lies on the diagonal") {
    auto pts = lorenz_curve(std::vector<double>(8, 3.0));
    for (const auto& p : pts)
        CHECK(p.value_fraction == doctest::Approx(p.population_fraction).epsilon(1e-12));
}

TEST_CASE("lorenz curve of a one-hot vector") {
    auto pts = lorenz_curve({0.0, 0.0, 1.0, 0.0});
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].population_fraction == 0.0);
    CHECK(pts[0].value_fraction == 0.0);
    CHECK(pts[1].value_fraction == 0.0);
    CHECK(pts[2].value_fraction == 0.0);
    CHECK(pts[3].value_fraction == 0.0);
    CHECK(pts[4].population_fraction == 1.0);
    CHECK(pts[4].value_fraction == 1.0);
}

// Hand cumulative sums for (1,3): sorted ascending, point 1 = (0.5, 0.25),
// point 2 = (1, 1).
TEST_CASE("lorenz curve hand example") {
    auto pts = lorenz_curve({1.0, 3.0});
    REQUIRE(pts.size() == 3);
    CHECK(pts[1].population_fraction == doctest::Approx(0.5));
    CHECK(pts[1].value_fraction == doctest::Approx(0.25));
    CHECK(pts[2].value_fraction == doctest::Approx(1.0));
}

TEST_CASE("gini closed cases") {
    CHECK(gini(std::vector<double>(10, 2.5)) == 0.0);
    // (0,1): formula gives (2*2-3)*1 / (2*1) = 0.5
    CHECK(gini({0.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
    // one-hot n=10: (n-1)/n
    std::vector<double> onehot(10, 0.0);
    onehot[4] = 1.0;
    CHECK(gini(onehot) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(gini(onehot) == (10.0 - 1.0) / 10.0);
}

TEST_CASE("gini errors") {
    CHECK_THROWS_AS(gini({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(lorenz_curve({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(gini({}), std::invalid_argument);
    CHECK_THROWS_AS(gini({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("gini equals twice the lorenz area on random vectors") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> size(2, 60);
        std::vector<double> v(size(rng));
        for (auto& x : v) x = unit(rng) < 0.1 ? 0.0 : unit(rng);
        if (std::accumulate(v.begin(), v.end(), 0.0) == 0.0) v[0] = 0.5;
        CHECK(std::abs(gini(v) - gini_from_lorenz(lorenz_curve(v))) <= 1e-9);
    }
}

TEST_CASE("gini is invariant under scaling and permutation") {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> v(25);
    for (auto& x : v) x = unit(rng);
    double g = gini(v);
    std::vector<double> scaled = v;
    for (auto& x : scaled) x *= 17.5;
    CHECK(gini(scaled) == doctest::Approx(g).epsilon(1e-12));
    std::shuffle(v.begin(), v.end(), rng);
    CHECK(gini(v) == doctest::Approx(g).epsilon(1e-12));
}

TEST_CASE("top_share of the report") {
    auto rep = inequality_report({1.0, 1.0, 2.0, 4.0});
    CHECK(rep.top_share(0.25) == doctest::Approx(0.5));
    CHECK(rep.top_share(1.0) == doctest::Approx(1.0));
    CHECK(rep.gini == doctest::Approx(gini({1.0, 1.0, 2.0, 4.0})));
}

TEST_CASE("rank comparison identity when gamma tracks outdegree") {
    std::vector<std::uint64_t> outdeg = {50, 40, 30, 20, 10};
    std::vector<double> gamma = {0.5, 0.4, 0.3, 0.2, 0.1};  // proportional
    RankComparison rc = rank_comparison(gamma, outdeg, 5);
    for (std::uint32_t i = 0; i < 5; ++i) {
        CHECK(rc.top_by_gamma[i].user == i);
        CHECK(rc.top_by_gamma[i].rank_in_other == i + 1);
        CHECK(rc.top_by_outdegree[i].user == i);
        CHECK(rc.top_by_outdegree[i].rank_in_other == i + 1);
    }
}

TEST_CASE("rank comparison on the star") {
    MarketModel model = build_basic_scenario(
        fixtures::star_out(5), 0.2, std::vector<double>(5 * 2, 0.5),
        std::vector<std::vector<ProductId>>(5, {0}));
    InfluenceVector iv = compute_influence(model, 1e-10);
    std::vector<std::uint64_t> outdeg(5);
    for (NodeId u = 0; u < 5; ++u) outdeg[u] = model.graph.outdegree(u);
    RankComparison rc = rank_comparison(iv.gamma, outdeg, 3);
    CHECK(rc.top_by_gamma[0].user == 0);
    CHECK(rc.top_by_outdegree[0].user == 0);
    CHECK(rc.top_by_gamma[0].rank_in_other == 1);
    CHECK(rc.top_by_outdegree[0].rank_in_other == 1);
}

TEST_CASE("rank comparison full tables are bijections") {
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> gamma(12);
    std::vector<std::uint64_t> outdeg(12);
    for (int i = 0; i < 12; ++i) {
        gamma[i] = unit(rng);
        outdeg[i] = std::uint64_t(unit(rng) * 40);
    }
    RankComparison rc = rank_comparison(gamma, outdeg, 12);
    std::vector<bool> seen_g(12, false), seen_o(12, false);
    for (const auto& e : rc.top_by_gamma) seen_g[e.user] = true;
    for (const auto& e : rc.top_by_outdegree) seen_o[e.user] = true;
    CHECK(std::count(seen_g.begin(), seen_g.end(), true) == 12);
    CHECK(std::count(seen_o.begin(), seen_o.end(), true) == 12);

    CHECK_THROWS_AS(rank_comparison(gamma, outdeg, 13), std::invalid_argument);
}

TEST_CASE("classifier tags the star center as many-followers") {
    InfluenceGraph g = fixtures::star_out(6);
    std::vector<double> gamma(6, 1.0 / 6);
    InfluencerThresholds t{/*tau1=*/5, /*tau2=*/3, /*tau3=*/30, /*tau4=*/10, 0.2};
    InfluencerReport rep = classify_influencers(g, gamma, t);
    CHECK((rep.tags[0] & kManyFollowers) != 0);
    for (NodeId u = 1; u < 6; ++u) CHECK((rep.tags[u] & kManyFollowers) == 0);
}

// The dedicated-community anecdote: a node followed by 40 users that
// follow nobody else.
TEST_CASE("classifier finds dedicated communities") {
    std::vector<Arc> arcs;
    for (NodeId f = 1; f <= 40; ++f) arcs.push_back({0, f, 1.0});  // 0 -> f: f follows only 0
    InfluenceGraph g = normalize_in_weights(InfluenceGraph(41, std::move(arcs)));
    std::vector<double> gamma(41, 0.0);
    gamma[0] = 1.0;
    InfluencerThresholds t{/*tau1=*/1000, /*tau2=*/3, /*tau3=*/30, /*tau4=*/10, 0.05};
    InfluencerReport rep = classify_influencers(g, gamma, t);
    CHECK((rep.tags[0] & kDedicatedCommunity) != 0);
    CHECK(rep.coverage == doctest::Approx(1.0));  // top-gamma = {0}, tagged
}

// The confidant rule: a leaf followed by a high-gamma hub that follows
// only that leaf.
TEST_CASE("classifier finds confidants of influencers") {
    std::vector<Arc> arcs;
    NodeId hub = 0, leaf = 1;
    for (NodeId f = 2; f < 42; ++f) arcs.push_back({hub, f, 1.0});  // hub has 40 followers
    arcs.push_back({leaf, hub, 1.0});                               // hub follows only the leaf
    InfluenceGraph g = normalize_in_weights(InfluenceGraph(42, std::move(arcs)));
    std::vector<double> gamma(42, 0.001);
    gamma[hub] = 0.5;
    InfluencerThresholds t{/*tau1=*/30, /*tau2=*/3, /*tau3=*/30, /*tau4=*/10, 0.03};
    InfluencerReport rep = classify_influencers(g, gamma, t);
    CHECK((rep.tags[leaf] & kConfidantOfInfluencer) != 0);
    CHECK((rep.tags[hub] & kManyFollowers) != 0);
}

TEST_CASE("sup norm series") {
    Trajectory traj;
    traj.times = {10, 20, 30};
    traj.x_snapshots = {{0.1, 0.2}, {0.15, 0.35}, {0.2, 0.5}};
    traj.z_snapshots = traj.x_snapshots;

    // reference = final snapshot: last value is 0
    auto s = sup_norm_series(traj, {0.2, 0.5}, TrajectoryField::X);
    REQUIRE(s.size() == 3);
    CHECK(s[2] == 0.0);
    CHECK(s[0] == doctest::Approx(0.3));

    // constant trajectory equal to the reference: all zeros
    Trajectory flat;
    flat.times = {1, 2};
    flat.z_snapshots = {{0.4, 0.4}, {0.4, 0.4}};
    flat.x_snapshots = flat.z_snapshots;
    for (double v : sup_norm_series(flat, {0.4, 0.4}, TrajectoryField::Z)) CHECK(v == 0.0);

    CHECK_THROWS_AS(sup_norm_series(traj, {0.1}, TrajectoryField::X), std::invalid_argument);
}

TEST_CASE("loglog slope recovers an exact power law") {
    std::vector<std::uint64_t> times;
    std::vector<double> series;
    for (int i = 1; i <= 200; ++i) {
        times.push_back(std::uint64_t(i) * 50);
        series.push_back(std::pow(double(i) * 50, -0.8));
    }
    SlopeFit fit = loglog_slope(times, series, 0.5);
    CHECK(std::abs(fit.slope + 0.8) <= 1e-9);
    CHECK_FALSE(fit.floored);

    std::vector<double> constant(times.size(), 0.7);
    SlopeFit flat = loglog_slope(times, constant, 1.0);
    CHECK(std::abs(flat.slope) <= 1e-12);

    std::vector<double> with_zero = constant;
    with_zero[150] = 0.0;
    SlopeFit floored = loglog_slope(times, with_zero, 0.5);
    CHECK(floored.floored);

    CHECK_THROWS_AS(loglog_slope(times, series, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(loglog_slope(times, series, 1.5), std::invalid_argument);
}
