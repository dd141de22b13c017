#include <doctest.h>

#include <cmath>
#include <sstream>

#include "omrr/attenuation.hpp"
#include "omrr/lp.hpp"
#include "support/test_instances.hpp"

using namespace omrr;

namespace {

lp::LpSolution manual_solution(const model::Instance& inst,
                               std::vector<double> x) {
    auto sol = lp::LpSolution::zero(inst);
    sol.x = std::move(x);
    return sol;
}

}  // namespace

TEST_CASE("closed form on the single-edge fixture") {
    // T = 3, x = (1, 0, 1), occupation constant 2, gamma = 1/2.
    const auto inst = testsupport::single_edge(3, 1.0, 2);
    const auto sol = manual_solution(inst, {1.0, 0.0, 1.0});
    const auto table = attenuation::beta_exact(inst, sol, 0.5);
    CHECK(table.at(0, 1) == doctest::Approx(1.0));
    CHECK(table.at(0, 2) == doctest::Approx(0.5));
    CHECK(table.at(0, 3) == doctest::Approx(1.0));
    CHECK(table.valid());  // 0.5 sits exactly on gamma, not below
    CHECK(table.samples == 0);
    CHECK(table.se(0, 2) == 0.0);
}

TEST_CASE("an idle allocation leaves every resource free") {
    const auto inst = testsupport::small_2x3();
    const auto table =
        attenuation::beta_exact(inst, lp::LpSolution::zero(inst), 0.5);
    for (model::ResourceId u = 0; u < inst.num_resources(); ++u)
        for (model::Round t = 1; t <= inst.horizon(); ++t)
            CHECK(table.at(u, t) == 1.0);
}

TEST_CASE("feasible benchmarks keep beta at or above one half") {
    for (std::uint64_t seed = 400; seed < 420; ++seed) {
        const auto inst = testsupport::random_small_instance(seed);
        const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
        const auto table = attenuation::beta_exact(inst, sol, 0.5);
        CHECK(table.valid());
        for (model::ResourceId u = 0; u < inst.num_resources(); ++u)
            for (model::Round t = 1; t <= inst.horizon(); ++t) {
                CHECK(table.at(u, t) >= 0.5 - 1e-9);
                // Sharper chain: one half plus half the current-round mass.
                double current = 0.0;
                for (model::EdgeId e : inst.edges_of_resource(u))
                    current += sol.at(e, t);
                CHECK(table.at(u, t) >= 0.5 + 0.5 * current - 1e-9);
            }
    }
}

TEST_CASE("beta entries fall as gamma rises") {
    const auto inst = testsupport::random_small_instance(431);
    const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
    const auto lo = attenuation::beta_exact(inst, sol, 0.3);
    const auto hi = attenuation::beta_exact(inst, sol, 0.9);
    for (std::size_t i = 0; i < lo.beta.size(); ++i) CHECK(lo.beta[i] >= hi.beta[i]);
}

TEST_CASE("breaches are flagged, never clamped") {
    // An overfull allocation drives beta under gamma; the raw value stays.
    const auto inst = testsupport::single_edge(2, 1.0, 2);
    const auto sol = manual_solution(inst, {1.0, 1.0});  // violates the benchmark
    const auto table = attenuation::beta_exact(inst, sol, 0.9);
    REQUIRE_FALSE(table.valid());
    REQUIRE(table.breaches.size() == 1);
    CHECK(table.breaches[0].resource == 0);
    CHECK(table.breaches[0].round == 2);
    CHECK(table.at(0, 2) == doctest::Approx(1.0 - 0.9));  // raw, unclamped
}

TEST_CASE("gamma outside (0, 1] is rejected") {
    const auto inst = testsupport::single_edge(2, 1.0, 1);
    const auto sol = lp::LpSolution::zero(inst);
    CHECK_THROWS_AS(attenuation::beta_exact(inst, sol, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(attenuation::beta_exact(inst, sol, 1.5), std::invalid_argument);
}

TEST_CASE("round one is certain availability in simulated tables") {
    const auto inst = testsupport::single_edge(3, 1.0, 2);
    const auto sol = manual_solution(inst, {1.0, 0.0, 1.0});
    const auto table = attenuation::beta_monte_carlo(inst, sol, 0.5, 50, 7);
    CHECK(table.at(0, 1) == 1.0);
    CHECK(table.se(0, 1) == 0.0);
    CHECK(table.samples == 50);
}

TEST_CASE("simulation estimates agree with the closed form") {
    const auto inst = testsupport::single_edge(3, 1.0, 2);
    const auto sol = manual_solution(inst, {1.0, 0.0, 1.0});
    const auto exact = attenuation::beta_exact(inst, sol, 0.5);
    const auto mc = attenuation::beta_monte_carlo(inst, sol, 0.5, 100000, 11);
    // Expected availability at round 2 is exactly 1/2.
    CHECK(std::abs(mc.at(0, 2) - exact.at(0, 2)) <= 3.0 * mc.se(0, 2) + 1e-9);
    CHECK(mc.at(0, 3) == doctest::Approx(1.0));
}

TEST_CASE("simulated tables are deterministic in the seed") {
    const auto inst = testsupport::one_resource_t3();
    const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
    const auto a = attenuation::beta_monte_carlo(inst, sol, 0.5, 2000, 13);
    const auto b = attenuation::beta_monte_carlo(inst, sol, 0.5, 2000, 13);
    CHECK(a.beta == b.beta);
    CHECK(a.standard_error == b.standard_error);
}

TEST_CASE("simulated and exact tables agree across the small family") {
    for (std::uint64_t seed = 440; seed < 446; ++seed) {
        const auto inst = testsupport::random_small_instance(seed);
        const auto sol = lp::solve_lp(lp::build_benchmark_lp(inst));
        const auto exact = attenuation::beta_exact(inst, sol, 0.5);
        const std::uint64_t samples = 10000;
        const auto mc = attenuation::beta_monte_carlo(inst, sol, 0.5, samples, seed);
        for (model::ResourceId u = 0; u < inst.num_resources(); ++u)
            for (model::Round t = 1; t <= inst.horizon(); ++t) {
                const double se =
                    std::max(mc.se(u, t),
                             std::sqrt(exact.at(u, t) * (1 - exact.at(u, t)) /
                                       static_cast<double>(samples)));
                const double slack = 4.0 * se + 4.0 / static_cast<double>(samples);
                CHECK_MESSAGE(std::abs(mc.at(u, t) - exact.at(u, t)) <= slack,
                              "resource ", u, " round ", t, ": ", mc.at(u, t), " vs ",
                              exact.at(u, t));
            }
    }
}

TEST_CASE("csv export lists resource, round, beta, stderr") {
    const auto inst = testsupport::single_edge(2, 1.0, 2);
    const auto table =
        attenuation::beta_exact(inst, manual_solution(inst, {1.0, 0.0}), 0.5);
    std::ostringstream out;
    attenuation::write_csv(out, table, inst);
    CHECK(out.str() ==
          "resource,round,beta,stderr\n"
          "u0,1,1,0\n"
          "u0,2,0.5,0\n");
}
