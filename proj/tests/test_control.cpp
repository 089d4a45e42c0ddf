#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morpho/control.hpp"

using namespace morpho;

namespace {

SimSetup control_setup(int n = 2, int N = 4) {
    SimSetup s;
    s.mesh = Mesh::unit_cube(n);
    s.rate.alpha0 = 0.05;
    s.rate.alpha3 = 0.3;
    s.rate.rho = 0.5;
    s.grid.N = N;
    return s;
}

}  // namespace

TEST_CASE("interval averages of separable controls are exact") {
    const Mesh mesh = Mesh::unit_cube(2);
    TimeGrid grid{1.0, 4};

    SUBCASE("constant in time and space") {
        const auto avg = control_average([](double, const Vec3&) { return 2.5; }, grid, mesh);
        REQUIRE(static_cast<int>(avg.size()) == grid.N);
        for (const auto& step : avg)
            for (double v : step) CHECK(v == 2.5);
    }
    SUBCASE("affine in time: midpoint sampling is exact") {
        const auto avg = control_average([](double t, const Vec3&) { return 3.0 * t; }, grid, mesh);
        for (int i = 1; i <= grid.N; ++i) {
            const double exact = 3.0 * 0.5 * (grid.t(i - 1) + grid.t(i));
            for (double v : avg[i - 1]) CHECK(v == doctest::Approx(exact).epsilon(1e-14));
        }
    }
    SUBCASE("spatial profile is sampled at the quadrature point") {
        const auto avg = control_average([](double, const Vec3& x) { return x[0]; }, grid, mesh);
        for (int q = 0; q < mesh.n_tets(); ++q)
            CHECK(avg[0][q] == doctest::Approx(mesh.centroid[q][0]).epsilon(1e-14));
    }
}

TEST_CASE("objective evaluation on a hand-built trajectory") {
    const Mesh mesh = Mesh::single_tet();  // volume 1/6
    const double vol = 1.0 / 6.0;

    Trajectory traj;
    traj.grid = TimeGrid{1.0, 2};
    // deformations: shift the whole tet by d_i in x1
    const double d1 = 0.2, d2 = 0.4;
    auto shifted = [&](double d) {
        std::vector<Vec3> y(mesh.n_vertices());
        for (int v = 0; v < mesh.n_vertices(); ++v) y[v] = mesh.vertices[v] + Vec3(d, 0, 0);
        return y;
    };
    traj.y = {shifted(0.0), shifted(d1), shifted(d2)};
    Mat3 gN = Mat3::Identity();
    gN(0, 0) = 2.0;  // det G_N = 2
    traj.G = {{Mat3::Identity()}, {Mat3::Identity()}, {gN}};

    const std::vector<std::vector<double>> mu_steps{{0.5}, {-1.0}};

    ObjectiveJ obj;
    obj.beta1 = 1.0;
    obj.beta2 = 2.0;
    obj.beta3 = 3.0;
    obj.p = 4.0;

    const auto j = evaluate_J(traj, mu_steps, obj, mesh);
    const double tau = 0.5;
    const double expected_vol = 1.0 * vol * 2.0;
    const double expected_track = 2.0 * tau * vol * (std::pow(d1, 4) + std::pow(d2, 4));
    const double expected_cost = 3.0 * tau * vol * (std::pow(0.5, 4) + std::pow(1.0, 4));
    CHECK(j.volume_term == doctest::Approx(expected_vol).epsilon(1e-14));
    CHECK(j.tracking_term == doctest::Approx(expected_track).epsilon(1e-14));
    CHECK(j.control_cost == doctest::Approx(expected_cost).epsilon(1e-14));
    CHECK(j.total() == doctest::Approx(expected_vol + expected_track + expected_cost).epsilon(1e-14));
}

TEST_CASE("objective terms are nonnegative for nonnegative weights") {
    SimSetup s = control_setup();
    ObjectiveJ obj;
    obj.beta1 = 0.5;
    obj.beta2 = 1.0;
    obj.beta3 = 2.0;
    const auto mu = [](double, const Vec3&) { return 0.7; };
    const auto traj = solve_given_control(mu, s);
    const auto j = evaluate_J(traj, control_average(mu, s.grid, s.mesh), obj, s.mesh);
    CHECK(j.volume_term >= 0.0);
    CHECK(j.tracking_term >= 0.0);
    CHECK(j.control_cost >= 0.0);
}

TEST_CASE("inert control: alpha3 = 0 reproduces the plain scheme bitwise") {
    SimSetup s = control_setup();
    s.rate.alpha3 = 0.0;
    s.rate.alpha1 = 0.1;
    const auto with_control = solve_given_control([](double, const Vec3&) { return 42.0; }, s);
    const auto plain = run_morpho(s);
    REQUIRE(with_control.G.size() == plain.G.size());
    for (size_t i = 0; i < plain.G.size(); ++i) {
        for (size_t q = 0; q < plain.G[i].size(); ++q)
            CHECK((with_control.G[i][q] - plain.G[i][q]).cwiseAbs().maxCoeff() == 0.0);
        for (size_t v = 0; v < plain.y[i].size(); ++v)
            CHECK((with_control.y[i][v] - plain.y[i][v]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("stronger nutrient control grows more volume") {
    SimSetup s = control_setup();
    auto final_volume = [&](double level) {
        const auto traj = solve_given_control([level](double, const Vec3&) { return level; }, s);
        double v = 0.0;
        for (int q = 0; q < s.mesh.n_tets(); ++q) v += s.mesh.volume[q] * det(traj.G.back()[q]);
        return v;
    };
    CHECK(final_volume(2.0) > final_volume(0.0));
    CHECK(final_volume(0.0) > final_volume(-2.0));
}

TEST_CASE("exhaustive search returns the grid minimum") {
    SimSetup s = control_setup(2, 3);
    ControlFamily family;
    family.basis = {basis_field("const", s.grid)};
    family.lo = {-1.0};
    family.hi = {1.0};
    family.grid_points = 3;  // candidates -1, 0, 1

    ObjectiveJ obj;  // beta1 = 1: minimizing grown volume prefers starving
    const auto result = optimize_control(family, obj, s, 100);
    REQUIRE(result.evaluated.size() == 3);
    CHECK(result.c.size() == 1);
    CHECK(result.c[0] == -1.0);
    for (const auto& cand : result.evaluated) CHECK(result.j.total() <= cand.j.total());
    CHECK(!result.budget_exhausted);

    SUBCASE("candidate order is deterministic and lexicographic") {
        CHECK(result.evaluated[0].c[0] == -1.0);
        CHECK(result.evaluated[1].c[0] == 0.0);
        CHECK(result.evaluated[2].c[0] == 1.0);
    }
    SUBCASE("the reported trajectory belongs to the best candidate") {
        const auto rerun = solve_given_control(family.control(result.c), s);
        for (size_t q = 0; q < rerun.G.back().size(); ++q)
            CHECK((result.trajectory.G.back()[q] - rerun.G.back()[q]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("two-dimensional tensor grid is enumerated completely") {
    SimSetup s = control_setup(2, 3);
    ControlFamily family;
    family.basis = {basis_field("const", s.grid), basis_field("time", s.grid)};
    family.lo = {-0.5, -0.5};
    family.hi = {0.5, 0.5};
    family.grid_points = 2;

    ObjectiveJ obj;
    const auto result = optimize_control(family, obj, s, 100);
    REQUIRE(result.evaluated.size() == 4);
    // lexicographic order over (c0, c1)
    CHECK(result.evaluated[0].c == std::vector<double>{-0.5, -0.5});
    CHECK(result.evaluated[1].c == std::vector<double>{-0.5, 0.5});
    CHECK(result.evaluated[2].c == std::vector<double>{0.5, -0.5});
    CHECK(result.evaluated[3].c == std::vector<double>{0.5, 0.5});
}

TEST_CASE("evaluation budget truncates the search but stays sound") {
    SimSetup s = control_setup(2, 3);
    ControlFamily family;
    family.basis = {basis_field("const", s.grid)};
    family.lo = {-1.0};
    family.hi = {1.0};
    family.grid_points = 5;

    ObjectiveJ obj;
    const auto result = optimize_control(family, obj, s, 2);
    CHECK(result.budget_exhausted);
    REQUIRE(result.evaluated.size() == 2);
    for (const auto& cand : result.evaluated) CHECK(result.j.total() <= cand.j.total());
}

TEST_CASE("singleton grid evaluates exactly the lower corner") {
    SimSetup s = control_setup(2, 3);
    ControlFamily family;
    family.basis = {basis_field("const", s.grid)};
    family.lo = {0.25};
    family.hi = {0.75};
    family.grid_points = 1;
    ObjectiveJ obj;
    const auto result = optimize_control(family, obj, s, 10);
    REQUIRE(result.evaluated.size() == 1);
    CHECK(result.c[0] == 0.25);
}

TEST_CASE("search is reproducible") {
    SimSetup s = control_setup(2, 3);
    ControlFamily family;
    family.basis = {basis_field("x1", s.grid)};
    family.lo = {-0.4};
    family.hi = {0.8};
    family.grid_points = 4;
    ObjectiveJ obj;
    obj.beta2 = 1.0;
    const auto r1 = optimize_control(family, obj, s, 100);
    const auto r2 = optimize_control(family, obj, s, 100);
    CHECK(r1.c == r2.c);
    CHECK(r1.j.total() == r2.j.total());
    REQUIRE(r1.evaluated.size() == r2.evaluated.size());
    for (size_t k = 0; k < r1.evaluated.size(); ++k)
        CHECK(r1.evaluated[k].j.total() == r2.evaluated[k].j.total());
}

TEST_CASE("unknown basis identifiers are rejected") {
    TimeGrid grid;
    CHECK_THROWS_AS(basis_field("quadratic", grid), ConfigError);
    // the known ones evaluate as documented
    CHECK(basis_field("const", grid)(0.3, Vec3(1, 2, 3)) == 1.0);
    CHECK(basis_field("time", grid)(0.25, Vec3::Zero()) == doctest::Approx(0.25));
    CHECK(basis_field("x2", grid)(0.0, Vec3(1, 2, 3)) == 2.0);
}
