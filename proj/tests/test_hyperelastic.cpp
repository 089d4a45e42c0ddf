#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morpho/hyperelastic.hpp"
#include "morpho/rng.hpp"

using namespace morpho;

namespace {

Mat3 random_mat(Rng& rng, double scale) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-scale, scale);
    return m;
}

Mat3 random_posdet(Rng& rng, double spread = 0.5) {
    for (;;) {
        Mat3 m = Mat3::Identity() + random_mat(rng, spread);
        if (det(m) > 0.05) return m;
    }
}

Mat3 random_rotation(Rng& rng) {
    for (;;) {
        Vec3 u(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        Vec3 v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        if (u.norm() < 1e-2 || u.cross(v).norm() < 1e-2) continue;
        u.normalize();
        const Vec3 w = u.cross(v).normalized();
        Mat3 r;
        r.col(0) = u;
        r.col(1) = w.cross(u);
        r.col(2) = w;
        return r;
    }
}

}  // namespace

TEST_CASE("energy values at hand-picked strains") {
    EnergyDensity w;  // a = b = s = 1, p = 4
    // |Id| = sqrt(3), so W(Id) = 9 + 1 = 10
    CHECK(w.W(Mat3::Identity()) == doctest::Approx(10.0).epsilon(1e-15));

    Mat3 stretch = Mat3::Identity();
    stretch(0, 0) = 2.0;  // |F|^2 = 6, det = 2
    EnergyDensity w2 = w;
    w2.s = 2.0;  // W = 36 + 1/4
    CHECK(w2.W(stretch) == doctest::Approx(36.25).epsilon(1e-15));

    Mat3 rank2 = Mat3::Identity();
    rank2(2, 2) = 0.0;
    CHECK(w.W(rank2) == EnergyDensity::infinite);
    rank2(2, 2) = -1.0;  // orientation reversal
    CHECK(w.W(rank2) == EnergyDensity::infinite);
}

TEST_CASE("stress at the identity") {
    EnergyDensity w;
    // p a |Id|^{p-2} Id - s b Id = (4*3 - 1) Id = 11 Id
    const Mat3 p = w.DW(Mat3::Identity());
    CHECK(frob(p - 11.0 * Mat3::Identity()) < 1e-13);
    CHECK_THROWS_AS(w.DW(Mat3::Zero()), SolverError);
}

TEST_CASE("derivative matches finite differences") {
    EnergyDensity w;
    w.s = 1.5;
    Rng rng(101);
    const double h = 1e-7;
    for (int k = 0; k < 300; ++k) {
        const Mat3 f = random_posdet(rng);
        const Mat3 dw = w.DW(f);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                Mat3 fp = f, fm = f;
                fp(r, c) += h;
                fm(r, c) -= h;
                const double fd = (w.W(fp) - w.W(fm)) / (2.0 * h);
                CHECK(std::abs(dw(r, c) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
            }
    }
}

TEST_CASE("frame indifference W(RF) = W(F)") {
    EnergyDensity w;
    Rng rng(202);
    for (int k = 0; k < 1000; ++k) {
        const Mat3 f = random_posdet(rng);
        const Mat3 r = random_rotation(rng);
        const double wf = w.W(f);
        CHECK(std::abs(w.W(r * f) - wf) <= 1e-12 * (1.0 + std::abs(wf)));
    }
}

TEST_CASE("coercivity with constant c1 = min(a, 1)") {
    EnergyDensity w;
    w.a = 0.7;
    w.b = 2.0;
    w.s = 1.3;
    Rng rng(303);
    for (int k = 0; k < 10000; ++k) {
        const Mat3 f = random_posdet(rng, 0.8);
        const double lhs = w.c1() * (std::pow(frob(f), w.p) + std::pow(det(f), -w.s));
        CHECK(w.W(f) + 1.0 >= lhs * (1.0 - 1e-12));
    }
}

TEST_CASE("Mandel tensor bound |F^T DW(F)| <= c2 (W(F) + 1)") {
    Rng rng(404);
    for (int variant = 0; variant < 2; ++variant) {
        EnergyDensity w;
        if (variant == 1) {
            w.p = 3.5;
            w.s = 2.5;  // sqrt(3) s > p branch of c2
        }
        for (int k = 0; k < 10000; ++k) {
            const Mat3 f = random_posdet(rng, 0.9);
            CHECK(frob(w.mandel(f)) <= w.c2() * (w.W(f) + 1.0) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("polyconvexity along segments in (F, cof F, det F)") {
    // W(F) = g(F, det F) with both arguments entering convexly; spot-check
    // midpoint convexity of the scalar pieces.
    EnergyDensity w;
    Rng rng(505);
    for (int k = 0; k < 2000; ++k) {
        const Mat3 f0 = random_posdet(rng), f1 = random_posdet(rng);
        const double d0 = det(f0), d1 = det(f1);
        // |.|^p convex in F
        const double lhs_f = w.a * std::pow(frob(0.5 * (f0 + f1)), w.p);
        const double rhs_f = 0.5 * (w.a * std::pow(frob(f0), w.p) + w.a * std::pow(frob(f1), w.p));
        CHECK(lhs_f <= rhs_f * (1.0 + 1e-12));
        // d^{-s} convex in d > 0
        const double lhs_d = w.b * std::pow(0.5 * (d0 + d1), -w.s);
        const double rhs_d = 0.5 * (w.b * std::pow(d0, -w.s) + w.b * std::pow(d1, -w.s));
        CHECK(lhs_d <= rhs_d * (1.0 + 1e-12));
    }
}

TEST_CASE("growth tensor point caches inverse and determinant") {
    Rng rng(606);
    for (int k = 0; k < 200; ++k) {
        const Mat3 g = random_posdet(rng);
        const auto gp = GrowthTensorPoint::from(g);
        CHECK(gp.detG == doctest::Approx(det(g)).epsilon(1e-14));
        CHECK(frob(gp.G * gp.Ginv - Mat3::Identity()) < 1e-12);
    }
    Mat3 bad = Mat3::Identity();
    bad(1, 1) = -1.0;
    CHECK_THROWS_AS(GrowthTensorPoint::from(bad), InvariantViolation);
}

TEST_CASE("Piola stress with growth reduces to DW at G = Id") {
    EnergyDensity w;
    Rng rng(707);
    const auto id = GrowthTensorPoint::from(Mat3::Identity());
    for (int k = 0; k < 200; ++k) {
        const Mat3 f = random_posdet(rng);
        CHECK(frob(piola_with_growth(w, f, id) - w.DW(f)) < 1e-12 * frob(w.DW(f)));
    }

    // scaling growth: G = c Id gives det G DW(F/c) / c
    const double c = 1.3;
    const auto gp = GrowthTensorPoint::from(c * Mat3::Identity());
    const Mat3 f = random_posdet(rng);
    const Mat3 expected = c * c * c * w.DW(f / c) / c;
    CHECK(frob(piola_with_growth(w, f, gp) - expected) < 1e-12 * frob(expected));

    // degenerate elastic strain rejected
    const auto big = GrowthTensorPoint::from(2.0 * Mat3::Identity());
    Mat3 flip = Mat3::Identity();
    flip(0, 0) = -1.0;
    CHECK_THROWS_AS(piola_with_growth(w, flip, big), SolverError);
}
