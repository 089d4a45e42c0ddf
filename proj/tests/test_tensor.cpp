#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "morpho/rng.hpp"
#include "morpho/tensor.hpp"

using namespace morpho;

namespace {

// Independent exponential oracle: plain Taylor series with term-wise
// convergence check, adequate for the moderate norms used here.
Mat3 exp_series(const Mat3& a, int terms = 60) {
    Mat3 sum = Mat3::Identity();
    Mat3 term = Mat3::Identity();
    for (int k = 1; k <= terms; ++k) {
        term = (term * a) / k;
        sum += term;
        if (term.norm() < 1e-18 * sum.norm()) break;
    }
    return sum;
}

Mat3 random_mat(Rng& rng, double scale) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-scale, scale);
    return m;
}

}  // namespace

TEST_CASE("determinant of hand-picked matrices") {
    CHECK(det(Mat3::Identity()) == 1.0);
    Mat3 a;
    a << 2, 0, 0, 0, 3, 0, 0, 0, 4;
    CHECK(det(a) == 24.0);
    Mat3 b;
    b << 1, 2, 3, 4, 5, 6, 7, 8, 10;  // det = -3
    CHECK(det(b) == doctest::Approx(-3.0).epsilon(1e-14));
    Mat3 sing;
    sing << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    CHECK(std::abs(det(sing)) < 1e-12);
}

TEST_CASE("cofactor identity cof(A) = det(A) A^{-T}") {
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        Mat3 a = Mat3::Identity() + random_mat(rng, 0.5);
        const double d = det(a);
        if (std::abs(d) < 1e-3) continue;
        const Mat3 expected = d * a.inverse().transpose();
        CHECK(frob(cofactor(a) - expected) < 1e-10 * std::max(1.0, frob(expected)));
    }
}

TEST_CASE("matrix exponential matches the series oracle") {
    Rng rng(22);
    for (int k = 0; k < 500; ++k) {
        const Mat3 a = random_mat(rng, 1.0);
        const Mat3 e = mat_exp(a);
        CHECK(frob(e - exp_series(a)) < 1e-12 * frob(e));
    }
    // larger norms exercise the scaling phase
    for (int k = 0; k < 100; ++k) {
        const Mat3 a = random_mat(rng, 4.0);
        const Mat3 e = mat_exp(a);
        CHECK(frob(e - exp_series(a, 120)) < 1e-11 * frob(e));
    }
}

TEST_CASE("exponential of a diagonal matrix") {
    Mat3 a = Mat3::Zero();
    a(0, 0) = 1.0;
    a(2, 2) = -1.0;
    const Mat3 e = mat_exp(a);
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e(2, 2) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(std::abs(e(0, 1)) + std::abs(e(1, 0)) + std::abs(e(0, 2)) == 0.0);
}

TEST_CASE("exponential of a rotation generator") {
    // exp of t * skew(e3) is the rotation by t about e3
    const double t = 0.7;
    Mat3 a = Mat3::Zero();
    a(0, 1) = -t;
    a(1, 0) = t;
    const Mat3 e = mat_exp(a);
    CHECK(e(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-14));
    CHECK(e(0, 1) == doctest::Approx(-std::sin(t)).epsilon(1e-14));
    CHECK(e(1, 0) == doctest::Approx(std::sin(t)).epsilon(1e-14));
    CHECK(e(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exponential step bound |exp(A) - Id| <= e^{|A|} - 1") {
    Rng rng(33);
    for (int k = 0; k < 10000; ++k) {
        const Mat3 a = random_mat(rng, 5.0 / std::sqrt(3.0));
        if (frob(a) > 5.0) continue;
        const double lhs = frob(mat_exp(a) - Mat3::Identity());
        const double rhs = std::exp(frob(a)) - 1.0;
        CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-12);
    }
}

TEST_CASE("det exp(A) = exp(tr A)") {
    Rng rng(44);
    for (int k = 0; k < 10000; ++k) {
        const Mat3 a = random_mat(rng, 2.0);
        const double lhs = det(mat_exp(a));
        const double rhs = std::exp(trace(a));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
}

TEST_CASE("exp(A) exp(-A) = Id") {
    Rng rng(55);
    for (int k = 0; k < 5000; ++k) {
        const Mat3 a = random_mat(rng, 2.0);
        const Mat3 p = mat_exp(a) * mat_exp(-a);
        CHECK(frob(p - Mat3::Identity()) <= 1e-10 * frob(p));
    }
}

TEST_CASE("directional derivative of the exponential") {
    Rng rng(66);
    // finite-difference cross-check of tau int_0^1 e^{(1-s)tau A} E e^{s tau A} ds
    for (int k = 0; k < 200; ++k) {
        const Mat3 a = random_mat(rng, 1.0);
        const Mat3 e = random_mat(rng, 1.0);
        const double tau = 0.3;
        const Mat3 d = mat_exp_dderiv(a, e, tau);
        const double h = 1e-6;
        const Mat3 fd = (mat_exp(tau * (a + h * e)) - mat_exp(tau * (a - h * e))) / (2.0 * h);
        CHECK(frob(d - fd) < 1e-5 * std::max(1.0, frob(fd)));
    }

    SUBCASE("A = 0 gives tau E exactly") {
        const Mat3 e = random_mat(rng, 2.0);
        const Mat3 d = mat_exp_dderiv(Mat3::Zero(), e, 0.7);
        CHECK(frob(d - 0.7 * e) < 1e-13 * frob(e));
    }
    SUBCASE("A = Id, E = Id gives tau e^{tau} Id") {
        const double tau = 0.4;
        const Mat3 d = mat_exp_dderiv(Mat3::Identity(), Mat3::Identity(), tau);
        CHECK(frob(d - tau * std::exp(tau) * Mat3::Identity()) < 1e-12);
    }
}

TEST_CASE("third-order tensor algebra") {
    Rng rng(77);
    Tensor3 c;
    for (int i = 0; i < 27; ++i) c.v[i] = rng.uniform(-1, 1);
    const Mat3 b = random_mat(rng, 1.0);

    SUBCASE("partial transpose is an involution") {
        const Tensor3 t2 = c.partial_transpose().partial_transpose();
        for (int i = 0; i < 27; ++i) CHECK(t2.v[i] == c.v[i]);
    }
    SUBCASE("contractions agree with explicit sums") {
        const Tensor3 r = c.contract_right(b);
        const Tensor3 l = c.contract_left(b);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) {
                    double sr = 0, sl = 0;
                    for (int m = 0; m < 3; ++m) {
                        sr += c(i, j, m) * b(m, k);
                        sl += b(i, m) * c(m, j, k);
                    }
                    CHECK(r(i, j, k) == doctest::Approx(sr).epsilon(1e-14));
                    CHECK(l(i, j, k) == doctest::Approx(sl).epsilon(1e-14));
                }
    }
    SUBCASE("contraction norm is submultiplicative") {
        CHECK(c.contract_right(b).norm() <= c.norm() * b.norm() * (1.0 + 1e-12));
        CHECK(c.contract_left(b).norm() <= c.norm() * b.norm() * (1.0 + 1e-12));
    }
}
