#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "whub/projections.hpp"

using namespace whub;

TEST_SUITE_BEGIN("projections");

namespace {

// O(2^m) active-set reference: try every support, keep the KKT-consistent one
Eigen::VectorXd simplex_reference(const Eigen::VectorXd& d, double s) {
    const int m = static_cast<int>(d.size());
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        double sum = 0.0;
        int cnt = 0;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) {
                sum += d(i);
                ++cnt;
            }
        const double tau = (sum - s) / cnt;
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
            const bool in = mask & (1u << i);
            if (in && d(i) - tau <= -1e-13) ok = false;
            if (!in && d(i) - tau > 1e-13) ok = false;
        }
        if (ok) {
            Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i)) out(i) = d(i) - tau;
            return out;
        }
    }
    REQUIRE(false);
    return {};
}

}  // namespace

TEST_CASE("simplex projection examples") {
    const Eigen::VectorXd centred = Eigen::VectorXd::Constant(4, 2.0 / 4.0);
    CHECK((project_simplex(centred, 2.0) - centred).norm() <= 1e-15);

    Eigen::Vector2d d(3.0, 0.0);
    const Eigen::VectorXd p = project_simplex(d, 2.0);
    CHECK(p(0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(p(1) == 0.0);

    const Eigen::VectorXd q = project_simplex(Eigen::Vector3d::Ones(), 2.0);
    for (int i = 0; i < 3; ++i) CHECK(q(i) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(project_simplex(Eigen::Vector2d::Ones(), 0.0), std::invalid_argument);
}

TEST_CASE("simplex projection matches the active-set reference") {
    std::mt19937_64 eng(17);
    for (int rep = 0; rep < 1000; ++rep) {
        const int m = 1 + static_cast<int>(testutil::unit(eng) * 12);
        const double s = 0.25 + 4.0 * testutil::unit(eng);
        const Eigen::VectorXd d = testutil::random_vector(eng, m, -3.0, 3.0);
        const Eigen::VectorXd got = project_simplex(d, s);
        const Eigen::VectorXd want = simplex_reference(d, s);
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(got.minCoeff() >= 0.0);
        CHECK(got.sum() == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("spectral projection examples") {
    Eigen::MatrixXd M = Eigen::Vector3d(3, 0, -1).asDiagonal();
    const Eigen::MatrixXd R = project_R(M, 1);
    Eigen::MatrixXd want = Eigen::Vector3d(2, 0, 0).asDiagonal();
    CHECK((R - want).cwiseAbs().maxCoeff() <= 1e-12);

    // feasible points are fixed
    const Eigen::MatrixXd Mid = (3.0 / 4.0) * Eigen::MatrixXd::Identity(4, 4);  // k = 2
    CHECK((project_R(Mid, 2) - Mid).cwiseAbs().maxCoeff() <= 1e-10);

    std::mt19937_64 eng(19);
    Eigen::MatrixXd A = testutil::random_symmetric(eng, 5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::VectorXd lam = project_simplex(testutil::random_vector(eng, 5, 0.0, 2.0), 4.0);
    const Eigen::MatrixXd feasible =
        es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    CHECK((project_R(feasible, 3) - feasible).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("spectral projection is frobenius-nearest") {
    std::mt19937_64 eng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 2 + static_cast<int>(testutil::unit(eng) * 5);
        const int k = 1 + static_cast<int>(testutil::unit(eng) * 3);
        const Eigen::MatrixXd M = testutil::random_symmetric(eng, m, 2.0);
        const Eigen::MatrixXd R = project_R(M, k);
        CHECK(R.trace() == doctest::Approx(double(k + 1)).epsilon(1e-9));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10);
        const double dist = (R - M).norm();
        for (int cand = 0; cand < 50; ++cand) {
            const Eigen::MatrixXd A = testutil::random_symmetric(eng, m);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ca(A);
            const Eigen::VectorXd lam =
                project_simplex(testutil::random_vector(eng, m, 0.0, 1.0), double(k + 1));
            const Eigen::MatrixXd C =
                ca.eigenvectors() * lam.asDiagonal() * ca.eigenvectors().transpose();
            CHECK(dist <= (C - M).norm() + 1e-9);
        }
    }
}

TEST_CASE("arrow-box-gangster projection") {
    const std::vector<int> sizes{2, 2};
    const GangsterIndex gang = build_gangster(sizes);

    std::mt19937_64 eng(29);
    const Selection sel = testutil::random_selection(eng, sizes);
    const Eigen::MatrixXd Yx = testutil::lifted_point(sel, sizes);
    CHECK((project_Y(Yx, gang) - Yx).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(5, 5);
    const Eigen::MatrixXd Pz = project_Y(zero, gang);
    CHECK(Pz(0, 0) == 1.0);
    CHECK(Pz.cwiseAbs().sum() == 1.0);

    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(5, 5);
    W(1, 1) = 0.9;
    W(0, 1) = 0.6;
    W(1, 0) = 0.6;
    const Eigen::MatrixXd P = project_Y(W, gang);
    CHECK(P(1, 1) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(P(0, 1) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(P(1, 0) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("projected Y lies in the Y-set exactly") {
    std::mt19937_64 eng(31);
    const std::vector<int> sizes{3, 2};
    const GangsterIndex gang = build_gangster(sizes);
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXd W = testutil::random_symmetric(eng, 6, 2.0);
        const Eigen::MatrixXd Y = project_Y(W, gang);
        CHECK(Y(0, 0) == 1.0);
        CHECK((Y - Y.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(Y.minCoeff() >= 0.0);
        CHECK(Y.maxCoeff() <= 1.0);
        for (const auto& [i, j] : gang.pairs) CHECK(Y(i, j) == 0.0);
        for (int i = 1; i <= 5; ++i) {
            CHECK(Y(i, i) == Y(0, i));
            CHECK(Y(i, i) == Y(i, 0));
        }
    }
}

TEST_CASE("dual subspace projection") {
    CHECK(project_ZA0(Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);

    Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(4, 4);
    corner(0, 0) = 1.0;
    CHECK(project_ZA0(corner).norm() == 0.0);

    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(4, 4);
    W(2, 3) = 5.0;
    W(3, 2) = 5.0;
    CHECK((project_ZA0(W) - W).norm() == 0.0);
}

TEST_CASE("dual initialization") {
    const Instance inst = gen_random(2, 2, 2, false, 55);
    const EDMData edm = build_edm(inst);
    CHECK(init_Z(edm.Dhat).norm() == 0.0);

    Eigen::MatrixXd synthetic = Eigen::MatrixXd::Zero(3, 3);
    synthetic(0, 1) = 2.0;
    synthetic(1, 0) = 2.0;
    const Eigen::MatrixXd Z = init_Z(synthetic);
    CHECK(Z(0, 1) == -2.0);
    CHECK(Z(1, 0) == -2.0);
    CHECK(Z.cwiseAbs().sum() == 4.0);

    CHECK(init_Z(Eigen::MatrixXd::Zero(4, 4)).norm() == 0.0);
}

TEST_CASE("projections are idempotent") {
    std::mt19937_64 eng(37);
    const std::vector<int> sizes{2, 3};
    const GangsterIndex gang = build_gangster(sizes);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd d = testutil::random_vector(eng, 6, -2.0, 2.0);
        const Eigen::VectorXd p = project_simplex(d, 3.0);
        CHECK((project_simplex(p, 3.0) - p).cwiseAbs().maxCoeff() <= 1e-12);

        const Eigen::MatrixXd M = testutil::random_symmetric(eng, 4, 2.0);
        const Eigen::MatrixXd R = project_R(M, 2);
        CHECK((project_R(R, 2) - R).cwiseAbs().maxCoeff() <= 1e-12);

        const Eigen::MatrixXd W = testutil::random_symmetric(eng, 6, 2.0);
        const Eigen::MatrixXd Y = project_Y(W, gang);
        CHECK((project_Y(Y, gang) - Y).cwiseAbs().maxCoeff() <= 1e-12);

        const Eigen::MatrixXd Z = project_ZA0(W);
        CHECK((project_ZA0(Z) - Z).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("projections are nonexpansive") {
    std::mt19937_64 eng(41);
    const std::vector<int> sizes{2, 3};
    const GangsterIndex gang = build_gangster(sizes);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd a = testutil::random_vector(eng, 5, -2.0, 2.0);
        const Eigen::VectorXd b = testutil::random_vector(eng, 5, -2.0, 2.0);
        CHECK((project_simplex(a, 2.0) - project_simplex(b, 2.0)).norm() <= (a - b).norm() + 1e-12);

        const Eigen::MatrixXd A = testutil::random_symmetric(eng, 6, 2.0);
        const Eigen::MatrixXd B = testutil::random_symmetric(eng, 6, 2.0);
        CHECK((project_R(A, 1) - project_R(B, 1)).norm() <= (A - B).norm() + 1e-12);
        CHECK((project_Y(A, gang) - project_Y(B, gang)).norm() <= (A - B).norm() + 1e-9);
        CHECK((project_ZA0(A) - project_ZA0(B)).norm() <= (A - B).norm() + 1e-12);
    }
}

TEST_SUITE_END();
