#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle_helpers.hpp"
#include "rdmpurify/fock.hpp"
#include "rdmpurify/integrals.hpp"
#include "rdmpurify/rdm.hpp"

using namespace rdmpurify;

TEST_CASE("contraction of a slater determinant is idempotent") {
    auto basis = build_basis(4, 2, 0);
    Eigen::VectorXd amps = Eigen::VectorXd::Zero(basis->size());
    amps[basis->index_of(0b0011)] = 1.0;
    TwoRDM d = rdm2_from_state({basis, amps});
    OneRDM one = contract_to_1rdm(d);
    Eigen::VectorXd expected(4);
    expected << 1, 1, 0, 0;
    CHECK((one.data - Eigen::MatrixXd(expected.asDiagonal())).lpNorm<Eigen::Infinity>() <=
          1e-13);
}

TEST_CASE("contraction is linear") {
    auto basis = build_basis(6, 3, 1);
    TwoRDM d = rdm2_from_state(oracle::random_state(basis, 3));
    TwoRDM scaled(d.r(), d.particles(), (0.35 * d.packed()).eval());
    OneRDM a = contract_to_1rdm(d);
    OneRDM b = contract_to_1rdm(scaled);
    CHECK((0.35 * a.data - b.data).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("contraction requires two particles") {
    TwoRDM d(4, 1);
    CHECK_THROWS_AS(contract_to_1rdm(d), std::invalid_argument);
}

TEST_CASE("map_Q constant part is the antisymmetrized identity") {
    TwoRDM zero(4, 2);
    TwoRDM q = map_Q(zero);
    CHECK((q.packed() - Eigen::MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("map_Q of the filled sea vanishes") {
    auto basis = build_basis(4, 4, 0);
    Eigen::VectorXd amps = Eigen::VectorXd::Ones(1);
    TwoRDM d = rdm2_from_state({basis, amps});
    TwoRDM q = map_Q(d);
    CHECK(q.packed().lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("map_G trivial values") {
    SUBCASE("zero input gives zero G") {
        TwoRDM zero(4, 2);
        GMatrix g = map_G(zero);
        CHECK(g.data.lpNorm<Eigen::Infinity>() <= 1e-14);
    }
    SUBCASE("slater determinant diagonal element") {
        auto basis = build_basis(4, 2, 0);
        Eigen::VectorXd amps = Eigen::VectorXd::Zero(basis->size());
        amps[basis->index_of(0b0011)] = 1.0;
        TwoRDM d = rdm2_from_state({basis, amps});
        GMatrix g = map_G(d);
        CHECK(g.element(0, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("maps agree with the direct operator evaluation") {
    // the normative convention test: f_Q and f_G against the
    // operator-definition matrices, random states in several sectors
    for (auto [r, n, sz2] : std::vector<std::tuple<int, int, int>>{
             {4, 2, 0}, {6, 3, 1}, {8, 4, 0}}) {
        auto basis = build_basis(r, n, sz2);
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            FockState psi = oracle::random_state(basis, 500 + seed);
            TwoRDM d = rdm2_from_state(psi);
            TwoRDM q_direct = rdmQ_from_state(psi);
            GMatrix g_direct = rdmG_from_state(psi);
            TwoRDM q_mapped = map_Q(d);
            GMatrix g_mapped = map_G(d);
            CHECK((q_direct.packed() - q_mapped.packed()).lpNorm<Eigen::Infinity>() <=
                  1e-10);
            CHECK((g_direct.data - g_mapped.data).lpNorm<Eigen::Infinity>() <= 1e-10);
        }
    }
}

TEST_CASE("maps are affine-linear on convex combinations") {
    auto basis = build_basis(6, 3, 1);
    TwoRDM d1 = rdm2_from_state(oracle::random_state(basis, 31));
    TwoRDM d2 = rdm2_from_state(oracle::random_state(basis, 32));
    double alpha = 0.3;
    TwoRDM mix(6, 3, (alpha * d1.packed() + (1 - alpha) * d2.packed()).eval());
    TwoRDM q_mix = map_Q(mix);
    Eigen::MatrixXd q_expected =
        alpha * map_Q(d1).packed() + (1 - alpha) * map_Q(d2).packed();
    CHECK((q_mix.packed() - q_expected).lpNorm<Eigen::Infinity>() <= 1e-12);
    GMatrix g_mix = map_G(mix);
    Eigen::MatrixXd g_expected = alpha * map_G(d1).data + (1 - alpha) * map_G(d2).data;
    CHECK((g_mix.data - g_expected).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("spectrum summaries") {
    SUBCASE("packed identity") {
        TwoRDM d(4, 2, Eigen::MatrixXd::Identity(6, 6));
        auto s = min_eigenvalues(d);
        CHECK(s.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(s.negative_count == 0);
    }
    SUBCASE("one negative mode") {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
        m(0, 0) = 1.0;
        m(1, 1) = -0.2;
        auto s = min_eigenvalues(TwoRDM(4, 2, m));
        CHECK(s.min_eigenvalue == doctest::Approx(-0.2).epsilon(1e-14));
        CHECK(s.negative_count == 1);
    }
}

TEST_CASE("deviation norms") {
    SUBCASE("identical inputs") {
        auto basis = build_basis(4, 2, 0);
        TwoRDM d = rdm2_from_state(oracle::random_state(basis, 8));
        auto n = deviation_norms(d, d);
        CHECK(n.frobenius == 0.0);
        CHECK(n.nuclear == 0.0);
    }
    SUBCASE("packed diagonal difference, reported in the full convention") {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
        m(0, 0) = 0.5;
        m(1, 1) = -0.3;
        TwoRDM a(4, 2, m);
        TwoRDM b(4, 2);
        auto n = deviation_norms(a, b);
        CHECK(n.nuclear == doctest::Approx(2.0 * 0.8).epsilon(1e-14));
        CHECK(n.frobenius == doctest::Approx(2.0 * std::sqrt(0.34)).epsilon(1e-14));
    }
    SUBCASE("dimension mismatch") {
        TwoRDM a(4, 2), b(6, 2);
        CHECK_THROWS_AS(deviation_norms(a, b), std::invalid_argument);
    }
}

TEST_CASE("full-index norms are twice the packed norms") {
    auto basis = build_basis(6, 3, 1);
    TwoRDM d = rdm2_from_state(oracle::random_state(basis, 77));
    double full = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            for (int k = 0; k < 6; ++k)
                for (int l = 0; l < 6; ++l) full += std::pow(d.element(i, j, k, l), 2);
    CHECK(std::sqrt(full) == doctest::Approx(2.0 * d.packed().norm()).epsilon(1e-12));
    double full_trace = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) full_trace += d.element(i, j, i, j);
    CHECK(full_trace == doctest::Approx(d.trace()).epsilon(1e-12));
}

TEST_CASE("ingest symmetrization records the asymmetry") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    m(0, 1) = 1.0; // skew part has norm sqrt(2)/2
    TwoRDM d = TwoRDM::from_packed(4, 2, m);
    CHECK(d.packed()(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.packed()(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(d.ingest_asymmetry() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("2-RDM json round trip is exact") {
    auto basis = build_basis(6, 3, 1);
    TwoRDM d = rdm2_from_state(oracle::random_state(basis, 55));
    std::stringstream buf;
    save_rdm_json(d, buf);
    TwoRDM back = load_rdm_json(buf);
    CHECK(back.r() == d.r());
    CHECK(back.particles() == d.particles());
    CHECK((back.packed() - d.packed()).lpNorm<Eigen::Infinity>() == 0.0);
}
