#include <algorithm>
#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "sijc/dressed.hpp"
#include "sijc/linalg.hpp"
#include "test_util.hpp"

using sijc::Branch;
using sijc::PotentialFamily;
using namespace sijc::dressed;

namespace {

const PotentialFamily kWell = PotentialFamily::morse(25.0, 1.0, 0.5);

std::vector<double> apply(const DressedMatrix& m, const std::vector<double>& v) {
    std::vector<double> out(m.dim, 0.0);
    for (std::size_t i = 0; i < m.dim; ++i)
        for (std::size_t j = 0; j < m.dim; ++j) out[i] += m.at(i, j) * v[j];
    return out;
}

// random well guaranteed to hold at least min_levels bound excited levels
PotentialFamily deep_morse(Lcg& gen, int min_levels) {
    for (;;) {
        const double v0 = gen.in(20.0, 80.0);
        const double lambda = gen.in(0.4, 1.5);
        const double mass = gen.in(0.3, 2.0);
        const double hbar = gen.in(0.5, 2.0);
        const double step = hbar * lambda / std::sqrt(2.0 * mass);
        const double a1 = std::sqrt(v0) - 0.5 * step;
        if (a1 > (static_cast<double>(min_levels) + 0.2) * step)
            return PotentialFamily::morse(v0, lambda, mass, hbar);
    }
}

}  // namespace

TEST_CASE("basis indexing interleaves the two channels") {
    const DressedBasis basis{3};
    CHECK(basis.dimension() == 9);
    CHECK(DressedBasis::index_v(0) == 0);
    CHECK(DressedBasis::index_u(0) == 1);
    CHECK(DressedBasis::index_v(1) == 2);
    CHECK(DressedBasis::index_u(3) == 7);
    CHECK(DressedBasis::index_v(4) == 8);
    const std::vector<std::string> labels = basis.labels();
    REQUIRE(labels.size() == 9);
    CHECK(labels.front() == "v0");
    CHECK(labels[1] == "u0");
    CHECK(labels.back() == "v4");
}

TEST_CASE("raising matrix carries the square-root ladder") {
    const DressedMatrix bp = b_plus_matrix(kWell, 2);
    REQUIRE(bp.dim == 4);
    CHECK(bp.at(1, 0) == Catch::Approx(std::sqrt(8.0)).margin(1e-13));
    CHECK(bp.at(2, 1) == Catch::Approx(std::sqrt(14.0)).margin(1e-13));
    CHECK(bp.at(3, 2) == Catch::Approx(std::sqrt(18.0)).margin(1e-13));
    // everything off the first subdiagonal is zero, including the top column
    for (std::size_t i = 0; i < bp.dim; ++i)
        for (std::size_t j = 0; j < bp.dim; ++j)
            if (i != j + 1) CHECK(bp.at(i, j) == 0.0);

    const DressedMatrix hp = b_plus_matrix(PotentialFamily::harmonic(1.0, 1.0), 3);
    REQUIRE(hp.dim == 5);
    for (int m = 0; m < 4; ++m)
        CHECK(hp.at(static_cast<std::size_t>(m + 1), static_cast<std::size_t>(m)) ==
              Catch::Approx(std::sqrt(static_cast<double>(m + 1))).margin(1e-13));

    CHECK_THROWS_AS(b_plus_matrix(kWell, 4), sijc::LevelOutOfRange);
}

TEST_CASE("coupling matrix is symmetric with one bond per pair") {
    const DressedMatrix s = s_matrix(kWell, 3);
    REQUIRE(s.dim == 9);
    const std::vector<double> eps = {8.0, 14.0, 18.0, 20.0};
    for (int m = 0; m <= 3; ++m) {
        const std::size_t iu = DressedBasis::index_u(m);
        const std::size_t iv = DressedBasis::index_v(m + 1);
        CHECK(s.at(iu, iv) ==
              Catch::Approx(std::sqrt(eps[static_cast<std::size_t>(m)])).margin(1e-13));
        CHECK(s.at(iv, iu) == s.at(iu, iv));
    }
    // the lone ground state row is entirely decoupled
    for (std::size_t j = 0; j < s.dim; ++j) CHECK(s.at(0, j) == 0.0);
    // symmetric() passes the strict construction check
    CHECK_NOTHROW(s.symmetric());
}

TEST_CASE("squared coupling is diagonal with doubled energies") {
    const DressedMatrix s2 = s_squared_matrix(kWell, 3);
    const DressedMatrix s = s_matrix(kWell, 3);
    const DressedMatrix prod = multiply(s, s);
    for (std::size_t i = 0; i < s2.dim; ++i)
        for (std::size_t j = 0; j < s2.dim; ++j)
            CHECK(std::abs(s2.at(i, j) - prod.at(i, j)) <= 1e-13);

    CHECK(s2.at(0, 0) == 0.0);
    const std::vector<double> eps = {8.0, 14.0, 18.0, 20.0};
    for (int m = 0; m <= 3; ++m) {
        const double e = eps[static_cast<std::size_t>(m)];
        CHECK(s2.at(DressedBasis::index_u(m), DressedBasis::index_u(m)) ==
              Catch::Approx(e).epsilon(1e-13));
        CHECK(s2.at(DressedBasis::index_v(m + 1), DressedBasis::index_v(m + 1)) ==
              Catch::Approx(e).epsilon(1e-13));
    }
    for (std::size_t i = 0; i < s2.dim; ++i)
        for (std::size_t j = 0; j < s2.dim; ++j)
            if (i != j) CHECK(std::abs(s2.at(i, j)) <= 1e-13);
}

TEST_CASE("coupling matrix spectrum is the signed square-root ladder") {
    const DressedMatrix s = s_matrix(kWell, 3);
    const sijc::linalg::EigenDecomposition eig =
        sijc::linalg::eig_symmetric(s.symmetric(), false);
    std::vector<double> want;
    for (const double e : {8.0, 14.0, 18.0, 20.0}) {
        want.push_back(-std::sqrt(e));
        want.push_back(std::sqrt(e));
    }
    want.push_back(0.0);
    std::sort(want.begin(), want.end());
    REQUIRE(eig.values.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(eig.values[i] == Catch::Approx(want[i]).margin(1e-10));
}

TEST_CASE("assembled operator is block diagonal in the pair structure") {
    Lcg gen(31);
    for (int trial = 0; trial < 8; ++trial) {
        const PotentialFamily fam = trial % 2 == 0 ? kWell : deep_morse(gen, 4);
        const int n_max = 1 + gen.index(2);
        const double omega = gen.in(0.0, 4.0);
        const DressedMatrix h = h_matrix(fam, omega, n_max);
        CHECK(h.at(0, 0) == 0.0);
        for (std::size_t j = 1; j < h.dim; ++j) CHECK(std::abs(h.at(0, j)) <= 1e-13);
        for (int m = 0; m <= n_max; ++m) {
            const std::size_t iu = DressedBasis::index_u(m);
            const std::size_t iv = DressedBasis::index_v(m + 1);
            const double eps = energy_level(fam, m + 1).epsilon;
            const double g = std::sqrt(fam.hbar() * omega * eps);
            CHECK(h.at(iu, iu) == Catch::Approx(eps).epsilon(1e-13));
            CHECK(h.at(iv, iv) == Catch::Approx(eps).epsilon(1e-13));
            CHECK(h.at(iu, iv) == Catch::Approx(g).epsilon(1e-13).margin(1e-13));
            // nothing couples distinct pairs
            for (std::size_t j = 0; j < h.dim; ++j)
                if (j != iu && j != iv) {
                    CHECK(std::abs(h.at(iu, j)) <= 1e-13);
                    CHECK(std::abs(h.at(iv, j)) <= 1e-13);
                }
        }
        CHECK_THROWS_AS(h_matrix(fam, -1.0, n_max), sijc::NegativeDriveStrength);
    }
}

TEST_CASE("dressed states diagonalize both operators") {
    const double omega = 2.0;
    const DressedMatrix s = s_matrix(kWell, 3);
    const DressedMatrix h = h_matrix(kWell, omega, 3);
    const std::vector<DressedState> states = dressed_states(kWell, 3);
    REQUIRE(states.size() == 8);  // minus and plus for m = 0..3
    for (const DressedState& st : states) {
        double norm = 0.0;
        for (const double c : st.coefficients) norm += c * c;
        CHECK(std::sqrt(norm) == Catch::Approx(1.0).margin(1e-14));

        const double eps = energy_level(kWell, st.m + 1).epsilon;
        const double sign = st.branch == Branch::Plus ? 1.0 : -1.0;
        const std::vector<double> sv = apply(s, st.coefficients);
        const std::vector<double> hv = apply(h, st.coefficients);
        const double se = sign * std::sqrt(eps);
        const double he = jc_eigenvalue(kWell, omega, st.m, st.branch);
        for (std::size_t i = 0; i < s.dim; ++i) {
            CHECK(sv[i] == Catch::Approx(se * st.coefficients[i]).margin(1e-12));
            CHECK(hv[i] == Catch::Approx(he * st.coefficients[i]).margin(1e-12));
        }
    }
    // distinct states are orthogonal
    for (std::size_t a = 0; a < states.size(); ++a)
        for (std::size_t b = a + 1; b < states.size(); ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < states[a].coefficients.size(); ++i)
                dot += states[a].coefficients[i] * states[b].coefficients[i];
            CHECK(std::abs(dot) <= 1e-14);
        }
}

TEST_CASE("zero eigenvector lives on the lone ground entry") {
    const DressedMatrix h = h_matrix(kWell, 2.0, 3);
    sijc::linalg::HouseholderReduction red(h.symmetric());
    const std::vector<double> v = red.eigenvector(0.0);
    CHECK(std::abs(v[0]) == Catch::Approx(1.0).margin(1e-10));
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(std::abs(v[i]) <= 1e-10);
}

TEST_CASE("commutator diagnostic recovers the remainders") {
    const CommutatorDiagnostic morse = commutator_diagnostic(kWell, 2);
    REQUIRE(morse.diagonal.size() == 3);
    CHECK(morse.diagonal[0] == Catch::Approx(8.0).margin(1e-12));
    CHECK(morse.diagonal[1] == Catch::Approx(6.0).margin(1e-12));
    CHECK(morse.diagonal[2] == Catch::Approx(4.0).margin(1e-12));
    CHECK(morse.truncated_top == Catch::Approx(-18.0).margin(1e-12));

    const CommutatorDiagnostic ho =
        commutator_diagnostic(PotentialFamily::harmonic(1.0, 1.0), 3);
    for (const double d : ho.diagonal) CHECK(d == Catch::Approx(1.0).margin(1e-12));
    CHECK(ho.truncated_top == Catch::Approx(-4.0).margin(1e-12));

    const PotentialFamily sc = PotentialFamily::scaling(1.0, 0.5);
    const CommutatorDiagnostic scd = commutator_diagnostic(sc, 2);
    CHECK(scd.diagonal[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(scd.diagonal[1] == Catch::Approx(0.5).margin(1e-12));
    CHECK(scd.diagonal[2] == Catch::Approx(0.25).margin(1e-12));
    CHECK(scd.truncated_top == Catch::Approx(-1.75).margin(1e-12));

    // the retained diagonal is exactly the remainder sequence
    Lcg gen(32);
    for (int trial = 0; trial < 10; ++trial) {
        const PotentialFamily fam = PotentialFamily::scaling(gen.in(0.2, 4.0), gen.in(0.1, 0.9));
        const CommutatorDiagnostic d = commutator_diagnostic(fam, 4);
        for (std::size_t m = 0; m < d.diagonal.size(); ++m)
            CHECK(d.diagonal[m] ==
                  Catch::Approx(remainder(fam, static_cast<int>(m) + 1)).epsilon(1e-12));
    }
}

TEST_CASE("numeric dressed spectrum hits the closed form") {
    const DressedSpectrum ref = diagonalize_dressed(kWell, 2.0, 3);
    CHECK(std::abs(ref.ground) <= 1e-10);
    CHECK(ref.max_abs_deviation <= 1e-10);
    REQUIRE(ref.levels.size() == 4);
    CHECK(ref.levels[0].e_minus == Catch::Approx(4.0).margin(1e-10));
    CHECK(ref.levels[0].e_plus == Catch::Approx(12.0).margin(1e-10));
    CHECK(ref.levels[1].e_minus == Catch::Approx(14.0 - std::sqrt(28.0)).margin(1e-10));
    CHECK(ref.levels[3].e_plus == Catch::Approx(20.0 + std::sqrt(40.0)).margin(1e-10));

    Lcg gen(33);
    for (int trial = 0; trial < 10; ++trial) {
        const PotentialFamily fam = deep_morse(gen, 2);
        const int cap = *level_count(fam);
        const int n_max = std::min(cap - 1, 1 + gen.index(4));
        const DressedSpectrum spec = diagonalize_dressed(fam, gen.in(0.0, 4.0), n_max);
        CHECK(spec.max_abs_deviation <= 1e-10);
    }
}

TEST_CASE("zero drive leaves exact doublets in the numeric spectrum") {
    const DressedSpectrum spec = diagonalize_dressed(kWell, 0.0, 3);
    CHECK(spec.max_abs_deviation <= 1e-10);
    for (const sijc::SpectrumRow& row : spec.levels)
        CHECK(row.e_minus == Catch::Approx(row.e_plus).margin(1e-10));
}

TEST_CASE("mismatched operands are rejected") {
    CHECK_THROWS_AS(multiply(b_plus_matrix(kWell, 2), s_matrix(kWell, 2)),
                    sijc::DimensionMismatch);
}
