#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fermred/density.hpp"
#include "fermred/particle_reduce.hpp"
#include "fermred/sample.hpp"

using namespace fermred;

namespace {

Mat one_rdm_closed(const std::array<cplx, 4>& c) {
    Mat m(2, 2);
    m(0, 0) = std::norm(c[2]) + std::norm(c[3]);
    m(0, 1) = c[1] * std::conj(c[2]);
    m(1, 0) = std::conj(c[1]) * c[2];
    m(1, 1) = std::norm(c[1]) + std::norm(c[3]);
    return m;
}

// the image of a 2-mode projector under the one-particle trace map,
// written out entrywise
Mat phi_two_mode_closed(const std::array<cplx, 4>& c) {
    Mat m(4, 4);
    m(0, 0) = std::norm(c[1]) + std::norm(c[2]);
    m(0, 1) = c[2] * std::conj(c[3]);
    m(0, 2) = -c[1] * std::conj(c[3]);
    m(1, 0) = std::conj(c[2]) * c[3];
    m(1, 1) = std::norm(c[3]);
    m(2, 0) = -std::conj(c[1]) * c[3];
    m(2, 2) = std::norm(c[3]);
    return m;
}

} // namespace

TEST_CASE("tuple enumeration is colexicographic") {
    const auto t31 = mode_tuples_colex(3, 1);
    CHECK(t31 == std::vector<std::uint32_t>{0b001, 0b010, 0b100});
    const auto t32 = mode_tuples_colex(3, 2);
    CHECK(t32 == std::vector<std::uint32_t>{0b011, 0b101, 0b110});
    CHECK(mode_tuples_colex(4, 2).size() == 6);
}

TEST_CASE("one-particle reduction of a general 2-mode state") {
    Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const FockVector psi = sample_general(2, rng);
        const std::array<cplx, 4> c{psi.amp[0], psi.amp[1], psi.amp[2], psi.amp[3]};
        const PRdmMatrix one = rdm_matrix(psi, 1);
        CHECK(Mat::max_abs_diff(one.m, one_rdm_closed(c)) <= 1e-12);

        const auto occ = natural_occupations(psi);
        CHECK(occ[0] == doctest::Approx(1.0 - std::norm(c[0])).epsilon(1e-10));
        CHECK(occ[1] == doctest::Approx(std::norm(c[3])).epsilon(1e-10));
    }
}

TEST_CASE("trace counts occupied tuples") {
    // on a basis state the trace is the number of occupied p-subsets
    FockVector psi(4);
    psi.amp[0b1011] = 1.0; // three particles
    CHECK(rdm_matrix(psi, 1).trace_real() == doctest::Approx(3.0));
    CHECK(rdm_matrix(psi, 2).trace_real() == doctest::Approx(3.0));
    CHECK(rdm_matrix(psi, 3).trace_real() == doctest::Approx(1.0));
    CHECK(rdm_matrix(psi, 4).trace_real() == doctest::Approx(0.0));
}

TEST_CASE("optional unit-trace copy") {
    Rng rng(60);
    const FockVector psi = sample_general(3, rng);
    const PRdmMatrix one = rdm_matrix(psi, 1);
    const Mat unit = one.normalized();
    CHECK(unit.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    FockVector vac(2);
    vac.amp[0] = 1.0;
    CHECK_THROWS_AS(rdm_matrix(vac, 1).normalized(), std::invalid_argument);
}

TEST_CASE("full-order reduction keeps only the filled component") {
    Rng rng(43);
    for (int n = 2; n <= 4; ++n) {
        const FockVector psi = sample_general(n, rng);
        const PRdmMatrix full = rdm_matrix(psi, n);
        CHECK(full.m.rows() == 1);
        CHECK(full.m(0, 0).real() ==
              doctest::Approx(std::norm(psi.amp[fock_dim(n) - 1])).epsilon(1e-12));
    }
}

TEST_CASE("reduction at the particle number has rank one") {
    Rng rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        const FockVector psi = sample_fixed_n(3, 2, rng);
        const PRdmMatrix top = rdm_matrix(psi, 2);
        const auto vals = eigenvalues(top.m);
        CHECK(vals[0] >= -1e-10);
        for (std::size_t i = 1; i < vals.size(); ++i)
            CHECK(std::abs(vals[i]) <= 1e-10); // rank <= 1
        // the single eigenvalue is the total weight on the 2-particle sector (all of it)
        CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("operator form lives on the p-particle sector") {
    Rng rng(45);
    const FockVector psi = sample_general(3, rng);
    for (int p = 1; p <= 3; ++p) {
        const Mat op = rdm_operator(psi, p);
        for (std::size_t i = 0; i < op.rows(); ++i)
            for (std::size_t j = 0; j < op.cols(); ++j) {
                if (weight(static_cast<std::uint32_t>(i)) == p &&
                    weight(static_cast<std::uint32_t>(j)) == p)
                    continue;
                CHECK(op(i, j) == cplx(0.0, 0.0));
            }
    }
}

TEST_CASE("operator and tuple forms agree in trace and nonzero spectrum") {
    Rng rng(46);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        const FockVector psi = sample_general(n, rng);
        const int p = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        const PRdmMatrix lam = rdm_matrix(psi, p);
        const Mat op = rdm_operator(psi, p);
        CHECK(std::abs(op.trace() - lam.m.trace()) <= 1e-12);

        SpectrumReport a, b;
        a.values = eigenvalues(lam.m);
        b.values = eigenvalues(op);
        const auto sa = a.stripped(1e-10);
        const auto sb = b.stripped(1e-10);
        const auto cmp = spectra_equal(sa, sb, 1e-10, true);
        CHECK(cmp.equal);
    }
}

TEST_CASE("operator form against the dense matrix-product construction") {
    // independent slow path: multiply full creation/annihilation/vacancy
    // matrices for every term
    Rng rng(47);
    const int n = 3;
    const FockVector psi = sample_general(n, rng);
    for (int p = 1; p <= n; ++p) {
        const PRdmMatrix lam = rdm_matrix(psi, p);
        const std::size_t d = fock_dim(n);
        Mat slow(d, d);
        const auto& tuples = lam.tuples;
        for (std::size_t i = 0; i < tuples.size(); ++i)
            for (std::size_t j = 0; j < tuples.size(); ++j) {
                const cplx coeff = lam.m(i, j);
                if (coeff == cplx(0.0, 0.0)) continue;
                Mat term = Mat::identity(d);
                for (int s = 1; s <= n; ++s)
                    if (tuples[j] & (1u << (s - 1))) term = term * creation_op(s, n);
                for (int s = n; s >= 1; --s)
                    if (tuples[i] & (1u << (s - 1))) term = term * annihilation_op(s, n);
                for (int s = 1; s <= n; ++s) {
                    if ((tuples[i] | tuples[j]) & (1u << (s - 1))) continue;
                    term = term * (annihilation_op(s, n) * creation_op(s, n));
                }
                slow += Mat(coeff * term);
            }
        CHECK(Mat::max_abs_diff(slow, rdm_operator(psi, p)) <= 1e-12);
    }
}

TEST_CASE("particle-trace map basics") {
    SUBCASE("vacuum maps to zero") {
        FockVector vac(3);
        vac.amp[0] = 1.0;
        const Mat out = phi_map(lambda_from_state(vac).m, 3);
        CHECK(out.max_abs() == 0.0);
    }
    SUBCASE("two-mode image matches the closed form") {
        Rng rng(48);
        for (int trial = 0; trial < 30; ++trial) {
            const FockVector psi = sample_general(2, rng);
            const std::array<cplx, 4> c{psi.amp[0], psi.amp[1], psi.amp[2], psi.amp[3]};
            const Mat got = phi_map(lambda_from_state(psi).m, 2);
            CHECK(Mat::max_abs_diff(got, phi_two_mode_closed(c)) <= 1e-12);
            // its nonzero spectrum matches the 1-particle occupation spectrum
            SpectrumReport sp;
            sp.values = eigenvalues(got);
            const auto stripped = sp.stripped(1e-10);
            const auto occ = natural_occupations(psi);
            REQUIRE(stripped.values.size() <= 2);
            for (std::size_t i = 0; i < stripped.values.size(); ++i)
                CHECK(stripped.values[i] == doctest::Approx(occ[i]).epsilon(1e-10));
        }
    }
    SUBCASE("sector lowering") {
        Rng rng(49);
        for (int n = 2; n <= 5; ++n) {
            const int N = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            const FockVector psi = sample_fixed_n(n, N, rng);
            const Mat img = phi_map(lambda_from_state(psi).m, n);
            for (std::size_t i = 0; i < img.rows(); ++i)
                for (std::size_t j = 0; j < img.cols(); ++j) {
                    if (img(i, j) == cplx(0.0, 0.0)) continue;
                    CHECK(weight(static_cast<std::uint32_t>(i)) == N - 1);
                    CHECK(weight(static_cast<std::uint32_t>(j)) == N - 1);
                }
        }
    }
    SUBCASE("trace tracks the expected particle number") {
        Rng rng(50);
        for (int n = 2; n <= 5; ++n) {
            const FockVector psi = sample_general(n, rng);
            const Mat rho = lambda_from_state(psi).m;
            double expected = 0.0;
            for (std::size_t i = 0; i < psi.dim(); ++i)
                expected += std::norm(psi.amp[i]) * weight(static_cast<std::uint32_t>(i));
            CHECK(phi_map(rho, n).trace().real() == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("iterated map") {
    Rng rng(51);
    const FockVector psi = sample_general(3, rng);
    const Mat rho = lambda_from_state(psi).m;
    SUBCASE("zeroth power is the identity") {
        CHECK(Mat::max_abs_diff(phi_pow(rho, 3, 0), rho) == 0.0);
    }
    SUBCASE("composition") {
        CHECK(Mat::max_abs_diff(phi_pow(rho, 3, 2), phi_map(phi_map(rho, 3), 3)) == 0.0);
    }
    SUBCASE("more removals than modes annihilate everything") {
        CHECK(phi_pow(rho, 3, 4).max_abs() == 0.0);
    }
}

TEST_CASE("fixed-number reduction identity") {
    SUBCASE("filled three-mode state needs the removal-count factor") {
        FockVector psi(3);
        psi.amp[0b111] = 1.0;
        const FixedNReport rep = check_fixed_n_reduction(psi, 1);
        CHECK(rep.N == 3);
        CHECK(rep.factor == doctest::Approx(2.0)); // (N-p)! = 2!
        CHECK(rep.max_gap <= 1e-12);
        CHECK(rep.pass);
    }
    SUBCASE("random fixed-number states at every order") {
        Rng rng(52);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng.next_below(4));
            const int N = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            const FockVector psi = sample_fixed_n(n, N, rng);
            for (int p = 1; p <= N; ++p) {
                const FixedNReport rep = check_fixed_n_reduction(psi, p);
                CHECK(rep.max_gap <= 1e-12);
            }
        }
    }
    SUBCASE("p equal to the particle number compares against the projector") {
        Rng rng(53);
        const FockVector psi = sample_fixed_n(3, 2, rng);
        const FixedNReport rep = check_fixed_n_reduction(psi, 2);
        CHECK(rep.factor == 1.0);
        CHECK(rep.max_gap <= 1e-12);
    }
    SUBCASE("complementary orders share their nonzero spectra") {
        // for a fixed-N pure state the p- and (N-p)-order reductions are
        // equispectral; combined with the fixed-N identity this makes the
        // p-order reduction and the p-fold map equispectral as well
        Rng rng(54);
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 4, N = 3;
            const FockVector psi = sample_fixed_n(n, N, rng);
            for (int p = 1; p <= N - 1; ++p) {
                SpectrumReport sl, sh;
                sl.values = eigenvalues(rdm_matrix(psi, p).m);
                sh.values = eigenvalues(rdm_matrix(psi, N - p).m);
                const auto cmp =
                    spectra_equal(sl.stripped(1e-10), sh.stripped(1e-10), 1e-9, true);
                CHECK(cmp.equal);
                const ConjectureTrial t = conjecture_trial(psi, p, {});
                CHECK(t.verdict == Verdict::Agree);
            }
        }
    }
    SUBCASE("mixed-weight support is rejected") {
        FockVector psi(2);
        psi.amp[0b00] = std::sqrt(0.5);
        psi.amp[0b01] = std::sqrt(0.5);
        CHECK_THROWS_AS(check_fixed_n_reduction(psi, 1), std::domain_error);
    }
}

TEST_CASE("natural occupations") {
    SUBCASE("basis state occupations are its bits") {
        FockVector psi(4);
        psi.amp[0b1010] = 1.0;
        const auto occ = natural_occupations(psi);
        CHECK(occ[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(occ[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(occ[2]) <= 1e-12);
        CHECK(std::abs(occ[3]) <= 1e-12);
    }
    SUBCASE("odd three-mode family pins the top occupation") {
        Rng rng(55);
        for (int trial = 0; trial < 20; ++trial) {
            const FockVector psi = sample_parity(3, false, rng);
            const auto occ = natural_occupations(psi);
            CHECK(occ[0] == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(occ[1] ==
                  doctest::Approx(std::norm(psi.amp[0b111])).epsilon(1e-10));
            CHECK(occ[2] ==
                  doctest::Approx(std::norm(psi.amp[0b111])).epsilon(1e-10));
        }
    }
    SUBCASE("occupations stay within the exclusion bounds") {
        Rng rng(56);
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 1 + static_cast<int>(rng.next_below(5));
            const auto occ = natural_occupations(sample_general(n, rng));
            for (double v : occ) {
                CHECK(v >= -1e-10);
                CHECK(v <= 1.0 + 1e-10);
            }
        }
    }
}

TEST_CASE("superselection constraints on occupations") {
    Rng rng(57);
    SUBCASE("even two-mode states have equal occupations") {
        for (int trial = 0; trial < 20; ++trial) {
            const FockVector psi = sample_parity(2, true, rng);
            const PauliReport rep = pauli_constraint_check(psi, 1e-10);
            CHECK(rep.asserted);
            CHECK(rep.pass);
        }
    }
    SUBCASE("odd two-mode states empty the second occupation") {
        for (int trial = 0; trial < 20; ++trial) {
            const FockVector psi = sample_parity(2, false, rng);
            const PauliReport rep = pauli_constraint_check(psi, 1e-10);
            CHECK(rep.asserted);
            CHECK(rep.pass);
            CHECK(rep.occupations[1] <= 1e-10);
        }
    }
    SUBCASE("odd three-mode states") {
        for (int trial = 0; trial < 20; ++trial) {
            const FockVector psi = sample_parity(3, false, rng);
            const PauliReport rep = pauli_constraint_check(psi, 1e-10);
            CHECK(rep.asserted);
            CHECK(rep.pass);
        }
    }
    SUBCASE("other shapes report without asserting") {
        const FockVector psi = sample_parity(4, true, rng);
        const PauliReport rep = pauli_constraint_check(psi, 1e-10);
        CHECK(!rep.asserted);
        CHECK(rep.occupations.size() == 4);
    }
    SUBCASE("mixed parity is a precondition error") {
        FockVector psi(2);
        psi.amp = {0.5, 0.5, 0.5, 0.5};
        CHECK_THROWS_AS(pauli_constraint_check(psi, 1e-10), std::domain_error);
    }
}

TEST_CASE("spectrum-coincidence trials") {
    Rng rng(58);
    SUBCASE("two-mode single-particle case agrees") {
        for (int trial = 0; trial < 20; ++trial) {
            const FockVector psi = sample_general(2, rng);
            const ConjectureTrial t = conjecture_trial(psi, 1, {});
            CHECK(t.verdict == Verdict::Agree);
            CHECK(t.scale == 1.0);
        }
    }
    SUBCASE("all orders agree through four modes") {
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 2 + static_cast<int>(rng.next_below(3));
            const FockVector psi = sample_general(n, rng);
            for (int p = 1; p <= n; ++p) {
                const ConjectureTrial t = conjecture_trial(psi, p, {});
                CHECK(t.verdict == Verdict::Agree);
                CHECK(t.max_gap <= 1e-8);
            }
        }
    }
    SUBCASE("five-mode trials run and are recorded without assertion") {
        const FockVector psi = sample_general(5, rng);
        const ConjectureTrial t = conjecture_trial(psi, 2, {});
        CHECK(t.n == 5);
        CHECK((t.verdict == Verdict::Agree || t.verdict == Verdict::Disagree ||
               t.verdict == Verdict::Inconclusive));
    }
    SUBCASE("verdict bands") {
        ConjectureOptions opts;
        opts.agree_tol = 1e-8;
        opts.disagree_floor = 1e-4;
        const FockVector psi = sample_general(3, rng);
        const ConjectureTrial t = conjecture_trial(psi, 1, opts);
        if (t.max_gap <= opts.agree_tol) CHECK(t.verdict == Verdict::Agree);
        if (t.max_gap >= opts.disagree_floor) CHECK(t.verdict == Verdict::Disagree);
    }
}

TEST_CASE("argument validation") {
    Rng rng(59);
    const FockVector psi = sample_general(3, rng);
    CHECK_THROWS_AS(rdm_matrix(psi, 0), std::invalid_argument);
    CHECK_THROWS_AS(rdm_matrix(psi, 4), std::invalid_argument);
    CHECK_THROWS_AS(phi_pow(lambda_from_state(psi).m, 3, -1), std::invalid_argument);
}
