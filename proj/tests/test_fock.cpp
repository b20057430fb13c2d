#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fermred/density.hpp"
#include "fermred/fock.hpp"
#include "fermred/sample.hpp"

using namespace fermred;

namespace {

FockVector basis_state(int n, std::uint32_t idx) {
    FockVector v(n);
    v.amp[idx] = 1.0;
    return v;
}

} // namespace

TEST_CASE("creation operator single mode") {
    const Mat ad = creation_op(1, 1);
    CHECK(ad(1, 0) == cplx(1.0, 0.0));
    CHECK(ad(0, 0) == cplx(0.0, 0.0));
    CHECK(ad(0, 1) == cplx(0.0, 0.0));
    CHECK(ad(1, 1) == cplx(0.0, 0.0));
}

TEST_CASE("creation operator carries the string phase") {
    // <11| a2+ |10> = -1, <01| a2+ |00> = +1
    const Mat ad = creation_op(2, 2);
    CHECK(ad(3, 2) == cplx(-1.0, 0.0));
    CHECK(ad(1, 0) == cplx(1.0, 0.0));
    CHECK(ad.max_abs() == 1.0);
    int nonzeros = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (ad(i, j) != cplx(0.0, 0.0)) ++nonzeros;
    CHECK(nonzeros == 2);
}

TEST_CASE("creation on |110> gives +|111>") {
    const FockVector in = basis_state(3, 0b110);
    const FockVector out = apply_ladder(in, {3, Ladder::Create});
    CHECK(out.amp[0b111] == cplx(1.0, 0.0));
    CHECK(out.norm2() == doctest::Approx(1.0));
}

TEST_CASE("annihilation is the adjoint") {
    for (int n = 1; n <= 4; ++n)
        for (int t = 1; t <= n; ++t)
            CHECK(Mat::max_abs_diff(annihilation_op(t, n), creation_op(t, n).adjoint()) == 0.0);
}

TEST_CASE("single mode ladder actions") {
    const Mat a = annihilation_op(1, 1);
    CHECK(a(0, 1) == cplx(1.0, 0.0)); // a|1> = |0>
    FockVector vac = basis_state(1, 0);
    CHECK(apply_ladder(vac, {1, Ladder::Annihilate}).norm2() == 0.0);
}

TEST_CASE("a2 |11> = -|10>") {
    const FockVector out = apply_ladder(basis_state(2, 0b11), {2, Ladder::Annihilate});
    CHECK(out.amp[0b10] == cplx(-1.0, 0.0));
}

TEST_CASE("anticommutation relations are exact") {
    for (int n = 1; n <= 6; ++n) {
        const CarReport rep = verify_car(n);
        CHECK(rep.max_dev_mixed == 0.0);
        CHECK(rep.max_dev_same == 0.0);
    }
}

TEST_CASE("creators square to zero") {
    for (int n = 1; n <= 5; ++n)
        for (int t = 1; t <= n; ++t) {
            const Mat ad = creation_op(t, n);
            CHECK((ad * ad).max_abs() == 0.0);
        }
}

TEST_CASE("occupation projectors resolve the identity") {
    for (int n = 1; n <= 4; ++n)
        for (int t = 1; t <= n; ++t) {
            const Mat ad = creation_op(t, n);
            const Mat a = ad.adjoint();
            const Mat sum = ad * a + a * ad;
            CHECK(Mat::max_abs_diff(sum, Mat::identity(fock_dim(n))) == 0.0);
        }
}

TEST_CASE("parity operator") {
    CHECK(Mat::max_abs_diff(parity_operator({}, 3), Mat::identity(8)) == 0.0);

    const Mat g = parity_operator({1}, 2);
    CHECK(g(0, 0) == cplx(1.0, 0.0));
    CHECK(g(1, 1) == cplx(1.0, 0.0));
    CHECK(g(2, 2) == cplx(-1.0, 0.0));
    CHECK(g(3, 3) == cplx(-1.0, 0.0));

    // involution for arbitrary subsets
    const Mat g2 = parity_operator({1, 3}, 4);
    CHECK(Mat::max_abs_diff(g2 * g2, Mat::identity(16)) == 0.0);
}

TEST_CASE("parity commutes with vacancy projectors and anticommutes with members") {
    const int n = 4;
    const Mat g = parity_operator({1, 2}, n);
    for (int t = 1; t <= n; ++t) {
        const Mat ad = creation_op(t, n);
        const Mat num = ad * ad.adjoint();
        CHECK(Mat::max_abs_diff(g * num, num * g) == 0.0);
        const Mat a = ad.adjoint();
        if (t <= 2) CHECK((g * a + a * g).max_abs() == 0.0);
        else CHECK(Mat::max_abs_diff(g * a, a * g) == 0.0);
    }
}

TEST_CASE("adjacent swap basics") {
    FockVector v = basis_state(2, 0b10);
    FockVector w = mode_swap(v, 1);
    CHECK(w.amp[0b01] == cplx(1.0, 0.0));

    v = basis_state(2, 0b11);
    w = mode_swap(v, 1);
    CHECK(w.amp[0b11] == cplx(-1.0, 0.0));
}

TEST_CASE("swap twice is the identity") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(4));
        const FockVector v = sample_general(n, rng);
        const int s = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
        const FockVector w = mode_swap(mode_swap(v, s), s);
        double dev = 0.0;
        for (std::size_t i = 0; i < v.dim(); ++i) dev = std::max(dev, std::abs(v.amp[i] - w.amp[i]));
        CHECK(dev == 0.0);
    }
}

TEST_CASE("relabeling conjugates the generators") {
    Rng rng(123);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(4)); // up to 5 modes
        std::vector<int> perm(n);
        for (int s = 1; s <= n; ++s) perm[s - 1] = s;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.next_below(static_cast<std::uint64_t>(i + 1))]);
        const Mat p = mode_permutation_unitary(perm, n);
        CHECK(Mat::max_abs_diff(p * p.adjoint(), Mat::identity(fock_dim(n))) <= 1e-14);
        for (int s = 1; s <= n; ++s) {
            const Mat lhs = p * annihilation_op(s, n) * p.adjoint();
            const Mat rhs = annihilation_op(perm[s - 1], n);
            CHECK(Mat::max_abs_diff(lhs, rhs) <= 1e-14);
        }
    }
}

TEST_CASE("front permutation") {
    const auto perm = front_permutation({1, 3}, 3);
    CHECK(perm == std::vector<int>{1, 3, 2});
    CHECK(is_permutation(perm, 3));
    CHECK_THROWS_AS(front_permutation({1, 1}, 3), std::invalid_argument);
}

TEST_CASE("monomial application") {
    Rng rng(5);
    const FockVector v = sample_general(3, rng);

    SUBCASE("empty product is the identity") {
        const FockVector w = apply_monomial(v, {});
        for (std::size_t i = 0; i < v.dim(); ++i) CHECK(w.amp[i] == v.amp[i]);
    }
    SUBCASE("number operator fixes an occupied basis state") {
        const FockVector in = basis_state(3, 0b100);
        const FockVector out =
            apply_monomial(in, {{1, Ladder::Create}, {1, Ladder::Annihilate}});
        CHECK(out.amp[0b100] == cplx(1.0, 0.0));
        CHECK(out.norm2() == doctest::Approx(1.0));
    }
    SUBCASE("a1 a2 |11> = -|00>") {
        const FockVector out = apply_monomial(
            basis_state(2, 0b11), {{1, Ladder::Annihilate}, {2, Ladder::Annihilate}});
        CHECK(out.amp[0b00] == cplx(-1.0, 0.0));
    }
    SUBCASE("matches the dense matrix product") {
        const std::vector<LadderOp> ops = {
            {2, Ladder::Create}, {1, Ladder::Annihilate}, {3, Ladder::Create}};
        Mat prod = Mat::identity(8);
        for (const auto& op : ops) {
            const Mat f = op.kind == Ladder::Create ? creation_op(op.mode, 3)
                                                    : annihilation_op(op.mode, 3);
            prod = prod * f;
        }
        const FockVector got = apply_monomial(v, ops);
        const auto want = mat_vec(prod, v.amp);
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(got.amp[i] - want[i]) <= 1e-15);
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(creation_op(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(creation_op(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(FockVector(13), std::invalid_argument);
    FockVector v(2);
    v.amp[0] = 1.0;
    CHECK_THROWS_AS(mode_swap(v, 2), std::invalid_argument);
    CHECK_THROWS_AS(mode_swap(v, 0), std::invalid_argument);
}
