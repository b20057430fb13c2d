#include "fermred/fock.hpp"

#include <algorithm>
#include <numeric>

namespace fermred {

FockVector apply_ladder(const FockVector& v, const LadderOp& op) {
    require_mode_index(op.mode, v.n, "mode index");
    FockVector out(v.n);
    const std::size_t d = v.dim();
    for (std::size_t i = 0; i < d; ++i) {
        const cplx c = v.amp[i];
        if (c == cplx(0.0, 0.0)) continue;
        const BasisImage im = apply_ladder_basis(static_cast<std::uint32_t>(i), v.n, op);
        if (im.alive) out.amp[im.idx] += (im.sign < 0 ? -c : c);
    }
    return out;
}

FockVector apply_monomial(const FockVector& v, const std::vector<LadderOp>& ops) {
    FockVector cur = v;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) cur = apply_ladder(cur, *it);
    return cur;
}

BasisImage monomial_on_basis(std::uint32_t idx, int n, const std::vector<LadderOp>& ops) {
    BasisImage cur{idx, 1, true};
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        const BasisImage im = apply_ladder_basis(cur.idx, n, *it);
        if (!im.alive) return {0, 1, false};
        cur.idx = im.idx;
        cur.sign *= im.sign;
    }
    return cur;
}

Mat creation_op(int t, int n) {
    require_mode_count(n);
    require_mode_index(t, n, "mode index");
    const std::size_t d = fock_dim(n);
    Mat m(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        const BasisImage im =
            apply_ladder_basis(static_cast<std::uint32_t>(col), n, {t, Ladder::Create});
        if (im.alive) m(im.idx, col) = static_cast<double>(im.sign);
    }
    return m;
}

Mat annihilation_op(int t, int n) { return creation_op(t, n).adjoint(); }

Mat parity_operator(const std::vector<int>& subset, int n) {
    require_mode_count(n);
    std::uint32_t mask = 0;
    for (int s : subset) {
        require_mode_index(s, n, "subset mode");
        mask |= mode_bit(n, s);
    }
    const std::size_t d = fock_dim(n);
    Mat m(d, d);
    for (std::size_t i = 0; i < d; ++i)
        m(i, i) = (std::popcount(static_cast<std::uint32_t>(i) & mask) & 1) ? -1.0 : 1.0;
    return m;
}

CarReport verify_car(int n) {
    require_mode_count(n);
    CarReport rep;
    rep.n = n;
    std::vector<Mat> a(n), ad(n);
    for (int s = 1; s <= n; ++s) {
        ad[s - 1] = creation_op(s, n);
        a[s - 1] = ad[s - 1].adjoint();
    }
    const Mat id = Mat::identity(fock_dim(n));
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
            Mat mixed = a[s] * ad[t] + ad[t] * a[s];
            if (s == t) mixed -= id;
            rep.max_dev_mixed = std::max(rep.max_dev_mixed, mixed.max_abs());
            const Mat same = a[s] * a[t] + a[t] * a[s];
            rep.max_dev_same = std::max(rep.max_dev_same, same.max_abs());
        }
    return rep;
}

FockVector mode_swap(const FockVector& v, int s) {
    if (s < 1 || s >= v.n)
        throw std::invalid_argument("mode_swap needs 1 <= s <= n-1, got " + std::to_string(s));
    FockVector out(v.n);
    const std::uint32_t bs = mode_bit(v.n, s);
    const std::uint32_t bt = mode_bit(v.n, s + 1);
    for (std::size_t i = 0; i < v.dim(); ++i) {
        const cplx c = v.amp[i];
        if (c == cplx(0.0, 0.0)) continue;
        const bool os = (i & bs) != 0;
        const bool ot = (i & bt) != 0;
        std::uint32_t j = static_cast<std::uint32_t>(i);
        if (os != ot) j ^= (bs | bt);
        out.amp[j] += (os && ot) ? -c : c;
    }
    return out;
}

bool is_permutation(const std::vector<int>& perm, int n) {
    if (static_cast<int>(perm.size()) != n) return false;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (int p : perm) {
        if (p < 1 || p > n || seen[static_cast<std::size_t>(p - 1)]) return false;
        seen[static_cast<std::size_t>(p - 1)] = true;
    }
    return true;
}

// Decompose the relabeling into adjacent transpositions and apply them as
// fermionic swaps.  Sorting positions by their target index with bubble
// passes keeps every exchange adjacent.
FockVector apply_mode_permutation(const FockVector& v, const std::vector<int>& perm) {
    if (!is_permutation(perm, v.n)) throw std::invalid_argument("invalid mode permutation");
    // cur[pos-1] = target position of the mode currently sitting at pos
    std::vector<int> cur(perm);
    FockVector out = v;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int pos = 1; pos < v.n; ++pos) {
            if (cur[pos - 1] > cur[pos]) {
                out = mode_swap(out, pos);
                std::swap(cur[pos - 1], cur[pos]);
                moved = true;
            }
        }
    }
    return out;
}

Mat mode_permutation_unitary(const std::vector<int>& perm, int n) {
    if (!is_permutation(perm, n)) throw std::invalid_argument("invalid mode permutation");
    const std::size_t d = fock_dim(n);
    Mat m(d, d);
    for (std::size_t col = 0; col < d; ++col) {
        FockVector e(n);
        e.amp[col] = 1.0;
        const FockVector img = apply_mode_permutation(e, perm);
        for (std::size_t row = 0; row < d; ++row) m(row, col) = img.amp[row];
    }
    return m;
}

std::vector<int> front_permutation(const std::vector<int>& subset, int n) {
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    for (int s : subset) {
        require_mode_index(s, n, "subset mode");
        if (in[static_cast<std::size_t>(s - 1)])
            throw std::invalid_argument("duplicate mode in subset");
        in[static_cast<std::size_t>(s - 1)] = true;
    }
    std::vector<int> perm(static_cast<std::size_t>(n), 0);
    int next = 1;
    for (int s : subset) perm[static_cast<std::size_t>(s - 1)] = next++;
    for (int s = 1; s <= n; ++s)
        if (!in[static_cast<std::size_t>(s - 1)]) perm[static_cast<std::size_t>(s - 1)] = next++;
    return perm;
}

} // namespace fermred
