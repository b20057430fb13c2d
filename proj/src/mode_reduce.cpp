#include "fermred/mode_reduce.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fermred {

void Bipartition::validate() const {
    require_mode_count(n);
    if (m < 1 || m > n - 1)
        throw std::invalid_argument("bipartition needs 1 <= m <= n-1, got m=" +
                                    std::to_string(m) + ", n=" + std::to_string(n));
    if (!permutation.empty() && !is_permutation(permutation, n))
        throw std::invalid_argument("bipartition relabeling is not a permutation");
}

namespace {

int block_size(const Bipartition& part, Block block) {
    return block == Block::First ? part.m : part.n - part.m;
}

int block_mode(const Bipartition& part, Block block, int i) {
    return block == Block::First ? i : part.m + i; // i is 1-based within the block
}

// occupation of the i-th block mode (1-based) in a block label
int label_occ(std::uint32_t label, int mb, int i) { return (label >> (mb - i)) & 1u; }

// Factor chain of the block matrix unit A_KJ: daggered factors over the
// block modes in increasing order, plain factors in decreasing order.
void block_unit_factors(std::vector<LadderOp>& ops, std::uint32_t K, std::uint32_t J,
                        const Bipartition& part, Block block) {
    const int mb = block_size(part, block);
    ops.clear();
    for (int i = 1; i <= mb; ++i)
        ops.push_back({block_mode(part, block, i),
                       label_occ(K, mb, i) ? Ladder::Create : Ladder::Vacancy});
    for (int i = mb; i >= 1; --i)
        ops.push_back({block_mode(part, block, i),
                       label_occ(J, mb, i) ? Ladder::Annihilate : Ladder::Vacancy});
}

// apply_monomial with reusable buffers
void apply_chain(const FockVector& in, const std::vector<LadderOp>& ops, FockVector& out,
                 FockVector& scratch) {
    out = in;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        std::fill(scratch.amp.begin(), scratch.amp.end(), cplx(0.0, 0.0));
        for (std::size_t i = 0; i < out.amp.size(); ++i) {
            const cplx c = out.amp[i];
            if (c == cplx(0.0, 0.0)) continue;
            const BasisImage im = apply_ladder_basis(static_cast<std::uint32_t>(i), in.n, *it);
            if (im.alive) scratch.amp[im.idx] += (im.sign < 0 ? -c : c);
        }
        std::swap(out.amp, scratch.amp);
    }
}

FockVector maybe_relabel(const FockVector& psi, const Bipartition& part) {
    if (part.permutation.empty()) return psi;
    return apply_mode_permutation(psi, part.permutation);
}

} // namespace

DensityMatrix reduce_modes(const FockVector& psi0, const Bipartition& part, Block block) {
    part.validate();
    if (psi0.n != part.n)
        throw std::invalid_argument("state and bipartition mode counts differ");
    if (!psi0.is_normalized())
        throw std::invalid_argument("reduce_modes needs a normalized state");
    const FockVector psi = maybe_relabel(psi0, part);

    const int mb = block_size(part, block);
    const std::size_t dr = fock_dim(mb);
    DensityMatrix out{Mat(dr, dr), DensityTag::ModeReduced};

    std::vector<LadderOp> ops;
    FockVector work(psi.n), scratch(psi.n);
    for (std::uint32_t J = 0; J < dr; ++J)
        for (std::uint32_t K = 0; K < dr; ++K) {
            block_unit_factors(ops, K, J, part, block);
            apply_chain(psi, ops, work, scratch);
            out.m(J, K) = inner(psi, work);
        }
    return out;
}

EquispectralResult equispectral(const FockVector& psi, const Bipartition& part, double tol) {
    const DensityMatrix r1 = reduce_modes(psi, part, Block::First);
    const DensityMatrix r2 = reduce_modes(psi, part, Block::Second);
    EquispectralResult res;
    res.first = eig_hermitian(r1.m, {}, "mode-reduced/first").spectrum;
    res.second = eig_hermitian(r2.m, {}, "mode-reduced/second").spectrum;
    const SpectraCompare cmp = spectra_equal(res.first, res.second, tol, true);
    res.equal = cmp.equal;
    res.max_gap = cmp.max_gap;
    return res;
}

double two_mode_criterion(const std::array<cplx, 4>& c) {
    double norm2 = 0.0;
    for (const auto& v : c) norm2 += std::norm(v);
    if (std::abs(norm2 - 1.0) > 1e-9)
        throw std::invalid_argument("two_mode_criterion needs unit-norm amplitudes");
    return (c[0] * c[3] * std::conj(c[1]) * std::conj(c[2])).real();
}

TensorEmbed tensor_embed(const FockVector& psi, int m) {
    if (m < 1 || m >= psi.n) throw std::invalid_argument("tensor_embed needs 1 <= m <= n-1");
    const std::size_t df = fock_dim(m);
    const std::size_t db = fock_dim(psi.n - m);
    TensorEmbed te;
    te.coeffs = Mat(df, db);
    for (std::size_t f = 0; f < df; ++f)
        for (std::size_t b = 0; b < db; ++b) te.coeffs(f, b) = psi.amp[f * db + b];
    te.omega1 = Mat(df, df);
    for (std::size_t f = 0; f < df; ++f)
        for (std::size_t g = 0; g < df; ++g) {
            cplx s = 0.0;
            for (std::size_t b = 0; b < db; ++b)
                s += te.coeffs(f, b) * std::conj(te.coeffs(g, b));
            te.omega1(f, g) = s;
        }
    te.omega2 = Mat(db, db);
    for (std::size_t b = 0; b < db; ++b)
        for (std::size_t c = 0; c < db; ++c) {
            cplx s = 0.0;
            for (std::size_t f = 0; f < df; ++f)
                s += te.coeffs(f, b) * std::conj(te.coeffs(f, c));
            te.omega2(b, c) = s;
        }
    return te;
}

FockVector canonical_ssr_purification(const std::vector<double>& lambda,
                                      const Bipartition& part) {
    part.validate();
    const int m = part.m;
    const int n = part.n;
    if (m < n - m)
        throw std::invalid_argument(
            "canonical purification needs m >= n-m; relabel the modes first");
    if (lambda.size() != fock_dim(n - m))
        throw std::invalid_argument("spectrum size must be 2^(n-m)");
    double sum = 0.0;
    for (double v : lambda) {
        if (v < -1e-12) throw std::invalid_argument("spectrum has a negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("spectrum does not sum to 1");

    FockVector phi(n);
    const std::size_t db = fock_dim(n - m);
    for (std::size_t t = 0; t < lambda.size(); ++t) {
        const double v = std::max(lambda[t], 0.0);
        if (v == 0.0) continue;
        // front label = t zero-padded to m bits, back label = t
        phi.amp[t * db + t] = std::sqrt(v);
    }
    phi.normalize();
    return phi;
}

Mat embed_block_unitary(const Mat& v, Block block, int m, int n) {
    const std::size_t df = fock_dim(m);
    const std::size_t db = fock_dim(n - m);
    const std::size_t d = fock_dim(n);
    Mat out(d, d);
    if (block == Block::First) {
        if (v.rows() != df || v.cols() != df)
            throw std::invalid_argument("first-block rotation has wrong dimension");
        for (std::size_t f = 0; f < df; ++f)
            for (std::size_t g = 0; g < df; ++g) {
                const cplx x = v(f, g);
                if (x == cplx(0.0, 0.0)) continue;
                for (std::size_t b = 0; b < db; ++b) out(f * db + b, g * db + b) = x;
            }
        return out;
    }
    if (v.rows() != db || v.cols() != db)
        throw std::invalid_argument("second-block rotation has wrong dimension");
    // parity-preserving entries act identically on every front sector;
    // parity-changing entries pick up the front parity sign
    for (std::size_t b = 0; b < db; ++b)
        for (std::size_t c = 0; c < db; ++c) {
            const cplx x = v(b, c);
            if (x == cplx(0.0, 0.0)) continue;
            const bool cross = ((weight(static_cast<std::uint32_t>(b)) ^
                                 weight(static_cast<std::uint32_t>(c))) &
                                1) != 0;
            for (std::size_t f = 0; f < df; ++f) {
                const bool fo = (weight(static_cast<std::uint32_t>(f)) & 1) != 0;
                out(f * db + b, f * db + c) = (cross && fo) ? -x : x;
            }
        }
    return out;
}

Mat embed_block_unitary_from_units(const Mat& v, Block block, int m, int n) {
    Bipartition part{m, n, {}};
    const int mb = block_size(part, block);
    const std::size_t dr = fock_dim(mb);
    if (v.rows() != dr || v.cols() != dr)
        throw std::invalid_argument("block rotation has wrong dimension");
    const std::size_t d = fock_dim(n);
    Mat out(d, d);
    std::vector<LadderOp> ops;
    for (std::uint32_t K = 0; K < dr; ++K)
        for (std::uint32_t J = 0; J < dr; ++J) {
            const cplx c = v(K, J);
            if (c == cplx(0.0, 0.0)) continue;
            block_unit_factors(ops, K, J, part, block);
            for (std::size_t col = 0; col < d; ++col) {
                const BasisImage im =
                    monomial_on_basis(static_cast<std::uint32_t>(col), n, ops);
                if (im.alive) out(im.idx, col) += (im.sign < 0 ? -c : c);
            }
        }
    return out;
}

namespace {

// Deterministic orthonormal completion: fill unset columns of v with basis
// vectors orthogonalized against everything placed so far.
void complete_columns(Mat& v, const std::vector<bool>& fixed) {
    const std::size_t d = v.rows();
    std::vector<std::vector<cplx>> have;
    for (std::size_t j = 0; j < d; ++j) {
        if (!fixed[j]) continue;
        std::vector<cplx> col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = v(i, j);
        have.push_back(std::move(col));
    }
    std::size_t cand = 0;
    for (std::size_t j = 0; j < d; ++j) {
        if (fixed[j]) continue;
        while (true) {
            if (cand >= d)
                throw std::runtime_error("failed to complete an orthonormal frame");
            std::vector<cplx> col(d, cplx(0.0, 0.0));
            col[cand++] = 1.0;
            for (const auto& h : have) {
                cplx proj = 0.0;
                for (std::size_t i = 0; i < d; ++i) proj += std::conj(h[i]) * col[i];
                for (std::size_t i = 0; i < d; ++i) col[i] -= proj * h[i];
            }
            double nrm = 0.0;
            for (const auto& x : col) nrm += std::norm(x);
            nrm = std::sqrt(nrm);
            if (nrm < 0.5) continue; // candidate almost spanned; try the next one
            for (auto& x : col) x /= nrm;
            for (std::size_t i = 0; i < d; ++i) v(i, j) = col[i];
            have.push_back(std::move(col));
            break;
        }
    }
}

FockVector apply_operator(const Mat& u, const FockVector& v) {
    FockVector out(v.n);
    out.amp = mat_vec(u, v.amp);
    return out;
}

} // namespace

PurificationResult reconstruct_locals(const FockVector& psi0, const Bipartition& part0,
                                      const ReconstructOptions& opts) {
    part0.validate();
    FockVector psi = maybe_relabel(psi0, part0);
    std::vector<int> relabeling = part0.permutation;

    int n = psi.n;
    int m = part0.m;
    if (m < n - m) {
        // move the larger block to the front
        std::vector<int> subset;
        for (int s = m + 1; s <= n; ++s) subset.push_back(s);
        const auto perm = front_permutation(subset, n);
        psi = apply_mode_permutation(psi, perm);
        m = n - m;
        if (relabeling.empty()) {
            relabeling = perm;
        } else {
            std::vector<int> comp(static_cast<std::size_t>(n));
            for (int s = 1; s <= n; ++s)
                comp[static_cast<std::size_t>(s - 1)] =
                    perm[static_cast<std::size_t>(relabeling[static_cast<std::size_t>(s - 1)] - 1)];
            relabeling = comp;
        }
    }
    const Bipartition part{m, n, {}};

    const DensityMatrix omega1 = reduce_modes(psi, part, Block::First);
    const DensityMatrix omega2 = reduce_modes(psi, part, Block::Second);

    EigOptions evec_opts;
    evec_opts.want_vectors = true;
    const EigResult e1 = eig_hermitian(omega1.m, {}, "first marginal");
    const EigResult e2 = eig_hermitian(omega2.m, evec_opts, "second marginal");

    const SpectraCompare cmp = spectra_equal(e1.spectrum, e2.spectrum, opts.tol, true);
    if (!cmp.equal)
        throw std::domain_error(
            "reconstruct_locals precondition failed: marginals are not equispectral (gap " +
            std::to_string(cmp.max_gap) + ")");

    PurificationResult res;
    res.relabeling = relabeling;
    res.lambda = e2.spectrum.values;
    for (auto& v : res.lambda) v = std::max(v, 0.0);
    {
        double sum = 0.0;
        for (double v : res.lambda) sum += v;
        for (auto& v : res.lambda) v /= sum;
    }

    // nonzero part of the spectrum pairwise separated and away from zero
    res.simple_spectrum = true;
    for (std::size_t i = 0; i < res.lambda.size(); ++i) {
        if (res.lambda[i] <= opts.zero_threshold) continue;
        const double below = (i + 1 < res.lambda.size()) ? res.lambda[i + 1] : 0.0;
        if (res.lambda[i] - below <= opts.gap_threshold) res.simple_spectrum = false;
    }

    const std::size_t df = fock_dim(m);
    const std::size_t db = fock_dim(n - m);

    res.u2 = embed_block_unitary(e2.vectors, Block::Second, m, n);
    const FockVector psi_t = apply_operator(res.u2.adjoint(), psi);

    // columns of the transported coefficient matrix carry the first-block
    // frame when the construction closes
    Mat mt(df, db);
    for (std::size_t f = 0; f < df; ++f)
        for (std::size_t b = 0; b < db; ++b) mt(f, b) = psi_t.amp[f * db + b];

    std::vector<bool> active(db, false);
    for (std::size_t t = 0; t < db; ++t) active[t] = res.lambda[t] > opts.zero_threshold;

    double worst_gram = 0.0;
    for (std::size_t t = 0; t < db; ++t) {
        if (!active[t]) continue;
        for (std::size_t u = t + 1; u < db; ++u) {
            if (!active[u]) continue;
            cplx g = 0.0;
            for (std::size_t f = 0; f < df; ++f) g += std::conj(mt(f, t)) * mt(f, u);
            worst_gram = std::max(
                worst_gram, std::abs(g) / std::sqrt(res.lambda[t] * res.lambda[u]));
        }
    }

    Mat v1(df, df);
    std::vector<bool> fixed(df, false);
    res.used_fallback = worst_gram > 1e-7;
    if (!res.used_fallback) {
        for (std::size_t t = 0; t < db; ++t) {
            if (!active[t]) continue;
            double nrm = 0.0;
            for (std::size_t f = 0; f < df; ++f) nrm += std::norm(mt(f, t));
            nrm = std::sqrt(nrm);
            for (std::size_t f = 0; f < df; ++f) v1(f, t) = mt(f, t) / nrm;
            fixed[t] = true;
        }
    } else {
        // eigenbasis pairing by descending eigenvalue
        EigOptions o1 = evec_opts;
        const EigResult et = eig_hermitian(Mat(mt * mt.adjoint()), o1, "transported first");
        for (std::size_t t = 0; t < db && t < df; ++t) {
            if (!active[t]) continue;
            for (std::size_t f = 0; f < df; ++f) v1(f, t) = et.vectors(f, t);
            fixed[t] = true;
        }
    }
    complete_columns(v1, fixed);

    res.u1 = embed_block_unitary(v1, Block::First, m, n);
    res.phi = canonical_ssr_purification(res.lambda, part);
    res.reconstructed = apply_operator(res.u2, apply_operator(res.u1, res.phi));

    const DensityMatrix c1 = reduce_modes(res.reconstructed, part, Block::First);
    const DensityMatrix c2 = reduce_modes(res.reconstructed, part, Block::Second);
    res.marginal_gap1 = Mat::max_abs_diff(c1.m, omega1.m);
    res.marginal_gap2 = Mat::max_abs_diff(c2.m, omega2.m);
    res.fidelity = std::abs(inner(psi, res.reconstructed));
    res.recovered = res.simple_spectrum && res.fidelity >= 1.0 - opts.tol;
    return res;
}

EntropyReport entropy_report(const FockVector& psi, const Bipartition& part) {
    const EquispectralResult eq = equispectral(psi, part, 1e-9);
    EntropyReport rep;
    rep.s1_bits = von_neumann_entropy_bits(eq.first);
    rep.s2_bits = von_neumann_entropy_bits(eq.second);
    rep.violation_bits = std::abs(rep.s1_bits - rep.s2_bits);
    return rep;
}

} // namespace fermred
