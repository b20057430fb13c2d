#include "fermred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fermred {

SpectrumReport SpectrumReport::stripped(double zero_thr) const {
    SpectrumReport out;
    out.dim = dim;
    out.zero_threshold = zero_thr;
    out.source_tag = source_tag;
    for (double v : values)
        if (std::abs(v) > zero_thr) out.values.push_back(v);
    out.dropped_zeros = values.size() - out.values.size();
    return out;
}

namespace {

double offdiag_frobenius(const Mat& a) {
    const std::size_t d = a.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Column rotation on (p,q): col_p' = c col_p + s e^{-i phi} col_q,
// col_q' = -s e^{i phi} col_p + c col_q.
void rotate_cols(Mat& a, std::size_t p, std::size_t q, double c, double s, cplx eiphi) {
    const std::size_t d = a.rows();
    for (std::size_t k = 0; k < d; ++k) {
        const cplx akp = a(k, p);
        const cplx akq = a(k, q);
        a(k, p) = c * akp + s * std::conj(eiphi) * akq;
        a(k, q) = -s * eiphi * akp + c * akq;
    }
}

} // namespace

EigResult eig_hermitian(const Mat& m, const EigOptions& opts, const std::string& source_tag) {
    if (!m.square()) throw std::invalid_argument("eig_hermitian needs a square matrix");
    const std::size_t d = m.rows();

    EigResult res;
    res.asymmetry = m.hermiticity_defect();
    if (res.asymmetry > opts.hermiticity_tol)
        throw std::invalid_argument("matrix is not Hermitian within tolerance (defect " +
                                    std::to_string(res.asymmetry) + ")");

    Mat a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));

    Mat v = Mat::identity(d);
    const double norm_f = std::max(a.frobenius(), 1e-300);
    const double stop = opts.off_tol * norm_f;

    int sweep = 0;
    double off = offdiag_frobenius(a);
    while (off > stop && sweep < opts.max_sweeps) {
        ++sweep;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const cplx beta = a(p, q);
                const double b = std::abs(beta);
                if (b <= 1e-300 || b <= 0.01 * stop / static_cast<double>(d)) continue;
                const cplx eiphi = beta / b;
                const double alpha = a(p, p).real();
                const double gamma = a(q, q).real();
                const double zeta = (gamma - alpha) / (2.0 * b);
                // smaller root of t^2 - 2 zeta t - 1 = 0
                const double t = (zeta >= 0.0)
                                     ? -1.0 / (zeta + std::sqrt(zeta * zeta + 1.0))
                                     : 1.0 / (-zeta + std::sqrt(zeta * zeta + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                rotate_cols(a, p, q, c, s, eiphi);
                // rows follow by hermiticity: A <- R^dag A R
                for (std::size_t k = 0; k < d; ++k) {
                    const cplx apk = a(p, k);
                    const cplx aqk = a(q, k);
                    a(p, k) = c * apk + s * eiphi * aqk;
                    a(q, k) = -s * std::conj(eiphi) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
                rotate_cols(v, p, q, c, s, eiphi);
            }
        }
        off = offdiag_frobenius(a);
    }
    res.sweeps = sweep;
    res.off_final = off;
    if (off > stop)
        throw std::runtime_error("Jacobi eigensolver did not converge: residual " +
                                 std::to_string(off) + " after " + std::to_string(sweep) +
                                 " sweeps");

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });
    // exact ties: first differing eigenvector coordinate, (re, im) order
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double vi = a(i, i).real();
        const double vj = a(j, j).real();
        if (vi != vj) return vi > vj;
        for (std::size_t k = 0; k < d; ++k) {
            const cplx x = v(k, i);
            const cplx y = v(k, j);
            if (x.real() != y.real()) return x.real() > y.real();
            if (x.imag() != y.imag()) return x.imag() > y.imag();
        }
        return false;
    });

    res.spectrum.dim = d;
    res.spectrum.source_tag = source_tag;
    res.spectrum.values.resize(d);
    for (std::size_t k = 0; k < d; ++k) res.spectrum.values[k] = a(order[k], order[k]).real();

    if (opts.want_vectors) {
        res.vectors = Mat(d, d);
        for (std::size_t k = 0; k < d; ++k) {
            // phase: largest-magnitude coordinate made real positive
            std::size_t imax = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double mag = std::abs(v(i, order[k]));
                if (mag > best + 1e-15) {
                    best = mag;
                    imax = i;
                }
            }
            cplx phase(1.0, 0.0);
            const cplx lead = v(imax, order[k]);
            if (std::abs(lead) > 0.0) phase = std::conj(lead) / std::abs(lead);
            for (std::size_t i = 0; i < d; ++i) res.vectors(i, k) = phase * v(i, order[k]);
        }
    }
    return res;
}

std::vector<double> eigenvalues(const Mat& m, const std::string& tag) {
    return eig_hermitian(m, {}, tag).spectrum.values;
}

SpectraCompare spectra_equal(const SpectrumReport& a, const SpectrumReport& b, double tol,
                             bool pad) {
    std::vector<double> va = a.values;
    std::vector<double> vb = b.values;
    if (va.size() != vb.size()) {
        if (!pad)
            throw std::invalid_argument("spectra of unequal length and padding disabled");
        auto& shorter = va.size() < vb.size() ? va : vb;
        shorter.resize(std::max(va.size(), vb.size()), 0.0);
        std::sort(shorter.rbegin(), shorter.rend());
    }
    SpectraCompare out;
    for (std::size_t i = 0; i < va.size(); ++i)
        out.max_gap = std::max(out.max_gap, std::abs(va[i] - vb[i]));
    out.equal = out.max_gap <= tol;
    return out;
}

double von_neumann_entropy_bits(const SpectrumReport& rep) {
    double sum = 0.0;
    for (double v : rep.values) {
        if (v < -1e-10 || v > 1.0 + 1e-10)
            throw std::invalid_argument("entropy input eigenvalue out of [0,1]: " +
                                        std::to_string(v));
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("entropy input does not sum to 1: " + std::to_string(sum));
    double h = 0.0;
    for (double v : rep.values) {
        if (v <= 0.0) continue;
        h -= v * std::log2(v);
    }
    return h;
}

} // namespace fermred
