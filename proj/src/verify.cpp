#include "fermred/verify.hpp"

#include <cmath>
#include <sstream>

#include "fermred/density.hpp"
#include "fermred/mode_reduce.hpp"
#include "fermred/particle_reduce.hpp"

namespace fermred {

std::optional<Suite> suite_from_string(const std::string& s) {
    if (s == "car") return Suite::Car;
    if (s == "matrix-units") return Suite::MatrixUnits;
    if (s == "theorem1") return Suite::Theorem1;
    if (s == "theorem2") return Suite::Theorem2;
    if (s == "prop4") return Suite::Prop4;
    if (s == "prop5") return Suite::Prop5;
    if (s == "pauli") return Suite::Pauli;
    return std::nullopt;
}

const char* to_string(Suite s) {
    switch (s) {
    case Suite::Car: return "car";
    case Suite::MatrixUnits: return "matrix-units";
    case Suite::Theorem1: return "theorem1";
    case Suite::Theorem2: return "theorem2";
    case Suite::Prop4: return "prop4";
    case Suite::Prop5: return "prop5";
    case Suite::Pauli: return "pauli";
    }
    return "?";
}

FockVector forward_purification_instance(int n, int m, const std::vector<double>& lambda,
                                         Rng& rng) {
    const int big = std::max(m, n - m);
    const Bipartition part{big, n, {}};
    FockVector psi = canonical_ssr_purification(lambda, part);
    const Mat u2 = embed_block_unitary(
        sample_graded_unitary(n - big, rng.next_below(2) == 1, rng), Block::Second, big, n);
    const Mat u1 = embed_block_unitary(
        sample_graded_unitary(big, rng.next_below(2) == 1, rng), Block::First, big, n);
    psi.amp = mat_vec(u2, psi.amp);
    psi.amp = mat_vec(u1, psi.amp); // net state: U1 U2 |phi>
    if (m < n - m) {
        // the caller asked for the smaller block first: swap the blocks back
        std::vector<int> subset;
        for (int s = big + 1; s <= n; ++s) subset.push_back(s);
        psi = apply_mode_permutation(psi, front_permutation(subset, n));
    }
    return psi;
}

std::array<cplx, 4> sample_zero_criterion_amplitudes(Rng& rng) {
    std::array<double, 4> mod{};
    double sum = 0.0;
    for (auto& r : mod) {
        const double g = rng.next_gauss();
        r = std::abs(g) + 0.05;
        sum += r * r;
    }
    for (auto& r : mod) r /= std::sqrt(sum);
    const double th01 = 2.0 * M_PI * rng.next_double();
    const double th10 = 2.0 * M_PI * rng.next_double();
    const double th11 = 2.0 * M_PI * rng.next_double();
    // phase(c00 c11 conj(c01 c10)) = +-pi/2 makes the product imaginary
    const double sign = rng.next_below(2) == 0 ? 1.0 : -1.0;
    const double th00 = th01 + th10 - th11 + sign * M_PI / 2.0;
    return {cplx(mod[0] * std::cos(th00), mod[0] * std::sin(th00)),
            cplx(mod[1] * std::cos(th01), mod[1] * std::sin(th01)),
            cplx(mod[2] * std::cos(th10), mod[2] * std::sin(th10)),
            cplx(mod[3] * std::cos(th11), mod[3] * std::sin(th11))};
}

namespace {

SuiteResult fail(SuiteResult res, std::uint64_t seed, const std::string& what) {
    res.passed = false;
    res.has_counterexample = true;
    res.cx_seed = seed;
    res.cx_description = what;
    return res;
}

SuiteResult run_car(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::Car;
    for (int n = 1; n <= p.n_max; ++n) {
        const CarReport rep = verify_car(n);
        res.max_gap = std::max({res.max_gap, rep.max_dev_mixed, rep.max_dev_same});
        ++res.trials_run;
        if (!rep.exact())
            return fail(res, 0,
                        "anticommutator deviation " + std::to_string(res.max_gap) +
                            " at n=" + std::to_string(n));
    }
    res.passed = true;
    return res;
}

SuiteResult run_matrix_units(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::MatrixUnits;
    const int n_max = std::min(p.n_max, 3);
    for (int n = 1; n <= n_max; ++n) {
        const std::size_t d = fock_dim(n);
        std::vector<Mat> units(d * d);
        for (std::uint32_t j = 0; j < d; ++j)
            for (std::uint32_t k = 0; k < d; ++k)
                units[j * d + k] =
                    matrix_unit(MultiIndex::from_index(n, j), MultiIndex::from_index(n, k));
        // elementary-matrix identity
        for (std::uint32_t j = 0; j < d; ++j)
            for (std::uint32_t k = 0; k < d; ++k) {
                Mat elem(d, d);
                elem(j, k) = 1.0;
                const double dev = Mat::max_abs_diff(units[j * d + k], elem);
                res.max_gap = std::max(res.max_gap, dev);
                if (dev != 0.0)
                    return fail(res, 0, "matrix unit is not elementary at n=" +
                                            std::to_string(n));
            }
        // A_JK A_LM = delta_KL A_JM, exhaustively
        for (std::uint32_t j = 0; j < d; ++j)
            for (std::uint32_t k = 0; k < d; ++k)
                for (std::uint32_t l = 0; l < d; ++l)
                    for (std::uint32_t mm = 0; mm < d; ++mm) {
                        const Mat prod = units[j * d + k] * units[l * d + mm];
                        const Mat expect =
                            (k == l) ? units[j * d + mm] : Mat(d, d);
                        const double dev = Mat::max_abs_diff(prod, expect);
                        res.max_gap = std::max(res.max_gap, dev);
                        ++res.trials_run;
                        if (dev != 0.0)
                            return fail(res, 0,
                                        "matrix-unit product deviates at n=" +
                                            std::to_string(n));
                    }
    }
    res.passed = true;
    return res;
}

SuiteResult run_theorem1(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::Theorem1;
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::uint64_t seed = trial_seed(p.seed, i);
        Rng rng(seed);
        const int n =
            2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_max - 1)));
        const FockVector psi = sample_parity(n, rng.next_below(2) == 0, rng);
        for (int m = 1; m <= n - 1; ++m) {
            const EquispectralResult eq = equispectral(psi, Bipartition{m, n, {}}, p.tol);
            res.max_gap = std::max(res.max_gap, eq.max_gap);
            if (!eq.equal) {
                std::ostringstream os;
                os << "superselected state with unequal reduced spectra: n=" << n
                   << " m=" << m << " gap=" << eq.max_gap;
                return fail(res, seed, os.str());
            }
        }
        ++res.trials_run;
    }
    res.passed = true;
    return res;
}

SuiteResult run_theorem2(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::Theorem2;
    const std::uint64_t degenerate_every = 5; // every fifth trial uses a repeated spectrum
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::uint64_t seed = trial_seed(p.seed, i);
        Rng rng(seed);
        const int n =
            2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_max - 1)));
        const int m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - 1)));
        const int small = std::min(m, n - m);
        const std::size_t spec_size = fock_dim(small);
        const bool degenerate = (i % degenerate_every == degenerate_every - 1) && spec_size >= 2;

        std::vector<double> lambda;
        if (!degenerate) {
            lambda = sample_spectrum(spec_size, rng, 1e-3);
        } else {
            lambda = sample_spectrum(spec_size / 2 == 0 ? 1 : spec_size / 2, rng);
            std::vector<double> doubled;
            for (double v : lambda) {
                doubled.push_back(v / 2.0);
                doubled.push_back(v / 2.0);
            }
            doubled.resize(spec_size, 0.0);
            std::sort(doubled.rbegin(), doubled.rend());
            lambda = doubled;
        }
        const FockVector psi = forward_purification_instance(n, m, lambda, rng);

        PurificationResult pr;
        try {
            pr = reconstruct_locals(psi, Bipartition{m, n, {}}, {p.tol, 1e-8, 1e-10});
        } catch (const std::exception& e) {
            return fail(res, seed, std::string("reconstruction raised: ") + e.what());
        }
        res.max_gap = std::max({res.max_gap, pr.marginal_gap1, pr.marginal_gap2});
        if (pr.marginal_gap1 > p.tol || pr.marginal_gap2 > p.tol) {
            std::ostringstream os;
            os << "marginal mismatch n=" << n << " m=" << m << " gaps=" << pr.marginal_gap1
               << "," << pr.marginal_gap2;
            return fail(res, seed, os.str());
        }
        if (!degenerate) {
            if (!pr.recovered || pr.fidelity < 1.0 - p.tol) {
                std::ostringstream os;
                os << "state not recovered: n=" << n << " m=" << m
                   << " fidelity=" << pr.fidelity;
                return fail(res, seed, os.str());
            }
        } else if (pr.recovered) {
            return fail(res, seed, "degenerate spectrum reported as recovered");
        }
        ++res.trials_run;
    }
    res.passed = true;
    return res;
}

SuiteResult run_prop4(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::Prop4;
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::uint64_t seed = trial_seed(p.seed, i);
        Rng rng(seed);
        std::array<cplx, 4> c{};
        const std::uint64_t kind = rng.next_below(5);
        if (kind <= 1) {
            FockVector v = sample_general(2, rng);
            c = {v.amp[0], v.amp[1], v.amp[2], v.amp[3]};
        } else if (kind <= 3) {
            c = sample_zero_criterion_amplitudes(rng);
        } else {
            FockVector v = sample_parity(2, rng.next_below(2) == 0, rng);
            c = {v.amp[0], v.amp[1], v.amp[2], v.amp[3]};
        }
        FockVector psi(2);
        psi.amp = {c[0], c[1], c[2], c[3]};
        const double crit = std::abs(two_mode_criterion(c));
        const EquispectralResult eq = equispectral(psi, Bipartition{1, 2, {}}, 1e-8);
        ++res.trials_run;
        if (crit <= 1e-10 && !eq.equal) {
            std::ostringstream os;
            os << "criterion " << crit << " but spectra differ by " << eq.max_gap;
            return fail(res, seed, os.str());
        }
        if (crit >= 1e-8 && eq.equal) {
            std::ostringstream os;
            os << "criterion " << crit << " but spectra agree within " << eq.max_gap;
            return fail(res, seed, os.str());
        }
        // 1e-10 < crit < 1e-8: documented exclusion band, no assertion
    }
    res.passed = true;
    return res;
}

SuiteResult run_prop5(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::Prop5;
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::uint64_t seed = trial_seed(p.seed, i);
        Rng rng(seed);
        const int n =
            2 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(p.n_max - 1)));
        const int N = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        const FockVector psi = sample_fixed_n(n, N, rng);
        for (int pp = 1; pp <= N; ++pp) {
            const FixedNReport rep = check_fixed_n_reduction(psi, pp, 1e-12);
            res.max_gap = std::max(res.max_gap, rep.max_gap);
            if (!rep.pass) {
                std::ostringstream os;
                os << "fixed-N reduction gap " << rep.max_gap << " at n=" << n << " N=" << N
                   << " p=" << pp;
                return fail(res, seed, os.str());
            }
        }
        ++res.trials_run;
    }
    res.passed = true;
    return res;
}

SuiteResult run_pauli(const SuiteParams& p) {
    SuiteResult res;
    res.suite = Suite::Pauli;
    const double tol = 1e-10;
    for (std::uint64_t i = 0; i < p.trials; ++i) {
        const std::uint64_t seed = trial_seed(p.seed, i);
        Rng rng(seed);
        for (int c = 0; c < 3; ++c) {
            FockVector psi = (c == 0)   ? sample_parity(2, true, rng)
                             : (c == 1) ? sample_parity(2, false, rng)
                                        : sample_parity(3, false, rng);
            const PauliReport rep = pauli_constraint_check(psi, tol);
            if (!rep.asserted)
                return fail(res, seed, "constraint case unexpectedly unasserted");
            if (!rep.pass) return fail(res, seed, "violated: " + rep.description);
        }
        ++res.trials_run;
    }
    res.passed = true;
    return res;
}

} // namespace

SuiteResult run_suite(Suite suite, const SuiteParams& params) {
    switch (suite) {
    case Suite::Car: return run_car(params);
    case Suite::MatrixUnits: return run_matrix_units(params);
    case Suite::Theorem1: return run_theorem1(params);
    case Suite::Theorem2: return run_theorem2(params);
    case Suite::Prop4: return run_prop4(params);
    case Suite::Prop5: return run_prop5(params);
    case Suite::Pauli: return run_pauli(params);
    }
    throw std::logic_error("unknown suite");
}

} // namespace fermred
