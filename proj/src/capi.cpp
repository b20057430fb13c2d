#include "fermred.h"

#include <cstring>
#include <string>

#include "fermred/density.hpp"
#include "fermred/fock.hpp"
#include "fermred/fuzz.hpp"
#include "fermred/mode_reduce.hpp"
#include "fermred/particle_reduce.hpp"
#include "fermred/sample.hpp"
#include "fermred/spectral.hpp"
#include "fermred/state_io.hpp"
#include "fermred/verify.hpp"

using namespace fermred;

struct fr_state {
    FockVector v;
};

struct fr_matrix {
    Mat m;
};

namespace {

thread_local std::string g_last_error;

fr_status set_error(fr_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

template <typename Fn> fr_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const StateParseError& e) {
        return set_error(FR_ERR_IO, e.what());
    } catch (const FuzzRecordError& e) {
        return set_error(FR_ERR_IO, e.what());
    } catch (const std::domain_error& e) {
        return set_error(FR_ERR_PRECONDITION, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(FR_ERR_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return set_error(FR_ERR_NUMERIC, e.what());
    }
}

fr_status copy_string(const std::string& s, char* out, size_t capacity) {
    if (out == nullptr || capacity == 0) return FR_OK;
    const size_t len = std::min(s.size(), capacity - 1);
    std::memcpy(out, s.data(), len);
    out[len] = '\0';
    return FR_OK;
}

Bipartition subset_bipartition(const FockVector& v, const int* subset, int subset_len) {
    if (subset == nullptr || subset_len < 1 || subset_len >= v.n)
        throw std::invalid_argument("subset must name between 1 and n-1 modes");
    std::vector<int> modes(subset, subset + subset_len);
    bool contiguous = true;
    for (int i = 0; i < subset_len; ++i)
        if (modes[static_cast<std::size_t>(i)] != i + 1) contiguous = false;
    Bipartition part{subset_len, v.n, {}};
    if (!contiguous) part.permutation = front_permutation(modes, v.n);
    return part;
}

fr_status export_spectrum(const std::vector<double>& vals, double* out, size_t capacity,
                          const char* what) {
    if (out == nullptr || capacity < vals.size())
        return set_error(FR_ERR_ARGUMENT, std::string(what) + ": buffer too small");
    std::memcpy(out, vals.data(), vals.size() * sizeof(double));
    return FR_OK;
}

} // namespace

extern "C" {

const char* fr_version(void) { return "1.0.0"; }

const char* fr_last_error(void) { return g_last_error.c_str(); }

fr_status fr_state_create(int modes, const double* amplitudes_interleaved, int normalize,
                          fr_state** out) {
    return guarded([&]() -> fr_status {
        if (amplitudes_interleaved == nullptr || out == nullptr)
            throw std::invalid_argument("null pointer");
        FockVector v(modes);
        for (std::size_t i = 0; i < v.dim(); ++i)
            v.amp[i] = cplx(amplitudes_interleaved[2 * i], amplitudes_interleaved[2 * i + 1]);
        if (normalize) v.normalize();
        else if (!v.is_normalized(1e-9))
            throw std::invalid_argument("amplitudes are not normalized");
        *out = new fr_state{std::move(v)};
        return FR_OK;
    });
}

fr_status fr_state_load(const char* path, fr_state** out) {
    return guarded([&]() -> fr_status {
        if (path == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_state{load_state(path)};
        return FR_OK;
    });
}

fr_status fr_state_save(const fr_state* state, const char* path) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || path == nullptr) throw std::invalid_argument("null pointer");
        save_state(path, state->v);
        return FR_OK;
    });
}

void fr_state_free(fr_state* state) { delete state; }

int fr_state_modes(const fr_state* state) { return state ? state->v.n : 0; }

fr_status fr_state_amplitudes(const fr_state* state, double* out, size_t capacity) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        if (capacity < 2 * state->v.dim())
            throw std::invalid_argument("amplitude buffer too small");
        for (std::size_t i = 0; i < state->v.dim(); ++i) {
            out[2 * i] = state->v.amp[i].real();
            out[2 * i + 1] = state->v.amp[i].imag();
        }
        return FR_OK;
    });
}

fr_status fr_state_sample(int modes, const char* ensemble, uint64_t seed, int param,
                          fr_state** out) {
    return guarded([&]() -> fr_status {
        if (ensemble == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        const auto ens = ensemble_from_string(ensemble);
        if (!ens) throw std::invalid_argument("unknown ensemble: " + std::string(ensemble));
        Rng rng(seed);
        FockVector v(modes);
        switch (*ens) {
        case Ensemble::General: v = sample_general(modes, rng); break;
        case Ensemble::Ssr: v = sample_parity(modes, param == 0, rng); break;
        case Ensemble::FixedN: v = sample_fixed_n(modes, param, rng); break;
        }
        *out = new fr_state{std::move(v)};
        return FR_OK;
    });
}

fr_status fr_state_parity(const fr_state* state, double zero_threshold, int* out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        switch (parity_classify(state->v, zero_threshold)) {
        case ParityClass::Even: *out = 0; break;
        case ParityClass::Odd: *out = 1; break;
        case ParityClass::Mixed: *out = 2; break;
        }
        return FR_OK;
    });
}

fr_status fr_state_is_even(const fr_state* state, double tol, int* even,
                           double* max_violation, char* worst_monomial, size_t capacity) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || even == nullptr) throw std::invalid_argument("null pointer");
        const EvennessReport rep = is_even_state(state->v, tol);
        *even = rep.even ? 1 : 0;
        if (max_violation) *max_violation = rep.max_violation;
        copy_string(monomial_to_string(rep.worst_monomial), worst_monomial, capacity);
        return FR_OK;
    });
}

void fr_matrix_free(fr_matrix* m) { delete m; }

size_t fr_matrix_rows(const fr_matrix* m) { return m ? m->m.rows() : 0; }

size_t fr_matrix_cols(const fr_matrix* m) { return m ? m->m.cols() : 0; }

fr_status fr_matrix_get(const fr_matrix* m, double* out, size_t capacity) {
    return guarded([&]() -> fr_status {
        if (m == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        const std::size_t count = m->m.rows() * m->m.cols();
        if (capacity < 2 * count) throw std::invalid_argument("matrix buffer too small");
        for (std::size_t i = 0; i < m->m.rows(); ++i)
            for (std::size_t j = 0; j < m->m.cols(); ++j) {
                const cplx v = m->m(i, j);
                out[2 * (i * m->m.cols() + j)] = v.real();
                out[2 * (i * m->m.cols() + j) + 1] = v.imag();
            }
        return FR_OK;
    });
}

fr_status fr_state_projector(const fr_state* state, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_matrix{lambda_from_state(state->v).m};
        return FR_OK;
    });
}

fr_status fr_matrix_spectrum(const fr_matrix* m, double* values, size_t capacity) {
    return guarded([&]() -> fr_status {
        if (m == nullptr) throw std::invalid_argument("null pointer");
        return export_spectrum(eigenvalues(m->m), values, capacity, "spectrum");
    });
}

fr_status fr_creation_matrix(int mode, int modes, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_matrix{creation_op(mode, modes)};
        return FR_OK;
    });
}

fr_status fr_annihilation_matrix(int mode, int modes, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_matrix{annihilation_op(mode, modes)};
        return FR_OK;
    });
}

fr_status fr_car_check(int modes, double* max_dev_mixed, double* max_dev_same) {
    return guarded([&]() -> fr_status {
        const CarReport rep = verify_car(modes);
        if (max_dev_mixed) *max_dev_mixed = rep.max_dev_mixed;
        if (max_dev_same) *max_dev_same = rep.max_dev_same;
        return FR_OK;
    });
}

fr_status fr_reduce_modes(const fr_state* state, const int* subset, int subset_len,
                          int block, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        if (block != 0 && block != 1)
            throw std::invalid_argument("block must be 0 (first) or 1 (second)");
        const Bipartition part = subset_bipartition(state->v, subset, subset_len);
        *out = new fr_matrix{
            reduce_modes(state->v, part, block == 0 ? Block::First : Block::Second).m};
        return FR_OK;
    });
}

fr_status fr_equispectral(const fr_state* state, const int* subset, int subset_len,
                          double tol, int* equal, double* max_gap, double* spectrum_first,
                          size_t cap_first, double* spectrum_second, size_t cap_second) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || equal == nullptr) throw std::invalid_argument("null pointer");
        const Bipartition part = subset_bipartition(state->v, subset, subset_len);
        const EquispectralResult eq = equispectral(state->v, part, tol);
        *equal = eq.equal ? 1 : 0;
        if (max_gap) *max_gap = eq.max_gap;
        if (spectrum_first) {
            const fr_status st =
                export_spectrum(eq.first.values, spectrum_first, cap_first, "spectrum 1");
            if (st != FR_OK) return st;
        }
        if (spectrum_second) {
            const fr_status st =
                export_spectrum(eq.second.values, spectrum_second, cap_second, "spectrum 2");
            if (st != FR_OK) return st;
        }
        return FR_OK;
    });
}

fr_status fr_two_mode_criterion(const fr_state* state, double* out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        if (state->v.n != 2) throw std::invalid_argument("criterion is for 2-mode states");
        *out = two_mode_criterion(
            {state->v.amp[0], state->v.amp[1], state->v.amp[2], state->v.amp[3]});
        return FR_OK;
    });
}

fr_status fr_entropy_report(const fr_state* state, const int* subset, int subset_len,
                            double* s1_bits, double* s2_bits, double* violation_bits) {
    return guarded([&]() -> fr_status {
        if (state == nullptr) throw std::invalid_argument("null pointer");
        const Bipartition part = subset_bipartition(state->v, subset, subset_len);
        const EntropyReport rep = entropy_report(state->v, part);
        if (s1_bits) *s1_bits = rep.s1_bits;
        if (s2_bits) *s2_bits = rep.s2_bits;
        if (violation_bits) *violation_bits = rep.violation_bits;
        return FR_OK;
    });
}

fr_status fr_canonical_purification(const double* lambda, size_t lambda_len, int m,
                                    int modes, fr_state** out) {
    return guarded([&]() -> fr_status {
        if (lambda == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        const std::vector<double> vals(lambda, lambda + lambda_len);
        *out = new fr_state{canonical_ssr_purification(vals, Bipartition{m, modes, {}})};
        return FR_OK;
    });
}

fr_status fr_purify(const fr_state* state, const int* subset, int subset_len, double tol,
                    fr_purification* out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        const Bipartition part = subset_bipartition(state->v, subset, subset_len);
        ReconstructOptions opts;
        opts.tol = tol;
        const PurificationResult pr = reconstruct_locals(state->v, part, opts);
        out->phi = new fr_state{pr.phi};
        out->u1 = new fr_matrix{pr.u1};
        out->u2 = new fr_matrix{pr.u2};
        out->reconstructed = new fr_state{pr.reconstructed};
        out->fidelity = pr.fidelity;
        out->marginal_gap1 = pr.marginal_gap1;
        out->marginal_gap2 = pr.marginal_gap2;
        out->simple_spectrum = pr.simple_spectrum ? 1 : 0;
        out->recovered = pr.recovered ? 1 : 0;
        out->used_fallback = pr.used_fallback ? 1 : 0;
        return FR_OK;
    });
}

void fr_purification_free(fr_purification* p) {
    if (p == nullptr) return;
    fr_state_free(p->phi);
    fr_matrix_free(p->u1);
    fr_matrix_free(p->u2);
    fr_state_free(p->reconstructed);
    p->phi = nullptr;
    p->u1 = nullptr;
    p->u2 = nullptr;
    p->reconstructed = nullptr;
}

fr_status fr_rdm_matrix(const fr_state* state, int p, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_matrix{rdm_matrix(state->v, p).m};
        return FR_OK;
    });
}

fr_status fr_rdm_operator(const fr_state* state, int p, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (state == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_matrix{rdm_operator(state->v, p)};
        return FR_OK;
    });
}

fr_status fr_phi_pow(const fr_matrix* rho, int modes, int p, fr_matrix** out) {
    return guarded([&]() -> fr_status {
        if (rho == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        *out = new fr_matrix{phi_pow(rho->m, modes, p)};
        return FR_OK;
    });
}

fr_status fr_check_fixed_n(const fr_state* state, int p, double tol, int* particle_number,
                           double* max_gap, double* factor, int* pass) {
    return guarded([&]() -> fr_status {
        if (state == nullptr) throw std::invalid_argument("null pointer");
        const FixedNReport rep = check_fixed_n_reduction(state->v, p, tol);
        if (particle_number) *particle_number = rep.N;
        if (max_gap) *max_gap = rep.max_gap;
        if (factor) *factor = rep.factor;
        if (pass) *pass = rep.pass ? 1 : 0;
        return FR_OK;
    });
}

fr_status fr_natural_occupations(const fr_state* state, double* values, size_t capacity) {
    return guarded([&]() -> fr_status {
        if (state == nullptr) throw std::invalid_argument("null pointer");
        return export_spectrum(natural_occupations(state->v), values, capacity,
                               "occupations");
    });
}

fr_status fr_pauli_check(const fr_state* state, double tol, int* asserted, int* pass,
                         char* description, size_t capacity) {
    return guarded([&]() -> fr_status {
        if (state == nullptr) throw std::invalid_argument("null pointer");
        const PauliReport rep = pauli_constraint_check(state->v, tol);
        if (asserted) *asserted = rep.asserted ? 1 : 0;
        if (pass) *pass = rep.pass ? 1 : 0;
        copy_string(rep.description, description, capacity);
        return FR_OK;
    });
}

fr_status fr_conjecture_trial(const fr_state* state, int p, double agree_tol,
                              double disagree_floor, double* max_gap, int* verdict) {
    return guarded([&]() -> fr_status {
        if (state == nullptr) throw std::invalid_argument("null pointer");
        ConjectureOptions opts;
        opts.agree_tol = agree_tol;
        opts.disagree_floor = disagree_floor;
        const ConjectureTrial t = conjecture_trial(state->v, p, opts);
        if (max_gap) *max_gap = t.max_gap;
        if (verdict) {
            switch (t.verdict) {
            case Verdict::Agree: *verdict = 0; break;
            case Verdict::Disagree: *verdict = 1; break;
            case Verdict::Inconclusive: *verdict = 2; break;
            }
        }
        return FR_OK;
    });
}

fr_status fr_verify_suite(const char* suite, uint64_t trials, int n_max, uint64_t seed,
                          double tol, fr_suite_result* out) {
    return guarded([&]() -> fr_status {
        if (suite == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        const auto s = suite_from_string(suite);
        if (!s) throw std::invalid_argument("unknown suite: " + std::string(suite));
        SuiteParams params;
        params.trials = trials;
        params.n_max = n_max;
        params.seed = seed;
        params.tol = tol;
        const SuiteResult r = run_suite(*s, params);
        out->passed = r.passed ? 1 : 0;
        out->trials_run = r.trials_run;
        out->max_gap = r.max_gap;
        out->has_counterexample = r.has_counterexample ? 1 : 0;
        out->cx_seed = r.cx_seed;
        copy_string(r.cx_description, out->cx_description, sizeof(out->cx_description));
        return FR_OK;
    });
}

fr_status fr_fuzz_campaign(int n_min, int n_max, int p, uint64_t trials,
                           const char* ensemble, uint64_t seed, const char* record_path,
                           int resume, int threads, double agree_tol, double disagree_floor,
                           fr_fuzz_summary* out) {
    return guarded([&]() -> fr_status {
        if (ensemble == nullptr || out == nullptr) throw std::invalid_argument("null pointer");
        const auto ens = ensemble_from_string(ensemble);
        if (!ens) throw std::invalid_argument("unknown ensemble: " + std::string(ensemble));
        FuzzParams params;
        params.n_min = n_min;
        params.n_max = n_max;
        params.p = p;
        params.trials = trials;
        params.ensemble = *ens;
        params.seed = seed;
        params.record_path = record_path ? record_path : "";
        params.resume = resume != 0;
        params.threads = threads > 0 ? threads : default_thread_count();
        params.conjecture.agree_tol = agree_tol;
        params.conjecture.disagree_floor = disagree_floor;
        const FuzzSummary s = run_fuzz_campaign(params);
        out->trials_run = s.trials_run;
        out->trials_total = s.trials_total;
        out->agree = s.agree;
        out->disagree = s.disagree;
        out->inconclusive = s.inconclusive;
        out->worst_gap = s.worst_gap;
        out->has_first_disagree = s.has_first_disagree ? 1 : 0;
        out->first_disagree_index = s.first_disagree_index;
        out->first_disagree_seed = s.first_disagree_seed;
        out->first_disagree_n = s.first_disagree_n;
        out->first_disagree_p = s.first_disagree_p;
        out->first_disagree_gap = s.first_disagree_gap;
        return FR_OK;
    });
}

} // extern "C"
