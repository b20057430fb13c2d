// fermred command-line tool: state I/O, mode/particle reductions,
// verification suites, purification, and the spectrum-coincidence fuzzer.
// Talks to the core exclusively through the C API in fermred.h.
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fermred.h"

using json = nlohmann::ordered_json;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1;
    bool emit_json = false;
    bool quiet = false;
    int max_modes = 8; // dense matrices get large quickly; override to go higher
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int fail_usage(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

bool over_mode_cap(const GlobalOpts& g, int modes) { return modes > g.max_modes; }

int fail_mode_cap(const GlobalOpts& g, int modes) {
    return fail_usage(std::to_string(modes) + " modes exceeds the default cap of " +
                      std::to_string(g.max_modes) + "; raise it with --max-modes");
}

int fail_api(fr_status st) {
    std::cerr << "error: " << fr_last_error() << "\n";
    // precondition violations are mathematical findings, not usage errors
    return st == FR_ERR_PRECONDITION ? 1 : 2;
}

std::vector<int> parse_subset(const std::string& csv, int modes_m) {
    std::vector<int> subset;
    if (!csv.empty()) {
        std::size_t pos = 0;
        while (pos < csv.size()) {
            std::size_t next = csv.find(',', pos);
            if (next == std::string::npos) next = csv.size();
            subset.push_back(std::stoi(csv.substr(pos, next - pos)));
            pos = next + 1;
        }
    } else {
        for (int s = 1; s <= modes_m; ++s) subset.push_back(s);
    }
    return subset;
}

json matrix_to_json(const fr_matrix* m) {
    const std::size_t rows = fr_matrix_rows(m);
    const std::size_t cols = fr_matrix_cols(m);
    std::vector<double> buf(2 * rows * cols);
    fr_matrix_get(m, buf.data(), buf.size());
    json out = json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < cols; ++j) {
            row.push_back(buf[2 * (i * cols + j)]);
            row.push_back(buf[2 * (i * cols + j) + 1]);
        }
        out.push_back(row);
    }
    return out;
}

void print_matrix(const fr_matrix* m, const std::string& name) {
    const std::size_t rows = fr_matrix_rows(m);
    const std::size_t cols = fr_matrix_cols(m);
    std::vector<double> buf(2 * rows * cols);
    fr_matrix_get(m, buf.data(), buf.size());
    std::printf("%s (%zux%zu):\n", name.c_str(), rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::printf(" ");
        for (std::size_t j = 0; j < cols; ++j)
            std::printf(" (%s, %s)", fmt17(buf[2 * (i * cols + j)]).c_str(),
                        fmt17(buf[2 * (i * cols + j) + 1]).c_str());
        std::printf("\n");
    }
}

void print_spectrum(const std::vector<double>& vals, const std::string& name) {
    std::printf("%s:", name.c_str());
    for (double v : vals) std::printf(" %s", fmt17(v).c_str());
    std::printf("\n");
}

json spectrum_to_json(const std::vector<double>& vals) {
    json out = json::array();
    for (double v : vals) out.push_back(v);
    return out;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start)
            .count();
    }
};

void emit_report(const GlobalOpts& g, const std::string& command, json tolerances,
                 json payload, double wall_ms) {
    if (!g.emit_json) return;
    json rep;
    rep["command"] = command;
    rep["seed"] = g.seed;
    rep["version"] = fr_version();
    rep["tolerances"] = std::move(tolerances);
    rep["payload"] = std::move(payload);
    rep["wall_ms"] = wall_ms;
    std::cout << rep.dump(2) << "\n";
}

// ---- reduce ------------------------------------------------------------

int cmd_reduce(const GlobalOpts& g, const std::string& state_path, int modes_m,
               const std::string& subset_csv, const std::string& block, double tol) {
    Timer timer;
    fr_state* state = nullptr;
    fr_status st = fr_state_load(state_path.c_str(), &state);
    if (st != FR_OK) return fail_api(st);
    if (over_mode_cap(g, fr_state_modes(state))) {
        const int modes = fr_state_modes(state);
        fr_state_free(state);
        return fail_mode_cap(g, modes);
    }

    std::vector<int> subset;
    try {
        subset = parse_subset(subset_csv, modes_m);
    } catch (const std::exception&) {
        fr_state_free(state);
        return fail_usage("could not parse --subset");
    }

    json payload;
    payload["modes"] = fr_state_modes(state);
    payload["subset"] = subset;
    int rc = 0;

    const bool want_first = block == "first" || block == "both";
    const bool want_second = block == "second" || block == "both";
    for (int b = 0; b < 2; ++b) {
        if ((b == 0 && !want_first) || (b == 1 && !want_second)) continue;
        fr_matrix* red = nullptr;
        st = fr_reduce_modes(state, subset.data(), static_cast<int>(subset.size()), b, &red);
        if (st != FR_OK) {
            fr_state_free(state);
            return fail_api(st);
        }
        std::vector<double> spec(fr_matrix_rows(red));
        fr_matrix_spectrum(red, spec.data(), spec.size());
        const char* name = b == 0 ? "first" : "second";
        if (!g.quiet && !g.emit_json) {
            print_matrix(red, std::string("reduced density matrix, ") + name + " block");
            print_spectrum(spec, std::string("spectrum ") + name);
        }
        payload[name] = {{"matrix", matrix_to_json(red)}, {"spectrum", spectrum_to_json(spec)}};
        fr_matrix_free(red);
    }

    if (block == "both") {
        int equal = 0;
        double gap = 0.0;
        st = fr_equispectral(state, subset.data(), static_cast<int>(subset.size()), tol,
                             &equal, &gap, nullptr, 0, nullptr, 0);
        if (st == FR_OK) {
            payload["equispectral"] = equal != 0;
            payload["spectral_gap"] = gap;
            if (!g.quiet && !g.emit_json)
                std::printf("equispectral: %s (max eigenvalue gap %s)\n",
                            equal ? "yes" : "no", fmt17(gap).c_str());
        }
        double s1 = 0, s2 = 0, viol = 0;
        st = fr_entropy_report(state, subset.data(), static_cast<int>(subset.size()), &s1,
                               &s2, &viol);
        if (st == FR_OK) {
            payload["entropy_bits"] = {{"first", s1}, {"second", s2}, {"difference", viol}};
            if (!g.quiet && !g.emit_json)
                std::printf("entropy: S1=%s S2=%s |S1-S2|=%s bits\n", fmt17(s1).c_str(),
                            fmt17(s2).c_str(), fmt17(viol).c_str());
        }
    }

    fr_state_free(state);
    emit_report(g, "reduce", {{"spectra", tol}}, payload, timer.ms());
    return rc;
}

// ---- verify ------------------------------------------------------------

int cmd_verify(const GlobalOpts& g, const std::string& suite, std::uint64_t trials, int n_max,
               double tol) {
    Timer timer;
    fr_suite_result res{};
    const fr_status st = fr_verify_suite(suite.c_str(), trials, n_max, g.seed, tol, &res);
    if (st != FR_OK) return fail_api(st);

    json payload;
    payload["suite"] = suite;
    payload["passed"] = res.passed != 0;
    payload["trials_run"] = res.trials_run;
    payload["max_gap"] = res.max_gap;
    if (res.has_counterexample) {
        payload["counterexample"] = {{"seed", res.cx_seed},
                                     {"description", res.cx_description}};
    }
    if (!g.emit_json) {
        std::printf("suite %s: %s (%" PRIu64 " trials, max gap %s)\n", suite.c_str(),
                    res.passed ? "pass" : "FAIL", res.trials_run,
                    fmt17(res.max_gap).c_str());
        if (res.has_counterexample)
            std::printf("counterexample: seed=%" PRIu64 " %s\n", res.cx_seed,
                        res.cx_description);
    }
    emit_report(g, "verify", {{"tol", tol}}, payload, timer.ms());
    return res.passed ? 0 : 1;
}

// ---- fuzz --------------------------------------------------------------

int cmd_fuzz(const GlobalOpts& g, int n_min, int n_max, const std::string& p_arg,
             std::uint64_t trials, const std::string& ensemble, const std::string& out_path,
             bool resume, int threads, double agree_tol, double disagree_floor) {
    Timer timer;
    if (over_mode_cap(g, n_max)) return fail_mode_cap(g, n_max);
    int p = 0;
    if (p_arg != "all") {
        try {
            p = std::stoi(p_arg);
        } catch (const std::exception&) {
            return fail_usage("--p must be 'all' or a positive integer");
        }
        if (p < 1) return fail_usage("--p must be 'all' or a positive integer");
    }
    fr_fuzz_summary sum{};
    const fr_status st = fr_fuzz_campaign(
        n_min, n_max, p, trials, ensemble.c_str(), g.seed,
        out_path.empty() ? nullptr : out_path.c_str(), resume ? 1 : 0, threads, agree_tol,
        disagree_floor, &sum);
    if (st != FR_OK) return fail_api(st);

    json payload;
    payload["trials_total"] = sum.trials_total;
    payload["trials_run"] = sum.trials_run;
    payload["agree"] = sum.agree;
    payload["disagree"] = sum.disagree;
    payload["inconclusive"] = sum.inconclusive;
    payload["worst_gap"] = sum.worst_gap;
    if (sum.has_first_disagree) {
        payload["first_disagree"] = {{"index", sum.first_disagree_index},
                                     {"seed", sum.first_disagree_seed},
                                     {"n", sum.first_disagree_n},
                                     {"p", sum.first_disagree_p},
                                     {"max_gap", sum.first_disagree_gap}};
    }
    if (!g.emit_json) {
        std::printf("fuzz: %" PRIu64 "/%" PRIu64 " trials (this run/total), agree=%" PRIu64
                    " disagree=%" PRIu64 " inconclusive=%" PRIu64 ", worst gap %s\n",
                    sum.trials_run, sum.trials_total, sum.agree, sum.disagree,
                    sum.inconclusive, fmt17(sum.worst_gap).c_str());
        if (sum.has_first_disagree)
            std::printf("DISAGREEMENT FOUND: trial=%" PRIu64 " seed=%" PRIu64
                        " n=%d p=%d gap=%s\n",
                        sum.first_disagree_index, sum.first_disagree_seed,
                        sum.first_disagree_n, sum.first_disagree_p,
                        fmt17(sum.first_disagree_gap).c_str());
    }
    emit_report(g, "fuzz", {{"agree_tol", agree_tol}, {"disagree_floor", disagree_floor}},
                payload, timer.ms());
    return 0; // a disagreement is a finding, not a tool failure
}

// ---- purify ------------------------------------------------------------

int cmd_purify(const GlobalOpts& g, const std::string& state_path, int modes_m,
               const std::string& subset_csv, double tol) {
    Timer timer;
    fr_state* state = nullptr;
    fr_status st = fr_state_load(state_path.c_str(), &state);
    if (st != FR_OK) return fail_api(st);
    if (over_mode_cap(g, fr_state_modes(state))) {
        const int modes = fr_state_modes(state);
        fr_state_free(state);
        return fail_mode_cap(g, modes);
    }
    std::vector<int> subset;
    try {
        subset = parse_subset(subset_csv, modes_m);
    } catch (const std::exception&) {
        fr_state_free(state);
        return fail_usage("could not parse --subset");
    }

    fr_purification pur{};
    st = fr_purify(state, subset.data(), static_cast<int>(subset.size()), tol, &pur);
    if (st == FR_ERR_PRECONDITION) {
        // show the mismatching spectra
        const int n = fr_state_modes(state);
        const std::size_t d1 = std::size_t{1} << subset.size();
        const std::size_t d2 = std::size_t{1} << (n - subset.size());
        std::vector<double> s1(d1), s2(d2);
        int equal = 0;
        double gap = 0.0;
        fr_equispectral(state, subset.data(), static_cast<int>(subset.size()), tol, &equal,
                        &gap, s1.data(), s1.size(), s2.data(), s2.size());
        std::fprintf(stderr, "input is not equispectral (gap %s)\n", fmt17(gap).c_str());
        if (!g.quiet) {
            print_spectrum(s1, "spectrum first");
            print_spectrum(s2, "spectrum second");
        }
        fr_state_free(state);
        return 1;
    }
    if (st != FR_OK) {
        fr_state_free(state);
        return fail_api(st);
    }

    json payload;
    payload["fidelity"] = pur.fidelity;
    payload["marginal_gap_first"] = pur.marginal_gap1;
    payload["marginal_gap_second"] = pur.marginal_gap2;
    payload["simple_spectrum"] = pur.simple_spectrum != 0;
    payload["recovered"] = pur.recovered != 0;
    payload["used_fallback"] = pur.used_fallback != 0;
    {
        const std::size_t d = std::size_t{1} << fr_state_modes(pur.phi);
        std::vector<double> amps(2 * d);
        fr_state_amplitudes(pur.phi, amps.data(), amps.size());
        json phi = json::array();
        for (double v : amps) phi.push_back(v);
        payload["phi_amplitudes"] = phi;
    }
    payload["u1"] = matrix_to_json(pur.u1);
    payload["u2"] = matrix_to_json(pur.u2);

    if (!g.emit_json) {
        std::printf("fidelity |<psi|U2 U1 phi>| = %s\n", fmt17(pur.fidelity).c_str());
        std::printf("marginal gaps: first %s, second %s\n", fmt17(pur.marginal_gap1).c_str(),
                    fmt17(pur.marginal_gap2).c_str());
        std::printf("simple spectrum: %s, recovered: %s\n",
                    pur.simple_spectrum ? "yes" : "no", pur.recovered ? "yes" : "no");
        if (!g.quiet) {
            print_matrix(pur.u1, "U1");
            print_matrix(pur.u2, "U2");
        }
    }
    const bool matched = pur.marginal_gap1 <= tol && pur.marginal_gap2 <= tol;
    if (!matched)
        std::fprintf(stderr,
                     "marginals of the reconstruction do not match within %s\n",
                     fmt17(tol).c_str());
    fr_purification_free(&pur);
    fr_state_free(state);
    emit_report(g, "purify", {{"tol", tol}}, payload, timer.ms());
    return matched ? 0 : 1;
}

// ---- sample ------------------------------------------------------------

int cmd_sample(const GlobalOpts& g, int modes, const std::string& ensemble,
               const std::string& parity, int particles, const std::string& out_path) {
    Timer timer;
    if (over_mode_cap(g, modes)) return fail_mode_cap(g, modes);
    int param = 0;
    if (ensemble == "ssr") {
        if (parity != "even" && parity != "odd")
            return fail_usage("--parity even|odd is required for the ssr ensemble");
        param = parity == "even" ? 0 : 1;
    } else if (ensemble == "fixed-N") {
        if (particles < 0) return fail_usage("--particles is required for fixed-N");
        param = particles;
    }
    fr_state* state = nullptr;
    fr_status st = fr_state_sample(modes, ensemble.c_str(), g.seed, param, &state);
    if (st != FR_OK) return fail_api(st);
    if (!out_path.empty()) {
        st = fr_state_save(state, out_path.c_str());
        if (st != FR_OK) {
            fr_state_free(state);
            return fail_api(st);
        }
    }
    json payload;
    payload["modes"] = modes;
    payload["ensemble"] = ensemble;
    {
        const std::size_t d = std::size_t{1} << modes;
        std::vector<double> amps(2 * d);
        fr_state_amplitudes(state, amps.data(), amps.size());
        if (out_path.empty() && !g.emit_json) {
            std::printf("modes %d\n", modes);
            for (std::size_t i = 0; i < d; ++i) {
                if (amps[2 * i] == 0.0 && amps[2 * i + 1] == 0.0) continue;
                std::string bits;
                for (int b = modes - 1; b >= 0; --b)
                    bits += ((i >> b) & 1) ? '1' : '0';
                std::printf("%s %s %s\n", bits.c_str(), fmt17(amps[2 * i]).c_str(),
                            fmt17(amps[2 * i + 1]).c_str());
            }
        }
        json arr = json::array();
        for (double v : amps) arr.push_back(v);
        payload["amplitudes"] = arr;
    }
    fr_state_free(state);
    emit_report(g, "sample", json::object(), payload, timer.ms());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fermionic mode- and particle-reduction toolkit"};
    app.fallthrough(true);
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "campaign seed (default 1)");
    app.add_flag("--json", g.emit_json, "machine-readable report on stdout");
    app.add_flag("--quiet", g.quiet, "suppress matrix dumps");
    app.add_option("--max-modes", g.max_modes,
                   "largest accepted mode count (default 8, library limit 12)");
    double global_tol = 0.0;
    auto* global_tol_opt =
        app.add_option("--tol", global_tol, "default tolerance for the chosen command");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "mode-reduced density matrices and spectra");
    std::string r_state, r_subset, r_block = "both";
    int r_modes = 0;
    double r_tol = 1e-9;
    reduce->add_option("--state", r_state, "state file")->required();
    reduce->add_option("--modes", r_modes, "first block = modes 1..m");
    reduce->add_option("--subset", r_subset, "first block as a mode list, e.g. 1,3");
    reduce->add_option("--block", r_block, "first|second|both (default both)");
    auto* r_tol_opt =
        reduce->add_option("--tol", r_tol, "spectral comparison tolerance (default 1e-9)");

    // verify
    auto* verify = app.add_subcommand("verify", "run a property suite");
    std::string v_suite;
    std::uint64_t v_trials = 200;
    int v_nmax = 5;
    double v_tol = 1e-9;
    verify->add_option("--suite", v_suite,
                       "car|matrix-units|theorem1|theorem2|prop4|prop5|pauli")
        ->required();
    verify->add_option("--trials", v_trials, "trial count (default 200)");
    verify->add_option("--n-max", v_nmax, "largest mode count (default 5)");
    auto* v_tol_opt = verify->add_option("--tol", v_tol, "tolerance (default 1e-9)");

    // fuzz
    auto* fuzz = app.add_subcommand("fuzz", "spectrum-coincidence conjecture campaign");
    int f_nmin = 2, f_nmax = 4, f_threads = 0;
    std::string f_p = "all", f_ensemble = "general", f_out;
    std::uint64_t f_trials = 1000;
    bool f_resume = false;
    double f_agree = 1e-8, f_floor = 1e-4;
    fuzz->add_option("--n-min", f_nmin, "smallest mode count (default 2)");
    fuzz->add_option("--n-max", f_nmax, "largest mode count (default 4)");
    fuzz->add_option("--p", f_p, "'all' or a fixed reduction order (default all)");
    fuzz->add_option("--trials", f_trials, "trial count (default 1000)");
    fuzz->add_option("--ensemble", f_ensemble, "general|ssr|fixed-N (default general)");
    fuzz->add_option("--out", f_out, "append-only record file");
    fuzz->add_flag("--resume", f_resume, "continue an interrupted campaign");
    fuzz->add_option("--threads", f_threads, "worker threads (default FERMRED_THREADS or 1)");
    fuzz->add_option("--agree-tol", f_agree, "agreement tolerance (default 1e-8)");
    fuzz->add_option("--disagree-floor", f_floor, "disagreement floor (default 1e-4)");

    // purify
    auto* purify = app.add_subcommand("purify", "constructive purification of a state");
    std::string p_state, p_subset;
    int p_modes = 0;
    double p_tol = 1e-9;
    purify->add_option("--state", p_state, "state file")->required();
    purify->add_option("--modes", p_modes, "first block = modes 1..m");
    purify->add_option("--subset", p_subset, "first block as a mode list");
    auto* p_tol_opt = purify->add_option("--tol", p_tol, "tolerance (default 1e-9)");

    // sample
    auto* sample = app.add_subcommand("sample", "draw a reproducible random state");
    int s_modes = 2, s_particles = -1;
    std::string s_ensemble = "general", s_parity, s_out;
    sample->add_option("--modes", s_modes, "mode count")->required();
    sample->add_option("--ensemble", s_ensemble, "general|ssr|fixed-N (default general)");
    sample->add_option("--parity", s_parity, "even|odd (ssr ensemble)");
    sample->add_option("--particles", s_particles, "particle number (fixed-N ensemble)");
    sample->add_option("--out", s_out, "write a state file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (global_tol_opt->count() > 0) {
        if (r_tol_opt->count() == 0) r_tol = global_tol;
        if (v_tol_opt->count() == 0) v_tol = global_tol;
        if (p_tol_opt->count() == 0) p_tol = global_tol;
    }

    try {
        if (reduce->parsed()) {
            if (r_modes <= 0 && r_subset.empty())
                return fail_usage("reduce needs --modes or --subset");
            if (r_block != "first" && r_block != "second" && r_block != "both")
                return fail_usage("--block must be first, second or both");
            return cmd_reduce(g, r_state, r_modes, r_subset, r_block, r_tol);
        }
        if (verify->parsed()) return cmd_verify(g, v_suite, v_trials, v_nmax, v_tol);
        if (fuzz->parsed())
            return cmd_fuzz(g, f_nmin, f_nmax, f_p, f_trials, f_ensemble, f_out, f_resume,
                            f_threads, f_agree, f_floor);
        if (purify->parsed()) {
            if (p_modes <= 0 && p_subset.empty())
                return fail_usage("purify needs --modes or --subset");
            return cmd_purify(g, p_state, p_modes, p_subset, p_tol);
        }
        if (sample->parsed())
            return cmd_sample(g, s_modes, s_ensemble, s_parity, s_particles, s_out);
    } catch (const std::exception& e) {
        return fail_usage(e.what());
    }
    return 2;
}
