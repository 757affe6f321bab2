#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "apc/apcode.hpp"
#include "apc/detail/parallel.hpp"
#include "apc/ensemble.hpp"
#include "apc/errors.hpp"
#include "apc/listrecovery.hpp"
#include "apc/numeric.hpp"
#include "apc/potential.hpp"
#include "apc/rng.hpp"

namespace apc {

inline constexpr std::uint64_t kAutoExactCertCap = 100000;  // C(q,ell)^n below which trials certify exactly

/// Flat key = value config for an experiment run. '#' starts a comment.
/// Keys: q, n, ell, rho, L, eta (number or "min"), ensemble, trials,
/// master_seed, check_mode (exact|random|auto), check_trials, output,
/// compute_potential.
struct ExperimentConfig {
    int q = 0;
    int n = 0;
    int ell = 0;
    double rho = 0.0;
    std::uint64_t L = 0;
    double eta = 0.0;
    bool eta_is_min = true;
    std::string ensemble;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    std::string check_mode = "auto";
    std::uint64_t check_trials = 200;
    std::string output;
    bool compute_potential = false;

    static ExperimentConfig parse(std::istream& in) {
        ExperimentConfig cfg;
        bool have_q = false, have_n = false, have_ell = false, have_rho = false, have_L = false, have_trials = false;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            if (eq == std::string::npos)
                throw validation_error("config line " + std::to_string(lineno) + ": expected key = value");
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t\r");
                const auto e = s.find_last_not_of(" \t\r");
                return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
            };
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            try {
                if (key == "q") { cfg.q = std::stoi(value); have_q = true; }
                else if (key == "n") { cfg.n = std::stoi(value); have_n = true; }
                else if (key == "ell") { cfg.ell = std::stoi(value); have_ell = true; }
                else if (key == "rho") { cfg.rho = std::stod(value); have_rho = true; }
                else if (key == "L") { cfg.L = std::stoull(value); have_L = true; }
                else if (key == "eta") {
                    if (value == "min") { cfg.eta_is_min = true; }
                    else { cfg.eta = std::stod(value); cfg.eta_is_min = false; }
                }
                else if (key == "ensemble") cfg.ensemble = value;
                else if (key == "trials") { cfg.trials = std::stoull(value); have_trials = true; }
                else if (key == "master_seed") cfg.master_seed = std::stoull(value);
                else if (key == "check_mode") cfg.check_mode = value;
                else if (key == "check_trials") cfg.check_trials = std::stoull(value);
                else if (key == "output") cfg.output = value;
                else if (key == "compute_potential") cfg.compute_potential = (value == "true" || value == "1");
                else throw validation_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            } catch (const validation_error&) {
                throw;
            } catch (const std::exception&) {
                throw validation_error("config line " + std::to_string(lineno) + ": cannot parse value '" + value +
                                       "' for key '" + key + "'");
            }
        }
        if (!have_q || !have_n || !have_ell || !have_rho || !have_L || cfg.ensemble.empty() || !have_trials)
            throw validation_error("config: q, n, ell, rho, L, ensemble and trials are required");
        if (cfg.trials < 1) throw validation_error("config: trials must be >= 1");
        if (cfg.check_mode != "auto" && cfg.check_mode != "exact" && cfg.check_mode != "random")
            throw validation_error("config: check_mode must be auto, exact or random");
        return cfg;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("config: cannot open '" + path + "'");
        return parse(in);
    }
};

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    long long k = 0;
    std::uint64_t max_count = 0;
    bool is_lr = false;
    std::optional<double> potential_log;  // populated when compute_potential is on
    double elapsed_ms = 0.0;
};

struct ExperimentSummary {
    std::uint64_t trials = 0;
    std::uint64_t failures = 0;
    double empirical_failure_rate = 0.0;
    double theorem_bound_raw = 0.0;
    double theorem_bound = 0.0;
    bool vacuous = true;
    std::uint64_t randomness_bits_per_trial = 0;
    double wall_time_ms = 0.0;
    long long k = 0;
    double rate = 0.0;
    double eta = 0.0;
    double eta_min_value = 0.0;
    bool eta_ok = false;
    std::string certification;  // "exact" or "randomized"
    std::uint64_t master_seed = 0;
    std::string master_seed_source;  // "config" or "env"
    std::string ensemble;
    int q = 0;
    int n = 0;
    int ell = 0;
    double rho = 0.0;
    std::uint64_t L = 0;

    friend bool operator==(const ExperimentSummary&, const ExperimentSummary&) = default;
};

/// Stable per-trial seed: a multiply-xor-shift chain over (master, index).
/// Bijective in the index for fixed master, hence collision-free.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// Samples one matrix per trial from the configured ensemble, certifies the
/// resulting code, and aggregates against the theoretical failure bound.
/// Fully reproducible from (config, master_seed); trials run in parallel with
/// generators derived per index.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg, std::vector<TrialRecord>* records_out = nullptr) {
    const auto t_start = std::chrono::steady_clock::now();
    const Ensemble ensemble = Ensemble::parse(cfg.ensemble);
    if (ensemble.q() != cfg.q)
        throw validation_error("run_experiment: ensemble alphabet " + std::to_string(ensemble.q()) +
                               " does not match q = " + std::to_string(cfg.q));
    if (cfg.ell < 1 || cfg.ell >= cfg.q) throw validation_error("run_experiment: need 1 <= ell < q");

    std::uint64_t master = cfg.master_seed;
    std::string master_source = "config";
    if (const char* env = std::getenv("APC_MASTER_SEED")) {
        master = std::stoull(env);
        master_source = "env";
    }

    const double eta = cfg.eta_is_min ? eta_min(cfg.q, cfg.n) : cfg.eta;
    // rate from the plan formula with the configured eta; feasibility means a
    // positive rate and at least one message bit. Whether eta also clears
    // eta_min (which the probability guarantee needs) is reported separately.
    const double log_q_choose =
        ln_binomial(static_cast<std::uint64_t>(cfg.q), static_cast<std::uint64_t>(cfg.ell)) /
        std::log(static_cast<double>(cfg.q));
    const double R = 1.0 - capacity(cfg.q, cfg.ell, cfg.rho) -
                     (log_q_choose + 1.0 / cfg.n) / (static_cast<double>(cfg.L) + 1.0) - eta;
    if (R <= 0.0)
        throw infeasible_error("run_experiment: configured parameters give non-positive rate (deficit " +
                                   std::to_string(-R) + ")",
                               -R);
    const long long k = static_cast<long long>(std::floor(R * std::log2(static_cast<double>(cfg.q)) * cfg.n + 1e-9));
    if (k < 1) throw infeasible_error("run_experiment: rate too small for one message bit", 1.0 - R);
    if (k > kMaxMessageBits)
        throw capacity_error("run_experiment: k = " + std::to_string(k) + " exceeds the 2^" +
                             std::to_string(kMaxMessageBits) + "-word cap");

    std::string certification = cfg.check_mode;
    if (certification == "auto") {
        const std::uint64_t space = detail::unrestricted_space(cfg.q, cfg.ell, cfg.n, kAutoExactCertCap);
        certification = space <= kAutoExactCertCap ? "exact" : "random";
    }
    const bool exact_cert = certification == "exact";

    const std::optional<PotentialParams> pot_params =
        cfg.compute_potential ? std::optional<PotentialParams>(make_params(cfg.q, cfg.n, cfg.ell, cfg.L, cfg.rho))
                              : std::nullopt;

    std::vector<TrialRecord> records(cfg.trials);
    const LRParams lr{cfg.rho, cfg.ell, cfg.L};
    detail::run_chunks(cfg.trials, [&](std::uint64_t i) {
        const auto trial_start = std::chrono::steady_clock::now();
        TrialRecord& rec = records[i];
        rec.trial = i;
        rec.seed = derive_seed(master, i);
        rec.k = k;
        Rng rng(rec.seed);
        const PermMatrix mat = sample_matrix(ensemble, static_cast<int>(k), cfg.n, rng);
        const CodeMultiset code = build_code(mat);
        const auto [ok, verdict] = exact_cert ? is_list_recoverable(code, lr)
                                              : is_list_recoverable_randomized(code, lr, cfg.check_trials, rng);
        rec.max_count = verdict.max_count;
        rec.is_lr = ok;
        if (pot_params) rec.potential_log = potential_K(code, *pot_params, TestMode::exact).log_k;
        rec.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - trial_start).count();
    });

    ExperimentSummary s;
    s.trials = cfg.trials;
    for (const auto& rec : records)
        if (!rec.is_lr) ++s.failures;
    s.empirical_failure_rate = static_cast<double>(s.failures) / static_cast<double>(cfg.trials);
    const FailureBound fb = failure_bound(cfg.q, static_cast<std::uint64_t>(k), cfg.n, eta);
    s.theorem_bound_raw = fb.raw;
    s.theorem_bound = fb.value;
    s.eta = eta;
    s.eta_min_value = eta_min(cfg.q, cfg.n);
    s.eta_ok = eta >= s.eta_min_value - 1e-12;
    // the bound only means something when eta clears its floor; anything else
    // is reported but flagged vacuous
    s.vacuous = fb.vacuous || !s.eta_ok;
    s.randomness_bits_per_trial = ensemble.random_bits_cost(static_cast<int>(k), cfg.n);
    s.k = k;
    s.rate = R;
    s.certification = certification;
    s.master_seed = master;
    s.master_seed_source = master_source;
    s.ensemble = cfg.ensemble;
    s.q = cfg.q;
    s.n = cfg.n;
    s.ell = cfg.ell;
    s.rho = cfg.rho;
    s.L = cfg.L;
    s.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
    if (records_out) *records_out = std::move(records);
    return s;
}

inline void emit_csv(const std::vector<TrialRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("emit_csv: cannot open '" + path + "'");
    out << "trial,seed,k,max_count,is_lr,elapsed_ms\n";
    for (const auto& r : records) {
        out << r.trial << "," << r.seed << "," << r.k << "," << r.max_count << "," << (r.is_lr ? 1 : 0) << ","
            << r.elapsed_ms << "\n";
    }
    if (!out) throw io_error("emit_csv: write failed for '" + path + "'");
}

inline nlohmann::json summary_to_json(const ExperimentSummary& s) {
    return nlohmann::json{{"trials", s.trials},
                          {"failures", s.failures},
                          {"empirical_failure_rate", s.empirical_failure_rate},
                          {"theorem_bound_raw", s.theorem_bound_raw},
                          {"theorem_bound", s.theorem_bound},
                          {"vacuous", s.vacuous},
                          {"randomness_bits_per_trial", s.randomness_bits_per_trial},
                          {"wall_time_ms", s.wall_time_ms},
                          {"k", s.k},
                          {"rate", s.rate},
                          {"eta", s.eta},
                          {"eta_min", s.eta_min_value},
                          {"eta_ok", s.eta_ok},
                          {"certification", s.certification},
                          {"master_seed", s.master_seed},
                          {"master_seed_source", s.master_seed_source},
                          {"ensemble", s.ensemble},
                          {"q", s.q},
                          {"n", s.n},
                          {"ell", s.ell},
                          {"rho", s.rho},
                          {"L", s.L}};
}

inline ExperimentSummary summary_from_json(const nlohmann::json& j) {
    ExperimentSummary s;
    s.trials = j.at("trials").get<std::uint64_t>();
    s.failures = j.at("failures").get<std::uint64_t>();
    s.empirical_failure_rate = j.at("empirical_failure_rate").get<double>();
    s.theorem_bound_raw = j.at("theorem_bound_raw").get<double>();
    s.theorem_bound = j.at("theorem_bound").get<double>();
    s.vacuous = j.at("vacuous").get<bool>();
    s.randomness_bits_per_trial = j.at("randomness_bits_per_trial").get<std::uint64_t>();
    s.wall_time_ms = j.at("wall_time_ms").get<double>();
    s.k = j.at("k").get<long long>();
    s.rate = j.at("rate").get<double>();
    s.eta = j.at("eta").get<double>();
    s.eta_min_value = j.at("eta_min").get<double>();
    s.eta_ok = j.at("eta_ok").get<bool>();
    s.certification = j.at("certification").get<std::string>();
    s.master_seed = j.at("master_seed").get<std::uint64_t>();
    s.master_seed_source = j.at("master_seed_source").get<std::string>();
    s.ensemble = j.at("ensemble").get<std::string>();
    s.q = j.at("q").get<int>();
    s.n = j.at("n").get<int>();
    s.ell = j.at("ell").get<int>();
    s.rho = j.at("rho").get<double>();
    s.L = j.at("L").get<std::uint64_t>();
    return s;
}

inline void emit_json(const ExperimentSummary& summary, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("emit_json: cannot open '" + path + "'");
    out << summary_to_json(summary).dump(2) << "\n";
    if (!out) throw io_error("emit_json: write failed for '" + path + "'");
}

enum class EmitFormat { csv, json };

/// CSV writes the per-trial records; JSON writes the summary.
inline void emit(const ExperimentSummary& summary, const std::vector<TrialRecord>& records, EmitFormat format,
                 const std::string& path) {
    if (format == EmitFormat::csv) {
        emit_csv(records, path);
    } else {
        (void)records;
        emit_json(summary, path);
    }
}

inline ExperimentSummary load_summary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("load_summary: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    return summary_from_json(j);
}

}  // namespace apc
