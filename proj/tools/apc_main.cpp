// Command-line front end: capacity evaluation, list-recovery certification,
// potential computation, mixing tests, lambda traces, and seeded experiments.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "apc/apc.hpp"

namespace {

nlohmann::json tuple_to_json(const apc::ListTuple& tuple) {
    nlohmann::json lists = nlohmann::json::array();
    for (const auto& z : tuple.sets) {
        nlohmann::json inner = nlohmann::json::array();
        for (const auto s : z) inner.push_back(s);
        lists.push_back(std::move(inner));
    }
    return lists;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"alphabet-permutation codes: construction, certification and verification"};
    app.require_subcommand(1);

    // capacity
    int cap_q = 0, cap_ell = 0;
    double cap_rho = 0.0;
    auto* cmd_capacity = app.add_subcommand("capacity", "list-recovery capacity h*(rho) as a plain decimal");
    cmd_capacity->add_option("--q", cap_q, "alphabet size")->required();
    cmd_capacity->add_option("--ell", cap_ell, "list size")->required();
    cmd_capacity->add_option("--rho", cap_rho, "error fraction")->required();

    // check-lr
    std::string lr_code;
    double lr_rho = 0.0;
    int lr_ell = 1;
    std::uint64_t lr_L = 1, lr_trials = 200, lr_seed = 0;
    std::string lr_mode = "exact";
    auto* cmd_lr = app.add_subcommand("check-lr", "certify list-recoverability of a code file (JSON verdict)");
    cmd_lr->add_option("--code", lr_code, "code file (header 'q n k')")->required();
    cmd_lr->add_option("--rho", lr_rho)->required();
    cmd_lr->add_option("--ell", lr_ell)->required();
    cmd_lr->add_option("--L", lr_L)->required();
    cmd_lr->add_option("--mode", lr_mode, "exact|random")->check(CLI::IsMember({"exact", "random"}));
    cmd_lr->add_option("--trials", lr_trials, "random-mode trials");
    cmd_lr->add_option("--seed", lr_seed, "random-mode seed");

    // potential
    std::string pot_code;
    double pot_rho = 0.0;
    int pot_ell = 1;
    std::uint64_t pot_L = 1, pot_trials = 1000, pot_seed = 0;
    std::string pot_mode = "exact";
    auto* cmd_pot = app.add_subcommand("potential", "potential K of a code file (JSON)");
    cmd_pot->add_option("--code", pot_code)->required();
    cmd_pot->add_option("--rho", pot_rho)->required();
    cmd_pot->add_option("--ell", pot_ell)->required();
    cmd_pot->add_option("--L", pot_L)->required();
    cmd_pot->add_option("--mode", pot_mode, "exact|sample")->check(CLI::IsMember({"exact", "sample"}));
    cmd_pot->add_option("--trials", pot_trials);
    cmd_pot->add_option("--seed", pot_seed);

    // test-mixing
    std::string mix_ensemble, mix_mode = "exact";
    int mix_n = 1, mix_ell = 1;
    double mix_rho = 0.0;
    std::uint64_t mix_trials = 10000, mix_seed = 0;
    auto* cmd_mix = app.add_subcommand("test-mixing", "tuple-mixing report for an ensemble (JSON)");
    cmd_mix->add_option("--ensemble", mix_ensemble, "descriptor, e.g. additive:2^2/1,1,1")->required();
    cmd_mix->add_option("--n", mix_n)->required();
    cmd_mix->add_option("--rho", mix_rho)->required();
    cmd_mix->add_option("--ell", mix_ell)->required();
    cmd_mix->add_option("--mode", mix_mode, "exact|sample")->check(CLI::IsMember({"exact", "sample"}));
    cmd_mix->add_option("--trials", mix_trials);
    cmd_mix->add_option("--seed", mix_seed);

    // lambda
    double lam0 = 0.0;
    int lam_k = 0;
    auto* cmd_lam = app.add_subcommand("lambda", "growth-envelope trace as CSV (i,lambda)");
    cmd_lam->add_option("--lambda0", lam0)->required();
    cmd_lam->add_option("--k", lam_k)->required();

    // experiment
    std::string exp_config;
    auto* cmd_exp = app.add_subcommand("experiment", "run a seeded Monte Carlo experiment from a config file");
    cmd_exp->add_option("--config", exp_config)->required();

    // sample-code
    std::string sc_ensemble, sc_out, sc_matrix_out;
    int sc_k = 1, sc_n = 1;
    std::uint64_t sc_seed = 0;
    auto* cmd_sc = app.add_subcommand("sample-code", "sample a random AP code and write its code file");
    cmd_sc->add_option("--ensemble", sc_ensemble)->required();
    cmd_sc->add_option("--k", sc_k)->required();
    cmd_sc->add_option("--n", sc_n)->required();
    cmd_sc->add_option("--seed", sc_seed);
    cmd_sc->add_option("--out", sc_out, "output code file")->required();
    cmd_sc->add_option("--matrix-out", sc_matrix_out, "also write the sampled permutation matrix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_capacity) {
            std::cout.precision(12);
            std::cout << apc::capacity(cap_q, cap_ell, cap_rho) << "\n";
        } else if (*cmd_lr) {
            const apc::CodeMultiset code = apc::CodeMultiset::load(lr_code);
            const auto start = std::chrono::steady_clock::now();
            apc::LRVerdict verdict;
            if (lr_mode == "exact") {
                verdict = apc::max_intersection_exhaustive(code, lr_rho, lr_ell);
            } else {
                apc::Rng rng(lr_seed);
                verdict = apc::max_intersection_randomized(code, lr_rho, lr_ell, lr_L, lr_trials, rng);
            }
            const double elapsed =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            nlohmann::json out{{"max_count", verdict.max_count},
                               {"witness", tuple_to_json(verdict.witness)},
                               {"exhaustive", verdict.exhaustive},
                               {"is_lr", verdict.max_count <= lr_L},
                               {"L", lr_L},
                               {"elapsed_ms", elapsed}};
            std::cout << out.dump(2) << "\n";
        } else if (*cmd_pot) {
            const apc::CodeMultiset code = apc::CodeMultiset::load(pot_code);
            const apc::PotentialParams params = apc::make_params(code.q(), code.n(), pot_ell, pot_L, pot_rho);
            apc::Rng rng(pot_seed);
            const apc::PotentialValue value =
                pot_mode == "exact" ? apc::potential_K(code, params, apc::TestMode::exact)
                                    : apc::potential_K(code, params, apc::TestMode::sampled, pot_trials, &rng);
            nlohmann::json out{{"K_log", value.log_k}, {"alpha", params.alpha}, {"beta", params.beta}};
            if (value.linear) out["K_linear"] = *value.linear;
            std::cout << out.dump(2) << "\n";
        } else if (*cmd_mix) {
            const apc::Ensemble e = apc::Ensemble::parse(mix_ensemble);
            apc::Rng rng(mix_seed);
            const apc::MixingReport report =
                mix_mode == "exact" ? apc::test_mixing(e, mix_n, mix_rho, mix_ell, apc::TestMode::exact)
                                    : apc::test_mixing(e, mix_n, mix_rho, mix_ell, apc::TestMode::sampled,
                                                       mix_trials, &rng);
            nlohmann::json out{{"condition1_ok", report.condition1_ok},
                               {"condition2_tv", report.condition2_tv},
                               {"mode", mix_mode},
                               {"worst_source", tuple_to_json(report.worst_source)},
                               {"canonical_only", report.canonical_only},
                               {"trials", report.trials}};
            std::cout << out.dump(2) << "\n";
        } else if (*cmd_lam) {
            const apc::LambdaTrace trace = apc::lambda_trace(lam0, lam_k);
            std::cout << "i,lambda\n";
            std::cout.precision(15);
            for (std::size_t i = 0; i < trace.lambda.size(); ++i) std::cout << i << "," << trace.lambda[i] << "\n";
            std::cerr << "bound_ok=" << (trace.bound_ok ? "true" : "false") << "\n";
        } else if (*cmd_exp) {
            const apc::ExperimentConfig cfg = apc::ExperimentConfig::load(exp_config);
            std::vector<apc::TrialRecord> records;
            const apc::ExperimentSummary summary = apc::run_experiment(cfg, &records);
            if (!cfg.output.empty()) {
                apc::emit(summary, records, apc::EmitFormat::csv, cfg.output + ".records.csv");
                apc::emit(summary, records, apc::EmitFormat::json, cfg.output + ".summary.json");
            }
            std::cout << apc::summary_to_json(summary).dump(2) << "\n";
        } else if (*cmd_sc) {
            const apc::Ensemble e = apc::Ensemble::parse(sc_ensemble);
            apc::Rng rng(sc_seed);
            const apc::PermMatrix mat = apc::sample_matrix(e, sc_k, sc_n, rng);
            apc::build_code(mat).save(sc_out);
            if (!sc_matrix_out.empty()) mat.save(sc_matrix_out);
            std::cerr << "wrote " << sc_out << " (q=" << e.q() << ", n=" << sc_n << ", k=" << sc_k << ")\n";
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
