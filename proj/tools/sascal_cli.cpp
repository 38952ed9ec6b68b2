// Command-line front end for the verification library. Talks to the shared
// library exclusively through its C interface.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sascal.h"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    long long samples = 0;
    int threads = 0;
    std::string fault;
    std::vector<double> radii;
    std::vector<std::string> fields;

    bool seed_set = false, samples_set = false, threads_set = false;
    bool out_set = false, fault_set = false;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path, "JSON config file; flags override its keys")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", args->seed, "random seed")->each([args](const std::string&) {
        args->seed_set = true;
    });
    cmd->add_option("--samples", args->samples, "sample budget (0 = command default)")
        ->each([args](const std::string&) { args->samples_set = true; });
    cmd->add_option("--threads", args->threads, "worker threads (0 = hardware)")
        ->each([args](const std::string&) { args->threads_set = true; });
    cmd->add_option("--out", args->out_dir, "directory for report JSON and CSV")
        ->each([args](const std::string&) { args->out_set = true; });
    cmd->add_option("--fault-inject", args->fault,
                    "perturb one ingredient: c2, vartheta, or cutoff")
        ->each([args](const std::string&) { args->fault_set = true; });
}

int fail(const std::string& what) {
    std::cerr << what << ": " << sascal_last_error() << "\n";
    return 2;
}

int run_command(const char* name, const CommonArgs& args) {
    sascal_config* cfg = nullptr;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = sascal_config_from_json(buf.str().c_str());
        if (cfg == nullptr) return fail("bad config file");
    } else {
        cfg = sascal_config_create();
        if (cfg == nullptr) return fail("config allocation failed");
    }

    int rc = 0;
    if (args.seed_set) rc |= sascal_config_set_seed(cfg, args.seed);
    if (args.samples_set) rc |= sascal_config_set_samples(cfg, args.samples);
    if (args.threads_set) rc |= sascal_config_set_threads(cfg, args.threads);
    if (args.out_set) rc |= sascal_config_set_out_dir(cfg, args.out_dir.c_str());
    if (args.fault_set) rc |= sascal_config_set_fault(cfg, args.fault.c_str());
    if (!args.radii.empty()) {
        rc |= sascal_config_set_radii(cfg, args.radii.data(), (int)args.radii.size());
    }
    if (!args.fields.empty()) {
        std::vector<const char*> ptrs;
        for (const auto& f : args.fields) ptrs.push_back(f.c_str());
        rc |= sascal_config_set_fields(cfg, ptrs.data(), (int)ptrs.size());
    }
    if (rc != 0) {
        int code = fail("bad flag value");
        sascal_config_drop(cfg);
        return code;
    }

    sascal_report* rep = sascal_run(cfg, name);
    if (rep == nullptr) {
        int code = fail(std::string(name) + " aborted");
        sascal_config_drop(cfg);
        return code;
    }

    const char* json = sascal_report_json(rep);
    if (json == nullptr) {
        int code = fail("report serialization failed");
        sascal_report_drop(rep);
        sascal_config_drop(cfg);
        return code;
    }
    std::cout << json << "\n";

    int code = sascal_report_passed(rep) ? 0 : 1;
    sascal_report_drop(rep);
    sascal_config_drop(cfg);
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("sascal ") + sascal_version() + " (build " + sascal_build_id() +
                 "): numerical verification of the Sasaki calibration on unit "
                 "tangent bundles of odd spheres"};
    app.require_subcommand(1);

    CommonArgs verify_args, lower_args, recovery_args, comass_args;

    CLI::App* verify = app.add_subcommand(
        "verify", "identity, floor, and determinism checks across all modules");
    add_common(verify, &verify_args);

    CLI::App* lower = app.add_subcommand(
        "lowerbound", "Monte Carlo volume and calibrated-mass rows per unit field");
    add_common(lower, &lower_args);
    lower->add_option("--field", lower_args.fields,
                      "fields to integrate: hopf, radial, rotated, perturbed, recovery");

    CLI::App* recov = app.add_subcommand(
        "recovery", "stratified volume excess of the recovery fields along a radius list");
    add_common(recov, &recovery_args);
    recov->add_option("--r", recovery_args.radii, "cap-smoothing radii, strictly descending");

    CLI::App* comass = app.add_subcommand(
        "comass", "sampled comass sweep with the argmax frame serialized");
    add_common(comass, &comass_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (verify->parsed()) return run_command("verify", verify_args);
    if (lower->parsed()) return run_command("lowerbound", lower_args);
    if (recov->parsed()) return run_command("recovery", recovery_args);
    if (comass->parsed()) return run_command("comass", comass_args);
    return 2;
}
