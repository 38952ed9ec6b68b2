#pragma once

// Experiment driver behind the CLI: the verification suite, the calibrated
// lower-bound integrals, the recovery-convergence study, and the comass
// sampler. Every command returns a Report of named check rows with the same
// fixed column set the CSV output uses, so pass/fail bookkeeping lives in one
// place and re-running a row's config reproduces it bit for bit.

#include <cstdint>
#include <string>
#include <vector>

#include "calibration.hpp"
#include "common.hpp"
#include "fields.hpp"
#include "recovery.hpp"

namespace sascal::experiments {

// Deliberate single-constant corruptions for negative controls: each one must
// make at least one check row fail, proving the suite can detect a wrong
// constant rather than passing vacuously.
struct FaultSpec {
    bool c2 = false;        // scale the first even coefficient by 1.01
    bool vartheta = false;  // tilt amplitude 0.6 instead of 1/2
    bool cutoff = false;    // every cutoff onset shifted down by 20% of its width

    bool any() const { return c2 || vartheta || cutoff; }
};
FaultSpec parse_fault(const std::string& name);

struct Options {
    std::string experiment;  // verify | lowerbound | recovery | comass
    std::uint64_t seed = 20240817;
    long long samples = 0;  // 0 = per-command default
    int m = 2;
    int threads = 0;  // 0 = hardware concurrency
    std::string out_dir;
    std::string fault;
    std::vector<double> r_list;             // recovery radii, descending
    std::vector<std::string> field_names;   // lower-bound fields
};

// Resolve an Options struct from a JSON document; unknown keys are rejected.
Options options_from_json(const std::string& text);
// Canonical JSON serialization of the resolved options (sorted keys); the
// config hash in every output row is the FNV-1a digest of this string.
std::string options_to_json(const Options& opt);

struct CheckRow {
    std::string experiment;
    int m = 0;
    double r_k = 0.0;     // 0 when the row is not tied to a radius
    std::string stratum;  // check name, stratum name, or field name
    double estimate = 0.0;
    double std_err = 0.0;
    long long samples = 0;
    double bound = 0.0;
    double margin = 0.0;  // signed distance to failure; >= 0 exactly when pass
    bool pass = false;
};

struct Report {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string build;
    std::string config_hash;
    std::string config_json;
    bool passed = true;
    double elapsed_seconds = 0.0;
    std::vector<CheckRow> rows;
    // Extra per-command payloads (raw JSON values keyed by name), e.g. the
    // arg-max frame of the comass sampler.
    std::vector<std::pair<std::string, std::string>> details;

    void add(CheckRow row);
};

Report cmd_verify(const Options& opt);
Report cmd_lowerbound(const Options& opt);
Report cmd_recovery(const Options& opt);
Report cmd_comass(const Options& opt);
// Dispatch on opt.experiment; throws argument_error for unknown names.
Report run(const Options& opt);

std::string report_json(const Report& report);
std::string report_csv(const Report& report);
// Writes <experiment>_report.json and <experiment>_rows.csv under out_dir.
void write_outputs(const Report& report, const std::string& out_dir);

std::uint64_t fnv1a(const std::string& text);
std::string build_id();

// Test fields for the lower-bound and invariance experiments: the Hopf field
// conjugated by a fixed rotation, and a normalized tangent perturbation of the
// Hopf field by a fixed quadratic polynomial field.
fields::UnitField rotated_hopf_field();
fields::UnitField perturbed_hopf_field();

// make_params plus fault application, so corrupted constants flow through
// every recovery-dependent check.
recovery::RecoveryParams faulted_params(int m, double r_k, const FaultSpec& fault);
calibration::Coefficients faulted_coefficients(int m, const FaultSpec& fault);

}  // namespace sascal::experiments
