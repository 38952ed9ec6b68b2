#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "sascal.h"

TEST_CASE("version and build strings") {
    REQUIRE(sascal_version() != nullptr);
    REQUIRE(sascal_build_id() != nullptr);
    CHECK(std::strlen(sascal_version()) > 0);
    CHECK(std::strlen(sascal_build_id()) > 0);
}

TEST_CASE("config lifecycle and setters") {
    sascal_config* cfg = sascal_config_create();
    REQUIRE(cfg != nullptr);
    CHECK(sascal_config_set_seed(cfg, 7) == 0);
    CHECK(sascal_config_set_samples(cfg, 1000) == 0);
    CHECK(sascal_config_set_threads(cfg, 2) == 0);
    CHECK(sascal_config_set_out_dir(cfg, "") == 0);
    CHECK(sascal_config_set_fault(cfg, "c2") == 0);
    CHECK(sascal_config_set_fault(cfg, "") == 0);
    double radii[2] = {1e-2, 1e-3};
    CHECK(sascal_config_set_radii(cfg, radii, 2) == 0);
    const char* fields[2] = {"hopf", "radial"};
    CHECK(sascal_config_set_fields(cfg, fields, 2) == 0);

    CHECK(sascal_config_set_samples(cfg, -5) == 1);
    CHECK(std::strlen(sascal_last_error()) > 0);
    CHECK(sascal_config_set_fault(cfg, "bogus") == 1);
    CHECK(std::strlen(sascal_last_error()) > 0);

    const char* json = sascal_config_json(cfg);
    REQUIRE(json != nullptr);
    CHECK(std::string(json).find("\"seed\"") != std::string::npos);
    sascal_config_drop(cfg);
}

TEST_CASE("config from json") {
    sascal_config* cfg =
        sascal_config_from_json("{\"experiment\":\"comass\",\"samples\":500}");
    REQUIRE(cfg != nullptr);
    sascal_config_drop(cfg);

    CHECK(sascal_config_from_json("this is not json") == nullptr);
    CHECK(std::strlen(sascal_last_error()) > 0);
    CHECK(sascal_config_from_json("{\"bogus_key\":1}") == nullptr);
    CHECK(sascal_config_from_json(nullptr) == nullptr);
}

TEST_CASE("comass run passes and serializes") {
    sascal_config* cfg = sascal_config_create();
    REQUIRE(cfg != nullptr);
    sascal_config_set_samples(cfg, 500);
    sascal_report* rep = sascal_run(cfg, "comass");
    REQUIRE(rep != nullptr);
    CHECK(sascal_report_passed(rep) == 1);

    const char* json = sascal_report_json(rep);
    REQUIRE(json != nullptr);
    std::string j(json);
    CHECK(j.find("\"checks\"") != std::string::npos);
    CHECK(j.find("\"config_hash\"") != std::string::npos);

    const char* csv = sascal_report_csv(rep);
    REQUIRE(csv != nullptr);
    std::string c(csv);
    std::string header = c.substr(0, c.find('\n'));
    CHECK(header ==
          "experiment,m,r_k,stratum,estimate,stderr,samples,bound,margin,pass,seed,build,config");

    namespace fs = std::filesystem;
    fs::path out = fs::temp_directory_path() / "sascal_capi_test_out";
    fs::remove_all(out);
    CHECK(sascal_report_write(rep, out.string().c_str()) == 0);
    CHECK(fs::exists(out / "comass_report.json"));
    CHECK(fs::exists(out / "comass_rows.csv"));
    fs::remove_all(out);

    sascal_report_drop(rep);
    sascal_config_drop(cfg);
}

TEST_CASE("faulted coefficients break the comass checks") {
    sascal_config* cfg = sascal_config_create();
    REQUIRE(cfg != nullptr);
    sascal_config_set_samples(cfg, 500);
    sascal_config_set_fault(cfg, "c2");
    sascal_report* rep = sascal_run(cfg, "comass");
    REQUIRE(rep != nullptr);
    CHECK(sascal_report_passed(rep) == 0);
    sascal_report_drop(rep);
    sascal_config_drop(cfg);
}

TEST_CASE("small lowerbound run on the zero variance field") {
    sascal_config* cfg = sascal_config_create();
    REQUIRE(cfg != nullptr);
    sascal_config_set_samples(cfg, 2000);
    const char* fields[1] = {"hopf"};
    sascal_config_set_fields(cfg, fields, 1);
    sascal_report* rep = sascal_run(cfg, "lowerbound");
    REQUIRE(rep != nullptr);
    CHECK(sascal_report_passed(rep) == 1);
    sascal_report_drop(rep);
    sascal_config_drop(cfg);
}

TEST_CASE("invalid runs return null") {
    sascal_config* cfg = sascal_config_create();
    REQUIRE(cfg != nullptr);
    CHECK(sascal_run(cfg, "explode") == nullptr);
    CHECK(std::strlen(sascal_last_error()) > 0);
    CHECK(sascal_run(nullptr, "verify") == nullptr);

    const char* fields[1] = {"nope"};
    sascal_config_set_fields(cfg, fields, 1);
    sascal_config_set_samples(cfg, 100);
    CHECK(sascal_run(cfg, "lowerbound") == nullptr);
    sascal_config_drop(cfg);
}
