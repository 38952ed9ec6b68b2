#include "sascal.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
int guarded(F&& f) {
    try {
        f();
        return 0;
    } catch (const std::exception& e) {
        set_error(e.what());
        return 1;
    } catch (...) {
        set_error("unknown error");
        return 1;
    }
}

}  // namespace

struct sascal_config {
    sascal::experiments::Options opt;
    std::string json_cache;
};

struct sascal_report {
    sascal::experiments::Report rep;
    std::string json_cache;
    std::string csv_cache;
};

extern "C" {

const char* sascal_version(void) { return "1.0.0"; }

const char* sascal_build_id(void) {
    static const std::string id = sascal::experiments::build_id();
    return id.c_str();
}

const char* sascal_last_error(void) { return g_last_error.c_str(); }

sascal_config* sascal_config_create(void) { return new (std::nothrow) sascal_config; }

sascal_config* sascal_config_from_json(const char* json_text) {
    if (json_text == nullptr) {
        set_error("config JSON is null");
        return nullptr;
    }
    sascal_config* cfg = nullptr;
    int rc = guarded([&] {
        auto opt = sascal::experiments::options_from_json(json_text);
        cfg = new sascal_config{std::move(opt), {}};
    });
    return rc == 0 ? cfg : nullptr;
}

void sascal_config_drop(sascal_config* cfg) { delete cfg; }

int sascal_config_set_seed(sascal_config* cfg, uint64_t seed) {
    if (cfg == nullptr) {
        set_error("config is null");
        return 1;
    }
    cfg->opt.seed = seed;
    return 0;
}

int sascal_config_set_samples(sascal_config* cfg, long long samples) {
    if (cfg == nullptr) {
        set_error("config is null");
        return 1;
    }
    if (samples < 0) {
        set_error("samples must be nonnegative");
        return 1;
    }
    cfg->opt.samples = samples;
    return 0;
}

int sascal_config_set_threads(sascal_config* cfg, int threads) {
    if (cfg == nullptr) {
        set_error("config is null");
        return 1;
    }
    if (threads < 0) {
        set_error("threads must be nonnegative");
        return 1;
    }
    cfg->opt.threads = threads;
    return 0;
}

int sascal_config_set_out_dir(sascal_config* cfg, const char* path) {
    if (cfg == nullptr || path == nullptr) {
        set_error(cfg == nullptr ? "config is null" : "path is null");
        return 1;
    }
    cfg->opt.out_dir = path;
    return 0;
}

int sascal_config_set_fault(sascal_config* cfg, const char* name) {
    if (cfg == nullptr || name == nullptr) {
        set_error(cfg == nullptr ? "config is null" : "fault name is null");
        return 1;
    }
    return guarded([&] {
        sascal::experiments::parse_fault(name);
        cfg->opt.fault = name;
    });
}

int sascal_config_set_radii(sascal_config* cfg, const double* r, int count) {
    if (cfg == nullptr || (r == nullptr && count > 0) || count < 0) {
        set_error("bad radii arguments");
        return 1;
    }
    cfg->opt.r_list.assign(r, r + count);
    return 0;
}

int sascal_config_set_fields(sascal_config* cfg, const char* const* names, int count) {
    if (cfg == nullptr || (names == nullptr && count > 0) || count < 0) {
        set_error("bad field list arguments");
        return 1;
    }
    std::vector<std::string> list;
    for (int i = 0; i < count; ++i) {
        if (names[i] == nullptr) {
            set_error("field name is null");
            return 1;
        }
        list.emplace_back(names[i]);
    }
    cfg->opt.field_names = std::move(list);
    return 0;
}

const char* sascal_config_json(sascal_config* cfg) {
    if (cfg == nullptr) {
        set_error("config is null");
        return nullptr;
    }
    int rc = guarded([&] { cfg->json_cache = sascal::experiments::options_to_json(cfg->opt); });
    return rc == 0 ? cfg->json_cache.c_str() : nullptr;
}

sascal_report* sascal_run(const sascal_config* cfg, const char* command) {
    if (cfg == nullptr || command == nullptr) {
        set_error(cfg == nullptr ? "config is null" : "command is null");
        return nullptr;
    }
    sascal_report* rep = nullptr;
    int rc = guarded([&] {
        sascal::experiments::Options opt = cfg->opt;
        opt.experiment = command;
        rep = new sascal_report{sascal::experiments::run(opt), {}, {}};
        if (!opt.out_dir.empty()) {
            sascal::experiments::write_outputs(rep->rep, opt.out_dir);
        }
    });
    if (rc != 0) {
        delete rep;
        return nullptr;
    }
    return rep;
}

void sascal_report_drop(sascal_report* rep) { delete rep; }

int sascal_report_passed(const sascal_report* rep) {
    return (rep != nullptr && rep->rep.passed) ? 1 : 0;
}

const char* sascal_report_json(sascal_report* rep) {
    if (rep == nullptr) {
        set_error("report is null");
        return nullptr;
    }
    int rc = guarded([&] {
        if (rep->json_cache.empty()) rep->json_cache = sascal::experiments::report_json(rep->rep);
    });
    return rc == 0 ? rep->json_cache.c_str() : nullptr;
}

const char* sascal_report_csv(sascal_report* rep) {
    if (rep == nullptr) {
        set_error("report is null");
        return nullptr;
    }
    int rc = guarded([&] {
        if (rep->csv_cache.empty()) rep->csv_cache = sascal::experiments::report_csv(rep->rep);
    });
    return rc == 0 ? rep->csv_cache.c_str() : nullptr;
}

int sascal_report_write(const sascal_report* rep, const char* out_dir) {
    if (rep == nullptr || out_dir == nullptr) {
        set_error(rep == nullptr ? "report is null" : "out_dir is null");
        return 1;
    }
    return guarded([&] { sascal::experiments::write_outputs(rep->rep, out_dir); });
}

}  // extern "C"
