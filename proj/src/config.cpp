#include "wtbouss/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wtbouss {

namespace {

struct KeyValue {
    std::string value;
    int line = 0;  // 0 for overrides
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::map<std::string, KeyValue> parse_kv(const std::string& text, const std::string& path,
                                         const std::vector<std::string>& overrides) {
    std::map<std::string, KeyValue> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected `key = value`");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = {val, lineno};
    }
    for (const auto& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("override `" + ov + "`: expected key=value");
        kv[trim(ov.substr(0, eq))] = {trim(ov.substr(eq + 1)), 0};
    }
    return kv;
}

std::string where(const std::string& key, const KeyValue& v) {
    return v.line > 0 ? "key `" + key + "` (line " + std::to_string(v.line) + ")"
                      : "key `" + key + "` (override)";
}

double to_double(const std::string& key, const KeyValue& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v.value, &pos);
        if (pos != v.value.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(where(key, v) + ": `" + v.value + "` is not a number");
    }
}

long to_long(const std::string& key, const KeyValue& v) {
    try {
        size_t pos = 0;
        long d = std::stol(v.value, &pos);
        if (pos != v.value.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError(where(key, v) + ": `" + v.value + "` is not an integer");
    }
}

bool to_bool(const std::string& key, const KeyValue& v) {
    if (v.value == "true" || v.value == "1" || v.value == "on" || v.value == "yes") return true;
    if (v.value == "false" || v.value == "0" || v.value == "off" || v.value == "no") return false;
    throw ConfigError(where(key, v) + ": `" + v.value + "` is not a boolean");
}

const std::set<std::string> kRunKeys = {
    "system", "eps", "a", "b", "c", "d", "e", "f", "g",
    "nx", "ny", "lx", "ly", "dealias",
    "dt", "cfl", "t_end", "t0", "diag_every",
    "init", "amplitude", "seed", "band",
    "sobolev_s", "resolvent_tol", "resolvent_max_terms", "norm_guard",
    "linearized", "consistency_diag", "tilde_diag"};

const std::set<std::string> kExtraKeys = {"eps_list", "modes", "consistency_n", "samples"};

RunConfig build_run_config(std::map<std::string, KeyValue> kv, const std::string& path) {
    for (const auto& [key, val] : kv)
        if (!kRunKeys.count(key) && !kExtraKeys.count(key))
            throw ConfigError(where(key, val) + ": unknown key");

    RunConfig cfg;
    auto take = [&](const char* key) -> const KeyValue* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    std::string system = "case1";
    if (auto* v = take("system")) system = v->value;
    double eps = 0.1;
    if (auto* v = take("eps")) eps = to_double("eps", *v);

    if (system == "case1") {
        cfg.system = SystemId::Case1;
        cfg.params = ModelParams::case1(eps);
    } else if (system == "case2") {
        cfg.system = SystemId::Case2;
        cfg.params = ModelParams::case2(eps);
    } else if (system == "wtb1" || system == "wtb2") {
        cfg.system = system == "wtb1" ? SystemId::WTB1 : SystemId::WTB2;
        std::array<double, 7> co = ModelParams::case1(eps).coef();  // default coefficients
        const char* names[7] = {"a", "b", "c", "d", "e", "f", "g"};
        for (int i = 0; i < 7; ++i)
            if (auto* v = take(names[i])) co[i] = to_double(names[i], *v);
        cfg.params = ModelParams::general(co, eps);
    } else {
        throw ConfigError("key `system`: unknown system `" + system +
                          "` (expected wtb1, wtb2, case1, case2)");
    }

    int nx = 64, ny = 64;
    double lx = 2.0 * 3.14159265358979323846, ly = lx, df = 2.0 / 3.0;
    if (auto* v = take("nx")) nx = int(to_long("nx", *v));
    if (auto* v = take("ny")) ny = int(to_long("ny", *v));
    if (auto* v = take("lx")) lx = to_double("lx", *v);
    if (auto* v = take("ly")) ly = to_double("ly", *v);
    if (auto* v = take("dealias")) df = to_double("dealias", *v);
    try {
        cfg.grid = GridSpec(nx, ny, lx, ly, df);
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("grid keys: ") + e.what());
    }

    if (auto* v = take("dt")) {
        if (v->value == "auto")
            cfg.dt = 0.0;
        else
            cfg.dt = to_double("dt", *v);
    }
    if (auto* v = take("cfl")) cfg.cfl = to_double("cfl", *v);
    if (auto* v = take("t_end")) {
        if (v->value == "t0_over_eps") {
            cfg.t_end_over_eps = true;
        } else {
            cfg.t_end = to_double("t_end", *v);
        }
    }
    if (auto* v = take("t0")) cfg.t0 = to_double("t0", *v);
    if (auto* v = take("diag_every")) cfg.diag_every = int(to_long("diag_every", *v));
    if (auto* v = take("init")) {
        if (v->value == "gaussian") cfg.init = InitFamily::Gaussian;
        else if (v->value == "trig") cfg.init = InitFamily::Trig;
        else if (v->value == "random") cfg.init = InitFamily::Random;
        else throw ConfigError(where("init", *v) + ": expected gaussian, trig or random");
    }
    if (auto* v = take("amplitude")) cfg.amplitude = to_double("amplitude", *v);
    if (auto* v = take("seed")) cfg.seed = (unsigned long long)(to_long("seed", *v));
    if (auto* v = take("band")) cfg.band = int(to_long("band", *v));
    if (auto* v = take("sobolev_s")) cfg.sobolev_s = to_double("sobolev_s", *v);
    if (auto* v = take("resolvent_tol")) cfg.resolvent.tol = to_double("resolvent_tol", *v);
    if (auto* v = take("resolvent_max_terms"))
        cfg.resolvent.max_terms = int(to_long("resolvent_max_terms", *v));
    if (auto* v = take("norm_guard")) cfg.resolvent.norm_guard = to_double("norm_guard", *v);
    if (auto* v = take("linearized")) cfg.linearized = to_bool("linearized", *v);
    if (auto* v = take("consistency_diag")) cfg.diag_consistency = to_bool("consistency_diag", *v);
    if (auto* v = take("tilde_diag")) cfg.diag_tilde = to_bool("tilde_diag", *v);

    if (cfg.amplitude < 0.0) throw ConfigError("key `amplitude`: must be >= 0");
    if (cfg.dt < 0.0) throw ConfigError("key `dt`: must be positive or auto");
    if (!cfg.t_end_over_eps && cfg.t_end < 0.0) throw ConfigError("key `t_end`: must be >= 0");
    if (cfg.t0 <= 0.0) throw ConfigError("key `t0`: must be > 0");
    (void)path;
    return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& path,
                            const std::vector<std::string>& overrides) {
    return build_run_config(parse_kv(text, path, overrides), path);
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path, overrides);
}

ExtraKeys parse_extra_keys(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto kv = parse_kv(ss.str(), path, overrides);

    ExtraKeys ex;
    if (auto it = kv.find("eps_list"); it != kv.end()) {
        std::istringstream is(it->second.value);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            try {
                ex.eps_list.push_back(std::stod(trim(tok)));
            } catch (...) {
                throw ConfigError(where("eps_list", it->second) + ": bad entry `" + tok + "`");
            }
        }
    }
    if (auto it = kv.find("modes"); it != kv.end()) {
        std::istringstream is(it->second.value);
        std::string pair;
        while (std::getline(is, pair, ';')) {
            size_t comma = pair.find(',');
            if (comma == std::string::npos)
                throw ConfigError(where("modes", it->second) + ": entries are `k1,k2;k1,k2;...`");
            try {
                ex.modes.emplace_back(std::stoi(trim(pair.substr(0, comma))),
                                      std::stoi(trim(pair.substr(comma + 1))));
            } catch (...) {
                throw ConfigError(where("modes", it->second) + ": bad entry `" + pair + "`");
            }
        }
    }
    if (auto it = kv.find("consistency_n"); it != kv.end())
        ex.consistency_n = int(to_long("consistency_n", it->second));
    if (auto it = kv.find("samples"); it != kv.end())
        ex.samples = int(to_long("samples", it->second));
    return ex;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::string& header_comment,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    impl_->out.open(path, std::ios::binary);  // binary: byte-stable newlines
    if (!impl_->out) throw ConfigError("cannot open for writing: " + path);
    impl_->out << "# " << header_comment << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "");
    impl_->out << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i)
        impl_->out << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
    impl_->out << "\n";
}

void CsvWriter::raw_row(const std::string& line) { impl_->out << line << "\n"; }

CsvWriter::~CsvWriter() {
    impl_->out.flush();
    delete impl_;
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs) {
    CsvWriter csv(path, "wtbouss diagnostics schema v1",
                  {"time", "e_total", "e_low", "e_high", "e_tilde_high", "curl_res",
                   "consistency_res", "guard_factor"});
    for (const auto& r : recs)
        csv.row({r.time, r.energy.e_total, r.energy.e_low, r.energy.e_high,
                 r.energy.e_tilde_high, r.curl_res, r.consistency_res, r.guard_factor});
}

void write_summary_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    CsvWriter csv(path, "wtbouss sweep summary schema v1",
                  {"eps", "t_end", "e0", "e_max", "growth_ratio", "max_curl", "max_guard",
                   "status"});
    for (const auto& r : rows) {
        std::string line;
        const double vals[7] = {r.eps, r.t_end, r.e0, r.e_max, r.growth_ratio, r.max_curl,
                                r.max_guard};
        for (double v : vals) line += format_double(v) + ",";
        line += r.ok ? "ok" : "error";
        csv.raw_row(line);
    }
}

void append_error_record(const std::string& out_dir, const std::string& command,
                         int exit_code, const std::string& what) {
    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    std::filesystem::path p = std::filesystem::path(out_dir.empty() ? "." : out_dir) / "errors.log";
    std::ofstream out(p, std::ios::app | std::ios::binary);
    nlohmann::json j;
    j["command"] = command;
    j["code"] = exit_code;
    j["error"] = what;
    out << j.dump() << "\n";
}

}  // namespace wtbouss
