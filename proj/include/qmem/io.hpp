#pragma once

// Flat-file plumbing: key-value config files with hard errors on unknown
// keys, the results CSV schema, generic tables for plot data, and the run
// manifest that makes every results file reproducible.

#include <sys/utsname.h>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmem/experiments.hpp"
#include "qmem/rng.hpp"

namespace qmem {

constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// `key = value` lines; '#' starts a comment; later assignments win.
class KeyValueConfig {
public:
    static KeyValueConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        KeyValueConfig cfg;
        cfg.source_ = path;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config: " + path + ":" + std::to_string(lineno) + ": expected key = value");
            cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return cfg;
    }

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    const std::string& source() const { return source_; }
    const std::map<std::string, std::string>& entries() const { return kv_; }

    void require_known(const std::set<std::string>& allowed) const {
        for (const auto& [k, v] : kv_)
            if (!allowed.count(k))
                throw ConfigError("config" + (source_.empty() ? std::string() : " (" + source_ + ")") +
                                  ": unknown key '" + k + "'");
    }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }
    double get_double(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        try {
            size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
        }
    }
    uint64_t get_u64(const std::string& key, uint64_t dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        try {
            return std::stoull(it->second);
        } catch (...) {
            throw ConfigError("config: key '" + key + "' is not an integer: " + it->second);
        }
    }
    int get_int(const std::string& key, int dflt) const { return int(get_u64(key, uint64_t(dflt))); }
    bool get_bool(const std::string& key, bool dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError("config: key '" + key + "' is not a bool: " + it->second);
    }

    // "1,2,3" or a range "a:b:step" (inclusive of b up to rounding).
    std::vector<double> get_doubles(const std::string& key, const std::vector<double>& dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        return parse_double_list(it->second, key);
    }
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& dflt) const {
        auto ds = get_doubles(key, {});
        if (ds.empty() && !has(key)) return dflt;
        std::vector<int> out;
        for (double d : ds) out.push_back(int(std::llround(d)));
        return out;
    }

    static std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
        std::vector<double> out;
        if (text.find(':') != std::string::npos) {
            double a, b, step;
            if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &step) != 3 || step <= 0)
                throw ConfigError("config: key '" + key + "' bad range: " + text);
            for (double v = a; v <= b + 1e-9 * step; v += step) out.push_back(v);
            return out;
        }
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(std::stod(item));
            } catch (...) {
                throw ConfigError("config: key '" + key + "' bad list entry: " + item);
            }
        }
        if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
        return out;
    }

    std::string canonical_text() const {
        std::string s;
        for (const auto& [k, v] : kv_) {  // std::map: already sorted
            s += k;
            s += '=';
            s += v;
            s += '\n';
        }
        return s;
    }

    std::string hash_hex() const {
        uint64_t h = fnv1a(canonical_text().data(), canonical_text().size());
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
        return buf;
    }

private:
    std::map<std::string, std::string> kv_;
    std::string source_;
};

inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- results CSV (fixed schema, LF endings, 17 significant digits) ----

inline const char* kRecordHeader =
    "experiment_id,code,L,beta,seed,sample,tau,censored,failure_class,n_events,n_anyons_at_failure,mean_sep,max_sep";

inline void write_records_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << r.experiment_id << ',' << r.code << ',' << r.L << ',' << fmt_g17(r.beta) << ',' << r.seed << ','
            << r.sample << ',' << fmt_g17(r.tau) << ',' << (r.censored ? 1 : 0) << ',' << r.failure_class << ','
            << r.n_events << ',' << r.n_anyons_at_failure << ',' << fmt_g17(r.mean_sep) << ',' << fmt_g17(r.max_sep)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<ExperimentRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    if (trim(line) != kRecordHeader) throw std::runtime_error("unexpected header in " + path);
    std::vector<ExperimentRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string f;
        ExperimentRecord r;
        auto next = [&]() {
            if (!std::getline(ss, f, ',')) throw std::runtime_error("short row in " + path);
            return f;
        };
        r.experiment_id = next();
        r.code = next();
        r.L = std::stoi(next());
        r.beta = std::stod(next());
        r.seed = std::stoull(next());
        r.sample = std::stoull(next());
        r.tau = std::stod(next());
        r.censored = std::stoi(next()) != 0;
        r.failure_class = uint32_t(std::stoul(next()));
        r.n_events = std::stoull(next());
        r.n_anyons_at_failure = uint32_t(std::stoul(next()));
        r.mean_sep = std::stod(next());
        r.max_sep = std::stod(next());
        out.push_back(std::move(r));
    }
    return out;
}

// ---- generic tables (thresholds, fits, plot series) ----

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

inline void write_table_csv(const std::string& path, const Table& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---- run manifest ----

inline std::string iso8601_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string host_descriptor() {
    struct utsname u {};
    if (uname(&u) != 0) return "unknown";
    return std::string(u.sysname) + " " + u.release + " " + u.machine + " " + u.nodename;
}

struct RunManifest {
    std::string tool_version = kToolVersion;
    std::string command;
    std::string config_hash;
    uint64_t master_seed = 0;
    std::string start_time, end_time;
    std::string host;
    std::map<std::string, std::string> params;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool_version"] = tool_version;
        j["command"] = command;
        j["config_hash"] = config_hash;
        j["master_seed"] = master_seed;
        j["start_time"] = start_time;
        j["end_time"] = end_time;
        j["host"] = host;
        j["params"] = params;
        return j;
    }

    static RunManifest from_json(const nlohmann::json& j) {
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.command = j.at("command").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        m.master_seed = j.at("master_seed").get<uint64_t>();
        m.start_time = j.value("start_time", "");
        m.end_time = j.value("end_time", "");
        m.host = j.value("host", "");
        m.params = j.at("params").get<std::map<std::string, std::string>>();
        return m;
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << to_json().dump(2) << '\n';
    }

    static RunManifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read " + path);
        nlohmann::json j;
        in >> j;
        return from_json(j);
    }
};

// ---- code definition dump (cross-implementation fixtures) ----

inline nlohmann::json dump_code_json(const StabilizerCode& code) {
    nlohmann::json j;
    j["name"] = code.name;
    j["n"] = code.n;
    j["dim"] = code.dim;
    j["mass"] = code.mass;
    j["locality_radius"] = code.locality_radius;
    std::vector<int> period(code.period.begin(), code.period.end());
    j["period_doubled"] = period;
    nlohmann::json gens = nlohmann::json::array();
    for (size_t c = 0; c < code.num_checks(); ++c) {
        nlohmann::json g;
        g["pauli"] = code.checks.rows()[c].to_string();
        g["type"] = code.check_type[c] == CheckType::X ? "X" : (code.check_type[c] == CheckType::Z ? "Z" : "M");
        g["coord"] = std::vector<int>(code.check_coord[c].begin(), code.check_coord[c].begin() + std::max(code.dim, 1));
        gens.push_back(std::move(g));
    }
    j["generators"] = std::move(gens);
    nlohmann::json qub = nlohmann::json::array();
    for (size_t q = 0; q < code.n; ++q) {
        nlohmann::json g;
        g["coord"] = std::vector<int>(code.qubit_coord[q].begin(), code.qubit_coord[q].begin() + std::max(code.dim, 1));
        g["tag"] = int(code.qubit_tag[q]);
        qub.push_back(std::move(g));
    }
    j["qubits"] = std::move(qub);
    nlohmann::json logi = nlohmann::json::array();
    for (const auto& [lx, lz] : code.logical_pairs) {
        nlohmann::json p;
        p["X"] = lx.to_string();
        p["Z"] = lz.to_string();
        logi.push_back(std::move(p));
    }
    j["logical_pairs"] = std::move(logi);
    j["logicals_complete"] = code.logicals_complete;
    return j;
}

}  // namespace qmem
