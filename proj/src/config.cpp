#include "newtonflow/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace nwfl {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(int line, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(line, key + " = " + v + ": unparsable real");
    }
}

long long parse_integer(int line, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(line, key + " = " + v + ": unparsable integer");
    }
}

bool parse_bool(int line, const std::string& key, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(line, key + " = " + v + ": unparsable boolean (want true/false)");
}

Kind parse_kind(int line, const std::string& v) {
    if (v == "F1") return Kind::F1;
    if (v == "F2") return Kind::F2;
    if (v == "F3") return Kind::F3;
    fail(line, "nonlinearity = " + v + ": want F1, F2, or F3");
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> key_line; // for range diagnostics after parsing
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (val.empty()) fail(line, key + ": empty value");
        if (key_line.count(key)) fail(line, "duplicate key '" + key + "'");
        key_line[key] = line;

        if (key == "nonlinearity") cfg.spec.kind = parse_kind(line, val);
        else if (key == "q") cfg.spec.q = parse_real(line, key, val);
        else if (key == "allow_q_override") cfg.allow_q_override = parse_bool(line, key, val);
        else if (key == "L") cfg.L = parse_real(line, key, val);
        else if (key == "N") {
            const long long n = parse_integer(line, key, val);
            if (n < 2 || n > 1024) fail(line, "N = " + val + " out of range: want 2..1024");
            cfg.N = static_cast<int>(n);
        } else if (key == "initial") {
            try {
                cfg.initial = parse_initial(val);
            } catch (const config_error& e) {
                fail(line, e.what());
            }
        } else if (key == "dt0") cfg.dt0 = parse_real(line, key, val);
        else if (key == "t_end") cfg.t_end = parse_real(line, key, val);
        else if (key == "rtol") cfg.rtol = parse_real(line, key, val);
        else if (key == "atol") cfg.atol = parse_real(line, key, val);
        else if (key == "sup_blowup") cfg.sup_blowup = parse_real(line, key, val);
        else if (key == "dt_min") cfg.dt_min = parse_real(line, key, val);
        else if (key == "record_every") cfg.record_every = parse_real(line, key, val);
        else if (key == "checkpoint_every") cfg.checkpoint_every = parse_real(line, key, val);
        else if (key == "monitor_a") cfg.monitor_a = parse_real(line, key, val);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(line, key, val));
        else if (key == "dealias") cfg.dealias = parse_bool(line, key, val);
        else if (key == "csv_path") cfg.csv_path = val;
        else if (key == "checkpoint_path") cfg.checkpoint_path = val;
        else fail(line, "unknown key '" + key + "'");
    }

    auto line_of = [&](const char* key) {
        auto it = key_line.find(key);
        return it == key_line.end() ? 0 : it->second;
    };
    auto range_fail = [&](const char* key, const std::string& msg) {
        const int l = line_of(key);
        if (l) fail(l, msg);
        throw config_error("config: " + msg);
    };

    if (!(cfg.L > 0.0)) range_fail("L", "L must be > 0");
    try {
        cfg.spec.validate(cfg.allow_q_override);
    } catch (const domain_error& e) {
        range_fail("q", e.what());
    }
    if (!(cfg.dt0 > 0.0)) range_fail("dt0", "dt0 must be > 0");
    if (!(cfg.t_end > 0.0)) range_fail("t_end", "t_end must be > 0");
    if (!(cfg.rtol >= 0.0)) range_fail("rtol", "rtol must be >= 0");
    if (!(cfg.atol > 0.0)) range_fail("atol", "atol must be > 0");
    if (!(cfg.sup_blowup > 0.0)) range_fail("sup_blowup", "sup_blowup must be > 0");
    if (!(cfg.dt_min > 0.0)) range_fail("dt_min", "dt_min must be > 0");
    if (!(cfg.record_every > 0.0)) range_fail("record_every", "record_every must be > 0");
    if (!(cfg.checkpoint_every >= 0.0)) range_fail("checkpoint_every", "checkpoint_every must be >= 0");
    if (!(cfg.monitor_a >= 1.0)) range_fail("monitor_a", "monitor_a must be >= 1");
    for (const ModeAmp& m : cfg.initial.modes)
        for (int i = 0; i < 3; ++i)
            if (cfg.initial.shape == InitialData::Shape::Modes && (m.k[i] < 1 || m.k[i] > cfg.N))
                range_fail("initial", "mode index " + std::to_string(m.k[i]) +
                                          " out of range 1.." + std::to_string(cfg.N));
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Grid make_grid(const RunConfig& cfg) { return Grid(cfg.L, cfg.N); }

RunParams make_run_params(const RunConfig& cfg) {
    RunParams p;
    p.spec = cfg.spec;
    p.dt0 = cfg.dt0;
    p.t_end = cfg.t_end;
    p.rtol = cfg.rtol;
    p.atol = cfg.atol;
    p.sup_blowup = cfg.sup_blowup;
    p.dt_min = cfg.dt_min;
    p.record_every = cfg.record_every;
    p.monitor_a = cfg.monitor_a;
    p.dealias_cut = cfg.dealias ? (2 * (cfg.N + 1)) / 3 : 0;
    return p;
}

std::string config_digest_string(const RunConfig& cfg) {
    char buf[64];
    auto f = [&buf](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    std::string s;
    s += "nonlinearity=" + std::string(kind_name(cfg.spec.kind)) + "\n";
    s += "q=" + f(cfg.spec.q) + "\n";
    s += "allow_q_override=" + std::string(cfg.allow_q_override ? "true" : "false") + "\n";
    s += "L=" + f(cfg.L) + "\n";
    s += "N=" + std::to_string(cfg.N) + "\n";
    s += "initial=" + describe(cfg.initial) + "\n";
    s += "dt0=" + f(cfg.dt0) + "\n";
    s += "t_end=" + f(cfg.t_end) + "\n";
    s += "rtol=" + f(cfg.rtol) + "\n";
    s += "atol=" + f(cfg.atol) + "\n";
    s += "sup_blowup=" + f(cfg.sup_blowup) + "\n";
    s += "dt_min=" + f(cfg.dt_min) + "\n";
    s += "record_every=" + f(cfg.record_every) + "\n";
    s += "monitor_a=" + f(cfg.monitor_a) + "\n";
    s += "seed=" + std::to_string(cfg.seed) + "\n";
    s += "dealias=" + std::string(cfg.dealias ? "true" : "false") + "\n";
    return s;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t config_digest(const RunConfig& cfg) { return fnv1a64(config_digest_string(cfg)); }

} // namespace nwfl
