#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace micropol::cli {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    for (std::size_t k = 0; k < issues.size(); ++k) {
        if (k) os << '\n';
        if (issues[k].line > 0) os << "line " << issues[k].line << ": ";
        os << issues[k].message;
    }
    return os.str();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool to_int(const std::string& s, long long& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

}  // namespace

ConfigParseError::ConfigParseError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

Mode parse_mode(const std::string& name) {
    if (name == "run") return Mode::Run;
    if (name == "fixed-point") return Mode::FixedPoint;
    if (name == "audit") return Mode::Audit;
    if (name == "sweep") return Mode::Sweep;
    if (name == "verify") return Mode::Verify;
    throw std::invalid_argument("unknown mode '" + name + "'");
}

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Run: return "run";
        case Mode::FixedPoint: return "fixed-point";
        case Mode::Audit: return "audit";
        case Mode::Sweep: return "sweep";
        case Mode::Verify: return "verify";
    }
    return "run";
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    std::vector<ConfigIssue> issues;
    std::map<std::string, int> seen;

    auto issue = [&](int line, std::string msg) { issues.push_back({line, std::move(msg)}); };

    auto real = [&](double& field, bool (*ok)(double), const char* range) {
        return [&field, ok, range, &issue](int line, const std::string& key, const std::string& v) {
            double x = 0.0;
            if (!to_double(v, x)) return issue(line, key + ": expected a real number, got '" + v + "'");
            if (!ok(x)) return issue(line, key + ": value " + v + " out of range (" + range + ")");
            field = x;
        };
    };
    auto integer = [&](int& field, long long lo, const char* range) {
        return [&field, lo, range, &issue](int line, const std::string& key, const std::string& v) {
            long long x = 0;
            if (!to_int(v, x)) return issue(line, key + ": expected an integer, got '" + v + "'");
            if (x < lo || x > 1'000'000) return issue(line, key + ": value " + v + " out of range (" + range + ")");
            field = static_cast<int>(x);
        };
    };
    auto positive = +[](double x) { return x > 0.0; };
    auto non_negative = +[](double x) { return x >= 0.0; };
    auto any = +[](double) { return true; };

    using Setter = std::function<void(int, const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"nx", integer(cfg.nx, 8, ">= 8")},
        {"ny", integer(cfg.ny, 8, ">= 8")},
        {"lx", real(cfg.lx, positive, "> 0")},
        {"ly", real(cfg.ly, positive, "> 0")},
        {"nu", real(cfg.nu, positive, "> 0")},
        {"kappa", real(cfg.kappa, non_negative, ">= 0")},
        {"initial_condition",
         [&](int line, const std::string& key, const std::string& v) {
             if (v != "reference" && v != "zero" && v != "snapshot")
                 return issue(line, key + ": expected reference, zero or snapshot, got '" + v + "'");
             cfg.initial_condition = v;
         }},
        {"ic_amplitude", real(cfg.ic_amplitude, any, "finite")},
        {"ic_snapshot",
         [&](int line, const std::string& key, const std::string& v) {
             std::filesystem::path p(v);
             if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
             if (!std::filesystem::exists(p)) return issue(line, key + ": file not found: " + p.string());
             cfg.ic_snapshot = p;
         }},
        {"T", real(cfg.T, positive, "> 0")},
        {"cfl_max", real(cfg.cfl_max, positive, "> 0")},
        {"dt_floor", real(cfg.dt_floor, positive, "> 0")},
        {"dt_max", real(cfg.dt_max, non_negative, ">= 0")},
        {"diagnostics_interval", integer(cfg.diagnostics_interval, 1, ">= 1")},
        {"snapshot_interval", integer(cfg.snapshot_interval, 0, ">= 0")},
        {"output_dir", [&](int, const std::string&, const std::string& v) { cfg.output_dir = v; }},
        {"mode",
         [&](int line, const std::string& key, const std::string& v) {
             try {
                 cfg.mode = parse_mode(v);
             } catch (const std::invalid_argument&) {
                 issue(line, key + ": expected run, fixed-point, audit, sweep or verify, got '" + v + "'");
             }
         }},
        {"sweep_nu",
         [&](int line, const std::string& key, const std::string& v) {
             cfg.sweep_nu.clear();
             for (const auto& item : split_list(v)) {
                 double x = 0.0;
                 if (!to_double(item, x) || !(x > 0.0)) return issue(line, key + ": entries must be reals > 0");
                 cfg.sweep_nu.push_back(x);
             }
         }},
        {"sweep_kappa",
         [&](int line, const std::string& key, const std::string& v) {
             cfg.sweep_kappa.clear();
             for (const auto& item : split_list(v)) {
                 double x = 0.0;
                 if (!to_double(item, x) || !(x >= 0.0)) return issue(line, key + ": entries must be reals >= 0");
                 cfg.sweep_kappa.push_back(x);
             }
         }},
        {"sweep_nx",
         [&](int line, const std::string& key, const std::string& v) {
             cfg.sweep_nx.clear();
             for (const auto& item : split_list(v)) {
                 long long x = 0;
                 if (!to_int(item, x) || x < 8 || x > 4096) return issue(line, key + ": entries must be integers >= 8");
                 cfg.sweep_nx.push_back(static_cast<int>(x));
             }
         }},
        {"epsilon", real(cfg.epsilon, non_negative, ">= 0")},
        {"picard_tol", real(cfg.picard_tol, positive, "> 0")},
        {"picard_max_iter", integer(cfg.picard_max_iter, 1, ">= 1")},
        {"solver_tol", real(cfg.solver_tol, positive, "> 0")},
        {"energy_tol", real(cfg.energy_tol, positive, "> 0")},
        {"seed",
         [&](int line, const std::string& key, const std::string& v) {
             std::uint64_t x = 0;
             auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
             if (ec != std::errc() || ptr != v.data() + v.size())
                 return issue(line, key + ": expected a non-negative integer, got '" + v + "'");
             cfg.seed = x;
         }},
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issue(line_no, "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            issue(line_no, "unknown key '" + key + "'");
            continue;
        }
        if (const auto prev = seen.find(key); prev != seen.end()) {
            issue(line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
            continue;
        }
        if (value.empty()) {
            issue(line_no, key + ": missing value");
            continue;
        }
        seen[key] = line_no;
        it->second(line_no, key, value);
    }

    auto line_of = [&](std::initializer_list<const char*> keys) {
        int l = 0;
        for (const char* k : keys)
            if (auto it = seen.find(k); it != seen.end()) l = std::max(l, it->second);
        return l;
    };
    const double hx = cfg.lx / cfg.nx;
    const double hy = cfg.ly / cfg.ny;
    if (cfg.lx > 0.0 && cfg.ly > 0.0 && std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
        issue(line_of({"nx", "ny", "lx", "ly"}),
              "non-square cells: lx/nx = " + std::to_string(hx) + " but ly/ny = " + std::to_string(hy));
    if (cfg.initial_condition == "snapshot" && cfg.ic_snapshot.empty() && !seen.count("ic_snapshot"))
        issue(line_of({"initial_condition"}), "initial_condition = snapshot requires ic_snapshot");
    if (cfg.dt_max > 0.0 && cfg.dt_floor > cfg.dt_max)
        issue(line_of({"dt_floor", "dt_max"}), "dt_floor exceeds dt_max");

    std::stable_sort(issues.begin(), issues.end(),
                     [](const ConfigIssue& a, const ConfigIssue& b) { return a.line < b.line; });
    if (!issues.empty()) throw ConfigParseError(std::move(issues));
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError({{0, "cannot read config file " + path.string()}});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

}  // namespace micropol::cli
