#include "femtoloss/scenario_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "femtoloss/error.hpp"
#include "femtoloss/units.hpp"

namespace femtoloss {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

class KeyValues {
public:
    explicit KeyValues(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const Entry& require(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            throw ConfigError("missing config key '" + key + "'");
        }
        return it->second;
    }

    double number(const std::string& key) const {
        const Entry& e = require(key);
        double out = 0.0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError("line " + std::to_string(e.line) + ": key '" + key + "' expects a number, got '" +
                              e.value + "'");
        }
        return out;
    }

    std::uint64_t unsigned_integer(const std::string& key) const {
        const Entry& e = require(key);
        std::uint64_t out = 0;
        const char* begin = e.value.data();
        const char* end = begin + e.value.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError("line " + std::to_string(e.line) + ": key '" + key +
                              "' expects a non-negative integer, got '" + e.value + "'");
        }
        return out;
    }

    const std::string& text(const std::string& key) const { return require(key).value; }
    int line(const std::string& key) const { return require(key).line; }

private:
    std::map<std::string, Entry> entries_;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "r0_m",     "rmin_m", "l0_db",         "alpha",          "sigma2_dbm", "p0_dbm", "pmin_dbm", "pmax_dbm",
        "i",        "uplink_policy",  "target_sinr_db", "duplex",     "fdd_offset_db",  "seed",     "amc_table",
    };
    return keys;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(min_distance_m > 0.0) || !(min_distance_m < cell_radius_m)) {
        throw ConfigError("need 0 < rmin_m < r0_m");
    }
    if (!(pu_min_power_w > 0.0) || !(pu_min_power_w < pu_max_power_w)) {
        throw ConfigError("need 0 < pmin < pmax");
    }
    if (observations < 1) {
        throw ConfigError("observation count i must be >= 1");
    }
    if (!(noise_power_w > 0.0)) {
        throw ConfigError("sigma2 must be positive");
    }
    if (!(bs_power_w > 0.0)) {
        throw ConfigError("p0 must be positive");
    }
    if (uplink_policy == UplinkPolicy::FixedTarget && !(target_sinr > 0.0)) {
        throw ConfigError("fixed uplink target SINR must be positive");
    }
    if (!std::isfinite(duplex.fdd_offset_db)) {
        throw ConfigError("fdd_offset_db must be finite");
    }
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig config;
    config.bs_power_w = calibrate_bs_power(config);
    return config;
}

double calibrate_bs_power(const ScenarioConfig& config, double fringe_sinr_db) {
    return db_to_linear(fringe_sinr_db) * config.noise_power_w * config.propagation.loss(config.cell_radius_m);
}

ScenarioConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    std::map<std::string, Entry> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' has no value");
        }
        if (!entries.emplace(key, Entry{value, line_no}).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }

    const KeyValues kv(std::move(entries));
    ScenarioConfig config;
    config.cell_radius_m = kv.number("r0_m");
    config.min_distance_m = kv.number("rmin_m");
    try {
        config.propagation = PropagationModel<double>::from_db(kv.number("l0_db"), kv.number("alpha"));
    } catch (const std::domain_error& e) {
        throw ConfigError("line " + std::to_string(kv.line("alpha")) + ": " + e.what());
    }
    config.noise_power_w = dbm_to_watt(kv.number("sigma2_dbm"));
    config.pu_min_power_w = dbm_to_watt(kv.number("pmin_dbm"));
    config.pu_max_power_w = dbm_to_watt(kv.number("pmax_dbm"));

    const double observations = kv.number("i");
    if (observations != std::floor(observations) || observations < 1 || observations > 1e7) {
        throw ConfigError("line " + std::to_string(kv.line("i")) + ": key 'i' expects a positive integer");
    }
    config.observations = static_cast<int>(observations);

    const std::string& policy = kv.text("uplink_policy");
    if (policy == "amc") {
        config.uplink_policy = UplinkPolicy::AmcDriven;
    } else if (policy == "fixed") {
        config.uplink_policy = UplinkPolicy::FixedTarget;
        config.target_sinr = db_to_linear(kv.number("target_sinr_db"));
    } else {
        throw ConfigError("line " + std::to_string(kv.line("uplink_policy")) +
                          ": uplink_policy must be 'amc' or 'fixed', got '" + policy + "'");
    }

    const std::string& duplex = kv.text("duplex");
    if (duplex == "tdd") {
        config.duplex = {DuplexMode::Tdd, 0.0};
    } else if (duplex == "fdd") {
        config.duplex = {DuplexMode::Fdd, kv.number("fdd_offset_db")};
    } else {
        throw ConfigError("line " + std::to_string(kv.line("duplex")) + ": duplex must be 'tdd' or 'fdd', got '" +
                          duplex + "'");
    }

    config.seed = kv.unsigned_integer("seed");

    if (kv.has("amc_table")) {
        std::filesystem::path table = kv.text("amc_table");
        if (table.is_relative()) {
            table = base_dir / table;
        }
        config.amc = AmcTable::load(table);
    }

    if (kv.text("p0_dbm") == "auto") {
        config.bs_power_w = calibrate_bs_power(config);
    } else {
        config.bs_power_w = dbm_to_watt(kv.number("p0_dbm"));
    }

    config.validate();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path.string() + "'");
    }
    return parse_config(in, path.parent_path());
}

}  // namespace femtoloss
