#include "femtoloss/amc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

#include "femtoloss/error.hpp"
#include "femtoloss/units.hpp"

namespace femtoloss {

AmcTable::AmcTable(std::vector<AmcMode> modes) : modes_(std::move(modes)) {
    if (modes_.size() < 2) {
        throw ConfigError("AMC table needs at least two modes");
    }
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        if (modes_[i].index != static_cast<int>(i) + 1) {
            throw ConfigError("AMC table indices must run 1..M in order (line " + std::to_string(i + 1) + ")");
        }
        if (!(modes_[i].min_sinr >= 0.0) || !std::isfinite(modes_[i].min_sinr)) {
            throw ConfigError("AMC threshold must be finite (mode " + std::to_string(i + 1) + ")");
        }
        if (i > 0 && !(modes_[i].min_sinr > modes_[i - 1].min_sinr)) {
            throw ConfigError("AMC thresholds must be strictly increasing (mode " + std::to_string(i + 1) + ")");
        }
    }
}

AmcTable AmcTable::default_table() {
    static const std::pair<double, const char*> rows[] = {
        {3.0, "BPSK1/2"},  {6.0, "QPSK1/2"},   {8.5, "QPSK3/4"},   {11.5, "16QAM1/2"},
        {15.0, "16QAM3/4"}, {19.0, "64QAM2/3"}, {21.0, "64QAM3/4"},
    };
    std::vector<AmcMode> modes;
    int index = 1;
    for (const auto& [db, label] : rows) {
        modes.push_back({index++, db_to_linear(db), label});
    }
    return AmcTable(std::move(modes));
}

AmcTable AmcTable::parse(std::istream& in) {
    std::vector<AmcMode> modes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream row(line);
        row.imbue(std::locale::classic());
        AmcMode mode;
        double threshold_db = 0.0;
        if (!(row >> mode.index)) {
            std::string rest;
            if (std::istringstream(line) >> rest) {
                throw ConfigError("AMC table line " + std::to_string(line_no) + ": expected 'index threshold_db label'");
            }
            continue;  // blank line
        }
        if (!(row >> threshold_db >> mode.label)) {
            throw ConfigError("AMC table line " + std::to_string(line_no) + ": expected 'index threshold_db label'");
        }
        mode.min_sinr = db_to_linear(threshold_db);
        modes.push_back(std::move(mode));
    }
    return AmcTable(std::move(modes));
}

AmcTable AmcTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open AMC table '" + path.string() + "'");
    }
    return parse(in);
}

const AmcMode& AmcTable::mode(int m) const {
    if (!valid_mode(m)) {
        throw InputError("AMC mode " + std::to_string(m) + " outside 1.." + std::to_string(size()));
    }
    return modes_[static_cast<std::size_t>(m - 1)];
}

double AmcTable::threshold(int m) const { return mode(m).min_sinr; }

double AmcTable::upper_threshold(int m) const {
    if (m == size()) {
        return std::numeric_limits<double>::infinity();
    }
    return mode(m + 1).min_sinr;
}

int AmcTable::assign_mode(double sinr) const {
    // First threshold strictly above sinr; the mode just below it wins.
    auto above = std::upper_bound(modes_.begin(), modes_.end(), sinr,
                                  [](double s, const AmcMode& mode) { return s < mode.min_sinr; });
    const auto m = static_cast<int>(above - modes_.begin());
    return std::max(m, 1);
}

}  // namespace femtoloss
