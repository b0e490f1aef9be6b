#ifndef NSREG_IO_CSV_HPP
#define NSREG_IO_CSV_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "../time_series.hpp"
#include "manifest.hpp"

namespace nsreg::io {

using NamedSeries = std::vector<std::pair<std::string, TimeSeries>>;

/// 17 significant digits: enough to round-trip any binary64.
inline std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

/// Header `t,<name>...`, one row per sample time. All series must share their time stamps.
inline std::string write_diagnostics_csv(const NamedSeries& series) {
    std::ostringstream os;
    os << "t";
    for (const auto& [name, s] : series) os << ',' << name;
    os << '\n';
    if (series.empty()) return os.str();
    const auto times = series.front().second.times();
    for (const auto& [name, s] : series)
        if (s.size() != times.size()) throw RangeError("diagnostic series '" + name + "' has a different length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << format_value(times[i]);
        for (const auto& [name, s] : series) os << ',' << format_value(s.values()[i]);
        os << '\n';
    }
    return os.str();
}

/// Inverse of write_diagnostics_csv. A non-finite cell marks its column diverged at that time.
inline NamedSeries read_diagnostics_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw FormatError("empty CSV", 0);
    std::size_t offset = line.size() + 1;
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        for (std::string cell; std::getline(hs, cell, ',');) header.push_back(std::string(KeyValueFile::trim(cell)));
    }
    if (header.empty() || header[0] != "t") throw FormatError("CSV header must start with 't'", 0);
    NamedSeries out;
    for (std::size_t c = 1; c < header.size(); ++c) out.emplace_back(header[c], TimeSeries{});
    while (std::getline(is, line)) {
        const std::size_t here = offset;
        offset += line.size() + 1;
        if (KeyValueFile::trim(line).empty()) continue;
        std::vector<double> cells;
        std::istringstream rs(line);
        for (std::string cell; std::getline(rs, cell, ',');) {
            try {
                const auto t = KeyValueFile::trim(cell);
                cells.push_back(t == "nan" ? std::nan("") : parse_number(t));
            } catch (const InvalidConfig&) {
                throw FormatError("unparseable CSV cell '" + cell + "'", here);
            }
        }
        if (cells.size() != header.size()) throw FormatError("CSV row has the wrong number of cells", here);
        for (std::size_t c = 1; c < cells.size(); ++c) out[c - 1].second.push(cells[0], cells[c]);
    }
    return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw Error("failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot read " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace nsreg::io

#endif
