#ifndef NSREG_IO_MANIFEST_HPP
#define NSREG_IO_MANIFEST_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "../criterion_spec.hpp"
#include "../generators.hpp"
#include "../solver.hpp"

namespace nsreg::io {

/// One `key = value` line of a sectioned text file.
struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

/// Line-oriented `[section]` / `key = value` text; `#` starts a comment. Keys may repeat.
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text) {
        KeyValueFile out;
        std::string section;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const auto eol = text.find('\n', pos);
            std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
            pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw InvalidConfig("line " + std::to_string(line_no) + ": unterminated section header");
                section = std::string(trim(line.substr(1, line.size() - 2)));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw InvalidConfig("line " + std::to_string(line_no) + ": expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            if (key.empty()) throw InvalidConfig("line " + std::to_string(line_no) + ": empty key");
            out.entries_.push_back({section, std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
        }
        return out;
    }

    static KeyValueFile load(const std::filesystem::path& path) {
        std::ifstream is(path);
        if (!is) throw InvalidConfig("cannot read " + path.string());
        std::stringstream ss;
        ss << is.rdbuf();
        return parse(ss.str());
    }

    const std::vector<Entry>& entries() const noexcept { return entries_; }

    const Entry* find(std::string_view section, std::string_view key) const {
        const Entry* hit = nullptr;
        for (const auto& e : entries_)
            if (e.section == section && e.key == key) hit = &e;
        return hit;
    }

    std::vector<const Entry*> all(std::string_view section, std::string_view key) const {
        std::vector<const Entry*> out;
        for (const auto& e : entries_)
            if (e.section == section && e.key == key) out.push_back(&e);
        return out;
    }

    static std::string_view trim(std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
        return s;
    }

private:
    std::vector<Entry> entries_;
};

/// Accepts decimal numbers, `inf`, `pi`, `2pi`, and fractions `a/b`.
inline double parse_number(std::string_view s) {
    s = KeyValueFile::trim(s);
    if (s == "inf" || s == "infinity" || s == "Inf") return infinity;
    if (s == "pi") return std::numbers::pi;
    if (s == "2pi") return 2.0 * std::numbers::pi;
    if (const auto slash = s.find('/'); slash != std::string_view::npos)
        return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw InvalidConfig("not a number: '" + std::string(s) + "'");
    return v;
}

inline long parse_integer(std::string_view s) {
    s = KeyValueFile::trim(s);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw InvalidConfig("not an integer: '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

struct InitialCondition {
    std::string generator = "beltrami";  ///< beltrami | taylor_green | random | zero
    int k = 1;
    double amplitude = 1.0;
    double decay_exponent = 1.0;
};

struct ForcingSpec {
    std::string kind = "zero";  ///< zero | beltrami | taylor_green
    int k = 1;
    double amplitude = 0.0;
};

struct RunManifest {
    GridSpec grid{16};
    double viscosity = 0.1;
    double dt = 1e-3;
    double horizon = 1.0;
    int save_every = 1;
    double cfl_safety = 0.5;
    ForcingSpec forcing;
    InitialCondition initial;
    std::vector<CriterionSpec> monitors;
    std::vector<std::string> monitor_lines;  ///< canonical monitor declarations, as written back
    std::string output_directory;
    std::uint64_t seed = 1;
};

/// Monitor declaration: `paper <p>`, `serrin <p>`, `bkm`, or
/// `custom <id> <velocity|vorticity> <sobolev_order> <p> <theta>`.
inline CriterionSpec parse_monitor(std::string_view decl) {
    const auto w = split_words(decl);
    if (w.empty()) throw InvalidConfig("empty monitor declaration");
    if (w[0] == "paper" && w.size() == 2) return builtin_paper_criterion(parse_number(w[1]));
    if (w[0] == "serrin" && w.size() == 2) return builtin_serrin(parse_number(w[1]));
    if (w[0] == "bkm" && w.size() == 1) return builtin_bkm_classic();
    if (w[0] == "custom" && w.size() == 6) {
        Target target;
        if (w[2] == "velocity") target = Target::Velocity;
        else if (w[2] == "vorticity") target = Target::Vorticity;
        else throw InvalidConfig("monitor target must be velocity or vorticity");
        const double order = parse_number(w[3]);
        const double p = parse_number(w[4]);
        const double theta = parse_number(w[5]);
        const NormSpec norm = order == 0.0 ? NormSpec::lebesgue(p) : NormSpec::neg_sobolev(order, p);
        return {w[1], target, norm, theta, 2.0 / theta + spatial_scaling(p)};
    }
    throw InvalidConfig("unrecognized monitor declaration '" + std::string(decl) + "'");
}

inline std::string monitor_declaration(const CriterionSpec& spec) {
    if (spec.id == builtin_bkm_classic().id) return "bkm";
    const std::string p = format_exponent(spec.norm.p);
    if (spec.id == "paper_p" + p && spec.target == Target::Vorticity && spec.norm.sobolev_order == -1.0 && spec.scaling_sum == 1.0)
        return "paper " + p;
    if (spec.id == "serrin_p" + p && spec.target == Target::Velocity && spec.norm.sobolev_order == 0.0 && spec.scaling_sum == 2.0)
        return "serrin " + p;
    return "custom " + spec.id + " " + to_string(spec.target) + " " + format_exponent(spec.norm.sobolev_order) + " " + p +
           " " + format_exponent(spec.theta);
}

namespace detail {
inline std::string where(const Entry& e) { return "manifest line " + std::to_string(e.line) + " (" + e.key + "): "; }
} // namespace detail

inline RunManifest parse_manifest(std::string_view text) {
    const auto kv = KeyValueFile::parse(text);
    RunManifest m;
    const auto num = [&](std::string_view sec, std::string_view key, double fallback) {
        const auto* e = kv.find(sec, key);
        if (!e) return fallback;
        try {
            return parse_number(e->value);
        } catch (const InvalidConfig& ex) {
            throw InvalidConfig(detail::where(*e) + ex.what());
        }
    };
    const auto integer = [&](std::string_view sec, std::string_view key, long fallback) {
        const auto* e = kv.find(sec, key);
        if (!e) return fallback;
        try {
            return parse_integer(e->value);
        } catch (const InvalidConfig& ex) {
            throw InvalidConfig(detail::where(*e) + ex.what());
        }
    };
    const auto text_of = [&](std::string_view sec, std::string_view key, std::string fallback) {
        const auto* e = kv.find(sec, key);
        return e ? e->value : fallback;
    };

    static const std::map<std::string, std::vector<std::string>> known{
        {"grid", {"n", "box_length", "dealias_fraction"}},
        {"solver", {"viscosity", "dt", "horizon", "save_every", "cfl_safety", "forcing"}},
        {"initial", {"generator", "k", "amplitude", "seed", "decay_exponent"}},
        {"monitors", {"criterion"}},
        {"output", {"directory"}},
    };
    for (const auto& e : kv.entries()) {
        const auto it = known.find(e.section);
        if (it == known.end())
            throw InvalidConfig("manifest line " + std::to_string(e.line) + ": unknown section [" + e.section + "]");
        if (std::find(it->second.begin(), it->second.end(), e.key) == it->second.end())
            throw InvalidConfig(detail::where(e) + "unknown key in [" + e.section + "]");
    }

    m.grid = GridSpec(static_cast<int>(integer("grid", "n", 16)), num("grid", "box_length", 2.0 * std::numbers::pi),
                      num("grid", "dealias_fraction", GridSpec::default_dealias));
    m.viscosity = num("solver", "viscosity", m.viscosity);
    m.dt = num("solver", "dt", m.dt);
    m.horizon = num("solver", "horizon", m.horizon);
    m.save_every = static_cast<int>(integer("solver", "save_every", m.save_every));
    m.cfl_safety = num("solver", "cfl_safety", m.cfl_safety);

    if (const auto* e = kv.find("solver", "forcing")) {
        const auto w = split_words(e->value);
        if (w.empty() || w[0] == "zero") {
            m.forcing = {};
        } else if (w[0] == "beltrami" && w.size() == 3) {
            m.forcing = {"beltrami", static_cast<int>(parse_integer(w[1])), parse_number(w[2])};
        } else if (w[0] == "taylor_green" && w.size() == 2) {
            m.forcing = {"taylor_green", 1, parse_number(w[1])};
        } else {
            throw InvalidConfig(detail::where(*e) + "forcing must be 'zero', 'beltrami <k> <amplitude>' or 'taylor_green <amplitude>'");
        }
    }

    m.initial.generator = text_of("initial", "generator", m.initial.generator);
    m.initial.k = static_cast<int>(integer("initial", "k", m.initial.k));
    m.initial.amplitude = num("initial", "amplitude", m.initial.amplitude);
    m.initial.decay_exponent = num("initial", "decay_exponent", m.initial.decay_exponent);
    const long seed = integer("initial", "seed", 1);
    if (seed < 0) throw InvalidConfig("seed must be nonnegative");
    m.seed = static_cast<std::uint64_t>(seed);
    static const std::vector<std::string> generators{"beltrami", "taylor_green", "random", "zero"};
    if (std::find(generators.begin(), generators.end(), m.initial.generator) == generators.end())
        throw InvalidConfig("unknown initial-condition generator '" + m.initial.generator + "'");

    for (const auto* e : kv.all("monitors", "criterion")) {
        try {
            m.monitors.push_back(parse_monitor(e->value));
        } catch (const Error& ex) {
            throw InvalidConfig(detail::where(*e) + ex.what());
        }
        m.monitor_lines.push_back(monitor_declaration(m.monitors.back()));
    }
    m.output_directory = text_of("output", "directory", "");
    return m;
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InvalidConfig("cannot read manifest " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_manifest(ss.str());
}

namespace detail {
inline std::string exact(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace detail

/// Canonical text form; parse_manifest(write_manifest(m)) reproduces m.
inline std::string write_manifest(const RunManifest& m) {
    using detail::exact;
    std::ostringstream os;
    os << "[grid]\n"
       << "n = " << m.grid.n() << "\n"
       << "box_length = " << exact(m.grid.box_length()) << "\n"
       << "dealias_fraction = " << exact(m.grid.dealias_fraction()) << "\n\n"
       << "[solver]\n"
       << "viscosity = " << exact(m.viscosity) << "\n"
       << "dt = " << exact(m.dt) << "\n"
       << "horizon = " << exact(m.horizon) << "\n"
       << "save_every = " << m.save_every << "\n"
       << "cfl_safety = " << exact(m.cfl_safety) << "\n";
    if (m.forcing.kind == "beltrami")
        os << "forcing = beltrami " << m.forcing.k << " " << exact(m.forcing.amplitude) << "\n";
    else if (m.forcing.kind == "taylor_green")
        os << "forcing = taylor_green " << exact(m.forcing.amplitude) << "\n";
    else
        os << "forcing = zero\n";
    os << "\n[initial]\n"
       << "generator = " << m.initial.generator << "\n"
       << "k = " << m.initial.k << "\n"
       << "amplitude = " << exact(m.initial.amplitude) << "\n"
       << "seed = " << m.seed << "\n"
       << "decay_exponent = " << exact(m.initial.decay_exponent) << "\n\n"
       << "[monitors]\n";
    for (const auto& line : m.monitor_lines) os << "criterion = " << line << "\n";
    if (!m.output_directory.empty()) os << "\n[output]\ndirectory = " << m.output_directory << "\n";
    return os.str();
}

inline SpectralVectorField initial_field(const RunManifest& m) {
    const auto& g = m.grid;
    const auto& ic = m.initial;
    if (ic.generator == "beltrami") return gen_beltrami(g, ic.k, ic.amplitude);
    if (ic.generator == "taylor_green") return ic.amplitude * gen_taylor_green(g);
    if (ic.generator == "random") return ic.amplitude * gen_random_solenoidal(g, m.seed, ic.decay_exponent);
    return SpectralVectorField(g);
}

inline SolverConfig solver_config(const RunManifest& m) {
    SolverConfig cfg{m.grid, m.viscosity, m.dt, m.horizon, std::nullopt, m.save_every, m.cfl_safety};
    if (m.forcing.kind == "beltrami") cfg.forcing = gen_beltrami(m.grid, m.forcing.k, m.forcing.amplitude);
    else if (m.forcing.kind == "taylor_green") cfg.forcing = m.forcing.amplitude * gen_taylor_green(m.grid);
    cfg.validate();
    return cfg;
}

} // namespace nsreg::io

#endif
