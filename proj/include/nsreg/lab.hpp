#ifndef NSREG_LAB_HPP
#define NSREG_LAB_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "criterion.hpp"
#include "io/checkpoint.hpp"
#include "io/csv.hpp"
#include "io/manifest.hpp"
#include "solver.hpp"
#include "verify.hpp"

namespace nsreg::lab {

enum ExitCode : int { Success = 0, VerificationFailed = 1, InputError = 2 };

namespace files {
inline constexpr const char* manifest = "manifest.txt";
inline constexpr const char* diagnostics = "diagnostics.csv";
inline constexpr const char* summary = "summary.txt";
inline constexpr const char* report = "report.txt";
inline constexpr const char* plot = "plot.gp";
inline constexpr const char* checkpoints = "checkpoints";
} // namespace files

/// Comma-separated numbers; accepts `inf`.
inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    for (std::string item; std::getline(is, item, ',');) {
        if (io::KeyValueFile::trim(item).empty()) continue;
        out.push_back(io::parse_number(item));
    }
    if (out.empty()) throw InvalidConfig("empty list '" + text + "'");
    return out;
}

inline std::string sci(double v) { return io::format_value(v); }

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
    int n = 16;
    std::uint64_t seed = 1;
    double tol = 1e-10;
    int corpus = 8;
};

inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.n < 8 || opt.n % 2 != 0) {
        err << "verify: --n must be an even integer >= 8 (got " << opt.n << ")\n";
        return InputError;
    }
    if (!(opt.tol >= 0.0) || opt.corpus < 1) {
        err << "verify: --tol must be >= 0 and the corpus nonempty\n";
        return InputError;
    }
    const auto checks = verify_battery(opt.n, opt.seed, opt.tol, opt.corpus);
    std::optional<std::string> first_failure;
    out << "verify n=" << opt.n << " seed=" << opt.seed << " tol=" << sci(opt.tol) << " corpus=" << opt.corpus << "\n";
    for (const auto& c : checks) {
        out << std::left << std::setw(34) << c.name << " residual=" << sci(c.residual) << "  "
            << (c.passed() ? "PASS" : "FAIL") << "\n";
        if (!c.passed() && !first_failure) first_failure = c.name;
    }
    if (first_failure) {
        out << "FAILED: first failing check " << *first_failure << "\n";
        return VerificationFailed;
    }
    out << "all " << checks.size() << " checks passed\n";
    return Success;
}

// ---------------------------------------------------------------------------
// summaries shared by run and report

struct RunOutcome {
    RunStatus status = RunStatus::Completed;
    std::optional<double> diverged_at;
};

inline std::string render_summary(const RunOutcome& outcome, const std::vector<CriterionReport>& reports,
                                  const BlowupIndicator& indicator, const std::vector<std::string>& extra_run_lines = {}) {
    std::ostringstream os;
    os << "[run]\n" << "status = " << to_string(outcome.status) << "\n";
    if (outcome.diverged_at) os << "diverged_at = " << sci(*outcome.diverged_at) << "\n";
    for (const auto& l : extra_run_lines) os << l << "\n";
    for (const auto& r : reports) {
        os << "\n[criterion " << r.spec.id << "]\n"
           << "target = " << to_string(r.spec.target) << "\n"
           << "space = "
           << (r.spec.norm.kind == NormSpec::Kind::Lebesgue ? std::string("L^p")
                                                            : "H^{" + format_exponent(r.spec.norm.sobolev_order) + ",p}")
           << "\n"
           << "p = " << format_exponent(r.spec.norm.p) << "\n"
           << "theta = " << io::detail::exact(r.spec.theta) << "\n"
           << "scaling_sum = " << io::detail::exact(r.spec.scaling_sum) << "\n"
           << "samples = " << r.instantaneous.size() << "\n"
           << "final_value = " << (r.final_value ? sci(*r.final_value) : std::string("DIVERGED")) << "\n"
           << "verdict = " << to_string(r.verdict) << "\n";
    }
    os << "\n[blowup_indicator]\n"
       << "samples = " << indicator.running_sup.size() << "\n"
       << "sup = " << sci(indicator.sup()) << "\n"
       << "verdict = " << (indicator.diverged() ? "DIVERGED" : "FINITE") << "\n";
    return os.str();
}

inline std::filesystem::path checkpoint_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "snapshot_%06zu.chk", i);
    return buf;
}

// ---------------------------------------------------------------------------
// run

inline int cmd_run(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir, std::ostream& out,
                   std::ostream& err) {
    namespace fs = std::filesystem;
    io::RunManifest manifest;
    SolverConfig config{GridSpec(16)};
    std::optional<SpectralVectorField> u0;
    try {
        manifest = io::load_manifest(manifest_path);
        config = io::solver_config(manifest);
        u0 = io::initial_field(manifest);
    } catch (const Error& e) {
        err << "run: " << e.what() << "\n";
        return InputError;
    }

    std::error_code ec;
    if (fs::exists(out_dir) && !fs::is_empty(out_dir, ec)) {
        err << "run: output directory " << out_dir.string() << " is not empty (run directories are write-once)\n";
        return InputError;
    }
    fs::create_directories(out_dir / files::checkpoints, ec);
    if (ec) {
        err << "run: cannot create " << out_dir.string() << ": " << ec.message() << "\n";
        return InputError;
    }

    std::optional<Trajectory> result;
    try {
        result = run(config, *u0, manifest.monitors);
    } catch (const Error& e) {
        err << "run: " << e.what() << "\n";
        return InputError;
    }
    const Trajectory& traj = *result;

    try {
        auto canonical = manifest;
        canonical.output_directory.clear();
        io::write_text(out_dir / files::manifest, io::write_manifest(canonical));
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
            io::write_checkpoint(out_dir / files::checkpoints / checkpoint_name(i), traj.snapshots[i].field);
        io::write_text(out_dir / files::diagnostics, io::write_diagnostics_csv(traj.diagnostics));

        std::vector<CriterionReport> reports;
        for (const auto& m : traj.monitors) reports.push_back(evaluate(traj, m));
        std::vector<std::string> extra{"snapshots = " + std::to_string(traj.snapshots.size()),
                                       "final_time = " + sci(traj.snapshots.empty() ? 0.0 : traj.snapshots.back().time)};
        if (traj.status == RunStatus::Completed && traj.snapshots.size() >= 2)
            extra.push_back("energy_balance_residual = " + sci(*energy_balance_residual(traj).value));
        if (!traj.message.empty()) extra.push_back("message = " + traj.message);
        const auto summary = render_summary({traj.status, traj.diverged_at}, reports, blowup_indicator(traj), extra);
        io::write_text(out_dir / files::summary, summary);
        out << summary;
    } catch (const Error& e) {
        err << "run: " << e.what() << "\n";
        return InputError;
    }

    if (traj.status == RunStatus::StepRejected) {
        err << "run: " << traj.message << "\n";
        return InputError;
    }
    return Success;
}

// ---------------------------------------------------------------------------
// norms

inline int cmd_norms(const std::filesystem::path& field_path, const std::vector<double>& p_list,
                     const std::vector<double>& s_list, std::ostream& out, std::ostream& err) {
    try {
        const auto f = io::read_checkpoint(field_path);
        const auto phys = to_physical(f);
        out << std::left << std::setw(10) << "s" << std::setw(10) << "p" << "norm\n";
        for (double s : s_list)
            for (double p : p_list) {
                const double v = (s == 0.0) ? lp_norm(phys, p) : sobolev_norm(f, s, p);
                out << std::left << std::setw(10) << format_exponent(s) << std::setw(10) << format_exponent(p) << sci(v)
                    << "\n";
            }
    } catch (const Error& e) {
        err << "norms: " << e.what() << "\n";
        return InputError;
    }
    return Success;
}

// ---------------------------------------------------------------------------
// report

inline RunOutcome read_outcome(const std::filesystem::path& summary_path) {
    RunOutcome out;
    if (!std::filesystem::exists(summary_path)) return out;
    const auto kv = io::KeyValueFile::load(summary_path);
    if (const auto* e = kv.find("run", "status")) {
        if (e->value == "DIVERGED") out.status = RunStatus::Diverged;
        else if (e->value == "STEP_REJECTED") out.status = RunStatus::StepRejected;
    }
    if (const auto* e = kv.find("run", "diverged_at")) out.diverged_at = io::parse_number(e->value);
    return out;
}

inline std::string plot_script(const io::NamedSeries& series) {
    std::ostringstream os;
    os << "# gnuplot script over " << files::diagnostics << "\n"
       << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set xlabel 't'\n"
       << "set logscale y\n"
       << "set terminal pngcairo size 1000,700\n"
       << "set output 'diagnostics.png'\n"
       << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) os << ", \\\n     ";
        os << "'" << files::diagnostics << "' using 1:" << (i + 2) << " with lines title '" << series[i].first << "'";
    }
    os << "\n";
    return os.str();
}

inline int cmd_report(const std::filesystem::path& dir, bool emit_plot_script, std::ostream& out, std::ostream& err) {
    namespace fs = std::filesystem;
    const auto csv_path = dir / files::diagnostics;
    if (!fs::exists(csv_path)) {
        err << "report: " << csv_path.string() << " not found\n";
        return InputError;
    }
    try {
        const auto series = io::read_diagnostics_csv(io::read_text(csv_path));
        std::vector<CriterionSpec> monitors;
        if (fs::exists(dir / files::manifest)) monitors = io::load_manifest(dir / files::manifest).monitors;
        auto outcome = read_outcome(dir / files::summary);

        const auto find = [&](const std::string& name) -> const TimeSeries* {
            for (const auto& [key, s] : series)
                if (key == name) return &s;
            return nullptr;
        };
        if (!outcome.diverged_at)
            for (const auto& [key, s] : series)
                if (s.diverged()) {
                    outcome.status = RunStatus::Diverged;
                    outcome.diverged_at = s.diverged_at();
                    break;
                }
        const auto with_outcome = [&](TimeSeries s) {
            if (outcome.status == RunStatus::Diverged && outcome.diverged_at) s.mark_diverged(*outcome.diverged_at);
            return s;
        };

        std::vector<CriterionReport> reports;
        for (const auto& m : monitors) {
            const auto* s = find(m.id);
            if (!s) throw InsufficientData("diagnostics.csv has no column for criterion '" + m.id + "'");
            reports.push_back(evaluate_series(m, with_outcome(*s)));
        }
        BlowupIndicator indicator;
        if (const auto* s = find(diag::omega_hm1_inf)) indicator = blowup_indicator_from(with_outcome(*s));

        const auto text = render_summary(outcome, reports, indicator);
        io::write_text(dir / files::report, text);
        out << text;
        if (emit_plot_script) {
            io::write_text(dir / files::plot, plot_script(series));
            out << "\nplot script written to " << (dir / files::plot).string() << "\n";
        }
    } catch (const Error& e) {
        err << "report: " << e.what() << "\n";
        return InputError;
    }
    return Success;
}

} // namespace nsreg::lab

#endif
