// nsreg: command-line driver for the periodic-box Navier-Stokes regularity lab.
//
//   nsreg verify [--n N] [--seed S] [--tol T]
//   nsreg run --manifest FILE --out DIR
//   nsreg norms --field FILE --p LIST --s LIST
//   nsreg report --in DIR [--emit-plot-script]
//
// Exit codes: 0 success (a DIVERGED verdict is a result, not a failure),
// 1 verification failure, 2 usage or input error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nsreg/lab.hpp"

int main(int argc, char** argv) {
    using namespace nsreg;

    CLI::App app{"Periodic-box Navier-Stokes solver with vorticity regularity-criterion monitoring"};
    app.require_subcommand(1);

    lab::VerifyOptions vopt;
    auto* verify = app.add_subcommand("verify", "Run the operator-identity and norm-consistency battery");
    verify->add_option("--n", vopt.n, "Grid points per axis (even, >= 8)");
    verify->add_option("--seed", vopt.seed, "Seed of the random field corpus");
    verify->add_option("--tol", vopt.tol, "Pass threshold for every residual");
    verify->add_option("--corpus", vopt.corpus, "Number of random fields per corpus");

    std::string manifest, out_dir;
    auto* run = app.add_subcommand("run", "Integrate a manifest and write checkpoints, CSV diagnostics and a summary");
    run->add_option("--manifest", manifest, "Run manifest (sectioned key = value text)")->required();
    run->add_option("--out", out_dir, "Output directory (must be empty or absent)")->required();

    std::string field, p_list, s_list;
    auto* norms = app.add_subcommand("norms", "Print ||A^{s/2} v||_p for a checkpointed field");
    norms->add_option("--field", field, "Checkpoint file")->required();
    norms->add_option("--p", p_list, "Comma-separated exponents p (inf allowed)")->required();
    norms->add_option("--s", s_list, "Comma-separated Sobolev indices s")->required();

    std::string in_dir;
    bool emit_plot = false;
    auto* report = app.add_subcommand("report", "Aggregate the criterion reports of a run directory");
    report->add_option("--in", in_dir, "Run directory")->required();
    report->add_flag("--emit-plot-script", emit_plot, "Also write a gnuplot script over the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lab::InputError;
    }

    if (*verify) return lab::cmd_verify(vopt, std::cout, std::cerr);
    if (*run) return lab::cmd_run(manifest, out_dir, std::cout, std::cerr);
    if (*norms) {
        try {
            return lab::cmd_norms(field, lab::parse_list(p_list), lab::parse_list(s_list), std::cout, std::cerr);
        } catch (const Error& e) {
            std::cerr << "norms: " << e.what() << "\n";
            return lab::InputError;
        }
    }
    if (*report) return lab::cmd_report(in_dir, emit_plot, std::cout, std::cerr);
    return lab::InputError;
}
