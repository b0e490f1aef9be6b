#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "nsreg/generators.hpp"
#include "nsreg/lab.hpp"
#include "oracles.hpp"

using namespace nsreg;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace fs = std::filesystem;

namespace {

const fs::path source_dir{NSREG_SOURCE_DIR};

struct Captured {
    int code = -1;
    std::string out, err;
};

template <class F>
Captured capture(F&& fn) {
    std::ostringstream out, err;
    Captured c;
    c.code = fn(out, err);
    c.out = out.str();
    c.err = err.str();
    return c;
}

double summary_value(const fs::path& file, const std::string& section, const std::string& key) {
    const auto kv = io::KeyValueFile::load(file);
    const auto* e = kv.find(section, key);
    REQUIRE(e);
    return io::parse_number(e->value);
}

std::string summary_text(const fs::path& file, const std::string& section, const std::string& key) {
    const auto kv = io::KeyValueFile::load(file);
    const auto* e = kv.find(section, key);
    REQUIRE(e);
    return e->value;
}

// One Beltrami run directory shared by the tests below.
const fs::path& beltrami_dir() {
    static const fs::path dir = [] {
        auto d = oracle::scratch_dir("lab_beltrami");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run(source_dir / "tools/manifests/beltrami.ini", d, o, e); });
        REQUIRE(r.code == 0);
        return d;
    }();
    return dir;
}

} // namespace

TEST_CASE("cmd_verify", "[lab]") {
    SECTION("passes at n = 16") {
        const auto r = capture([](auto& o, auto& e) { return lab::cmd_verify({16, 1, 1e-10, 4}, o, e); });
        CHECK(r.code == lab::Success);
        CHECK_THAT(r.out, ContainsSubstring("b0_equals_projection"));
        CHECK_THAT(r.out, ContainsSubstring("power_curl_identity"));
        CHECK_THAT(r.out, !ContainsSubstring("FAIL"));
    }

    SECTION("odd n is a usage error") {
        const auto r = capture([](auto& o, auto& e) { return lab::cmd_verify({7, 1, 1e-10, 4}, o, e); });
        CHECK(r.code == lab::InputError);
        CHECK_THAT(r.err, ContainsSubstring("--n"));
    }

    SECTION("an unreachable tolerance fails and names the first failing check, listing the rest") {
        const auto r = capture([](auto& o, auto& e) { return lab::cmd_verify({8, 1, 1e-30, 2}, o, e); });
        CHECK(r.code == lab::VerificationFailed);
        CHECK_THAT(r.out, ContainsSubstring("FAILED: first failing check"));
        CHECK_THAT(r.out, ContainsSubstring("nonlinear_orthogonality"));
    }
}

TEST_CASE("cmd_run and cmd_report on the Beltrami manifest", "[lab]") {
    const auto& dir = beltrami_dir();
    const double closed = oracle::exp_l2(0.1, 1.0);

    CHECK(fs::exists(dir / lab::files::manifest));
    CHECK(fs::exists(dir / lab::files::diagnostics));
    CHECK(fs::exists(dir / lab::files::checkpoints / "snapshot_000000.chk"));
    CHECK(fs::exists(dir / lab::files::checkpoints / "snapshot_000010.chk"));
    CHECK_FALSE(fs::exists(dir / lab::files::checkpoints / "snapshot_000011.chk"));

    const auto summary = dir / lab::files::summary;
    CHECK(summary_text(summary, "run", "status") == "COMPLETED");
    CHECK(summary_text(summary, "criterion paper_pinf", "verdict") == "FINITE");
    CHECK_THAT(summary_value(summary, "criterion paper_pinf", "final_value"), WithinAbs(closed, 1e-4));
    CHECK_THAT(summary_value(summary, "criterion paper_pinf", "theta"), WithinAbs(2.0, 0.0));
    CHECK_THAT(summary_value(summary, "criterion bkm_classic", "final_value"), WithinAbs((1 - std::exp(-0.1)) / 0.1, 1e-4));
    CHECK_THAT(summary_value(summary, "blowup_indicator", "sup"), WithinRel(1.0, 1e-12));
    CHECK(summary_value(summary, "run", "energy_balance_residual") <= 1e-5);

    SECTION("the checkpoint holds the final state") {
        const auto last = io::read_checkpoint(dir / lab::files::checkpoints / "snapshot_000010.chk");
        CHECK(last.meta().time == 1.0);
        CHECK(l2_distance(last, std::exp(-0.1) * gen_beltrami(GridSpec(16), 1, 1.0)) <= 1e-10);
    }

    SECTION("report reproduces the summary from the CSV") {
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_report(dir, true, o, e); });
        REQUIRE(r.code == lab::Success);
        const auto report = dir / lab::files::report;
        CHECK(summary_text(report, "criterion paper_pinf", "verdict") == "FINITE");
        CHECK_THAT(summary_value(report, "criterion paper_pinf", "final_value"),
                   WithinRel(summary_value(summary, "criterion paper_pinf", "final_value"), 1e-15));
        CHECK(summary_text(report, "criterion serrin_p6", "p") == "6");
        CHECK(fs::exists(dir / lab::files::plot));
        const auto plot = io::read_text(dir / lab::files::plot);
        CHECK_THAT(plot, ContainsSubstring("using 1:5"));
        CHECK_THAT(plot, ContainsSubstring("paper_pinf"));
    }

    SECTION("identical manifests give byte-identical CSV") {
        const auto again = oracle::scratch_dir("lab_beltrami_again");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run(source_dir / "tools/manifests/beltrami.ini", again, o, e); });
        REQUIRE(r.code == 0);
        CHECK(io::read_text(again / lab::files::diagnostics) == io::read_text(dir / lab::files::diagnostics));
        // replaying the written manifest reproduces the run as well
        const auto replay = oracle::scratch_dir("lab_beltrami_replay");
        const auto r2 = capture([&](auto& o, auto& e) { return lab::cmd_run(dir / lab::files::manifest, replay, o, e); });
        REQUIRE(r2.code == 0);
        CHECK(io::read_text(replay / lab::files::diagnostics) == io::read_text(dir / lab::files::diagnostics));
        fs::remove_all(again);
        fs::remove_all(replay);
    }

    SECTION("run directories are write-once") {
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run(source_dir / "tools/manifests/beltrami.ini", dir, o, e); });
        CHECK(r.code == lab::InputError);
        CHECK_THAT(r.err, ContainsSubstring("not empty"));
    }

    SECTION("norms on the initial checkpoint") {
        const auto r = capture([&](auto& o, auto& e) {
            return lab::cmd_norms(dir / lab::files::checkpoints / "snapshot_000000.chk", {infinity, 2.0}, {0.0}, o, e);
        });
        REQUIRE(r.code == lab::Success);
        std::istringstream rows(r.out);
        std::string header, s, p;
        double sup = 0.0, l2 = 0.0;
        std::getline(rows, header);
        rows >> s >> p >> sup >> s >> p >> l2;
        CHECK_THAT(sup, WithinAbs(1.0, 1e-14));
        CHECK_THAT(l2, WithinRel(std::pow(2 * std::numbers::pi, 1.5), 1e-13));
    }
}

TEST_CASE("cmd_run input handling", "[lab]") {
    SECTION("rest state gives all-zero columns") {
        const auto dir = oracle::scratch_dir("lab_zero");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run(source_dir / "tests/data/zero.ini", dir, o, e); });
        REQUIRE(r.code == lab::Success);
        const auto csv = io::read_diagnostics_csv(io::read_text(dir / lab::files::diagnostics));
        REQUIRE(csv.size() == 4);
        for (const auto& [name, s] : csv) {
            CHECK(s.size() == 11);
            for (double v : s.values()) CHECK(v == 0.0);
        }
        fs::remove_all(dir);
    }

    SECTION("p = 3 is rejected") {
        const auto dir = oracle::scratch_dir("lab_p3");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run(source_dir / "tests/data/p3.ini", dir, o, e); });
        CHECK(r.code == lab::InputError);
        CHECK_THAT(r.err, ContainsSubstring("p must exceed 3"));
        CHECK_FALSE(fs::exists(dir));
    }

    SECTION("unreadable manifest") {
        const auto dir = oracle::scratch_dir("lab_missing");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run("/nonexistent.ini", dir, o, e); });
        CHECK(r.code == lab::InputError);
    }

    SECTION("CFL violation") {
        const auto work = oracle::scratch_dir("lab_cfl");
        fs::create_directories(work);
        io::write_text(work / "m.ini", "[grid]\nn = 8\n[solver]\ndt = 0.5\nhorizon = 1\n[initial]\ngenerator = beltrami\namplitude = 5\n");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_run(work / "m.ini", work / "out", o, e); });
        CHECK(r.code == lab::InputError);
        CHECK_THAT(r.err, ContainsSubstring("CFL"));
        fs::remove_all(work);
    }
}

TEST_CASE("cmd_norms", "[lab]") {
    const auto dir = oracle::scratch_dir("lab_norms");
    fs::create_directories(dir);
    const GridSpec g(16);
    io::write_checkpoint(dir / "tg.chk", gen_taylor_green(g));
    io::write_checkpoint(dir / "curl_b2.chk", curl(gen_beltrami(g, 2, 1.0)));

    const auto tg = capture([&](auto& o, auto& e) { return lab::cmd_norms(dir / "tg.chk", {2.0}, {0.0}, o, e); });
    REQUIRE(tg.code == lab::Success);
    CHECK_THAT(tg.out, ContainsSubstring("7.8748"));

    const auto b2 = capture([&](auto& o, auto& e) { return lab::cmd_norms(dir / "curl_b2.chk", {2.0}, {-1.0}, o, e); });
    REQUIRE(b2.code == lab::Success);
    const double expect = lp_norm(to_physical(gen_beltrami(g, 2, 1.0)), 2.0);
    std::istringstream rows(b2.out);
    std::string header, s, p;
    double value = 0.0;
    std::getline(rows, header);
    rows >> s >> p >> value;
    CHECK(s == "-1");
    CHECK_THAT(value, WithinRel(expect, 1e-13));

    SECTION("one row per (s, p)") {
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_norms(dir / "tg.chk", {2.0, 4.0, infinity}, {-1.0, 0.0}, o, e); });
        CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 7);
    }

    SECTION("corrupt checkpoint") {
        auto bytes = io::encode_checkpoint(gen_taylor_green(g));
        bytes.resize(100);
        const std::string raw(bytes.begin(), bytes.end());
        io::write_text(dir / "bad.chk", raw);
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_norms(dir / "bad.chk", {2.0}, {0.0}, o, e); });
        CHECK(r.code == lab::InputError);
        CHECK_THAT(r.err, ContainsSubstring("byte offset 100"));
    }
    fs::remove_all(dir);
}

TEST_CASE("cmd_report edge cases", "[lab]") {
    SECTION("empty directory") {
        const auto dir = oracle::scratch_dir("lab_empty");
        fs::create_directories(dir);
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_report(dir, false, o, e); });
        CHECK(r.code == lab::InputError);
        fs::remove_all(dir);
    }

    SECTION("diverged synthetic run") {
        const auto dir = oracle::scratch_dir("lab_diverged");
        fs::create_directories(dir);
        io::write_text(dir / lab::files::manifest, "[monitors]\ncriterion = paper inf\n");
        io::write_text(dir / lab::files::diagnostics,
                       "t,energy,enstrophy,omega_hm1_inf,paper_pinf\n"
                       "0.0,1.0,1.0,1.0,1.0\n"
                       "0.1,2.0,4.0,3.0,3.0\n"
                       "0.2,nan,nan,nan,nan\n");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_report(dir, false, o, e); });
        REQUIRE(r.code == lab::Success);
        const auto report = dir / lab::files::report;
        CHECK(summary_text(report, "run", "status") == "DIVERGED");
        CHECK(summary_value(report, "run", "diverged_at") == 0.2);
        CHECK(summary_text(report, "criterion paper_pinf", "verdict") == "DIVERGED");
        CHECK(summary_text(report, "criterion paper_pinf", "final_value") == "DIVERGED");
        CHECK(summary_value(report, "blowup_indicator", "samples") == 2);
        CHECK(summary_value(report, "blowup_indicator", "sup") == 3.0);
        CHECK(summary_text(report, "blowup_indicator", "verdict") == "DIVERGED");
        fs::remove_all(dir);
    }

    SECTION("criterion column missing from the CSV") {
        const auto dir = oracle::scratch_dir("lab_missing_col");
        fs::create_directories(dir);
        io::write_text(dir / lab::files::manifest, "[monitors]\ncriterion = serrin 4\n");
        io::write_text(dir / lab::files::diagnostics, "t,energy\n0.0,1.0\n");
        const auto r = capture([&](auto& o, auto& e) { return lab::cmd_report(dir, false, o, e); });
        CHECK(r.code == lab::InputError);
        fs::remove_all(dir);
    }
}

TEST_CASE("parse_list", "[lab]") {
    CHECK(lab::parse_list("2, 4,inf") == std::vector<double>{2.0, 4.0, infinity});
    CHECK(lab::parse_list("-1,0.5") == std::vector<double>{-1.0, 0.5});
    CHECK_THROWS_AS(lab::parse_list(""), InvalidConfig);
    CHECK_THROWS_AS(lab::parse_list("2,x"), InvalidConfig);
}
