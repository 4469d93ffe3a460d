#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gridcarbon/grid.hpp"
#include "gridcarbon/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kCliPath = GRIDCARBON_CLI_PATH;
const fs::path kFixtureDir = GRIDCARBON_FIXTURE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gridcarbon_cli_" + std::to_string(static_cast<long>(::getpid())) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string shell_quote(const std::string& s) {
    std::string quoted = "'";
    for (char c : s) {
        if (c == '\'') quoted += "'\\''";
        else quoted.push_back(c);
    }
    quoted += "'";
    return quoted;
}

RunResult run_cli(const std::vector<std::string>& args) {
    static int invocation = 0;
    fs::path base = fs::temp_directory_path() /
                    ("gridcarbon_cli_streams_" + std::to_string(static_cast<long>(::getpid())) +
                     "_" + std::to_string(invocation++));
    fs::path out_file = base.string() + ".out";
    fs::path err_file = base.string() + ".err";

    std::string command = shell_quote(kCliPath.string());
    for (const std::string& a : args) command += " " + shell_quote(a);
    command += " > " + shell_quote(out_file.string());
    command += " 2> " + shell_quote(err_file.string());

    int raw = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = gridcarbon::read_file(out_file);
    result.err = gridcarbon::read_file(err_file);
    fs::remove(out_file);
    fs::remove(err_file);
    return result;
}

fs::path write_case(const TempDir& tmp, const gridcarbon::Network& net,
                    const std::string& name) {
    fs::path path = tmp.path / name;
    gridcarbon::write_file(path, gridcarbon::serialize_case(net));
    return path;
}

std::string series_csv(const gridcarbon::Network& net, const std::vector<double>& factors) {
    std::string text = "t";
    for (const auto& l : net.loads) text += ",load:" + std::to_string(l.id);
    text += "\n";
    for (std::size_t t = 0; t < factors.size(); ++t) {
        text += std::to_string(t + 1);
        for (std::size_t i = 0; i < net.loads.size(); ++i) {
            text += "," + std::to_string(factors[t]);
        }
        text += "\n";
    }
    return text;
}

} // namespace

TEST_CASE("help text documents every command and flag") {
    RunResult top = run_cli({"--help"});
    CHECK(top.exit_code == 0);
    for (const char* word : {"metrics", "study", "export-plot", "Exit codes"}) {
        CAPTURE(word);
        CHECK(top.out.find(word) != std::string::npos);
    }

    RunResult metrics = run_cli({"metrics", "--help"});
    CHECK(metrics.exit_code == 0);
    for (const char* flag : {"--case", "--series", "--metric", "--out", "--format", "--jobs"}) {
        CAPTURE(flag);
        CHECK(metrics.out.find(flag) != std::string::npos);
    }

    RunResult study = run_cli({"study", "--help"});
    CHECK(study.exit_code == 0);
    for (const char* flag : {"--case", "--series", "--dc-buses", "--dnom", "--eps",
                             "--horizon", "--shift-metric", "--account-metric", "--out",
                             "--format", "--jobs"}) {
        CAPTURE(flag);
        CHECK(study.out.find(flag) != std::string::npos);
    }

    RunResult plot = run_cli({"export-plot", "--help"});
    CHECK(plot.exit_code == 0);
    CHECK(plot.out.find("--out") != std::string::npos);

    RunResult version = run_cli({"--version"});
    CHECK(version.exit_code == 0);
    CHECK(version.out.find("gridcarbon 1.0.0") != std::string::npos);
}

TEST_CASE("argument errors exit 1") {
    CHECK(run_cli({}).exit_code == 1);                      // missing subcommand
    CHECK(run_cli({"frobnicate"}).exit_code == 1);          // unknown subcommand
    CHECK(run_cli({"metrics"}).exit_code == 1);             // --case is required
    TempDir tmp;
    fs::path case_path = write_case(tmp, fixtures::case3(), "case3.m");
    CHECK(run_cli({"study", "--case", case_path.string()}).exit_code == 1); // no --dc-buses
}

TEST_CASE("metrics subcommand writes artifacts and exits 0") {
    TempDir tmp;
    gridcarbon::Network net = fixtures::mesh6();
    fs::path case_path = write_case(tmp, net, "mesh6.m");
    fs::path series_path = tmp.path / "series.csv";
    gridcarbon::write_file(series_path, series_csv(net, {1.0, 0.9, 1.1, 0.8}));
    fs::path out = tmp.path / "out";

    RunResult r = run_cli({"metrics", "--case", case_path.string(), "--series",
                           series_path.string(), "--out", out.string(), "--jobs", "2"});
    CHECK(r.exit_code == 0);
    CHECK(r.err.empty());
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "intensity_ace.csv"));
    CHECK(fs::exists(out / "intensity_lmce.csv"));
    CHECK(fs::exists(out / "accounting.csv"));

    // Metric selection narrows the artifact set.
    fs::path narrow = tmp.path / "narrow";
    RunResult r2 = run_cli({"metrics", "--case", case_path.string(), "--metric", "lace",
                            "--format", "csv", "--out", narrow.string()});
    CHECK(r2.exit_code == 0);
    CHECK(fs::exists(narrow / "intensity_lace.csv"));
    CHECK_FALSE(fs::exists(narrow / "intensity_ace.csv"));
    CHECK_FALSE(fs::exists(narrow / "report.json"));
}

TEST_CASE("study and export-plot round-trip through the filesystem") {
    TempDir tmp;
    gridcarbon::Network net = fixtures::mesh6();
    fs::path case_path = write_case(tmp, net, "mesh6.m");
    fs::path series_path = tmp.path / "series.csv";
    gridcarbon::write_file(series_path,
                           series_csv(net, {1.0, 0.9, 0.8, 1.1, 0.95, 1.05, 0.85, 1.0}));
    fs::path out = tmp.path / "study";

    RunResult r = run_cli({"study", "--case", case_path.string(), "--series",
                           series_path.string(), "--dc-buses", "2,5", "--dnom", "10",
                           "--eps", "0.25", "--horizon", "4", "--shift-metric", "ace,lace",
                           "--out", out.string(), "--jobs", "2"});
    CHECK(r.exit_code == 0);
    CHECK(r.err.empty());
    for (const char* name : {"study.json", "cross_metric.csv", "shifting_results.csv",
                             "intensity_stats.csv", "network_panels.svg",
                             "histogram_lace.svg"}) {
        CAPTURE(name);
        CHECK(fs::exists(out / name));
    }

    std::string original = gridcarbon::read_file(out / "network_lace.svg");
    fs::remove(out / "network_lace.svg");
    RunResult replot = run_cli({"export-plot", "--out", out.string()});
    CHECK(replot.exit_code == 0);
    CHECK(gridcarbon::read_file(out / "network_lace.svg") == original);

    // export-plot without a study.json is an input error.
    TempDir empty;
    RunResult missing = run_cli({"export-plot", "--out", empty.path.string()});
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("error (io)") != std::string::npos);
}

TEST_CASE("input failures exit 1 with a typed message") {
    RunResult missing = run_cli({"metrics", "--case", "/nonexistent/case.m"});
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("gridcarbon: error (io)") != std::string::npos);

    for (const char* name : {"bad_syntax.m", "ragged_matrix.m", "missing_emissions.m",
                             "dangling_bus.m", "no_ref_bus.m", "nonconvex_cost.m",
                             "negative_reactance.m", "capacity_short.m"}) {
        CAPTURE(name);
        RunResult r = run_cli({"metrics", "--case",
                               (kFixtureDir / "malformed" / name).string()});
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("gridcarbon: error (") != std::string::npos);
    }

    RunResult emissions = run_cli({"metrics", "--case",
                                   (kFixtureDir / "malformed" / "missing_emissions.m").string()});
    CHECK(emissions.err.find("mpc.emissions") != std::string::npos);

    TempDir tmp;
    fs::path good = write_case(tmp, fixtures::case3(), "case3.m");
    RunResult metric = run_cli({"metrics", "--case", good.string(), "--metric", "watts"});
    CHECK(metric.exit_code == 1);
    CHECK(metric.err.find("error (validation)") != std::string::npos);
    RunResult format = run_cli({"metrics", "--case", good.string(), "--format", "pdf"});
    CHECK(format.exit_code == 1);
}

TEST_CASE("solver failures exit 2") {
    TempDir tmp;
    fs::path tie = write_case(tmp, fixtures::infeasible_tie(), "tie.m");
    RunResult r = run_cli({"metrics", "--case", tie.string(), "--out", tmp.path.string()});
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("gridcarbon: error (infeasible)") != std::string::npos);
}
