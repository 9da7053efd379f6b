#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "sedgkit/cli.hpp"
#include "sedgkit/integrators.hpp"
#include "sedgkit/wiener.hpp"

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"sedgkit"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out;
    std::ostringstream err;
    const int code = sedgkit::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

std::vector<double> fields(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) {
        out.push_back(std::stod(cell));
    }
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int shell_exit(const std::string& cmd) {
    const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("simulate writes one row per grid point") {
    const Result r = run_cli({"simulate", "--model", "wind_poisson", "--scheme", "sedg_poisson", "--h",
                              "0.0625", "--t-end", "20", "--seed", "1"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    REQUIRE(ls.size() == 322);
    CHECK(ls[0] == "t,x1,x2");
    const auto first = fields(ls[1]);
    CHECK(first == std::vector<double>{0.0, 0.1, 1.0});
    CHECK(fields(ls.back())[0] == 20.0);
}

TEST_CASE("output is byte-identical across runs") {
    const auto args = {"simulate", "--model", "damped_oscillator", "--scheme", "sedg_langevin", "--h",
                       "0.03125", "--t-end", "2", "--seed", "9"};
    CHECK(run_cli(args).out == run_cli(args).out);
}

TEST_CASE("golden oscillator paths") {
    const std::filesystem::path dir = SEDGKIT_GOLDEN_DIR;
    const Result sedg = run_cli({"simulate", "--model", "oscillator", "--scheme", "sedg_oscillator", "--h",
                                 "0.015625", "--t-end", "1", "--seed", "42"});
    const Result sem = run_cli({"simulate", "--model", "oscillator", "--scheme", "sem", "--h", "0.015625",
                                "--t-end", "1", "--seed", "42"});
    REQUIRE(sedg.code == 0);
    REQUIRE(sem.code == 0);
    CHECK(sedg.out == slurp(dir / "oscillator_sedg.csv"));
    CHECK(sem.out == slurp(dir / "oscillator_sem.csv"));
}

TEST_CASE("golden SEDG path matches the closed-form recursion") {
    const double h = 0.015625;
    const auto grid = sedgkit::generate(42, 0, 1, 6, h);
    const auto ls = lines(slurp(std::filesystem::path(SEDGKIT_GOLDEN_DIR) / "oscillator_sedg.csv"));
    REQUIRE(ls.size() == 66);
    sedgkit::Vec x(2);
    x << 0.0, 0.02;
    for (std::size_t n = 0; n < 64; ++n) {
        x = sedgkit::sedg_oscillator_step(50.0, 2.0, x, h, grid.fine(0, n));
        const auto row = fields(ls[n + 2]);
        CHECK(std::abs(row[1] - x[0]) < 1e-12);
        CHECK(std::abs(row[2] - x[1]) < 1e-12);
    }
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli({"simulate", "--model", "wind_poisson", "--scheme", "nope", "--h", "0.1", "--t-end", "1"})
              .code == 2);
    CHECK(run_cli({"simulate", "--model", "wind_poisson", "--scheme", "sedg_poisson", "--h", "0", "--t-end",
                   "1"})
              .code == 2);
    CHECK(run_cli({"simulate", "--model", "oscillator", "--scheme", "sedg_poisson", "--h", "0.1", "--t-end",
                   "1"})
              .code == 2);
    CHECK(run_cli({"convergence", "--h-list", "0.1,abc"}).code == 2);
    CHECK(run_cli({"convergence", "--h-list", "0.125", "--paths", "0"}).code == 2);
    CHECK(run_cli({"sweep", "--components", "x7"}).code == 2);
    CHECK(run_cli({"sweep", "--omegas", ""}).code == 2);
    CHECK(run_cli({"structure", "--mode", "volume"}).code == 2);
    CHECK(run_cli({"simulate", "--h", "0.1"}).code == 2);
    CHECK(run_cli({"frobnicate"}).code == 2);
    const Result bad = run_cli({"simulate", "--model", "pendulum", "--h", "0.1", "--t-end", "1"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
    CHECK(bad.out.empty());
}

TEST_CASE("fixed-point failure exits with 3") {
    const Result r = run_cli({"simulate", "--model", "wind_poisson", "--scheme", "sedg_poisson", "--params",
                              "lambda=1,sigma=0.3", "--x0", "1e6,1e6", "--h", "0.5", "--t-end", "1"});
    CHECK(r.code == 3);
}

TEST_CASE("config file supplies defaults and flags override it") {
    const auto path = std::filesystem::temp_directory_path() / "sedgkit_cli_config.json";
    {
        std::ofstream f(path);
        f << R"({"model": "damped_oscillator", "scheme": "sedg_langevin", "params": {"nu": 2},
                 "h": 0.25, "t_end": 1, "seed": 4})";
    }
    const std::string cfg = path.string();
    const Result from_file = run_cli({"simulate", "--config", cfg.c_str()});
    const Result explicit_flags = run_cli({"simulate", "--model", "damped_oscillator", "--scheme",
                                           "sedg_langevin", "--params", "nu=2", "--h", "0.25", "--t-end",
                                           "1", "--seed", "4"});
    REQUIRE(from_file.code == 0);
    CHECK(from_file.out == explicit_flags.out);
    CHECK(lines(from_file.out).size() == 6);
    const Result overridden = run_cli({"simulate", "--config", cfg.c_str(), "--h", "0.125"});
    REQUIRE(overridden.code == 0);
    CHECK(lines(overridden.out).size() == 10);
    std::filesystem::remove(path);
}

TEST_CASE("report headers") {
    const Result conv = run_cli({"convergence", "--model", "damped_oscillator", "--scheme", "sedg_langevin",
                                 "--h-list", "0.125,0.0625", "--t-end", "0.5", "--paths", "100",
                                 "--refinement", "32"});
    REQUIRE(conv.code == 0);
    const auto cl = lines(conv.out);
    CHECK(cl[0] == "h,rms,stderr");
    CHECK(cl.size() == 4);
    CHECK(cl[3].rfind("# slope=", 0) == 0);

    const Result energy = run_cli({"structure", "--mode", "energy", "--t-end", "1"});
    REQUIRE(energy.code == 0);
    CHECK(lines(energy.out)[0] == "t,energy,drift");
    CHECK(lines(energy.out).size() == 18);

    const Result growth = run_cli({"structure", "--mode", "growth", "--t-end", "0.25", "--paths", "50"});
    REQUIRE(growth.code == 0);
    CHECK(lines(growth.out)[0] == "t,mean_H1,stderr");

    const Result tri = run_cli({"structure", "--mode", "triangle", "--t-end", "0.5"});
    REQUIRE(tri.code == 0);
    const auto tl = lines(tri.out);
    CHECK(tl[0] == "t,area,norm_area");
    CHECK(fields(tl[1]) == std::vector<double>{0.0, 1.0, 1.0});

    const Result sweep = run_cli({"sweep", "--omegas", "10,20", "--paths", "100", "--refinement", "32",
                                  "--components", "x1"});
    REQUIRE(sweep.code == 0);
    const auto sl = lines(sweep.out);
    CHECK(sl[0] == "omega,scheme,component,rms");
    CHECK(sl.size() == 1 + 4 + 2);
    CHECK(sl[5].rfind("# slope sedg x1=", 0) == 0);
}

TEST_CASE("out flag writes the report to a file") {
    const auto path = std::filesystem::temp_directory_path() / "sedgkit_cli_out.csv";
    const std::string p = path.string();
    const Result r = run_cli({"simulate", "--model", "oscillator", "--scheme", "sem", "--h", "0.5", "--t-end",
                              "1", "--out", p.c_str()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(lines(slurp(path)).size() == 4);
    std::filesystem::remove(path);
}

TEST_CASE("installed binary exit codes") {
    const std::string tool = SEDGKIT_TOOL_PATH;
    CHECK(shell_exit(tool + " simulate --model wind_poisson --scheme nope --h 0.1 --t-end 1") == 2);
    CHECK(shell_exit(tool + " simulate --model wind_poisson --scheme sedg_poisson --h 0 --t-end 1") == 2);
    CHECK(shell_exit(tool + " simulate --model wind_poisson --scheme sedg_poisson --h 0.5 --t-end 1") == 0);
    CHECK(shell_exit(tool + " --help") == 0);
}

TEST_CASE("documented invocations") {
    const Result sim = run_cli({"simulate", "--model", "wind_poisson", "--scheme", "sedg_poisson", "--h",
                                "0.03125", "--t-end", "10", "--seed", "7", "--x0", "0.1,1.0", "--params",
                                "sigma=0.3,lambda=1"});
    REQUIRE(sim.code == 0);
    CHECK(lines(sim.out).size() == 322);

    const Result energy = run_cli({"structure", "--mode", "energy", "--model", "wind_poisson", "--scheme",
                                   "sedg_poisson", "--h", "0.0625", "--t-end", "50", "--seed", "3"});
    REQUIRE(energy.code == 0);
    const auto el = lines(energy.out);
    REQUIRE(el.size() == 802);
    double worst = 0.0;
    for (std::size_t i = 1; i < el.size(); ++i) {
        worst = std::max(worst, std::abs(fields(el[i])[2]));
    }
    CHECK(worst <= 1e-11);

    const Result tri = run_cli({"structure", "--mode", "triangle", "--params", "nu=1"});
    REQUIRE(tri.code == 0);
    const auto tl = lines(tri.out);
    REQUIRE(tl.size() == 162);
    for (std::size_t i = 1; i < tl.size(); ++i) {
        CHECK(std::abs(fields(tl[i])[2] - 1.0) < 0.01);
    }

    const Result growth = run_cli({"structure", "--mode", "growth", "--scheme", "sem", "--params", "omega=50"});
    REQUIRE(growth.code == 0);
    const auto last = fields(lines(growth.out).back());
    CHECK(last[0] == 5.0);
    CHECK(std::abs(last[1] - 10.5) > 3.0 * last[2]);
}
