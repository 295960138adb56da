#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "shapesum/cli.hpp"
#include "shapesum/residual.hpp"
#include "shapesum/shape_io.hpp"

using namespace shapesum;
using shapesum::cli::parse_complex;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

// Runs a shell command, captures stdout, maps the exit status.
RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) {
        r.out.append(buf, got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string cli_path() {
    if (const char* p = std::getenv("SHAPESUM_CLI_PATH")) return p;
#ifdef SHAPESUM_CLI_PATH
    return SHAPESUM_CLI_PATH;
#else
    FAIL("SHAPESUM_CLI_PATH is neither compiled in nor set");
    return {};
#endif
}

std::string write_profile(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/" + name;
    std::ofstream f(path);
    f << text;
    return path;
}

}  // namespace

TEST_CASE("complex literal grammar") {
    CHECK(parse_complex("2.5") == cplx(2.5, 0.0));
    CHECK(parse_complex("-3") == cplx(-3.0, 0.0));
    CHECK(parse_complex("i") == cplx(0.0, 1.0));
    CHECK(parse_complex("-i") == cplx(0.0, -1.0));
    CHECK(parse_complex("+i") == cplx(0.0, 1.0));
    CHECK(parse_complex("3i") == cplx(0.0, 3.0));
    CHECK(parse_complex("-0.25i") == cplx(0.0, -0.25));
    CHECK(parse_complex("1+2i") == cplx(1.0, 2.0));
    CHECK(parse_complex("1-2i") == cplx(1.0, -2.0));
    CHECK(parse_complex("-0.5+0.8i") == cplx(-0.5, 0.8));
    CHECK(parse_complex("0.3+1.2i") == cplx(0.3, 1.2));
    CHECK(parse_complex("1.5-i") == cplx(1.5, -1.0));
    CHECK(parse_complex("1e-3+2e+4i") == cplx(1e-3, 2e4));
    CHECK(parse_complex("2.5E-3") == cplx(2.5e-3, 0.0));

    CHECK_THROWS_AS(parse_complex(""), config_error);
    CHECK_THROWS_AS(parse_complex("1 + 2i"), config_error);
    CHECK_THROWS_AS(parse_complex("abc"), config_error);
    CHECK_THROWS_AS(parse_complex("1+2j"), config_error);
    CHECK_THROWS_AS(parse_complex("1..5"), config_error);
    CHECK_THROWS_AS(parse_complex("1+e5i"), config_error);
    CHECK_THROWS_AS(parse_complex("1+2i3"), config_error);
    CHECK_THROWS_AS(parse_complex("++i"), config_error);
}

TEST_CASE("text formatting round-trips") {
    SplitMix64 rng(99);
    for (int k = 0; k < 40; ++k) {
        const cplx v(rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 12.0)),
                     rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-12.0, 12.0)));
        CHECK(parse_complex(cli::format_complex(v)) == v);
    }
    CHECK(parse_complex(cli::format_complex(cplx(-0.0, 0.0))) == cplx(-0.0, 0.0));
    CHECK(cli::format_double(0.5) == "0.5");
}

TEST_CASE("eval document structure") {
    cli::EvalOptions opt;
    opt.target = "g2";
    opt.tau_arg = "i";
    const auto doc = cli::run_eval(opt);

    CHECK(doc["command"] == "eval");
    CHECK(doc["target"] == "g2");
    CHECK(doc["method"] == "reference");
    CHECK(doc["inputs"]["method"] == "auto");
    CHECK(doc["inputs"]["tau"]["im"] == 1.0);
    CHECK_FALSE(doc["inputs"].contains("schedule"));
    CHECK(std::abs(doc["value"]["re"].get<double>() - pi) <= 1e-12);
    CHECK(std::abs(doc["value"]["im"].get<double>()) <= 1e-12);
    CHECK(doc["error_estimate"].get<double>() >= 0.0);
    CHECK(doc["wall_time_ms"].get<double>() >= 0.0);
}

TEST_CASE("eval selects methods and reports lattice inputs") {
    cli::EvalOptions opt;
    opt.target = "residual";
    opt.tau_arg = "2i";
    opt.shape_arg = "disk";
    CHECK(cli::run_eval(opt)["method"] == "closed");

    opt.method = "integral";
    const auto integral = cli::run_eval(opt);
    CHECK(integral["method"] == "integral");
    CHECK(std::abs(integral["value"]["re"].get<double>() + 2.0 * pi / 3.0) <=
          1e-8);

    opt.method = "lattice";
    opt.schedule = {50, 100};
    const auto lattice = cli::run_eval(opt);
    CHECK(lattice["method"] == "lattice");
    CHECK(lattice["inputs"]["schedule"] == std::vector<std::int64_t>({50, 100}));
    CHECK(lattice["inputs"]["extrapolate"] == true);

    cli::EvalOptions wp;
    wp.target = "wp";
    wp.tau_arg = "i";
    wp.z_arg = "0.5";
    wp.method = "direct";
    wp.radius = 60;
    const auto direct = cli::run_eval(wp);
    CHECK(direct["method"] == "abs-series");
    CHECK(direct["inputs"]["radius"] == 60);
    CHECK(direct["inputs"]["z"]["re"] == 0.5);
}

TEST_CASE("eval input validation") {
    cli::EvalOptions opt;
    opt.target = "g2";
    CHECK_THROWS_AS(cli::run_eval(opt), config_error);  // no tau

    opt.tau_arg = "i";
    opt.method = "closed";
    CHECK_THROWS_AS(cli::run_eval(opt), config_error);  // not a g2 method

    cli::EvalOptions wp;
    wp.target = "wp";
    wp.tau_arg = "i";
    CHECK_THROWS_AS(cli::run_eval(wp), config_error);  // no z

    wp.z_arg = "0.5";
    wp.method = "lattice";
    CHECK_THROWS_AS(cli::run_eval(wp), config_error);  // no shape

    cli::EvalOptions bad;
    bad.target = "zeta";
    bad.tau_arg = "i";
    CHECK_THROWS_AS(cli::run_eval(bad), config_error);
}

TEST_CASE("sweep emits a parseable grid") {
    cli::SweepOptions opt;
    opt.shape_arg = "disk";
    opt.method = "closed";
    opt.re_min = 0.0;
    opt.re_max = 0.0;
    opt.re_steps = 1;
    opt.im_min = 1.0;
    opt.im_max = 2.0;
    opt.im_steps = 3;
    const std::string csv = cli::run_sweep(opt);

    std::istringstream is(csv);
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(line == "re_tau,im_tau,re_E,im_E,error_estimate");

    int rows = 0;
    const double ims[] = {1.0, 1.5, 2.0};
    while (std::getline(is, line)) {
        double re, im, er, ei, est;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &re, &im, &er,
                            &ei, &est) == 5);
        CHECK(re == 0.0);
        CHECK(im == ims[rows]);
        const auto expect =
            residual_closed_form(ShapeSpec::disk(), TauPoint(cplx(re, im)));
        CHECK(er == expect.value.real());
        CHECK(ei == expect.value.imag());
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("sweep grid validation") {
    cli::SweepOptions opt;
    opt.shape_arg = "disk";
    opt.im_steps = 0;
    CHECK_THROWS_AS(cli::run_sweep(opt), config_error);

    opt.im_steps = 2;
    opt.im_min = 2.0;
    opt.im_max = 1.0;
    CHECK_THROWS_AS(cli::run_sweep(opt), config_error);

    opt.im_min = 0.0;
    opt.im_max = 1.0;
    CHECK_THROWS_AS(cli::run_sweep(opt), config_error);  // under the tau guard

    opt.im_min = 1.0;
    opt.im_max = 2.0;
    opt.method = "secret";
    CHECK_THROWS_AS(cli::run_sweep(opt), config_error);

    cli::SweepOptions none;
    CHECK_THROWS_AS(cli::run_sweep(none), config_error);  // no shape
}

TEST_CASE("shape listings") {
    const auto listing = cli::run_shapes("");
    CHECK(listing.find("disk") != std::string::npos);
    CHECK(listing.find("rect:c=") != std::string::npos);
    CHECK(listing.find("file:") != std::string::npos);

    const auto rect = cli::run_shapes("rect:c=2");
    CHECK(rect.find("support: 2") != std::string::npos);
    CHECK(rect.find("area: 8") != std::string::npos);

    CHECK_THROWS_AS(cli::run_shapes("sphere"), config_error);
    CHECK_THROWS_AS(cli::run_shapes("rect:c=abc"), config_error);
    CHECK_THROWS_AS(cli::run_shapes("rect:c=-1"), config_error);
}

TEST_CASE("shape files") {
    const auto valid = write_profile("shapesum_valid.json",
                                     "[[0.0, 1.0], [0.5, 0.8], [1.0, 0.0]]");
    const auto shape = load_shape_file(valid);
    CHECK(shape.kind() == ShapeKind::Custom);
    CHECK(shape.grid_x().size() == 3);
    CHECK(std::abs(height(shape, 0.25) - 0.9) <= 1e-15);

    const auto via_arg = parse_shape_arg("file:" + valid);
    CHECK(via_arg.grid_x() == shape.grid_x());

    // Describing a custom profile reports its breakpoint count.
    const auto desc = cli::run_shapes("file:" + valid);
    CHECK(desc.find("breakpoints: 3") != std::string::npos);

    CHECK_THROWS_AS(load_shape_file("/tmp/shapesum_does_not_exist.json"),
                    config_error);
    CHECK_THROWS_AS(
        load_shape_file(write_profile("shapesum_bad1.json", "[[0, 1], [1,")),
        config_error);
    CHECK_THROWS_AS(
        load_shape_file(write_profile("shapesum_bad2.json", "{\"x\": 1}")),
        config_error);
    CHECK_THROWS_AS(
        load_shape_file(write_profile("shapesum_bad3.json", "[[0, 1], [0.5]]")),
        config_error);
    CHECK_THROWS_AS(load_shape_file(write_profile(
                        "shapesum_bad4.json", "[[0, 1], [0.5, 1.2], [1, 0]]")),
                    config_error);
}

TEST_CASE("executable end-to-end") {
    const std::string bin = cli_path();

    const auto ok = run(bin + " eval residual --shape disk --tau i");
    REQUIRE(ok.code == 0);
    const auto doc = nlohmann::json::parse(ok.out);
    CHECK(std::abs(doc["value"]["re"].get<double>() + pi) <= 1e-12);

    CHECK(run(bin + " eval g2 --tau 0.5").code == 3);       // below the guard
    CHECK(run(bin + " eval g2").code == 2);                 // missing tau
    CHECK(run(bin + " eval g2 --tau i --method closed").code == 2);
    CHECK(run(bin + " eval g2 --tau i --tol 1e-20").code == 2);
    CHECK(run(bin + " eval wp --tau i --z 0").code == 3);   // pole
    CHECK(run(bin + " eval nope --tau i").code == 2);
    CHECK(run(bin + " shapes").code == 0);
    CHECK(run(bin + " --help").code == 0);

    const auto sweep = run(bin +
                           " sweep --shape diamond --method closed"
                           " --re-min 0 --re-max 0 --re-steps 1"
                           " --im-min 1 --im-max 1 --im-steps 1");
    REQUIRE(sweep.code == 0);
    CHECK(sweep.out.find("re_tau,im_tau") != std::string::npos);
    CHECK(sweep.out.find("-3.14159") != std::string::npos);
}

TEST_CASE("executable is deterministic across thread budgets") {
    const std::string bin = cli_path();
    const std::string args =
        " eval g2 --tau 0.3+1.2i --method lattice --shape disk"
        " --schedule 50,100";

    const auto a = run("SHAPESUM_THREADS=3 " + bin + args);
    const auto b = run("SHAPESUM_THREADS=1 " + bin + args);
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);

    const auto da = nlohmann::json::parse(a.out);
    const auto db = nlohmann::json::parse(b.out);
    CHECK(da["value"] == db["value"]);
    CHECK(da["error_estimate"] == db["error_estimate"]);
}
