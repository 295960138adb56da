// Command line front end. All numerics live in the headers; this file only
// wires argument parsing, output placement, and the exit-code contract:
//   0 success, 1 verification failure, 2 configuration error,
//   3 domain error, 4 resource exhaustion.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "shapesum/cli.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw shapesum::config_error("cannot open output file: " + out_path);
    }
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice summation over dilated convex shapes"};
    app.require_subcommand(1);

    // eval ------------------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "evaluate a single quantity");
    shapesum::cli::EvalOptions eopt;
    double eval_tol = 0.0;
    std::string eval_out;
    eval->add_option("target", eopt.target, "g2 | residual | wp")->required();
    eval->add_option("--tau", eopt.tau_arg, "modular parameter, a+bi")->required();
    eval->add_option("--shape", eopt.shape_arg,
                     "disk | diamond | rect:c=<float> | file:<path>");
    eval->add_option("--z", eopt.z_arg, "evaluation point for wp, a+bi");
    eval->add_option("--method", eopt.method,
                     "auto | reference | abs-series | closed | integral | "
                     "lattice | direct");
    auto* tol_opt = eval->add_option("--tol", eval_tol, "series tolerance");
    eval->add_option("--schedule", eopt.schedule,
                     "comma separated dilation schedule, e.g. 250,500,1000,2000")
        ->delimiter(',');
    bool no_extrapolate = false;
    eval->add_flag("--no-extrapolate", no_extrapolate,
                   "report the last partial sum instead of extrapolating");
    eval->add_option("--radius", eopt.radius,
                     "truncation radius for the direct wp method");
    eval->add_option("--out", eval_out, "write the report here instead of stdout");

    // sweep -----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "tabulate the residual over a tau grid");
    shapesum::cli::SweepOptions sopt;
    std::string sweep_out;
    sweep->add_option("--shape", sopt.shape_arg,
                      "disk | diamond | rect:c=<float> | file:<path>")
        ->required();
    sweep->add_option("--method", sopt.method, "auto | closed | integral | lattice");
    sweep->add_option("--re-min", sopt.re_min, "low end of Re(tau)");
    sweep->add_option("--re-max", sopt.re_max, "high end of Re(tau)");
    sweep->add_option("--re-steps", sopt.re_steps, "grid points along Re(tau)");
    sweep->add_option("--im-min", sopt.im_min, "low end of Im(tau)");
    sweep->add_option("--im-max", sopt.im_max, "high end of Im(tau)");
    sweep->add_option("--im-steps", sopt.im_steps, "grid points along Im(tau)");
    sweep->add_option("--out", sweep_out, "write the CSV here instead of stdout");

    // verify ----------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the consistency checks");
    shapesum::cli::VerifyOptions vopt;
    verify->add_flag("--quick", vopt.quick, "light workloads only");
    verify->add_flag("--json", vopt.as_json, "machine readable report");

    // shapes ----------------------------------------------------------------
    auto* shapes = app.add_subcommand("shapes", "list or describe shapes");
    std::string shapes_arg;
    shapes->add_option("--shape", shapes_arg, "shape to describe");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eval->parsed()) {
            if (tol_opt->count() > 0) eopt.tol = eval_tol;
            eopt.extrapolate = !no_extrapolate;
            emit(shapesum::cli::run_eval(eopt).dump(2) + "\n", eval_out);
            return 0;
        }
        if (sweep->parsed()) {
            emit(shapesum::cli::run_sweep(sopt), sweep_out);
            return 0;
        }
        if (verify->parsed()) {
            const auto out = shapesum::cli::run_verify(vopt);
            std::cout << out.text;
            return out.exit_code;
        }
        if (shapes->parsed()) {
            std::cout << shapesum::cli::run_shapes(shapes_arg);
            return 0;
        }
    } catch (const shapesum::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const shapesum::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const shapesum::resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
