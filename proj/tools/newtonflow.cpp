#include <CLI11.hpp>

#include <iostream>

#include "newtonflow/cli.hpp"

using namespace nwfl;

int main(int argc, char** argv) {
    CLI::App app{"newtonflow: sine-pseudospectral gradient-flow simulator and verification "
                 "harness for heat flow with a Newtonian nonlocal term"};
    app.require_subcommand(1);

    std::string config_path, resume_path;
    CLI::App* run = app.add_subcommand("run", "integrate a configured scenario to CSV");
    run->add_option("config", config_path, "key = value config file")->required();
    run->add_option("--resume", resume_path, "checkpoint file to continue from");

    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run an oracle suite");
    verify->add_option("suite", suite, "potential|gradient|dissipation|semiflow|lab")->required();

    std::string sweep_config;
    double amp_lo = 0.0, amp_hi = 0.0, tol = 0.05;
    CLI::App* sweep =
        app.add_subcommand("sweep", "bisect the initial amplitude between global and blow-up");
    sweep->add_option("config", sweep_config, "key = value config file")->required();
    sweep->add_option("--amp-lo", amp_lo, "amplitude scale classifying one way")->required();
    sweep->add_option("--amp-hi", amp_hi, "amplitude scale classifying the other way")->required();
    sweep->add_option("--tol", tol, "bracket width tolerance (default 0.05)");

    std::string lab_path;
    CLI::App* lab = app.add_subcommand("lab", "exponent calculus report and ratio ensembles");
    lab->add_option("spec", lab_path, "key = value lab config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    try {
        if (*run) return cmd_run(load_config_file(config_path), resume_path, &std::cout);
        if (*verify) return cmd_verify(suite, std::cout);
        if (*sweep) {
            cmd_sweep(load_config_file(sweep_config), amp_lo, amp_hi, tol, std::cout);
            return exit_ok;
        }
        if (*lab) return cmd_lab(load_lab_config_file(lab_path), std::cout);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    } catch (const numerical_failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_numerical;
    }
    return exit_config;
}
