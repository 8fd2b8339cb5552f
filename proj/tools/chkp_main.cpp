#include "chkp/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral shallow-water lab"};
    app.require_subcommand(1);

    std::string config_path, out_dir, run_dir, out_file;

    auto* cmd_run = app.add_subcommand("run", "execute a configured simulation");
    cmd_run->add_option("--config", config_path, "JSON configuration file")->required();
    cmd_run->add_option("--out", out_dir, "output directory")->required();

    auto* cmd_verify = app.add_subcommand("verify", "recompute the report from persisted data");
    cmd_verify->add_option("--run", run_dir, "run directory")->required();

    auto* cmd_plot = app.add_subcommand("plot", "emit SVG charts for a run");
    cmd_plot->add_option("--run", run_dir, "run directory")->required();
    cmd_plot->add_option("--out", out_file, "output SVG file")->required();

    auto* cmd_presets = app.add_subcommand("presets", "list built-in presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*cmd_run) {
            chkp::RunConfig cfg = chkp::load_config(config_path);
            chkp::StopReason stop = chkp::execute_run(cfg, out_dir);
            std::cout << "stop: " << chkp::to_string(stop.kind) << " at t = " << stop.t_stop
                      << "\nreport: " << out_dir << "/report.json\n";
        } else if (*cmd_verify) {
            std::cout << chkp::build_report(run_dir);
        } else if (*cmd_plot) {
            chkp::write_plots(run_dir, out_file);
            std::cout << "wrote " << out_file << "\n";
        } else if (*cmd_presets) {
            std::cout << chkp::presets_listing();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
