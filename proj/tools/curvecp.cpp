// curvecp <task> --config file.toml [--jobs N] [--cache DIR] [--allow-extrapolation]

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "curvecp/acceptance.hpp"
#include "curvecp/harness.hpp"
#include "curvecp/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Casimir-Polder potentials and particle orientation near curved surfaces"};
    std::string task, config, cache;
    int jobs = curvecp::default_jobs();
    bool extrapolate = false;
    app.add_option("task", task, "epsilon | beta | cp | sphere | stability | validate")->required();
    app.add_option("--config", config, "TOML run configuration")->required();
    app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--cache", cache, "coefficient table cache directory");
    app.add_flag("--allow-extrapolation", extrapolate, "accept curvature ratios beyond the soft limit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        curvecp::RunConfig cfg = curvecp::load_config(config, extrapolate);
        cfg.task = curvecp::task_from_string(task);
        curvecp::RunOptions opt;
        opt.jobs = jobs;
        std::filesystem::path dir = !cache.empty() ? cache : !cfg.cache_dir.empty() ? cfg.cache_dir : "curvecp_cache";
        opt.cache_dir = curvecp::resolve_cache_dir(dir);
        opt.log = &std::cerr;
        const int status = curvecp::run_task(cfg, opt);
        std::cout << task << ": " << (status == 0 ? "ok" : status == 4 ? "acceptance failures" : "numerical failures")
                  << " (config " << cfg.hash << ", output in " << cfg.output_dir.string() << ")\n";
        return status;
    } catch (const curvecp::Error& e) {
        std::cerr << "curvecp " << task << ": " << e.what() << "\n";
        return e.code() == curvecp::Errc::ConfigError ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "curvecp " << task << ": " << e.what() << "\n";
        return 3;
    }
}
