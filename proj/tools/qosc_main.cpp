#include <exception>
#include <iostream>

#include "CLI11.hpp"

#include "qosc/errors.hpp"
#include "qosc/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"feedback oscillator noise spectra and linewidths"};
    qosc::run::RunRequest req;

    app.add_option("-m,--mode", req.mode,
                   "kk-phase | loop-spectrum | sr-spectrum | linewidth | sweep | "
                   "oracle-check | fig2")
        ->required();
    app.add_option("-c,--config", req.config_path, "run configuration file")
        ->required();
    app.add_option("-o,--output", req.output_path, "primary output path")
        ->required();
    app.add_option("-f,--format", req.format, "csv | json (tabular modes)");
    CLI::Option* seed_opt =
        app.add_option("-s,--seed", req.seed, "simulation seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? qosc::kExitOk : qosc::kExitConfigParse;
    }
    req.seed_set = seed_opt->count() > 0;

    try {
        qosc::run::run(req);
    } catch (const qosc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return qosc::kExitConfigParse;
    } catch (const qosc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return qosc::kExitValidation;
    } catch (const qosc::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return qosc::kExitIo;
    } catch (const qosc::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return qosc::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qosc::kExitNumerical;
    }
    return qosc::kExitOk;
}
