#pragma once

#include <cstdint>
#include <string>

// Mode dispatch behind the command-line binary. Each mode reads one config
// file, computes everything in memory, then writes the primary output plus a
// <output>.manifest.json sidecar with the resolved configuration. Errors
// surface as the qosc exception types; the binary maps them to exit codes.

namespace qosc::run {

struct RunRequest {
    std::string mode;
    std::string config_path;
    std::string output_path;
    std::string format = "csv";  // csv | json, tabular modes only
    std::uint64_t seed = 0;
    bool seed_set = false;       // seed flag given on the command line
};

// Modes: kk-phase, loop-spectrum, sr-spectrum, linewidth, sweep,
// oracle-check, fig2.
void run(const RunRequest& req);

// Worker cap for sweep execution: QOSC_THREADS when set, else the OpenMP
// default (1 without OpenMP).
int thread_cap();

}  // namespace qosc::run
