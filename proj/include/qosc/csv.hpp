#pragma once

#include <string>
#include <vector>

// Plain CSV with a single header row, values printed as %.12e, LF line
// endings. Gain profiles on disk are two columns (omega, log_mag); the
// accompanying eta lives in the run configuration, not in the file.

namespace qosc::csv {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(const Table& t, const std::string& path);

struct ProfileData {
    std::vector<double> omega;
    std::vector<double> log_mag;
};

ProfileData load_profile(const std::string& path);
void save_profile(const ProfileData& d, const std::string& path);

}  // namespace qosc::csv
