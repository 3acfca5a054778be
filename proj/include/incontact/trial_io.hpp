#ifndef INCONTACT_TRIAL_IO_HPP
#define INCONTACT_TRIAL_IO_HPP

// Trial-log file format (version 1) and the object-catalog / thresholds text
// formats. Trial logs are line-delimited UTF-8 key=value records with LF
// endings; numbers are written with round-trip-exact formatting, so
// read_trial(write_trial(t)) reproduces t field for field.

#include <filesystem>
#include <string>
#include <vector>

#include "incontact/classifier.hpp"
#include "incontact/simulator.hpp"

namespace incontact {

inline constexpr const char* kTrialLogVersion = "1";

void write_trial(const std::filesystem::path& path, const TrialRecord& trial);
TrialRecord read_trial(const std::filesystem::path& path);

// Round-trip-exact decimal text for doubles (shortest representation).
std::string format_double(double v);

std::vector<ObjectSpec> read_catalog(const std::filesystem::path& path);
void write_catalog(const std::filesystem::path& path, const std::vector<ObjectSpec>& objects);

Thresholds read_thresholds(const std::filesystem::path& path);

} // namespace incontact

#endif
