#ifndef REFSCAT_DATASET_IO_HPP
#define REFSCAT_DATASET_IO_HPP

#include <string>

#include "refscat/phaseless.hpp"

namespace refscat {

// Full-precision scientific formatting (17 significant digits, lossless
// double round trip).
std::string fmt17(double v);

// Write text to path atomically (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// Dataset directory layout: dataset.json + a.csv + b.csv + c.csv.
void write_dataset(const std::string& dir, const PhaselessDataset& d);
PhaselessDataset read_dataset(const std::string& dir);

} // namespace refscat

#endif
