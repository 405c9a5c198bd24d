#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sfpca/model.hpp"
#include "sfpca/simgen.hpp"

namespace sfpca {

// Self-describing binary tensor container (magic "SFPC"): named n-d arrays of
// f64 or i64, row-major, little-endian. Datasets and ground truth are stored
// in this container; models use a JSON-header variant (magic "SFPM") since
// they mix scalars, index sets, and arrays. All writes are atomic
// (temp file + rename).

struct TensorEntry {
  std::string name;
  std::vector<std::uint64_t> dims;
  std::vector<double> f64;        // used when integral == false
  std::vector<std::int64_t> i64;  // used when integral == true
  bool integral = false;

  std::uint64_t count() const {
    std::uint64_t c = 1;
    for (auto d : dims) c *= d;
    return c;
  }
};

void write_container(const std::string& path, const std::vector<TensorEntry>& entries);
std::vector<TensorEntry> read_container(const std::string& path);

void save_dataset(const std::string& path, const FunctionalDataset& data);
FunctionalDataset load_dataset(const std::string& path);

void save_truth(const std::string& path, const GroundTruth& truth);
GroundTruth load_truth(const std::string& path);

void save_model(const std::string& path, const SfpcaModel& model);
SfpcaModel load_model(const std::string& path);

// Long-format CSV: subject,process,time,value[,label]. Ids may be arbitrary
// integers; the grid is the sorted set of distinct times; every
// (subject, process, time) cell must be present exactly once. An optional
// header line is skipped. Labels, when present, must be constant per subject.
FunctionalDataset import_csv(const std::string& path);

// Wide CSV export of a tensor: one row per (subject, process) with the grid
// as columns; used by the experiment runner for results tables.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace sfpca
