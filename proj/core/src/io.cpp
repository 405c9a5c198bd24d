#include "sfpca/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace sfpca {

namespace {

using json = nlohmann::json;

constexpr std::uint32_t kContainerVersion = 1;
constexpr std::uint32_t kModelVersion = 1;

void put_u32(std::string* buf, std::uint32_t v) {
  buf->append(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_u64(std::string* buf, std::uint64_t v) {
  buf->append(reinterpret_cast<const char*>(&v), sizeof v);
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& path)
      : bytes_(bytes), path_(path) {}

  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }

  std::string chunk(std::size_t len) {
    need(len);
    std::string s = bytes_.substr(pos_, len);
    pos_ += len;
    return s;
  }

  void raw(void* dest, std::size_t len) {
    need(len);
    std::memcpy(dest, bytes_.data() + pos_, len);
    pos_ += len;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof v);
    pos_ += sizeof v;
    return v;
  }

  void need(std::size_t len) {
    if (pos_ + len > bytes_.size())
      throw DataError(path_ + ": truncated at offset " + std::to_string(pos_));
  }

  const std::string& bytes_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in.good() && !in.eof()) throw IoError("read failed on " + path);
  return std::move(ss).str();
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out.good()) {
      std::remove(tmp.c_str());
      throw IoError("write failed on " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw IoError("cannot rename " + tmp + " to " + path);
  }
}

void encode_entry(std::string* buf, const TensorEntry& e) {
  put_u32(buf, static_cast<std::uint32_t>(e.name.size()));
  buf->append(e.name);
  put_u32(buf, e.integral ? 1u : 0u);
  put_u32(buf, static_cast<std::uint32_t>(e.dims.size()));
  for (auto d : e.dims) put_u64(buf, d);
  const std::uint64_t count = e.count();
  if (e.integral) {
    if (e.i64.size() != count) throw InvalidArgument("container: dim/payload mismatch");
    buf->append(reinterpret_cast<const char*>(e.i64.data()), count * sizeof(std::int64_t));
  } else {
    if (e.f64.size() != count) throw InvalidArgument("container: dim/payload mismatch");
    buf->append(reinterpret_cast<const char*>(e.f64.data()), count * sizeof(double));
  }
}

TensorEntry decode_entry(Reader* r, const std::string& path) {
  TensorEntry e;
  const std::uint32_t name_len = r->u32();
  if (name_len > 4096) throw DataError(path + ": implausible entry name length");
  e.name = r->chunk(name_len);
  const std::uint32_t dtype = r->u32();
  if (dtype > 1) throw DataError(path + ": unknown dtype " + std::to_string(dtype));
  e.integral = dtype == 1;
  const std::uint32_t ndim = r->u32();
  if (ndim > 8) throw DataError(path + ": implausible rank " + std::to_string(ndim));
  e.dims.resize(ndim);
  for (auto& d : e.dims) d = r->u64();
  const std::uint64_t count = e.count();
  if (e.integral) {
    e.i64.resize(count);
    r->raw(e.i64.data(), count * sizeof(std::int64_t));
  } else {
    e.f64.resize(count);
    r->raw(e.f64.data(), count * sizeof(double));
  }
  return e;
}

const TensorEntry& find_entry(const std::vector<TensorEntry>& entries,
                              const std::string& name, const std::string& path) {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw DataError(path + ": missing entry '" + name + "'");
}

const TensorEntry* find_entry_opt(const std::vector<TensorEntry>& entries,
                                  const std::string& name) {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

Tensor3 to_tensor3(const TensorEntry& e, const std::string& path) {
  if (e.dims.size() != 3 || e.integral)
    throw DataError(path + ": entry '" + e.name + "' is not a rank-3 f64 tensor");
  Tensor3 t(e.dims[0], e.dims[1], e.dims[2]);
  std::memcpy(t.data(), e.f64.data(), e.f64.size() * sizeof(double));
  return t;
}

TensorEntry from_tensor3(const std::string& name, const Tensor3& t) {
  TensorEntry e;
  e.name = name;
  e.dims = {t.dim0(), t.dim1(), t.dim2()};
  e.f64.assign(t.data(), t.data() + t.size());
  return e;
}

TensorEntry from_matrix(const std::string& name, const Matrix& m) {
  TensorEntry e;
  e.name = name;
  e.dims = {static_cast<std::uint64_t>(m.rows()), static_cast<std::uint64_t>(m.cols())};
  e.f64.resize(static_cast<std::size_t>(m.size()));
  // stored row-major
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      e.f64[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return e;
}

Matrix to_matrix(const TensorEntry& e, const std::string& path) {
  if (e.dims.size() != 2 || e.integral)
    throw DataError(path + ": entry '" + e.name + "' is not a rank-2 f64 matrix");
  Matrix m(static_cast<Eigen::Index>(e.dims[0]), static_cast<Eigen::Index>(e.dims[1]));
  for (std::uint64_t r = 0; r < e.dims[0]; ++r)
    for (std::uint64_t c = 0; c < e.dims[1]; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          e.f64[r * e.dims[1] + c];
  return m;
}

TensorEntry from_vector(const std::string& name, const Vector& v) {
  TensorEntry e;
  e.name = name;
  e.dims = {static_cast<std::uint64_t>(v.size())};
  e.f64.assign(v.data(), v.data() + v.size());
  return e;
}

Vector to_vector(const TensorEntry& e, const std::string& path) {
  if (e.dims.size() != 1 || e.integral)
    throw DataError(path + ": entry '" + e.name + "' is not a rank-1 f64 vector");
  Vector v(static_cast<Eigen::Index>(e.dims[0]));
  std::memcpy(v.data(), e.f64.data(), e.f64.size() * sizeof(double));
  return v;
}

}  // namespace

void write_container(const std::string& path, const std::vector<TensorEntry>& entries) {
  std::string buf;
  buf.append("SFPC", 4);
  put_u32(&buf, kContainerVersion);
  put_u32(&buf, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) encode_entry(&buf, e);
  write_file_atomic(path, buf);
}

std::vector<TensorEntry> read_container(const std::string& path) {
  const std::string bytes = read_file(path);
  Reader r(bytes, path);
  if (r.chunk(4) != "SFPC") throw DataError(path + ": not a tensor container (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kContainerVersion)
    throw DataError(path + ": unsupported container version " + std::to_string(version));
  const std::uint32_t n = r.u32();
  std::vector<TensorEntry> entries;
  entries.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) entries.push_back(decode_entry(&r, path));
  if (!r.done()) throw DataError(path + ": trailing bytes after last entry");
  return entries;
}

void save_dataset(const std::string& path, const FunctionalDataset& data) {
  data.validate();
  std::vector<TensorEntry> entries;
  entries.push_back(from_tensor3("y", data.y));
  TensorEntry g;
  g.name = "grid";
  g.dims = {data.grid.size()};
  g.f64 = data.grid.points();
  entries.push_back(std::move(g));
  if (data.labels) {
    TensorEntry lab;
    lab.name = "labels";
    lab.integral = true;
    lab.dims = {data.labels->size()};
    lab.i64.assign(data.labels->begin(), data.labels->end());
    entries.push_back(std::move(lab));
  }
  write_container(path, entries);
}

FunctionalDataset load_dataset(const std::string& path) {
  const auto entries = read_container(path);
  FunctionalDataset data;
  data.y = to_tensor3(find_entry(entries, "y", path), path);
  const TensorEntry& g = find_entry(entries, "grid", path);
  if (g.dims.size() != 1 || g.integral) throw DataError(path + ": malformed grid entry");
  data.grid = Grid(g.f64);
  if (const TensorEntry* lab = find_entry_opt(entries, "labels")) {
    if (lab->dims.size() != 1 || !lab->integral)
      throw DataError(path + ": malformed labels entry");
    data.labels = std::vector<int>(lab->i64.begin(), lab->i64.end());
  }
  data.validate();
  return data;
}

void save_truth(const std::string& path, const GroundTruth& truth) {
  std::vector<TensorEntry> entries;
  entries.push_back(from_tensor3("x", truth.x));
  entries.push_back(from_tensor3("eigfuns", truth.eigfuns));
  entries.push_back(from_vector("eigvals", truth.eigvals));
  TensorEntry g;
  g.name = "grid";
  g.dims = {truth.grid.size()};
  g.f64 = truth.grid.points();
  entries.push_back(std::move(g));
  write_container(path, entries);
}

GroundTruth load_truth(const std::string& path) {
  const auto entries = read_container(path);
  GroundTruth truth;
  truth.x = to_tensor3(find_entry(entries, "x", path), path);
  truth.eigfuns = to_tensor3(find_entry(entries, "eigfuns", path), path);
  truth.eigvals = to_vector(find_entry(entries, "eigvals", path), path);
  const TensorEntry& g = find_entry(entries, "grid", path);
  if (g.dims.size() != 1 || g.integral) throw DataError(path + ": malformed grid entry");
  truth.grid = Grid(g.f64);
  return truth;
}

void save_model(const std::string& path, const SfpcaModel& model) {
  json meta;
  meta["format"] = "sfpca-model";
  meta["rank"] = model.rank();
  meta["empty_selection"] = model.empty_selection;
  meta["threshold_value"] = model.selection.threshold_value;
  meta["retained_processes"] = model.selection.retained_processes;
  json pairs = json::array();
  for (const auto& [j, l] : model.selection.pairs) pairs.push_back({j, l});
  meta["pairs"] = std::move(pairs);  // 0-based (process, basis) indices
  meta["counts"] = model.selection.counts;
  meta["degenerate"] = model.degenerate;
  meta["basis"]["kind"] =
      model.basis.kind() == BasisKind::kFourier ? "fourier" : "bspline";
  meta["basis"]["size"] = model.basis.size();
  meta["basis"]["degree"] = model.basis.degree();
  const std::string meta_str = meta.dump();

  std::string blocks;
  std::vector<TensorEntry> entries;
  TensorEntry g;
  g.name = "grid";
  g.dims = {model.basis.grid().size()};
  g.f64 = model.basis.grid().points();
  entries.push_back(std::move(g));
  entries.push_back(from_matrix("means", model.means));
  entries.push_back(from_vector("eigvals", model.eigvals));
  entries.push_back(from_matrix("eigvecs", model.eigvecs));
  entries.push_back(from_vector("fve", model.fve));
  put_u32(&blocks, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) encode_entry(&blocks, e);

  std::string buf;
  buf.append("SFPM", 4);
  put_u32(&buf, kModelVersion);
  put_u64(&buf, meta_str.size());
  buf.append(meta_str);
  buf.append(blocks);
  write_file_atomic(path, buf);
}

SfpcaModel load_model(const std::string& path) {
  const std::string bytes = read_file(path);
  Reader r(bytes, path);
  if (r.chunk(4) != "SFPM") throw DataError(path + ": not a model file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kModelVersion)
    throw DataError(path + ": unsupported model version " + std::to_string(version));
  const std::uint64_t json_len = r.u64();
  json meta;
  try {
    meta = json::parse(r.chunk(json_len));
  } catch (const json::parse_error& e) {
    throw DataError(path + ": model metadata is not valid JSON: " + e.what());
  }

  const std::uint32_t n_blocks = r.u32();
  std::vector<TensorEntry> entries;
  for (std::uint32_t i = 0; i < n_blocks; ++i) entries.push_back(decode_entry(&r, path));
  if (!r.done()) throw DataError(path + ": trailing bytes after last block");

  SfpcaModel model;
  try {
    model.empty_selection = meta.at("empty_selection").get<bool>();
    model.selection.threshold_value = meta.at("threshold_value").get<double>();
    model.selection.retained_processes = meta.at("retained_processes").get<std::size_t>();
    for (const auto& pr : meta.at("pairs"))
      model.selection.pairs.emplace_back(pr.at(0).get<std::size_t>(),
                                         pr.at(1).get<std::size_t>());
    model.selection.counts = meta.at("counts").get<std::vector<std::size_t>>();
    model.degenerate = meta.at("degenerate").get<std::vector<bool>>();
  } catch (const json::exception& e) {
    throw DataError(path + ": model metadata incomplete: " + e.what());
  }

  const TensorEntry& g = find_entry(entries, "grid", path);
  if (g.dims.size() != 1 || g.integral) throw DataError(path + ": malformed grid entry");
  const Grid grid(g.f64);
  const std::string kind = meta.at("basis").at("kind").get<std::string>();
  const std::size_t size = meta.at("basis").at("size").get<std::size_t>();
  if (kind == "fourier") {
    model.basis = make_fourier(size, grid);
  } else if (kind == "bspline") {
    model.basis =
        make_orthonormal_bspline(size, meta.at("basis").at("degree").get<std::size_t>(), grid);
  } else {
    throw DataError(path + ": unknown basis kind '" + kind + "'");
  }

  model.means = to_matrix(find_entry(entries, "means", path), path);
  model.eigvals = to_vector(find_entry(entries, "eigvals", path), path);
  model.eigvecs = to_matrix(find_entry(entries, "eigvecs", path), path);
  model.fve = to_vector(find_entry(entries, "fve", path), path);

  if (model.eigvecs.rows() != static_cast<Eigen::Index>(model.selection.pairs.size()) ||
      model.eigvecs.cols() != model.eigvals.size())
    throw DataError(path + ": model block shapes are inconsistent");
  return model;
}

FunctionalDataset import_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  struct Row {
    long subject, process;
    double time, value;
    long label;
    bool has_label;
  };
  std::vector<Row> rows;
  std::string line;
  std::size_t lineno = 0;
  bool saw_label = false, saw_nolabel = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4 && fields.size() != 5)
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected 4 or 5 comma-separated fields");
    Row row{};
    try {
      std::size_t used = 0;
      row.subject = std::stol(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument(fields[0]);
      row.process = std::stol(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
      row.time = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument(fields[2]);
      row.value = std::stod(fields[3], &used);
      if (used != fields[3].size()) throw std::invalid_argument(fields[3]);
      if (fields.size() == 5) {
        row.label = std::stol(fields[4], &used);
        if (used != fields[4].size()) throw std::invalid_argument(fields[4]);
        row.has_label = true;
      }
    } catch (const std::exception&) {
      if (lineno == 1) continue;  // header line
      throw DataError(path + ":" + std::to_string(lineno) + ": cannot parse numeric field");
    }
    (row.has_label ? saw_label : saw_nolabel) = true;
    rows.push_back(row);
  }
  if (rows.empty()) throw DataError(path + ": no data rows");
  if (saw_label && saw_nolabel)
    throw DataError(path + ": label column present on some rows but not others");

  std::vector<long> subjects, processes;
  std::vector<double> times;
  for (const Row& row : rows) {
    subjects.push_back(row.subject);
    processes.push_back(row.process);
    times.push_back(row.time);
  }
  auto uniq = [](auto& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(subjects);
  uniq(processes);
  uniq(times);

  std::map<long, std::size_t> smap, pmap;
  std::map<double, std::size_t> tmap;
  for (std::size_t i = 0; i < subjects.size(); ++i) smap[subjects[i]] = i;
  for (std::size_t i = 0; i < processes.size(); ++i) pmap[processes[i]] = i;
  for (std::size_t i = 0; i < times.size(); ++i) tmap[times[i]] = i;

  FunctionalDataset data;
  data.grid = Grid(times);
  data.y = Tensor3(subjects.size(), processes.size(), times.size());
  std::vector<char> seen(subjects.size() * processes.size() * times.size(), 0);
  std::vector<int> labels(subjects.size(), -1);
  for (const Row& row : rows) {
    const std::size_t i = smap[row.subject], j = pmap[row.process], k = tmap[row.time];
    const std::size_t cell = (i * processes.size() + j) * times.size() + k;
    if (seen[cell])
      throw DataError(path + ": duplicate cell for subject " + std::to_string(row.subject) +
                      ", process " + std::to_string(row.process));
    seen[cell] = 1;
    data.y(i, j, k) = row.value;
    if (row.has_label) {
      const int lab = static_cast<int>(row.label);
      if (labels[i] != -1 && labels[i] != lab)
        throw DataError(path + ": subject " + std::to_string(row.subject) +
                        " has conflicting labels");
      labels[i] = lab;
    }
  }
  for (char s : seen)
    if (!s)
      throw DataError(path + ": incomplete grid, every (subject, process, time) cell "
                             "must be present");
  if (saw_label) data.labels = labels;
  data.validate();
  return data;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  write_file_atomic(path, content);
}

}  // namespace sfpca
