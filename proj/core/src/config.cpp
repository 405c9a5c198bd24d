#include "sfpca/config.hpp"

#include <fstream>
#include <sstream>

#include "sfpca/errors.hpp"

namespace sfpca {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

std::uint64_t to_count(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size() || d < 0) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(d);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a non-negative integer, got '" +
                      v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

template <class T, class F>
std::vector<T> to_list(const std::string& v, const std::string& key, F&& conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty element in list '" + key + "'");
    out.push_back(conv(item, key));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects a list");
  return out;
}

// Pull key from section, erasing it so leftovers can be reported as unknown.
std::optional<std::string> take(RawConfig& raw, const std::string& section,
                                const std::string& key) {
  auto sec = raw.find(section);
  if (sec == raw.end()) return std::nullopt;
  auto it = sec->second.find(key);
  if (it == sec->second.end()) return std::nullopt;
  std::string v = it->second;
  sec->second.erase(it);
  return v;
}

}  // namespace

RawConfig parse_ini_text(const std::string& text, const std::string& where) {
  RawConfig out;
  std::string section;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ":" + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(where + ":" + std::to_string(lineno) + ": empty section name");
      out[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(where + ":" + std::to_string(lineno) + ": empty key");
    if (out[section].count(key))
      throw ConfigError(where + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                        "'");
    out[section][key] = value;
  }
  return out;
}

RawConfig parse_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ini_text(ss.str(), path);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_raw(parse_ini(path), path);
}

ExperimentConfig ExperimentConfig::from_raw(const RawConfig& raw_in, const std::string& where) {
  RawConfig raw = raw_in;
  ExperimentConfig cfg;

  if (auto v = take(raw, "scenario", "type")) {
    if (*v == "lq") cfg.scenario = ScenarioType::kLq;
    else if (*v == "class") cfg.scenario = ScenarioType::kClass;
    else if (*v == "csv") cfg.scenario = ScenarioType::kCsv;
    else throw ConfigError("config: scenario.type must be lq, class, or csv");
  }
  if (auto v = take(raw, "scenario", "path")) cfg.csv_path = *v;
  if (auto v = take(raw, "scenario", "n")) cfg.lq.n = to_count(*v, "n");
  if (auto v = take(raw, "scenario", "p")) cfg.lq.p = to_count(*v, "p");
  if (auto v = take(raw, "scenario", "m")) cfg.lq.m = to_count(*v, "m");
  if (auto v = take(raw, "scenario", "s")) cfg.lq.s = to_count(*v, "s");
  if (auto v = take(raw, "scenario", "q")) cfg.lq.q = to_double(*v, "q");
  if (auto v = take(raw, "scenario", "rho_ar")) cfg.lq.rho_ar = to_double(*v, "rho_ar");
  if (auto v = take(raw, "scenario", "coef_var_scale"))
    cfg.lq.coef_var_scale = to_double(*v, "coef_var_scale");
  if (auto v = take(raw, "scenario", "coef_var_decay"))
    cfg.lq.coef_var_decay = to_double(*v, "coef_var_decay");
  if (auto v = take(raw, "scenario", "noise_sd")) cfg.lq.noise_sd = to_double(*v, "noise_sd");
  if (auto v = take(raw, "scenario", "kappa")) cfg.cls.kappa = to_count(*v, "kappa");
  if (auto v = take(raw, "scenario", "n_train")) cfg.cls.n_train = to_count(*v, "n_train");
  if (auto v = take(raw, "scenario", "n_test")) cfg.cls.n_test = to_count(*v, "n_test");
  if (auto v = take(raw, "scenario", "mean_weights")) {
    const auto w = to_list<double>(*v, "mean_weights", to_double);
    if (w.size() != cfg.cls.mean_weights.size())
      throw ConfigError("config: mean_weights expects " +
                        std::to_string(cfg.cls.mean_weights.size()) + " values");
    std::copy(w.begin(), w.end(), cfg.cls.mean_weights.begin());
  }
  if (auto v = take(raw, "scenario", "mean_from_eigenfunctions"))
    cfg.cls.mean_from_eigenfunctions = to_bool(*v, "mean_from_eigenfunctions");

  if (auto v = take(raw, "fit", "method")) {
    if (*v == "sfpca") cfg.method = Method::kSfpca;
    else if (*v == "mfpca") cfg.method = Method::kMfpca;
    else throw ConfigError("config: fit.method must be sfpca or mfpca");
  }
  if (auto v = take(raw, "fit", "rho")) cfg.rho = to_double(*v, "rho");
  if (auto v = take(raw, "fit", "sn")) cfg.s_n = to_count(*v, "sn");
  if (auto v = take(raw, "fit", "rn")) cfg.r_n = to_count(*v, "rn");
  if (auto v = take(raw, "fit", "alpha0")) cfg.alpha0 = to_double(*v, "alpha0");
  if (auto v = take(raw, "fit", "fve_level")) cfg.fve_level = to_double(*v, "fve_level");
  if (auto v = take(raw, "fit", "basis")) {
    if (*v == "fourier") cfg.basis = BasisKind::kFourier;
    else if (*v == "bspline") cfg.basis = BasisKind::kOrthonormalBSpline;
    else throw ConfigError("config: fit.basis must be fourier or bspline");
  }
  if (auto v = take(raw, "fit", "bspline_degree"))
    cfg.bspline_degree = to_count(*v, "bspline_degree");
  if (auto v = take(raw, "fit", "noise_variance"))
    cfg.noise_variance = to_double(*v, "noise_variance");

  if (auto v = take(raw, "experiment", "reps")) cfg.replications = to_count(*v, "reps");
  if (auto v = take(raw, "experiment", "seed")) cfg.seed = to_count(*v, "seed");
  if (auto v = take(raw, "experiment", "out")) cfg.out_dir = *v;
  if (auto v = take(raw, "experiment", "threads")) cfg.threads = to_count(*v, "threads");

  if (auto v = take(raw, "tune", "rhos")) cfg.tune_rhos = to_list<double>(*v, "rhos", to_double);
  if (auto v = take(raw, "tune", "sns"))
    cfg.tune_sns = to_list<std::size_t>(*v, "sns", to_count);
  if (auto v = take(raw, "tune", "rns"))
    cfg.tune_rns = to_list<std::size_t>(*v, "rns", to_count);
  if (auto v = take(raw, "tune", "folds")) cfg.folds = to_count(*v, "folds");

  // Anything still present was not consumed: unknown section or key.
  for (const auto& [section, keys] : raw) {
    static const char* known[] = {"scenario", "fit", "experiment", "tune"};
    bool known_section = false;
    for (const char* s : known) known_section |= section == s;
    if (!known_section)
      throw ConfigError(where + ": unknown section [" + section + "]");
    if (!keys.empty())
      throw ConfigError(where + ": unknown key '" + keys.begin()->first + "' in [" +
                        section + "]");
  }

  // Keep the class scenario's base in sync with the lq fields.
  const double scale_default_lq = 16.0, decay_default_lq = 7.0 / 3.0;
  cfg.cls.base = cfg.lq;
  if (cfg.lq.coef_var_scale == scale_default_lq) cfg.cls.base.coef_var_scale = 3.0;
  if (cfg.lq.coef_var_decay == decay_default_lq) cfg.cls.base.coef_var_decay = 2.0;
  return cfg;
}

}  // namespace sfpca
