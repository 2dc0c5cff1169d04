#include "dipiir_app/config.hpp"

#include "dipiir/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dipiir::app {

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys{
      {"run.name", "run", "prefix of every output file"},
      {"problem", "ct-limited", "ct-limited | mri-accel | deblur | superres"},
      {"pipeline", "dipiir-implicit", "fbp | ift | dc-fbp | dc-ift | pnp-mbir | dipiir-explicit | dipiir-implicit"},
      {"seed", "1234", "noise seed"},
      {"input.dir", "", "directory holding simulate outputs (default: --out)"},
      {"input.run", "", "run name of the simulate outputs (default: run.name)"},
      {"init", "default", "default | zero-padded | zeros"},
      {"preset", "auto", "auto | none | ct-explicit | ct-implicit | ct-pnp | mri | mri-pnp | restore | restore-pnp"},
      {"noise.sigma", "0.01", "standard deviation of additive Gaussian noise on the data"},
      {"ct.side", "128", "image side in pixels"},
      {"ct.num_angles", "180", "uniform angles over [0, 180) degrees"},
      {"ct.keep_fraction", "0.5", "observed prefix of the angle range"},
      {"mri.side", "128", "image side in pixels"},
      {"mri.accel", "4", "regular k-space undersampling factor"},
      {"mri.acs_fraction", "0.06", "fully sampled central band, fraction of columns"},
      {"restore.side", "64", "image side for deblur / superres"},
      {"restore.blur_sigma", "1.0", "Gaussian blur width in pixels"},
      {"restore.factor", "2", "super-resolution subsampling factor"},
      {"restore.prefilter_sigma", "1.0", "smoothing applied to the data to form v0"},
      {"ce.rho", "0.5", "Mann parameter in (0, 1)"},
      {"ce.mu_s", "0.6", "sensor agent weight"},
      {"ce.mu_d", "0.2", "data prior agent weight"},
      {"ce.mu_i", "0.2", "image prior agent weight"},
      {"ce.max_iters", "4", "CE iterations"},
      {"ce.residual_tol", "1e-6", "stop when the relative Mann residual drops below this"},
      {"ce.lambda_s", "1", "sensor agent proximal strength"},
      {"ce.lambda_d", "1", "explicit data agent proximal strength"},
      {"ce.lambda_i", "1", "TV image agent proximal strength"},
      {"ce.nonneg_image", "true", "clamp negative image values in sensor and TV agents"},
      {"ce.nonneg_data", "true", "clamp negative data values in sensor and data agents"},
      {"ce.concurrent", "false", "evaluate the three agents on separate threads"},
      {"ce.record_gaps", "true", "record consensus gaps in the trace"},
      {"cg.max_iters", "20", "CG iterations inside the sensor agent"},
      {"cg.rel_tol", "1e-8", "CG relative residual tolerance"},
      {"image_prior", "tv", "tv | gaussian | identity | plugin"},
      {"image_prior.sigma", "1.0", "width of the Gaussian image prior"},
      {"tv.max_iters", "100", "dual iterations of the TV solver"},
      {"tv.tol", "1e-6", "relative dual change tolerance of the TV solver"},
      {"data_prior", "smoother", "implicit data prior: smoother | gaussian | identity | plugin"},
      {"data_prior.sigma_rows", "2.0", "smoothing along angles (CT) / rows"},
      {"data_prior.sigma_cols", "0.0", "smoothing along detectors (CT) / k-space columns (MRI)"},
      {"plugin.image.exec", "", "external image denoiser executable"},
      {"plugin.image.args", "", "comma-separated arguments"},
      {"plugin.image.timeout", "60", "seconds"},
      {"plugin.data.exec", "", "external data denoiser executable"},
      {"plugin.data.args", "", "comma-separated arguments"},
      {"plugin.data.timeout", "60", "seconds"},
      {"check.trials", "50", "random trials per adjoint check"},
      {"check.tolerance", "1e-6", "maximum relative adjoint discrepancy"},
      {"check.states", "20", "random states per slice-discipline check"},
      {"check.corrupt_adjoint", "false", "scale the first operator's adjoint by 2 (negative control)"},
      {"output.pgm", "false", "also write 8-bit PGM previews"},
      {"report.timing", "true", "include wall-clock timings in reports"},
  };
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

const std::vector<std::string> kProblems{"ct-limited", "mri-accel", "deblur", "superres"};
const std::vector<std::string> kPipelines{"fbp",      "ift",             "dc-fbp",         "dc-ift",
                                          "pnp-mbir", "dipiir-explicit", "dipiir-implicit"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

struct Preset {
  const char* name;
  std::vector<std::pair<const char*, const char*>> values;
};

// Weights and Mann parameters follow the published experiments; the
// proximal strengths are tuned for unit-field-of-view phantoms.
const std::vector<Preset>& presets() {
  static const std::vector<Preset> p{
      {"ct-explicit",
       {{"ce.rho", "0.5"}, {"ce.mu_s", "0.6"}, {"ce.mu_d", "0.2"}, {"ce.mu_i", "0.2"},
        {"ce.lambda_s", "0.05"}, {"ce.lambda_d", "2"}, {"ce.lambda_i", "1"}}},
      {"ct-implicit",
       {{"ce.rho", "0.35"}, {"ce.mu_s", "0.65"}, {"ce.mu_d", "0.2"}, {"ce.mu_i", "0.15"},
        {"ce.lambda_s", "0.05"}, {"ce.lambda_d", "3.33"}, {"ce.lambda_i", "1"}}},
      {"ct-pnp",
       {{"ce.rho", "0.5"}, {"ce.mu_s", "0.75"}, {"ce.mu_d", "0"}, {"ce.mu_i", "0.25"},
        {"ce.lambda_s", "0.05"}, {"ce.lambda_i", "1"}, {"init", "zero-padded"}}},
      {"mri",
       {{"ce.rho", "0.45"}, {"ce.mu_s", "0.45"}, {"ce.mu_d", "0.2"}, {"ce.mu_i", "0.35"},
        {"ce.lambda_s", "0.03"}, {"ce.lambda_d", "1"}, {"ce.lambda_i", "1"},
        {"ce.nonneg_image", "false"}, {"ce.nonneg_data", "false"}, {"data_prior.sigma_rows", "0"},
        {"data_prior.sigma_cols", "0.5"}, {"init", "zero-padded"}}},
      {"mri-pnp",
       {{"ce.rho", "0.45"}, {"ce.mu_s", "0.5625"}, {"ce.mu_d", "0"}, {"ce.mu_i", "0.4375"},
        {"ce.lambda_s", "0.03"}, {"ce.lambda_i", "1"}, {"ce.nonneg_image", "false"},
        {"ce.nonneg_data", "false"}, {"init", "zero-padded"}}},
      {"restore",
       {{"ce.rho", "0.5"}, {"ce.mu_s", "0.6"}, {"ce.mu_d", "0.2"}, {"ce.mu_i", "0.2"},
        {"ce.lambda_s", "1"}, {"ce.lambda_d", "1"}, {"ce.lambda_i", "100"}, {"data_prior", "gaussian"},
        {"data_prior.sigma_rows", "1.0"}}},
      {"restore-pnp",
       {{"ce.rho", "0.5"}, {"ce.mu_s", "0.75"}, {"ce.mu_d", "0"}, {"ce.mu_i", "0.25"},
        {"ce.lambda_s", "1"}, {"ce.lambda_i", "100"}}},
  };
  return p;
}

}  // namespace

std::string auto_preset(const std::string& problem, const std::string& pipeline) {
  const bool pnp = pipeline == "pnp-mbir";
  if (problem == "ct-limited") {
    if (pnp) return "ct-pnp";
    return pipeline == "dipiir-explicit" ? "ct-explicit" : "ct-implicit";
  }
  if (problem == "mri-accel") return pnp ? "mri-pnp" : "mri";
  return pnp ? "restore-pnp" : "restore";
}

RunConfig::RunConfig() {
  for (const auto& k : known_keys()) values_.emplace(std::string(k.key), std::string(k.default_value));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = value;
  explicit_.insert(key);
}

void RunConfig::parse(std::string_view text, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    try {
      set(key, trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  RunConfig c;
  c.parse(ss.str(), path.string());
  return c;
}

void RunConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& RunConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::num(const std::string& key) const {
  const std::string& s = str(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': '" + s + "' is not a number");
  }
}

long RunConfig::integer(const std::string& key) const {
  const std::string& s = str(key);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("config key '" + key + "': '" + s + "' is not an integer");
  return v;
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& s = str(key);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + s + "'");
}

std::vector<std::string> RunConfig::list(const std::string& key) const {
  std::vector<std::string> out;
  std::stringstream ss(str(key));
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

void RunConfig::resolve_preset() {
  std::string name = str("preset");
  if (name == "none") return;
  if (name == "auto") name = auto_preset(str("problem"), str("pipeline"));
  const auto& all = presets();
  const auto it = std::find_if(all.begin(), all.end(), [&](const Preset& p) { return name == p.name; });
  if (it == all.end()) throw ConfigError("config key 'preset': unknown preset '" + name + "'");
  for (const auto& [k, v] : it->values)
    if (!is_explicit(k)) values_[k] = v;
}

void RunConfig::validate() const {
  const std::string& problem = str("problem");
  const std::string& pipeline = str("pipeline");
  if (!contains(kProblems, problem)) throw ConfigError("config key 'problem': unknown problem '" + problem + "'");
  if (!contains(kPipelines, pipeline)) throw ConfigError("config key 'pipeline': unknown pipeline '" + pipeline + "'");
  const bool ct = problem == "ct-limited";
  const bool mri = problem == "mri-accel";
  if ((pipeline == "fbp" || pipeline == "dc-fbp") && !ct)
    throw ConfigError("pipeline '" + pipeline + "' requires problem ct-limited");
  if ((pipeline == "ift" || pipeline == "dc-ift") && !mri)
    throw ConfigError("pipeline '" + pipeline + "' requires problem mri-accel");
  for (const auto& k : known_keys()) {
    const std::string key(k.key);
    const std::string& def = std::string(k.default_value);
    if (def == "true" || def == "false") {
      flag(key);
    } else if (!def.empty() && (std::isdigit(static_cast<unsigned char>(def[0])) || def[0] == '-')) {
      num(key);
    }
  }
  if (!contains({"default", "zero-padded", "zeros"}, str("init")))
    throw ConfigError("config key 'init': unknown initialization '" + str("init") + "'");
  if (!contains({"tv", "gaussian", "identity", "plugin"}, str("image_prior")))
    throw ConfigError("config key 'image_prior': unknown prior '" + str("image_prior") + "'");
  if (!contains({"smoother", "gaussian", "identity", "plugin"}, str("data_prior")))
    throw ConfigError("config key 'data_prior': unknown prior '" + str("data_prior") + "'");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace dipiir::app
