#include "fpm/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "fpm/io.hpp"

namespace fpm {

namespace fs = std::filesystem;

namespace {

// Reads an object field by field; leftover keys are reported as errors so
// typos do not silently fall back to defaults.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  template <typename T>
  T get(const char* key, T fallback) {
    return has(key) ? convert<T>(key) : fallback;
  }

  template <typename T>
  T require(const char* key) {
    if (!has(key)) throw ConfigError(path(key) + " is required");
    return convert<T>(key);
  }

  const Json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError("unknown field " + where_ + "." + key);
    }
  }

 private:
  template <typename T>
  T convert(const char* key) {
    try {
      return j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(path(key) + " has the wrong type");
    }
  }

  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path candidate(p);
  return candidate.is_absolute() ? candidate : base / candidate;
}

TruthKind parse_truth_kind(const std::string& s) {
  if (s == "flat") return TruthKind::flat;
  if (s == "phase_only") return TruthKind::phase_only;
  if (s == "two_image") return TruthKind::two_image;
  if (s == "texture") return TruthKind::texture;
  throw ConfigError("truth.kind '" + s + "' is not one of flat, phase_only, two_image, texture");
}

const char* truth_kind_name(TruthKind k) {
  switch (k) {
    case TruthKind::flat:
      return "flat";
    case TruthKind::phase_only:
      return "phase_only";
    case TruthKind::two_image:
      return "two_image";
    case TruthKind::texture:
      return "texture";
  }
  return "flat";
}

const char* spectral_update_name(SpectralUpdate u) {
  switch (u) {
    case SpectralUpdate::difference:
      return "difference";
    case SpectralUpdate::replace:
      return "replace";
    case SpectralUpdate::retained:
      return "retained";
  }
  return "difference";
}

SpectralUpdate parse_spectral_update(const std::string& s) {
  if (s == "difference") return SpectralUpdate::difference;
  if (s == "replace") return SpectralUpdate::replace;
  if (s == "retained") return SpectralUpdate::retained;
  throw ConfigError("recon.spectral_update '" + s + "' is not one of difference, replace, retained");
}

NoiseSpec noise_from_json(const Json& j) {
  ObjectReader r(j, "error_model.noise");
  NoiseSpec n;
  const auto kind = r.get<std::string>("kind", "none");
  if (kind == "none") {
    n.kind = NoiseSpec::Kind::none;
  } else if (kind == "gaussian") {
    n.kind = NoiseSpec::Kind::gaussian;
    n.sigma = r.require<double>("sigma");
  } else if (kind == "poisson") {
    n.kind = NoiseSpec::Kind::poisson;
    n.photon_scale = r.require<double>("photon_scale");
  } else {
    throw ConfigError("error_model.noise.kind '" + kind + "' is not one of none, gaussian, poisson");
  }
  r.finish();
  return n;
}

Json noise_to_json(const NoiseSpec& n) {
  switch (n.kind) {
    case NoiseSpec::Kind::none:
      return {{"kind", "none"}};
    case NoiseSpec::Kind::gaussian:
      return {{"kind", "gaussian"}, {"sigma", n.sigma}};
    case NoiseSpec::Kind::poisson:
      return {{"kind", "poisson"}, {"photon_scale", n.photon_scale}};
  }
  return {{"kind", "none"}};
}

}  // namespace

std::vector<LedIndex> SimulationConfig::lit() const {
  return center_window(geometry, window_rows, window_cols);
}

std::size_t SimulationConfig::resolved_upsampling() const {
  return upsampling ? upsampling : upsampling_factor(geometry, lit());
}

SystemGeometry geometry_from_json(const Json& j) {
  ObjectReader r(j, "geometry");
  SystemGeometry g;
  g.led_rows = r.require<std::size_t>("led_rows");
  g.led_cols = r.require<std::size_t>("led_cols");
  g.led_pitch = r.require<double>("led_pitch");
  g.led_to_sample = r.require<double>("led_to_sample");
  g.wavelength = r.require<double>("wavelength");
  g.objective_na = r.require<double>("objective_na");
  g.camera_pixel = r.require<double>("camera_pixel");
  g.magnification = r.require<double>("magnification");
  g.lr_size = r.require<std::size_t>("lr_size");
  r.finish();
  g.validate();
  return g;
}

Json to_json(const SystemGeometry& g) {
  return {{"led_rows", g.led_rows},         {"led_cols", g.led_cols},
          {"led_pitch", g.led_pitch},       {"led_to_sample", g.led_to_sample},
          {"wavelength", g.wavelength},     {"objective_na", g.objective_na},
          {"camera_pixel", g.camera_pixel}, {"magnification", g.magnification},
          {"lr_size", g.lr_size}};
}

ReconConfig recon_from_json(const Json& j) {
  ObjectReader r(j, "recon");
  ReconConfig c;
  c.backend = parse_backend(r.get<std::string>("backend", backend_name(c.backend)));
  c.initial_guess = parse_guess(r.get<std::string>("initial_guess", guess_name(c.initial_guess)));
  c.iterations = r.get<std::size_t>("iterations", c.iterations);
  c.upsampling = r.get<std::size_t>("upsampling", c.upsampling);
  c.bandpass = r.get<bool>("bandpass", c.bandpass);
  c.led_order = parse_led_order(r.get<std::string>("led_order", led_order_name(c.led_order)));
  c.gn_regularizer = r.get<double>("gn_regularizer", c.gn_regularizer);
  const auto updater = r.get<std::string>("updater", "gauss_newton");
  if (updater == "gauss_newton") {
    c.updater = Updater::gauss_newton;
  } else if (updater == "pie") {
    c.updater = Updater::pie;
  } else {
    throw ConfigError("recon.updater '" + updater + "' is not one of gauss_newton, pie");
  }
  c.spectral_update =
      parse_spectral_update(r.get<std::string>("spectral_update", spectral_update_name(c.spectral_update)));
  c.pupil_update = r.get<bool>("pupil_update", c.pupil_update);
  c.periodize_measurements = r.get<bool>("periodize_measurements", c.periodize_measurements);
  c.seed = r.get<std::uint64_t>("seed", c.seed);
  r.finish();
  c.validate();
  return c;
}

Json to_json(const ReconConfig& c) {
  return {{"backend", backend_name(c.backend)},
          {"initial_guess", guess_name(c.initial_guess)},
          {"iterations", c.iterations},
          {"upsampling", c.upsampling},
          {"bandpass", c.bandpass},
          {"led_order", led_order_name(c.led_order)},
          {"gn_regularizer", c.gn_regularizer},
          {"updater", c.updater == Updater::gauss_newton ? "gauss_newton" : "pie"},
          {"spectral_update", spectral_update_name(c.spectral_update)},
          {"pupil_update", c.pupil_update},
          {"periodize_measurements", c.periodize_measurements},
          {"seed", c.seed}};
}

SimulationConfig simulation_config_from_json(const Json& j, const fs::path& base_dir) {
  ObjectReader top(j, "config");
  SimulationConfig c;
  if (!top.has("geometry")) throw ConfigError("config.geometry is required");
  c.geometry = geometry_from_json(top.raw("geometry"));

  c.window_rows = c.geometry.led_rows;
  c.window_cols = c.geometry.led_cols;
  if (top.has("lit_window")) {
    ObjectReader w(top.raw("lit_window"), "lit_window");
    c.window_rows = w.require<std::size_t>("rows");
    c.window_cols = w.require<std::size_t>("cols");
    w.finish();
  }
  c.lit();  // validates the window against the array

  c.seed = top.get<std::uint64_t>("seed", 0);
  c.field_margin = top.get<std::size_t>("field_margin", c.field_margin);
  if (c.field_margin < 1) throw ConfigError("config.field_margin must be at least 1");
  c.upsampling = top.get<std::size_t>("upsampling", 0);
  if (c.upsampling == 1) throw ConfigError("config.upsampling must be at least 2 (0 selects it automatically)");

  if (top.has("truth")) {
    ObjectReader t(top.raw("truth"), "truth");
    c.truth.kind = parse_truth_kind(t.get<std::string>("kind", "texture"));
    c.truth.amplitude_floor = t.get<double>("amplitude_floor", c.truth.amplitude_floor);
    c.truth.phase_min = t.get<double>("phase_min", c.truth.phase_min);
    c.truth.phase_max = t.get<double>("phase_max", c.truth.phase_max);
    c.truth.amplitude_correlation = t.get<double>("amplitude_correlation", c.truth.amplitude_correlation);
    c.truth.phase_correlation = t.get<double>("phase_correlation", c.truth.phase_correlation);
    c.truth.phase_verbatim = t.get<bool>("phase_verbatim", c.truth.phase_verbatim);
    if (t.has("amplitude_image")) c.amplitude_image = resolve(base_dir, t.require<std::string>("amplitude_image"));
    if (t.has("phase_image")) c.phase_image = resolve(base_dir, t.require<std::string>("phase_image"));
    t.finish();
  } else {
    c.truth.kind = TruthKind::texture;
  }

  if (top.has("error_model")) {
    ObjectReader e(top.raw("error_model"), "error_model");
    c.error.weights = e.get<std::vector<double>>("weights", {});
    if (e.has("wavevector_offsets")) {
      const Json& offs = e.raw("wavevector_offsets");
      if (!offs.is_array()) throw ConfigError("error_model.wavevector_offsets must be an array of [kx, ky]");
      for (const auto& o : offs) {
        if (!o.is_array() || o.size() != 2 || !o[0].is_number() || !o[1].is_number()) {
          throw ConfigError("error_model.wavevector_offsets entries must be [kx, ky] in rad/m");
        }
        c.error.wavevector_offsets.push_back({o[0].get<double>(), o[1].get<double>()});
      }
    }
    if (e.has("noise")) c.error.noise = noise_from_json(e.raw("noise"));
    if (e.has("pupil")) {
      ObjectReader p(e.raw("pupil"), "error_model.pupil");
      c.error.pupil.defocus = p.get<double>("defocus", 0.0);
      if (p.has("aberration_image")) {
        c.aberration_image = resolve(base_dir, p.require<std::string>("aberration_image"));
      }
      p.finish();
    }
    c.error.quantize_bits = e.get<unsigned>("quantize_bits", 0);
    e.finish();
  }
  c.error.seed = c.seed;
  c.truth.seed = c.seed;
  c.error.validate(c.window_rows * c.window_cols);

  if (top.has("recon")) c.recon = recon_from_json(top.raw("recon"));
  top.finish();
  return c;
}

SimulationConfig load_simulation_config(const fs::path& path) {
  return simulation_config_from_json(read_json_file(path), path.parent_path());
}

Json to_json(const SimulationConfig& c) {
  Json truth = {{"kind", truth_kind_name(c.truth.kind)},
                {"amplitude_floor", c.truth.amplitude_floor},
                {"phase_min", c.truth.phase_min},
                {"phase_max", c.truth.phase_max},
                {"amplitude_correlation", c.truth.amplitude_correlation},
                {"phase_correlation", c.truth.phase_correlation},
                {"phase_verbatim", c.truth.phase_verbatim}};
  if (c.amplitude_image) truth["amplitude_image"] = c.amplitude_image->string();
  if (c.phase_image) truth["phase_image"] = c.phase_image->string();

  Json offsets = Json::array();
  for (const auto& o : c.error.wavevector_offsets) offsets.push_back({o.x, o.y});
  Json pupil = {{"defocus", c.error.pupil.defocus}};
  if (c.aberration_image) pupil["aberration_image"] = c.aberration_image->string();

  return {{"geometry", to_json(c.geometry)},
          {"lit_window", {{"rows", c.window_rows}, {"cols", c.window_cols}}},
          {"seed", c.seed},
          {"field_margin", c.field_margin},
          {"upsampling", c.resolved_upsampling()},
          {"truth", truth},
          {"error_model",
           {{"weights", c.error.weights},
            {"wavevector_offsets", offsets},
            {"noise", noise_to_json(c.error.noise)},
            {"pupil", pupil},
            {"quantize_bits", c.error.quantize_bits}}},
          {"recon", to_json(c.recon)}};
}

GroundTruth build_ground_truth(const SimulationConfig& c) {
  TruthOptions opts = c.truth;
  opts.hr_size = c.field_margin * c.resolved_upsampling() * c.geometry.lr_size;
  if (c.amplitude_image) opts.amplitude_source = read_image(*c.amplitude_image);
  if (c.phase_image) opts.phase_source = read_image(*c.phase_image);
  return make_ground_truth(opts);
}

PupilSpec build_pupil(const SimulationConfig& c) {
  PupilSpec p = c.error.pupil;
  if (c.aberration_image) p.aberration_phase = read_image(*c.aberration_image);
  return p;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const fs::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
}

Manifest read_manifest(const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  if (!fs::exists(path)) throw DataError("no manifest.json in '" + dir.string() + "'");
  Json j;
  try {
    j = read_json_file(path);
  } catch (const ConfigError& e) {
    throw DataError(e.what());
  }
  try {
    ObjectReader r(j, "manifest");
    Manifest m;
    m.schema_version = r.require<int>("schema_version");
    if (m.schema_version != kManifestSchemaVersion) {
      throw DataError("manifest schema_version " + std::to_string(m.schema_version) + " is not supported");
    }
    m.geometry = geometry_from_json(r.raw("geometry"));
    ObjectReader w(r.raw("lit_window"), "manifest.lit_window");
    m.window_rows = w.require<std::size_t>("rows");
    m.window_cols = w.require<std::size_t>("cols");
    w.finish();
    m.pixel_format = r.require<std::string>("pixel_format");
    if (m.pixel_format != "pfm-f32") throw DataError("unsupported pixel_format '" + m.pixel_format + "'");
    if (r.has("error_model")) r.raw("error_model");
    if (r.has("config")) m.config = r.raw("config");
    for (const auto& e : r.raw("images")) {
      ObjectReader er(e, "manifest.images[]");
      ManifestEntry entry{er.require<std::string>("file"),
                          {er.require<std::size_t>("row"), er.require<std::size_t>("col")}};
      er.finish();
      m.images.push_back(std::move(entry));
    }
    r.finish();
    if (m.images.size() != m.window_rows * m.window_cols) {
      throw DataError("manifest lists " + std::to_string(m.images.size()) + " images for a " +
                      std::to_string(m.window_rows) + "x" + std::to_string(m.window_cols) + " LED window");
    }
    for (const auto& e : m.images) {
      if (!fs::exists(dir / e.file)) throw DataError("manifest references missing file '" + e.file + "'");
    }
    return m;
  } catch (const ConfigError& e) {
    throw DataError(std::string("corrupt manifest: ") + e.what());
  }
}

void write_manifest(const fs::path& dir, const Manifest& m) {
  Json images = Json::array();
  for (const auto& e : m.images) images.push_back({{"file", e.file}, {"row", e.led.row}, {"col", e.led.col}});
  Json j = {{"schema_version", m.schema_version},
            {"geometry", to_json(m.geometry)},
            {"lit_window", {{"rows", m.window_rows}, {"cols", m.window_cols}}},
            {"pixel_format", m.pixel_format}};
  if (!m.config.is_null()) {
    if (m.config.contains("error_model")) j["error_model"] = m.config["error_model"];
    j["config"] = m.config;
  }
  j["images"] = images;
  write_json_file(dir / "manifest.json", j);
}

LrStack load_stack(const fs::path& dir) {
  const Manifest m = read_manifest(dir);
  LrStack stack;
  stack.geometry = m.geometry;
  for (const auto& e : m.images) {
    if (e.led.row >= m.geometry.led_rows || e.led.col >= m.geometry.led_cols) {
      throw DataError("manifest LED (" + std::to_string(e.led.row) + ", " + std::to_string(e.led.col) +
                      ") outside the array");
    }
    RealImage img = read_pfm(dir / e.file);
    if (img.rows() != m.geometry.lr_size || img.cols() != m.geometry.lr_size) {
      throw DataError("'" + e.file + "' is " + std::to_string(img.rows()) + "x" + std::to_string(img.cols()) +
                      ", expected lr_size " + std::to_string(m.geometry.lr_size));
    }
    stack.images.push_back(std::move(img));
    stack.leds.push_back(e.led);
  }
  return stack;
}

void write_stack(const fs::path& dir, const LrStack& stack, std::size_t window_rows,
                 std::size_t window_cols, const Json& config) {
  fs::create_directories(dir);
  Manifest m;
  m.geometry = stack.geometry;
  m.window_rows = window_rows;
  m.window_cols = window_cols;
  m.config = config;
  for (std::size_t i = 0; i < stack.images.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "led_r%02zu_c%02zu.pfm", stack.leds[i].row, stack.leds[i].col);
    write_pfm(dir / name, stack.images[i]);
    m.images.push_back({name, stack.leds[i]});
  }
  write_manifest(dir, m);
}

}  // namespace fpm
