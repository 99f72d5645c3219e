// Command-line front end: simulate, reconstruct, decompose, evaluate.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fpm/config.hpp"
#include "fpm/fft.hpp"
#include "fpm/forward_sim.hpp"
#include "fpm/io.hpp"
#include "fpm/kernels.hpp"
#include "fpm/metrics.hpp"
#include "fpm/reconstruction.hpp"
#include "fpm/spectral.hpp"

namespace fs = std::filesystem;
using namespace fpm;

namespace {

RealImage log_magnitude(const ComplexImage& spectrum) {
  RealImage out(spectrum.rows(), spectrum.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log1p(std::abs(spectrum[i]));
  return fftshift(out);
}

RealImage squared(const RealImage& a) {
  RealImage out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * a[i];
  return out;
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a) {
  SimulationConfig c = load_simulation_config(a.config);
  if (a.seed) {
    c.seed = *a.seed;
    c.truth.seed = c.seed;
    c.error.seed = c.seed;
  }
  const GroundTruth truth = build_ground_truth(c);
  ErrorModelSpec err = c.error;
  err.pupil = build_pupil(c);
  const LrStack stack = simulate_stack(truth, c.geometry, c.lit(), err, {c.field_margin});

  const fs::path out(a.out);
  write_stack(out, stack, c.window_rows, c.window_cols, to_json(c));
  const std::size_t hr = c.resolved_upsampling() * c.geometry.lr_size;
  const GroundTruth tile = truth.center_crop(hr, hr);
  write_pfm(out / "truth_amplitude.pfm", tile.amplitude);
  write_pfm(out / "truth_phase.pfm", tile.phase);
  std::cout << "wrote " << stack.images.size() << " images (" << c.geometry.lr_size << "x"
            << c.geometry.lr_size << ", HR " << hr << "x" << hr << ") to " << out.string() << '\n';
  return 0;
}

struct ReconstructArgs {
  std::string stack;
  std::string out;
  std::string backend;
  std::string guess;
  std::string led_order;
  std::string spectral_update;
  std::size_t iterations = 0;
  std::size_t upsampling = 0;
  double gn_regularizer = 0.0;
  bool bandpass = false;
  bool pupil_update = false;
  bool periodize = false;
  bool config_pupil = false;
  std::optional<std::uint64_t> seed;
};

int cmd_reconstruct(const ReconstructArgs& a, const CLI::App& sub) {
  const fs::path dir(a.stack);
  const Manifest manifest = read_manifest(dir);
  const LrStack stack = load_stack(dir);

  ReconConfig cfg;
  std::optional<SimulationConfig> sim;
  if (manifest.config.is_object()) {
    sim = simulation_config_from_json(manifest.config, dir);
    cfg = sim->recon;
    cfg.upsampling = sim->resolved_upsampling();
  }
  if (sub.count("--backend")) cfg.backend = parse_backend(a.backend);
  if (sub.count("--guess")) cfg.initial_guess = parse_guess(a.guess);
  if (sub.count("--led-order")) cfg.led_order = parse_led_order(a.led_order);
  if (sub.count("--spectral-update")) {
    Json j = to_json(cfg);
    j["spectral_update"] = a.spectral_update;
    cfg = recon_from_json(j);
  }
  if (sub.count("--iters")) cfg.iterations = a.iterations;
  if (sub.count("--upsampling")) cfg.upsampling = a.upsampling;
  if (sub.count("--gn-regularizer")) cfg.gn_regularizer = a.gn_regularizer;
  if (a.bandpass) cfg.bandpass = true;
  if (a.pupil_update) cfg.pupil_update = true;
  if (a.periodize) cfg.periodize_measurements = true;
  if (a.seed) cfg.seed = *a.seed;
  cfg.validate();

  PupilSpec pupil;
  if (a.config_pupil) {
    if (!sim) throw ConfigError("--config-pupil needs a stack written by `fpm simulate`");
    pupil = build_pupil(*sim);
  }

  const auto t0 = std::chrono::steady_clock::now();
  const ReconState state = reconstruct(stack, cfg, pupil);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Rendered img = render(state);
  const fs::path out(a.out);
  fs::create_directories(out);
  write_pfm(out / "amplitude.pfm", img.amplitude);
  write_pfm(out / "phase.pfm", img.phase);
  write_pfm(out / "spectrum_mag.pfm", log_magnitude(state.hr_spectrum));

  Json report = {{"backend", backend_name(cfg.backend)},
                 {"iterations", state.iteration},
                 {"upsampling", state.upsampling},
                 {"wall_time", wall},
                 {"final_residual", state.residuals.back()},
                 {"residuals", state.residuals},
                 {"axis_artifact_energy", axis_artifact_energy(state.hr_spectrum)},
                 {"kernels", kernels::isa_name(kernels::active().isa)},
                 {"config", to_json(cfg)}};
  write_json_file(out / "report.json", report);
  std::cout << backend_name(cfg.backend) << ": " << state.iteration << " iterations in " << wall
            << " s, final residual " << state.residuals.back() << '\n';
  return 0;
}

struct DecomposeArgs {
  std::string image;
  std::string out;
};

int cmd_decompose(const DecomposeArgs& a) {
  const RealImage f = read_image(a.image);
  require_min_size(f.rows(), f.cols(), 2, "decompose input");
  const auto dz = periodic_smooth_decompose(f);
  const fs::path out(a.out);
  fs::create_directories(out);
  write_pfm(out / "g.pfm", dz.g);
  write_pfm(out / "e.pfm", dz.e);
  const ComplexImage fs_ = dft2(to_complex(f), Direction::forward);
  const ComplexImage gs = dft2(to_complex(dz.g), Direction::forward);
  const ComplexImage es = dft2(to_complex(dz.e), Direction::forward);
  write_pfm(out / "f_spectrum.pfm", log_magnitude(fs_));
  write_pfm(out / "g_spectrum.pfm", log_magnitude(gs));
  write_pfm(out / "e_spectrum.pfm", log_magnitude(es));
  Json report = {{"rows", f.rows()},
                 {"cols", f.cols()},
                 {"axis_artifact_energy_f", axis_artifact_energy(fs_)},
                 {"axis_artifact_energy_g", axis_artifact_energy(gs)}};
  write_json_file(out / "decompose.json", report);
  return 0;
}

struct EvaluateArgs {
  std::string recon;
  std::string truth;
  std::vector<std::size_t> background;
  std::vector<std::size_t> segment;
  std::string block_full;
  std::vector<std::size_t> block_origin;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a) {
  const fs::path dir(a.recon);
  MetricReport report;
  RealImage phase_img;
  const auto recon_phase = [&]() -> const RealImage& {
    if (phase_img.empty()) phase_img = read_pfm(dir / "phase.pfm");
    return phase_img;
  };

  if (!a.truth.empty()) {
    const fs::path tdir(a.truth);
    const RealImage amp = read_pfm(dir / "amplitude.pfm");
    const RealImage t_amp = read_pfm(tdir / "truth_amplitude.pfm");
    const RealImage t_phase = read_pfm(tdir / "truth_phase.pfm");
    if (!amp.same_shape(t_amp) || !recon_phase().same_shape(t_phase)) {
      throw DataError("reconstruction and truth dimensions differ");
    }
    report.rmse_intensity = rmse(squared(t_amp), squared(amp));
    report.rmse_phase = rmse(t_phase, phase_align(recon_phase(), t_phase));
    report.axis_artifact_energy =
        axis_artifact_energy(dft2(from_polar(amp, recon_phase()), Direction::forward));
    if (fs::exists(dir / "report.json")) {
      const Json r = read_json_file(dir / "report.json");
      if (r.contains("wall_time")) report.wall_time = r["wall_time"].get<double>();
    }
  }
  if (!a.background.empty()) {
    const auto& b = a.background;
    report.background_phase_std = background_phase_std(recon_phase(), Region::rectangle(b[0], b[1], b[2], b[3]));
  } else if (!a.segment.empty()) {
    const auto& s = a.segment;
    report.background_phase_std = background_phase_std(recon_phase(), Region::segment(s[0], s[1], s[2], s[3]));
  }
  if (!a.block_full.empty()) {
    const RealImage full = read_pfm(fs::path(a.block_full) / "phase.pfm");
    const std::size_t r0 = a.block_origin.empty() ? 0 : a.block_origin[0];
    const std::size_t c0 = a.block_origin.empty() ? 0 : a.block_origin[1];
    report.block_consistency = block_consistency(full, recon_phase(), r0, c0);
  }
  const fs::path out = a.out.empty() ? dir / "metrics.json" : fs::path(a.out);
  std::ofstream f(out);
  if (!f) throw DataError("cannot open '" + out.string() + "' for writing");
  f << report.to_json() << '\n';
  std::cout << report.to_json() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier ptychographic microscopy with FFT, DCT-style and periodic-plus-smooth transforms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fpm 1.0.0");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Generate an LR image stack from a JSON config");
  s->add_option("config", sim.config, "Simulation config (JSON)")->required()->check(CLI::ExistingFile);
  s->add_option("-o,--output", sim.out, "Output directory")->required();
  s->add_option("--seed", sim.seed, "Override the config seed");

  ReconstructArgs rec;
  auto* r = app.add_subcommand("reconstruct", "Recover the HR object from a stack directory");
  r->add_option("stack", rec.stack, "Stack directory (manifest.json + PFM images)")->required();
  r->add_option("-o,--output", rec.out, "Output directory")->required();
  r->add_option("--backend", rec.backend, "fft, dct or pft")->check(CLI::IsMember({"fft", "dct", "pft"}));
  r->add_option("--guess", rec.guess, "Initial guess")
      ->check(CLI::IsMember({"bilinear", "bicubic", "ones", "random"}));
  r->add_option("--iters", rec.iterations, "Outer iterations")->check(CLI::PositiveNumber);
  r->add_option("--upsampling", rec.upsampling, "HR upsampling factor (>= 2)");
  r->add_option("--led-order", rec.led_order, "center_out or raster")
      ->check(CLI::IsMember({"center_out", "raster"}));
  r->add_option("--gn-regularizer", rec.gn_regularizer, "Gauss-Newton damping relative to max |P|^2");
  r->add_option("--spectral-update", rec.spectral_update, "difference, replace or retained")
      ->check(CLI::IsMember({"difference", "replace", "retained"}));
  r->add_flag("--bandpass", rec.bandpass, "Zero the spectrum outside the synthetic aperture");
  r->add_flag("--pupil-update", rec.pupil_update, "Recover the pupil jointly");
  r->add_flag("--periodize-measurements", rec.periodize, "Use the periodic component of each measured amplitude");
  r->add_flag("--config-pupil", rec.config_pupil, "Start from the simulation's aberrated pupil");
  r->add_option("--seed", rec.seed, "Seed for the random initial guess");

  DecomposeArgs dec;
  auto* d = app.add_subcommand("decompose", "Split an image into periodic and smooth components");
  d->add_option("image", dec.image, "PFM or binary PGM image")->required();
  d->add_option("-o,--output", dec.out, "Output directory")->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score a reconstruction directory");
  e->add_option("recon", ev.recon, "Reconstruction directory")->required();
  e->add_option("--truth", ev.truth, "Directory with truth_amplitude.pfm and truth_phase.pfm");
  e->add_option("--background", ev.background, "Background rectangle: row0 col0 row1 col1 (exclusive end)")
      ->expected(4);
  e->add_option("--background-segment", ev.segment, "Background line: row0 col0 row1 col1 (inclusive)")
      ->expected(4);
  e->add_option("--block-full", ev.block_full, "Reconstruction of the enclosing full tile");
  e->add_option("--block-origin", ev.block_origin, "Sub-tile origin inside the full tile: row col")->expected(2);
  e->add_option("-o,--output", ev.out, "Report path (default RECON/metrics.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*r) return cmd_reconstruct(rec, *r);
    if (*d) return cmd_decompose(dec);
    if (*e) return cmd_evaluate(ev);
  } catch (const Error& err) {
    std::cerr << "fpm: " << err.what() << '\n';
    return static_cast<int>(err.kind());
  } catch (const fs::filesystem_error& err) {
    std::cerr << "fpm: " << err.what() << '\n';
    return static_cast<int>(ErrorKind::data);
  } catch (const std::exception& err) {
    std::cerr << "fpm: " << err.what() << '\n';
    return static_cast<int>(ErrorKind::numerical);
  }
  return 0;
}
