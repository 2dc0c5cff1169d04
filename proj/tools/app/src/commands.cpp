#include "dipiir_app/commands.hpp"

#include "dipiir/error.hpp"
#include "dipiir/fourier.hpp"
#include "dipiir/convolution.hpp"
#include "dipiir/metrics.hpp"
#include "dipiir/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace dipiir::app {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunConfig prepared(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.resolve_preset();
  c.validate();
  return c;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw IoError("write failed: " + path.string());
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

Tensor tensor(std::vector<std::uint64_t> dims, Vec values) {
  Tensor t;
  t.dims = std::move(dims);
  t.values = std::move(values);
  return t;
}

Tensor load(const fs::path& path) {
  try {
    return load_tensor(path);
  } catch (const ProtocolError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

nlohmann::json metrics_json(const MetricsReport& m) {
  return {{"rmse", m.rmse}, {"psnr", m.psnr}, {"ssim", m.ssim}, {"nmse", m.nmse}, {"peak", m.peak}};
}

}  // namespace

void write_pgm(const fs::path& path, const Vec& image, Index rows, Index cols) {
  if (image.size() != rows * cols) throw ShapeError("pgm export: image is not rows x cols");
  const double lo = image.minCoeff();
  const double hi = image.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  std::ostringstream os;
  os << "P5\n" << cols << " " << rows << "\n255\n";
  for (Index i = 0; i < image.size(); ++i)
    os.put(static_cast<char>(static_cast<unsigned char>(std::lround((image(i) - lo) * scale))));
  write_text(path, os.str());
}

std::vector<fs::path> cmd_simulate(const RunConfig& cfg_in, const fs::path& out, std::ostream& log) {
  const RunConfig cfg = prepared(cfg_in);
  const Simulation sim = simulate(cfg);
  ensure_dir(out);
  const std::string run = cfg.str("run.name");
  std::vector<fs::path> files;
  auto save = [&](const std::string& stage, const Tensor& t) {
    const fs::path p = out / (run + "." + stage + ".dipt");
    save_tensor(p, t);
    files.push_back(p);
  };
  save("phantom", sim.phantom);
  save("full", sim.full);
  save("observed", sim.observed);
  if (sim.pattern) save(sim.problem == "ct-limited" ? "angles" : "mask", *sim.pattern);
  if (cfg.flag("output.pgm")) {
    const auto n = static_cast<Index>(sim.phantom.dims[0]);
    write_pgm(out / (run + ".phantom.pgm"), sim.phantom.values, n, n);
  }
  log << "simulated " << sim.problem << " into " << out.string() << " (" << files.size() << " tensors)\n";
  return files;
}

Simulation load_simulation(const RunConfig& cfg, const fs::path& out) {
  const fs::path dir = cfg.str("input.dir").empty() ? out : fs::path(cfg.str("input.dir"));
  const std::string run = cfg.str("input.run").empty() ? cfg.str("run.name") : cfg.str("input.run");
  Simulation sim;
  sim.problem = cfg.str("problem");
  auto path = [&](const std::string& stage) { return dir / (run + "." + stage + ".dipt"); };
  sim.phantom = load(path("phantom"));
  sim.observed = load(path("observed"));
  if (fs::exists(path("full"))) sim.full = load(path("full"));
  if (sim.problem == "ct-limited") sim.pattern = load(path("angles"));
  if (sim.problem == "mri-accel") sim.pattern = load(path("mask"));
  return sim;
}

nlohmann::json cmd_reconstruct(const RunConfig& cfg_in, const fs::path& out, std::ostream& log) {
  const auto t0 = Clock::now();
  const RunConfig cfg = prepared(cfg_in);
  const Simulation sim = load_simulation(cfg, out);
  const Problem p = build_problem(cfg, sim);
  const double t_load = seconds_since(t0);

  const auto t1 = Clock::now();
  PipelineResult r;
  try {
    r = run_pipeline(p, cfg);
  } catch (const AgentError& e) {
    throw AgentError(e.agent(), std::string("reconstruct/") + cfg.str("pipeline") + ": " + e.what());
  }
  const double t_recon = seconds_since(t1);

  ensure_dir(out);
  const std::string run = cfg.str("run.name");
  nlohmann::json files;
  const std::string image_file = run + ".recon.dipt";
  save_tensor(out / image_file, tensor(p.image_dims, r.image));
  files["image"] = image_file;
  if (r.data) {
    const std::string f = run + ".data.dipt";
    save_tensor(out / f, tensor(p.data_dims, *r.data));
    files["data"] = f;
  }
  nlohmann::json ce;
  if (r.trace) {
    const std::string f = run + ".trace.csv";
    std::ostringstream csv;
    write_trace_csv(csv, *r.trace);
    write_text(out / f, csv.str());
    files["trace"] = f;
    const auto& last = r.trace->records.back();
    ce = {{"iterations", last.iter},
          {"final_mann_residual", last.mann_residual},
          {"data_agent_calls", r.data_agent_calls},
          {"tv_unconverged", r.tv_unconverged}};
  }
  const Vec eval = p.evaluate(r.image);
  if (cfg.flag("output.pgm")) {
    const std::string f = run + ".recon.pgm";
    write_pgm(out / f, eval, p.truth_grid.rows, p.truth_grid.cols);
    files["pgm"] = f;
  }

  nlohmann::json report;
  report["command"] = "reconstruct";
  report["problem"] = p.kind;
  report["pipeline"] = cfg.str("pipeline");
  report["config"] = cfg.to_json();
  report["metrics"] = metrics_json(compute_metrics(eval, p.truth, p.truth_grid));
  if (!ce.is_null()) report["ce"] = ce;
  report["notes"] = r.notes;
  report["files"] = files;
  if (cfg.flag("report.timing"))
    report["timing"] = {{"load_s", t_load}, {"reconstruct_s", t_recon}, {"total_s", seconds_since(t0)}};
  write_text(out / (run + ".report.json"), dump(report));
  log << cfg.str("pipeline") << ": psnr " << std::fixed << std::setprecision(2)
      << report["metrics"]["psnr"].get<double>() << " dB, ssim " << std::setprecision(4)
      << report["metrics"]["ssim"].get<double>() << "\n";
  return report;
}

nlohmann::json cmd_metrics(const fs::path& recon_path, const fs::path& reference_path, const fs::path& report_path) {
  const Tensor recon = load(recon_path);
  const Tensor ref = load(reference_path);
  Vec a = recon.values;
  std::vector<std::uint64_t> dims = recon.dims;
  if (dims.size() == 3 && dims[0] == 2 && ref.dims.size() == 2) {
    a = magnitude(recon.values);
    dims = {dims[1], dims[2]};
  }
  if (dims != ref.dims)
    throw ShapeError("metrics: reconstruction and reference shapes differ");
  if (dims.empty() || dims.size() > 2) throw ShapeError("metrics: expected a 1D or 2D image tensor");
  const Grid grid = dims.size() == 2 ? Grid{static_cast<Index>(dims[0]), static_cast<Index>(dims[1]), 1}
                                     : Grid{1, static_cast<Index>(dims[0]), 1};
  nlohmann::json report;
  report["command"] = "metrics";
  report["reconstruction"] = recon_path.filename().string();
  report["reference"] = reference_path.filename().string();
  report["metrics"] = metrics_json(compute_metrics(a, ref.values, grid));
  if (report_path.has_parent_path()) ensure_dir(report_path.parent_path());
  write_text(report_path, dump(report));
  return report;
}

std::vector<CheckLine> run_checks(const RunConfig& cfg_in) {
  const RunConfig cfg = prepared(cfg_in);
  const Problem p = build_problem(cfg, simulate(cfg));
  const int trials = static_cast<int>(cfg.integer("check.trials"));
  const double tol = cfg.num("check.tolerance");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed"));

  std::vector<std::pair<std::string, LinearOp>> ops;
  const Index n = p.truth_grid.rows;
  if (p.kind == "ct-limited") {
    ops.emplace_back("radon-full", make_radon_op(*p.geom_full));
    ops.emplace_back("radon-observed", make_radon_op(*p.geom_obs));
    ops.emplace_back("radon-missing", make_radon_op(*p.geom_miss));
  } else if (p.kind == "mri-accel") {
    ops.emplace_back("dft2-full", make_dft2_op(n));
    ops.emplace_back("dft2-masked", make_dft2_op(n, &*p.mask, KSpacePart::Full));
    ops.emplace_back("dft2-observed", make_dft2_op(n, &*p.mask, KSpacePart::Observed));
    ops.emplace_back("dft2-unobserved", make_dft2_op(n, &*p.mask, KSpacePart::Unobserved));
  } else {
    ops.emplace_back("blur", make_blur_op(gaussian_kernel(cfg.num("restore.blur_sigma")), n));
    if (p.kind == "superres")
      ops.emplace_back("subsample", make_subsample_op(cfg.integer("restore.factor"), n));
  }
  ops.emplace_back("sensor-block", p.sensor.A);
  if (cfg.flag("check.corrupt_adjoint")) {
    const LinearOp good = ops.front().second;
    ops.front().second = LinearOp(
        good.input_len(), good.output_len(), [good](const Vec& u) { return good.apply(u); },
        [good](const Vec& v) { return Vec(2.0 * good.adjoint(v)); }, good.label());
  }

  std::vector<CheckLine> lines;
  for (const auto& [name, op] : ops) {
    const double err = check_adjoint(op, trials, seed);
    lines.push_back({"adjoint:" + name, err < tol, err, tol});
  }

  const CEConfig ce(ce_params(cfg));
  const CounterRng rng(seed ^ 0x5eedULL);
  std::uint64_t counter = 0;
  auto random_state = [&] {
    Vec v(p.image_len() + p.data_len());
    for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal(counter++);
    return AugmentedState(p.image_len(), v);
  };
  {
    const StackedState s{{random_state(), random_state(), random_state()}};
    const StackedState back = reflect_G(reflect_G(s, ce), ce);
    double worst = 0.0;
    for (Role r : kRoles)
      worst = std::max(worst, (back[r].values() - s[r].values()).norm() / s[r].values().norm());
    lines.push_back({"involution:2G-I", worst < 1e-12, worst, 1e-12});
  }

  const AgentSet agents = build_agents(p, cfg, nullptr, nullptr);
  const long states = cfg.integer("check.states");
  for (Role role : {Role::Data, Role::Image}) {
    const Agent& agent = *agents[role];
    double violations = 0;
    for (long k = 0; k < states; ++k) {
      const AugmentedState x = random_state();
      try {
        const AugmentedState y = agent(x);
        const bool ok = role == Role::Data ? y.image() == x.image() : y.data() == x.data();
        if (!ok) violations += 1;
      } catch (const AgentError&) {
        violations += 1;
      }
    }
    lines.push_back({std::string("slice:") + agent.name(), violations == 0, violations, 0});
  }
  return lines;
}

int cmd_check(const RunConfig& cfg_in, const fs::path& out, std::ostream& log) {
  const RunConfig cfg = prepared(cfg_in);
  const std::vector<CheckLine> lines = run_checks(cfg);
  nlohmann::json j = nlohmann::json::array();
  bool all = true;
  for (const auto& l : lines) {
    char value[32];
    std::snprintf(value, sizeof value, "%.3e", l.value);
    log << (l.pass ? "PASS " : "FAIL ") << l.name << " " << value << "\n";
    j.push_back({{"check", l.name}, {"pass", l.pass}, {"value", l.value}, {"limit", l.limit}});
    all = all && l.pass;
  }
  ensure_dir(out);
  write_text(out / (cfg.str("run.name") + ".check.json"), dump({{"command", "check"}, {"checks", j}}));
  return all ? kExitOk : kExitCheck;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus-equilibrium reconstruction with data and image priors", "dipiir"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> sets;
  std::string seed;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--set", sets, "override one key (key=value); repeatable")->take_all();
  app.add_option("--seed", seed, "noise and check seed (u64)");
  app.add_option("--out", out_dir, "output directory");

  auto* sim = app.add_subcommand("simulate", "write phantom, full data, observation and sampling pattern");
  auto* rec = app.add_subcommand("reconstruct", "run the configured pipeline on simulated data");
  auto* met = app.add_subcommand("metrics", "score a reconstruction tensor against a reference");
  auto* chk = app.add_subcommand("check", "adjoint, involution and slice-discipline diagnostics");
  std::string recon_path, reference_path, report_path;
  met->add_option("--recon", recon_path, "reconstruction tensor")->required();
  met->add_option("--reference", reference_path, "reference tensor")->required();
  met->add_option("--report", report_path, "JSON report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig() : RunConfig::from_file(config_path);
    for (const auto& s : sets) cfg.apply_override(s);
    if (!seed.empty()) cfg.set("seed", seed);
    const fs::path out_path(out_dir);
    if (*sim) {
      cmd_simulate(cfg, out_path, out);
    } else if (*rec) {
      cmd_reconstruct(cfg, out_path, out);
    } else if (*met) {
      const auto j = cmd_metrics(recon_path, reference_path, report_path);
      out << "psnr " << j["metrics"]["psnr"].get<double>() << " dB, ssim " << j["metrics"]["ssim"].get<double>()
          << "\n";
    } else if (*chk) {
      return cmd_check(cfg, out_path, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "dipiir: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeError& e) {
    err << "dipiir: shape error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "dipiir: i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const AgentError& e) {
    err << "dipiir: agent '" << e.agent() << "' failed: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "dipiir: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "dipiir: i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace dipiir::app
