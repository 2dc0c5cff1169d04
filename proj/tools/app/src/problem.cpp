#include "dipiir_app/problem.hpp"

#include "dipiir/completion.hpp"
#include "dipiir/convolution.hpp"
#include "dipiir/error.hpp"
#include "dipiir/metrics.hpp"
#include "dipiir/plugin.hpp"
#include "dipiir/simdata.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace dipiir::app {

namespace {

std::uint64_t seed_of(const RunConfig& cfg) {
  const std::string& s = cfg.str("seed");
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key 'seed': '" + s + "' is not an unsigned integer");
  }
}

Index positive(const RunConfig& cfg, const std::string& key) {
  const long v = cfg.integer(key);
  if (v <= 0) throw ConfigError("config key '" + key + "' must be positive");
  return static_cast<Index>(v);
}

Tensor tensor(std::vector<std::uint64_t> dims, Vec values) {
  Tensor t;
  t.dims = std::move(dims);
  t.values = std::move(values);
  return t;
}

std::uint64_t u(Index i) { return static_cast<std::uint64_t>(i); }

Index side_of(const Tensor& phantom) {
  if (phantom.dims.size() != 2 || phantom.dims[0] != phantom.dims[1])
    throw ShapeError("phantom tensor must be square 2D");
  return static_cast<Index>(phantom.dims[0]);
}

Vec concat(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size());
  out << a, b;
  return out;
}

// Zero every column of a two-channel k-space grid that the mask skips.
Vec apply_column_mask(const Vec& full, const KSpaceMask& mask) {
  return scatter_columns(gather_columns(full, mask.cols, mask.sampled), mask.cols, mask.sampled);
}

Vec upsample_replicate(const Vec& low, Index low_side, Index factor) {
  const Index n = low_side * factor;
  Vec out(n * n);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) out(r * n + c) = low((r / factor) * low_side + c / factor);
  return out;
}

void require_dims(const Tensor& t, const std::vector<std::uint64_t>& dims, const std::string& what) {
  if (t.dims != dims) throw ShapeError(what + " tensor has unexpected shape");
}

}  // namespace

Simulation simulate(const RunConfig& cfg) {
  cfg.validate();
  const std::string& problem = cfg.str("problem");
  const double sigma = cfg.num("noise.sigma");
  if (sigma < 0) throw ConfigError("config key 'noise.sigma' must be non-negative");
  const std::uint64_t seed = seed_of(cfg);

  Simulation sim;
  sim.problem = problem;
  if (problem == "ct-limited") {
    const Index n = positive(cfg, "ct.side");
    const Index total = positive(cfg, "ct.num_angles");
    const double keep = cfg.num("ct.keep_fraction");
    if (!(keep > 0.0 && keep < 1.0)) throw ConfigError("config key 'ct.keep_fraction' must lie in (0, 1)");
    const Phantom ph = shepp_logan(n);
    const CTGeometry geom = CTGeometry::uniform(n, total);
    const AngleSplit split = make_limited_angle_set(total, keep);
    if (split.observed.empty()) throw ConfigError("config key 'ct.keep_fraction' leaves no observed angle");
    const Vec full = radon_apply(ph.values, geom);
    const Vec noisy = add_gaussian_noise(full, sigma, seed);
    const Index nd = geom.num_detectors;
    const Index m = static_cast<Index>(split.observed.size());
    Vec pattern(2 * total);
    for (Index a = 0; a < total; ++a) {
      pattern(2 * a) = geom.angles[static_cast<std::size_t>(a)];
      pattern(2 * a + 1) = a < m ? 1.0 : 0.0;
    }
    sim.phantom = tensor({u(n), u(n)}, ph.values);
    sim.full = tensor({u(total), u(nd)}, full);
    sim.observed = tensor({u(m), u(nd)}, noisy.head(m * nd));
    sim.pattern = tensor({u(total), 2}, pattern);
  } else if (problem == "mri-accel") {
    const Index n = positive(cfg, "mri.side");
    const KSpaceMask mask = make_kspace_mask(n, positive(cfg, "mri.accel"), cfg.num("mri.acs_fraction"));
    const Phantom ph = shepp_logan(n);
    const Vec full = dft2_apply(concat(ph.values, Vec::Zero(n * n)));
    const Vec noisy = add_gaussian_noise(full, sigma, seed);
    Vec pattern = Vec::Zero(n);
    for (Index c : mask.sampled) pattern(c) = 1.0;
    for (Index c = mask.acs_begin; c < mask.acs_end; ++c) pattern(c) = 2.0;
    sim.phantom = tensor({u(n), u(n)}, ph.values);
    sim.full = tensor({2, u(n), u(n)}, full);
    sim.observed = tensor({2, u(n), u(n)}, apply_column_mask(noisy, mask));
    sim.pattern = tensor({u(n)}, pattern);
  } else {
    const Index n = positive(cfg, "restore.side");
    const Phantom ph = shepp_logan(n);
    const LinearOp blur = make_blur_op(gaussian_kernel(cfg.num("restore.blur_sigma")), n);
    const Vec clean = blur.apply(ph.values);
    sim.phantom = tensor({u(n), u(n)}, ph.values);
    sim.full = tensor({u(n), u(n)}, clean);
    if (problem == "deblur") {
      sim.observed = tensor({u(n), u(n)}, add_gaussian_noise(clean, sigma, seed));
    } else {
      const Index f = positive(cfg, "restore.factor");
      const LinearOp sub = make_subsample_op(f, n);
      sim.observed = tensor({u(n / f), u(n / f)}, add_gaussian_noise(sub.apply(clean), sigma, seed));
    }
  }
  return sim;
}

Problem build_problem(const RunConfig& cfg, const Simulation& sim) {
  cfg.validate();
  const std::string& problem = cfg.str("problem");
  if (sim.problem != problem)
    throw ConfigError("simulated data are for problem '" + sim.problem + "', config asks for '" + problem + "'");
  const Index n = side_of(sim.phantom);

  Problem p;
  p.kind = problem;
  p.truth = sim.phantom.values;
  p.truth_grid = Grid{n, n, 1};
  p.image_grid = Grid{n, n, 1};
  p.image_dims = {u(n), u(n)};
  p.evaluate = [](const Vec& v) { return v; };

  if (problem == "ct-limited") {
    if (!sim.pattern) throw ConfigError("ct-limited needs the angle-set tensor");
    const Tensor& pat = *sim.pattern;
    if (pat.dims.size() != 2 || pat.dims[1] != 2) throw ShapeError("angle-set tensor must be [angles, 2]");
    const Index total = static_cast<Index>(pat.dims[0]);
    CTGeometry full = CTGeometry::uniform(n, total);
    std::vector<Index> obs;
    std::vector<Index> miss;
    for (Index a = 0; a < total; ++a) {
      full.angles[static_cast<std::size_t>(a)] = pat.values(2 * a);
      (pat.values(2 * a + 1) != 0.0 ? obs : miss).push_back(a);
    }
    const Index m = static_cast<Index>(obs.size());
    for (Index i = 0; i < m; ++i)
      if (obs[static_cast<std::size_t>(i)] != i)
        throw ConfigError("observed angles must form a prefix of the angle set");
    if (m == 0 || miss.empty()) throw ConfigError("limited-angle problem needs observed and missing angles");
    full.validate();
    const Index nd = full.num_detectors;
    require_dims(sim.observed, {u(m), u(nd)}, "observed sinogram");

    p.geom_full = full;
    p.geom_obs = full.subset(obs);
    p.geom_miss = full.subset(miss);
    const BlockIncompleteOp op = make_incomplete_op(make_radon_op(*p.geom_obs), make_radon_op(*p.geom_miss));
    const Vec y_obs = sim.observed.values;
    p.sensor = make_incomplete_sensor_model(y_obs, op);
    p.a_unobs = op.a_unobs;
    p.v0 = sinogram_complete(y_obs, full, m);
    p.data_grid = Grid{total, nd, 1};
    p.data_context = concat(y_obs, p.v0);
    for (Index i = m * nd; i < total * nd; ++i) p.missing_index.push_back(i);
    p.data_dims = {u(total - m), u(nd)};
    p.invert = [y_obs, full](const Vec& d) { return fbp(concat(y_obs, d), full); };
  } else if (problem == "mri-accel") {
    if (!sim.pattern) throw ConfigError("mri-accel needs the k-space mask tensor");
    const Tensor& pat = *sim.pattern;
    require_dims(pat, {u(n)}, "k-space mask");
    KSpaceMask mask;
    mask.rows = n;
    mask.cols = n;
    mask.acs_begin = n;
    mask.acs_end = 0;
    for (Index c = 0; c < n; ++c) {
      const double f = pat.values(c);
      if (f != 0.0 && f != 1.0 && f != 2.0) throw ShapeError("k-space mask entries must be 0, 1 or 2");
      if (f != 0.0) mask.sampled.push_back(c);
      if (f == 2.0) {
        mask.acs_begin = std::min(mask.acs_begin, c);
        mask.acs_end = c + 1;
      }
    }
    if (mask.acs_end == 0) mask.acs_begin = 0;
    mask.validate();
    require_dims(sim.observed, {2, u(n), u(n)}, "observed k-space");

    const std::vector<Index> missing = mask.missing();
    if (missing.empty()) throw ConfigError("k-space mask samples every column; nothing to reconstruct");
    p.mask = mask;
    p.image_grid = Grid{n, n, 2};
    p.image_dims = {2, u(n), u(n)};
    const Vec observed = apply_column_mask(sim.observed.values, mask);
    const BlockIncompleteOp op = make_incomplete_op(make_dft2_op(n, &mask, KSpacePart::Observed),
                                                    make_dft2_op(n, &mask, KSpacePart::Unobserved));
    p.sensor = make_incomplete_sensor_model(gather_columns(observed, n, mask.sampled), op);
    p.a_unobs = op.a_unobs;
    p.v0 = kspace_complete(observed, mask);
    p.data_grid = Grid{n, n, 2};
    p.data_context = observed;
    for (Index ch = 0; ch < 2; ++ch)
      for (Index r = 0; r < n; ++r)
        for (Index c : missing) p.missing_index.push_back(ch * n * n + r * n + c);
    p.data_dims = {2, u(n), u(missing.size())};
    p.invert = [observed, n, missing](const Vec& d) {
      return dft2_adjoint(observed + scatter_columns(d, n, missing));
    };
    p.evaluate = [](const Vec& v) { return magnitude(v); };
  } else {
    const LinearOp blur = make_blur_op(gaussian_kernel(cfg.num("restore.blur_sigma")), n);
    const double pre = cfg.num("restore.prefilter_sigma");
    const Grid grid{n, n, 1};
    if (problem == "deblur") {
      require_dims(sim.observed, {u(n), u(n)}, "observed image");
      p.sensor = make_deblur_sensor_model(sim.observed.values, blur);
      p.v0 = gaussian_smooth(sim.observed.values, grid, pre, pre);
    } else {
      const Index f = positive(cfg, "restore.factor");
      const LinearOp sub = make_subsample_op(f, n);
      require_dims(sim.observed, {u(n / f), u(n / f)}, "observed low-resolution image");
      p.sensor = make_superres_sensor_model(sim.observed.values, blur, sub);
      p.v0 = gaussian_smooth(upsample_replicate(sim.observed.values, n / f, f), grid, pre, pre);
    }
    p.a_unobs = blur;
    p.data_grid = grid;
    p.data_context = Vec::Zero(n * n);
    for (Index i = 0; i < n * n; ++i) p.missing_index.push_back(i);
    p.data_dims = {u(n), u(n)};
    // The pseudo-data slice is itself an image estimate.
    p.invert = [](const Vec& d) { return d; };
  }
  p.sensor.validate();
  return p;
}

CEParams ce_params(const RunConfig& cfg) {
  CEParams c;
  c.mu.sensor = cfg.num("ce.mu_s");
  c.mu.data = cfg.num("ce.mu_d");
  c.mu.image = cfg.num("ce.mu_i");
  c.rho = cfg.num("ce.rho");
  const long iters = cfg.integer("ce.max_iters");
  if (iters < 1) throw ConfigError("config key 'ce.max_iters' must be at least 1");
  c.max_ce_iters = static_cast<int>(iters);
  c.residual_tol = cfg.num("ce.residual_tol");
  c.lambda_s = cfg.num("ce.lambda_s");
  c.lambda_d = cfg.num("ce.lambda_d");
  c.lambda_i = cfg.num("ce.lambda_i");
  c.nonneg_image = cfg.flag("ce.nonneg_image");
  c.nonneg_data = cfg.flag("ce.nonneg_data");
  c.concurrent_agents = cfg.flag("ce.concurrent");
  c.record_gaps = cfg.flag("ce.record_gaps");
  if (cfg.str("pipeline") == "pnp-mbir" && c.mu.data != 0.0)
    throw ConfigError("config key 'ce.mu_d' must be 0 for pipeline pnp-mbir");
  CEConfig{c};  // validates
  return c;
}

namespace {

PluginSpec plugin_spec(const RunConfig& cfg, const std::string& which, Index len,
                       std::vector<std::uint64_t> shape) {
  PluginSpec s;
  s.executable = cfg.str("plugin." + which + ".exec");
  if (s.executable.empty())
    throw ConfigError("config key 'plugin." + which + ".exec' must name an executable");
  s.args = cfg.list("plugin." + which + ".args");
  s.timeout_s = cfg.num("plugin." + which + ".timeout");
  if (!(s.timeout_s > 0)) throw ConfigError("config key 'plugin." + which + ".timeout' must be positive");
  s.expected_len = len;
  s.shape = std::move(shape);
  return s;
}

Denoiser data_denoiser(const Problem& p, const RunConfig& cfg) {
  const std::string& kind = cfg.str("data_prior");
  const double sr = cfg.num("data_prior.sigma_rows");
  const double sc = cfg.num("data_prior.sigma_cols");
  if (sr < 0 || sc < 0) throw ConfigError("data_prior sigmas must be non-negative");
  if (kind == "identity") return make_identity_denoiser(Domain::Data);
  if (kind == "plugin")
    return make_plugin_denoiser(plugin_spec(cfg, "data", p.data_len(), p.data_dims), Domain::Data);
  if (kind == "smoother")
    return make_context_smoother(p.data_context, p.missing_index, p.data_grid, sr, sc);
  // gaussian: smooth the data slice on its own grid
  Grid g;
  if (p.data_dims.size() == 3)
    g = Grid{static_cast<Index>(p.data_dims[1]), static_cast<Index>(p.data_dims[2]), static_cast<Index>(p.data_dims[0])};
  else
    g = Grid{static_cast<Index>(p.data_dims[0]), static_cast<Index>(p.data_dims[1]), 1};
  return Denoiser("gaussian", Domain::Data, [g, sr, sc](const Vec& v) { return gaussian_smooth(v, g, sr, sc); },
                  {{"sigma_rows", sr}, {"sigma_cols", sc}});
}

}  // namespace

AgentSet build_agents(const Problem& p, const RunConfig& cfg, const std::shared_ptr<std::atomic<long>>& data_calls,
                      const std::shared_ptr<TvStats>& tv_stats) {
  const CEParams c = ce_params(cfg);
  const std::string& pipeline = cfg.str("pipeline");
  const NonnegFlags nonneg{c.nonneg_image, c.nonneg_data};

  CgOptions cg;
  cg.max_iters = static_cast<int>(cfg.integer("cg.max_iters"));
  cg.rel_tol = cfg.num("cg.rel_tol");
  if (cg.max_iters < 1) throw ConfigError("config key 'cg.max_iters' must be at least 1");

  AgentSet set;
  set.sensor = make_sensor_agent(p.sensor, c.lambda_s, cg, nonneg);

  Agent data = pipeline == "dipiir-explicit" ? make_explicit_data_agent(p.v0, c.lambda_d, c.nonneg_data)
                                             : make_implicit_data_agent(data_denoiser(p, cfg));
  set.data = Agent(data.name(), data.touches(), [data, data_calls](const AugmentedState& x) {
    if (data_calls) data_calls->fetch_add(1);
    return data(x);
  });

  const std::string& prior = cfg.str("image_prior");
  if (prior == "tv") {
    TvOptions tv;
    tv.max_iters = static_cast<int>(cfg.integer("tv.max_iters"));
    tv.tol = cfg.num("tv.tol");
    set.image = make_tv_image_agent(c.lambda_i, p.image_grid, tv, c.nonneg_image, tv_stats);
  } else if (prior == "gaussian") {
    set.image = make_image_agent(make_gaussian_denoiser(p.image_grid, cfg.num("image_prior.sigma"), Domain::Image));
  } else if (prior == "plugin") {
    set.image = make_image_agent(make_plugin_denoiser(plugin_spec(cfg, "image", p.image_len(), p.image_dims), Domain::Image));
  } else {
    set.image = make_image_agent(make_identity_denoiser(Domain::Image));
  }
  return set;
}

StackedState initial_state(const Problem& p, const RunConfig& cfg) {
  const std::string& init = cfg.str("init");
  Vec image;
  if (init == "zeros")
    image = Vec::Zero(p.image_len());
  else if (init == "zero-padded")
    image = p.invert(Vec::Zero(p.data_len()));
  else
    image = p.invert(p.v0);
  const Vec data = p.a_unobs.apply(image);
  return StackedState::replicate(AugmentedState(image, data));
}

PipelineResult run_pipeline(const Problem& p, const RunConfig& cfg) {
  const std::string& pipeline = cfg.str("pipeline");
  PipelineResult r;
  if (pipeline == "fbp" || pipeline == "ift") {
    r.image = p.invert(Vec::Zero(p.data_len()));
    return r;
  }
  if (pipeline == "dc-fbp" || pipeline == "dc-ift") {
    r.image = p.invert(p.v0);
    r.data = p.v0;
    return r;
  }

  const CEConfig ce(ce_params(cfg));
  auto calls = std::make_shared<std::atomic<long>>(0);
  auto tv_stats = std::make_shared<TvStats>();
  const AgentSet agents = build_agents(p, cfg, calls, tv_stats);
  const double peak = p.truth.maxCoeff() - p.truth.minCoeff();
  const TraceScorer scorer = [&p, peak](const AugmentedState& x) {
    return psnr(p.evaluate(Vec(x.image())), p.truth, peak);
  };
  const CEResult res = run_dipiir(initial_state(p, cfg), agents, ce, scorer);
  r.image = res.solution.image();
  r.data = res.solution.data();
  r.trace = res.trace;
  r.data_agent_calls = calls->load();
  r.tv_unconverged = tv_stats->not_converged.load();
  if (pipeline == "pnp-mbir")
    r.notes.push_back(
        "pnp-mbir runs consensus equilibrium with the data-prior weight fixed at 0: a two-agent "
        "(sensor + image prior) plug-and-play reconstruction rather than a separate ADMM solver");
  return r;
}

}  // namespace dipiir::app
