#include "symvqe/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>

#include "symvqe/errors.hpp"

namespace symvqe {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return x;
}

int parse_int32(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(key + ": value out of range");
  return static_cast<int>(x);
}

double parse_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = std::string::npos;
  }
  if (pos != v.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

// Shortest text that parses back to the same double.
std::string fmt_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

const char* mode_name(ProjectorMode m) {
  switch (m) {
    case ProjectorMode::Auto: return "auto";
    case ProjectorMode::Circuit: return "circuit";
    case ProjectorMode::Compiled: return "compiled";
  }
  return "auto";
}

}  // namespace

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = {
      "lx", "ly", "t", "u_hubbard", "labeling",
      "project_spatial", "project_spin", "project_eta", "j_spin", "j_eta", "n_polar_spin",
      "n_polar_eta", "n_azimuth", "irrep", "projector_mode",
      "ansatz", "depth", "init_seed", "init_range",
      "krylov_dim", "s_threshold", "delta", "richardson",
      "optimizer", "learning_rate", "max_iterations", "metric_regularization",
      "n_seeds", "warm_start_path", "parallelism", "max_wall_seconds", "compute_exact", "out_dir"};
  return k;
}

double ExperimentConfig::tau() const {
  if (learning_rate) return *learning_rate;
  return ansatz == AnsatzKind::Hva ? 0.005 : 0.025;
}

ProjectorSpec ExperimentConfig::projector_spec() const {
  ProjectorSpec s;
  s.use_spatial = project_spatial;
  s.use_spin = project_spin;
  s.use_eta = project_eta;
  s.j_spin = j_spin;
  s.j_eta = j_eta;
  s.n_polar_spin = n_polar_spin;
  s.n_polar_eta = n_polar_eta;
  s.n_azimuth = n_azimuth;
  s.irrep = irrep;
  return s;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "lx") lx = parse_int32(key, v);
  else if (key == "ly") ly = parse_int32(key, v);
  else if (key == "t") t = parse_double(key, v);
  else if (key == "u_hubbard") u_hubbard = parse_double(key, v);
  else if (key == "labeling") labeling = parse_labeling(v);
  else if (key == "project_spatial") project_spatial = parse_bool(key, v);
  else if (key == "project_spin") project_spin = parse_bool(key, v);
  else if (key == "project_eta") project_eta = parse_bool(key, v);
  else if (key == "j_spin") j_spin = parse_int32(key, v);
  else if (key == "j_eta") j_eta = parse_int32(key, v);
  else if (key == "n_polar_spin") n_polar_spin = parse_int32(key, v);
  else if (key == "n_polar_eta") n_polar_eta = parse_int32(key, v);
  else if (key == "n_azimuth") n_azimuth = parse_int32(key, v);
  else if (key == "irrep") irrep = v;
  else if (key == "projector_mode") projector_mode = parse_projector_mode(v);
  else if (key == "ansatz") ansatz = parse_ansatz_kind(v);
  else if (key == "depth") depth = parse_int32(key, v);
  else if (key == "init_seed") {
    const long long s = parse_int(key, v);
    if (s < 0) throw ConfigError("init_seed must be non-negative");
    init_seed = static_cast<std::uint64_t>(s);
  } else if (key == "init_range") init_range = parse_double(key, v);
  else if (key == "krylov_dim") krylov_dim = parse_int32(key, v);
  else if (key == "s_threshold") s_threshold = parse_double(key, v);
  else if (key == "delta") delta = parse_double(key, v);
  else if (key == "richardson") richardson = parse_bool(key, v);
  else if (key == "optimizer") optimizer = parse_optimizer_kind(v);
  else if (key == "learning_rate") {
    if (v == "default") learning_rate.reset();
    else learning_rate = parse_double(key, v);
  } else if (key == "max_iterations") max_iterations = parse_int32(key, v);
  else if (key == "metric_regularization") metric_regularization = parse_double(key, v);
  else if (key == "n_seeds") n_seeds = parse_int32(key, v);
  else if (key == "warm_start_path") warm_start_path = v;
  else if (key == "parallelism") parallelism = parse_int32(key, v);
  else if (key == "max_wall_seconds") max_wall_seconds = parse_double(key, v);
  else if (key == "compute_exact") compute_exact = parse_bool(key, v);
  else if (key == "out_dir") out_dir = v;
  else throw ConfigError("unknown config key '" + key + "'");
}

void ExperimentConfig::validate() const {
  if (lx < 1 || ly < 1) throw ConfigError("lx and ly must be positive");
  if (lx * ly * 2 > 24) throw ConfigError("lattice too large: at most 24 qubits");
  if (!(t > 0)) throw ConfigError("t must be positive");
  if (j_spin < 0 || j_eta < 0) throw ConfigError("j_spin and j_eta must be non-negative");
  if (n_polar_spin < 1 || n_polar_eta < 1 || n_azimuth < 1)
    throw ConfigError("quadrature sizes must be positive");
  if (depth < 1) throw ConfigError("depth must be at least 1");
  if (!(init_range >= 0)) throw ConfigError("init_range must be non-negative");
  if (krylov_dim < 1 || krylov_dim > 8) throw ConfigError("krylov_dim must be in 1..8");
  if (!(s_threshold > 0 && s_threshold < 1)) throw ConfigError("s_threshold must be in (0, 1)");
  if (!(delta > 0)) throw ConfigError("delta must be positive");
  if (!(tau() > 0)) throw ConfigError("learning_rate must be positive");
  if (max_iterations < 0) throw ConfigError("max_iterations must be non-negative");
  if (!(metric_regularization >= 0)) throw ConfigError("metric_regularization must be >= 0");
  if (n_seeds < 1) throw ConfigError("n_seeds must be at least 1");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (!(max_wall_seconds >= 0)) throw ConfigError("max_wall_seconds must be >= 0");
  if (irrep != "A1" && irrep != "A2" && irrep != "B1" && irrep != "B2")
    throw ConfigError("irrep must be A1, A2, B1 or B2");
  if (labeling != Labeling::SpinUniform)
    throw ConfigError("experiments run in the spin-uniform labeling only");
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  auto b = [](bool x) { return x ? "true" : "false"; };
  os << "lx = " << lx << "\n"
     << "ly = " << ly << "\n"
     << "t = " << fmt_double(t) << "\n"
     << "u_hubbard = " << fmt_double(u_hubbard) << "\n"
     << "labeling = " << labeling_name(labeling) << "\n"
     << "project_spatial = " << b(project_spatial) << "\n"
     << "project_spin = " << b(project_spin) << "\n"
     << "project_eta = " << b(project_eta) << "\n"
     << "j_spin = " << j_spin << "\n"
     << "j_eta = " << j_eta << "\n"
     << "n_polar_spin = " << n_polar_spin << "\n"
     << "n_polar_eta = " << n_polar_eta << "\n"
     << "n_azimuth = " << n_azimuth << "\n"
     << "irrep = " << irrep << "\n"
     << "projector_mode = " << mode_name(projector_mode) << "\n"
     << "ansatz = " << ansatz_kind_name(ansatz) << "\n"
     << "depth = " << depth << "\n"
     << "init_seed = " << init_seed << "\n"
     << "init_range = " << fmt_double(init_range) << "\n"
     << "krylov_dim = " << krylov_dim << "\n"
     << "s_threshold = " << fmt_double(s_threshold) << "\n"
     << "delta = " << fmt_double(delta) << "\n"
     << "richardson = " << b(richardson) << "\n"
     << "optimizer = " << optimizer_kind_name(optimizer) << "\n"
     << "learning_rate = " << fmt_double(tau()) << "\n"
     << "max_iterations = " << max_iterations << "\n"
     << "metric_regularization = " << fmt_double(metric_regularization) << "\n"
     << "n_seeds = " << n_seeds << "\n"
     << "warm_start_path = " << warm_start_path << "\n"
     << "parallelism = " << parallelism << "\n"
     << "max_wall_seconds = " << fmt_double(max_wall_seconds) << "\n"
     << "compute_exact = " << b(compute_exact) << "\n"
     << "out_dir = " << out_dir << "\n";
  return os.str();
}

void apply_config_text(ExperimentConfig& c, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      c.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c;
  apply_config_text(c, ss.str(), path);
  return c;
}

namespace {

const ExperimentConfig& validated(const ExperimentConfig& c) {
  c.validate();
  return c;
}

}  // namespace

ExperimentContext::ExperimentContext(const ExperimentConfig& c)
    : cfg_(validated(c)),
      lat_(c.lx, c.ly),
      h_(build_hamiltonian(lat_, c.labeling, c.t, c.u_hubbard)),
      space_(lat_.n_qubits(), sector_indices(lat_, c.labeling)),
      eng_(make_trotter_split(lat_, c.labeling, c.t, c.u_hubbard), c.delta, c.richardson) {
  hs_ = std::make_unique<SectorOperator>(SectorOperator::build(h_, space_));
  s2_ = std::make_unique<SectorOperator>(
      SectorOperator::build(build_spin_ops(lat_, c.labeling).square, space_));
  try {
    eta2_ = std::make_unique<SectorOperator>(
        SectorOperator::build(build_eta_ops(lat_, c.labeling).square, space_));
  } catch (const ConfigError&) {
    // eta pairing needs a bipartite lattice; the column then stays zero.
  }
  proj_ = std::make_unique<Projector>(lat_, c.labeling, c.projector_spec());
  sp_ = std::make_unique<SectorProjector>(*proj_, space_, c.projector_mode);
  if (c.compute_exact) {
    const GroundState gs = lanczos_ground_state(h_);
    e_exact_ = gs.energy;
    exact_ = space_.restrict(gs.state);
    scale(exact_, 1.0 / norm2(exact_));
  }
}

Diagnostics ExperimentContext::diagnostics() const {
  Diagnostics d;
  d.s2 = s2_.get();
  d.eta2 = eta2_.get();
  d.exact = e_exact_ ? &exact_ : nullptr;
  return d;
}

AnsatzCircuit ExperimentContext::make_ansatz(int depth) const {
  if (cfg_.ansatz == AnsatzKind::Hva) return build_hva(lat_, cfg_.labeling, depth, cfg_.t, cfg_.u_hubbard);
  return build_efswap_ansatz(lat_, cfg_.labeling, depth);
}

double exact_energy(const ExperimentConfig& c) {
  c.validate();
  const LadderLattice lat(c.lx, c.ly);
  return lanczos_ground_state(build_hamiltonian(lat, c.labeling, c.t, c.u_hubbard)).energy;
}

int CampaignResult::n_failed() const {
  return static_cast<int>(std::count_if(seeds.begin(), seeds.end(),
                                        [](const SeedResult& s) { return !s.ok(); }));
}

std::map<int, std::vector<double>> load_warm_start(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open warm-start file '" + path + "'");
  std::map<int, std::vector<double>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    int seed = 0;
    if (tag != "seed" || !(ls >> seed))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'seed <index> <theta...>'");
    std::vector<double> th;
    std::string tok;
    while (ls >> tok) th.push_back(parse_double("theta", tok));
    out[seed] = std::move(th);
  }
  return out;
}

CampaignResult run_campaign(const ExperimentContext& ctx, const ProgressCallback& progress) {
  const ExperimentConfig& c = ctx.config();
  const AnsatzCircuit circuit = ctx.make_ansatz(c.depth);
  const SectorAnsatz ansatz(circuit, ctx.space());
  const SubspaceEngine engine(ctx.projector(), ctx.h_sector(), ctx.power_engine(), c.krylov_dim);

  std::map<int, std::vector<double>> warm;
  if (!c.warm_start_path.empty()) {
    warm = load_warm_start(c.warm_start_path);
    for (int s = 0; s < c.n_seeds; ++s) {
      const auto it = warm.find(s);
      if (it == warm.end())
        throw ConfigError("warm-start file has no parameters for seed " + std::to_string(s));
      if (static_cast<int>(it->second.size()) != circuit.n_params)
        throw ConfigError("warm-start parameters for seed " + std::to_string(s) + " have length " +
                          std::to_string(it->second.size()) + ", ansatz expects " +
                          std::to_string(circuit.n_params));
    }
  }

  // Seeds first; leftover workers go to the derivative states of each seed.
  const int seed_workers = std::min(c.parallelism, c.n_seeds);
  const int inner = std::max(1, c.parallelism / std::max(1, seed_workers));

  CampaignResult res;
  res.config = c;
  res.e_exact = ctx.exact_energy();
  res.seeds.resize(c.n_seeds);
  std::mutex progress_mutex;
  parallel_for(c.n_seeds, seed_workers, [&](std::size_t i) {
    SeedResult& sr = res.seeds[i];
    sr.seed = static_cast<int>(i);
    sr.theta0 = warm.empty() ? random_parameters(circuit.n_params, c.init_seed + i, c.init_range)
                             : warm.at(static_cast<int>(i));
    try {
      Objective obj(ansatz, engine, ctx.diagnostics(), inner);
      obj.set_s_threshold(c.s_threshold);
      OptimizerOptions opt;
      opt.kind = c.optimizer;
      opt.tau = c.tau();
      opt.max_iterations = c.max_iterations;
      opt.reg_factor = c.metric_regularization;
      opt.max_wall_seconds = c.max_wall_seconds;
      IterationCallback cb;
      if (progress)
        cb = [&](const IterationRecord& r) {
          std::lock_guard<std::mutex> lock(progress_mutex);
          progress(sr.seed, r);
        };
      OptimizerResult o = optimize(obj, sr.theta0, opt, cb);
      sr.theta = std::move(o.theta);
      sr.history = std::move(o.history);
      sr.truncated = o.truncated;
    } catch (const std::exception& e) {
      // One seed's failure never touches the others.
      sr.error = e.what();
    }
  });

  if (res.n_failed() == c.n_seeds) throw NumericalError("every seed failed: " + res.seeds[0].error);

  // Seed average per x, in seed order.
  std::size_t longest = 0;
  for (const auto& s : res.seeds)
    if (s.ok()) longest = std::max(longest, s.history.size());
  for (std::size_t x = 0; x < longest; ++x) {
    IterationRecord m;
    m.x = static_cast<int>(x);
    int n = 0;
    for (const auto& s : res.seeds) {
      if (!s.ok() || x >= s.history.size()) continue;
      const IterationRecord& r = s.history[x];
      m.e0 += r.e0;
      m.fidelity += r.fidelity;
      m.s2 += r.s2;
      m.eta2 += r.eta2;
      m.grad_norm += r.grad_norm;
      m.wall_ms += r.wall_ms;
      ++n;
    }
    m.e0 /= n;
    m.fidelity /= n;
    m.s2 /= n;
    m.eta2 /= n;
    m.grad_norm /= n;
    m.wall_ms /= n;
    res.mean.push_back(m);
  }

  const bool by_fidelity = res.e_exact.has_value();
  for (const auto& s : res.seeds) {
    if (!s.ok() || s.history.empty()) continue;
    if (res.best_seed < 0) {
      res.best_seed = s.seed;
      continue;
    }
    const IterationRecord& a = s.history.back();
    const IterationRecord& b = res.seeds[res.best_seed].history.back();
    if (by_fidelity ? a.fidelity > b.fidelity : a.e0 < b.e0) res.best_seed = s.seed;
  }
  return res;
}

const char* const kCsvHeader = "x,E0,fidelity,S2,eta2,grad_norm,wall_time_ms";

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_trajectory_csv(const std::vector<IterationRecord>& h, const std::string& path) {
  std::ofstream out = open_out(path);
  out << kCsvHeader << "\n";
  for (const auto& r : h)
    out << r.x << "," << r.e0 << "," << r.fidelity << "," << r.s2 << "," << r.eta2 << ","
        << r.grad_norm << "," << r.wall_ms << "\n";
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

std::vector<IterationRecord> read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader)
    throw std::runtime_error(path + ": unexpected header");
  std::vector<IterationRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    std::string f[7];
    for (auto& s : f)
      if (!std::getline(ls, s, ',')) throw std::runtime_error(path + ": short row");
    IterationRecord r;
    r.x = parse_int32("x", trim(f[0]));
    r.e0 = parse_double("E0", trim(f[1]));
    r.fidelity = parse_double("fidelity", trim(f[2]));
    r.s2 = parse_double("S2", trim(f[3]));
    r.eta2 = parse_double("eta2", trim(f[4]));
    r.grad_norm = parse_double("grad_norm", trim(f[5]));
    r.wall_ms = parse_double("wall_time_ms", trim(f[6]));
    out.push_back(r);
  }
  return out;
}

void emit_results(const CampaignResult& r, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir + "': " + ec.message());
  const std::filesystem::path d(dir);
  for (const auto& s : r.seeds)
    if (s.ok()) write_trajectory_csv(s.history, (d / ("seed_" + std::to_string(s.seed) + ".csv")).string());
  write_trajectory_csv(r.mean, (d / "mean.csv").string());

  {
    std::ofstream out = open_out((d / "optima.txt").string());
    out << "# seed index followed by the last recorded parameters\n";
    for (const auto& s : r.seeds) {
      if (!s.ok()) continue;
      out << "seed " << s.seed;
      for (double x : s.theta) out << " " << x;
      out << "\n";
    }
  }

  std::ofstream out = open_out((d / "summary.txt").string());
  out << "# campaign summary\n";
  if (r.e_exact) out << "e_exact = " << *r.e_exact << "\n";
  out << "n_seeds = " << r.seeds.size() << "\n"
      << "n_failed = " << r.n_failed() << "\n"
      << "best_seed = " << r.best_seed << "\n";
  if (r.best_seed >= 0) {
    const IterationRecord& b = r.seeds[r.best_seed].history.back();
    out << "best_final_e0 = " << b.e0 << "\n"
        << "best_final_fidelity = " << b.fidelity << "\n";
  }
  if (!r.mean.empty()) {
    out << "mean_final_e0 = " << r.mean.back().e0 << "\n"
        << "mean_final_fidelity = " << r.mean.back().fidelity << "\n";
  }
  for (const auto& s : r.seeds) {
    const std::string p = "seed." + std::to_string(s.seed) + ".";
    if (!s.ok()) {
      out << p << "status = failed: " << s.error << "\n";
      continue;
    }
    out << p << "status = " << (s.truncated ? "truncated" : "ok") << "\n";
    const IterationRecord& f = s.history.back();
    out << p << "iterations = " << f.x << "\n"
        << p << "final_e0 = " << f.e0 << "\n"
        << p << "final_fidelity = " << f.fidelity << "\n"
        << p << "gd_fallbacks = "
        << std::count_if(s.history.begin(), s.history.end(),
                         [](const IterationRecord& x) { return x.gd_fallback; })
        << "\n";
  }
  out << "# resolved config\n";
  std::istringstream cfg(r.config.to_text());
  std::string line;
  while (std::getline(cfg, line)) out << "config." << line << "\n";
  if (!out) throw std::runtime_error("error writing summary in '" + dir + "'");
}

std::vector<VarianceResult> run_variance_diagnostics(const ExperimentContext& ctx,
                                                     const std::vector<int>& depths, int draws) {
  const ExperimentConfig& c = ctx.config();
  if (depths.empty()) throw ConfigError("variance needs at least one depth");
  std::vector<VarianceResult> rows;
  const SubspaceEngine engine(ctx.projector(), ctx.h_sector(), ctx.power_engine(), c.krylov_dim);
  for (int depth : depths) {
    const AnsatzCircuit circuit = ctx.make_ansatz(depth);
    const SectorAnsatz ansatz(circuit, ctx.space());
    Objective obj(ansatz, engine, Diagnostics{}, c.parallelism);
    obj.set_s_threshold(c.s_threshold);
    VarianceResult v = gradient_variance(obj, draws, c.init_seed, c.metric_regularization);
    v.depth = depth;
    rows.push_back(v);
  }
  return rows;
}

void write_variance_csv(const std::vector<VarianceResult>& rows, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "depth,draws,sigma2_ng,sigma2_g,stderr_ng,stderr_g,mean_ng,mean_g\n";
  for (const auto& r : rows)
    out << r.depth << "," << r.draws << "," << r.sigma2_ng << "," << r.sigma2_g << ","
        << r.stderr_ng << "," << r.stderr_g << "," << r.mean_ng << "," << r.mean_g << "\n";
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

}  // namespace symvqe
