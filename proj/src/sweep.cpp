#include "sshwg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "sshwg/errors.hpp"
#include "sshwg/scattering.hpp"
#include "sshwg/spectral.hpp"
#include "sshwg/version.hpp"

namespace sshwg {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SSHWG_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(std::min(hw, 16u)) : 1;
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Spec validation and canonical form
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> known_axes = {"d",      "j0",         "phi",
                                             "n_atoms", "gamma0",    "delta_omega"};

bool known_axis(const std::string& name) {
  return std::find(known_axes.begin(), known_axes.end(), name) != known_axes.end();
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  if (disorder) disorder->validate();
  std::vector<std::string> seen;
  for (const auto& axis : axes) {
    if (!known_axis(axis.name))
      throw std::invalid_argument("SweepSpec: unknown axis '" + axis.name + "'");
    if (std::find(seen.begin(), seen.end(), axis.name) != seen.end())
      throw std::invalid_argument("SweepSpec: duplicate axis '" + axis.name + "'");
    if (axis.values.empty())
      throw std::invalid_argument("SweepSpec: empty axis '" + axis.name + "'");
    if (axis.name == "n_atoms") {
      for (double v : axis.values) {
        const int n = static_cast<int>(v);
        if (n != v || n < 1 || n % 2 == 0)
          throw std::invalid_argument("SweepSpec: n_atoms values must be odd integers");
      }
    }
    seen.push_back(axis.name);
  }
  for (const auto& obs : observables)
    if (obs != "amplitudes" && obs != "delta_R" && obs != "beta")
      throw std::invalid_argument("SweepSpec: unknown observable '" + obs + "'");
}

std::string SweepSpec::canonical_text() const {
  std::ostringstream os;
  os << "n_atoms=" << base.n_atoms << "\nj0=" << fmt_g17(base.j0)
     << "\nphi=" << fmt_g17(base.phi) << "\nspacing=" << fmt_g17(base.spacing)
     << "\ngamma0=" << fmt_g17(base.gamma0) << "\ndelta_omega="
     << (detuning_mode == DetuningMode::edge ? "edge" : fmt_g17(detuning))
     << "\n";
  os << "observables=";
  for (std::size_t i = 0; i < observables.size(); ++i)
    os << (i ? "," : "") << observables[i];
  os << "\n";
  for (const auto& axis : axes) {
    os << "axis." << axis.name << "=";
    for (std::size_t i = 0; i < axis.values.size(); ++i)
      os << (i ? "," : "") << fmt_g17(axis.values[i]);
    os << "\n";
  }
  if (disorder) {
    os << "disorder.coupling_amplitude=" << fmt_g17(disorder->coupling_amplitude)
       << "\ndisorder.position_amplitude=" << fmt_g17(disorder->position_amplitude)
       << "\ndisorder.seed=" << disorder->seed
       << "\ndisorder.n_samples=" << disorder->n_samples << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Point evaluation
// ---------------------------------------------------------------------------

namespace {

struct PointTask {
  SystemParams params;
  double detuning = 0.0;
  DetuningMode detuning_mode = DetuningMode::fixed;
  bool want_delta_r = false;
  bool want_beta = false;
  std::optional<DisorderSpec> disorder;
};

struct DirValues {
  double re_t = 0, im_t = 0, re_r = 0, im_r = 0;
  double transmission = 0, reflection = 0, absorption = 0;
};

struct PointRows {
  double delta_omega = 0;  // evaluation detuning (ensemble mean)
  DirValues dir[2];        // left, right
  double delta_r = 0;
  double beta = 0;
  std::string error;
};

PointRows evaluate_point(const PointTask& task) {
  PointRows out;
  const DisorderSpec disorder = task.disorder.value_or(DisorderSpec{});
  const int n_samples = task.disorder ? disorder.n_samples : 1;

  const bool need_modes = task.detuning_mode == DetuningMode::edge ||
                          task.want_delta_r || task.want_beta;
  int ok_samples = 0;

  try {
    for (int sample = 0; sample < n_samples; ++sample) {
      const Geometry geom = build_geometry(task.params, disorder, sample);
      const EffectiveHamiltonian h =
          build_effective_hamiltonian(geom, task.params.gamma0);

      int edge = -1;
      ModeSet modes;
      if (need_modes) {
        modes = decompose(h);
        try {
          edge = identify_edge_mode(modes, task.params);
          modes.edge_index = edge;
        } catch (const AmbiguousEdge&) {
          if (out.error.empty())
            out.error = "ambiguous_edge;evaluated_at_delta_omega=0";
        }
      }

      double dw = task.detuning;
      if (task.detuning_mode == DetuningMode::edge)
        dw = edge >= 0 ? modes.delta(edge) : 0.0;
      out.delta_omega += dw;

      const ScatteringRecord recs[2] = {
          amplitudes_direct(h, geom, dw, Direction::left_incident),
          amplitudes_direct(h, geom, dw, Direction::right_incident)};
      for (int k = 0; k < 2; ++k) {
        out.dir[k].re_t += recs[k].t.real();
        out.dir[k].im_t += recs[k].t.imag();
        out.dir[k].re_r += recs[k].r.real();
        out.dir[k].im_r += recs[k].r.imag();
        out.dir[k].transmission += recs[k].transmission;
        out.dir[k].reflection += recs[k].reflection;
        out.dir[k].absorption += recs[k].absorption;
      }
      if (task.want_delta_r)
        out.delta_r += std::abs(recs[0].reflection - recs[1].reflection);
      if (task.want_beta) {
        if (edge >= 0)
          out.beta += beta_factor(modes);
        else if (out.error.empty())
          out.error = "ambiguous_edge;beta_undefined";
      }
      ++ok_samples;
    }
  } catch (const std::exception& ex) {
    out.error = ex.what();
  }

  if (ok_samples == 0) {
    const double nan = std::nan("");
    out.delta_omega = nan;
    for (auto& d : out.dir)
      d = {nan, nan, nan, nan, nan, nan, nan};
    out.delta_r = nan;
    out.beta = nan;
  } else {
    const double inv = 1.0 / ok_samples;
    out.delta_omega *= inv;
    for (auto& d : out.dir) {
      d.re_t *= inv; d.im_t *= inv; d.re_r *= inv; d.im_r *= inv;
      d.transmission *= inv; d.reflection *= inv; d.absorption *= inv;
    }
    out.delta_r *= inv;
    out.beta *= inv;
  }
  return out;
}

std::string csv_escape(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sweep driver
// ---------------------------------------------------------------------------

RunManifest run_sweep(const SweepSpec& spec, const std::string& csv_path,
                      int workers) {
  spec.validate();

  RunManifest manifest;
  manifest.engine_version = engine_version;
  manifest.config_hash = fnv1a_hex(spec.canonical_text());
  manifest.seed = spec.disorder ? spec.disorder->seed : 0;
  manifest.started_at = iso_timestamp_now();

  // Axis-major grid: first axis slowest, last fastest.
  long total = 1;
  for (const auto& axis : spec.axes) total *= static_cast<long>(axis.values.size());
  if (total <= 0) throw std::invalid_argument("run_sweep: empty grid");

  const bool want_delta_r =
      std::find(spec.observables.begin(), spec.observables.end(), "delta_R") !=
      spec.observables.end();
  const bool want_beta =
      std::find(spec.observables.begin(), spec.observables.end(), "beta") !=
      spec.observables.end();

  auto task_for = [&](long index) {
    PointTask task;
    task.params = spec.base;
    task.detuning = spec.detuning;
    task.detuning_mode = spec.detuning_mode;
    task.want_delta_r = want_delta_r;
    task.want_beta = want_beta;
    task.disorder = spec.disorder;
    long rem = index;
    for (long a = static_cast<long>(spec.axes.size()) - 1; a >= 0; --a) {
      const auto& axis = spec.axes[a];
      const double v = axis.values[rem % axis.values.size()];
      rem /= static_cast<long>(axis.values.size());
      if (axis.name == "d") task.params.spacing = v;
      else if (axis.name == "j0") task.params.j0 = v;
      else if (axis.name == "phi") task.params.phi = v;
      else if (axis.name == "n_atoms") task.params.n_atoms = static_cast<int>(v);
      else if (axis.name == "gamma0") task.params.gamma0 = v;
      else if (axis.name == "delta_omega") {
        task.detuning = v;
        task.detuning_mode = DetuningMode::fixed;
      }
    }
    return task;
  };

  std::vector<std::string> blocks(total);
  parallel_for(static_cast<int>(total), workers, [&](int index) {
    const PointTask task = task_for(index);
    const PointRows rows = evaluate_point(task);
    std::ostringstream os;
    for (int k = 0; k < 2; ++k) {
      os << task.params.n_atoms << ',' << fmt_g17(task.params.j0) << ','
         << fmt_g17(task.params.phi) << ',' << fmt_g17(task.params.spacing)
         << ',' << fmt_g17(task.params.gamma0) << ','
         << fmt_g17(rows.delta_omega) << ','
         << (k == 0 ? "left" : "right") << ',' << fmt_g17(rows.dir[k].re_t)
         << ',' << fmt_g17(rows.dir[k].im_t) << ',' << fmt_g17(rows.dir[k].re_r)
         << ',' << fmt_g17(rows.dir[k].im_r) << ','
         << fmt_g17(rows.dir[k].transmission) << ','
         << fmt_g17(rows.dir[k].reflection) << ','
         << fmt_g17(rows.dir[k].absorption);
      if (want_delta_r) os << ',' << fmt_g17(rows.delta_r);
      if (want_beta) os << ',' << fmt_g17(rows.beta);
      os << ',' << csv_escape(rows.error) << '\n';
    }
    blocks[index] = os.str();
  });

  std::ofstream out(csv_path);
  if (!out) throw Error("run_sweep: cannot open " + csv_path);
  out << "N,J0,phi,d,gamma0,delta_omega,direction,ReT,ImT,ReR_amp,ImR_amp,T,R,eta";
  if (want_delta_r) out << ",delta_R";
  if (want_beta) out << ",beta";
  out << ",error\n";
  for (const auto& block : blocks) out << block;
  out.close();

  manifest.finished_at = iso_timestamp_now();
  manifest.outputs.push_back(csv_path);
  return manifest;
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Plain float, optionally with a trailing "pi" multiplier ("0.3pi").
double parse_value(const std::string& text) {
  const std::string t = trim(text);
  if (t.size() > 2 && t.substr(t.size() - 2) == "pi")
    return std::stod(t.substr(0, t.size() - 2)) * pi;
  if (t == "pi") return pi;
  return std::stod(t);
}

// "a:b:n" linspace (n points, inclusive) or comma-separated list.
std::vector<double> parse_axis_values(const std::string& text) {
  const std::string t = trim(text);
  if (t.find(':') != std::string::npos) {
    std::istringstream is(t);
    std::string a, b, n;
    std::getline(is, a, ':');
    std::getline(is, b, ':');
    std::getline(is, n, ':');
    const double lo = parse_value(a), hi = parse_value(b);
    const int count = std::stoi(trim(n));
    if (count < 1) throw std::invalid_argument("axis: count must be >= 1");
    std::vector<double> values(count);
    for (int i = 0; i < count; ++i)
      values[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return values;
  }
  std::vector<double> values;
  std::istringstream is(t);
  std::string item;
  while (std::getline(is, item, ',')) values.push_back(parse_value(item));
  return values;
}

}  // namespace

SweepSpec parse_config(std::istream& in) {
  SweepSpec spec;
  spec.observables.clear();
  DisorderSpec disorder;
  bool has_disorder = false;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "n_atoms" || key == "n") spec.base.n_atoms = std::stoi(value);
    else if (key == "j0") spec.base.j0 = parse_value(value);
    else if (key == "phi") spec.base.phi = parse_value(value);
    else if (key == "spacing" || key == "d") spec.base.spacing = parse_value(value);
    else if (key == "gamma0") spec.base.gamma0 = parse_value(value);
    else if (key == "delta_omega") {
      if (value == "edge") spec.detuning_mode = DetuningMode::edge;
      else {
        spec.detuning_mode = DetuningMode::fixed;
        spec.detuning = parse_value(value);
      }
    } else if (key == "observables") {
      std::istringstream is(value);
      std::string item;
      while (std::getline(is, item, ',')) spec.observables.push_back(trim(item));
    } else if (key.rfind("axis.", 0) == 0) {
      spec.axes.push_back({key.substr(5), parse_axis_values(value)});
    } else if (key == "disorder.coupling_amplitude") {
      disorder.coupling_amplitude = parse_value(value);
      has_disorder = true;
    } else if (key == "disorder.position_amplitude") {
      disorder.position_amplitude = parse_value(value);
      has_disorder = true;
    } else if (key == "disorder.seed") {
      disorder.seed = std::stoull(value);
      has_disorder = true;
    } else if (key == "disorder.n_samples") {
      disorder.n_samples = std::stoi(value);
      has_disorder = true;
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
  }
  if (spec.observables.empty()) spec.observables = {"amplitudes"};
  if (has_disorder) spec.disorder = disorder;
  spec.validate();
  return spec;
}

SweepSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  return parse_config(in);
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["engine_version"] = engine_version;
  j["seed"] = seed;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace sshwg
