// Sweep orchestration: Cartesian grids over the physical parameters, CSV
// output in deterministic axis-major order, optional disorder averaging, and
// the canned figure-data commands. This is the only module with I/O side
// effects.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sshwg/model.hpp"
#include "sshwg/types.hpp"

namespace sshwg {

// Detuning handling for amplitude observables: a fixed value, or the
// (possibly Gamma0-dependent) edge resonance.
enum class DetuningMode { fixed, edge };

struct SweepAxis {
  std::string name;  // one of: d, j0, phi, n_atoms, gamma0, delta_omega
  std::vector<double> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  SystemParams base;
  double detuning = 0.0;
  DetuningMode detuning_mode = DetuningMode::fixed;
  // Observables: "amplitudes" (t, r, T, R, eta per direction), "delta_R",
  // "beta". Rows always carry both directions.
  std::vector<std::string> observables{"amplitudes"};
  std::optional<DisorderSpec> disorder;  // ensemble means when present

  void validate() const;
  // Canonical serialization; hashing it keys the manifest.
  std::string canonical_text() const;
};

struct RunManifest {
  std::string config_hash;
  std::string engine_version;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;

  std::string to_json() const;
};

// Stream the full Cartesian product to `csv_path`. Grid points are evaluated
// by a worker pool but written strictly in axis-major order (last axis
// fastest, direction innermost), so output bytes do not depend on the worker
// count. Per-point failures land in the final `error` column and never abort
// the sweep.
RunManifest run_sweep(const SweepSpec& spec, const std::string& csv_path,
                      int workers);

// Parse the flat key = value config format (see README) into a SweepSpec.
SweepSpec parse_config(std::istream& in);
SweepSpec parse_config_file(const std::string& path);

// Worker count: explicit argument if > 0, else SSHWG_WORKERS, else hardware
// concurrency.
int resolve_workers(int requested);

// Evaluate fn(i) for i in [0, n) on `workers` threads; results are indexed,
// so downstream ordering is deterministic.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

std::string fnv1a_hex(const std::string& text);
std::string iso_timestamp_now();

// Formats a double with enough digits to round-trip, for byte-stable CSV.
std::string fmt_g17(double v);

}  // namespace sshwg
