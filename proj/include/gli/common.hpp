#pragma once

// Shared plumbing: error reporting, deterministic RNG streams, thread helpers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

namespace gli {

inline constexpr const char* kArtifactVersion = "gli/1.0";

// Full joint systems carry 2^d cells; refuse anything bigger.
inline constexpr int kMaxLayers = 6;

enum class Errc {
  cell_negative,
  dimension_mismatch,
  empty_subset,
  link_out_of_range,
  too_few_nodes,
  layer_mismatch,
  degenerate_marginal,
  inconsistent_marginals,
  not_symmetric,
  no_convergence,
  not_psd,
  unknown_scenario,
  no_truth_available,
  parse_error,
  domain_error,
  invalid_argument,
  io_error,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, bool validation = true)
      : std::runtime_error(what), code_(code), validation_(validation) {}
  Errc code() const { return code_; }
  // Validation errors map to CLI exit code 2, runtime failures to 1.
  bool is_validation() const { return validation_; }

 private:
  Errc code_;
  bool validation_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg, bool validation = true) {
  throw Error(c, std::string(errc_name(c)) + ": " + msg, validation);
}

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent stream seed from a root seed and a path of tags
// (layer index, purpose, trial, ...). Adding a new layer or purpose never
// perturbs draws of existing streams.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

// Deterministic uniform generator. The raw engine output is standardized by
// the C++ spec, and the double conversion below is explicit, so sequences are
// reproducible across platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed ^ 0x6a09e667f3bcc908ull)) {}

  std::uint64_t next() { return eng_(); }

  // Uniform strictly inside (0,1).
  double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

// Compensated accumulator for long quadrature sums.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

int default_threads();

// Runs body(i) for i in [0, count). Iteration-to-thread assignment is static,
// so results written to per-index slots are deterministic.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

// Subset masks use bit l for layer l+1. Printable form lists 1-based layer
// indices, e.g. mask 0b101 over d=3 -> "13".
std::string subset_name(unsigned mask, int d);
unsigned subset_from_name(const std::string& name, int d);

// FNV-1a over a string; used for config/provenance hashes.
std::string fnv1a_hex(const std::string& data);

}  // namespace gli
