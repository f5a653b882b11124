#include "gli/common.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace gli {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::cell_negative: return "CellNegative";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_subset: return "EmptySubset";
    case Errc::link_out_of_range: return "LinkOutOfRange";
    case Errc::too_few_nodes: return "TooFewNodes";
    case Errc::layer_mismatch: return "LayerMismatch";
    case Errc::degenerate_marginal: return "DegenerateMarginal";
    case Errc::inconsistent_marginals: return "InconsistentMarginals";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::not_psd: return "NotPSD";
    case Errc::unknown_scenario: return "UnknownScenario";
    case Errc::no_truth_available: return "NoTruthAvailable";
    case Errc::parse_error: return "ParseError";
    case Errc::domain_error: return "DomainError";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
  }
  return "Error";
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(root);
  for (std::uint64_t v : path) s = splitmix64(s ^ (v + 0x9e3779b97f4a7c15ull));
  return s;
}

int default_threads() {
  if (const char* env = std::getenv("GLI_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  int t = std::max(1, threads);
  t = static_cast<int>(std::min<std::size_t>(t, count));
  if (t == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t i = static_cast<std::size_t>(w); i < count; i += t) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string subset_name(unsigned mask, int d) {
  std::string out;
  for (int l = 0; l < d; ++l)
    if (mask >> l & 1u) out += static_cast<char>('1' + l);
  return out;
}

unsigned subset_from_name(const std::string& name, int d) {
  unsigned mask = 0;
  for (char c : name) {
    int l = c - '1';
    if (l < 0 || l >= d) fail(Errc::parse_error, "bad subset name '" + name + "'");
    mask |= 1u << l;
  }
  return mask;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gli
