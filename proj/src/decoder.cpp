#include "pathenc/decoder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include <fftw3.h>

#include "pathenc/error.hpp"

namespace pathenc {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw Error(ErrorKind::ShapeMismatch, "sample count must be a power of two");
  }
  int e = 0;
  while ((std::size_t{1} << e) < n) ++e;
  return e;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  const std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

void check_state(int state, int dimension) {
  if (state < 0 || state >= dimension) {
    throw Error(ErrorKind::DimensionMismatch, "state index " + std::to_string(state + 1) + " out of range");
  }
}

struct Traversal {
  std::size_t edge;
  bool forward;
};

Traversal traverse(const HamiltonianGraph& graph, int from, int to) {
  auto idx = graph.edge_index(from, to);
  if (from == to || !idx) {
    throw Error(ErrorKind::InvalidTransition,
                "no transition between states " + std::to_string(from + 1) + " and " + std::to_string(to + 1));
  }
  return {*idx, from < to};
}

}  // namespace

AmplitudeTable::AmplitudeTable(std::vector<Complex> bins, bool hermitian, int initial, int final)
    : bins_(std::move(bins)), hermitian_(hermitian), exponent_(log2_exact(bins_.size())),
      initial_(initial), final_(final) {}

std::int64_t AmplitudeTable::frequency_of_bin(std::size_t bin) const {
  const auto m = static_cast<std::int64_t>(bin);
  const auto n = static_cast<std::int64_t>(bins_.size());
  if (hermitian_ && 2 * m >= n) return m - n;
  return m;
}

std::size_t AmplitudeTable::bin_of_frequency(std::int64_t m) const {
  return static_cast<std::size_t>(floor_mod(m, static_cast<std::int64_t>(bins_.size())));
}

Complex AmplitudeTable::total() const {
  Complex sum{0.0, 0.0};
  for (const Complex& c : bins_) sum += c;
  return sum;
}

std::vector<Complex> AmplitudeTable::reconstruct() const {
  const std::size_t n = bins_.size();
  std::vector<Complex> out(n);
  std::vector<Complex> in = bins_;
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

AmplitudeTable spectrum_from_samples(const std::vector<Complex>& samples, bool hermitian, int initial,
                                     int final) {
  const std::size_t n = samples.size();
  log2_exact(n);
  std::vector<Complex> in = samples;
  std::vector<Complex> out(n);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (Complex& c : out) c *= scale;
  return AmplitudeTable(std::move(out), hermitian, initial, final);
}

std::vector<Complex> sample_transition(const QuantumSystem& system, const ControlField& field,
                                       const EncodingScheme& scheme, int a, int b, unsigned workers) {
  check_state(a, system.dimension());
  check_state(b, system.dimension());
  if (!(scheme.graph() == build_graph(system))) {
    throw Error(ErrorKind::SchemeSystemMismatch, "encoding scheme was built for a different graph");
  }
  const std::uint64_t count = scheme.sample_count();
  std::vector<Complex> samples(count);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, count));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      for (std::uint64_t j = next++; j < count; j = next++) {
        const auto dipoles = modulated_dipoles_at(system, scheme, j);
        samples[j] = propagate_state(system, field, a, dipoles)(b);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
  }
  if (failure) std::rethrow_exception(failure);
  return samples;
}

AmplitudeTable extract_spectrum(const QuantumSystem& system, const ControlField& field,
                                const EncodingScheme& scheme, int a, int b, unsigned workers) {
  return spectrum_from_samples(sample_transition(system, field, scheme, a, b, workers), scheme.hermitian(), a, b);
}

Signature decompose_nonhermitian(std::int64_t m, int base, int slots) {
  if (base < 2) throw Error(ErrorKind::InvalidBase, "base must be >= 2");
  if (m < 0) throw Error(ErrorKind::OutOfDomain, "non-Hermitian frequency must be non-negative");
  Signature sig{std::vector<std::int64_t>(static_cast<std::size_t>(slots), 0), false};
  std::int64_t d = m;
  for (int k = 0; k < slots; ++k) {
    sig.digits[static_cast<std::size_t>(k)] = d % base;
    d = (d - sig.digits[static_cast<std::size_t>(k)]) / base;
  }
  if (d != 0) {
    throw Error(ErrorKind::OutOfDomain, std::to_string(m) + " does not fit in " + std::to_string(slots) +
                                            " base-" + std::to_string(base) + " digits");
  }
  return sig;
}

Signature decompose_hermitian(std::int64_t m, int base, int slots) {
  if (base < 3) throw Error(ErrorKind::InvalidBase, "Hermitian base must be an odd integer >= 3");
  if (base % 2 == 0) throw Error(ErrorKind::EvenBase, "balanced digits need an odd base");
  __int128 d = 1;
  for (int k = 0; k < slots; ++k) d *= base;
  d += m;
  Signature sig{std::vector<std::int64_t>(static_cast<std::size_t>(slots), 0), true};
  for (int k = 0; k < slots; ++k) {
    __int128 r = d % base;
    if (r < 0) r += base;
    const auto digit = static_cast<std::int64_t>(r < (base + 1) / 2 ? r : r - base);
    sig.digits[static_cast<std::size_t>(k)] = digit;
    d = (d - digit) / base;
  }
  if (d != 1) {
    throw Error(ErrorKind::OutOfDomain, std::to_string(m) + " has no " + std::to_string(slots) +
                                            "-digit balanced base-" + std::to_string(base) + " form");
  }
  return sig;
}

Signature decompose(const EncodingScheme& scheme, std::int64_t m) {
  const int slots = static_cast<int>(scheme.slot_count());
  return scheme.hermitian() ? decompose_hermitian(m, scheme.base(), slots)
                            : decompose_nonhermitian(m, scheme.base(), slots);
}

std::int64_t recompose(const Signature& signature, int base) {
  if (base < 2) throw Error(ErrorKind::InvalidBase, "base must be >= 2");
  const std::int64_t half = (base - 1) / 2;
  __int128 total = 0;
  __int128 weight = 1;
  for (std::int64_t digit : signature.digits) {
    const bool ok = signature.hermitian ? (digit >= -half && digit <= half && base % 2 == 1)
                                        : (digit >= 0 && digit < base);
    if (!ok) {
      throw Error(ErrorKind::DigitOutOfRange, "digit " + std::to_string(digit) + " out of range for base " +
                                                  std::to_string(base));
    }
    total += weight * digit;
    weight *= base;
  }
  return static_cast<std::int64_t>(total);
}

std::int64_t pathway_frequency(const EncodingScheme& scheme, const Pathway& pathway) {
  std::int64_t m = 0;
  for (std::size_t k = 1; k < pathway.states.size(); ++k) {
    const auto t = traverse(scheme.graph(), pathway.states[k - 1], pathway.states[k]);
    m += t.forward ? scheme.forward_weight(t.edge) : scheme.backward_weight(t.edge);
  }
  return m;
}

Signature pathway_signature(const EncodingScheme& scheme, const Pathway& pathway) {
  Signature sig{std::vector<std::int64_t>(scheme.slot_count(), 0), scheme.hermitian()};
  for (std::size_t k = 1; k < pathway.states.size(); ++k) {
    const auto t = traverse(scheme.graph(), pathway.states[k - 1], pathway.states[k]);
    if (scheme.hermitian()) {
      const int slot = scheme.forward_slot(t.edge);
      if (slot >= 0) sig.digits[static_cast<std::size_t>(slot)] += t.forward ? 1 : -1;
    } else {
      const int slot = t.forward ? scheme.forward_slot(t.edge) : scheme.backward_slot(t.edge);
      if (slot >= 0) sig.digits[static_cast<std::size_t>(slot)] += 1;
    }
  }
  return sig;
}

Chain full_signature(const HamiltonianGraph& graph, const Pathway& pathway) {
  Chain chain{std::vector<std::int64_t>(graph.edge_count(), 0)};
  for (std::size_t k = 1; k < pathway.states.size(); ++k) {
    const auto t = traverse(graph, pathway.states[k - 1], pathway.states[k]);
    chain.coefficients[t.edge] += t.forward ? 1 : -1;
  }
  return chain;
}

Chain arc_signature(const HamiltonianGraph& graph, const Pathway& pathway) {
  Chain chain{std::vector<std::int64_t>(2 * graph.edge_count(), 0)};
  for (std::size_t k = 1; k < pathway.states.size(); ++k) {
    const auto t = traverse(graph, pathway.states[k - 1], pathway.states[k]);
    chain.coefficients[t.forward ? t.edge : graph.edge_count() + t.edge] += 1;
  }
  return chain;
}

Chain expand_signature(const Signature& ohps, const HamiltonianGraph& graph, const SpanningTree& tree, int a,
                       int b) {
  if (!ohps.hermitian) throw Error(ErrorKind::ModeMismatch, "signature expansion needs a Hermitian signature");
  const auto cotree = non_tree_edges(graph, tree);
  if (ohps.digits.size() != cotree.size()) {
    throw Error(ErrorKind::ModeMismatch, "signature length " + std::to_string(ohps.digits.size()) +
                                             " does not match " + std::to_string(cotree.size()) +
                                             " non-tree edges");
  }
  Chain chain = tree_path_chain(graph, tree, a, b);
  for (std::size_t k = 0; k < cotree.size(); ++k) {
    if (ohps.digits[k] == 0) continue;
    const Chain cycle = fundamental_cycle(graph, tree, cotree[k]);
    for (std::size_t e = 0; e < chain.coefficients.size(); ++e) {
      chain.coefficients[e] += ohps.digits[k] * cycle.coefficients[e];
    }
  }
  return chain;
}

Signature induced_hermitian(const EncodingScheme& scheme, const Signature& signature) {
  if (scheme.hermitian() || signature.hermitian) {
    throw Error(ErrorKind::ModeMismatch, "induced Hermitian signatures need a non-Hermitian scheme");
  }
  if (signature.digits.size() != scheme.slot_count()) {
    throw Error(ErrorKind::ModeMismatch, "signature length does not match the scheme");
  }
  Signature out{{}, true};
  for (std::size_t e : non_tree_edges(scheme.graph(), scheme.tree())) {
    const int fwd = scheme.forward_slot(e);
    const int bwd = scheme.backward_slot(e);
    if (fwd < 0 || bwd < 0) throw Error(ErrorKind::ModeMismatch, "non-tree arc is not encoded");
    out.digits.push_back(signature.digits[static_cast<std::size_t>(fwd)] -
                         signature.digits[static_cast<std::size_t>(bwd)]);
  }
  return out;
}

TranslationMap build_translation_map(const EncodingScheme& scheme, int a, int l_max, std::size_t cap) {
  const HamiltonianGraph& graph = scheme.graph();
  check_state(a, graph.vertex_count());
  const bool no_flops = scheme.hermitian();
  TranslationMap map;
  std::vector<Pathway> level{Pathway{{a}}};
  std::size_t visited = 0;
  for (int order = 1; order <= l_max && !level.empty(); ++order) {
    std::vector<Pathway> next;
    for (const Pathway& p : level) {
      const int last = p.states.back();
      const int before = p.states.size() >= 2 ? p.states[p.states.size() - 2] : -1;
      for (int w : graph.neighbors(last)) {
        if (no_flops && w == before) continue;
        if (++visited > cap) {
          throw Error(ErrorKind::EnumerationOverflow, "more than " + std::to_string(cap) + " pathways");
        }
        Pathway q = p;
        q.states.push_back(w);
        map.try_emplace({w, pathway_frequency(scheme, q)}, q);
        next.push_back(std::move(q));
      }
    }
    level = std::move(next);
  }
  return map;
}

std::vector<ClassAmplitude> significant(const AmplitudeTable& table, double epsilon_abs) {
  std::vector<ClassAmplitude> out;
  for (std::size_t bin = 0; bin < table.size(); ++bin) {
    const Complex amp = table.bins()[bin];
    if (epsilon_abs > 0.0 && !(std::abs(amp) > epsilon_abs)) continue;
    out.push_back({table.frequency_of_bin(bin), std::abs(amp) < kReportFloor ? Complex{} : amp});
  }
  std::stable_sort(out.begin(), out.end(), [](const ClassAmplitude& x, const ClassAmplitude& y) {
    const double ax = std::abs(x.amplitude);
    const double ay = std::abs(y.amplitude);
    if (ax != ay) return ax > ay;
    return x.m < y.m;
  });
  return out;
}

Validation self_validating(const AmplitudeTable& table, const EncodingScheme& scheme, double epsilon_abs) {
  Validation v;
  const std::int64_t extreme = scheme.hermitian() ? (scheme.base() - 1) / 2 : scheme.base() - 1;
  for (const ClassAmplitude& entry : significant(table, epsilon_abs)) {
    bool bad = false;
    try {
      const Signature sig = decompose(scheme, entry.m);
      bad = std::any_of(sig.digits.begin(), sig.digits.end(),
                        [&](std::int64_t n) { return (n < 0 ? -n : n) >= extreme; });
    } catch (const Error&) {
      bad = true;
    }
    if (bad) v.offending.push_back(entry.m);
  }
  v.self_validating = v.offending.empty();
  return v;
}

}  // namespace pathenc
