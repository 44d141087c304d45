#include "tripletsim/grid.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "tripletsim/errors.hpp"

namespace tripletsim {

KGrid KGrid::make(Band band, const BandSpec& spec, double linewidth, int n, double span) {
  if (n < 8) throw DomainError("k-grid needs at least 8 points");
  if (!(span > 0.0)) throw DomainError("k-grid span must be positive");
  if (!(linewidth > 0.0)) throw DomainError("k-grid linewidth must be positive");
  KGrid g;
  g.band = band;
  g.n = n;
  g.span = span;
  g.linewidth = linewidth;
  g.reference_wavenumber = spec.reference_wavenumber;
  g.group_velocity = spec.group_velocity;
  g.x.resize(n);
  g.k.resize(n);
  g.detuning.resize(n);
  g.weight.resize(n);
  const double hx = 2.0 * span / (n - 1);
  const double dk = hx * linewidth / spec.group_velocity;
  for (int i = 0; i < n; ++i) {
    g.x[i] = -span + i * hx;
    g.detuning[i] = g.x[i] * linewidth;
    g.k[i] = spec.reference_wavenumber + g.detuning[i] / spec.group_velocity;
    g.weight[i] = (i == 0 || i == n - 1) ? 0.5 * dk : dk;
  }
  return g;
}

Quadrature Quadrature::trapezoid(double lo, double hi, int n) {
  if (n < 2 || !(hi > lo)) throw DomainError("quadrature needs n >= 2 and hi > lo");
  Quadrature q;
  q.node.resize(n);
  q.weight.resize(n);
  const double h = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    q.node[i] = lo + i * h;
    q.weight[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  return q;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 16) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tripletsim
