#include "qlattice/runtime.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

#include <Eigen/QR>

namespace qlat {

namespace {
std::atomic<int> g_threads{0};  // 0 = not set explicitly

int env_threads() {
  const char* env = std::getenv("QLATTICE_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return v >= 1 ? v : 1;
}
}  // namespace

int thread_count() {
  int t = g_threads.load(std::memory_order_relaxed);
  return t >= 1 ? t : env_threads();
}

void set_thread_count(int threads) {
  g_threads.store(threads >= 1 ? threads : 1, std::memory_order_relaxed);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  int workers = thread_count();
  if (workers <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = cursor.fetch_add(1, std::memory_order_relaxed);
      if (k >= count) return;
      fn(k);
    }
  };
  std::vector<std::thread> pool;
  std::size_t spawn = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

Cplx random_complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  double re = dist(rng);
  double im = dist(rng);
  return {re, im};
}

Vec random_complex_vector(Index size, std::mt19937_64& rng) {
  Vec v(size);
  for (Index k = 0; k < size; ++k) v(k) = random_complex_gaussian(rng);
  return v;
}

Mat random_unitary(int n, std::mt19937_64& rng) {
  Mat g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = random_complex_gaussian(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < n; ++k) {
    Cplx d = r(k, k);
    double a = std::abs(d);
    q.col(k) *= a > 0 ? d / a : Cplx(1.0);
  }
  return q;
}

}  // namespace qlat
