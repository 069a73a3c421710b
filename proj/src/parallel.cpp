#include "hclim/parallel.hpp"

#include <atomic>

namespace hclim {
namespace {

std::atomic<std::size_t> g_workers{0};

}  // namespace

std::size_t worker_count() {
  const std::size_t requested = g_workers.load();
  if (requested != 0) return requested;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t workers) { g_workers.store(workers); }

}  // namespace hclim
