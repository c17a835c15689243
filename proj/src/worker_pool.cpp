#include "su/worker_pool.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <utility>

#if defined(__linux__)
#include <pthread.h>
#include <sched.h>
#endif

namespace su {

WorkerPool::WorkerPool(std::size_t threads, bool pin)
    : size_(threads == 0 ? 1 : threads),
      start_(static_cast<std::ptrdiff_t>(size_)),
      done_(static_cast<std::ptrdiff_t>(size_)) {
  if (pin) pin_current_thread(0);
  threads_.reserve(size_ - 1);
  for (std::size_t id = 1; id < size_; ++id) {
    threads_.emplace_back([this, id, pin] {
      if (pin) pin_current_thread(id);
      worker_loop(id);
    });
  }
}

WorkerPool::~WorkerPool() {
  stop_ = true;
  start_.arrive_and_wait();
  for (auto& t : threads_) t.join();
}

void WorkerPool::invoke(std::size_t id) {
  try {
    (*task_)(id);
  } catch (...) {
    std::lock_guard lock(error_mutex_);
    if (!error_) error_ = std::current_exception();
  }
}

void WorkerPool::worker_loop(std::size_t id) {
  for (;;) {
    start_.arrive_and_wait();
    if (stop_) return;
    invoke(id);
    done_.arrive_and_wait();
  }
}

void WorkerPool::run(const std::function<void(std::size_t)>& task) {
  task_ = &task;
  error_ = nullptr;
  start_.arrive_and_wait();
  invoke(0);
  done_.arrive_and_wait();
  task_ = nullptr;
  if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
}

bool pin_current_thread(std::size_t cpu) {
#if defined(__linux__)
  const auto hw = std::thread::hardware_concurrency();
  if (hw == 0) return false;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu % hw, &set);
  return pthread_setaffinity_np(pthread_self(), sizeof(set), &set) == 0;
#else
  (void)cpu;
  return false;
#endif
}

std::size_t physical_core_count() {
  std::set<std::pair<std::string, std::string>> cores;
  std::ifstream in("/proc/cpuinfo");
  std::string line, physical_id = "0";
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const auto key = line.substr(0, line.find_last_not_of(" \t", colon - 1) + 1);
    const auto value = line.substr(line.find_first_not_of(' ', colon + 1) == std::string::npos
                                       ? line.size()
                                       : line.find_first_not_of(' ', colon + 1));
    if (key == "physical id") physical_id = value;
    if (key == "core id") cores.emplace(physical_id, value);
  }
  // The cgroup/affinity mask can hide cores that /proc/cpuinfo lists.
  std::size_t usable = std::thread::hardware_concurrency();
#if defined(__linux__)
  cpu_set_t set;
  if (sched_getaffinity(0, sizeof(set), &set) == 0) usable = static_cast<std::size_t>(CPU_COUNT(&set));
#endif
  const std::size_t physical = cores.empty() ? usable : cores.size();
  return std::min(physical, usable == 0 ? physical : usable);
}

}  // namespace su
